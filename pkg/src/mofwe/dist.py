"""Flexible Weibull extension (FWE) and its Marshall-Olkin extension (MO-FWE).

Every function here is a pure function of ``x`` and an immutable parameter
record. ``x`` may be a float or an array; floats come back as floats.

All formulas are written in terms of the link ``u = alpha*x - beta/x``,
``z = exp(u)`` and the baseline survival ``s = exp(-z)``. Products such as
``z * s`` are evaluated as ``exp(u - z)`` so that the upper tail never forms
``inf * 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError

# Beyond this link value exp(-exp(link)) is exactly 0.0 in double precision.
LINK_TAIL_THRESHOLD = 30.0


def _check_positive(name, value):
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise ParameterError(f"{name} must be a finite positive number, got {value!r}")
    return value


@dataclass(frozen=True)
class FweParams:
    """Parameters of the two-parameter flexible Weibull extension."""

    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_positive("alpha", self.alpha))
        object.__setattr__(self, "beta", _check_positive("beta", self.beta))

    def as_tuple(self):
        return (self.alpha, self.beta)


@dataclass(frozen=True)
class MoFweParams:
    """Parameters ``(alpha, beta, theta)`` of the MO-FWE distribution.

    ``theta`` is the Marshall-Olkin tilt; ``theta == 1`` gives back the
    baseline FWE. ``theta_bar = 1 - theta`` is always derived, never stored.
    """

    alpha: float
    beta: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_positive("alpha", self.alpha))
        object.__setattr__(self, "beta", _check_positive("beta", self.beta))
        object.__setattr__(self, "theta", _check_positive("theta", self.theta))

    @property
    def theta_bar(self):
        return 1.0 - self.theta

    @property
    def baseline(self):
        return FweParams(self.alpha, self.beta)

    def as_tuple(self):
        return (self.alpha, self.beta, self.theta)


def as_mofwe_params(p):
    """Coerce a ``MoFweParams`` or a 3-sequence into ``MoFweParams``."""
    if isinstance(p, MoFweParams):
        return p
    return MoFweParams(*p)


def as_fwe_params(p):
    if isinstance(p, FweParams):
        return p
    if isinstance(p, MoFweParams):
        return p.baseline
    return FweParams(*p)


def _positive_x(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(arr > 0.0):
        bad = arr[~(arr > 0.0)].ravel()[0] if arr.ndim else arr
        raise DomainError(f"x must be > 0, got {float(bad)!r}")
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return float(arr) if scalar else arr


def _pieces(x, alpha, beta):
    """Return ``(u, z, log_zs, c)`` for the FWE link at ``x``.

    ``c = alpha + beta/x**2`` is du/dx and ``log_zs = log(z * exp(-z))``.
    """
    u = alpha * x - beta / x
    with np.errstate(over="ignore"):
        z = np.exp(u)
    log_zs = u - z
    c = alpha + beta / (x * x)
    return u, z, log_zs, c


def fwe_link(x, p):
    """The link ``alpha*x - beta/x``; strictly increasing in ``x``."""
    p = as_fwe_params(p)
    arr, scalar = _positive_x(x)
    return _ret(p.alpha * arr - p.beta / arr, scalar)


# --------------------------------------------------------------------------
# baseline FWE


def fwe_cdf(x, p):
    p = as_fwe_params(p)
    arr, scalar = _positive_x(x)
    _, z, _, _ = _pieces(arr, p.alpha, p.beta)
    return _ret(-np.expm1(-z), scalar)


def fwe_sf(x, p):
    p = as_fwe_params(p)
    arr, scalar = _positive_x(x)
    _, z, _, _ = _pieces(arr, p.alpha, p.beta)
    return _ret(np.exp(-z), scalar)


def fwe_pdf(x, p):
    p = as_fwe_params(p)
    arr, scalar = _positive_x(x)
    _, _, log_zs, c = _pieces(arr, p.alpha, p.beta)
    return _ret(c * np.exp(log_zs), scalar)


def fwe_log_pdf(x, p):
    p = as_fwe_params(p)
    arr, scalar = _positive_x(x)
    _, _, log_zs, c = _pieces(arr, p.alpha, p.beta)
    return _ret(np.log(c) + log_zs, scalar)


def fwe_hazard(x, p):
    """``(alpha + beta/x**2) * exp(link)``, used directly rather than pdf/sf."""
    p = as_fwe_params(p)
    arr, scalar = _positive_x(x)
    _, z, _, c = _pieces(arr, p.alpha, p.beta)
    return _ret(c * z, scalar)


def _z_over_expm1(z):
    # z / (e^z - 1) == z e^{-z} / (1 - e^{-z}), with limits 1 at z=0 and 0 at z=inf
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        out = z / np.expm1(z)
    out = np.where(z == 0.0, 1.0, out)
    return np.where(np.isinf(z), 0.0, out)


def fwe_reversed_hazard(x, p):
    p = as_fwe_params(p)
    arr, scalar = _positive_x(x)
    _, z, _, c = _pieces(arr, p.alpha, p.beta)
    return _ret(c * _z_over_expm1(z), scalar)


def fwe_cumulative_hazard(x, p):
    p = as_fwe_params(p)
    arr, scalar = _positive_x(x)
    _, z, _, _ = _pieces(arr, p.alpha, p.beta)
    return _ret(z, scalar)


def fwe_quantile(q, p):
    """Closed-form FWE quantile; see :func:`mofwe.properties.quantile`."""
    from .properties import quantile

    p = as_fwe_params(p)
    return quantile(q, MoFweParams(p.alpha, p.beta, 1.0))


# --------------------------------------------------------------------------
# MO-FWE


def _mo_pieces(x, p):
    u, z, log_zs, c = _pieces(x, p.alpha, p.beta)
    s = np.exp(-z)
    g = -np.expm1(-z)
    # D = 1 - (1-theta) s. When (1-theta) s is near 1 the equivalent sum
    # g + theta s avoids the cancellation; elsewhere log1p stays exact,
    # including theta == 1 and s underflowing to 0.
    ts = p.theta_bar * s
    near = ts > 0.5
    denom = np.where(near, g + p.theta * s, 1.0 - ts)
    log_denom = np.where(near, np.log(denom), np.log1p(-np.where(near, 0.0, ts)))
    return u, z, log_zs, c, s, g, denom, log_denom


def mofwe_cdf(x, p):
    p = as_mofwe_params(p)
    arr, scalar = _positive_x(x)
    _, _, _, _, _, g, denom, _ = _mo_pieces(arr, p)
    return _ret(g / denom, scalar)


def mofwe_sf(x, p):
    p = as_mofwe_params(p)
    arr, scalar = _positive_x(x)
    _, _, _, _, s, _, denom, _ = _mo_pieces(arr, p)
    return _ret(p.theta * s / denom, scalar)


def mofwe_pdf(x, p):
    p = as_mofwe_params(p)
    arr, scalar = _positive_x(x)
    _, _, log_zs, c, _, _, denom, _ = _mo_pieces(arr, p)
    return _ret(p.theta * c * np.exp(log_zs) / (denom * denom), scalar)


def mofwe_log_pdf(x, p):
    """Log-density, finite wherever ``exp(link)`` is representable.

    Never forms ``exp(exp(link))``; once the link exceeds
    ``LINK_TAIL_THRESHOLD`` the squared denominator contributes exactly 0.
    """
    p = as_mofwe_params(p)
    arr, scalar = _positive_x(x)
    _, _, log_zs, c, _, _, _, log_denom = _mo_pieces(arr, p)
    out = math.log(p.theta) + np.log(c) + log_zs - 2.0 * log_denom
    return _ret(out, scalar)


def mofwe_pdf_extended(x, p):
    """Density on the whole real line (0 for ``x <= 0``) for generic integrators."""
    arr = np.asarray(x, dtype=float)
    pos = arr > 0.0
    out = np.zeros_like(arr)
    if np.any(pos):
        out[pos] = mofwe_pdf(arr[pos], p)
    return float(out) if arr.ndim == 0 else out


def _log_denom_over_theta(g, p):
    # D / theta = 1 + ((1-theta)/theta) g, free of the log(D) - log(theta) cancellation
    return np.log1p(p.theta_bar / p.theta * g)


def mofwe_log_sf(x, p):
    p = as_mofwe_params(p)
    arr, scalar = _positive_x(x)
    _, z, _, _, _, g, _, _ = _mo_pieces(arr, p)
    return _ret(-z - _log_denom_over_theta(g, p), scalar)


def mofwe_log_cdf(x, p):
    p = as_mofwe_params(p)
    arr, scalar = _positive_x(x)
    _, _, _, _, _, g, _, log_denom = _mo_pieces(arr, p)
    with np.errstate(divide="ignore"):
        return _ret(np.log(g) - log_denom, scalar)


def mofwe_hazard(x, p):
    """Closed form ``c * exp(link) / (1 - (1-theta) s)``; no pdf/sf division."""
    p = as_mofwe_params(p)
    arr, scalar = _positive_x(x)
    _, z, _, c, _, _, denom, _ = _mo_pieces(arr, p)
    return _ret(c * z / denom, scalar)


def mofwe_reversed_hazard(x, p):
    p = as_mofwe_params(p)
    arr, scalar = _positive_x(x)
    _, z, _, c, _, _, denom, _ = _mo_pieces(arr, p)
    return _ret(p.theta * c * _z_over_expm1(z) / denom, scalar)


def mofwe_cumulative_hazard(x, p):
    """``-log(sf)`` evaluated as ``exp(link) + log1p((1-theta)/theta * G)``."""
    p = as_mofwe_params(p)
    arr, scalar = _positive_x(x)
    _, z, _, _, _, g, _, _ = _mo_pieces(arr, p)
    return _ret(z + _log_denom_over_theta(g, p), scalar)
