"""Lifetime-model contract, the generic Marshall-Olkin transform, and the
comparator families fitted natively.

Parameter conventions of the comparators (these are choices, documented so
that fitted values can be compared across tools):

* ``weibull``: ``F(x) = 1 - exp(-(alpha x)**beta)`` (alpha is a rate, beta the shape)
* ``lfr``:     ``F(x) = 1 - exp(-a x - b x**2 / 2)`` (linear failure rate ``a + b x``)
* ``fwe``:     ``F(x) = 1 - exp(-exp(alpha x - beta/x))``
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from . import dist, likelihood
from .errors import DomainError, ParameterError


@dataclass(frozen=True)
class TiltParameter:
    """Marshall-Olkin tilt ``theta > 0``; ``theta == 1`` is the identity transform."""

    theta: float

    def __post_init__(self):
        t = float(self.theta)
        if not (math.isfinite(t) and t > 0.0):
            raise ParameterError(f"theta must be a finite positive number, got {t!r}")
        object.__setattr__(self, "theta", t)

    @property
    def theta_bar(self):
        return 1.0 - self.theta


def _tilt(theta):
    return theta if isinstance(theta, TiltParameter) else TiltParameter(theta)


@dataclass(frozen=True)
class DistributionFamily:
    """A parametric lifetime model on ``(0, inf)``.

    Only ``cdf`` and ``log_pdf`` are required. The optional callables are
    closed forms that improve accuracy or speed; generic fallbacks are used
    when they are missing. ``score`` and ``hessian`` take the whole sample
    and return derivatives of the summed log-density in natural parameters.
    """

    name: str
    param_names: tuple
    cdf_fn: Callable
    log_pdf_fn: Callable
    sf_fn: Optional[Callable] = None
    hazard_fn: Optional[Callable] = None
    quantile_fn: Optional[Callable] = None
    score_fn: Optional[Callable] = None
    hessian_fn: Optional[Callable] = None
    initial_guesses: Optional[Callable] = None
    label: str = ""
    zero_allowed: tuple = ()

    @property
    def param_count(self):
        return len(self.param_names)

    def check_params(self, params):
        params = tuple(float(v) for v in params)
        if len(params) != self.param_count:
            raise ParameterError(
                f"{self.name} takes {self.param_count} parameters "
                f"{self.param_names}, got {len(params)}"
            )
        for name, value in zip(self.param_names, params):
            ok = value >= 0.0 if name in self.zero_allowed else value > 0.0
            if not (math.isfinite(value) and ok):
                raise ParameterError(f"{self.name}: invalid {name}={value!r}")
        return params

    def cdf(self, x, params):
        return self.cdf_fn(x, self.check_params(params))

    def log_pdf(self, x, params):
        return self.log_pdf_fn(x, self.check_params(params))

    def pdf(self, x, params):
        return np.exp(self.log_pdf(x, params))

    def sf(self, x, params):
        params = self.check_params(params)
        if self.sf_fn is not None:
            return self.sf_fn(x, params)
        return 1.0 - self.cdf_fn(x, params)

    def hazard(self, x, params):
        params = self.check_params(params)
        if self.hazard_fn is not None:
            return self.hazard_fn(x, params)
        return self.pdf(x, params) / self.sf(x, params)

    def reversed_hazard(self, x, params):
        return self.pdf(x, params) / self.cdf(x, params)

    def cumulative_hazard(self, x, params):
        # -log1p(-F) keeps precision where S is close to 1
        sf = np.asarray(self.sf(x, params), dtype=float)
        cdf = np.asarray(self.cdf(x, params), dtype=float)
        with np.errstate(divide="ignore"):
            out = np.where(sf < 0.5, -np.log(sf), -np.log1p(-np.minimum(cdf, 0.5)))
        return float(out) if out.ndim == 0 else out

    def quantile(self, q, params):
        params = self.check_params(params)
        if self.quantile_fn is not None:
            return self.quantile_fn(q, params)
        return _root_quantile(self, q, params)

    def loglik(self, values, params):
        return float(np.sum(self.log_pdf(np.asarray(values, dtype=float), params)))


def _root_quantile(family, q, params):
    q_arr = np.atleast_1d(np.asarray(q, dtype=float))
    if np.any((q_arr <= 0.0) | (q_arr >= 1.0)):
        raise DomainError("quantile level must lie in (0, 1)")
    out = np.empty_like(q_arr)
    for i, qi in enumerate(q_arr):
        lo, hi = 1.0, 1.0
        while family.cdf_fn(lo, params) > qi:
            lo /= 2.0
        while family.cdf_fn(hi, params) < qi:
            hi *= 2.0
        out[i] = brentq(lambda t: family.cdf_fn(t, params) - qi, lo, hi, xtol=1e-300, rtol=1e-15)
    return float(out[0]) if np.ndim(q) == 0 else out


# --------------------------------------------------------------------------
# generic Marshall-Olkin transform


def mo_cdf(baseline, baseline_params, theta, x):
    """``G / (1 - (1-theta) S)``; equals ``G`` exactly when ``theta == 1``."""
    t = _tilt(theta)
    g = baseline.cdf(x, baseline_params)
    s = baseline.sf(x, baseline_params)
    return g / (1.0 - t.theta_bar * s)


def mo_pdf(baseline, baseline_params, theta, x):
    t = _tilt(theta)
    s = baseline.sf(x, baseline_params)
    d = 1.0 - t.theta_bar * s
    return t.theta * baseline.pdf(x, baseline_params) / (d * d)


def mo_sf(baseline, baseline_params, theta, x):
    t = _tilt(theta)
    s = baseline.sf(x, baseline_params)
    return t.theta * s / (1.0 - t.theta_bar * s)


def mo_hazard(baseline, baseline_params, theta, x):
    t = _tilt(theta)
    s = baseline.sf(x, baseline_params)
    return baseline.hazard(x, baseline_params) / (1.0 - t.theta_bar * s)


def mo_reversed_hazard(baseline, baseline_params, theta, x):
    t = _tilt(theta)
    s = baseline.sf(x, baseline_params)
    return t.theta * baseline.reversed_hazard(x, baseline_params) / (1.0 - t.theta_bar * s)


def mo_cumulative_hazard(baseline, baseline_params, theta, x):
    # -log(theta S / D) with D / theta = 1 + ((1-theta)/theta) G, reusing the baseline's own
    t = _tilt(theta)
    g = baseline.cdf(x, baseline_params)
    return baseline.cumulative_hazard(x, baseline_params) + np.log1p(t.theta_bar / t.theta * g)


def marshall_olkin(baseline):
    """Build the Marshall-Olkin extension of ``baseline`` as a new family.

    The new family has the baseline parameters followed by ``theta``. It
    has no analytic derivatives, so fitting it uses finite differences.
    """

    def split(params):
        return params[:-1], params[-1]

    def cdf_fn(x, params):
        bp, th = split(params)
        return mo_cdf(baseline, bp, th, x)

    def sf_fn(x, params):
        bp, th = split(params)
        return mo_sf(baseline, bp, th, x)

    def log_pdf_fn(x, params):
        bp, th = split(params)
        s = baseline.sf(x, bp)
        return math.log(th) + baseline.log_pdf(x, bp) - 2.0 * np.log1p(-(1.0 - th) * s)

    def hazard_fn(x, params):
        bp, th = split(params)
        return mo_hazard(baseline, bp, th, x)

    def guesses(values):
        base = baseline.initial_guesses(values) if baseline.initial_guesses else []
        return [tuple(b) + (th,) for b in base for th in (0.5, 1.0, 5.0)]

    return DistributionFamily(
        name=f"mo-{baseline.name}",
        param_names=tuple(baseline.param_names) + ("theta",),
        cdf_fn=cdf_fn,
        log_pdf_fn=log_pdf_fn,
        sf_fn=sf_fn,
        hazard_fn=hazard_fn,
        initial_guesses=guesses,
        label=f"Marshall-Olkin {baseline.label or baseline.name}",
        zero_allowed=baseline.zero_allowed,
    )


# --------------------------------------------------------------------------
# starting values


def _plotting_positions(values):
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    i = np.arange(1, n + 1)
    surv = 1.0 - (i - 0.3) / (n + 0.4)
    return x, surv


def fwe_heuristic_start(values):
    """Least-squares fit of the FWE link to ``log(-log S_hat)``.

    ``S_hat`` uses median-rank plotting positions. Non-positive
    coefficients are replaced by scale-aware fallbacks.
    """
    x, surv = _plotting_positions(values)
    y = np.log(-np.log(surv))
    design = np.column_stack([x, -1.0 / x])
    (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    a = a if a > 0 else 1.0 / x.max()
    b = b if b > 0 else 0.1 * x.min()
    return (float(a), float(b))


def _fwe_guesses(values):
    grid = [(a, b) for a in (0.01, 0.1, 1.0) for b in (0.1, 1.0, 5.0)]
    return grid + [fwe_heuristic_start(values)]


def _mofwe_guesses(values):
    grid = [(a, b, t) for a in (0.01, 0.1, 1.0) for b in (0.1, 1.0, 5.0) for t in (0.5, 1.0, 5.0)]
    return grid + [fwe_heuristic_start(values) + (1.0,)]


def _weibull_guesses(values):
    x, surv = _plotting_positions(values)
    slope, intercept = np.polyfit(np.log(x), np.log(-np.log(surv)), 1)
    rate = 1.0 / np.mean(x)
    starts = [(r * rate, k) for r in (0.5, 1.0, 2.0) for k in (0.5, 1.0, 2.0)]
    if slope > 0:
        starts.append((float(np.exp(intercept / slope)), float(slope)))
    return starts


def _lfr_guesses(values):
    m = float(np.mean(values))
    return [(a / m, b / m**2) for a in (0.5, 1.0, 2.0) for b in (0.01, 0.1, 1.0)]


# --------------------------------------------------------------------------
# closed forms for the registered families


def _weibull_cdf(x, p):
    a, k = p
    return -np.expm1(-((a * np.asarray(x, dtype=float)) ** k))


def _weibull_sf(x, p):
    a, k = p
    return np.exp(-((a * np.asarray(x, dtype=float)) ** k))


def _weibull_log_pdf(x, p):
    a, k = p
    ax = a * np.asarray(x, dtype=float)
    return math.log(k) + math.log(a) + (k - 1.0) * np.log(ax) - ax**k


def _weibull_hazard(x, p):
    a, k = p
    return k * a * (a * np.asarray(x, dtype=float)) ** (k - 1.0)


def _weibull_quantile(q, p):
    a, k = p
    q = np.asarray(q, dtype=float)
    if np.any((q <= 0.0) | (q >= 1.0)):
        raise DomainError("quantile level must lie in (0, 1)")
    out = (-np.log1p(-q)) ** (1.0 / k) / a
    return float(out) if out.ndim == 0 else out


def _weibull_score(x, p):
    a, k = p
    x = np.asarray(x, dtype=float)
    lax = np.log(a * x)
    y = np.exp(k * lax)
    return np.array([np.sum(k * (1.0 - y)) / a, np.sum(1.0 / k + lax - y * lax)])


def _lfr_cdf(x, p):
    a, b = p
    x = np.asarray(x, dtype=float)
    return -np.expm1(-(a * x + 0.5 * b * x * x))


def _lfr_sf(x, p):
    a, b = p
    x = np.asarray(x, dtype=float)
    return np.exp(-(a * x + 0.5 * b * x * x))


def _lfr_log_pdf(x, p):
    a, b = p
    x = np.asarray(x, dtype=float)
    return np.log(a + b * x) - a * x - 0.5 * b * x * x


def _lfr_hazard(x, p):
    a, b = p
    return a + b * np.asarray(x, dtype=float)


def _lfr_quantile(q, p):
    a, b = p
    q = np.asarray(q, dtype=float)
    if np.any((q <= 0.0) | (q >= 1.0)):
        raise DomainError("quantile level must lie in (0, 1)")
    big_h = -np.log1p(-q)
    out = 2.0 * big_h / (a + np.sqrt(a * a + 2.0 * b * big_h))
    return float(out) if out.ndim == 0 else out


def _lfr_score(x, p):
    a, b = p
    x = np.asarray(x, dtype=float)
    r = 1.0 / (a + b * x)
    return np.array([np.sum(r - x), np.sum(x * r - 0.5 * x * x)])


def _positive(fn):
    # registered closed forms reject x <= 0 like the dist-core functions
    def wrapped(x, p):
        arr = np.asarray(x, dtype=float)
        if not np.all(arr > 0.0):
            raise DomainError("x must be > 0")
        out = fn(arr, p)
        return float(out) if np.ndim(out) == 0 else out

    return wrapped


FWE = DistributionFamily(
    name="fwe",
    param_names=("alpha", "beta"),
    cdf_fn=lambda x, p: dist.fwe_cdf(x, p),
    log_pdf_fn=lambda x, p: dist.fwe_log_pdf(x, p),
    sf_fn=lambda x, p: dist.fwe_sf(x, p),
    hazard_fn=lambda x, p: dist.fwe_hazard(x, p),
    quantile_fn=lambda q, p: dist.fwe_quantile(q, p),
    score_fn=likelihood.fwe_gradient,
    hessian_fn=likelihood.fwe_hessian,
    initial_guesses=_fwe_guesses,
    label="Flexible Weibull extension",
)

MOFWE = DistributionFamily(
    name="mofwe",
    param_names=("alpha", "beta", "theta"),
    cdf_fn=lambda x, p: dist.mofwe_cdf(x, p),
    log_pdf_fn=lambda x, p: dist.mofwe_log_pdf(x, p),
    sf_fn=lambda x, p: dist.mofwe_sf(x, p),
    hazard_fn=lambda x, p: dist.mofwe_hazard(x, p),
    quantile_fn=lambda q, p: _mofwe_quantile(q, p),
    score_fn=likelihood.mofwe_gradient,
    hessian_fn=likelihood.mofwe_hessian,
    initial_guesses=_mofwe_guesses,
    label="Marshall-Olkin flexible Weibull extension",
)

WEIBULL = DistributionFamily(
    name="weibull",
    param_names=("alpha", "beta"),
    cdf_fn=_positive(_weibull_cdf),
    log_pdf_fn=_positive(_weibull_log_pdf),
    sf_fn=_positive(_weibull_sf),
    hazard_fn=_positive(_weibull_hazard),
    quantile_fn=_weibull_quantile,
    score_fn=_weibull_score,
    initial_guesses=_weibull_guesses,
    label="Weibull",
)

LFR = DistributionFamily(
    name="lfr",
    param_names=("a", "b"),
    cdf_fn=_positive(_lfr_cdf),
    log_pdf_fn=_positive(_lfr_log_pdf),
    sf_fn=_positive(_lfr_sf),
    hazard_fn=_positive(_lfr_hazard),
    quantile_fn=_lfr_quantile,
    score_fn=_lfr_score,
    initial_guesses=_lfr_guesses,
    label="Linear failure rate",
    # b = 0 is the exponential sub-model; fitting still keeps b > 0
    zero_allowed=("b",),
)


def _mofwe_quantile(q, p):
    from .properties import quantile

    return quantile(q, p)


FAMILIES = {f.name: f for f in (MOFWE, FWE, WEIBULL, LFR)}


def comparator_families():
    """Families fitted natively alongside MO-FWE: FWE, Weibull and LFR."""
    return [FWE, WEIBULL, LFR]


def get_family(name):
    try:
        return FAMILIES[name]
    except KeyError:
        raise DomainError(
            f"unknown family {name!r}; available: {', '.join(sorted(FAMILIES))}"
        ) from None


def family_names() -> Sequence[str]:
    return tuple(FAMILIES)
