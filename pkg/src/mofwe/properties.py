"""Quantiles, simulation, mode, shape measures, moments, MGF and order
statistics of the MO-FWE distribution.

Moments and the MGF are computed canonically by adaptive quadrature. The
closed-form triple series for the moments (and the quadruple series for the
MGF) is available through :func:`moment_series` / :func:`mgf_series`, but
only as an audited experiment: its derivation integrates ``exp(+(j+1) alpha x)``
over ``(0, inf)`` and evaluates the gamma function at non-positive integers,
so its output is always reported next to the quadrature value and never
used on its own.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import betaln, gammaln

from .dist import (
    as_mofwe_params,
    mofwe_log_cdf,
    mofwe_log_pdf,
    mofwe_log_sf,
    mofwe_pdf,
)
from .errors import (
    DomainError,
    NoInteriorModeError,
    QuadratureError,
    SeriesDivergenceError,
    SeriesDomainError,
)

# ---------------------------------------------------------------------------
# quantiles and simulation


def _check_levels(q):
    q = np.asarray(q, dtype=float)
    if not np.all((q > 0.0) & (q < 1.0)):
        raise DomainError("quantile level must lie in the open interval (0, 1)")
    return q


def k_of_q(q, theta):
    """``log(-log((1-q) / (1 - (1-theta) q)))``, strictly increasing in ``q``.

    Evaluated as ``log(-log1p(-theta q / ((1-q) + theta q)))`` so that tiny
    ``q`` keeps full relative precision.
    """
    q_arr = _check_levels(q)
    theta = float(theta)
    if not theta > 0.0:
        raise DomainError(f"theta must be positive, got {theta!r}")
    denom = (1.0 - q_arr) + theta * q_arr
    out = np.log(-np.log1p(-theta * q_arr / denom))
    return float(out) if out.ndim == 0 else out


def quantile(q, p):
    """Positive root of ``alpha x**2 - k(q) x - beta = 0``.

    The other root is negative because ``4 alpha beta > 0``. For ``k < 0`` the
    rationalised form ``2 beta / (sqrt(k**2 + 4 alpha beta) - k)`` avoids
    cancellation.
    """
    p = as_mofwe_params(p)
    k = np.asarray(k_of_q(q, p.theta))
    root = np.sqrt(k * k + 4.0 * p.alpha * p.beta)
    with np.errstate(divide="ignore", invalid="ignore"):
        plus = (k + root) / (2.0 * p.alpha)
        rational = 2.0 * p.beta / (root - k)
    out = np.where(k >= 0.0, plus, rational)
    return float(out) if out.ndim == 0 else out


def median(p):
    return quantile(0.5, p)


def sample(n, seed, p):
    """Draw ``n`` MO-FWE variates by inverse transform.

    Identical ``(n, seed, p)`` give bitwise-identical output. Concurrent
    callers must use distinct seeds; no generator state is shared.
    """
    n = int(n)
    if n < 0:
        raise DomainError(f"sample size must be >= 0, got {n}")
    p = as_mofwe_params(p)
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    # random() is on [0, 1); an exact 0 would map to x = 0
    while np.any(u == 0.0):
        zeros = u == 0.0
        u[zeros] = rng.random(int(zeros.sum()))
    return quantile(u, p) if n else np.empty(0)


# ---------------------------------------------------------------------------
# mode


def log_pdf_derivative(x, p):
    """d/dx of the MO-FWE log-density."""
    p = as_mofwe_params(p)
    x = np.asarray(x, dtype=float)
    u = p.alpha * x - p.beta / x
    with np.errstate(over="ignore"):
        z = np.exp(u)
    s = np.exp(-z)
    zs = np.exp(u - z)
    c = p.alpha + p.beta / (x * x)
    denom = 1.0 - p.theta_bar * s
    out = -2.0 * p.beta / (x**3 * c) + c * (1.0 - z) - 2.0 * p.theta_bar * c * zs / denom
    return float(out) if out.ndim == 0 else out


def mode_equation_residual(x, p):
    """Left side of the polynomial-exponential mode equation.

    Equals ``x**2 (alpha x**2 + beta) (1 - (1-theta) s)`` times
    :func:`log_pdf_derivative`, so it has the same roots.
    """
    p = as_mofwe_params(p)
    x = np.asarray(x, dtype=float)
    u = p.alpha * x - p.beta / x
    z = np.exp(u)
    s = np.exp(-z)
    a = p.alpha * x * x + p.beta
    out = (1.0 - p.theta_bar * s) * (-2.0 * p.beta * x + a * a) - a * a * (
        1.0 + p.theta_bar * s
    ) * z
    return float(out) if out.ndim == 0 else out


def _bisect(fn, lo, hi):
    f_lo = fn(lo)
    while hi - lo > 1e-10 * max(1.0, 0.5 * (lo + hi)):
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def mode(p, grid_points=2000):
    """Interior maximiser of the density.

    The derivative of the log-density is scanned on a log grid over
    ``[quantile(1e-6), quantile(1 - 1e-6)]`` (widened once by 10x each way),
    every ``+ -> -`` sign change is a local maximum, the one with the highest
    density is refined by bisection to ``|dx| < 1e-10 max(1, x)``.

    Raises
    ------
    NoInteriorModeError
        If no sign change exists in the widened bracket.
    """
    p = as_mofwe_params(p)
    lo, hi = quantile(1e-6, p), quantile(1.0 - 1e-6, p)
    for widen in (1.0, 10.0):
        grid = np.geomspace(lo / widen, hi * widen, grid_points)
        d = log_pdf_derivative(grid, p)
        idx = np.nonzero((d[:-1] > 0.0) & (d[1:] <= 0.0))[0]
        if idx.size:
            break
    else:
        raise NoInteriorModeError(
            f"log-density derivative has no +/- sign change on "
            f"[{lo / 10:.6g}, {hi * 10:.6g}] for {p}"
        )
    best = idx[np.argmax(mofwe_pdf(grid[idx + 1], p))]
    return _bisect(lambda t: log_pdf_derivative(t, p), grid[best], grid[best + 1])


# ---------------------------------------------------------------------------
# quantile shape measures


def bowley_skewness(p):
    q1, q2, q3 = quantile(np.array([0.25, 0.5, 0.75]), p)
    return (q3 - 2.0 * q2 + q1) / (q3 - q1)


def moors_kurtosis(p):
    e1, e3, q1, e5, q3, e7 = quantile(np.array([0.125, 0.375, 0.25, 0.625, 0.75, 0.875]), p)
    return (e7 - e5 - e3 + e1) / (q3 - q1)


# ---------------------------------------------------------------------------
# quadrature moments and MGF

_BREAK_LEVELS = (1e-3, 1e-2, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999)
UPPER_LEVEL = 1.0 - 1e-12


def _integrate(log_integrand, p, epsrel, *, to_infinity=False, what="integral"):
    """Integrate ``exp(log_integrand(x))`` over ``(0, quantile(1 - 1e-12))``.

    The range is split at fixed probability levels so that each piece sees
    one smooth bump. ``to_infinity`` appends the tail beyond the last level.
    """
    edges = [0.0, *quantile(np.array(_BREAK_LEVELS), p), quantile(UPPER_LEVEL, p)]
    pieces = list(zip(edges[:-1], edges[1:]))
    if to_infinity:
        pieces.append((edges[-1], np.inf))

    def fn(x):
        if x <= 0.0:
            return 0.0
        with np.errstate(over="ignore", under="ignore"):
            return float(np.exp(log_integrand(x)))

    total, total_err, notes = 0.0, 0.0, []
    for a, b in pieces:
        out = quad(fn, a, b, epsabs=0.0, epsrel=max(epsrel * 1e-2, 1e-13), limit=200, full_output=1)
        total += out[0]
        total_err += out[1]
        if len(out) == 4:
            notes.append(f"[{a:.6g}, {b:.6g}]: {out[3].splitlines()[0]}")
    if not math.isfinite(total) or total_err > epsrel * abs(total):
        raise QuadratureError(
            f"{what} did not converge: value={total!r}, abserr={total_err!r}",
            value=total,
            abserr=total_err,
            diagnostics={"pieces": pieces, "messages": notes, "params": p},
        )
    return total


def moment_quadrature(r, p, epsrel=1e-9):
    """Raw moment ``E[X**r]`` by adaptive quadrature (QUADPACK ``qags``)."""
    r = int(r)
    if r < 0:
        raise DomainError("moment order must be >= 0")
    p = as_mofwe_params(p)
    return _integrate(
        lambda x: r * math.log(x) + mofwe_log_pdf(x, p), p, epsrel, what=f"moment r={r}"
    )


def mgf_quadrature(t, p, epsrel=1e-10):
    """``E[exp(t X)]``; finite for every real ``t`` because of the doubly
    exponential upper tail."""
    t = float(t)
    if not math.isfinite(t):
        raise DomainError("t must be finite")
    p = as_mofwe_params(p)
    return _integrate(
        lambda x: t * x + mofwe_log_pdf(x, p), p, epsrel, to_infinity=True, what=f"mgf t={t}"
    )


# ---------------------------------------------------------------------------
# experimental series evaluators


@dataclass(frozen=True)
class SeriesTruncation:
    k_max: int = 30
    j_max: int = 30
    i_max: int = 30
    tail_tolerance: float = 1e-10
    r_max: int = 10
    divergence_bound: float = 1e30

    def __post_init__(self):
        for name in ("k_max", "j_max", "i_max", "r_max"):
            if int(getattr(self, name)) < 0:
                raise DomainError(f"{name} must be >= 0")
        if not self.tail_tolerance > 0:
            raise DomainError("tail_tolerance must be > 0")


@dataclass
class SeriesResult:
    """Truncated series value with the bookkeeping needed to audit it."""

    value: float
    converged: bool
    partial_sums: list = field(default_factory=list)
    last_terms: dict = field(default_factory=dict)
    terms_evaluated: int = 0


def _gamma_at(m):
    """``(log|Gamma(m)|, sign)``; ``None`` at the poles m = 0, -1, -2, ..."""
    if m <= 0 and float(m).is_integer():
        return None
    g = math.lgamma(m)
    sign = 1.0 if m > 0 or math.floor(m) % 2 == 0 else -1.0
    return g, sign


def _series_term(r, k, j, i, alpha, beta, theta):
    """One ``(k, j, i)`` term of the closed-form moment series.

    Returns ``None`` when a gamma factor sits on a pole.
    """
    ga = _gamma_at(r - i + 1)
    gb = _gamma_at(r - i - 1)
    if ga is None or gb is None:
        return None
    tb_pow = (1.0 - theta) ** k  # 0**0 == 1 at theta == 1
    if tb_pow == 0.0:
        return 0.0
    log_mag = (
        (j + 1) * math.log(k + 1)
        + i * math.log(beta)
        + math.log(theta)
        - gammaln(i + 1)
        - gammaln(j + 1)
        - (r - 2 * i - 1) * math.log(j + 1)
        - (r - i - 1) * math.log(alpha)
    )
    bracket = ga[1] * math.exp(ga[0]) / (alpha * (j + 1) ** 2) + beta * gb[1] * math.exp(gb[0])
    sign = -1.0 if (i + j) % 2 else 1.0
    return sign * tb_pow * math.exp(log_mag) * bracket


def moment_series(r, p, trunc=None):
    """EXPERIMENTAL closed-form triple series for ``E[X**r]``.

    Always compare with :func:`moment_quadrature`. The ``k``-series needs
    ``|1 - theta| < 1``; outside that range a :class:`SeriesDomainError` is
    raised. A gamma pole or a non-finite or runaway partial sum raises
    :class:`SeriesDivergenceError` with the partial-sum trace so far.
    """
    trunc = trunc or SeriesTruncation()
    r = int(r)
    if r < 0:
        raise DomainError("moment order must be >= 0")
    p = as_mofwe_params(p)
    if abs(1.0 - p.theta) >= 1.0:
        raise SeriesDomainError(
            f"|1 - theta| = {abs(1.0 - p.theta):.6g} >= 1: binomial series in k does not converge"
        )
    total = 0.0
    trace = []
    last = {"k": 0.0, "j": 0.0, "i": 0.0}
    count = 0
    for k in range(trunc.k_max + 1):
        for j in range(trunc.j_max + 1):
            for i in range(trunc.i_max + 1):
                term = _series_term(r, k, j, i, p.alpha, p.beta, p.theta)
                count += 1
                if term is None:
                    raise SeriesDivergenceError(
                        f"gamma factor at a pole for (k, j, i) = ({k}, {j}, {i}), r = {r}",
                        trace=trace,
                        at=(k, j, i),
                    )
                total += term
                if not math.isfinite(total) or abs(total) > trunc.divergence_bound:
                    raise SeriesDivergenceError(
                        f"partial sum {total!r} left the finite range at (k, j, i) = ({k}, {j}, {i})",
                        trace=trace + [total],
                        at=(k, j, i),
                    )
                mag = abs(term)
                if k == trunc.k_max:
                    last["k"] = max(last["k"], mag)
                if j == trunc.j_max:
                    last["j"] = max(last["j"], mag)
                if i == trunc.i_max:
                    last["i"] = max(last["i"], mag)
        trace.append(total)
    scale = max(abs(total), 1.0)
    converged = all(v <= trunc.tail_tolerance * scale for v in last.values())
    return SeriesResult(total, converged, trace, last, count)


def mgf_series(t, p, trunc=None):
    """EXPERIMENTAL quadruple series ``sum_r t**r / r! * moment_series(r)``."""
    trunc = trunc or SeriesTruncation()
    t = float(t)
    orders = range(1) if t == 0.0 else range(trunc.r_max + 1)
    total = 0.0
    trace = []
    last = {}
    count = 0
    for r in orders:
        try:
            res = moment_series(r, p, trunc)
        except SeriesDivergenceError as exc:
            raise SeriesDivergenceError(
                f"moment series for r = {r}: {exc}", trace=trace, at=(r,) + tuple(exc.at or ())
            ) from exc
        contrib = t**r / math.factorial(r) * res.value
        total += contrib
        count += res.terms_evaluated
        trace.append(total)
        last = dict(res.last_terms, r=abs(contrib))
        if not math.isfinite(total):
            raise SeriesDivergenceError(f"partial sum non-finite at r = {r}", trace=trace, at=(r,))
    scale = max(abs(total), 1.0)
    converged = all(v <= trunc.tail_tolerance * scale for v in last.values())
    return SeriesResult(total, converged, trace, last, count)


@dataclass
class SeriesAudit:
    """Side-by-side record of a series evaluator and its quadrature oracle."""

    quantity: str
    argument: float
    params: tuple
    quadrature: float
    series: float | None
    abs_difference: float | None
    status: str
    detail: str
    partial_sums: list

    def as_dict(self):
        return dict(self.__dict__)


def _audit(quantity, argument, p, run_series, oracle):
    p = as_mofwe_params(p)
    reference = oracle()
    try:
        res = run_series()
    except SeriesDomainError as exc:
        return SeriesAudit(quantity, argument, p.as_tuple(), reference, None, None,
                           "domain-error", str(exc), [])
    except SeriesDivergenceError as exc:
        return SeriesAudit(quantity, argument, p.as_tuple(), reference, None, None,
                           "diverged", str(exc), exc.trace)
    status = "converged" if res.converged else "truncated"
    detail = f"{res.terms_evaluated} terms; last-term magnitudes {res.last_terms}"
    return SeriesAudit(quantity, argument, p.as_tuple(), reference, res.value,
                       abs(res.value - reference), status, detail, res.partial_sums)


def audit_moment_series(r, p, trunc=None):
    return _audit("moment", r, p, lambda: moment_series(r, p, trunc),
                  lambda: moment_quadrature(r, p))


def audit_mgf_series(t, p, trunc=None):
    return _audit("mgf", t, p, lambda: mgf_series(t, p, trunc), lambda: mgf_quadrature(t, p))


# ---------------------------------------------------------------------------
# order statistics


@dataclass(frozen=True)
class OrderStatSpec:
    r: int
    n: int

    def __post_init__(self):
        if not (1 <= int(self.r) <= int(self.n)):
            raise DomainError(f"order statistic rank must satisfy 1 <= r <= n, got r={self.r}, n={self.n}")


def order_stat_log_pdf(x, spec, p):
    r, n = spec.r, spec.n
    out = -betaln(r, n - r + 1) + mofwe_log_pdf(x, p)
    if r > 1:
        out = out + (r - 1) * mofwe_log_cdf(x, p)
    if n > r:
        out = out + (n - r) * mofwe_log_sf(x, p)
    return out


def order_stat_pdf(x, spec, p):
    """Density of the ``r``-th of ``n`` order statistics (beta-weight form)."""
    if not isinstance(spec, OrderStatSpec):
        spec = OrderStatSpec(*spec)
    return np.exp(order_stat_log_pdf(x, spec, p))

