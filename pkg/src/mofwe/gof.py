"""Kolmogorov-Smirnov statistics, information criteria, Kaplan-Meier and
multi-model comparison tables.

P-values default to the exact finite-sample distribution of the one-sample
statistic (``scipy.stats.kstwo``). The classical asymptotic series is
available with ``method="asymptotic"``. Either way parameters are treated as
known, so p-values for fitted models are optimistic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .curves import CurveSeries
from .datasets import as_values
from .errors import DomainError
from .family import get_family

# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov


def _sorted_cdf(data, cdf):
    x = np.sort(as_values(data))
    try:
        f = np.asarray(cdf(x), dtype=float)
        if f.shape != x.shape:
            raise TypeError
    except TypeError:
        f = np.array([float(cdf(v)) for v in x])
    if not np.all((f >= 0.0) & (f <= 1.0)):
        raise DomainError("cdf returned values outside [0, 1]")
    return x, f


def ks_components(data, cdf):
    """``(D, D+, D-)`` with ``D+ = max(i/n - F(x_(i)))`` and
    ``D- = max(F(x_(i)) - (i-1)/n)`` over the sorted sample."""
    x, f = _sorted_cdf(data, cdf)
    n = x.size
    i = np.arange(1, n + 1)
    d_plus = float(np.max(i / n - f))
    d_minus = float(np.max(f - (i - 1) / n))
    return max(d_plus, d_minus), d_plus, d_minus


def ks_statistic(data, cdf, alternative="two-sided"):
    """One-sample K-S distance between the empirical cdf and ``cdf``.

    ``alternative`` selects ``"two-sided"`` (D), ``"greater"`` (D+) or
    ``"less"`` (D-). Ties need no special handling: both one-sided gaps are
    taken at every sorted point.
    """
    d, d_plus, d_minus = ks_components(data, cdf)
    try:
        return {"two-sided": d, "greater": d_plus, "less": d_minus}[alternative]
    except KeyError:
        raise DomainError(f"unknown alternative {alternative!r}") from None


def _kolmogorov_tail(lam):
    # 2 * sum_{m>=1} (-1)^{m-1} exp(-2 m^2 lam^2), stopped once terms < 1e-12
    if lam <= 0.0:
        return 1.0
    total, m = 0.0, 1
    while True:
        term = math.exp(-2.0 * m * m * lam * lam)
        total += term if m % 2 else -term
        if term < 1e-12 or m > 100000:
            break
        m += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_pvalue(d, n, method="exact", alternative="two-sided"):
    """Upper-tail probability of the one-sample K-S statistic.

    ``method="exact"`` uses the finite-``n`` distribution; ``"asymptotic"``
    uses the Kolmogorov limit with ``lambda = sqrt(n) d``.
    """
    d = float(d)
    n = int(n)
    if not 0.0 <= d <= 1.0:
        raise DomainError(f"K-S distance must lie in [0, 1], got {d!r}")
    if n < 1:
        raise DomainError("n must be >= 1")
    if alternative not in ("two-sided", "greater", "less"):
        raise DomainError(f"unknown alternative {alternative!r}")
    if d == 0.0:
        return 1.0
    if method == "exact":
        dist = stats.kstwo if alternative == "two-sided" else stats.ksone
        return float(min(1.0, max(0.0, dist.sf(d, n))))
    if method == "asymptotic":
        lam = math.sqrt(n) * d
        if alternative == "two-sided":
            return _kolmogorov_tail(lam)
        return math.exp(-2.0 * lam * lam)
    raise DomainError(f"unknown p-value method {method!r}")


@dataclass(frozen=True)
class GofReport:
    ks_statistic: float
    ks_pvalue: float
    n: int
    d_plus: float
    d_minus: float
    pvalue_method: str = "exact"

    def __post_init__(self):
        if not (0.0 <= self.ks_statistic <= 1.0 and 0.0 <= self.ks_pvalue <= 1.0):
            raise DomainError("K-S statistic and p-value must lie in [0, 1]")


def goodness_of_fit(data, family, params, method="exact"):
    """K-S summary of ``family(params)`` against ``data``."""
    if isinstance(family, str):
        family = get_family(family)
    params = family.check_params(params)
    x = as_values(data)
    d, d_plus, d_minus = ks_components(x, lambda v: family.cdf(v, params))
    return GofReport(d, ks_pvalue(d, x.size, method), int(x.size), d_plus, d_minus, method)


# ---------------------------------------------------------------------------
# information criteria


@dataclass(frozen=True)
class InfoCriteria:
    loglik: float
    neg2loglik: float
    aic: float
    aicc: float | None
    bic: float
    hqic: float | None
    k: int
    n: int

    @property
    def aicc_available(self):
        return self.aicc is not None


def info_criteria(loglik, k, n):
    """AIC, small-sample AICc, BIC and Hannan-Quinn for ``k`` parameters and ``n`` points.

    ``aicc`` is ``None`` when ``n <= k + 1``; ``hqic`` is ``None`` for ``n < 2``.
    """
    k, n = int(k), int(n)
    if k < 0 or n < 1:
        raise DomainError("need k >= 0 and n >= 1")
    m2ll = -2.0 * float(loglik)
    aic = 2.0 * k + m2ll
    aicc = aic + 2.0 * k * (k + 1) / (n - k - 1) if n > k + 1 else None
    bic = k * math.log(n) + m2ll
    if k == 0:
        hqic = m2ll
    elif n >= 2:
        hqic = 2.0 * k * math.log(math.log(n)) + m2ll
    else:
        hqic = None
    return InfoCriteria(float(loglik), m2ll, aic, aicc, bic, hqic, k, n)


# ---------------------------------------------------------------------------
# Kaplan-Meier


@dataclass(frozen=True)
class KmCurve:
    """Product-limit survival estimate at the distinct event times."""

    times: tuple
    survival: tuple
    at_risk: tuple
    events: tuple

    def survival_at(self, t):
        idx = np.searchsorted(np.asarray(self.times), t, side="right") - 1
        return 1.0 if idx < 0 else self.survival[idx]

    def step_series(self, name="kaplan-meier"):
        """Right-continuous step curve starting at ``(0, 1)``; every jump
        repeats its time with the before and after values."""
        xs, ys = [0.0], [1.0]
        prev = 1.0
        for t, s in zip(self.times, self.survival):
            xs += [t, t]
            ys += [prev, s]
            prev = s
        return CurveSeries(name=name, kind="km-step", x=tuple(xs), y=tuple(ys))


def kaplan_meier(data):
    """Kaplan-Meier estimate for a complete sample; tied times form one step."""
    x = np.sort(as_values(data))
    times, counts = np.unique(x, return_counts=True)
    at_risk = x.size - np.concatenate([[0], np.cumsum(counts)[:-1]])
    surv = np.cumprod(1.0 - counts / at_risk)
    return KmCurve(
        tuple(float(t) for t in times),
        tuple(float(s) for s in surv),
        tuple(int(r) for r in at_risk),
        tuple(int(c) for c in counts),
    )


# ---------------------------------------------------------------------------
# comparison tables


@dataclass(frozen=True)
class ComparisonRow:
    model: str
    params: tuple
    ks: float | None
    ks_pvalue: float | None
    loglik: float
    aic: float
    aicc: float | None
    bic: float
    hqic: float | None
    source: str
    citation: str | None = None
    d_plus: float | None = None
    converged: bool | None = None

    def __post_init__(self):
        if self.source not in ("fitted", "published"):
            raise DomainError(f"row source must be 'fitted' or 'published', got {self.source!r}")
        if self.source == "published" and not self.citation:
            raise DomainError("published rows need a citation tag")

    @property
    def neg2loglik(self):
        return -2.0 * self.loglik


@dataclass
class ComparisonReport:
    dataset: str
    n: int
    rows: list = field(default_factory=list)

    def row(self, model):
        for r in self.rows:
            if r.model == model:
                return r
        raise KeyError(model)

    def to_text(self):
        def f(v, digits):
            if v is None:
                return "-"
            if v != 0.0 and abs(v) < 10.0 ** (-digits):
                return f"{v:.3g}"
            return f"{v:.{digits}f}"

        head = (f"{'model':<12} {'source':<9} {'K-S':>7} {'D+':>7} {'p-value':>9} "
                f"{'loglik':>10} {'-2loglik':>10} {'AIC':>10} {'AICC':>10} {'BIC':>10} {'HQIC':>10}")
        lines = [f"dataset: {self.dataset} (n={self.n})", head, "-" * len(head)]
        for r in self.rows:
            tag = r.source if r.converged in (None, True) else "fitted*"
            lines.append(
                f"{r.model:<12} {tag:<9} {f(r.ks, 4):>7} {f(r.d_plus, 4):>7} {f(r.ks_pvalue, 4):>9} "
                f"{f(r.loglik, 3):>10} {f(r.neg2loglik, 3):>10} {f(r.aic, 3):>10} {f(r.aicc, 2):>10} "
                f"{f(r.bic, 3):>10} {f(r.hqic, 3):>10}"
            )
        if any(r.converged is False for r in self.rows):
            lines.append("* fit did not converge (best incumbent shown)")
        lines.append("p-values treat fitted parameters as known.")
        return "\n".join(lines)


def fitted_row(data, fit):
    family = get_family(fit.family)
    gof = goodness_of_fit(data, family, fit.estimates)
    ic = info_criteria(fit.log_likelihood, fit.param_count, gof.n)
    return ComparisonRow(
        model=fit.family,
        params=tuple(fit.params.items()),
        ks=gof.ks_statistic,
        ks_pvalue=gof.ks_pvalue,
        loglik=fit.log_likelihood,
        aic=ic.aic,
        aicc=ic.aicc,
        bic=ic.bic,
        hqic=ic.hqic,
        source="fitted",
        d_plus=gof.d_plus,
        converged=fit.converged,
    )


def compare_models(data, fitted, reference_rows=()):
    """One row per model, sorted by AIC. Makes no claims about the ranking."""
    x = as_values(data)
    rows = [fitted_row(x, fit) for fit in fitted] + list(reference_rows)
    rows.sort(key=lambda r: (r.aic, r.model))
    label = getattr(data, "label", "data")
    return ComparisonReport(label, int(x.size), rows)
