"""Maximum-likelihood fitting with observed information and Wald intervals.

Fitting works on log-parameters so positivity never needs a constrained
solver: BFGS from every start in a deterministic multistart set, followed by
a safeguarded Newton polish until the natural-scale score is below
``gtol * (1 + |loglik|)``. Covariances and intervals are reported on the
natural scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm

from . import likelihood
from .curves import CurveSeries
from .datasets import as_values
from .dist import as_mofwe_params, mofwe_log_pdf
from .errors import (
    DataError,
    DomainError,
    InferenceUnavailableError,
    LikelihoodError,
    MofweError,
)
from .family import MOFWE, DistributionFamily, get_family

# ---------------------------------------------------------------------------
# MO-FWE likelihood surface


def log_likelihood(data, p):
    """Sum of MO-FWE log-densities.

    Raises
    ------
    LikelihoodError
        If any contribution is not finite; ``index`` is the 0-based position.
    """
    x = as_values(data)
    terms = mofwe_log_pdf(x, as_mofwe_params(p))
    bad = np.nonzero(~np.isfinite(terms))[0]
    if bad.size:
        i = int(bad[0])
        raise LikelihoodError(
            f"log-density is {terms[i]!r} at observation {i} (x={x[i]!r})", index=i
        )
    return float(np.sum(terms))


def score(data, p):
    """Gradient of :func:`log_likelihood` in ``(alpha, beta, theta)``."""
    return likelihood.mofwe_gradient(as_values(data), as_mofwe_params(p))


def observed_information(data, p):
    """Negative Hessian of :func:`log_likelihood`; symmetric by construction."""
    return -likelihood.mofwe_hessian(as_values(data), as_mofwe_params(p))


# ---------------------------------------------------------------------------
# generic family derivatives


def family_loglik(family, x, params):
    return float(np.sum(family.log_pdf(x, params)))


def family_score(family, x, params, rel_step=1e-6):
    params = np.asarray(family.check_params(params))
    if family.score_fn is not None:
        return np.asarray(family.score_fn(x, tuple(params)), dtype=float)
    grad = np.empty(params.size)
    for i in range(params.size):
        h = rel_step * max(abs(params[i]), 1e-12)
        up, dn = params.copy(), params.copy()
        up[i] += h
        dn[i] -= h
        grad[i] = (family_loglik(family, x, up) - family_loglik(family, x, dn)) / (2.0 * h)
    return grad


def family_hessian(family, x, params, rel_step=1e-5):
    """Analytic Hessian if the family has one, else central differences of the score."""
    params = np.asarray(family.check_params(params))
    if family.hessian_fn is not None:
        return np.asarray(family.hessian_fn(x, tuple(params)), dtype=float)
    k = params.size
    h_mat = np.empty((k, k))
    for i in range(k):
        h = rel_step * max(abs(params[i]), 1e-12)
        up, dn = params.copy(), params.copy()
        up[i] += h
        dn[i] -= h
        h_mat[:, i] = (family_score(family, x, up) - family_score(family, x, dn)) / (2.0 * h)
    return 0.5 * (h_mat + h_mat.T)


# ---------------------------------------------------------------------------
# configuration and results


@dataclass(frozen=True)
class FitConfig:
    """Optimizer settings.

    ``multistart`` seeded random starts (log-normal jitter around the
    heuristic start) are appended to the family's deterministic grid.
    """

    initial: tuple | None = None
    max_iter: int = 500
    gtol: float = 1e-8
    multistart: int = 4
    seed: int = 0
    level: float = 0.95

    def __post_init__(self):
        if not self.gtol > 0:
            raise DomainError("gtol must be > 0")
        if self.max_iter < 1:
            raise DomainError("max_iter must be >= 1")
        if self.multistart < 1:
            raise DomainError("multistart must be >= 1")
        if not 0.0 <= self.level < 1.0:
            raise DomainError("confidence level must lie in [0, 1)")


@dataclass(eq=False)
class FitResult:
    family: str
    param_names: tuple
    estimates: tuple
    log_likelihood: float
    converged: bool
    iterations: int
    score_sup_norm: float
    n: int
    observed_info: np.ndarray | None = None
    covariance: np.ndarray | None = None
    std_errors: tuple | None = None
    confidence_level: float = 0.95
    confidence_intervals: tuple | None = None
    ci_lower_nonpositive: tuple | None = None
    info_positive_definite: bool = False
    start_index: int = -1
    starts_tried: int = 0
    starts_converged: int = 0
    message: str = ""
    trace: list = field(default_factory=list)

    @property
    def params(self):
        return dict(zip(self.param_names, self.estimates))

    @property
    def param_count(self):
        return len(self.estimates)

    def mofwe_params(self):
        if self.family != "mofwe":
            raise MofweError(f"fit is for family {self.family!r}, not mofwe")
        return as_mofwe_params(self.estimates)


def _z_value(level):
    if not 0.0 <= level < 1.0:
        raise DomainError("confidence level must lie in [0, 1)")
    return float(norm.ppf(0.5 + 0.5 * level))


def confidence_intervals(fit, level=None):
    """Natural-scale Wald intervals ``estimate +/- z * se``.

    Lower ends may be <= 0 for positive parameters; they are returned as-is.

    Raises
    ------
    InferenceUnavailableError
        If the fit carries no covariance matrix.
    """
    if fit.covariance is None or fit.std_errors is None:
        raise InferenceUnavailableError(
            f"no covariance for this {fit.family} fit (observed information not positive definite)"
        )
    z = _z_value(fit.confidence_level if level is None else level)
    return tuple((est - z * se, est + z * se) for est, se in zip(fit.estimates, fit.std_errors))


def with_level(fit, level):
    """Copy of ``fit`` with intervals recomputed at ``level``."""
    out = replace(fit, confidence_level=float(level))
    if fit.covariance is not None:
        cis = confidence_intervals(out)
        out.confidence_intervals = cis
        out.ci_lower_nonpositive = tuple(lo <= 0.0 for lo, _ in cis)
    return out


# ---------------------------------------------------------------------------
# optimisation


def _starts(family, x, cfg):
    starts = []
    if cfg.initial is not None:
        starts.append(tuple(family.check_params(cfg.initial)))
    guesses = list(family.initial_guesses(x)) if family.initial_guesses else []
    if not guesses and not starts:
        raise DomainError(f"family {family.name!r} has no initial guesses; pass FitConfig.initial")
    starts.extend(guesses)
    centre = np.log(np.asarray(guesses[-1] if guesses else starts[0], dtype=float))
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.multistart):
        starts.append(tuple(np.exp(centre + rng.normal(0.0, 1.0, size=centre.size))))
    return starts


def _safe_loglik(family, x, params):
    try:
        val = family_loglik(family, x, params)
    except (MofweError, FloatingPointError, ValueError, OverflowError):
        return -math.inf
    return val if math.isfinite(val) else -math.inf


def _optimise_from(family, x, start, cfg):
    """BFGS in log-parameters, then Newton polish. Returns a dict of diagnostics."""
    # exploratory steps may reach extreme parameters; non-finite values are handled explicitly
    with np.errstate(all="ignore"):
        return _optimise_from_impl(family, x, start, cfg)


def _optimise_from_impl(family, x, start, cfg):
    eta0 = np.log(np.asarray(start, dtype=float))

    def objective(eta):
        with np.errstate(all="ignore"):
            ll = _safe_loglik(family, x, np.exp(eta))
        return -ll if math.isfinite(ll) else 1e300

    def gradient(eta):
        p = np.exp(eta)
        with np.errstate(all="ignore"):
            try:
                g = -p * family_score(family, x, p)
            except (MofweError, ArithmeticError):
                return np.zeros_like(eta)
        return np.where(np.isfinite(g), g, 0.0)

    if not math.isfinite(_safe_loglik(family, x, np.exp(eta0))):
        return None
    with np.errstate(all="ignore"):
        res = minimize(
            objective, eta0, jac=gradient, method="BFGS",
            options={"maxiter": cfg.max_iter, "gtol": 1e-10},
        )
    eta = res.x
    iterations = int(res.nit)
    ll = _safe_loglik(family, x, np.exp(eta))
    if not math.isfinite(ll):
        return None

    # Newton polish in log-parameters, with step halving
    for _ in range(100):
        p = np.exp(eta)
        try:
            g_nat = family_score(family, x, p)
        except (MofweError, ArithmeticError):
            break
        # polish past the convergence threshold; convergence is judged below
        if np.max(np.abs(g_nat)) < 1e-3 * cfg.gtol * (1.0 + abs(ll)):
            break
        try:
            h_nat = family_hessian(family, x, p)
        except (MofweError, ArithmeticError):
            break
        g_eta = p * g_nat
        h_eta = h_nat * np.outer(p, p) + np.diag(g_eta)
        if not np.all(np.isfinite(h_eta)):
            break
        try:
            if np.max(np.linalg.eigvalsh(h_eta)) >= 0.0:
                break
            step = -np.linalg.solve(h_eta, g_eta)
        except np.linalg.LinAlgError:
            break
        t = 1.0
        improved = False
        for _ in range(40):
            cand = eta + t * step
            ll_c = _safe_loglik(family, x, np.exp(cand))
            if math.isfinite(ll_c) and ll_c >= ll - 1e-12 * abs(ll):
                eta, ll, improved = cand, ll_c, True
                break
            t *= 0.5
        iterations += 1
        if not improved:
            break

    p = np.exp(eta)
    try:
        g_nat = family_score(family, x, p)
        sup = float(np.max(np.abs(g_nat)))
    except (MofweError, ArithmeticError):
        sup = math.inf
    if not math.isfinite(sup):
        sup = math.inf
    return {
        "params": tuple(float(v) for v in p),
        "loglik": ll,
        "iterations": iterations,
        "score_sup_norm": sup,
        "converged": sup < cfg.gtol * (1.0 + abs(ll)),
        "message": str(res.message),
    }


def fit_mle(data, family=MOFWE, config=None):
    """Maximum-likelihood fit of ``family`` to a complete sample.

    Every start is optimised; the result is the converged candidate with the
    largest log-likelihood (ties broken by start index), so the outcome does
    not depend on evaluation order. The sample is sorted first, so any
    permutation of the input gives an identical fit.

    If no start converges the best incumbent is returned with
    ``converged=False`` and the reason in ``message``.
    """
    if isinstance(family, str):
        family = get_family(family)
    cfg = config or FitConfig()
    x = np.sort(as_values(data))
    if x.size < family.param_count + 1:
        raise DataError(
            f"need at least {family.param_count + 1} observations to fit {family.name}, got {x.size}"
        )

    candidates = []
    starts = _starts(family, x, cfg)
    for idx, start in enumerate(starts):
        out = _optimise_from(family, x, start, cfg)
        if out is not None:
            out["index"] = idx
            candidates.append(out)
    if not candidates:
        return FitResult(
            family=family.name, param_names=tuple(family.param_names),
            estimates=tuple(float(v) for v in starts[0]), log_likelihood=-math.inf,
            converged=False, iterations=0, score_sup_norm=math.inf, n=int(x.size),
            confidence_level=cfg.level, starts_tried=len(starts),
            message="no start produced a finite log-likelihood",
        )
    converged = [c for c in candidates if c["converged"]]
    pool = converged or candidates
    best = min(pool, key=lambda c: (-c["loglik"], c["index"]))

    fit = FitResult(
        family=family.name,
        param_names=tuple(family.param_names),
        estimates=best["params"],
        log_likelihood=best["loglik"],
        converged=best["converged"],
        iterations=best["iterations"],
        score_sup_norm=best["score_sup_norm"],
        n=int(x.size),
        confidence_level=cfg.level,
        start_index=best["index"],
        starts_tried=len(starts),
        starts_converged=len(converged),
        message=best["message"] if converged else
        f"no start reached score sup-norm < {cfg.gtol:g}*(1+|loglik|); best incumbent returned",
        trace=[(c["index"], c["loglik"], c["converged"]) for c in candidates],
    )
    return _attach_inference(fit, family, x)


def _attach_inference(fit, family, x):
    try:
        info = -family_hessian(family, x, fit.estimates)
    except (MofweError, ArithmeticError):
        return fit
    info = 0.5 * (info + info.T)
    fit.observed_info = info
    if not np.all(np.isfinite(info)):
        fit.message += "; observed information not finite"
        return fit
    try:
        np.linalg.cholesky(info)
    except np.linalg.LinAlgError:
        fit.message += "; observed information not positive definite, no covariance"
        return fit
    cov = np.linalg.inv(info)
    cov = 0.5 * (cov + cov.T)
    fit.info_positive_definite = True
    fit.covariance = cov
    fit.std_errors = tuple(float(v) for v in np.sqrt(np.diag(cov)))
    cis = confidence_intervals(fit)
    fit.confidence_intervals = cis
    fit.ci_lower_nonpositive = tuple(lo <= 0.0 for lo, _ in cis)
    return fit


# ---------------------------------------------------------------------------
# likelihood profiles


def profile_loglik(data, which, grid, fit=None, mode="fixed", family=MOFWE):
    """Log-likelihood along one parameter.

    ``mode="fixed"`` holds the other parameters at the MLE (a slice through
    the optimum); ``mode="optimized"`` re-maximises them at each grid value.
    ``fit`` defaults to a fresh :func:`fit_mle`.
    """
    if isinstance(family, str):
        family = get_family(family)
    x = np.sort(as_values(data))
    if isinstance(which, str):
        if which not in family.param_names:
            raise DomainError(f"{which!r} is not a parameter of {family.name}: {family.param_names}")
        which = family.param_names.index(which)
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0.0):
        raise DomainError("profile grid must be positive")
    if mode not in ("fixed", "optimized"):
        raise DomainError(f"unknown profile mode {mode!r}")
    fit = fit or fit_mle(x, family)
    base = np.asarray(fit.estimates, dtype=float)
    others = [i for i in range(base.size) if i != which]

    values = []
    for g in grid:
        p = base.copy()
        p[which] = g
        if mode == "optimized" and others:
            def neg(eta, g=g):
                q = base.copy()
                q[which] = g
                q[others] = np.exp(eta)
                ll = _safe_loglik(family, x, q)
                return -ll if math.isfinite(ll) else 1e300

            with np.errstate(all="ignore"):
                res = minimize(neg, np.log(base[others]), method="Nelder-Mead",
                               options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
            p[others] = np.exp(res.x)
        values.append(family_loglik(family, x, p))
    name = f"{family.name}:{family.param_names[which]}"
    return CurveSeries(name=name, kind="profile", x=tuple(grid), y=tuple(values))
