"""Machine-readable fit reports and curve CSV emission.

JSON schema (``schema_version`` 1)::

    {
      "schema_version": 1,
      "tool": "mofwe", "tool_version": str,
      "dataset": str, "n": int, "data_checksum": str | null,
      "config": {"seed": int, "level": float, "multistart": int, "gtol": float, "max_iter": int},
      "models": [
        {"family": str, "param_names": [str], "estimates": [float],
         "log_likelihood": float, "converged": bool, "iterations": int,
         "score_sup_norm": float, "std_errors": [float] | null,
         "covariance": [[float]] | null, "confidence_level": float,
         "confidence_intervals": [[lo, hi]] | null, "message": str,
         "gof": {"ks_statistic", "ks_pvalue", "n", "d_plus", "d_minus", "pvalue_method"},
         "criteria": {"loglik", "neg2loglik", "aic", "aicc", "bic", "hqic", "k", "n"}}
      ]
    }

Floats are written with Python's shortest round-trip repr, so
``parse_json(emit_json(r)) == r``. Non-finite values use the ``Infinity`` and
``NaN`` tokens accepted by Python's ``json`` module.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .curves import CurveSeries
from .datasets import as_values
from .errors import DataError, DomainError
from .estimation import FitConfig
from .family import get_family
from .gof import GofReport, InfoCriteria, goodness_of_fit, info_criteria

SCHEMA_VERSION = 1
DEFAULT_CURVE_POINTS = 512
CURVE_RANGE = (0.001, 0.999)


def _tool_version():
    from . import __version__

    return __version__


def _tuple2(rows):
    return None if rows is None else tuple(tuple(float(v) for v in r) for r in rows)


def _tuple1(vals):
    return None if vals is None else tuple(float(v) for v in vals)


@dataclass(frozen=True)
class ModelSummary:
    """Serializable projection of a fit plus its K-S and criteria."""

    family: str
    param_names: tuple
    estimates: tuple
    log_likelihood: float
    converged: bool
    iterations: int
    score_sup_norm: float
    std_errors: tuple | None
    covariance: tuple | None
    confidence_level: float
    confidence_intervals: tuple | None
    message: str
    gof: GofReport
    criteria: InfoCriteria

    @property
    def params(self):
        return dict(zip(self.param_names, self.estimates))


@dataclass(frozen=True)
class FitReport:
    dataset: str
    n: int
    models: tuple
    config: dict = field(default_factory=dict)
    data_checksum: str | None = None
    tool_version: str = field(default_factory=_tool_version)
    schema_version: int = SCHEMA_VERSION

    def model(self, family):
        for m in self.models:
            if m.family == family:
                return m
        raise KeyError(family)


def summarize_fit(data, fit, method="exact"):
    gof = goodness_of_fit(data, fit.family, fit.estimates, method=method)
    crit = info_criteria(fit.log_likelihood, fit.param_count, gof.n)
    return ModelSummary(
        family=fit.family,
        param_names=tuple(fit.param_names),
        estimates=_tuple1(fit.estimates),
        log_likelihood=float(fit.log_likelihood),
        converged=bool(fit.converged),
        iterations=int(fit.iterations),
        score_sup_norm=float(fit.score_sup_norm),
        std_errors=_tuple1(fit.std_errors),
        covariance=_tuple2(fit.covariance),
        confidence_level=float(fit.confidence_level),
        confidence_intervals=_tuple2(fit.confidence_intervals),
        message=fit.message,
        gof=gof,
        criteria=crit,
    )


def build_report(data, fits, config=None):
    cfg = config or FitConfig()
    x = as_values(data)
    return FitReport(
        dataset=getattr(data, "label", "data"),
        n=int(x.size),
        models=tuple(summarize_fit(x, f) for f in fits),
        config={"seed": cfg.seed, "level": cfg.level, "multistart": cfg.multistart,
                "gtol": cfg.gtol, "max_iter": cfg.max_iter},
        data_checksum=data.checksum() if hasattr(data, "checksum") else None,
    )


def _to_jsonable(obj):
    if isinstance(obj, tuple):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _to_jsonable(v) for k, v in obj.items()}
    return obj


def emit_json(report):
    body = asdict(report)
    out = {
        "schema_version": body.pop("schema_version"),
        "tool": "mofwe",
        "tool_version": body.pop("tool_version"),
    }
    out.update(body)
    return json.dumps(_to_jsonable(out), indent=2) + "\n"


def parse_json(text):
    """Inverse of :func:`emit_json`."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid report JSON: {exc}") from None
    if obj.get("schema_version") != SCHEMA_VERSION:
        raise DataError(f"unsupported schema_version {obj.get('schema_version')!r}")
    models = []
    for m in obj["models"]:
        models.append(ModelSummary(
            family=m["family"],
            param_names=tuple(m["param_names"]),
            estimates=_tuple1(m["estimates"]),
            log_likelihood=m["log_likelihood"],
            converged=m["converged"],
            iterations=m["iterations"],
            score_sup_norm=m["score_sup_norm"],
            std_errors=_tuple1(m["std_errors"]),
            covariance=_tuple2(m["covariance"]),
            confidence_level=m["confidence_level"],
            confidence_intervals=_tuple2(m["confidence_intervals"]),
            message=m["message"],
            gof=GofReport(**m["gof"]),
            criteria=InfoCriteria(**m["criteria"]),
        ))
    return FitReport(
        dataset=obj["dataset"], n=obj["n"], models=tuple(models), config=obj["config"],
        data_checksum=obj["data_checksum"], tool_version=obj["tool_version"],
        schema_version=obj["schema_version"],
    )


def format_fit_report(report):
    """Human-readable table at display precision."""
    lines = [f"dataset: {report.dataset} (n={report.n})"]
    for m in report.models:
        status = "converged" if m.converged else "NOT converged"
        lines.append("")
        lines.append(f"family: {m.family} ({status}, score sup-norm {m.score_sup_norm:.2e})")
        lines.append(f"  {'param':<8} {'estimate':>12} {'std.err':>12}   {int(round(m.confidence_level * 100))}% interval")
        for i, name in enumerate(m.param_names):
            se = "-" if m.std_errors is None else f"{m.std_errors[i]:.4g}"
            ci = "-" if m.confidence_intervals is None else \
                f"[{m.confidence_intervals[i][0]:.4g}, {m.confidence_intervals[i][1]:.4g}]"
            lines.append(f"  {name:<8} {m.estimates[i]:>12.6g} {se:>12}   {ci}")
        c, g = m.criteria, m.gof
        aicc = "-" if c.aicc is None else f"{c.aicc:.2f}"
        hqic = "-" if c.hqic is None else f"{c.hqic:.4f}"
        lines.append(f"  loglik {c.loglik:.4f}  -2loglik {c.neg2loglik:.4f}")
        lines.append(f"  AIC {c.aic:.3f}  AICC {aicc}  BIC {c.bic:.3f}  HQIC {hqic}")
        lines.append(f"  K-S {g.ks_statistic:.4f}  D+ {g.d_plus:.4f}  p-value {g.ks_pvalue:.4f} ({g.pvalue_method})")
        if m.covariance is None:
            lines.append("  no covariance: " + m.message)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# curves


def emit_curve_csv(series):
    """``x,<kind>`` header then one ``.17g`` row per point."""
    rows = [f"x,{series.kind}"]
    rows += [f"{a:.17g},{b:.17g}" for a, b in zip(series.x, series.y)]
    return "\n".join(rows) + "\n"


def parse_curve_csv(text, name="curve"):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split(",")
    if len(head) != 2 or head[0] != "x":
        raise DataError("curve CSV header must be 'x,<kind>'")
    xs, ys = zip(*((float(a), float(b)) for a, b in (ln.split(",") for ln in lines[1:])))
    return CurveSeries(name=name, kind=head[1], x=xs, y=ys)


def fitted_curve(family, params, kind, points=DEFAULT_CURVE_POINTS, lo=None, hi=None):
    """Model curve over ``[quantile(0.001), quantile(0.999)]`` unless bounds are given."""
    if isinstance(family, str):
        family = get_family(family)
    if points < 2:
        raise DomainError("need at least 2 curve points")
    params = family.check_params(params)
    lo = float(family.quantile(CURVE_RANGE[0], params)) if lo is None else float(lo)
    hi = float(family.quantile(CURVE_RANGE[1], params)) if hi is None else float(hi)
    x = np.linspace(lo, hi, int(points))
    fn = {"cdf": family.cdf, "pdf": family.pdf, "hazard": family.hazard, "survival": family.sf}
    if kind not in fn:
        raise DomainError(f"fitted curves support {tuple(fn)}, got {kind!r}")
    y = np.asarray(fn[kind](x, params), dtype=float)
    return CurveSeries(name=f"{family.name}:{kind}", kind=kind, x=tuple(x), y=tuple(y))
