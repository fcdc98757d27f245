"""Command-line interface: ``mofwe <subcommand> ...``.

Exit codes: 0 success, 2 usage or invalid argument, 3 data error,
4 numerical failure.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import dist, properties
from .datasets import resolve_dataset
from .errors import DataError, DomainError, MofweError, NoInteriorModeError
from .estimation import FitConfig, fit_mle, profile_loglik
from .family import comparator_families, family_names, get_family
from .gof import compare_models, goodness_of_fit, info_criteria, kaplan_meier
from .published import published_rows
from .report import build_report, emit_curve_csv, emit_json, fitted_curve, format_fit_report

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 0, 2, 3, 4

_EVAL_FUNCTIONS = {
    "pdf": dist.mofwe_pdf,
    "cdf": dist.mofwe_cdf,
    "sf": dist.mofwe_sf,
    "hazard": dist.mofwe_hazard,
    "revhazard": dist.mofwe_reversed_hazard,
    "cumhazard": dist.mofwe_cumulative_hazard,
    "quantile": properties.quantile,
}


def _add_params(p):
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--theta", type=float, default=1.0)


def _add_fit_config(p):
    p.add_argument("--seed", type=int, default=0, help="seed for the random multistart points")
    p.add_argument("--level", type=float, default=0.95, help="Wald interval level")


def _write(text, path, stdout):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def build_parser():
    parser = argparse.ArgumentParser(prog="mofwe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    families = list(family_names())

    p = sub.add_parser("fit", help="maximum-likelihood fit")
    p.add_argument("--data", required=True, help="built-in name (aarset, pumps) or CSV path")
    p.add_argument("--family", choices=families, default="mofwe")
    _add_fit_config(p)
    p.add_argument("--json", metavar="PATH", help="also write the JSON report here")

    p = sub.add_parser("sample", help="draw a seeded sample")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_params(p)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("eval", help="evaluate one distribution function")
    p.add_argument("--fn", choices=list(_EVAL_FUNCTIONS), required=True)
    p.add_argument("--at", type=float, required=True)
    _add_params(p)

    p = sub.add_parser("props", help="quantile shape measures, mode and moments")
    _add_params(p)

    p = sub.add_parser("gof", help="K-S statistic and information criteria")
    p.add_argument("--data", required=True)
    p.add_argument("--family", choices=families, default="mofwe")
    p.add_argument("--params", type=float, nargs="+", help="evaluate here instead of fitting")
    p.add_argument("--pvalue", choices=("exact", "asymptotic"), default="exact")
    _add_fit_config(p)

    p = sub.add_parser("compare", help="multi-model comparison table")
    p.add_argument("--data", required=True)
    p.add_argument("--include-paper-constants", "--include-published", dest="published",
                   action="store_true", help="add the published competitor rows")
    _add_fit_config(p)

    p = sub.add_parser("profile", help="log-likelihood profile as curve CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--family", choices=families, default="mofwe")
    p.add_argument("--param", required=True)
    p.add_argument("--from", dest="lo", type=float, help="default: half the estimate")
    p.add_argument("--to", dest="hi", type=float, help="default: 1.5 times the estimate")
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--mode", choices=("fixed", "optimized"), default="fixed")
    _add_fit_config(p)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("km", help="Kaplan-Meier step curve CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("curves", help="fitted model curve CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--family", choices=families, default="mofwe")
    p.add_argument("--kind", choices=("cdf", "pdf", "hazard", "survival"), required=True)
    p.add_argument("--points", type=int, default=512)
    _add_fit_config(p)
    p.add_argument("--out", metavar="PATH")
    return parser


def _config(args):
    return FitConfig(seed=args.seed, level=args.level)


def _cmd_fit(args, out):
    data = resolve_dataset(args.data)
    cfg = _config(args)
    report = build_report(data, [fit_mle(data, args.family, cfg)], cfg)
    out.write(format_fit_report(report) + "\n")
    if args.json:
        _write(emit_json(report), args.json, out)


def _cmd_sample(args, out):
    if args.n < 0:
        raise DomainError("--n must be >= 0")
    x = properties.sample(args.n, args.seed, (args.alpha, args.beta, args.theta))
    _write("".join(f"{v:.17g}\n" for v in x), args.out, out)


def _cmd_eval(args, out):
    value = _EVAL_FUNCTIONS[args.fn](args.at, (args.alpha, args.beta, args.theta))
    out.write(f"{float(value)!r}\n")


def _cmd_props(args, out):
    p = (args.alpha, args.beta, args.theta)
    try:
        mode = f"{properties.mode(p):.10g}"
    except NoInteriorModeError:
        mode = "none (density maximal at the boundary)"
    out.write(f"median          {properties.median(p):.10g}\n")
    out.write(f"mode            {mode}\n")
    out.write(f"bowley skewness {properties.bowley_skewness(p):.10g}\n")
    out.write(f"moors kurtosis  {properties.moors_kurtosis(p):.10g}\n")
    for r in range(1, 5):
        out.write(f"E[X^{r}]          {properties.moment_quadrature(r, p):.10g}\n")


def _cmd_gof(args, out):
    data = resolve_dataset(args.data)
    family = get_family(args.family)
    if args.params:
        params = family.check_params(args.params)
        loglik = family.loglik(data.array(), params)
    else:
        fit = fit_mle(data, family, _config(args))
        params, loglik = fit.estimates, fit.log_likelihood
    g = goodness_of_fit(data, family, params, method=args.pvalue)
    c = info_criteria(loglik, family.param_count, g.n)
    out.write(f"dataset {data.label} (n={g.n}) family {family.name} params "
              + " ".join(f"{k}={v:.6g}" for k, v in zip(family.param_names, params)) + "\n")
    out.write(f"K-S {g.ks_statistic:.4f}  D+ {g.d_plus:.4f}  D- {g.d_minus:.4f}  "
              f"p-value {g.ks_pvalue:.4f} ({g.pvalue_method}, parameters treated as known)\n")
    aicc = "-" if c.aicc is None else f"{c.aicc:.2f}"
    out.write(f"loglik {c.loglik:.4f}  AIC {c.aic:.3f}  AICC {aicc}  BIC {c.bic:.3f}  HQIC {c.hqic:.4f}\n")


def _cmd_compare(args, out):
    data = resolve_dataset(args.data)
    cfg = _config(args)
    fits = [fit_mle(data, get_family("mofwe"), cfg)]
    fits += [fit_mle(data, fam, cfg) for fam in comparator_families()]
    rows = []
    if args.published:
        if data.label not in ("aarset", "pumps"):
            raise DataError("published rows exist only for the built-in datasets")
        rows = published_rows(data.label)
    out.write(compare_models(data, fits, rows).to_text() + "\n")
    if args.published and data.label == "pumps":
        out.write("published pumps rows were fitted in hundreds of hours; their "
                  "log-likelihoods sit n*ln(10) below fits on this scale.\n")


def _cmd_profile(args, out):
    data = resolve_dataset(args.data)
    family = get_family(args.family)
    if args.param not in family.param_names:
        raise DomainError(f"--param must be one of {family.param_names}")
    if args.points < 2:
        raise DomainError("--points must be >= 2")
    fit = fit_mle(data, family, _config(args))
    est = fit.params[args.param]
    lo = 0.5 * est if args.lo is None else args.lo
    hi = 1.5 * est if args.hi is None else args.hi
    if not 0.0 < lo < hi:
        raise DomainError("need 0 < --from < --to")
    grid = np.linspace(lo, hi, args.points)
    series = profile_loglik(data, args.param, grid, fit=fit, mode=args.mode, family=family)
    _write(emit_curve_csv(series), args.out, out)


def _cmd_km(args, out):
    data = resolve_dataset(args.data)
    _write(emit_curve_csv(kaplan_meier(data).step_series()), args.out, out)


def _cmd_curves(args, out):
    data = resolve_dataset(args.data)
    fit = fit_mle(data, args.family, _config(args))
    series = fitted_curve(args.family, fit.estimates, args.kind, points=args.points)
    _write(emit_curve_csv(series), args.out, out)


_COMMANDS = {
    "fit": _cmd_fit, "sample": _cmd_sample, "eval": _cmd_eval, "props": _cmd_props,
    "gof": _cmd_gof, "compare": _cmd_compare, "profile": _cmd_profile, "km": _cmd_km,
    "curves": _cmd_curves,
}


def main(argv=None, stdout=None, stderr=None):
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _COMMANDS[args.command](args, out)
    except DataError as exc:
        err.write(f"mofwe: data error: {exc}\n")
        return EXIT_DATA
    except DomainError as exc:
        err.write(f"mofwe: invalid argument: {exc}\n")
        return EXIT_USAGE
    except (MofweError, ArithmeticError) as exc:
        err.write(f"mofwe: numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except OSError as exc:
        err.write(f"mofwe: {exc}\n")
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
