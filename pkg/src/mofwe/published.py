"""Published competitor fits for the two built-in datasets.

These models are not fitted here; their published statistics are carried as
fixed rows so comparison tables can show the full field. ``TABLE_VERSION``
changes whenever a row is edited.

The published pump-data competitors were fitted with times in hundreds of
hours: their log-likelihoods sit ``n * ln(10)`` below the same models fitted
in thousands of hours, the unit of the embedded sample.
"""
from __future__ import annotations

from .errors import DataError
from .gof import ComparisonRow

TABLE_VERSION = 1

# model, params, K-S, p-value, loglik, AIC, AICC, BIC, HQIC
_AARSET = [
    ("FW", (("alpha", 0.0122), ("beta", 0.7002)), 0.4386, 4.29e-9,
     -250.810, 505.620, 505.88, 509.448, 507.0762),
    ("W", (("alpha", 0.0223), ("beta", 0.949)), 0.2397, 0.0052,
     -241.002, 486.004, 486.26, 489.828, 487.4602),
    ("LFR", (("a", 0.014), ("b", 2.4e-4)), 0.1955, 0.0370,
     -238.064, 480.128, 480.38, 483.952, 481.5842),
    ("EW", (("alpha", 0.0109), ("beta", 4.69), ("gamma", 0.164)), 0.1841, 0.0590,
     -235.926, 477.852, 478.37, 483.588, 480.0363),
    ("GLFR", (("a", 0.0038), ("b", 3.04e-4), ("c", 0.533)), 0.1620, 0.1293,
     -233.145, 472.290, 472.81, 478.026, 474.4743),
    ("EFW", (("alpha", 0.0147), ("beta", 0.133), ("theta", 4.22)), 0.1433, 0.2617,
     -226.989, 459.979, 460.65, 465.715, 462.1623),
    ("MO-FWE", (("alpha", 0.017), ("beta", 0.401), ("theta", 9.043)), 0.1269, 0.3756,
     -223.755, 453.510, 454.03, 459.246, 455.6943),
]

_PUMPS = [
    ("FW", (("alpha", 0.0207), ("beta", 2.5875)), 0.1342, None,
     -83.3424, 170.6848, 171.2848, 172.95579, 171.2559),
    ("W", (("alpha", 0.8077), ("beta", 13.9148)), 0.1173, None,
     -85.4734, 174.9468, 175.5468, 177.21779, 175.5179),
    ("MW", (("alpha", 0.1213), ("beta", 0.7924), ("gamma", 0.0009)), 0.1188, None,
     -85.4677, 176.9354, 178.1986, 180.34188, 177.7921),
    ("RAW", (("alpha", 0.0070), ("beta", 1.7292), ("gamma", 0.0452)), 0.1619, None,
     -86.0728, 178.1456, 179.4088, 181.55208, 179.0023),
    ("ExtW", (("alpha", 0.4189), ("beta", 1.0212), ("gamma", 10.2778)), 0.1057, None,
     -86.6343, 179.2686, 180.5318, 182.67508, 180.1253),
    ("MO-FWE", (("alpha", 0.2160), ("beta", 0.2350), ("theta", 1.2960)), 0.0793, None,
     -30.2110, 66.4220, 67.6852, 69.8285, 67.2787),
]

_TABLES = {"aarset": _AARSET, "pumps": _PUMPS}


def published_rows(dataset, include_mofwe=False):
    """Published comparison rows for ``"aarset"`` or ``"pumps"``.

    The MO-FWE row is left out unless ``include_mofwe`` because the
    comparison normally shows the local refit instead.
    """
    try:
        table = _TABLES[dataset]
    except KeyError:
        raise DataError(f"no published rows for dataset {dataset!r}") from None
    rows = []
    for model, params, ks, pval, ll, aic, aicc, bic, hqic in table:
        if model == "MO-FWE" and not include_mofwe:
            continue
        rows.append(ComparisonRow(
            model=model, params=params, ks=ks, ks_pvalue=pval, loglik=ll, aic=aic,
            aicc=aicc, bic=bic, hqic=hqic, source="published",
            citation=f"published:{dataset}:v{TABLE_VERSION}",
        ))
    return rows
