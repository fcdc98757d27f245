"""Marshall-Olkin flexible Weibull extension lifetime distribution.

Distribution functions, quantile-based and moment properties, maximum
likelihood with Wald inference, goodness-of-fit and model comparison.
"""
__version__ = "0.1.0"

from .datasets import Dataset, builtin_dataset, load_csv
from .dist import (
    FweParams,
    MoFweParams,
    fwe_cdf,
    fwe_cumulative_hazard,
    fwe_hazard,
    fwe_pdf,
    fwe_quantile,
    fwe_reversed_hazard,
    fwe_sf,
    mofwe_cdf,
    mofwe_cumulative_hazard,
    mofwe_hazard,
    mofwe_log_pdf,
    mofwe_pdf,
    mofwe_reversed_hazard,
    mofwe_sf,
)
from .errors import (
    DataError,
    DomainError,
    InferenceUnavailableError,
    MofweError,
    NumericalError,
)
from .estimation import FitConfig, FitResult, fit_mle, profile_loglik
from .family import FWE, LFR, MOFWE, WEIBULL, get_family, marshall_olkin
from .gof import compare_models, goodness_of_fit, info_criteria, kaplan_meier, ks_pvalue, ks_statistic
from .properties import median, mode, moment_quadrature, quantile, sample
