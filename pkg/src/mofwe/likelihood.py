"""Array-level log-likelihood, score and Hessian for FWE and MO-FWE.

The derivatives below were derived by hand from the log-density

    l(x) = log(theta) + log(c) + u - z - 2 log(1 - (1-theta) s)

with ``u = alpha x - beta/x``, ``c = du/dx = alpha + beta/x**2``,
``z = exp(u)``, ``s = exp(-z)`` and ``D = 1 - (1-theta) s``. Since ``u`` is
linear in ``(alpha, beta)`` with ``du/dalpha = x`` and ``du/dbeta = -1/x``,
only derivatives with respect to ``u`` and ``theta`` are needed:

    dl/du        = 1 - z - 2 (1-theta) z s / D
    d2l/du2      = -z - 2 (1-theta) z s [(1 - z) D - (1-theta) z s] / D**2
    dl/dtheta    = 1/theta - 2 s / D
    d2l/du dtheta = 2 z s / D**2
    d2l/dtheta2  = -1/theta**2 + 2 s**2 / D**2

The last line has a plus sign on the ``s**2/D**2`` term; the commonly printed
form of this entry carries a minus sign, which disagrees with finite
differences. All other entries agree with the printed forms after
rewriting ``s / D = 1 / (exp(z) - (1-theta))``.
"""
from __future__ import annotations

import numpy as np

from .dist import as_fwe_params, as_mofwe_params


def _terms(x, alpha, beta, theta):
    u = alpha * x - beta / x
    with np.errstate(over="ignore"):
        z = np.exp(u)
    s = np.exp(-z)
    zs = np.exp(u - z)
    c = alpha + beta / (x * x)
    tb = 1.0 - theta
    # g + theta s equals 1 - tb s without cancellation when tb s is near 1
    denom = np.where(tb * s > 0.5, -np.expm1(-z) + theta * s, 1.0 - tb * s)
    return u, z, s, zs, c, tb, denom


def mofwe_loglik_terms(x, p):
    """Per-observation log-density written term by term as in the likelihood sum.

    This is the direct route; :func:`mofwe.dist.mofwe_log_pdf` is the other.
    """
    p = as_mofwe_params(p)
    x = np.asarray(x, dtype=float)
    u, z, s, _, c, tb, _ = _terms(x, p.alpha, p.beta, p.theta)
    return np.log(p.theta) + np.log(c) + u - z - 2.0 * np.log(1.0 - tb * s)


def mofwe_gradient(x, p):
    """Gradient of the summed log-density in ``(alpha, beta, theta)``."""
    p = as_mofwe_params(p)
    x = np.asarray(x, dtype=float)
    _, z, s, zs, c, tb, denom = _terms(x, p.alpha, p.beta, p.theta)
    l_u = 1.0 - z - 2.0 * tb * zs / denom
    g_alpha = np.sum(1.0 / c + x * l_u)
    g_beta = np.sum(1.0 / (x * x * c) - l_u / x)
    g_theta = np.sum(1.0 / p.theta - 2.0 * s / denom)
    return np.array([g_alpha, g_beta, g_theta])


def mofwe_hessian(x, p):
    """Hessian of the summed log-density in ``(alpha, beta, theta)``."""
    p = as_mofwe_params(p)
    x = np.asarray(x, dtype=float)
    _, z, s, zs, c, tb, denom = _terms(x, p.alpha, p.beta, p.theta)
    d2 = denom * denom
    l_uu = -z - 2.0 * tb * zs * ((1.0 - z) * denom - tb * zs) / d2
    l_ut = 2.0 * zs / d2
    l_tt = -1.0 / (p.theta * p.theta) + 2.0 * s * s / d2
    c2 = c * c
    x2 = x * x

    h = np.empty((3, 3))
    h[0, 0] = np.sum(-1.0 / c2 + x2 * l_uu)
    h[0, 1] = np.sum(-1.0 / (x2 * c2) - l_uu)
    h[1, 1] = np.sum(-1.0 / (x2 * x2 * c2) + l_uu / x2)
    h[0, 2] = np.sum(x * l_ut)
    h[1, 2] = np.sum(-l_ut / x)
    h[2, 2] = np.sum(l_tt)
    h[1, 0] = h[0, 1]
    h[2, 0] = h[0, 2]
    h[2, 1] = h[1, 2]
    return h


def fwe_gradient(x, p):
    p = as_fwe_params(p)
    x = np.asarray(x, dtype=float)
    u = p.alpha * x - p.beta / x
    with np.errstate(over="ignore"):
        z = np.exp(u)
    c = p.alpha + p.beta / (x * x)
    l_u = 1.0 - z
    return np.array([np.sum(1.0 / c + x * l_u), np.sum(1.0 / (x * x * c) - l_u / x)])


def fwe_hessian(x, p):
    p = as_fwe_params(p)
    x = np.asarray(x, dtype=float)
    u = p.alpha * x - p.beta / x
    with np.errstate(over="ignore"):
        z = np.exp(u)
    c2 = (p.alpha + p.beta / (x * x)) ** 2
    x2 = x * x
    h_ab = np.sum(-1.0 / (x2 * c2) + z)
    return np.array(
        [
            [np.sum(-1.0 / c2 - x2 * z), h_ab],
            [h_ab, np.sum(-1.0 / (x2 * x2 * c2) - z / x2)],
        ]
    )
