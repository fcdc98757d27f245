import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# 3 x 3 x 3 parameter grid used by normalization and identity checks
GRID_AB = (0.05, 0.5, 2.0)
GRID_THETA = (0.2, 1.0, 5.0)
PARAM_GRID = [(a, b, t) for a in GRID_AB for b in GRID_AB for t in GRID_THETA]


def central_mass_grid(p, lo=0.01, hi=0.99, points=200):
    from mofwe.properties import quantile

    return np.linspace(quantile(lo, p), quantile(hi, p), points)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def fd_gradient(f, p, rel=1e-6):
    """Central differences with step ``rel * |p_i|``."""
    p = np.asarray(p, dtype=float)
    g = np.empty_like(p)
    for i in range(p.size):
        h = rel * abs(p[i])
        e = np.zeros_like(p)
        e[i] = h
        g[i] = (f(p + e) - f(p - e)) / (2 * h)
    return g


def fd_hessian(f, p, rel=1e-5):
    """Four-point central second differences with step ``rel * |p_i|``."""
    p = np.asarray(p, dtype=float)
    k = p.size
    H = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            ei = np.zeros(k)
            ej = np.zeros(k)
            ei[i] = rel * abs(p[i])
            ej[j] = rel * abs(p[j])
            H[i, j] = H[j, i] = (
                f(p + ei + ej) - f(p + ei - ej) - f(p - ei + ej) + f(p - ei - ej)
            ) / (4 * ei[i] * ej[j])
    return H


def random_likelihood_draws(count=50, seed=123):
    """(data, params) pairs: seeded MO-FWE samples evaluated off their generating point."""
    from mofwe.properties import sample

    rng = np.random.default_rng(seed)
    draws = []
    for k in range(count):
        gen = (rng.uniform(0.05, 2), rng.uniform(0.05, 2), rng.uniform(0.2, 8))
        x = sample(int(rng.integers(5, 40)), 1000 + k, gen)
        p = tuple(v * rng.uniform(0.7, 1.4) for v in gen)
        draws.append((x, p))
    return draws


def mp_loglik(x, p, dps=30):
    """MO-FWE log-likelihood in ``dps``-digit arithmetic (independent of the package)."""
    import mpmath as mp

    with mp.workdps(dps):
        a, b, t = (mp.mpf(v) for v in p)
        total = mp.mpf(0)
        for xi in x:
            xi = mp.mpf(float(xi))
            u = a * xi - b / xi
            z = mp.e**u
            s = mp.e**(-z)
            total += mp.log(t) + mp.log(a + b / xi**2) + u - z - 2 * mp.log(1 - (1 - t) * s)
        return total


def fd_hessian_mp(x, p, rel=1e-5, dps=30):
    """Same stencil as :func:`fd_hessian`, evaluated without double-precision rounding."""
    import mpmath as mp

    with mp.workdps(dps):
        p = [mp.mpf(v) for v in p]
        k = len(p)
        H = np.empty((k, k))
        for i in range(k):
            for j in range(i, k):
                hi, hj = rel * abs(p[i]), rel * abs(p[j])

                def f(si, sj):
                    q = list(p)
                    q[i] += si * hi
                    q[j] += sj * hj
                    return mp_loglik(x, q, dps)

                H[i, j] = H[j, i] = float((f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4 * hi * hj))
        return H
