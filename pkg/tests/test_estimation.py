import math

import numpy as np
import pytest

from conftest import fd_gradient, fd_hessian, fd_hessian_mp, mp_loglik, random_likelihood_draws
from mofwe import likelihood
from mofwe.datasets import builtin_dataset
from mofwe.errors import DataError, DomainError, InferenceUnavailableError, LikelihoodError
from mofwe.estimation import (
    FitConfig,
    confidence_intervals,
    family_hessian,
    family_score,
    fit_mle,
    log_likelihood,
    observed_information,
    profile_loglik,
    score,
    with_level,
)
from mofwe.family import FWE, LFR, MOFWE, WEIBULL
from mofwe.properties import sample

DRAWS = random_likelihood_draws()
AARSET = builtin_dataset("aarset")
PUMPS = builtin_dataset("pumps")


@pytest.fixture(scope="module")
def aarset_fit():
    return fit_mle(AARSET)


class TestLogLikelihood:
    def test_single_observation(self):
        assert log_likelihood([1.0], (1, 1, 1)) == pytest.approx(math.log(2) - 1, rel=1e-15)

    @pytest.mark.parametrize("k", range(0, 50, 7))
    def test_routes_agree(self, k):
        x, p = DRAWS[k]
        direct = float(np.sum(likelihood.mofwe_loglik_terms(x, p)))
        assert log_likelihood(x, p) == pytest.approx(direct, rel=1e-9)
        assert log_likelihood(x, p) == pytest.approx(float(mp_loglik(x, p)), rel=1e-12)

    def test_non_finite_reports_index(self):
        with pytest.raises(LikelihoodError) as err:
            log_likelihood([1.0, 2.0, 1e6], (1, 1, 1))
        assert err.value.index == 2

    def test_printed_aarset_value(self):
        assert log_likelihood(AARSET, (0.017, 0.401, 9.043)) == pytest.approx(-223.755, abs=0.01)


class TestDerivatives:
    def test_theta_score_hand_value(self):
        assert score([1.0], (1, 1, 1))[2] == pytest.approx(1 - 2 / math.e, rel=1e-14)

    @pytest.mark.parametrize("k", range(50))
    def test_score_matches_finite_differences(self, k):
        x, p = DRAWS[k]
        fd = fd_gradient(lambda q: log_likelihood(x, q), p, rel=1e-6)
        np.testing.assert_allclose(score(x, p), fd, rtol=1e-5)

    @pytest.mark.parametrize("k", range(0, 50, 5))
    def test_information_matches_finite_difference_hessian(self, k):
        x, p = DRAWS[k]
        np.testing.assert_allclose(-observed_information(x, p), fd_hessian_mp(x, p), rtol=1e-4)

    @pytest.mark.parametrize("k", range(0, 50, 5))
    def test_information_matches_double_precision_stencil(self, k):
        # a wider step keeps double-precision rounding out of the stencil
        x, p = DRAWS[k]
        fd = fd_hessian(lambda q: log_likelihood(x, q), p, rel=1e-4)
        np.testing.assert_allclose(-observed_information(x, p), fd, rtol=1e-5)

    def test_information_symmetric(self):
        x, p = DRAWS[3]
        info = observed_information(x, p)
        assert np.array_equal(info, info.T)

    @pytest.mark.parametrize("fam, p", [(FWE, (0.3, 0.8)), (WEIBULL, (0.5, 1.4)), (LFR, (0.2, 0.3))])
    def test_comparator_scores(self, fam, p):
        x = sample(30, 4, (0.4, 0.9, 1.5))
        fd = fd_gradient(lambda q: fam.loglik(x, q), p)
        np.testing.assert_allclose(family_score(fam, x, p), fd, rtol=1e-5)
        H = family_hessian(fam, x, p)
        np.testing.assert_allclose(H, fd_hessian(lambda q: fam.loglik(x, q), p, rel=1e-4), rtol=1e-4)

    def test_printed_theta_theta_entry_sign(self):
        # the printed second derivative in theta carries +2 s^2/D^2 with the wrong sign;
        # the finite-difference value confirms the sign used here
        x, p = np.array([2.0, 3.0, 5.0]), (0.3, 0.5, 2.0)
        a, b, t = p
        s = np.exp(-np.exp(a * x - b / x))
        D = 1 - (1 - t) * s
        ours = np.sum(-1 / t**2 + 2 * s**2 / D**2)
        flipped = np.sum(-1 / t**2 - 2 * s**2 / D**2)
        fd = fd_hessian(lambda q: log_likelihood(x, q), p, rel=1e-4)[2, 2]
        assert ours == pytest.approx(fd, rel=1e-6)
        assert abs(flipped - fd) > 0.1 * abs(fd)


class TestFitConfig:
    @pytest.mark.parametrize("kwargs", [{"gtol": 0}, {"max_iter": 0}, {"multistart": 0}, {"level": 1.0}])
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            FitConfig(**kwargs)


class TestFit:
    def test_aarset_reference(self, aarset_fit):
        f = aarset_fit
        assert f.converged
        assert f.log_likelihood >= log_likelihood(AARSET, (0.017, 0.401, 9.043))
        a, b, t = f.estimates
        assert abs(a - 0.017) <= 0.002 and abs(b - 0.401) <= 0.04 and abs(t - 9.043) <= 1.0
        assert np.max(np.abs(score(AARSET, f.estimates))) < 1e-3
        assert f.score_sup_norm < 1e-8 * (1 + abs(f.log_likelihood))

    def test_aarset_information(self, aarset_fit):
        info = aarset_fit.observed_info
        assert np.array_equal(info, info.T)
        eig = np.linalg.eigvalsh(info)
        assert np.all(eig > 0)
        cov = aarset_fit.covariance
        np.testing.assert_allclose(cov, cov.T, rtol=0, atol=0)
        for est, (lo, hi) in zip(aarset_fit.estimates, aarset_fit.confidence_intervals):
            assert lo < est < hi

    def test_pumps_reference(self):
        f = fit_mle(PUMPS)
        assert f.converged and f.log_likelihood >= -30.27
        a, b, t = f.estimates
        assert abs(a - 0.216) <= 0.02 and abs(b - 0.235) <= 0.03 and abs(t - 1.296) <= 0.2

    def test_deterministic_and_permutation_invariant(self, aarset_fit):
        again = fit_mle(AARSET)
        assert again.estimates == aarset_fit.estimates
        shuffled = np.random.default_rng(0).permutation(AARSET.array())
        perm = fit_mle(shuffled)
        assert perm.estimates == aarset_fit.estimates
        assert perm.log_likelihood == aarset_fit.log_likelihood

    def test_explicit_initial_point(self, aarset_fit):
        f = fit_mle(AARSET, config=FitConfig(initial=(0.02, 0.5, 8.0)))
        np.testing.assert_allclose(f.estimates, aarset_fit.estimates, rtol=1e-6)

    def test_level_rescaling(self, aarset_fit):
        zero = with_level(aarset_fit, 0.0)
        for est, (lo, hi) in zip(zero.estimates, zero.confidence_intervals):
            assert lo == est == hi
        wide = confidence_intervals(aarset_fit, 0.99)
        for (lo95, hi95), (lo99, hi99) in zip(aarset_fit.confidence_intervals, wide):
            assert lo99 < lo95 and hi99 > hi95
        z = 1.959964
        np.testing.assert_allclose(
            [hi - est for est, (_, hi) in zip(aarset_fit.estimates, aarset_fit.confidence_intervals)],
            [z * se for se in aarset_fit.std_errors], rtol=1e-6)

    def test_no_convergence_is_reported(self):
        f = fit_mle(AARSET, config=FitConfig(gtol=1e-300))
        assert not f.converged
        assert "best incumbent" in f.message
        assert math.isfinite(f.log_likelihood)

    def test_too_few_observations(self):
        with pytest.raises(DataError):
            fit_mle([1.0, 2.0, 3.0])

    def test_degenerate_data_downgrades(self):
        f = fit_mle([2.0, 2.0, 2.0, 2.0])
        assert f.n == 4
        if not f.info_positive_definite:
            assert f.covariance is None
            with pytest.raises(InferenceUnavailableError):
                confidence_intervals(f)

    def test_synthetic_recovery(self):
        truth = (0.05, 2.0, 3.0)
        f = fit_mle(sample(2000, 2024, truth))
        assert f.converged
        for est, se, t in zip(f.estimates, f.std_errors, truth):
            assert abs(est - t) < 3 * se

    @pytest.mark.parametrize("fam", [FWE, WEIBULL])
    def test_comparators_converge_on_aarset(self, fam):
        f = fit_mle(AARSET, fam)
        assert f.converged
        assert f.covariance is not None

    def test_mofwe_params_accessor(self, aarset_fit):
        assert aarset_fit.mofwe_params().theta == aarset_fit.estimates[2]
        with pytest.raises(Exception):
            fit_mle(AARSET, FWE).mofwe_params()


class TestProfile:
    def test_value_at_mle_and_perturbed(self, aarset_fit):
        est = aarset_fit.params
        for name in ("alpha", "beta", "theta"):
            grid = [0.9 * est[name], est[name], 1.1 * est[name]]
            curve = profile_loglik(AARSET, name, grid, fit=aarset_fit)
            assert curve.kind == "profile"
            assert curve.y[1] == pytest.approx(aarset_fit.log_likelihood, rel=1e-14)
            assert curve.y[0] < curve.y[1] and curve.y[2] < curve.y[1]

    def test_theta_profile_unimodal(self, aarset_fit):
        grid = np.geomspace(1, 30, 60)
        y = np.array(profile_loglik(AARSET, "theta", grid, fit=aarset_fit).y)
        signs = np.sign(np.diff(y))
        assert np.count_nonzero(np.diff(signs) != 0) == 1
        step = np.diff(grid).max()
        assert abs(grid[np.argmax(y)] - aarset_fit.params["theta"]) <= step

    def test_optimized_dominates_fixed(self, aarset_fit):
        grid = np.geomspace(3, 20, 6)
        fixed = profile_loglik(AARSET, "theta", grid, fit=aarset_fit)
        opt = profile_loglik(AARSET, "theta", grid, fit=aarset_fit, mode="optimized")
        assert all(o >= f - 1e-9 for o, f in zip(opt.y, fixed.y))

    def test_bad_inputs(self, aarset_fit):
        with pytest.raises(DomainError):
            profile_loglik(AARSET, "gamma", [1.0], fit=aarset_fit)
        with pytest.raises(DomainError):
            profile_loglik(AARSET, "theta", [-1.0, 1.0], fit=aarset_fit)
        with pytest.raises(DomainError):
            profile_loglik(AARSET, "theta", [1.0], fit=aarset_fit, mode="both")


def test_printed_alpha_interval_contradicts_printed_variance():
    # a Wald interval built from the printed variance is ~21% wider than the printed one,
    # and even a variance 15% lower cannot bring it within 10% of half-width 0.002
    z = 1.959963984540054
    assert z * math.sqrt(1.523e-6) == pytest.approx(0.002419, abs=1e-6)
    assert z * math.sqrt(0.85 * 1.523e-6) > 1.1 * 0.002
    # the interval rounded to three decimals is what is printed
    lo, hi = 0.017011 - 0.002416, 0.017011 + 0.002416
    assert (round(lo, 3), round(hi, 3)) == (0.015, 0.019)
