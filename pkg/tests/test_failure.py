import numpy as np
import pytest

from condens.models import FailureModel, FailureSpec
from condens.models.failure import (
    connectivity_structure,
    parallel_structure,
    series_structure,
)
from condens.models.san import default_san_spec


def rand_perms(rng, n, d):
    return np.argsort(rng.random((n, d)), axis=1)


class TestFailureSpec:
    def test_series_critical_number_is_one(self):
        spec = FailureSpec((1.0,) * 5, series_structure)
        rng = np.random.default_rng(149)
        assert (spec.critical_numbers(rand_perms(rng, 200, 5)) == 1).all()

    def test_parallel_critical_number_is_d(self):
        spec = FailureSpec((1.0,) * 5, parallel_structure)
        rng = np.random.default_rng(151)
        assert (spec.critical_numbers(rand_perms(rng, 200, 5)) == 5).all()

    def test_forward_and_reverse_scans_agree(self):
        san = default_san_spec()
        spec = FailureSpec((1.0,) * 13, connectivity_structure(san))
        rng = np.random.default_rng(157)
        perms = rand_perms(rng, 500, 13)
        assert (spec.critical_numbers(perms) == spec.forward_critical_numbers(perms)).all()

    def test_never_failing_structure_rejected(self):
        with pytest.raises(ValueError, match="never fails"):
            FailureSpec((1.0, 1.0), lambda s: np.ones(np.atleast_2d(s).shape[0], bool))

    def test_non_monotone_structure_rejected(self):
        def parity(states):
            states = np.atleast_2d(states)
            return states.sum(axis=1) % 2 == 0

        with pytest.raises(ValueError):
            FailureSpec((1.0,) * 4, parity)


class TestFailureModel:
    def test_13arc_rate_ladder(self):
        # lambda_j = 1 for all j: Lambda_j = 14 - j along every path
        m = FailureModel()
        rng = np.random.default_rng(163)
        _, c, lam = m.simulate_order(rng.random((50, 13)))
        for i in range(50):
            assert np.allclose(lam[i, : c[i]], 14.0 - np.arange(1, c[i] + 1))
            assert 1 <= c[i] <= 13

    def test_rates_strictly_decreasing(self):
        spec = FailureSpec((0.5, 1.5, 2.5, 3.5), parallel_structure)
        m = FailureModel(spec, interval=(1e-9, 10.0))
        rng = np.random.default_rng(167)
        _, c, lam = m.simulate_order(rng.random((100, 4)))
        assert (np.diff(lam, axis=1) < 0).all()
        assert lam[:, 0] == pytest.approx(8.0)

    def test_parallel_exact_density(self):
        # max of three Exp(1): f(x) = 3 (1 - e^-x)^2 e^-x; the conditional
        # density is deterministic here, so the match is exact
        m = FailureModel(FailureSpec((1.0,) * 3, parallel_structure), interval=(1e-9, 5.0))
        rng = np.random.default_rng(173)
        x = np.array([0.5, 1.0, 2.0, 3.0])
        est = m.cde_matrix(rng.random((50, 3)), x)
        exact = 3 * (1 - np.exp(-x)) ** 2 * np.exp(-x)
        assert np.allclose(est, exact[None, :], rtol=1e-10)

    def test_series_exact_density(self):
        # min of three Exp(1) is Exp(3)
        m = FailureModel(FailureSpec((1.0,) * 3, series_structure), interval=(1e-9, 3.0))
        rng = np.random.default_rng(179)
        x = np.array([0.1, 0.5, 1.0])
        est = m.cde_matrix(rng.random((20, 3)), x)
        assert np.allclose(est, (3 * np.exp(-3 * x))[None, :], rtol=1e-10)

    def test_unbiased_on_13arc_network(self):
        m = FailureModel()
        rng = np.random.default_rng(181)
        n = 100_000
        x = np.array([0.2, 0.5, 1.0, 1.5])
        est = m.cde_matrix(rng.random((n, 13)), x)
        mean = est.mean(0)
        se = est.std(0, ddof=1) / np.sqrt(n)
        xs = m.sample_x(rng.random((2 * 10 ** 6, 13)))
        bw = 0.02
        brute = np.array([((xs > v - bw / 2) & (xs <= v + bw / 2)).mean() / bw for v in x])
        brute_se = np.sqrt(brute / (2 * 10 ** 6 * bw))
        z = np.abs(mean - brute) / np.hypot(se, brute_se)
        assert (z < 4).all()

    def test_sample_x_is_cth_order_statistic(self):
        m = FailureModel(FailureSpec((1.0,) * 3, series_structure), interval=(1e-9, 3.0))
        rng = np.random.default_rng(191)
        u = rng.random((100, 3))
        xs = m.sample_x(u)
        y = -np.log1p(-u)
        assert np.allclose(xs, y.min(axis=1))
