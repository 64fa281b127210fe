import math

import numpy as np
import pytest

from condens.models import SumNormalsModel, SumUniformsModel, sum_uniforms_exact_iv
from condens.models.base import conditional_density

PHI0 = 1.0 / math.sqrt(2 * math.pi)


class TestSumNormals:
    def test_formula_at_zero_arguments(self):
        # d=2, a=(1,1), hide 2, Z1=0, x=0: sqrt(2) phi(0)
        m = SumNormalsModel((1.0, 1.0), hide=2)
        val = m.cde_matrix(np.array([[0.5]]), np.array([0.0]))[0, 0]
        assert val == pytest.approx(math.sqrt(2) * PHI0, rel=1e-9)

    def test_vanishes_in_the_tails(self):
        m = SumNormalsModel((1.0, 1.0), hide=2)
        far = m.cde_matrix(np.array([[0.5]]), np.array([-40.0, 40.0]))
        assert np.abs(far).max() < 1e-200

    def test_gauss_hermite_mean_is_phi(self):
        # E over Z1 of the conditional density at x=0 equals phi(0); use
        # Gauss-Hermite quadrature as the oracle
        from numpy.polynomial.hermite_e import hermegauss
        from scipy.special import ndtr

        m = SumNormalsModel((1.0, 1.0), hide=2)
        nodes, weights = hermegauss(80)
        u = ndtr(nodes)[:, None]
        vals = m.cde_matrix(u, np.array([0.0]))[:, 0]
        mean = (weights * vals).sum() / math.sqrt(2 * math.pi)
        assert mean == pytest.approx(PHI0, rel=1e-10)

    def test_exact_variance_values(self):
        # sigma1^2 = sigma2^2 = 1/2 at x=0: phi(0)/sqrt(0.5 * 2 pi * 1.5) - phi(0)^2
        m = SumNormalsModel((1.0, 1.0), hide=2)
        direct = PHI0 / math.sqrt(0.5 * 2 * math.pi * 1.5) - PHI0 ** 2
        assert m.exact_cde_variance(0.0) == pytest.approx(direct, rel=1e-12)
        assert m.exact_cde_variance(0.0) == pytest.approx(0.024620, abs=3e-6)
        # vanishes for large x and when everything is hidden (d=1)
        assert m.exact_cde_variance(50.0) == pytest.approx(0.0, abs=1e-200)
        m1 = SumNormalsModel((1.0,), hide=1)
        x = np.linspace(-2, 2, 9)
        assert np.abs(m1.exact_cde_variance(x)).max() < 1e-12

    def test_exact_variance_matches_empirical(self):
        m = SumNormalsModel((1.0, 1.0), hide=2)
        rng = np.random.default_rng(21)
        u = rng.random((10 ** 6, 1))
        x = np.array([-1.0, 0.0, 1.0])
        vals = m.cde_matrix(u, x)
        emp = vals.var(axis=0, ddof=1)
        # std error of a variance estimate from fourth moments
        centered = vals - vals.mean(axis=0)
        se = np.sqrt(((centered ** 2 - emp) ** 2).mean(axis=0) / len(u))
        assert (np.abs(emp - m.exact_cde_variance(x)) < 3 * se).all()

    def test_cdf_density_consistency(self):
        m = SumNormalsModel((2.0, 1.0, 0.5), hide=1)
        cd = conditional_density(m, np.array([0.3, 0.8]))
        x = np.linspace(-1.5, 1.5, 7)
        h = 1e-5
        num = (cd.cdf(x + h) - cd.cdf(x - h)) / (2 * h)
        assert np.allclose(num, cd.density(x), rtol=1e-4)

    def test_negative_coefficient_cdf_still_monotone(self):
        m = SumNormalsModel((1.0, -1.0), hide=2)
        cd = conditional_density(m, np.array([0.25]))
        x = np.linspace(-2, 2, 41)
        assert (np.diff(cd.cdf(x)) >= 0).all()

    def test_glr_weight_formula(self):
        # psi = -Z_k sigma / a_k with threshold X
        m = SumNormalsModel((1.0, 1.0), hide=2)
        rng = np.random.default_rng(3)
        u = rng.random((10 ** 6, 2))
        vals = m.glr_matrix(u, np.array([0.0]))[:, 0]
        se = vals.std(ddof=1) / 1000.0
        assert abs(vals.mean() - PHI0) < 4 * se

    def test_validation(self):
        with pytest.raises(ValueError):
            SumNormalsModel((1.0, 0.0), hide=1)
        with pytest.raises(ValueError):
            SumNormalsModel((1.0, 1.0), hide=3)


class TestSumUniforms:
    def test_indicator_inside_support(self):
        m = SumUniformsModel(eps=0.75, hide=1)
        # retained Y2 = 0.2 -> u = Y2/eps
        val = m.cde_matrix(np.array([[0.2 / 0.75]]), np.array([0.5]))[0, 0]
        assert val == 1.0

    def test_exact_iv_values(self):
        assert sum_uniforms_exact_iv(0.75, 1) == pytest.approx(0.25)
        assert sum_uniforms_exact_iv(0.75, 2) == pytest.approx(1 / 0.75 - 1 + 0.25)
        with pytest.raises(ValueError):
            sum_uniforms_exact_iv(1.5, 1)

    @pytest.mark.parametrize("hide", [1, 2])
    def test_empirical_iv_matches_exact(self, hide):
        eps = 0.75
        m = SumUniformsModel(eps=eps, hide=hide)
        rng = np.random.default_rng(17)
        u = rng.random((200_000, 1))
        grid = np.linspace(1e-9, 1 + eps - 1e-9, 512)
        vals = m.cde_matrix(u, grid)
        iv = vals.var(axis=0, ddof=1).mean() * (1 + eps)
        assert iv == pytest.approx(m.exact_iv(), rel=0.03)

    @pytest.mark.parametrize("eps", [0.75, 1.0 / 16.0])
    def test_variance_ordering_hide_less_informative(self, eps):
        # hiding the small-variance term concentrates the conditional
        # density and inflates the estimator variance at every grid point
        rng = np.random.default_rng(19)
        u = rng.random((200_000, 1))
        grid = np.linspace(0.05, 0.95, 12)
        v1 = SumUniformsModel(eps, 1).cde_matrix(u, grid).var(axis=0, ddof=1)
        v2 = SumUniformsModel(eps, 2).cde_matrix(u, grid).var(axis=0, ddof=1)
        assert (v1 <= v2).all()

    def test_exact_density_shape(self):
        m = SumUniformsModel(eps=0.5, hide=1)
        x = np.array([0.25, 0.75, 1.25, 1.6])
        assert np.allclose(m.exact_density(x), [0.5, 1.0, 0.5, 0.0])

    def test_unbiased_against_exact_density(self):
        m = SumUniformsModel(eps=0.75, hide=1)
        rng = np.random.default_rng(23)
        u = rng.random((300_000, 1))
        x = np.linspace(0.1, 1.6, 5)
        vals = m.cde_matrix(u, x)
        se = vals.std(axis=0, ddof=1) / math.sqrt(len(u))
        # the flat stretch of the density has zero estimator variance
        assert (np.abs(vals.mean(axis=0) - m.exact_density(x)) <= 4 * se + 1e-12).all()

    def test_cdf_matches_density(self):
        m = SumUniformsModel(eps=0.75, hide=2)
        cd = conditional_density(m, np.array([0.4]))
        x = np.linspace(0.45, 1.1, 9)  # stay clear of the kinks
        h = 1e-6
        num = (cd.cdf(x + h) - cd.cdf(x - h)) / (2 * h)
        assert np.allclose(num, cd.density(x), rtol=1e-4, atol=1e-8)
