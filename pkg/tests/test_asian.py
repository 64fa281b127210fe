import math

import numpy as np
import pytest

from condens.models import AsianBridgeModel, AsianParams, AsianSequentialModel
from condens.models.asian import GammaEvaluator, bridge_order, gamma_inverse_newton


class TestBridgeOrder:
    def test_midpoint_recursion_s12(self):
        order = bridge_order(12)
        assert order[0] == (0, 6, 12)
        assert order[1] == (0, 3, 6)
        assert order[2] == (6, 9, 12)
        mids = [m for _, m, _ in order]
        assert sorted(mids) == list(range(1, 12))

    def test_degenerate_s1(self):
        assert bridge_order(1) == []


class TestNewtonInversion:
    def test_exponential_root_at_zero(self):
        ev = GammaEvaluator(y0=np.zeros((1, 1)), coef=np.array([1.0]), s0=1.0, steps=1)
        z = gamma_inverse_newton(ev, np.array([1.0]), np.array([0.0]))
        assert z[0] == pytest.approx(0.0, abs=1e-12)

    def test_exponential_analytic_inverse(self):
        ev = GammaEvaluator(y0=np.zeros((1, 1)), coef=np.array([1.0]), s0=1.0, steps=1)
        z = gamma_inverse_newton(ev, np.array([math.e]), np.array([0.0]))
        assert z[0] == pytest.approx(1.0, abs=1e-10)

    def test_out_of_range_rejected(self):
        ev = GammaEvaluator(y0=np.zeros((1, 1)), coef=np.array([1.0]), s0=1.0, steps=1)
        with pytest.raises(ValueError, match="outside the range"):
            gamma_inverse_newton(ev, np.array([1e9]), np.array([0.0]), iters=2)

    def test_residuals_on_default_model(self):
        # 100 realizations x 128 grid points, residual < 1e-9 everywhere
        m = AsianBridgeModel()
        rng = np.random.default_rng(79)
        u = rng.random((100, 11))
        ev = m.gamma_evaluator(u)
        x = np.linspace(101.0, 128.13, 128)
        z = m._invert_grid(ev, x)
        worst = 0.0
        for j, xv in enumerate(x):
            r = np.abs(ev.value(z[:, j]) - xv) / max(1.0, xv)
            worst = max(worst, r.max())
        assert worst < 1e-9


class TestBridgeModel:
    def test_gamma_at_zero_is_baseline_sum(self):
        m = AsianBridgeModel()
        rng = np.random.default_rng(83)
        u = rng.random((5, 11))
        ev = m.gamma_evaluator(u)
        expect = m.params.s0 / m.params.steps * np.exp(ev.y0).sum(axis=1)
        assert np.allclose(ev.value(np.zeros(5)), expect)

    def test_gamma_strictly_increasing(self):
        m = AsianBridgeModel()
        rng = np.random.default_rng(89)
        ev = m.gamma_evaluator(rng.random((1000, 11)))
        for z in np.linspace(-6, 6, 13):
            assert (ev.slope(np.full(1000, z)) > 0).all()

    def test_degenerate_s1_closed_form(self):
        p = AsianParams(steps=1)
        m = AsianBridgeModel(p)
        ev = m.gamma_evaluator(np.zeros((1, 0)))
        for x in (95.0, 100.0, 104.0):
            z = gamma_inverse_newton(ev, np.array([x]), np.array([0.0]))
            z_exact = (math.log(x / p.s0) - p.mu) / p.sigma
            assert z[0] == pytest.approx(z_exact, abs=1e-10)
        # density equals the lognormal pdf
        x = np.array([98.0, 101.0, 105.0])
        dens = m.cde_matrix(np.zeros((1, 0)), x)[0]
        lx = (np.log(x / p.s0) - p.mu) / p.sigma
        lognorm = np.exp(-0.5 * lx ** 2) / (math.sqrt(2 * math.pi) * p.sigma * x)
        assert np.allclose(dens, lognorm, rtol=1e-8)

    def test_realization_normalizes(self):
        m = AsianBridgeModel()
        rng = np.random.default_rng(97)
        u = rng.random((3, 11))
        ev = m.gamma_evaluator(u)
        lo = ev.value(np.full(3, -8.0))
        hi = ev.value(np.full(3, 8.0))
        for i in range(3):
            g = np.linspace(lo[i] + 1e-9, hi[i] - 1e-9, 4000)
            vals = m.cde_matrix(u[i:i + 1], g)[0]
            assert np.trapezoid(vals, g) == pytest.approx(1.0, abs=1e-3)

    def test_bridge_sampler_matches_sequential_law(self):
        rng = np.random.default_rng(101)
        xb = AsianBridgeModel().sample_x(rng.random((100_000, 12)))
        xs = AsianSequentialModel().sample_x(rng.random((100_000, 12)))
        assert xb.mean() == pytest.approx(xs.mean(), abs=4 * 8.0 / math.sqrt(100_000) * 2)
        assert xb.std() == pytest.approx(xs.std(), rel=0.02)

    def test_positive_drift_required(self):
        with pytest.raises(ValueError, match="drift"):
            AsianBridgeModel(AsianParams(mu=-0.01))


class TestSequentialModel:
    def test_below_barrier_density_zero(self):
        m = AsianSequentialModel()
        rng = np.random.default_rng(103)
        u = rng.random((10, 11))
        assert (m.cde_matrix(u, np.array([10.0])) == 0.0).all()

    def test_s2_realization_normalizes(self):
        m = AsianSequentialModel(AsianParams(steps=2))
        rng = np.random.default_rng(107)
        u = rng.random((4, 1))
        wide = np.linspace(55.0, 240.0, 8000)
        mass = np.trapezoid(m.cde_matrix(u, wide), wide, axis=1)
        assert np.allclose(mass, 1.0, atol=1e-3)

    def test_grand_means_agree_with_bridge(self):
        rng = np.random.default_rng(109)
        n = 40_000
        x = np.linspace(102.0, 125.0, 5)
        eb = AsianBridgeModel().cde_matrix(rng.random((n, 11)), x)
        es = AsianSequentialModel().cde_matrix(rng.random((n, 11)), x)
        z = np.abs(eb.mean(0) - es.mean(0)) / np.hypot(
            eb.std(0, ddof=1) / math.sqrt(n), es.std(0, ddof=1) / math.sqrt(n)
        )
        assert (z < 4).all()

    def test_cdf_density_consistency(self):
        m = AsianSequentialModel()
        rng = np.random.default_rng(113)
        u = rng.random((1, 11))
        x = np.linspace(101.0, 126.0, 7)
        h = 1e-4
        num = (m.cdf_matrix(u, x + h) - m.cdf_matrix(u, x - h)) / (2 * h)
        dens = m.cde_matrix(u, x)
        mask = dens[0] > 1e-12
        assert np.allclose(num[0][mask], dens[0][mask], rtol=1e-4)
