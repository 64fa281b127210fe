import numpy as np
import pytest

from condens.models import SanModel
from condens.models.san import ArcDistribution, SanSpec, default_san_spec, load_san_spec


def exp_arcs(k):
    return [ArcDistribution("expon", (1.0,)) for _ in range(k)]


def toy_spec(cut):
    # 0 -> 1 -> 3 and 0 -> 2 -> 3
    return SanSpec(nodes=4, arcs=[(0, 1), (0, 2), (1, 3), (2, 3)],
                   dists=exp_arcs(4), cut=cut)


class TestSanSpec:
    def test_valid_cut_accepted(self):
        toy_spec([2, 3])
        toy_spec([0, 1])

    def test_invalid_cut_rejected(self):
        with pytest.raises(ValueError, match="uniformly directed cut"):
            toy_spec([0, 2])   # path 0-1-3 crosses both arcs
        with pytest.raises(ValueError, match="uniformly directed cut"):
            toy_spec([0])      # path 0-2-3 never crosses

    def test_unique_source_sink_enforced(self):
        with pytest.raises(ValueError, match="unique source"):
            SanSpec(nodes=4, arcs=[(0, 2), (1, 2), (2, 3)], dists=exp_arcs(3), cut=[2])

    def test_longest_path_vectorized(self):
        spec = toy_spec([2, 3])
        lengths = np.array([[1.0, 5.0, 1.0, 1.0], [4.0, 1.0, 4.0, 1.0]])
        assert np.allclose(spec.longest_path(lengths), [6.0, 8.0])

    def test_default_13_arc_graph(self):
        spec = default_san_spec()
        assert len(spec.arcs) == 13
        assert len(spec.cut) == 5
        assert spec.source == 0 and spec.sink == 8

    def test_cut_prefix_lengths(self):
        spec = toy_spec([2, 3])
        # P for cut arc (1,3) is Y_0 (the 0->1 arc); for (2,3) it is Y_1
        rest = np.array([[2.0, 3.0, 99.0, 99.0]])
        p = spec.cut_prefix_suffix(rest)
        assert np.allclose(p, [[2.0, 3.0]])


class TestSanModel:
    def test_singleton_cut_density_is_single_factor(self):
        # chain 0 -> 1 -> 2, cut = last arc: f(x|G) = f_1(x - Y_0)
        spec = SanSpec(nodes=3, arcs=[(0, 1), (1, 2)], dists=exp_arcs(2), cut=[1])
        m = SanModel(spec=spec, interval=(0.1, 6.0))
        u = np.array([[0.3]])
        y0 = -np.log1p(-0.3)
        x = np.array([1.0, 2.0])
        expect = np.where(x - y0 > 0, np.exp(-(x - y0)), 0.0)
        assert np.allclose(m.cde_matrix(u, x)[0], expect)

    def test_density_zero_left_of_support(self):
        spec = toy_spec([2, 3])
        m = SanModel(spec=spec, interval=(0.1, 6.0))
        u = np.array([[0.9, 0.9]])
        p = m.cut_lengths(u)
        x = np.array([p.min() * 0.5])
        assert m.cde_matrix(u, x)[0, 0] == 0.0

    def test_toy_graph_against_histogram(self):
        spec = toy_spec([2, 3])
        m = SanModel(spec=spec, interval=(0.2, 6.0))
        rng = np.random.default_rng(47)
        u = rng.random((100_000, 2))
        xs = np.array([0.5, 1.0, 2.0, 3.0, 4.0])
        est = m.cde_matrix(u, xs)
        mean = est.mean(axis=0)
        se = est.std(axis=0, ddof=1) / np.sqrt(len(u))
        big = rng.random((4 * 10 ** 6, 4))
        xsamp = m.sample_x(big)
        bw = 0.02
        brute = np.array([((xsamp > x - bw / 2) & (xsamp <= x + bw / 2)).mean() / bw
                          for x in xs])
        brute_se = np.sqrt(brute / (4 * 10 ** 6 * bw))
        z = np.abs(mean - brute) / np.hypot(se, brute_se)
        assert (z < 4).all()

    def test_cdf_continuity_and_monotonicity(self):
        m = SanModel()
        rng = np.random.default_rng(53)
        u = rng.random((64, m.cde_dim))
        grid = np.linspace(m.interval[0], m.interval[1], 800)
        cdf = m.cdf_matrix(u, grid)
        inc = np.diff(cdf, axis=1)
        assert (inc >= -1e-12).all()
        assert np.abs(inc).max() < 0.05  # no jumps on a fine grid

    def test_cdf_has_no_jumps_at_fine_scale(self):
        # the cut conditioning keeps the conditional cdf continuous in x:
        # increments over steps of 1e-7 stay below 1e-6 everywhere probed
        m = SanModel()
        rng = np.random.default_rng(61)
        u = rng.random((16, m.cde_dim))
        a, b = m.interval
        xs = rng.uniform(a, b, size=200)
        h = 1e-7
        lo = m.cdf_matrix(u, xs)
        hi = m.cdf_matrix(u, xs + h)
        assert np.abs(hi - lo).max() < 1e-6

    def test_hiding_one_variable_of_a_max_jumps(self):
        # negative control: conditioning a max on all-but-one input leaves
        # a cdf jump, so that conditioning is not admissible.
        # X = max(Y1, Y2) with Y2 hidden: F(x | Y1) = F2(x) 1[x >= Y1]
        from scipy.stats import expon

        y1 = 1.0

        def cond_cdf(x):
            x = np.asarray(x, dtype=float)
            return np.where(x >= y1, expon.cdf(x), 0.0)

        h = 1e-7
        jump = cond_cdf(y1 + h) - cond_cdf(y1 - h)
        assert jump > 0.5  # detectably discontinuous at x = Y1

    def test_interval_recomputed_for_default_table(self):
        m = SanModel()
        a, b = m.interval
        rng = np.random.default_rng(59)
        xs = m.sample_x(rng.random((50_000, m.sample_dim)))
        frac_inside = ((xs >= a) & (xs <= b)).mean()
        assert 0.93 <= frac_inside <= 0.97

    def test_json_schema_roundtrip(self):
        payload = {
            "nodes": 3,
            "arcs": [
                {"from": 0, "to": 1, "dist": {"type": "lognormal", "mu": 0.0, "sigma": 0.5}},
                {"from": 1, "to": 2, "dist": {"type": "expon", "rate": 2.0}},
            ],
            "cut": [1],
        }
        spec = load_san_spec(payload)
        assert spec.arcs == [(0, 1), (1, 2)]
        with pytest.raises(ValueError, match="unknown arc distribution"):
            load_san_spec({
                "nodes": 2,
                "arcs": [{"from": 0, "to": 1, "dist": {"type": "weibull", "k": 1}}],
                "cut": [0],
            })
