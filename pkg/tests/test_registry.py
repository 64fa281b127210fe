import pytest

from condens.models import MODEL_NAMES, combo_columns, make_model, model_variants


def test_every_advertised_variant_is_constructible():
    for name in MODEL_NAMES:
        for variant in model_variants(name):
            m = make_model(name, variant)
            a, b = m.interval
            assert a < b
            assert m.variant == variant


def test_unknown_model_lists_options():
    with pytest.raises(ValueError, match="sum-normals"):
        make_model("nonesuch")


def test_unknown_asian_variant():
    with pytest.raises(ValueError, match="seq or bridge"):
        make_model("asian", "barrier")


def test_combo_columns_cover_all_variants():
    for name in ("cantilever", "buckling", "sum-normals"):
        dim, slices = combo_columns(name)
        for variant, cols in slices.items():
            assert len(cols) < dim
            assert all(0 <= c < dim for c in cols)
            sub = make_model(name, variant)
            assert sub.cde_dim == len(cols)
    with pytest.raises(ValueError):
        combo_columns("queue")


def test_interval_override():
    m = make_model("cantilever", "g-1", interval=(3.5, 5.0))
    assert m.interval == (3.5, 5.0)


def test_model_params_flow_through():
    m = make_model("sum-normals", "g-1", params={"a_vec": [2.0, 1.0, 0.5]})
    assert m.a_vec == (2.0, 1.0, 0.5)
    q = make_model("queue", "regen", params={"horizon": 30.0})
    assert q.params.regenerative
    assert q.params.horizon == 30.0
