import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from visnir_fusion.core import DimensionMismatch, box_mean
from visnir_fusion.decomposition import (FilterParams, decompose, edge_aware_weight,
                                         guided_filter, weighted_guided_filter)

from oracles import naive_guided_filter


def step_image(h=64, w=64, lo=0.0, hi=1.0):
    x = np.full((h, w), lo)
    x[:, w // 2:] = hi
    return x


@pytest.mark.parametrize("radius,eps", [(1, 1e-4), (4, 0.1), (12, 1e3)])
def test_guided_filter_keeps_constants(radius, eps):
    x = np.full((16, 20), 0.3)
    assert np.array_equal(guided_filter(x, x, radius, eps), x)


def test_guided_filter_large_eps_is_cascaded_box(rng):
    x = rng.random((24, 24))
    out = guided_filter(x, x, 2, 1e6)
    np.testing.assert_allclose(out, box_mean(box_mean(x, 2), 2), atol=1e-4)


def test_guided_filter_matches_window_oracle(rng):
    x = rng.random((16, 16))
    np.testing.assert_allclose(guided_filter(x, x, 2, 0.01),
                               naive_guided_filter(x, x, 2, 0.01), atol=1e-7)


def test_guided_filter_cross_guided_matches_oracle(rng):
    g, p = rng.random((12, 14)), rng.random((12, 14))
    np.testing.assert_allclose(guided_filter(g, p, 2, 0.05),
                               naive_guided_filter(g, p, 2, 0.05), atol=1e-7)


def test_guided_filter_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        guided_filter(np.zeros((4, 4)), np.zeros((4, 5)), 1, 0.1)
    with pytest.raises(DimensionMismatch):
        weighted_guided_filter(np.zeros((4, 4)), np.zeros((5, 4)), 1, 0.1, 1e-6)


def test_edge_aware_weight_constant_is_one():
    np.testing.assert_allclose(edge_aware_weight(np.full((10, 10), 0.5), 2, 1e-6), 1.0)


def test_edge_aware_weight_larger_on_edges():
    x = step_image(32, 32)
    gamma = edge_aware_weight(x, 2, 1e-6)
    assert gamma[:, 15:17].min() > gamma[:, :8].max()
    assert gamma[:, 15:17].min() > gamma[:, -8:].max()


def test_edge_aware_weight_reciprocal_mean_is_one(rng):
    gamma = edge_aware_weight(rng.random((40, 30)), 2, 1e-6)
    assert gamma.min() > 0
    assert np.mean(1.0 / gamma) == pytest.approx(1.0, abs=1e-6)


def test_wgif_keeps_constants():
    x = np.full((12, 12), 0.8)
    assert np.array_equal(weighted_guided_filter(x, x, 2, 1e-3, 1e-6), x)


def test_wgif_unit_weight_is_gif(rng):
    x = rng.random((30, 30))
    out = weighted_guided_filter(x, x, 3, 1e-2, 1e-6, weight=np.ones_like(x))
    np.testing.assert_allclose(out, guided_filter(x, x, 3, 1e-2), rtol=0, atol=1e-9)


def test_wgif_constant_guide_weight_reduces_to_gif():
    # Gamma computed from a constant plane is identically 1
    gamma = edge_aware_weight(np.full((20, 20), 0.1), 3, 1e-6)
    x = np.random.default_rng(5).random((20, 20))
    out = weighted_guided_filter(x, x, 3, 1e-2, 1e-6, weight=gamma)
    np.testing.assert_allclose(out, guided_filter(x, x, 3, 1e-2), atol=1e-9)


def test_wgif_preserves_step_and_smooths_noise(rng):
    clean = step_image(64, 64)
    x = clean + rng.normal(0, 0.02, clean.shape)
    out = weighted_guided_filter(x, x, 3, 1e-2, 1e-6)
    jump_in = clean[:, 32].mean() - clean[:, 31].mean()
    jump_out = out[:, 32].mean() - out[:, 31].mean()
    assert abs(jump_out - jump_in) <= 0.05 * jump_in
    flat = np.s_[:, 4:24]
    assert out[flat].var() <= 0.5 * x[flat].var()


def test_decompose_constant():
    x = np.full((20, 20), 0.25)
    s = decompose(x)
    assert np.array_equal(s.base1, x) and np.array_equal(s.base2, x)
    assert not s.detail.any() and not s.edge.any()


def test_decompose_reconstructs(rng):
    x = rng.random((48, 40))
    s = decompose(x)
    assert np.abs(x - (s.base2 + s.edge + s.detail)).max() <= 1e-6
    assert np.abs(x - s.reconstruct()).max() <= 1e-6


def test_decompose_band_split(rng):
    noise = rng.normal(0, 0.01, (64, 64))
    x = step_image(64, 64, 0.4, 0.6) + noise
    s = decompose(x)
    band = np.zeros(x.shape, bool)
    band[:, 24:40] = True
    e1, e2 = s.detail ** 2, s.edge ** 2
    # texture layer: spread like the noise, and tracking it
    assert e1[~band].sum() / e1.sum() >= 0.75
    assert np.corrcoef(s.detail[~band], noise[~band])[0, 1] > 0.5
    # edge layer: concentrated on the step
    assert e2[band].sum() / e2.sum() >= 0.7


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31), st.integers(6, 40), st.integers(6, 40))
def test_filters_are_conservative_and_smoothing(seed, h, w):
    x = np.random.default_rng(seed).random((h, w))
    p = FilterParams()
    r1 = weighted_guided_filter(x, x, p.wgif_radius, p.wgif_eps, p.wgif_lambda)
    r2 = guided_filter(r1, r1, p.gif_radius, p.gif_eps)
    for out, src in ((r1, x), (r2, r1)):
        assert out.min() >= src.min() - 1e-6
        assert out.max() <= src.max() + 1e-6
        assert out.var() <= src.var()


def test_filter_params_validation():
    with pytest.raises(ValueError):
        FilterParams(wgif_radius=0)
    with pytest.raises(ValueError):
        FilterParams(gif_eps=0.0)
    with pytest.raises(ValueError):
        FilterParams(wgif_lambda=-1.0)
