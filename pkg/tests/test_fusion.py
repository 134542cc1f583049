import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from visnir_fusion.complementarity import StructureMaps
from visnir_fusion.core import DimensionMismatch, ImagePair
from visnir_fusion.decomposition import decompose
from visnir_fusion.fusion import (ArctanIParams, arctan_i, fuse_layers, fuse_pair,
                                  fusion_weights, reconstruct, run_fusion)
from visnir_fusion.metrics import psnr
from visnir_fusion.synthetic import make_gray_pair, make_triple

unit = st.floats(0.0, 1.0)


def maps_from(dog_c, dog_n):
    return StructureMaps(dog_c={c: [dog_c, dog_c] for c in "rgb"}, dog_n=[dog_n, dog_n])


@pytest.mark.parametrize("y", [0.0, 0.3, 0.999, 1.0])
def test_arctan_i_zero_numerator(y):
    assert arctan_i(0.0, y) == 0.0


def test_arctan_i_reference_point():
    # atan(1) / (atan(1) + 0.5), evaluated by hand
    assert arctan_i(1.0, 0.0, ArctanIParams(alpha=0.5)) == pytest.approx(0.6110154703516573, abs=1e-12)


def test_arctan_i_decreases_with_nir_structure():
    vals = [arctan_i(0.8, y) for y in (0.1, 0.5, 0.9)]
    assert vals == pytest.approx([0.5500714591741184, 0.44619909781197675, 0.3466536242550031])
    assert vals[2] < vals[1] < vals[0]


def test_arctan_i_clamps_y():
    p = ArctanIParams()
    assert arctan_i(0.5, 1.0, p) == arctan_i(0.5, 1 - p.y_clamp, p)
    assert np.isfinite(arctan_i(1.0, 1.0, p))


@settings(max_examples=200, deadline=None)
@given(unit, unit, unit, st.floats(0.01, 5.0))
def test_arctan_i_properties(x, y1, y2, alpha):
    p = ArctanIParams(alpha=alpha)
    lo, hi = sorted((y1, y2))
    a, b = arctan_i(x, lo, p), arctan_i(x, hi, p)
    assert 0.0 <= a < 1.0 and 0.0 <= b < 1.0
    assert b <= a


def test_arctan_params_validation():
    with pytest.raises(ValueError):
        ArctanIParams(alpha=0.0)
    with pytest.raises(ValueError):
        ArctanIParams(y_clamp=1.0)


def test_fusion_weights_zero_visible_structure(rng):
    w = fusion_weights(maps_from(np.zeros((6, 6)), rng.random((6, 6))))
    for c in "rgb":
        assert not w[c][0].any() and not w[c][1].any()


def test_fusion_weights_reference_plane():
    w = fusion_weights(maps_from(np.ones((5, 5)), np.zeros((5, 5))), ArctanIParams(alpha=0.5))
    np.testing.assert_allclose(w["g"][1], 0.6110154703516573, atol=1e-12)


def test_fusion_weights_all_zero_maps_no_nan():
    w = fusion_weights(maps_from(np.zeros((4, 4)), np.zeros((4, 4))))
    assert all(np.isfinite(p).all() for c in "rgb" for p in w[c])


def test_fusion_weights_range(rng):
    w = fusion_weights(maps_from(rng.random((30, 30)), rng.random((30, 30))))
    for c in "rgb":
        for p in w[c]:
            assert p.min() >= 0 and p.max() < 1


def test_fuse_layers_endpoints(rng):
    dc, dn = rng.normal(size=(8, 8)), rng.normal(size=(8, 8))
    assert np.array_equal(fuse_layers(dc, dn, np.ones((8, 8))), dc)
    assert np.array_equal(fuse_layers(dc, dn, np.zeros((8, 8))), dn)


def test_fuse_layers_equal_inputs(rng):
    d = rng.normal(size=(8, 8))
    np.testing.assert_allclose(fuse_layers(d, d, rng.random((8, 8))), d, atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31))
def test_fuse_layers_between_inputs(seed):
    rng = np.random.default_rng(seed)
    dc, dn, w = rng.normal(size=(6, 7)), rng.normal(size=(6, 7)), rng.random((6, 7))
    out = fuse_layers(dc, dn, w)
    assert np.all(out >= np.minimum(dc, dn) - 1e-12)
    assert np.all(out <= np.maximum(dc, dn) + 1e-12)


def test_fuse_layers_mismatch():
    with pytest.raises(DimensionMismatch):
        fuse_layers(np.zeros((3, 3)), np.zeros((3, 3)), np.zeros((3, 2)))


def test_reconstruct_own_layers(rng):
    x = rng.random((30, 30))
    s = decompose(x)
    np.testing.assert_allclose(reconstruct(s.base2, s.edge, s.detail), x, atol=1e-6)


def test_reconstruct_zero_details(rng):
    base = rng.random((9, 9))
    z = np.zeros((9, 9))
    assert np.array_equal(reconstruct(base, z, z), base)


def test_reconstruct_clamps_only_when_asked():
    base = np.full((2, 2), 0.9)
    d = np.full((2, 2), 0.1)
    assert np.array_equal(reconstruct(base, d, d), np.ones((2, 2)))
    np.testing.assert_allclose(reconstruct(base, d, d, clamp=False), 1.1)


def test_fuse_pair_gray_identity():
    pair = make_gray_pair(48)
    fused = fuse_pair(pair, clamp=False)
    np.testing.assert_allclose(fused, pair.visible, atol=1e-6)


def test_fuse_pair_denoises_dark_region():
    t = make_triple(128, seed=3)
    fused = fuse_pair(t.pair)
    assert psnr(fused, t.truth) >= psnr(t.pair.visible, t.truth)


def test_fuse_pair_does_not_import_nir_base():
    # shifting NIR by a constant changes only its base layers
    t = make_triple(64, seed=1)
    brighter = ImagePair(t.pair.vis_r, t.pair.vis_g, t.pair.vis_b,
                         np.clip(t.pair.nir + 0.2, 0, 1))
    a = fuse_pair(t.pair, clamp=False)
    b = fuse_pair(brighter, clamp=False)
    # weights may move, but the mean brightness stays with the visible base
    assert abs(a.mean() - b.mean()) < 0.01


def test_run_fusion_timings_and_shape(rng):
    pair = ImagePair.from_arrays(rng.random((20, 24, 3)), rng.random((20, 24)))
    result = run_fusion(pair)
    assert result.image.shape == (20, 24, 3)
    assert set(result.timings) == {"decompose", "xdog", "weights", "fuse", "total"}
    assert result.image.min() >= 0 and result.image.max() <= 1
