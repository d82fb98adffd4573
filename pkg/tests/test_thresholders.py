import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import random_images
from lesionfuse.imgcore import histogram
from lesionfuse.thresholders import (
    METHODS,
    DegenerateHistogram,
    binarize,
    huang_wang,
    kapur,
    kittler,
    otsu,
    run_ensemble,
)
from oracles import brute_threshold


def two_delta(a_count=5, b_count=5):
    return np.array([10] * a_count + [200] * b_count, dtype=np.uint8).reshape(1, -1)


@pytest.mark.parametrize("method", sorted(METHODS))
def test_two_delta_histogram_picks_lower_mode(method):
    assert METHODS[method](histogram(two_delta())).threshold == 10


def test_otsu_two_delta_plateau_value():
    r = otsu(histogram(two_delta(3, 3)))
    assert r.threshold == 10
    assert r.criterion_values[10] == pytest.approx(0.25 * 190**2)
    assert np.allclose(r.criterion_values[10:200], 0.25 * 190**2)
    assert np.isnan(r.criterion_values[9]) and np.isnan(r.criterion_values[200])


def test_huang_wang_perfect_membership_gives_zero():
    assert huang_wang(histogram(two_delta())).criterion_values[10] == 0.0


@pytest.mark.parametrize("method", sorted(METHODS))
def test_constant_image_is_degenerate(method):
    with pytest.raises(DegenerateHistogram):
        METHODS[method](histogram(np.full((3, 3), 128, np.uint8)))


@pytest.mark.parametrize("method", sorted(METHODS))
def test_matches_brute_force_scan(method):
    for img in random_images(30, (16, 16), seed=7):
        assert METHODS[method](histogram(img)).threshold == brute_threshold(img, method)


def test_kittler_gaussian_modes_match_brute_force():
    rng = np.random.default_rng(42)
    x = np.concatenate([rng.normal(60, 10, 500), rng.normal(180, 10, 500)])
    img = np.clip(np.rint(x), 0, 255).astype(np.uint8).reshape(20, 50)
    t = kittler(histogram(img)).threshold
    assert t == brute_threshold(img, "kittler")
    # the modes do not overlap in this sample, so the split must be clean
    assert img.ravel()[:500].max() <= t < img.ravel()[500:].min()


def test_threshold_is_a_candidate():
    for img in random_images(20, (8, 8), seed=3):
        h = histogram(img)
        for f in (otsu, kapur, kittler, huang_wang):
            t = f(h).threshold
            assert h.counts[: t + 1].sum() > 0 and h.counts[t + 1:].sum() > 0


@settings(max_examples=50)
@given(arrays(np.uint8, (6, 6)), st.randoms(use_true_random=False))
def test_histogram_only_dependence(img, rnd):
    if len(np.unique(img)) < 2:
        return
    perm = img.ravel().copy()
    rnd.shuffle(perm)
    shuffled = perm.reshape(img.shape)
    for f in (otsu, kapur, kittler, huang_wang):
        assert f(histogram(img)).threshold == f(histogram(shuffled)).threshold


def test_binarize():
    assert binarize(np.array([[0, 255]], np.uint8), 0).tolist() == [[True, False]]
    assert binarize(np.array([[100, 100]], np.uint8), 200).tolist() == [[True, True]]
    assert binarize(np.array([[0, 255]], np.uint8), 0, dark_object=False).tolist() == [[False, True]]
    with pytest.raises(ValueError):
        binarize(np.array([[0]], np.uint8), 255)


def test_binarize_constant_within_gap():
    img = np.array([[10, 10, 200, 200]], np.uint8)
    ref = binarize(img, 10)
    for t in range(10, 200):
        assert np.array_equal(binarize(img, t), ref)


def test_run_ensemble():
    img = two_delta()
    ens = run_ensemble(img)
    assert [r.method for r in ens.results] == ["huang_wang", "kapur", "kittler", "otsu"]
    assert ens.thresholds.tolist() == [10, 10, 10, 10]
    assert all(np.array_equal(m, ens.masks[0]) for m in ens.masks)
    assert len(run_ensemble(img, ["otsu"])) == 1
    with pytest.raises(ValueError):
        run_ensemble(img, [])
    with pytest.raises(DegenerateHistogram):
        run_ensemble(np.zeros((2, 2), np.uint8))


def test_deterministic():
    img = random_images(1, (16, 16), seed=11)[0]
    a = run_ensemble(img)
    b = run_ensemble(img)
    assert a.results == b.results
