import math

import numpy as np
import pytest

from facepipe import dcf
from facepipe.dcf import (
    CorrelationFilter,
    GaussianLabel,
    Patch,
    hann2d,
    preprocess,
    psr_value,
    respond,
    train_filter,
    update_filter,
)


def _dense_ridge(x, y, lam):
    """Spatial-domain oracle: the filter acts by circular convolution, so
    build the convolution circulant A[s, n] = x((s - n) mod N) blockwise
    and solve (AᵀA + λI)c = Aᵀy directly."""
    h, w = x.shape
    xrev = np.roll(x[::-1, ::-1], (1, 1), axis=(0, 1))
    A = np.zeros((h * w, h * w))
    for s1 in range(h):
        for s2 in range(w):
            A[s1 * w + s2, :] = np.roll(xrev, (s1, s2), axis=(0, 1)).ravel()
    c = np.linalg.solve(A.T @ A + lam * np.eye(h * w), A.T @ y.ravel())
    return c.reshape(h, w)


@pytest.mark.parametrize("side", [8, 16])
def test_training_matches_dense_ridge_oracle(side):
    rng = np.random.default_rng(side)
    for _ in range(10):
        patch = preprocess(Patch(pixels=rng.random((side, side))))
        label = GaussianLabel(side, side, sigma=side / 8.0)
        filt = train_filter(patch, label, lam=1e-2)
        spatial = np.fft.ifft2(filt.coefficients).real
        oracle = _dense_ridge(patch.pixels, label.values(), 1e-2)
        assert np.abs(spatial - oracle).max() < 1e-6


def test_impulse_patch_reproduces_label():
    side = 16
    pixels = np.zeros((side, side))
    pixels[0, 0] = 1.0
    patch = Patch(pixels=pixels, preprocessed=True)
    label = GaussianLabel(side, side, sigma=2.0)
    filt = train_filter(patch, label, lam=1e-12)
    resp = respond(filt, patch)
    assert np.abs(resp.values - label.values()).max() < 1e-6
    assert resp.peak == label.peak


def test_peak_shift_equivariance_is_exact():
    side = 32
    rng = np.random.default_rng(5)
    patch = preprocess(Patch(pixels=rng.random((side, side))))
    filt = train_filter(patch, GaussianLabel(side, side, sigma=2.0), lam=1e-2)
    base = respond(filt, patch)
    for dr, dc in [(1, 0), (0, 1), (5, 11), (-3, 7), (17, -9)]:
        shifted = Patch(
            pixels=np.roll(patch.pixels, (dr, dc), axis=(0, 1)), preprocessed=True
        )
        got = respond(filt, shifted)
        want = ((base.peak[0] + dr) % side, (base.peak[1] + dc) % side)
        assert got.peak == want


def test_huge_lambda_kills_the_filter():
    side = 16
    rng = np.random.default_rng(6)
    patch = preprocess(Patch(pixels=rng.random((side, side))))
    filt = train_filter(patch, GaussianLabel(side, side, sigma=2.0), lam=1e12)
    assert np.abs(filt.coefficients).max() < 1e-6


def test_train_filter_validation():
    side = 8
    raw = Patch(pixels=np.ones((side, side)))
    label = GaussianLabel(side, side, sigma=1.0)
    with pytest.raises(ValueError):
        train_filter(raw, label)
    good = preprocess(raw)
    with pytest.raises(ValueError):
        train_filter(good, GaussianLabel(4, 4, sigma=1.0))
    with pytest.raises(ValueError):
        train_filter(good, label, lam=-1.0)
    with pytest.warns(UserWarning):
        train_filter(good, label, lam=0.0)


def test_respond_validation():
    side = 8
    patch = preprocess(Patch(pixels=np.arange(64.0).reshape(8, 8)))
    filt = train_filter(patch, GaussianLabel(side, side, sigma=1.0))
    with pytest.raises(ValueError):
        respond(filt, Patch(pixels=np.zeros((4, 4)), preprocessed=True))
    with pytest.raises(ValueError):
        respond(filt, Patch(pixels=np.zeros((8, 8))))


def test_preprocess_zero_mean_and_windowed_corners():
    rng = np.random.default_rng(2)
    out = preprocess(Patch(pixels=rng.random((16, 16))))
    assert abs(out.pixels.sum()) < 1e-9 or out.pixels[0, 0] == 0.0
    assert out.pixels[0, 0] == 0.0
    assert out.pixels[-1, -1] == 0.0
    assert out.preprocessed


def test_hann_window_shape():
    w = hann2d(8, 16)
    assert w.shape == (8, 16)
    assert w.max() <= 1.0
    assert w[0, 0] == 0.0


def test_gaussian_label_peak_and_wrap():
    lbl = GaussianLabel(16, 16, sigma=2.0)
    vals = lbl.values()
    assert vals[lbl.peak] == 1.0
    # periodic distance: one step left of the peak equals one step right
    r, c = lbl.peak
    assert vals[r, (c - 1) % 16] == pytest.approx(vals[r, (c + 1) % 16])
    # wrapped falloff: column 0 is 8 steps from a center peak both ways
    assert vals[r, 0] == pytest.approx(math.exp(-64.0 / 8.0))
    with pytest.raises(ValueError):
        GaussianLabel(8, 8, sigma=0.0)


def test_psr_two_pass_oracle():
    rng = np.random.default_rng(8)
    values = rng.random((40, 40))
    peak = np.unravel_index(int(np.argmax(values)), values.shape)
    got = psr_value(values, peak)
    mask = np.ones(values.shape, dtype=bool)
    r0 = max(0, peak[0] - 5)
    c0 = max(0, peak[1] - 5)
    mask[r0 : peak[0] + 6, c0 : peak[1] + 6] = False
    side = values[mask]
    want = (values[peak] - side.mean()) / side.std()
    assert got == pytest.approx(want, rel=1e-12)


def test_psr_sentinel_on_flat_sidelobe():
    values = np.zeros((20, 20))
    values[10, 10] = 1.0
    assert psr_value(values, (10, 10)) == math.inf


def test_update_filter_arithmetic():
    a = CorrelationFilter(coefficients=np.full((4, 4), 2.0 + 0j), lam=1e-2)
    b = CorrelationFilter(coefficients=np.full((4, 4), 6.0 + 0j), lam=1e-2)
    out = update_filter(a, b, eta=0.25)
    assert np.all(out.coefficients == 3.0)
    with pytest.raises(ValueError):
        update_filter(a, b, eta=0.0)
    with pytest.raises(ValueError):
        update_filter(a, CorrelationFilter(np.zeros((2, 2), complex), 1e-2), 0.5)


def test_patch_validation():
    with pytest.raises(ValueError):
        Patch(pixels=np.zeros(4))
    with pytest.raises(ValueError):
        Patch(pixels=np.array([[np.nan, 0.0]]))
