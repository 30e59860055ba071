import os
import subprocess
import sys

import numpy as np
import pytest

from facepipe import _kernels_py, kernels

ckernels = pytest.importorskip("facepipe._ckernels")


@pytest.mark.skipif(
    os.environ.get("FACEPIPE_PURE_PYTHON") == "1",
    reason="fallback explicitly forced",
)
def test_compiled_backend_is_active_by_default():
    assert kernels.BACKEND == "cython"


def test_env_flag_forces_pure_backend():
    out = subprocess.run(
        [sys.executable, "-c", "from facepipe import kernels; print(kernels.BACKEND)"],
        env={"FACEPIPE_PURE_PYTHON": "1", "PATH": "/usr/bin:/bin"},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"


def test_pairwise_iou_backends_agree():
    rng = np.random.default_rng(1)
    a = np.column_stack(
        [rng.uniform(0, 50, 40), rng.uniform(0, 50, 40),
         rng.uniform(1, 20, 40), rng.uniform(1, 20, 40)]
    )
    b = np.column_stack(
        [rng.uniform(0, 50, 30), rng.uniform(0, 50, 30),
         rng.uniform(1, 20, 30), rng.uniform(1, 20, 30)]
    )
    fast = ckernels.pairwise_iou(a, b)
    pure = _kernels_py.pairwise_iou(a, b)
    assert fast.shape == (40, 30)
    assert np.abs(fast - pure).max() < 1e-12


def test_bilinear_crop_backends_agree():
    rng = np.random.default_rng(2)
    image = rng.random((48, 64))
    for cx, cy, window, size in [
        (32.0, 24.0, 30.0, 16),
        (2.0, 3.0, 40.0, 32),  # hangs off the frame edge
        (63.0, 47.0, 25.0, 8),
        (10.5, 20.25, 13.5, 16),
    ]:
        fast = ckernels.bilinear_crop(image, cx, cy, window, size)
        pure = _kernels_py.bilinear_crop(image, cx, cy, window, size)
        assert np.abs(fast - pure).max() < 1e-12


def test_bilinear_crop_identity_sampling():
    # unit step with sample centers on the pixel grid reads pixels back
    image = np.arange(36.0).reshape(6, 6)
    got = kernels.bilinear_crop(image, 3.5, 3.5, 4.0, 4)
    assert np.abs(got - image[2:6, 2:6]).max() < 1e-12


def test_bilinear_crop_outside_reads_zero():
    image = np.ones((8, 8))
    got = kernels.bilinear_crop(image, -50.0, -50.0, 8.0, 8)
    assert np.all(got == 0.0)


def test_sidelobe_stats_backends_agree():
    rng = np.random.default_rng(3)
    resp = rng.random((32, 32))
    for peak in [(16, 16), (0, 0), (31, 31), (3, 28)]:
        fast = ckernels.sidelobe_stats(resp, peak[0], peak[1], 5)
        pure = _kernels_py.sidelobe_stats(resp, peak[0], peak[1], 5)
        assert fast[2] == pure[2]
        assert abs(fast[0] - pure[0]) < 1e-12
        assert abs(fast[1] - pure[1]) < 1e-12


def test_sidelobe_stats_empty_window():
    resp = np.ones((4, 4))
    assert kernels.sidelobe_stats(resp, 2, 2, 10) == (0.0, 0.0, 0)
