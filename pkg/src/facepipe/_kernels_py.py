"""Pure-numpy implementations of the per-frame hot kernels.

Used when the compiled extension is unavailable or disabled via
FACEPIPE_PURE_PYTHON=1.  Same contracts as facepipe._ckernels.
"""

import numpy as np

BACKEND = "python"


def pairwise_iou(a, b):
    """IOU matrix between two (N,4) / (M,4) arrays of (x, y, w, h) boxes."""
    a = np.asarray(a, dtype=np.float64).reshape(-1, 4)
    b = np.asarray(b, dtype=np.float64).reshape(-1, 4)
    ax1, ay1 = a[:, 0:1], a[:, 1:2]
    ax2, ay2 = ax1 + a[:, 2:3], ay1 + a[:, 3:4]
    bx1, by1 = b[:, 0], b[:, 1]
    bx2, by2 = bx1 + b[:, 2], by1 + b[:, 3]
    iw = np.maximum(0.0, np.minimum(ax2, bx2) - np.maximum(ax1, bx1))
    ih = np.maximum(0.0, np.minimum(ay2, by2) - np.maximum(ay1, by1))
    inter = iw * ih
    union = a[:, 2:3] * a[:, 3:4] + (b[:, 2] * b[:, 3]) - inter
    return np.minimum(1.0, inter / union)


def bilinear_crop(image, cx, cy, window, size):
    """Crop a square `window`-wide region centered at (cx, cy) and resample
    it to size x size with bilinear interpolation.  Out-of-frame samples
    read as 0."""
    image = np.asarray(image, dtype=np.float64)
    h, w = image.shape
    # sample centers of the output grid, in image coordinates
    step = window / size
    coords = (np.arange(size) + 0.5) * step - window / 2.0
    xs = cx + coords
    ys = cy + coords
    gy, gx = np.meshgrid(ys, xs, indexing="ij")
    x0 = np.floor(gx).astype(np.int64)
    y0 = np.floor(gy).astype(np.int64)
    fx = gx - x0
    fy = gy - y0

    def sample(yy, xx):
        valid = (xx >= 0) & (xx < w) & (yy >= 0) & (yy < h)
        out = np.zeros_like(gx)
        out[valid] = image[yy[valid], xx[valid]]
        return out

    p00 = sample(y0, x0)
    p01 = sample(y0, x0 + 1)
    p10 = sample(y0 + 1, x0)
    p11 = sample(y0 + 1, x0 + 1)
    top = p00 * (1 - fx) + p01 * fx
    bot = p10 * (1 - fx) + p11 * fx
    return top * (1 - fy) + bot * fy


def sidelobe_stats(resp, peak_row, peak_col, half_window):
    """Mean and stddev of the response outside the exclusion window
    centered on the peak (window edge = 2*half_window+1, clipped at
    borders).  Returns (mean, std, count)."""
    resp = np.asarray(resp, dtype=np.float64)
    mask = np.ones(resp.shape, dtype=bool)
    r0 = max(0, peak_row - half_window)
    r1 = min(resp.shape[0], peak_row + half_window + 1)
    c0 = max(0, peak_col - half_window)
    c1 = min(resp.shape[1], peak_col + half_window + 1)
    mask[r0:r1, c0:c1] = False
    side = resp[mask]
    if side.size == 0:
        return 0.0, 0.0, 0
    return float(side.mean()), float(side.std()), int(side.size)
