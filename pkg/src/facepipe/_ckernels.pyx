# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: IOU cost matrices, search-window resampling,
and response sidelobe statistics.  Mirrors facepipe._kernels_py."""

import numpy as np
cimport numpy as cnp
from libc.math cimport floor, sqrt

BACKEND = "cython"


def pairwise_iou(a, b):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] aa = \
        np.ascontiguousarray(np.asarray(a, dtype=np.float64).reshape(-1, 4))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] bb = \
        np.ascontiguousarray(np.asarray(b, dtype=np.float64).reshape(-1, 4))
    cdef Py_ssize_t n = aa.shape[0], m = bb.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n, m))
    cdef Py_ssize_t i, j
    cdef double ax1, ay1, ax2, ay2, bx1, by1, bx2, by2
    cdef double iw, ih, inter, union_
    for i in range(n):
        ax1 = aa[i, 0]; ay1 = aa[i, 1]
        ax2 = ax1 + aa[i, 2]; ay2 = ay1 + aa[i, 3]
        for j in range(m):
            bx1 = bb[j, 0]; by1 = bb[j, 1]
            bx2 = bx1 + bb[j, 2]; by2 = by1 + bb[j, 3]
            iw = min(ax2, bx2) - max(ax1, bx1)
            if iw < 0: iw = 0
            ih = min(ay2, by2) - max(ay1, by1)
            if ih < 0: ih = 0
            inter = iw * ih
            union_ = aa[i, 2] * aa[i, 3] + bb[j, 2] * bb[j, 3] - inter
            out[i, j] = min(1.0, inter / union_)
    return out


def bilinear_crop(image, double cx, double cy, double window, Py_ssize_t size):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] img = \
        np.ascontiguousarray(np.asarray(image, dtype=np.float64))
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((size, size))
    cdef Py_ssize_t i, j
    cdef double step = window / size
    cdef double gx, gy, fx, fy, p00, p01, p10, p11
    cdef Py_ssize_t x0, y0
    for i in range(size):
        gy = cy + (i + 0.5) * step - window / 2.0
        y0 = <Py_ssize_t>floor(gy)
        fy = gy - y0
        for j in range(size):
            gx = cx + (j + 0.5) * step - window / 2.0
            x0 = <Py_ssize_t>floor(gx)
            fx = gx - x0
            p00 = img[y0, x0] if 0 <= y0 < h and 0 <= x0 < w else 0.0
            p01 = img[y0, x0 + 1] if 0 <= y0 < h and 0 <= x0 + 1 < w else 0.0
            p10 = img[y0 + 1, x0] if 0 <= y0 + 1 < h and 0 <= x0 < w else 0.0
            p11 = img[y0 + 1, x0 + 1] if 0 <= y0 + 1 < h and 0 <= x0 + 1 < w else 0.0
            out[i, j] = (p00 * (1 - fx) + p01 * fx) * (1 - fy) + \
                        (p10 * (1 - fx) + p11 * fx) * fy
    return out


def sidelobe_stats(resp, Py_ssize_t peak_row, Py_ssize_t peak_col,
                   Py_ssize_t half_window):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] r = \
        np.ascontiguousarray(np.asarray(resp, dtype=np.float64))
    cdef Py_ssize_t h = r.shape[0], w = r.shape[1]
    cdef Py_ssize_t r0 = max(0, peak_row - half_window)
    cdef Py_ssize_t r1 = min(h, peak_row + half_window + 1)
    cdef Py_ssize_t c0 = max(0, peak_col - half_window)
    cdef Py_ssize_t c1 = min(w, peak_col + half_window + 1)
    # two-pass mean/variance: matches the numpy fallback bit-for-bit closely
    cdef double s = 0.0
    cdef Py_ssize_t count = 0, i, j
    cdef double v, mean, var
    for i in range(h):
        for j in range(w):
            if r0 <= i < r1 and c0 <= j < c1:
                continue
            s += r[i, j]
            count += 1
    if count == 0:
        return 0.0, 0.0, 0
    mean = s / count
    var = 0.0
    for i in range(h):
        for j in range(w):
            if r0 <= i < r1 and c0 <= j < c1:
                continue
            v = r[i, j] - mean
            var += v * v
    return mean, sqrt(var / count), count
