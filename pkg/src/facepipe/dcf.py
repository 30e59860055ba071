"""Correlation-filter primitives: frequency-domain ridge training,
response maps, and peak-to-sidelobe confidence."""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from facepipe import kernels

PSR_EXCLUSION_HALF = 5  # 11x11 window around the peak
_LAMBDA_FLOOR = 1e-12
_IMAG_REL_TOL = 1e-8


@dataclass
class Patch:
    pixels: np.ndarray  # (height, width) grayscale
    preprocessed: bool = False

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.float64)
        if self.pixels.ndim != 2:
            raise ValueError("patch must be 2-D")
        if not np.all(np.isfinite(self.pixels)):
            raise ValueError("patch pixels must be finite")

    @property
    def shape(self):
        return self.pixels.shape


@dataclass
class GaussianLabel:
    """Expected response: unit peak with Gaussian falloff, wrapped so the
    map is periodic (matches the circularity of the transforms)."""

    height: int
    width: int
    sigma: float
    peak: tuple = None  # (row, col); defaults to the center

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.peak is None:
            self.peak = (self.height // 2, self.width // 2)

    def values(self):
        rows = np.arange(self.height)
        cols = np.arange(self.width)
        dr = np.minimum(
            np.abs(rows - self.peak[0]), self.height - np.abs(rows - self.peak[0])
        )
        dc = np.minimum(
            np.abs(cols - self.peak[1]), self.width - np.abs(cols - self.peak[1])
        )
        d2 = dr[:, None] ** 2 + dc[None, :] ** 2
        return np.exp(-d2 / (2.0 * self.sigma**2))


@dataclass
class CorrelationFilter:
    coefficients: np.ndarray  # complex, frequency domain
    lam: float
    learning_rate: float = 0.125

    @property
    def shape(self):
        return self.coefficients.shape


@dataclass
class ResponseMap:
    values: np.ndarray
    peak: tuple
    psr: float


def hann2d(height, width):
    return np.outer(np.hanning(height), np.hanning(width))


def preprocess(raw: Patch) -> Patch:
    """Zero-mean then cosine-window the patch."""
    p = raw.pixels - raw.pixels.mean()
    p = p * hann2d(*p.shape)
    return Patch(pixels=p, preprocessed=True)


def train_filter(x: Patch, y: GaussianLabel, lam=1e-2) -> CorrelationFilter:
    """Elementwise frequency-domain ridge solution:
    coefficients = (ŷ · x̂*) / (|x̂|² + λ)."""
    if not x.preprocessed:
        raise ValueError("training patch must be preprocessed")
    if (y.height, y.width) != x.shape:
        raise ValueError("label dimensions must match the patch")
    if lam <= 0:
        if lam == 0:
            warnings.warn("lambda=0 clamped to 1e-12", stacklevel=2)
            lam = _LAMBDA_FLOOR
        else:
            raise ValueError("lambda must be positive")
    xf = np.fft.fft2(x.pixels)
    yf = np.fft.fft2(y.values())
    coeff = (yf * np.conj(xf)) / (np.abs(xf) ** 2 + lam)
    return CorrelationFilter(coefficients=coeff, lam=lam)


def respond(f: CorrelationFilter, z: Patch) -> ResponseMap:
    """r = F⁻¹(coefficients · ẑ); the imaginary residue must be negligible."""
    if not z.preprocessed:
        raise ValueError("query patch must be preprocessed")
    if z.shape != f.shape:
        raise ValueError("patch dimensions must match the filter")
    zf = np.fft.fft2(z.pixels)
    r = np.fft.ifft2(f.coefficients * zf)
    scale = np.abs(r).max()
    if scale > 0 and np.abs(r.imag).max() > _IMAG_REL_TOL * scale:
        raise AssertionError("response has a non-negligible imaginary part")
    values = r.real
    peak = np.unravel_index(int(np.argmax(values)), values.shape)
    return ResponseMap(values=values, peak=peak, psr=psr_value(values, peak))


def psr_value(values, peak) -> float:
    """(peak - sidelobe mean) / sidelobe stddev; +inf sentinel when the
    sidelobe has zero variance."""
    mean, std, count = kernels.sidelobe_stats(
        values, int(peak[0]), int(peak[1]), PSR_EXCLUSION_HALF
    )
    if count == 0 or std == 0.0:
        return math.inf
    return (float(values[peak]) - mean) / std


def update_filter(old: CorrelationFilter, fresh: CorrelationFilter, eta) -> CorrelationFilter:
    """Exponential moving average of filter coefficients."""
    if old.shape != fresh.shape:
        raise ValueError("filter dimensions must match")
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must lie in (0, 1]")
    return CorrelationFilter(
        coefficients=(1.0 - eta) * old.coefficients + eta * fresh.coefficients,
        lam=fresh.lam,
        learning_rate=old.learning_rate,
    )
