"""Cumulative-sum normalization, periodograms and power-law slope fits.

Used to reproduce the 1/f^gamma character of the normalized Carmichael
lambda series and the fluctuation of the averaged Mangoldt function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError

__all__ = [
    "RealSeries",
    "Periodogram",
    "SlopeFit",
    "cumulative_sums",
    "normalized_cumsum",
    "growth_exponent",
    "periodogram",
    "loglog_slope",
]

MIN_PERIODOGRAM_LENGTH = 16
MIN_FIT_POINTS = 8


@dataclass(frozen=True)
class RealSeries:
    """Finite real samples indexed from ``origin`` (sample i sits at t = origin + i)."""

    origin: int
    samples: np.ndarray

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise DomainError("RealSeries needs a non-empty 1-d sample array")
        if not np.all(np.isfinite(samples)):
            raise DomainError("RealSeries samples must be finite")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    @property
    def index(self) -> np.ndarray:
        return np.arange(self.origin, self.origin + self.samples.size)

    def __len__(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class Periodogram:
    """One-sided power spectrum; frequencies in cycles per sample."""

    frequencies: np.ndarray
    powers: np.ndarray

    def __len__(self) -> int:
        return self.frequencies.size


@dataclass(frozen=True)
class SlopeFit:
    exponent: float
    intercept: float
    band: tuple[float, float]
    residual_rms: float
    n_points: int
    n_dropped: int = 0

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "intercept": self.intercept,
            "f_lo": self.band[0],
            "f_hi": self.band[1],
            "residual_rms": self.residual_rms,
            "n_points": self.n_points,
        }


def _values(f: Callable[[int], float] | np.ndarray, t_max: int) -> np.ndarray:
    if callable(f):
        return np.array([f(n) for n in range(1, t_max + 1)], dtype=np.float64)
    vals = np.asarray(f, dtype=np.float64)
    if vals.size < t_max:
        raise DomainError(f"need {t_max} values, got {vals.size}")
    return vals[:t_max]


def cumulative_sums(f, t_max: int) -> RealSeries:
    """Raw partial sums S(t) = f(1) + ... + f(t) for t = 1..t_max.

    ``f`` is either a callable on positive integers or an array holding
    f(1), f(2), ...
    """
    return RealSeries(1, np.cumsum(_values(f, t_max)))


def normalized_cumsum(f, t_max: int, sigma: float) -> RealSeries:
    """S(t) / t**sigma for t = 1..t_max."""
    if t_max < 2:
        raise DomainError(f"t_max must be >= 2, got {t_max}")
    if not math.isfinite(sigma):
        raise DomainError("sigma must be finite")
    sums = np.cumsum(_values(f, t_max))
    t = np.arange(1, t_max + 1, dtype=np.float64)
    if sigma == 1:
        return RealSeries(1, sums / t)
    return RealSeries(1, sums / t**sigma)


def growth_exponent(sums: RealSeries) -> float:
    """Least-squares slope of ln S(t) against ln t over the upper half of t."""
    t = sums.index.astype(np.float64)
    half = t >= t[0] + (t[-1] - t[0]) / 2
    s = sums.samples[half]
    if np.any(s <= 0):
        raise DomainError("growth exponent needs positive sums in the fit range")
    slope, _ = np.polyfit(np.log(t[half]), np.log(s), 1)
    return float(slope)


def periodogram(series: RealSeries) -> Periodogram:
    """Mean-removed one-sided periodogram, DC bin excluded.

    Power at bin k is |X_k|**2 / N, so the two-sided spectrum sums to
    N times the variance of the series (Parseval).
    """
    x = series.samples
    n = x.size
    if n < MIN_PERIODOGRAM_LENGTH:
        raise DomainError(f"periodogram needs >= {MIN_PERIODOGRAM_LENGTH} samples, got {n}")
    # A constant series must give exactly zero power whatever the rounding of its mean.
    centered = np.zeros_like(x) if np.all(x == x[0]) else x - x.mean()
    spectrum = np.fft.rfft(centered)
    k = np.arange(1, n // 2 + 1)
    powers = np.abs(spectrum[1 : n // 2 + 1]) ** 2 / n
    return Periodogram(frequencies=k / n, powers=powers)


def loglog_slope(p: Periodogram, band: tuple[float, float] | None = None) -> SlopeFit:
    """OLS fit of log10(power) on log10(frequency) inside ``band`` (inclusive).

    Bins with zero power are dropped and counted in ``n_dropped``. The
    returned ``exponent`` is the fitted slope, i.e. -gamma for 1/f^gamma.
    """
    if band is None:
        band = (float(p.frequencies[0]), float(p.frequencies[-1]))
    f_lo, f_hi = band
    if not f_lo < f_hi:
        raise DomainError(f"empty band {band}")
    inside = (p.frequencies >= f_lo) & (p.frequencies <= f_hi)
    usable = inside & (p.powers > 0)
    n_points = int(usable.sum())
    if n_points < MIN_FIT_POINTS:
        raise DomainError(f"only {n_points} usable bins in band {band}; need {MIN_FIT_POINTS}")
    lf = np.log10(p.frequencies[usable])
    lp = np.log10(p.powers[usable])
    slope, intercept = np.polyfit(lf, lp, 1)
    resid = lp - (slope * lf + intercept)
    return SlopeFit(
        exponent=float(slope),
        intercept=float(intercept),
        band=(float(f_lo), float(f_hi)),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        n_points=n_points,
        n_dropped=int(inside.sum()) - n_points,
    )
