"""Classical phase locking: the Adler equation and the Arnold circle map.

Adler:  dPhi/dt = delta_omega - K sin(Phi)
Arnold: Phi_{n+1} = Phi_n + 2 pi Omega - c sin(Phi_n)
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .bostconnes import ReducedFraction
from .errors import DomainError
from .numtheory import mangoldt_table
from .spectral import RealSeries

__all__ = [
    "AdlerParams",
    "CircleMapParams",
    "StaircasePoint",
    "WindingEstimate",
    "OverlapRegimeWarning",
    "adler_mean_frequency",
    "adler_integrate",
    "winding_number",
    "staircase",
    "plateau_width",
    "mangoldt_modulated_map",
]

TWO_PI = 2.0 * math.pi
BURN_IN = 0.2


class OverlapRegimeWarning(RuntimeWarning):
    """Coupling c >= 1: locking zones overlap and the winding limit may not exist."""


@dataclass(frozen=True)
class AdlerParams:
    K: float
    delta_omega: float
    phi0: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.K, self.delta_omega, self.phi0)):
            raise DomainError("Adler parameters must be finite")
        if self.K < 0:
            raise DomainError(f"coupling K must be >= 0, got {self.K}")


@dataclass(frozen=True)
class CircleMapParams:
    Omega: float
    c: float
    phi0: float = 0.0
    n_iter: int = 10_000

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.Omega, self.c, self.phi0)):
            raise DomainError("circle-map parameters must be finite")
        if self.n_iter < 1:
            raise DomainError(f"n_iter must be positive, got {self.n_iter}")


@dataclass(frozen=True)
class WindingEstimate:
    nu: float
    uncertainty: float
    overlap_regime: bool = False

    def __float__(self) -> float:
        return self.nu


@dataclass(frozen=True)
class StaircasePoint:
    Omega: float
    nu: float
    locked_to: ReducedFraction | None = None


def adler_mean_frequency(params: AdlerParams) -> float:
    """Long-time mean of dPhi/dt: 0 for |delta_omega| <= K, else
    sign(delta_omega) sqrt(delta_omega**2 - K**2)."""
    dw, k = params.delta_omega, params.K
    if abs(dw) <= k:
        return 0.0
    return math.copysign(math.sqrt(dw * dw - k * k), dw)


def adler_integrate(params: AdlerParams, t_end: float, dt: float, stride: int = 1):
    """Fixed-step RK4 integration of the Adler equation.

    Returns ``(trajectory, mean_freq)``. The trajectory holds Phi at
    t = 0, stride*dt, 2*stride*dt, ...; ``mean_freq`` is the phase advance
    over the last 80% of the run divided by its duration.

    Raises
    ------
    DomainError
        If dt > 1e-2 / max(K, |delta_omega|, 1) or t_end < 100 dt.
    """
    limit = 1e-2 / max(params.K, abs(params.delta_omega), 1.0)
    if not 0 < dt <= limit:
        raise DomainError(f"dt={dt} violates 0 < dt <= {limit:g}")
    if t_end < 100 * dt:
        raise DomainError(f"t_end={t_end} shorter than 100 steps of dt={dt}")
    if stride < 1:
        raise DomainError(f"stride must be >= 1, got {stride}")
    n_steps = int(round(t_end / dt))
    n_burn = int(round(BURN_IN * n_steps))
    # Two legs so the burn-in phase is available exactly, whatever the stride.
    head, phi_burn = kernels.adler_rk4(params.phi0, params.delta_omega, params.K, dt, n_burn, 1)
    tail, phi_end = kernels.adler_rk4(phi_burn, params.delta_omega, params.K, dt, n_steps - n_burn, 1)
    phases = np.concatenate([head, tail[1:]])[::stride]
    mean_freq = (phi_end - phi_burn) / ((n_steps - n_burn) * dt)
    return RealSeries(0, phases), mean_freq


def _couplings(c: float, n_iter: int) -> np.ndarray:
    return np.full(n_iter, float(c))


def _flag_overlap(c: float) -> bool:
    if c >= 1:
        warnings.warn(
            f"c={c} >= 1: overlap regime, winding limit not guaranteed",
            OverlapRegimeWarning,
            stacklevel=3,
        )
        return True
    return False


def winding_number(params: CircleMapParams) -> WindingEstimate:
    """(Phi_n - Phi_0) / (2 pi n) after n = n_iter iterations."""
    if params.n_iter < 1000:
        raise DomainError(f"winding estimates need n_iter >= 1000, got {params.n_iter}")
    overlap = _flag_overlap(params.c)
    step = TWO_PI * params.Omega
    phi_n = kernels.circle_orbit(params.phi0, step, _couplings(params.c, params.n_iter))
    nu = (phi_n - params.phi0) / (TWO_PI * params.n_iter)
    return WindingEstimate(nu=nu, uncertainty=1.0 / params.n_iter, overlap_regime=overlap)


def _nearest_rational(nu: float, q_max: int, tol: float) -> ReducedFraction | None:
    base = math.floor(nu)
    frac = Fraction(nu - base).limit_denominator(q_max)
    if abs(nu - base - frac) < tol:
        p, q = frac.numerator, frac.denominator
        if p == q:
            p = 0
        return ReducedFraction(p % q, q)
    return None


def _grid_winding(omegas: np.ndarray, c: float, n_iter: int, phi0: float) -> np.ndarray:
    finals = kernels.circle_grid(phi0, TWO_PI * omegas, c, n_iter)
    return (finals - phi0) / (TWO_PI * n_iter)


def staircase(
    c: float,
    Omega_lo: float = 0.0,
    Omega_hi: float = 1.0,
    n_points: int = 1001,
    n_iter: int = 10_000,
    q_max: int = 8,
    phi0: float = 0.0,
) -> list[StaircasePoint]:
    """Winding number on a uniform Omega grid, with locked points labelled.

    A point is locked to p/q (q <= q_max) when |nu - p/q| < 2/n_iter. With
    c == 0 the map is a rigid rotation and nothing is labelled. The
    fraction is recorded modulo 1, so nu = 1 is labelled 0/1.
    """
    if c >= 1:
        raise DomainError(f"staircase needs c < 1, got {c}")
    if n_points < 2:
        raise DomainError(f"n_points must be >= 2, got {n_points}")
    omegas = np.linspace(Omega_lo, Omega_hi, n_points)
    nus = _grid_winding(omegas, c, n_iter, phi0)
    tol = 2.0 / n_iter
    out = []
    for om, nu in zip(omegas.tolist(), nus.tolist()):
        locked = _nearest_rational(nu, q_max, tol) if c > 0 else None
        out.append(StaircasePoint(Omega=om, nu=nu, locked_to=locked))
    return out


def plateau_width(
    c: float,
    frac: ReducedFraction,
    tol: float = 1e-6,
    n_iter: int = 10_000,
    n_scan: int = 201,
    phi0: float = 0.0,
) -> float:
    """Width of the Omega interval on which the winding number equals p/q.

    A window of half-width 1/(2 q**2) around p/q is scanned for a locked
    point (|nu - p/q| < 2/n_iter), then each edge is located by bisection
    to ``tol``. Returns 0.0 when no locked point is found or c == 0.
    """
    if c >= 1:
        raise DomainError(f"plateau width needs c < 1, got {c}")
    if c == 0:
        return 0.0
    target = frac.p / frac.q
    lock_tol = 2.0 / n_iter
    half = 0.5 / frac.q**2

    def locked(om: float) -> bool:
        phi_n = kernels.circle_orbit(phi0, TWO_PI * om, _couplings(c, n_iter))
        return abs((phi_n - phi0) / (TWO_PI * n_iter) - target) < lock_tol

    grid = np.linspace(target - half, target + half, n_scan)
    nus = _grid_winding(grid, c, n_iter, phi0)
    hits = np.nonzero(np.abs(nus - target) < lock_tol)[0]
    if hits.size == 0:
        return 0.0
    seed = float(grid[hits[np.argmin(np.abs(grid[hits] - target))]])
    if not locked(seed):
        return 0.0

    def edge(inside: float, outside: float) -> float:
        while abs(outside - inside) > tol:
            mid = 0.5 * (inside + outside)
            if locked(mid):
                inside = mid
            else:
                outside = mid
        return inside

    # The plateau cannot extend past the neighbouring half-integers of the staircase.
    lo = edge(seed, seed - 0.5)
    hi = edge(seed, seed + 0.5)
    return hi - lo


def mangoldt_modulated_map(
    Omega: float,
    c: float,
    kappa: float,
    n_iter: int = 10_000,
    phi0: float = 0.0,
):
    """Circle map with coupling c_n = c (1 + kappa (Lambda(n) - 1)).

    Returns ``(winding, beat_series)`` where beat_series[n-1] is
    (Phi_n - Phi_{n-1}) / (2 pi) for n = 1..n_iter. With kappa = 0 the
    winding estimate is identical to ``winding_number``.
    """
    if n_iter < 1000:
        raise DomainError(f"n_iter must be >= 1000, got {n_iter}")
    lam = mangoldt_table(n_iter)
    couplings = c * (1.0 + kappa * (lam - 1.0))
    overlap = False
    if np.max(np.abs(couplings)) >= 1:
        warnings.warn(
            f"modulated coupling reaches {np.max(np.abs(couplings)):.3g} >= 1: overlap regime",
            OverlapRegimeWarning,
            stacklevel=2,
        )
        overlap = True
    step = TWO_PI * Omega
    phis = kernels.circle_trace(phi0, step, couplings)
    nu = (phis[-1] - phi0) / (TWO_PI * n_iter)
    beats = np.diff(phis) / TWO_PI
    return WindingEstimate(nu=nu, uncertainty=1.0 / n_iter, overlap_regime=overlap), RealSeries(1, beats)
