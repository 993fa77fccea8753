"""Pure-Python/NumPy versions of the compiled kernels.

Same signatures and summation order as ``_kernels.pyx``; used when the
extension is not built or ``CYCLOPHASE_PURE_PYTHON`` is set.
"""
from __future__ import annotations

import math

import numpy as np


def residue_power_sums(q: int, beta: float, n_terms: int) -> np.ndarray:
    """Sum n**-beta over 1 <= n <= n_terms, binned by n mod q.

    Terms are accumulated from n = n_terms down to 1 (smallest first).
    """
    n = np.arange(n_terms, 0, -1, dtype=np.int64)
    terms = np.power(n.astype(np.float64), -beta)
    return np.bincount(n % q, weights=terms, minlength=q)


def circle_orbit(phi0: float, step: float, couplings: np.ndarray) -> float:
    phi = float(phi0)
    sin = math.sin
    for c in couplings.tolist():
        phi = phi + step - c * sin(phi)
    return phi


def circle_trace(phi0: float, step: float, couplings: np.ndarray) -> np.ndarray:
    phi = float(phi0)
    sin = math.sin
    phis = [phi]
    append = phis.append
    for c in couplings.tolist():
        phi = phi + step - c * sin(phi)
        append(phi)
    return np.array(phis, dtype=np.float64)


def circle_grid(phi0: float, steps: np.ndarray, c: float, n_iter: int) -> np.ndarray:
    # Vectorized across the grid instead of looping per point.
    phi = np.full(steps.shape, float(phi0))
    for _ in range(n_iter):
        phi = phi + steps - c * np.sin(phi)
    return phi


def adler_rk4(phi0, delta_omega, k, dt, n_steps, stride):
    sin = math.sin
    phi = float(phi0)
    half = 0.5 * dt
    samples = [phi]
    for i in range(1, n_steps + 1):
        k1 = delta_omega - k * sin(phi)
        k2 = delta_omega - k * sin(phi + half * k1)
        k3 = delta_omega - k * sin(phi + half * k2)
        k4 = delta_omega - k * sin(phi + dt * k3)
        phi = phi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if i % stride == 0:
            samples.append(phi)
    return np.array(samples, dtype=np.float64), phi
