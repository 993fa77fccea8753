# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror ``cyclophase._kernels_py``."""
import numpy as np

from libc.math cimport pow, sin


def residue_power_sums(long q, double beta, long n_terms):
    cdef double[::1] acc
    cdef long n, r
    out = np.zeros(q, dtype=np.float64)
    acc = out
    n = n_terms
    r = n_terms % q
    # r tracks n mod q as n counts down, avoiding a division per term.
    while n >= 1:
        acc[r] += pow(<double>n, -beta)
        n -= 1
        r = r - 1 if r > 0 else q - 1
    return out


def circle_orbit(double phi0, double step, const double[::1] couplings):
    cdef double phi = phi0
    cdef Py_ssize_t i, n = couplings.shape[0]
    for i in range(n):
        phi = phi + step - couplings[i] * sin(phi)
    return phi


def circle_trace(double phi0, double step, const double[::1] couplings):
    cdef Py_ssize_t i, n = couplings.shape[0]
    out = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] phis = out
    cdef double phi = phi0
    phis[0] = phi
    for i in range(n):
        phi = phi + step - couplings[i] * sin(phi)
        phis[i + 1] = phi
    return out


def circle_grid(double phi0, const double[::1] steps, double c, long n_iter):
    cdef Py_ssize_t j, m = steps.shape[0]
    cdef long i
    cdef double phi
    out = np.full(m, phi0, dtype=np.float64)
    cdef double[::1] res = out
    # Grid points advance in lockstep: independent sin calls can overlap,
    # and each orbit sees exactly the same operations as circle_orbit.
    for i in range(n_iter):
        for j in range(m):
            phi = res[j]
            res[j] = phi + steps[j] - c * sin(phi)
    return out


cdef inline double _adler_rhs(double phi, double dw, double k):
    return dw - k * sin(phi)


def adler_rk4(double phi0, double delta_omega, double k, double dt, long n_steps, long stride):
    cdef long i, j = 1
    cdef long n_samples = n_steps // stride + 1
    cdef double phi = phi0, k1, k2, k3, k4
    cdef double half = 0.5 * dt
    out = np.empty(n_samples, dtype=np.float64)
    cdef double[::1] samples = out
    samples[0] = phi
    for i in range(1, n_steps + 1):
        k1 = _adler_rhs(phi, delta_omega, k)
        k2 = _adler_rhs(phi + half * k1, delta_omega, k)
        k3 = _adler_rhs(phi + half * k2, delta_omega, k)
        k4 = _adler_rhs(phi + dt * k3, delta_omega, k)
        phi = phi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if i % stride == 0:
            samples[j] = phi
            j += 1
    return out, phi
