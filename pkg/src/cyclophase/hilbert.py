"""Finite-dimensional number/phase operator algebra.

Two bases are in play and are never mixed:

* ``basis_origin=0``: the Z_q basis |0>, ..., |q-1> carrying the phase
  states, the clock operators e_p and the multiplicative shifts mu_a;
* ``basis_origin=1``: the positive-integer basis |1>, ..., |N> on which
  H0 = ln N and the time evolution sigma_t act.

Every constructor returns an immutable ``ComplexMatrix`` or ``StateVector``
tagged with its basis origin; combining objects with different origins
raises ``BasisMismatchError``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BasisMismatchError, DomainError
from .numtheory import mult_order

__all__ = [
    "MAX_DIM",
    "TOL",
    "ComplexMatrix",
    "StateVector",
    "number_operator",
    "hamiltonian_h0",
    "lowering_E",
    "susskind_glogower_state",
    "phase_angle",
    "phase_state",
    "phase_operator",
    "shift_mu",
    "shift_multiplicative",
    "clock_e",
    "order_eigenstate",
    "galois_twist",
    "galois_apply",
    "evolve_sigma_t",
    "basis_state",
]

MAX_DIM = 4096
TOL = 1e-12
TWO_PI = 2.0 * math.pi


def _check_dim(dim: int) -> int:
    if dim < 1:
        raise DomainError(f"dimension must be >= 1, got {dim}")
    if dim > MAX_DIM:
        raise DomainError(f"dimension {dim} exceeds the dense cap {MAX_DIM}")
    return int(dim)


def _check_origin(origin: int) -> int:
    if origin not in (0, 1):
        raise DomainError(f"basis_origin must be 0 or 1, got {origin}")
    return origin


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    basis_origin: int = 0

    def __post_init__(self):
        _check_origin(self.basis_origin)
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1:
            raise DomainError("state amplitudes must be 1-d")
        if not np.all(np.isfinite(amps)):
            raise DomainError("state amplitudes must be finite")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: StateVector) -> complex:
        """<self|other>."""
        _same_basis(self, other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def labels(self) -> np.ndarray:
        return np.arange(self.basis_origin, self.basis_origin + self.dim)

    def projector(self) -> ComplexMatrix:
        v = self.amplitudes
        return ComplexMatrix(np.outer(v, v.conj()), self.basis_origin)


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    entries: np.ndarray
    basis_origin: int = 0

    def __post_init__(self):
        _check_origin(self.basis_origin)
        m = _frozen(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"operator must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise DomainError("operator entries must be finite")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> ComplexMatrix:
        return ComplexMatrix(self.entries.conj().T, self.basis_origin)

    def __matmul__(self, other):
        if isinstance(other, ComplexMatrix):
            _same_basis(self, other)
            return ComplexMatrix(self.entries @ other.entries, self.basis_origin)
        if isinstance(other, StateVector):
            _same_basis(self, other)
            return StateVector(self.entries @ other.amplitudes, self.basis_origin)
        return NotImplemented

    def __add__(self, other: ComplexMatrix) -> ComplexMatrix:
        _same_basis(self, other)
        return ComplexMatrix(self.entries + other.entries, self.basis_origin)

    def __sub__(self, other: ComplexMatrix) -> ComplexMatrix:
        _same_basis(self, other)
        return ComplexMatrix(self.entries - other.entries, self.basis_origin)

    def __mul__(self, scalar: complex) -> ComplexMatrix:
        return ComplexMatrix(self.entries * scalar, self.basis_origin)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> ComplexMatrix:
        return ComplexMatrix(np.linalg.matrix_power(self.entries, k), self.basis_origin)

    def identity(self) -> ComplexMatrix:
        return ComplexMatrix(np.eye(self.dim), self.basis_origin)

    def max_abs_diff(self, other: ComplexMatrix) -> float:
        _same_basis(self, other)
        return float(np.max(np.abs(self.entries - other.entries)))

    def equals(self, other: ComplexMatrix) -> bool:
        """Exact entrywise equality on the same basis."""
        _same_basis(self, other)
        return bool(np.array_equal(self.entries, other.entries))

    def is_hermitian(self, tol: float = TOL) -> bool:
        return float(np.max(np.abs(self.entries - self.entries.conj().T))) <= tol

    def is_unitary(self, tol: float = TOL) -> bool:
        prod = self.entries.conj().T @ self.entries
        return float(np.max(np.abs(prod - np.eye(self.dim)))) <= tol

    def is_diagonal(self) -> bool:
        return not np.any(self.entries[~np.eye(self.dim, dtype=bool)])

    def diagonal(self) -> np.ndarray:
        return np.diag(self.entries).copy()


def _same_basis(a, b) -> None:
    if a.basis_origin != b.basis_origin:
        raise BasisMismatchError(
            f"cannot combine objects on basis origin {a.basis_origin} and {b.basis_origin}"
        )
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch: {a.dim} vs {b.dim}")


def _labels(dim: int, origin: int) -> np.ndarray:
    return np.arange(origin, origin + dim)


def _roots_of_unity(q: int, exponents: np.ndarray) -> np.ndarray:
    # Reduce the integer exponent first so equal residues give identical floats.
    return np.exp(1j * TWO_PI * (np.mod(exponents, q) / q))


def basis_state(dim: int, n: int, basis_origin: int = 0) -> StateVector:
    dim = _check_dim(dim)
    v = np.zeros(dim, dtype=complex)
    v[n - basis_origin] = 1.0
    return StateVector(v, basis_origin)


def number_operator(dim: int, basis_origin: int = 0) -> ComplexMatrix:
    """Diagonal N with N|n> = n|n>."""
    dim = _check_dim(dim)
    return ComplexMatrix(np.diag(_labels(dim, basis_origin).astype(complex)), basis_origin)


def hamiltonian_h0(dim: int) -> ComplexMatrix:
    """H0 = ln N on the positive-integer basis |1>..|dim>."""
    dim = _check_dim(dim)
    return ComplexMatrix(np.diag(np.log(_labels(dim, 1)).astype(complex)), 1)


def lowering_E(dim: int) -> ComplexMatrix:
    """Truncated exponential phase operator E = sum_n |n><n+1|.

    In finite dimension E E^dag = 1 - |dim-1><dim-1| and E^dag E = 1 - |0><0|.
    """
    if dim < 2:
        raise DomainError(f"E needs dim >= 2, got {dim}")
    dim = _check_dim(dim)
    return ComplexMatrix(np.eye(dim, k=1), 0)


def susskind_glogower_state(psi: float, dim: int) -> StateVector:
    """Truncation of sum_n exp(i n psi)|n> normalized on ``dim`` terms.

    E acting on it reproduces exp(i psi) times the state except in the top
    component, so the eigen-residual is exactly 1/sqrt(dim).
    """
    dim = _check_dim(dim)
    n = np.arange(dim)
    return StateVector(np.exp(1j * psi * n) / math.sqrt(dim), 0)


def phase_angle(q: int, p: int, theta0: float = 0.0) -> float:
    return theta0 + TWO_PI * p / q


def phase_state(q: int, p: int, theta0: float = 0.0) -> StateVector:
    """Pegg-Barnett phase state |theta_p> on the Z_q basis."""
    if q < 1 or not 0 <= p < q:
        raise DomainError(f"phase state needs q >= 1 and 0 <= p < q, got q={q}, p={p}")
    _check_dim(q)
    n = np.arange(q)
    amps = np.exp(1j * theta0 * n) * _roots_of_unity(q, p * n) / math.sqrt(q)
    return StateVector(amps, 0)


def phase_operator(q: int, theta0: float = 0.0) -> ComplexMatrix:
    """Hermitian phase operator Theta_q = sum_p theta_p |theta_p><theta_p|."""
    _check_dim(q)
    states = np.column_stack([phase_state(q, p, theta0).amplitudes for p in range(q)])
    angles = np.array([phase_angle(q, p, theta0) for p in range(q)])
    theta = (states * angles) @ states.conj().T
    # Symmetrize away rounding so the result is Hermitian to machine precision.
    return ComplexMatrix(0.5 * (theta + theta.conj().T), 0)


def shift_mu(q: int, a: int) -> ComplexMatrix:
    """Multiplicative shift mu_a|n> = |a n mod q> on the Z_q basis."""
    if q < 2:
        raise DomainError(f"shift_mu needs q >= 2, got {q}")
    if math.gcd(a, q) != 1:
        raise DomainError(f"mu_{a} is not invertible mod {q}: gcd({a}, {q}) != 1")
    _check_dim(q)
    n = np.arange(q)
    m = np.zeros((q, q), dtype=complex)
    m[(a * n) % q, n] = 1.0
    return ComplexMatrix(m, 0)


def shift_multiplicative(a: int, dim: int) -> ComplexMatrix:
    """Non-modular shift |n> -> |a n> on |1>..|dim>, dropping a n > dim."""
    if a < 1:
        raise DomainError(f"multiplier must be positive, got {a}")
    dim = _check_dim(dim)
    n = np.arange(1, dim // a + 1)
    m = np.zeros((dim, dim), dtype=complex)
    m[a * n - 1, n - 1] = 1.0
    return ComplexMatrix(m, 1)


def clock_e(q: int, p: int, dim: int | None = None, basis_origin: int = 0) -> ComplexMatrix:
    """Clock operator e_p|n> = exp(2 i pi p n / q)|n>.

    On the Z_q basis ``dim`` defaults to q; on the positive-integer basis
    it must be given.
    """
    if q < 1:
        raise DomainError(f"clock needs q >= 1, got {q}")
    _check_origin(basis_origin)
    if dim is None:
        if basis_origin == 1:
            raise DomainError("clock on the positive-integer basis needs an explicit dim")
        dim = q
    dim = _check_dim(dim)
    n = _labels(dim, basis_origin)
    return ComplexMatrix(np.diag(_roots_of_unity(q, (p % q) * n)), basis_origin)


def order_eigenstate(q: int, a: int, k: int) -> StateVector:
    """Eigenvector of mu_a with eigenvalue exp(2 i pi k / r), r = ord_q(a).

    Supported on the orbit {a**j mod q}; amplitude exp(-2 i pi k j / r)/sqrt(r)
    sits on a**j mod q.
    """
    r = mult_order(a, q)
    if not 0 <= k < r:
        raise DomainError(f"k must lie in [0, {r}), got {k}")
    _check_dim(q)
    amps = np.zeros(q, dtype=complex)
    j = np.arange(r)
    orbit = [pow(a, int(i), q) for i in j]
    amps[orbit] = _roots_of_unity(r, -k * j) / math.sqrt(r)
    return StateVector(amps, 0)


def _check_galois(q: int, t: int) -> None:
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    if math.gcd(t, q) != 1:
        raise DomainError(f"t={t} is not a unit mod {q}")


def galois_twist(q: int, t: int, p: int, dim: int | None = None, basis_origin: int = 0) -> ComplexMatrix:
    """pi_w(e_p) for the Galois element zeta -> zeta**t, i.e. e_{t p mod q}."""
    _check_galois(q, t)
    return clock_e(q, (t * p) % q, dim=dim, basis_origin=basis_origin)


def galois_apply(x: ComplexMatrix, q: int, t: int, tol: float = TOL) -> ComplexMatrix:
    """Apply the Galois automorphism zeta -> zeta**t to an operator.

    On the Z_q basis (dim == q) this is the inner automorphism
    x -> mu_t^-1 x mu_t, which sends e_p to e_{tp} and fixes every mu_a.
    On the positive-integer basis it is defined on the clock subalgebra:
    ``x`` must be diagonal and q-periodic, and its diagonal is relabelled
    n -> t n mod q.
    """
    _check_galois(q, t)
    if x.basis_origin == 0:
        if x.dim != q:
            raise DomainError(f"Z_q operator has dim {x.dim}, expected {q}")
        idx = (t * np.arange(q)) % q
        return ComplexMatrix(x.entries[np.ix_(idx, idx)], 0)
    if not x.is_diagonal():
        raise DomainError("Galois action on the positive-integer basis needs a diagonal operator")
    if x.dim < q:
        raise DomainError(f"need dim >= q to read a full period, got dim={x.dim}, q={q}")
    d = x.diagonal()
    n = _labels(x.dim, 1)
    by_residue = np.empty(q, dtype=complex)
    by_residue[n[:q] % q] = d[:q]
    if np.max(np.abs(d - by_residue[n % q])) > tol:
        raise DomainError(f"diagonal is not {q}-periodic; Galois action undefined")
    return ComplexMatrix(np.diag(by_residue[(t * n) % q]), 1)


def evolve_sigma_t(x: ComplexMatrix, t: float) -> ComplexMatrix:
    """sigma_t(x) = exp(i t H0) x exp(-i t H0) with H0 = ln N.

    Entry (m, n) is multiplied by exp(i t (ln m - ln n)); diagonal entries
    are therefore left bit-for-bit unchanged.
    """
    if x.basis_origin != 1:
        raise DomainError("sigma_t needs the positive-integer basis (ln 0 is undefined)")
    logs = np.log(_labels(x.dim, 1).astype(float))
    phase = np.exp(1j * t * (logs[:, None] - logs[None, :]))
    return ComplexMatrix(x.entries * phase, 1)
