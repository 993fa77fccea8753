"""Partition function and KMS expectation values of the Bost-Connes system.

``kms_expectation`` evaluates the Euler-product closed form for psi_beta(p/q);
``dirichlet_oracle`` recomputes the same number at beta > 1 from the trace
of the Hamiltonian H0 = ln N, i.e. from a Dirichlet series whose
coefficients are roots of unity, as an independent check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .errors import DomainError
from .numtheory import divisors, factorize, mangoldt, moebius, totient

__all__ = [
    "ReducedFraction",
    "ThermalSample",
    "TailBoundedSum",
    "CriticalSlope",
    "zeta_partial",
    "kms_expectation",
    "kms_lowtemp_phase",
    "dirichlet_oracle",
    "dirichlet_branch",
    "lowtemp_limit",
    "critical_slope",
    "critical_slope_numeric",
    "thermal_surface",
    "beta_grid",
    "galois_averaged_closed_form",
]


@dataclass(frozen=True)
class ReducedFraction:
    """p/q in lowest terms with 0 <= p < q (p = 0 only for q = 1)."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise DomainError(f"denominator must be positive, got {self.q}")
        if not 0 <= self.p < self.q:
            raise DomainError(f"numerator must satisfy 0 <= p < q, got {self.p}/{self.q}")
        if math.gcd(self.p, self.q) != 1:
            raise DomainError(f"{self.p}/{self.q} is not reduced")

    @classmethod
    def of(cls, p: int, q: int) -> ReducedFraction:
        """Reduce p/q modulo 1 and to lowest terms."""
        if q < 1:
            raise DomainError(f"denominator must be positive, got {q}")
        p %= q
        g = math.gcd(p, q)
        return cls(p // g, q // g)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class ThermalSample:
    q: int
    p: int
    beta: float
    value: float


@dataclass(frozen=True)
class TailBoundedSum:
    partial: complex | float
    terms_used: int
    tail_bound: float


@dataclass(frozen=True)
class CriticalSlope:
    """Slope of psi_{1-eps}(1/q) in eps at eps -> 0+.

    ``exact`` is Lambda(q)/phi(q) (zero unless q is a prime power);
    ``stated`` is the approximation Lambda(q)/q.
    """

    q: int
    exact: float
    stated: float


def _check_beta_convergent(beta: float) -> None:
    if not beta > 1:
        raise DomainError(f"partition function diverges for beta <= 1 (got beta={beta})")


def _euler_maclaurin_tail(beta: float, n: int) -> float:
    # sum_{m > n} m**-beta = n**(1-beta)/(beta-1) - n**-beta/2 + O(beta n**(-beta-1)/12)
    return n ** (1.0 - beta) / (beta - 1.0) - 0.5 * n ** (-beta)


def _zeta_tail_bound(beta: float, n: int) -> float:
    return beta * n ** (-beta - 1.0)


def zeta_partial(beta: float, n_terms: int) -> TailBoundedSum:
    """zeta(beta) from n_terms terms plus an Euler-Maclaurin tail.

    Raises
    ------
    DomainError
        If beta <= 1 or n_terms < 10.
    """
    _check_beta_convergent(beta)
    if n_terms < 10:
        raise DomainError(f"n_terms must be >= 10, got {n_terms}")
    head = float(kernels.residue_power_sums(1, beta, n_terms)[0])
    return TailBoundedSum(head + _euler_maclaurin_tail(beta, n_terms), n_terms, _zeta_tail_bound(beta, n_terms))


def _euler_factor_log(b: int, k: int, beta: float) -> tuple[float, int]:
    """log|factor| and sign of b**(-k beta) (1 - b**(beta-1)) / (1 - 1/b)."""
    lb = math.log(b)
    x = (beta - 1.0) * lb
    if x == 0.0:
        return -math.inf, 0
    if x > 0:
        # |1 - e^x| = e^x (1 - e^-x)
        log_num, sign = x + math.log(-math.expm1(-x)), -1
    else:
        log_num, sign = math.log(-math.expm1(x)), 1
    return -k * beta * lb + log_num - math.log1p(-1.0 / b), sign


def _psi_q(q: int, beta: float) -> float:
    if beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    if beta == 0:
        return 1.0
    log_abs = 0.0
    sign = 1
    for b, k in factorize(q):
        lf, s = _euler_factor_log(b, k, beta)
        if s == 0:
            return 0.0
        log_abs += lf
        sign *= s
    return sign * math.exp(log_abs)


def kms_expectation(frac: ReducedFraction, beta: float) -> float:
    """psi_beta(p/q) as the product over the prime powers b**k dividing q of
    b**(-k beta) (1 - b**(beta-1)) / (1 - 1/b).

    Evaluated in log space with explicit signs. Independent of p; equal to
    1 for q = 1 or beta = 0, and to 0 at beta = 1 for q >= 2.
    """
    return _psi_q(frac.q, beta)


def kms_lowtemp_phase(q: int, beta: float) -> float:
    """q**-beta times the product over primes b | q of (1 - b**(beta-1))/(1 - 1/b)."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    _check_beta_convergent(beta)
    value = q ** (-beta)
    for b in factorize(q).primes:
        value *= (1.0 - b ** (beta - 1.0)) / (1.0 - 1.0 / b)
    return value


def _periodic_dirichlet(table: np.ndarray, beta: float, n_terms: int) -> TailBoundedSum:
    """sum_{n=1}^N table[n mod q] n**-beta for N = n_terms rounded up to a multiple of q.

    The mean of the table is carried by an Euler-Maclaurin tail; the
    zero-mean remainder has bounded partial sums, so by Abel summation
    its tail is at most max|partial sum| * (N+1)**-beta.
    """
    q = table.size
    n = -(-n_terms // q) * q
    sums = kernels.residue_power_sums(q, beta, n)
    mean = table.mean() if q > 1 else table[0]
    head = complex(np.dot(table, sums)) if np.iscomplexobj(table) else float(np.dot(table, sums))
    centered = table - mean
    # Partial sums of the centered coefficients in order n = 1, 2, ..., q.
    ordered = np.roll(centered, -1)
    abel = float(np.max(np.abs(np.cumsum(ordered)))) if q > 1 else 0.0
    tail_bound = abel * (n + 1.0) ** (-beta) + abs(mean) * _zeta_tail_bound(beta, n)
    return TailBoundedSum(head + mean * _euler_maclaurin_tail(beta, n), n, tail_bound)


def _ratio(num: TailBoundedSum, den: TailBoundedSum) -> TailBoundedSum:
    value = num.partial / den.partial
    bound = (num.tail_bound + abs(value) * den.tail_bound) / (den.partial - den.tail_bound)
    return TailBoundedSum(value, num.terms_used, bound)


def dirichlet_branch(frac: ReducedFraction, t: int, beta: float, n_terms: int) -> TailBoundedSum:
    """Extremal low-temperature state phi_{beta,w}(e_{p/q}) for the Galois element zeta -> zeta**t.

    sum_n exp(2 i pi n t p / q) n**-beta / zeta(beta); complex in general.
    """
    _check_beta_convergent(beta)
    q = frac.q
    if math.gcd(t, q) != 1:
        raise DomainError(f"t={t} is not a unit mod {q}")
    r = np.arange(q)
    table = np.exp(2j * math.pi * (((t * frac.p) * r) % q) / q)
    if q == 1:
        table = np.ones(1)
    num = _periodic_dirichlet(table, beta, n_terms)
    den = zeta_partial(beta, num.terms_used)
    return _ratio(num, den)


def dirichlet_oracle(frac: ReducedFraction, beta: float, n_terms: int) -> TailBoundedSum:
    """psi_beta(p/q) from the trace of pi_w(e_{p/q}) exp(-beta H0) / zeta(beta),
    averaged over the Galois group (Z/qZ)*.

    Summing exp(2 i pi n t p/q) over the units t gives the Ramanujan sum
    c_q(n), so the numerator is sum_n c_q(n) n**-beta / phi(q), evaluated
    over full periods of q. The coefficients are computed directly as sums
    of roots of unity, not from any closed form. The imaginary part of the
    averaged series cancels; ``partial`` carries it as a complex number so
    callers can confirm that.
    """
    _check_beta_convergent(beta)
    q = frac.q
    r = np.arange(q)
    units = [t for t in range(q) if math.gcd(t, q) == 1] if q > 1 else [0]
    roots = np.exp(2j * math.pi * ((np.outer(units, r) * frac.p) % q) / q)
    table = roots.mean(axis=0)
    if q == 1:
        table = np.ones(1)
    num = _periodic_dirichlet(table, beta, n_terms)
    den = zeta_partial(beta, num.terms_used)
    return _ratio(num, den)


def lowtemp_limit(q: int) -> float:
    """mu(q)/phi(q): the beta -> infinity limit of psi_beta(1/q)."""
    return moebius(q) / totient(q)


def critical_slope(q: int) -> CriticalSlope:
    """lim_{eps->0+} psi_{1-eps}(1/q)/eps.

    Each prime-power factor vanishes linearly in eps, so the limit is
    Lambda(q)/phi(q) when q is a prime power and 0 otherwise.
    """
    if q < 2:
        raise DomainError(f"critical slope needs q >= 2, got {q}")
    lam = mangoldt(q)
    return CriticalSlope(q=q, exact=lam / totient(q), stated=lam / q)


def critical_slope_numeric(q: int, h: float = 1e-2, levels: int = 6) -> float:
    """Richardson-extrapolated limit of psi_{1-eps}(1/q)/eps as eps -> 0.

    Evaluates g(eps) = psi_{1-eps}/eps at eps = h, h/2, ..., h/2**(levels-1)
    and eliminates the O(eps**j) error terms with a Neville table.
    """
    if q < 2:
        raise DomainError(f"critical slope needs q >= 2, got {q}")
    eps = [h / 2**i for i in range(levels)]
    table = [_psi_q(q, 1.0 - e) / e for e in eps]
    for j in range(1, levels):
        factor = 2.0**j
        table = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
    return table[0]


def beta_grid(beta_min: float, beta_max: float, steps: int) -> np.ndarray:
    """Uniform grid with exact endpoints: beta_min + i (beta_max - beta_min)/(steps - 1)."""
    if steps < 1:
        raise DomainError(f"need at least one beta, got {steps}")
    if steps == 1:
        return np.array([float(beta_min)])
    i = np.arange(steps)
    grid = (beta_min * (steps - 1 - i) + beta_max * i) / (steps - 1)
    return grid


def thermal_surface(q_max: int, betas: Iterable[float]) -> list[ThermalSample]:
    """psi_beta(1/q) for q = 1..q_max and every beta, q outer and beta inner."""
    betas = [float(b) for b in betas]
    if q_max < 1:
        raise DomainError(f"q_max must be >= 1, got {q_max}")
    if not betas:
        raise DomainError("beta grid is empty")
    if any(b < 0 for b in betas):
        raise DomainError("beta values must be >= 0")
    out = []
    for q in range(1, q_max + 1):
        frac = ReducedFraction(1 % q, q) if q > 1 else ReducedFraction(0, 1)
        for b in betas:
            out.append(ThermalSample(q=q, p=frac.p, beta=b, value=kms_expectation(frac, b)))
    return out


def galois_averaged_closed_form(q: int, beta: float) -> float:
    """(1/phi(q)) sum_{d | q} mu(q/d) d**(1-beta).

    The Dirichlet series of the Ramanujan sums summed in closed form; a
    third route to psi_beta(1/q) used for diagnostics.
    """
    return sum(moebius(q // d) * d ** (1.0 - beta) for d in divisors(q)) / totient(q)
