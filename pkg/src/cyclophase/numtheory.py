"""Arithmetic functions on the integers and the unit groups (Z/qZ)*.

Everything here is exact integer arithmetic except the Mangoldt function,
which returns natural logarithms. Factorization uses a smallest-prime-factor
sieve built lazily up to ``SIEVE_BOUND``; integers up to ``SIEVE_BOUND**2``
are handled by trial division against the sieved primes.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError

__all__ = [
    "SIEVE_BOUND",
    "FactoredInteger",
    "ArithmeticValue",
    "factorize",
    "totient",
    "carmichael",
    "moebius",
    "mangoldt",
    "mult_order",
    "is_primitive_root",
    "has_primitive_root",
    "ramanujan_sum",
    "divisors",
    "arithmetic_profile",
    "carmichael_table",
    "mangoldt_table",
]

SIEVE_BOUND = 10**6


class _Sieve:
    """Smallest-prime-factor table, built once and read-only afterwards."""

    def __init__(self, limit: int):
        spf = np.zeros(limit + 1, dtype=np.int64)
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p] == 0:
                block = spf[p * p :: p]
                block[block == 0] = p
        unset = np.nonzero(spf == 0)[0]
        spf[unset] = unset
        spf.flags.writeable = False
        self.limit = limit
        self.spf = spf
        self.primes = np.nonzero(spf[2:] == np.arange(2, limit + 1))[0] + 2


_sieve_lock = threading.Lock()
_sieves: dict[int, _Sieve] = {}


def _get_sieve(limit: int) -> _Sieve:
    sieve = _sieves.get(limit)
    if sieve is None:
        with _sieve_lock:
            sieve = _sieves.get(limit)
            if sieve is None:
                sieve = _sieves[limit] = _Sieve(limit)
    return sieve


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer with its prime-power decomposition.

    ``factors`` holds ``(prime, exponent)`` pairs with strictly increasing
    primes; it is empty exactly when ``value == 1``.
    """

    value: int
    factors: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.value < 1:
            raise DomainError(f"FactoredInteger needs a positive value, got {self.value}")
        prod = 1
        last = 1
        for p, k in self.factors:
            if p <= last or k < 1:
                raise DomainError(f"malformed factorization {self.factors}")
            last = p
            prod *= p**k
        if prod != self.value:
            raise DomainError(f"factors {self.factors} do not multiply to {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def is_squarefree(self) -> bool:
        return all(k == 1 for _, k in self.factors)

    @property
    def is_prime_power(self) -> bool:
        return len(self.factors) == 1

    def __iter__(self):
        return iter(self.factors)


@dataclass(frozen=True)
class ArithmeticValue:
    n: int
    totient: int
    carmichael: int
    moebius: int
    mangoldt: float


def _check_positive(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise DomainError(f"expected a positive integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise DomainError(f"expected a positive integer, got {n}")
    return n


@lru_cache(maxsize=65536)
def _factor_tuple(n: int, bound: int) -> tuple[tuple[int, int], ...]:
    if n > bound * bound:
        raise DomainError(f"{n} exceeds the factorization range (sieve bound {bound}, limit {bound * bound})")
    sieve = _get_sieve(bound)
    out: list[tuple[int, int]] = []
    if n <= bound:
        spf = sieve.spf
        while n > 1:
            p = int(spf[n])
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        return tuple(out)
    for p in sieve.primes:
        p = int(p)
        if p * p > n:
            break
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def factorize(n: int, *, bound: int = SIEVE_BOUND) -> FactoredInteger:
    """Prime-power decomposition of ``n``.

    >>> factorize(12).factors
    ((2, 2), (3, 1))
    """
    n = _check_positive(n)
    return FactoredInteger(n, _factor_tuple(n, bound))


def totient(n: int) -> int:
    """Euler's phi, computed from the factorization."""
    n = _check_positive(n)
    result = n
    for p, _ in _factor_tuple(n, SIEVE_BOUND):
        result -= result // p
    return result


def _carmichael_prime_power(p: int, k: int) -> int:
    if p == 2:
        return 1 if k == 1 else 2 if k == 2 else 2 ** (k - 2)
    return (p - 1) * p ** (k - 1)


def carmichael(n: int) -> int:
    """Exponent of the unit group (Z/nZ)*; carmichael(1) == 1."""
    n = _check_positive(n)
    lam = 1
    for p, k in _factor_tuple(n, SIEVE_BOUND):
        lam = math.lcm(lam, _carmichael_prime_power(p, k))
    return lam


def moebius(n: int) -> int:
    n = _check_positive(n)
    factors = _factor_tuple(n, SIEVE_BOUND)
    if any(k > 1 for _, k in factors):
        return 0
    return -1 if len(factors) % 2 else 1


def mangoldt(n: int) -> float:
    """ln(b) if n = b**k for a prime b and k >= 1, else 0.0."""
    n = _check_positive(n)
    factors = _factor_tuple(n, SIEVE_BOUND)
    if len(factors) == 1:
        return math.log(factors[0][0])
    return 0.0


def divisors(n: int) -> list[int]:
    """All positive divisors of ``n`` in increasing order."""
    n = _check_positive(n)
    divs = [1]
    for p, k in _factor_tuple(n, SIEVE_BOUND):
        divs = [d * p**e for d in divs for e in range(k + 1)]
    return sorted(divs)


def mult_order(a: int, q: int) -> int:
    """Smallest r >= 1 with a**r == 1 (mod q).

    The order divides carmichael(q), so it is found by stripping prime
    factors from lambda rather than by scanning exponents.

    Raises
    ------
    DomainError
        If q < 2 or gcd(a, q) != 1 (the order is undefined).
    """
    if q < 2:
        raise DomainError(f"modulus must be >= 2, got {q}")
    if math.gcd(a, q) != 1:
        raise DomainError(f"order undefined: gcd({a}, {q}) != 1")
    a %= q
    r = carmichael(q)
    for p, _ in _factor_tuple(r, SIEVE_BOUND):
        while r % p == 0 and pow(a, r // p, q) == 1:
            r //= p
    return r


def is_primitive_root(a: int, q: int) -> bool:
    if q < 2:
        raise DomainError(f"modulus must be >= 2, got {q}")
    if math.gcd(a, q) != 1:
        return False
    return mult_order(a, q) == totient(q)


def has_primitive_root(n: int) -> bool:
    """True iff n is 1, 2, 4, p**k or 2*p**k for an odd prime p."""
    n = _check_positive(n)
    if n in (1, 2, 4):
        return True
    if n % 2 == 0:
        n //= 2
        if n % 2 == 0:
            return False
    factors = _factor_tuple(n, SIEVE_BOUND)
    return len(factors) == 1


def ramanujan_sum(q: int, n: int) -> int:
    """c_q(n): sum of the n-th powers of the primitive q-th roots of unity.

    Uses the closed form mu(q/g) * phi(q) / phi(q/g) with g = gcd(n, q).
    """
    q = _check_positive(q)
    n = _check_positive(n)
    m = q // math.gcd(n, q)
    return moebius(m) * (totient(q) // totient(m))


def arithmetic_profile(n: int) -> ArithmeticValue:
    return ArithmeticValue(
        n=n,
        totient=totient(n),
        carmichael=carmichael(n),
        moebius=moebius(n),
        mangoldt=mangoldt(n),
    )


def carmichael_table(n_max: int) -> np.ndarray:
    """carmichael(n) for n = 1..n_max as a float array (index 0 is n = 1)."""
    return np.array([carmichael(n) for n in range(1, n_max + 1)], dtype=float)


def mangoldt_table(n_max: int) -> np.ndarray:
    """mangoldt(n) for n = 1..n_max (index 0 is n = 1)."""
    return np.array([mangoldt(n) for n in range(1, n_max + 1)], dtype=float)
