import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclophase import DomainError
from cyclophase import bostconnes as bc
from cyclophase import numtheory as nt

F = bc.ReducedFraction


def brute_twisted_series(p, q, beta, n):
    """Direct sum of exp(2 i pi n p/q) n**-beta, one term at a time."""
    return sum(cmath.exp(2j * math.pi * k * p / q) * k ** (-beta) for k in range(1, n + 1))


def prime_power_factor(b, k, beta):
    return b ** (-k * beta) * (1 - b ** (beta - 1)) / (1 - 1 / b)


# -- fractions ----------------------------------------------------------------

def test_fraction_validation():
    with pytest.raises(DomainError):
        F(2, 4)
    with pytest.raises(DomainError):
        F(5, 3)
    with pytest.raises(DomainError):
        F(0, 2)
    assert F.of(6, 4) == F(1, 2)
    assert F.of(3, 3) == F(0, 1)
    assert str(F(2, 7)) == "2/7"


# -- zeta ---------------------------------------------------------------------

def test_zeta_two():
    z = bc.zeta_partial(2.0, 10**4)
    assert abs(z.partial - math.pi**2 / 6) <= 1e-8
    assert z.tail_bound == pytest.approx(2.0 * 1e-12)


def test_zeta_four():
    assert abs(bc.zeta_partial(4.0, 10**3).partial - math.pi**4 / 90) <= 1e-9
    assert bc.zeta_partial(4.0, 10**3).partial == pytest.approx(1.082323, abs=1e-6)


def test_zeta_cold_limit():
    assert abs(bc.zeta_partial(50.0, 100).partial - 1.0) <= 1e-14


@pytest.mark.parametrize("beta", [1.0, 0.5, -2.0])
def test_zeta_diverges(beta):
    with pytest.raises(DomainError, match="partition function diverges"):
        bc.zeta_partial(beta, 100)


def test_zeta_needs_ten_terms():
    with pytest.raises(DomainError):
        bc.zeta_partial(2.0, 9)


@pytest.mark.parametrize("beta", [1.1, 1.5, 2.0, 3.0, 6.0])
def test_zeta_tail_bound_respected_on_doubling(beta):
    prev = bc.zeta_partial(beta, 1000)
    for n in (2000, 4000, 8000, 16000):
        cur = bc.zeta_partial(beta, n)
        assert abs(cur.partial - prev.partial) <= prev.tail_bound
        assert cur.tail_bound < prev.tail_bound
        prev = cur


# -- closed form --------------------------------------------------------------

def test_kms_examples():
    assert bc.kms_expectation(F(1, 2), 2.0) == pytest.approx(-0.5, abs=1e-15)
    assert abs(bc.kms_expectation(F(1, 6), 50.0) - 0.5) <= 1e-12
    for q in range(1, 41):
        assert bc.kms_expectation(F.of(1, q), 0.0) == 1.0
    for beta in (0.0, 0.3, 1.0, 2.0, 75.0):
        assert bc.kms_expectation(F(0, 1), beta) == 1.0


def test_kms_two_closed_form():
    for beta in np.linspace(0, 10, 41):
        assert bc.kms_expectation(F(1, 2), beta) == pytest.approx(2 ** (1 - beta) - 1, abs=1e-14)


def test_kms_vanishes_at_critical_point():
    for q in range(2, 41):
        assert bc.kms_expectation(F.of(1, q), 1.0) == 0.0


def test_kms_no_overflow():
    v = bc.kms_expectation(F(1, 30), 400.0)
    assert math.isfinite(v) and abs(v - bc.lowtemp_limit(30)) <= 1e-12


def test_kms_rejects_negative_beta():
    with pytest.raises(DomainError):
        bc.kms_expectation(F(1, 3), -0.1)


def test_kms_independent_of_numerator():
    for q in range(2, 21):
        for beta in (0.5, 1.5, 2.0, 7.0):
            values = {bc.kms_expectation(F(p, q), beta) for p in range(1, q) if math.gcd(p, q) == 1}
            assert len(values) == 1


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_kms_single_prime(q):
    for beta in (0.25, 0.5, 1.5, 2.0, 4.0):
        expected = q ** (-beta) * (1 - q ** (beta - 1)) / (1 - 1 / q)
        assert bc.kms_expectation(F(1, q), beta) == pytest.approx(expected, rel=1e-13)


def test_kms_is_product_of_prime_power_factors():
    for q in range(2, 200):
        expected = math.prod(prime_power_factor(b, k, 2.5) for b, k in nt.factorize(q).factors)
        assert bc.kms_expectation(F.of(1, q), 2.5) == pytest.approx(expected, rel=1e-12, abs=1e-300)


def test_lowtemp_phase_matches():
    assert bc.kms_lowtemp_phase(2, 2.0) == pytest.approx(-0.5, abs=1e-15)
    assert abs(bc.kms_lowtemp_phase(12, 3.0) - bc.kms_expectation(F(1, 12), 3.0)) <= 1e-12
    assert bc.kms_lowtemp_phase(1, 3.0) == 1.0
    with pytest.raises(DomainError):
        bc.kms_lowtemp_phase(5, 1.0)


@given(st.integers(1, 500), st.floats(1.01, 30.0))
def test_lowtemp_phase_agrees_everywhere(q, beta):
    a = bc.kms_lowtemp_phase(q, beta)
    b = bc.kms_expectation(F.of(1, q), beta)
    assert a == pytest.approx(b, rel=1e-10, abs=1e-300)


@pytest.mark.parametrize("q, limit", [(2, -1.0), (4, 0.0), (6, 0.5), (1, 1.0), (30, -0.125)])
def test_lowtemp_limit_examples(q, limit):
    assert bc.lowtemp_limit(q) == limit


def test_squarefree_decay_bound():
    for q in range(1, 101):
        if not nt.factorize(q).is_squarefree:
            continue
        for beta in (10.0, 12.5, 20.0, 40.0):
            diff = abs(bc.kms_expectation(F.of(1, q), beta) - bc.lowtemp_limit(q))
            assert diff <= 2 ** (1 - beta) * q


# -- Dirichlet oracle ---------------------------------------------------------

def test_oracle_alternating_series():
    o = bc.dirichlet_oracle(F(1, 2), 2.0, 10**6)
    assert abs(o.partial.real + 0.5) <= 1e-3
    assert abs(o.partial.real + 0.5) <= o.tail_bound + 1e-15


def test_oracle_third():
    o = bc.dirichlet_oracle(F(1, 3), 2.0, 10**6)
    assert abs(o.partial.real - bc.kms_expectation(F(1, 3), 2.0)) <= 1e-3


def test_oracle_trivial_fraction_is_exact():
    for beta in (1.5, 2.0, 3.0):
        assert bc.dirichlet_oracle(F(0, 1), beta, 10**4).partial == 1.0


def test_oracle_against_brute_force_sum():
    # Averaging the termwise series over the Galois group reproduces the oracle head.
    q, beta, n = 5, 2.0, 2000
    units = [t for t in range(1, q) if math.gcd(t, q) == 1]
    brute = sum(brute_twisted_series(t, q, beta, n) for t in units) / len(units)
    zeta_head = sum(k ** (-beta) for k in range(1, n + 1))
    o = bc.dirichlet_oracle(F(1, q), beta, n)
    assert abs(brute.imag) < 1e-12
    assert abs(brute.real / zeta_head - o.partial.real) < 1e-3


def test_oracle_agreement_grid():
    for q in range(1, 13):
        for p in [x for x in range(1, q) if math.gcd(x, q) == 1] or [0]:
            for beta in (1.5, 2.0, 3.0):
                o = bc.dirichlet_oracle(F(p, q), beta, 10**6)
                closed = bc.kms_expectation(F(p, q), beta)
                assert abs(o.partial.real - closed) <= 1e-3
                assert abs(complex(o.partial).imag) < 1e-8
                assert abs(o.partial.real - closed) <= o.tail_bound + 1e-12


def test_oracle_rejects_divergent():
    with pytest.raises(DomainError, match="diverges"):
        bc.dirichlet_oracle(F(1, 3), 1.0, 1000)


def test_single_branch_is_complex():
    b = bc.dirichlet_branch(F(1, 3), 1, 2.0, 10**5)
    assert abs(b.partial.imag) > 0.1
    conj = bc.dirichlet_branch(F(1, 3), 2, 2.0, 10**5)
    assert abs(b.partial - conj.partial.conjugate()) < 1e-12


def test_branches_average_to_closed_form():
    q, beta = 9, 2.0
    units = [t for t in range(1, q) if math.gcd(t, q) == 1]
    mean = sum(bc.dirichlet_branch(F(1, q), t, beta, 10**5).partial for t in units) / len(units)
    assert abs(mean - bc.kms_expectation(F(1, q), beta)) < 1e-6


def test_branch_rejects_nonunit():
    with pytest.raises(DomainError):
        bc.dirichlet_branch(F(1, 6), 2, 2.0, 1000)


@settings(max_examples=40)
@given(st.integers(1, 60), st.floats(1.2, 8.0))
def test_ramanujan_closed_form_route(q, beta):
    assert bc.galois_averaged_closed_form(q, beta) == pytest.approx(
        bc.kms_expectation(F.of(1, q), beta), rel=1e-10, abs=1e-14
    )


# -- critical slope -----------------------------------------------------------

def test_critical_slope_examples():
    s8 = bc.critical_slope(8)
    assert s8.exact == pytest.approx(math.log(2) / 4, abs=1e-15)
    assert s8.exact == pytest.approx(0.17329, abs=1e-5)
    assert s8.stated == pytest.approx(math.log(2) / 8)
    assert bc.critical_slope(6).exact == 0.0
    s7 = bc.critical_slope(7)
    assert s7.exact == pytest.approx(math.log(7) / 6)
    assert s7.stated == pytest.approx(math.log(7) / 7)
    with pytest.raises(DomainError):
        bc.critical_slope(1)


def test_critical_slope_plain_difference_quotient():
    # Independent of the Richardson table: psi_{1-eps}/eps at eps = 1e-6.
    for q in (8, 7, 9, 6):
        raw = bc.kms_expectation(F.of(1, q), 1 - 1e-6) / 1e-6
        assert raw == pytest.approx(bc.critical_slope(q).exact, rel=1e-4, abs=1e-5)


def test_critical_slope_richardson():
    for q in range(2, 41):
        exact = bc.critical_slope(q).exact
        num = bc.critical_slope_numeric(q)
        if exact:
            assert abs(num - exact) / exact <= 1e-6
        else:
            assert abs(num) <= 1e-9


# -- thermal surface ----------------------------------------------------------

def test_beta_grid():
    g = bc.beta_grid(0.5, 1.5, 41)
    assert g[0] == 0.5 and g[20] == 1.0 and g[-1] == 1.5
    assert g[1] == pytest.approx(0.525)
    assert len(bc.beta_grid(2.0, 3.0, 1)) == 1


def test_thermal_surface_layout():
    betas = bc.beta_grid(0.5, 1.5, 41)
    s = bc.thermal_surface(40, betas)
    assert len(s) == 40 * 41
    assert [(x.q, x.beta) for x in s[:2]] == [(1, 0.5), (1, 0.525)]
    assert s[41].q == 2 and s[41].beta == 0.5
    assert all(x.value == 1.0 for x in s if x.q == 1)
    assert all(x.value == 0.0 for x in s if x.beta == 1.0 and x.q >= 2)
    assert all(math.isfinite(x.value) for x in s)


def test_thermal_surface_sign_pattern():
    for x in bc.thermal_surface(40, [1.5]):
        mu = nt.moebius(x.q)
        if mu != 0:
            assert np.sign(x.value) == mu
        else:
            assert abs(x.value) < abs(bc.kms_expectation(F(1, 2), 1.5))


def test_thermal_surface_validation():
    with pytest.raises(DomainError):
        bc.thermal_surface(0, [1.0])
    with pytest.raises(DomainError):
        bc.thermal_surface(3, [])
    with pytest.raises(DomainError):
        bc.thermal_surface(3, [-0.5])
