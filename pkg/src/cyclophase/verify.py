"""Desk-scale invariant suites behind ``cyclophase verify``."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import bostconnes as bc
from . import hilbert as hb
from . import numtheory as nt
from . import phaselock as pl
from . import spectral as sp

__all__ = ["Check", "SUITES", "run_suite"]


@dataclass
class Check:
    name: str
    passed: bool
    value: float | None = None
    tolerance: float | None = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _le(name: str, value: float, tol: float, **detail) -> Check:
    return Check(name, bool(value <= tol), float(value), tol, detail)


def _units(q: int) -> list[int]:
    return [a for a in range(1, q) if math.gcd(a, q) == 1]


def numtheory_suite() -> list[Check]:
    anchors = {
        "carmichael(8)": (nt.carmichael(8), 2),
        "totient(8)": (nt.totient(8), 4),
        "totient(7)": (nt.totient(7), 6),
        "totient(9)": (nt.totient(9), 6),
        "mult_order(3,7)": (nt.mult_order(3, 7), 6),
        "mult_order(2,9)": (nt.mult_order(2, 9), 6),
        "mult_order(3,8)": (nt.mult_order(3, 8), 2),
    }
    checks = [Check(f"table anchor {k}", got == want, got, None, {"expected": want}) for k, (got, want) in anchors.items()]
    bad = 0
    for n in range(2, 501):
        lam, phi = nt.carmichael(n), nt.totient(n)
        if phi % lam or phi > n - 1:
            bad += 1
        for a in _units(n):
            if lam % nt.mult_order(a, n):
                bad += 1
    checks.append(Check("order | lambda | phi <= n-1 for n <= 500", bad == 0, bad, 0))
    return checks


def spectral_suite(t_max: int = 2**14) -> list[Check]:
    lam = nt.carmichael_table(t_max)
    g = sp.growth_exponent(sp.cumulative_sums(lam, t_max))
    fit = sp.loglog_slope(sp.periodogram(sp.normalized_cumsum(lam, t_max, 1.90)))
    return [
        Check("growth exponent of sum lambda(n) in [1.8, 2.0]", 1.8 <= g <= 2.0, g, None, {"t_max": t_max}),
        Check(
            "Carmichael periodogram slope within -0.70 +/- 0.20",
            abs(fit.exponent + 0.70) <= 0.20,
            fit.exponent,
            0.20,
            fit.to_dict(),
        ),
    ]


def operators_suite(q_max: int = 32) -> list[Check]:
    ortho = complete = 0.0
    for q in range(1, q_max + 1):
        states = np.column_stack([hb.phase_state(q, p).amplitudes for p in range(q)])
        ortho = max(ortho, float(np.max(np.abs(states.conj().T @ states - np.eye(q)))))
        complete = max(complete, float(np.max(np.abs(states @ states.conj().T - np.eye(q)))))

    eig = orth_u = 0.0
    power_bad = 0
    for q in range(2, q_max + 1):
        for a in _units(q):
            mu = hb.shift_mu(q, a)
            r = nt.mult_order(a, q)
            if not (mu**r).equals(mu.identity()):
                power_bad += 1
            us = [hb.order_eigenstate(q, a, k) for k in range(r)]
            for k, u in enumerate(us):
                lhs = (mu @ u).amplitudes
                eig = max(eig, float(np.max(np.abs(lhs - np.exp(2j * math.pi * k / r) * u.amplitudes))))
            mat = np.column_stack([u.amplitudes for u in us])
            orth_u = max(orth_u, float(np.max(np.abs(mat.conj().T @ mat - np.eye(r)))))

    mult_bad = exch_bad = 0
    for q in range(2, 25):
        units = _units(q)
        mus = {a: hb.shift_mu(q, a) for a in units}
        for k in units:
            for l in units:
                if not (mus[k] @ mus[l]).equals(mus[(k * l) % q]):
                    mult_bad += 1
            inv = pow(k, -1, q)
            for p in range(q):
                lhs = mus[k] @ hb.clock_e(q, p) @ mus[k].dagger()
                if not lhs.equals(hb.clock_e(q, (p * inv) % q)):
                    exch_bad += 1

    dim, t = 64, 1.3
    m2 = hb.shift_multiplicative(2, dim)
    sigma_mu = hb.evolve_sigma_t(m2, t).max_abs_diff(m2 * (2.0 ** (1j * t)))
    sigma_e_exact = all(
        hb.evolve_sigma_t(hb.clock_e(q, p, dim=dim, basis_origin=1), t).equals(hb.clock_e(q, p, dim=dim, basis_origin=1))
        for q in range(1, 13)
        for p in range(q)
    )

    galois = 0.0
    for q in range(1, 13):
        for tw in [w for w in range(1, q + 1) if math.gcd(w, q) == 1]:
            for p in range(q):
                e = hb.clock_e(q, p, dim=dim, basis_origin=1)
                for s in (-2.0, 0.37, 1.3):
                    lhs = hb.galois_apply(hb.evolve_sigma_t(e, s), q, tw)
                    rhs = hb.evolve_sigma_t(hb.galois_apply(e, q, tw), s)
                    galois = max(galois, lhs.max_abs_diff(rhs))

    E = hb.lowering_E(16)
    proj0 = hb.basis_state(16, 0).projector()
    e_defect = (E.dagger() @ E).equals(E.identity() - proj0)

    return [
        _le("phase-state orthonormality residual (q <= 32)", ortho, 1e-12),
        _le("phase-state completeness residual (q <= 32)", complete, 1e-12),
        _le("u_k eigenresidual max (q <= 32)", eig, 1e-12),
        _le("u_k orthonormality residual (q <= 32)", orth_u, 1e-12),
        Check("mu_a ** ord_q(a) == identity (exact)", power_bad == 0, power_bad, 0),
        Check("mu_k mu_l == mu_kl (exact, q <= 24)", mult_bad == 0, mult_bad, 0),
        Check("mu_a e_p mu_a^dag == e_{p a^-1} (exact, q <= 24)", exch_bad == 0, exch_bad, 0),
        _le("sigma_t(M_2) vs 2^{it} M_2 (dim 64)", sigma_mu, 1e-12),
        Check("sigma_t(e_p) == e_p (exact)", sigma_e_exact),
        _le("Galois twist commutes with sigma_t (q <= 12)", galois, 1e-12),
        Check("E^dag E == 1 - |0><0| (exact)", e_defect),
    ]


def kms_suite(q_max: int = 12, betas=(1.5, 2.0, 3.0), n_terms: int = 10**6) -> list[Check]:
    diff = imag = 0.0
    bound_ok = True
    for q in range(1, q_max + 1):
        for p in _units(q) if q > 1 else [0]:
            frac = bc.ReducedFraction(p, q)
            for beta in betas:
                o = bc.dirichlet_oracle(frac, beta, n_terms)
                d = abs(o.partial.real - bc.kms_expectation(frac, beta))
                diff = max(diff, d)
                imag = max(imag, abs(complex(o.partial).imag))
                bound_ok &= d <= o.tail_bound + 1e-12
    hot = max(abs(bc.kms_expectation(bc.ReducedFraction.of(1, q), 0.0) - 1.0) for q in range(1, 41))
    cold = max(abs(bc.kms_expectation(bc.ReducedFraction.of(1, q), 50.0) - bc.lowtemp_limit(q)) for q in range(1, 41))
    slope = 0.0
    for q in range(2, 41):
        exact = bc.critical_slope(q).exact
        num = bc.critical_slope_numeric(q)
        slope = max(slope, abs(num - exact) / exact if exact else abs(num))
    z2 = abs(bc.zeta_partial(2.0, 10**4).partial - math.pi**2 / 6)
    z4 = abs(bc.zeta_partial(4.0, 10**3).partial - math.pi**4 / 90)
    return [
        _le("oracle-vs-closed-form max |diff|", diff, 1e-3, q_max=q_max, betas=list(betas), n_terms=n_terms),
        _le("oracle imaginary part max", imag, 1e-8),
        Check("oracle error within reported tail bound", bool(bound_ok)),
        Check("psi_0 == 1 for q <= 40", hot == 0.0, hot, 0.0),
        _le("|psi_50 - mu(q)/phi(q)| max for q <= 40", cold, 1e-10),
        _le("critical slope Richardson vs Lambda(q)/phi(q), relative", slope, 1e-6),
        _le("|zeta_EM(2) - pi^2/6| (N = 1e4)", z2, 1e-8),
        _le("|zeta_EM(4) - pi^4/90| (N = 1e3)", z4, 1e-8),
    ]


def dynamics_suite() -> list[Check]:
    rows = []
    ok = True
    for ratio in (0.0, 0.5, 0.9, 1.25, 1.5, 2.0, 4.0):
        params = pl.AdlerParams(K=1.0, delta_omega=ratio)
        dt = 1e-2 / max(1.0, ratio)
        _, numeric = pl.adler_integrate(params, 500.0, dt)
        analytic = pl.adler_mean_frequency(params)
        err = abs(numeric - analytic) / analytic if analytic else abs(numeric)
        tol = 1e-2 if analytic else 1e-3
        ok &= err <= tol
        rows.append({"ratio": ratio, "numeric": numeric, "analytic": analytic, "error": err, "tolerance": tol})

    rigid = max(
        abs(pl.winding_number(pl.CircleMapParams(Omega=om, c=0.0, n_iter=1000)).nu - om)
        for om in np.linspace(0.0, 1.0, 11)
    )
    nus = [pt.nu for pt in pl.staircase(0.8, 0.0, 1.0, 1001, 10_000)]
    monotone = bool(np.all(np.diff(nus) >= 0))
    half = bc.ReducedFraction(1, 2)
    widths = [pl.plateau_width(c, half) for c in (0.2, 0.5, 0.9)]
    return [
        Check("Adler numeric vs analytic mean frequency", bool(ok), None, None, {"table": rows}),
        _le("circle map nu - Omega at c = 0", rigid, 1e-9),
        Check("staircase monotone in Omega (c = 0.8)", monotone),
        Check(
            "plateau width at 1/2 increasing over c = 0.2, 0.5, 0.9",
            widths[0] < widths[1] < widths[2],
            None,
            None,
            {"widths": widths},
        ),
    ]


SUITES: dict[str, Callable[[], list[Check]]] = {
    "numtheory": numtheory_suite,
    "spectral": spectral_suite,
    "operators": operators_suite,
    "kms": kms_suite,
    "dynamics": dynamics_suite,
}


def run_suite(name: str) -> dict:
    names = list(SUITES) if name == "all" else [name]
    report = {}
    for n in names:
        report[n] = [c.to_dict() for c in SUITES[n]()]
    passed = all(c["passed"] for checks in report.values() for c in checks)
    return {"suite": name, "passed": passed, "results": report}
