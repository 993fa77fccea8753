"""Command-line entry point: ``cyclophase <command> [options]``.

Data files go to ``--out`` (default: ``$CYCLOPHASE_OUTPUT_DIR`` or ``./out``).
CSV files start with a ``#`` metadata block; floats are written with 17
significant digits so identical runs produce identical bytes.

Exit status: 0 success, 1 internal failure or failed verification,
2 bad parameters.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from . import bostconnes as bc
from . import hilbert as hb
from . import numtheory as nt
from . import phaselock as pl
from . import spectral as sp
from .errors import DomainError

OUTPUT_ENV = "CYCLOPHASE_OUTPUT_DIR"
DEFAULT_SEED = 0


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    return format(float(x), ".17g")


def _metadata(command: str, params: dict, **extra) -> dict:
    meta = {"command": command, "parameters": params, "version": f"cyclophase {__version__}", "seed": DEFAULT_SEED}
    meta.update(extra)
    return meta


def write_csv(path: Path, meta: dict, header: list[str], rows, blocks: list[int] | None = None) -> Path:
    """Write rows after a '#' metadata block. ``blocks`` lists row indices
    before which a blank line is inserted (gnuplot data-block layout)."""
    buf = io.StringIO()
    buf.write(f"# command: {meta['command']}\n")
    for key, value in meta["parameters"].items():
        buf.write(f"# param {key}: {value}\n")
    for key, value in meta.items():
        if key not in ("command", "parameters"):
            buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    breaks = set(blocks or ())
    for i, row in enumerate(rows):
        if i in breaks:
            buf.write("\n")
        writer.writerow([fmt(v) for v in row])
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


def write_json(path: Path, meta: dict, payload: dict) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"metadata": meta, **payload}
    path.write_text(json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n", encoding="utf-8")
    return path


def _out_dir(args) -> Path:
    return Path(args.out or os.environ.get(OUTPUT_ENV) or "out")


def _params(args, *names) -> dict:
    return {n: getattr(args, n) for n in names}


# -- commands ---------------------------------------------------------------

NUMFUN = {
    "totient": lambda a: nt.totient(a.n),
    "carmichael": lambda a: nt.carmichael(a.n),
    "moebius": lambda a: nt.moebius(a.n),
    "mangoldt": lambda a: nt.mangoldt(a.n),
    "factorize": lambda a: [list(f) for f in nt.factorize(a.n).factors],
    "order": lambda a: nt.mult_order(_need(a, "a"), a.n),
    "primitive-root": lambda a: nt.is_primitive_root(_need(a, "a"), a.n),
    "ramanujan": lambda a: nt.ramanujan_sum(_need(a, "q"), a.n),
}


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise DomainError(f"--fn {args.fn} needs --{name}")
    return value


def cmd_numfun(args) -> int:
    result = {"n": args.n}
    for extra in ("a", "q"):
        if getattr(args, extra) is not None:
            result[extra] = getattr(args, extra)
    result["value"] = NUMFUN[args.fn](args)
    print(json.dumps(result))
    if args.out:
        write_json(Path(args.out) / f"numfun_{args.fn}_{args.n}.json", _metadata("numfun", _params(args, "fn", "n", "a", "q")), result)
    return 0


def cmd_carmichael_spectrum(args) -> int:
    params = _params(args, "t_max", "sigma", "f_lo", "f_hi")
    meta = _metadata(
        "carmichael-spectrum",
        params,
        fft_input="mean-removed normalized series",
        window="none",
    )
    lam = nt.carmichael_table(args.t_max)
    series = sp.normalized_cumsum(lam, args.t_max, args.sigma)
    pgram = sp.periodogram(series)
    band = None if args.f_lo is None and args.f_hi is None else (
        args.f_lo if args.f_lo is not None else float(pgram.frequencies[0]),
        args.f_hi if args.f_hi is not None else float(pgram.frequencies[-1]),
    )
    fit = sp.loglog_slope(pgram, band)
    growth = sp.growth_exponent(sp.cumulative_sums(lam, args.t_max))
    out = _out_dir(args)
    write_csv(out / "carmichael_series.csv", meta, ["t", "value"], zip(series.index, series.samples))
    write_csv(out / "carmichael_periodogram.csv", meta, ["freq", "power"], zip(pgram.frequencies, pgram.powers))
    write_json(out / "carmichael_slope.json", meta, {**fit.to_dict(), "n_dropped": fit.n_dropped, "growth_exponent": growth})
    print(json.dumps({"exponent": fit.exponent, "growth_exponent": growth}))
    return 0


def cmd_kms_surface(args) -> int:
    params = _params(args, "q_max", "beta_min", "beta_max", "beta_steps")
    betas = bc.beta_grid(args.beta_min, args.beta_max, args.beta_steps)
    meta = _metadata("kms-surface", params, oracle="beta <= 1 rows are unverified-by-oracle (Dirichlet series diverges)")
    samples = bc.thermal_surface(args.q_max, betas)
    rows = [(s.q, s.beta, s.value) for s in samples]
    blocks = list(range(len(betas), len(rows), len(betas))) if args.layout == "gnuplot" else None
    path = write_csv(_out_dir(args) / "kms_surface.csv", meta, ["q", "beta", "psi"], rows, blocks)
    print(json.dumps({"rows": len(rows), "path": str(path)}))
    return 0


def cmd_kms_check(args) -> int:
    betas = [float(b) for b in args.betas.split(",")]
    params = {"q_max": args.q_max, "betas": args.betas, "n_terms": args.n_terms}
    oracle_rows = []
    for q in range(1, args.q_max + 1):
        for p in [p for p in range(q) if math.gcd(p, q) == 1] if q > 1 else [0]:
            frac = bc.ReducedFraction(p, q)
            for beta in betas:
                closed = bc.kms_expectation(frac, beta)
                o = bc.dirichlet_oracle(frac, beta, args.n_terms)
                oracle_rows.append({
                    "q": q, "p": p, "beta": beta,
                    "closed_form": closed,
                    "oracle": o.partial.real,
                    "oracle_imag": complex(o.partial).imag,
                    "abs_diff": abs(o.partial.real - closed),
                    "tail_bound": o.tail_bound,
                })
    asymptotes = []
    for q in range(1, args.q_max + 1):
        frac = bc.ReducedFraction.of(1, q)
        asymptotes.append({"q": q, "beta": 0.0, "closed_form": bc.kms_expectation(frac, 0.0), "oracle": 1.0,
                           "abs_diff": abs(bc.kms_expectation(frac, 0.0) - 1.0), "tail_bound": 0.0, "limit": "high-temperature"})
        cold = bc.kms_expectation(frac, 50.0)
        asymptotes.append({"q": q, "beta": 50.0, "closed_form": cold, "oracle": bc.lowtemp_limit(q),
                           "abs_diff": abs(cold - bc.lowtemp_limit(q)), "tail_bound": 0.0, "limit": "mu(q)/phi(q)"})
        if q >= 2:
            cs = bc.critical_slope(q)
            num = bc.critical_slope_numeric(q)
            asymptotes.append({"q": q, "beta": 1.0, "closed_form": cs.exact, "oracle": num, "stated": cs.stated,
                               "abs_diff": abs(num - cs.exact), "tail_bound": 0.0, "limit": "d psi / d eps at beta = 1"})
    max_diff = max(r["abs_diff"] for r in oracle_rows)
    write_json(_out_dir(args) / "kms_check.json", _metadata("kms-check", params),
               {"max_abs_diff": max_diff, "oracle": oracle_rows, "asymptotes": asymptotes})
    print(json.dumps({"max_abs_diff": max_diff, "checks": len(oracle_rows)}))
    return 0


def cmd_staircase(args) -> int:
    params = _params(args, "c", "omega_lo", "omega_hi", "n_points", "n_iter", "q_max")
    pts = pl.staircase(args.c, args.omega_lo, args.omega_hi, args.n_points, args.n_iter, args.q_max)
    rows = [
        (pt.Omega, pt.nu, pt.locked_to.p if pt.locked_to else None, pt.locked_to.q if pt.locked_to else None)
        for pt in pts
    ]
    write_csv(_out_dir(args) / "staircase.csv", _metadata("staircase", params), ["Omega", "nu", "locked_p", "locked_q"], rows)
    print(json.dumps({"points": len(rows), "locked": sum(1 for r in rows if r[3] is not None)}))
    return 0


def cmd_adler(args) -> int:
    params = _params(args, "K", "delta_omega", "phi0", "t_end", "dt", "stride")
    p = pl.AdlerParams(K=args.K, delta_omega=args.delta_omega, phi0=args.phi0)
    traj, mean = pl.adler_integrate(p, args.t_end, args.dt, args.stride)
    meta = _metadata("adler", params)
    out = _out_dir(args)
    t = traj.index * args.dt * args.stride
    write_csv(out / "adler.csv", meta, ["t", "phi"], zip(t, traj.samples))
    summary = {"mean_freq_numeric": mean, "mean_freq_analytic": pl.adler_mean_frequency(p)}
    write_json(out / "adler.json", meta, summary)
    print(json.dumps(summary))
    return 0


def cmd_mangoldt_map(args) -> int:
    params = _params(args, "omega", "c", "kappa", "n_iter")
    meta = _metadata("mangoldt-map", params, modulation="c_n = c (1 + kappa (Lambda(n) - 1))")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", pl.OverlapRegimeWarning)
        winding, beats = pl.mangoldt_modulated_map(args.omega, args.c, args.kappa, args.n_iter)
    for w in caught:
        print(f"cyclophase: warning: {w.message}", file=sys.stderr)
    pgram = sp.periodogram(beats)
    fit = sp.loglog_slope(pgram)
    out = _out_dir(args)
    write_csv(out / "mangoldt_map.csv", meta, ["n", "beat"], zip(beats.index, beats.samples))
    write_csv(out / "mangoldt_map_periodogram.csv", meta, ["freq", "power"], zip(pgram.frequencies, pgram.powers))
    summary = {"winding": winding.nu, "uncertainty": winding.uncertainty, "overlap_regime": winding.overlap_regime,
               "slope": fit.to_dict()}
    write_json(out / "mangoldt_map.json", meta, summary)
    print(json.dumps({"winding": winding.nu, "exponent": fit.exponent}))
    return 0


def cmd_verify(args) -> int:
    from .verify import run_suite

    report = run_suite(args.suite)
    text = json.dumps(report, indent=2, default=float)
    if args.out:
        write_json(Path(args.out) / f"verify_{args.suite}.json", _metadata("verify", {"suite": args.suite}), report)
    print(text)
    return 0 if report["passed"] else 1


def cmd_operators_verify(args) -> int:
    args.suite = "operators"
    return cmd_verify(args)


def _operator(args):
    kind = args.op
    if kind == "E":
        return hb.lowering_E(args.dim)
    if kind == "N":
        return hb.number_operator(args.dim, args.origin)
    if kind == "theta":
        return hb.phase_operator(args.q, args.theta0)
    if kind == "mu":
        return hb.shift_mu(args.q, args.a)
    if kind == "clock":
        return hb.clock_e(args.q, args.p)
    if kind == "galois":
        return hb.galois_twist(args.q, args.t, args.p)
    if kind == "phase-state":
        return hb.phase_state(args.q, args.p, args.theta0)
    if kind == "u":
        return hb.order_eigenstate(args.q, args.a, args.k)
    raise DomainError(f"unknown operator {kind}")


def cmd_dump_operator(args) -> int:
    params = _params(args, "op", "q", "p", "a", "k", "t", "dim", "origin", "theta0")
    obj = _operator(args)
    meta = _metadata("dump-operator", params, basis_origin=obj.basis_origin)
    out = _out_dir(args) / f"operator_{args.op}.csv"
    if isinstance(obj, hb.StateVector):
        rows = [(n, z.real, z.imag) for n, z in zip(obj.labels(), obj.amplitudes)]
        write_csv(out, meta, ["index", "re", "im"], rows)
    else:
        m = obj.entries
        rows = [(i + obj.basis_origin, j + obj.basis_origin, m[i, j].real, m[i, j].imag)
                for i in range(obj.dim) for j in range(obj.dim) if m[i, j] != 0]
        write_csv(out, meta, ["row", "col", "re", "im"], rows)
    print(json.dumps({"path": str(out), "entries": len(rows)}))
    return 0


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclophase", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cyclophase {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, allow_abbrev=False)
        p.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or ./out)")
        p.set_defaults(func=func)
        return p

    p = add("numfun", cmd_numfun, "evaluate one arithmetic function")
    p.add_argument("--fn", required=True, choices=sorted(NUMFUN))
    p.add_argument("--n", type=int, required=True, help="argument (modulus for order/primitive-root)")
    p.add_argument("--a", type=int, help="base for order/primitive-root")
    p.add_argument("--q", type=int, help="modulus q for the Ramanujan sum c_q(n)")

    p = add("carmichael-spectrum", cmd_carmichael_spectrum, "normalized Carmichael series, periodogram and slope")
    p.add_argument("--t-max", type=int, default=2**14)
    p.add_argument("--sigma", type=float, default=1.90)
    p.add_argument("--f-lo", type=float)
    p.add_argument("--f-hi", type=float)

    p = add("kms-surface", cmd_kms_surface, "KMS expectation psi_beta(1/q) over a (q, beta) grid")
    p.add_argument("--q-max", type=int, default=40)
    p.add_argument("--beta-min", type=float, default=0.5)
    p.add_argument("--beta-max", type=float, default=1.5)
    p.add_argument("--beta-steps", type=int, default=41)
    p.add_argument("--layout", choices=["csv", "gnuplot"], default="csv")

    p = add("kms-check", cmd_kms_check, "closed form vs Dirichlet-series oracle and asymptotes")
    p.add_argument("--q-max", type=int, default=12)
    p.add_argument("--betas", default="1.5,2,3")
    p.add_argument("--n-terms", type=int, default=10**6)

    p = add("staircase", cmd_staircase, "devil's staircase of the Arnold map")
    p.add_argument("--c", type=float, default=0.8)
    p.add_argument("--omega-lo", type=float, default=0.0)
    p.add_argument("--omega-hi", type=float, default=1.0)
    p.add_argument("--n-points", type=int, default=1001)
    p.add_argument("--n-iter", type=int, default=10_000)
    p.add_argument("--q-max", type=int, default=8)

    p = add("adler", cmd_adler, "integrate the Adler equation")
    p.add_argument("--K", type=float, default=1.0)
    p.add_argument("--delta-omega", type=float, default=2.0)
    p.add_argument("--phi0", type=float, default=0.0)
    p.add_argument("--t-end", type=float, default=500.0)
    p.add_argument("--dt", type=float, default=0.005)
    p.add_argument("--stride", type=int, default=100)

    p = add("mangoldt-map", cmd_mangoldt_map, "circle map with Mangoldt-modulated coupling")
    p.add_argument("--omega", type=float, default=0.5)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--kappa", type=float, default=0.5)
    p.add_argument("--n-iter", type=int, default=2**14)

    p = add("verify", cmd_verify, "run invariant suites")
    p.add_argument("--suite", choices=["numtheory", "spectral", "operators", "kms", "dynamics", "all"], default="all")

    add("operators-verify", cmd_operators_verify, "run the operator-algebra suite")

    p = add("dump-operator", cmd_dump_operator, "write an operator or state as CSV")
    p.add_argument("--op", required=True, choices=["E", "N", "theta", "mu", "clock", "galois", "phase-state", "u"])
    p.add_argument("--q", type=int, default=7)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--a", type=int, default=3)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--dim", type=int, default=8)
    p.add_argument("--origin", type=int, choices=[0, 1], default=0)
    p.add_argument("--theta0", type=float, default=0.0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"cyclophase: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"cyclophase: internal failure: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
