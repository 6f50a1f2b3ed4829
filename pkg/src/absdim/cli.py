"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 validation/parse error, 3 solver
failure. Printed reals use 6 significant digits; CSV output keeps full
precision.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import serialization as ser
from .discrimination import optimal_discrimination
from .errors import DomainError, ParseError, SolverError, ValidationError
from .linalg import as_rng, computational_basis, haar_random_unitaries, isotropic_ensemble
from .oracle import pure_ensemble_absolute_dimension
from .simulate import (
    build_finite_orthonormal_simulation,
    build_m_state_simulation,
    isotropic_orthonormal_ensemble,
    monte_carlo_haar_check,
    reconstruct,
    vcrit_general,
    vcrit_m_states,
    vcrit_subspace,
)
from .subspace_sdp import (
    SubspaceFamily,
    max_visibility,
    superposition_ensemble,
    visibility_table,
    visibility_table_csv,
)
from .witness import accessible_info, certify, vcrit_witness

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_SOLVER = 3


def _fmt(x: float) -> str:
    return f"{x:.6g}"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="absdim", description="Absolute-dimension certification toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an ensemble file")
    p.add_argument("--kind", choices=["orthonormal", "superposition", "haar"], required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, default=None, help="number of states (default d)")
    p.add_argument("--v", type=float, default=1.0, help="visibility of the isotropic mixing")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default="-", help="output file ('-' for stdout)")

    p = sub.add_parser("witness", help="evaluate a witness against an ensemble")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--spec", required=True)

    p = sub.add_parser("discriminate", help="minimum-error discrimination SDP")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--povm-out", default=None, help="write the optimal POVM here")

    p = sub.add_parser("vcrit", help="closed-form critical visibilities")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--s", type=int, default=None)

    p = sub.add_parser("simulate", help="construct rank-r simulations")
    sim_sub = p.add_subparsers(dest="sim_mode", required=True)
    pa = sim_sub.add_parser("analytic", help="finite closed-form construction")
    pa.add_argument("--d", type=int, required=True)
    pa.add_argument("--r", type=int, required=True)
    pa.add_argument("--m", type=int, default=None, help="use the m < d construction")
    pa.add_argument("-o", "--output", default="-")
    ps = sim_sub.add_parser("sdp", help="visibility-maximization SDP")
    ps.add_argument("--ensemble", required=True)
    ps.add_argument("--r", type=int, required=True)
    ps.add_argument("--bases", default=None, help="basis family file (default: identity+Fourier)")
    ps.add_argument("-o", "--output", default="-")

    p = sub.add_parser("reproduce", help="rerun the benchmark computations")
    rep_sub = p.add_subparsers(dest="target", required=True)
    pt = rep_sub.add_parser("visibility-table", help="d=8 numeric vs analytic visibilities")
    pt.add_argument("--d", type=int, default=8)
    pt.add_argument("-o", "--output", default="-")

    p = sub.add_parser("check", help="statistical verification runs")
    chk_sub = p.add_subparsers(dest="check_mode", required=True)
    ph = chk_sub.add_parser("haar", help="Monte-Carlo check of the Haar-average model")
    ph.add_argument("--d", type=int, required=True)
    ph.add_argument("--r", type=int, required=True)
    ph.add_argument("--n", type=int, default=100_000)
    ph.add_argument("--seed", type=int, default=0)

    return parser


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _cmd_gen(args) -> int:
    d = args.d
    m = args.m if args.m is not None else d
    if args.kind == "orthonormal":
        if m > d:
            raise DomainError(f"orthonormal ensemble needs m <= d, got m={m}")
        vecs = computational_basis(d)[:m]
    elif args.kind == "superposition":
        vecs = None
    else:  # haar
        rng = as_rng(args.seed)
        vecs = [haar_random_unitaries(d, 1, rng)[0][:, 0] for _ in range(m)]
    if vecs is None:
        ensemble = superposition_ensemble(d, args.v)
    else:
        ensemble = isotropic_ensemble(vecs, args.v)
    meta = {
        "generator": args.kind,
        "visibility": repr(float(args.v)),
        "seed": str(args.seed),
    }
    _write(args.output, ser.dump_ensemble(ensemble, meta))
    return EXIT_OK


def _cmd_witness(args) -> int:
    ensemble, _ = ser.load_ensemble(_read(args.ensemble))
    spec = ser.load_witness_spec(_read(args.spec))
    cert = certify(spec, ensemble)
    print(f"witness_value {_fmt(cert.witness_value)}")
    for r, beta in enumerate(cert.bounds, start=1):
        print(f"beta_{r} {_fmt(beta)}")
    print(f"certified_lower_bound {cert.certified_lower_bound}")
    return EXIT_OK


def _cmd_discriminate(args) -> int:
    ensemble, _ = ser.load_ensemble(_read(args.ensemble))
    result = optimal_discrimination(ensemble)
    info = accessible_info(result.w_disc, ensemble.size)
    print(f"w_disc {_fmt(result.w_disc)}")
    print(f"accessible_info_bits {_fmt(info)}")
    print(f"certified_lower_bound {result.certified_lower_bound}")
    if args.povm_out is not None:
        _write(args.povm_out, ser.dump_povm(result.povm))
    return EXIT_OK


def _cmd_vcrit(args) -> int:
    d, r = args.d, args.r
    print(f"witness_threshold {_fmt(vcrit_witness(d, r))}")
    print(f"simulation_general {_fmt(vcrit_general(d, r))}")
    if args.m is not None:
        print(f"simulation_m_states {_fmt(vcrit_m_states(d, args.m, r))}")
    if args.s is not None:
        print(f"simulation_subspace {_fmt(vcrit_subspace(d, args.s, r))}")
    return EXIT_OK


def _cmd_simulate_analytic(args) -> int:
    d, r = args.d, args.r
    if args.m is not None and args.m < d:
        sim = build_m_state_simulation(d, args.m, r)
        v = vcrit_m_states(d, args.m, r)
        target = isotropic_ensemble(computational_basis(d)[: args.m], v)
    else:
        sim = build_finite_orthonormal_simulation(d, r)
        v = vcrit_general(d, r)
        target = isotropic_orthonormal_ensemble(d, v)
    recon = reconstruct(sim)
    residual = max(
        float(np.linalg.norm(a.matrix - b.matrix))
        for a, b in zip(recon.states, target.states)
    )
    print(f"visibility {_fmt(v)}")
    print(f"components {len(sim.components)}")
    print(f"reconstruction_residual {residual:.3e}")
    _write(args.output, ser.dump_simulation(sim))
    return EXIT_OK


def _cmd_simulate_sdp(args) -> int:
    ensemble, _ = ser.load_ensemble(_read(args.ensemble))
    if args.bases is not None:
        unitaries = ser.load_bases(_read(args.bases))
        family = SubspaceFamily(ensemble.dim, args.r, unitaries)
    else:
        family = SubspaceFamily.default(ensemble.dim, args.r)
    result = max_visibility(ensemble, family)
    print(f"v_star {_fmt(result.v_star)}")
    print(f"components {len(result.simulation.components)}")
    print(f"solver_status {result.report.status}")
    _write(args.output, ser.dump_simulation(result.simulation))
    return EXIT_OK


def _cmd_reproduce_table(args) -> int:
    rows = visibility_table(d=args.d)
    csv_text = visibility_table_csv(rows)
    _write(args.output, csv_text)
    if args.output != "-":
        for row in rows:
            print(
                f"r={row.r} numerical={_fmt(row.v_numerical)} "
                f"analytical={_fmt(row.v_analytical)} difference={_fmt(row.difference)}"
            )
    return EXIT_OK


def _cmd_check_haar(args) -> int:
    vecs = computational_basis(args.d)[:1]
    report = monte_carlo_haar_check(vecs, args.r, args.n, seed=args.seed)
    print(f"samples {report.n_samples}")
    print(f"rejected {report.n_rejected} (threshold {report.reject_threshold:g})")
    for i, (dist, se) in enumerate(zip(report.distances, report.standard_errors)):
        verdict = "ok" if dist <= 3 * se else "DEVIATES"
        print(f"state {i + 1}: distance {dist:.3e} se {se:.3e} {verdict}")
    return EXIT_OK


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "witness":
            return _cmd_witness(args)
        if args.command == "discriminate":
            return _cmd_discriminate(args)
        if args.command == "vcrit":
            return _cmd_vcrit(args)
        if args.command == "simulate":
            if args.sim_mode == "analytic":
                return _cmd_simulate_analytic(args)
            return _cmd_simulate_sdp(args)
        if args.command == "reproduce":
            return _cmd_reproduce_table(args)
        if args.command == "check":
            return _cmd_check_haar(args)
    except (ValidationError, DomainError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_USAGE


def main():  # console entry point
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
