"""Command-line front end.

One subcommand per task: inspect a state matrix, test a pattern, build an
input matrix, select states or pattern entries, generate test systems,
benchmark, or run the exhaustive baselines. All indices on the command
line and in output are 1-based; exit status is 0 on success, 1 when the
requested object does not exist (infeasible pattern, blocked states,
unstable matrix for the energy baseline, exhausted budget), and 2 for bad
invocations or unreadable files.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from .bench import BenchConfig, run_benchmark, summarize, write_csv
from .errors import CtrlSparseError
from .feasibility import pattern_feasible
from .generators import gen_jordan, gen_scale_free, stabilize
from .io import (
    certificate_to_dict,
    construction_trace_to_dict,
    greedy_trace_to_dict,
    load_matrix,
    load_pattern,
    pattern_to_dict,
    pattern_trace_to_dict,
    save_matrix,
    save_pattern,
    structure_to_dict,
    witness_to_dict,
)
from .macp import greedy_macp, gramian_greedy_macp, mode_rank_sum
from .matroid import matched_multiplicity
from .mscp import simple_greedy_mscp, two_stage_mscp
from .oracle import brute_macp, brute_mscp
from .pattern import SparsityPattern
from .realization import construct_input_matrix, min_input_pattern, pattern_from_rows
from .spectral import ToleranceConfig, compute_eigenstructure


def _tol_from_args(args: argparse.Namespace) -> ToleranceConfig | None:
    kwargs = {}
    if getattr(args, "tol", None) is not None:
        kwargs["rank_rel_tol"] = args.tol
    if getattr(args, "det_tol", None) is not None:
        kwargs["det_rel_tol"] = args.det_tol
    if getattr(args, "cluster_tol", None) is not None:
        kwargs["cluster_tol"] = args.cluster_tol
    return ToleranceConfig(**kwargs) if kwargs else None


def _allowed_from_forbidden(spec: str | None, n: int) -> list[int] | None:
    if spec is None:
        return None
    forbidden = set()
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        idx = int(part)
        if not 1 <= idx <= n:
            raise ValueError(
                f"forbidden state {idx} out of range 1..{n} (1-based)"
            )
        forbidden.add(idx - 1)
    return [i for i in range(n) if i not in forbidden]


def _print_matrix(a: np.ndarray) -> None:
    for row in np.atleast_2d(a):
        print(" ".join(f"{v:.12g}" for v in row))


def _pattern_lines(pattern: SparsityPattern) -> list[str]:
    lines = [f"{pattern.n_states} {pattern.n_inputs}"]
    lines += [f"{r + 1} {c + 1}" for r, c in sorted(pattern.support)]
    return lines


def cmd_analyze(args: argparse.Namespace) -> int:
    tol = _tol_from_args(args)
    a = load_matrix(args.matrix)
    es = compute_eigenstructure(a, tol)
    if args.format == "json":
        print(json.dumps(structure_to_dict(es), indent=2))
        return 0
    print(f"states: {es.n}")
    print(f"distinct eigenvalues: {len(es.modes)}")
    reps = set(es.representatives)
    for i, mode in enumerate(es.modes):
        lam = mode.eigenvalue
        value = f"{lam.real:.6g}" if mode.is_real else f"{lam.real:.6g}{lam.imag:+.6g}j"
        tag = " (representative)" if i in reps else ""
        print(
            f"  mode {i + 1}: eigenvalue {value}, multiplicity "
            f"{mode.multiplicity}, algebraic {mode.algebraic_multiplicity}, "
            f"residual {mode.residual:.2e}{tag}"
        )
    print(f"largest multiplicity: {es.k_max}")
    print(f"rank demand over representatives: {es.rank_demand}")
    print(f"minimum input count for any feasible pattern: {es.k_max}")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    tol = _tol_from_args(args)
    a = load_matrix(args.matrix)
    pattern = load_pattern(args.pattern)
    es = compute_eigenstructure(a, tol)
    report = pattern_feasible(es, pattern, tol)
    payload: dict = {"feasible": bool(report)}
    if report:
        payload["witnesses"] = [witness_to_dict(w) for w in report.witnesses]
        if args.format == "json":
            print(json.dumps(payload, indent=2))
        else:
            print("feasible")
            if args.explain:
                for w in report.witnesses:
                    pairs = ", ".join(
                        f"state {s + 1} -> column {c + 1}"
                        for s, c in sorted(w.assignment.items())
                    )
                    print(f"  mode {w.mode_index + 1}: {pairs}")
        return 0
    payload["failed_mode"] = report.failed_mode + 1
    if args.explain:
        payload["matched_multiplicities"] = {
            str(i + 1): matched_multiplicity(es, i, pattern, tol)
            for i in es.representatives
        }
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        mode = es.modes[report.failed_mode]
        print(
            f"infeasible: mode {report.failed_mode + 1} needs "
            f"{mode.multiplicity} independently matched states"
        )
        if args.explain:
            for i in es.representatives:
                got = matched_multiplicity(es, i, pattern, tol)
                need = es.modes[i].multiplicity
                print(f"  mode {i + 1}: matched {got} of {need}")
    return 1


def cmd_construct(args: argparse.Namespace) -> int:
    tol = _tol_from_args(args)
    a = load_matrix(args.matrix)
    pattern = load_pattern(args.pattern)
    b, trace = construct_input_matrix(a, pattern, tol)
    if args.format == "json":
        payload = {"b": b.tolist()}
        if args.trace:
            payload["trace"] = construction_trace_to_dict(trace)
        print(json.dumps(payload, indent=2))
    else:
        _print_matrix(b)
        if args.trace:
            for step in trace.steps:
                print(
                    f"# mode {step.mode_index + 1}: value "
                    f"{step.chosen_value:g} satisfied "
                    f"{step.satisfied_modes} modes",
                    file=sys.stderr,
                )
    if args.output:
        save_matrix(args.output, b)
    return 0


def cmd_micp(args: argparse.Namespace) -> int:
    tol = _tol_from_args(args)
    a = load_matrix(args.matrix)
    allowed = _allowed_from_forbidden(args.forbidden, a.shape[0])
    pattern = min_input_pattern(a, allowed, tol)
    if args.format == "json":
        payload = {"pattern": pattern_to_dict(pattern)}
        if args.realize:
            b, _ = construct_input_matrix(a, pattern, tol)
            payload["b"] = b.tolist()
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(_pattern_lines(pattern)))
        if args.realize:
            b, _ = construct_input_matrix(a, pattern, tol)
            print("# realization:")
            _print_matrix(b)
    if args.output:
        save_pattern(args.output, pattern)
    return 0


def cmd_macp(args: argparse.Namespace) -> int:
    tol = _tol_from_args(args)
    a = load_matrix(args.matrix)
    allowed = _allowed_from_forbidden(args.forbidden, a.shape[0])
    trace = None
    if args.algo == "greedy":
        states, trace = greedy_macp(a, allowed, tol)
    elif args.algo == "gramian":
        if allowed is not None:
            raise ValueError("--forbidden is not supported with --algo gramian")
        states, trace = gramian_greedy_macp(a, tol)
    else:
        states = brute_macp(a, allowed, tol, max_states=args.max_states)
    value = mode_rank_sum(a, states, tol)
    if args.format == "json":
        payload = {
            "states": [s + 1 for s in states],
            "size": len(states),
            "value": value,
        }
        if args.trace and trace is not None:
            payload["trace"] = greedy_trace_to_dict(trace)
        print(json.dumps(payload, indent=2))
    else:
        print("states: " + " ".join(str(s + 1) for s in states))
        print(f"size: {len(states)}")
        print(f"rank sum: {value}")
        if args.trace and trace is not None:
            for s, g in zip(trace.chosen, trace.gains):
                print(f"  picked state {s + 1} (gain {g})")
    return 0


def cmd_mscp(args: argparse.Namespace) -> int:
    tol = _tol_from_args(args)
    a = load_matrix(args.matrix)
    es = compute_eigenstructure(a, tol)
    l = args.inputs if args.inputs is not None else es.k_max
    cert = None
    trace = None
    if args.algo == "two-stage":
        pattern, cert = two_stage_mscp(es, l, tol)
    elif args.algo == "simple":
        pattern, trace = simple_greedy_mscp(es, l, tol)
    else:
        pattern = brute_mscp(
            es, l, tol, max_states=args.max_states, max_checks=args.max_checks
        )
    if args.format == "json":
        payload = {
            "pattern": pattern_to_dict(pattern),
            "sparsity": pattern.sparsity,
        }
        if args.certify and cert is not None:
            payload["certificate"] = certificate_to_dict(cert)
        if args.trace and trace is not None:
            payload["trace"] = pattern_trace_to_dict(trace)
        if args.realize:
            b, _ = construct_input_matrix(a, pattern, tol)
            payload["b"] = b.tolist()
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(_pattern_lines(pattern)))
        print(f"# sparsity: {pattern.sparsity}")
        if args.certify and cert is not None:
            print(f"# branch: {cert.branch}")
            print(f"# stage-1 size: {cert.stage1_size}")
            print(f"# approximation factor: {cert.approx_factor:.4f}")
        if args.trace and trace is not None:
            for (r, c), g in zip(trace.chosen, trace.gains):
                print(f"# picked entry ({r + 1}, {c + 1}) gain {g}")
        if args.realize:
            b, _ = construct_input_matrix(a, pattern, tol)
            print("# realization:")
            _print_matrix(b)
    if args.output:
        save_pattern(args.output, pattern)
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "jordan":
        a = gen_jordan(
            args.n, k_max=args.k_max, density=args.density, seed=args.seed
        )
    else:
        a = gen_scale_free(args.n, seed=args.seed, avg_degree_coeff=args.coeff)
    if args.stabilize:
        a = stabilize(a)
    if args.output:
        save_matrix(args.output, a)
    else:
        _print_matrix(a)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    config = BenchConfig(
        generator=args.generator,
        sizes=tuple(int(s) for s in args.sizes.split(",")),
        trials=args.trials,
        algorithms=tuple(args.algorithms.split(",")),
        seed=args.seed,
        n_inputs=args.inputs,
        k_max=args.k_max,
        density=args.density,
        avg_degree_coeff=args.coeff,
        tol=_tol_from_args(args),
    )
    records = run_benchmark(config)
    write_csv(records, args.output)
    stats = summarize(records)
    print(f"wrote {len(records)} rows to {args.output}")
    for (alg, n), row in stats.items():
        print(
            f"  {alg} n={n}: mean result {row['mean_result']:.2f}, "
            f"mean seconds {row['mean_seconds']:.4f} "
            f"({int(row['count'])} ok)"
        )
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    tol = _tol_from_args(args)
    a = load_matrix(args.matrix)
    if args.problem == "macp":
        states = brute_macp(a, tol=tol, max_states=args.max_states)
        if args.format == "json":
            print(
                json.dumps(
                    {"states": [s + 1 for s in states], "size": len(states)},
                    indent=2,
                )
            )
        else:
            print("states: " + " ".join(str(s + 1) for s in states))
            print(f"size: {len(states)}")
        return 0
    es = compute_eigenstructure(a, tol)
    l = args.inputs if args.inputs is not None else es.k_max
    pattern = brute_mscp(
        es, l, tol, max_states=args.max_states, max_checks=args.max_checks
    )
    if args.format == "json":
        print(
            json.dumps(
                {
                    "pattern": pattern_to_dict(pattern),
                    "sparsity": pattern.sparsity,
                },
                indent=2,
            )
        )
    else:
        print("\n".join(_pattern_lines(pattern)))
        print(f"# sparsity: {pattern.sparsity}")
    return 0


def _add_tol_options(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--tol",
        type=float,
        default=None,
        help="relative tolerance for numeric rank decisions",
    )
    p.add_argument(
        "--det-tol",
        type=float,
        default=None,
        help="relative tolerance for determinant nonzero tests",
    )
    p.add_argument(
        "--cluster-tol",
        type=float,
        default=None,
        help="relative tolerance for merging nearby eigenvalues",
    )


def _add_format_option(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--format",
        choices=("text", "json"),
        default="text",
        help="output format",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctrlsparse",
        description=(
            "Characterize which input sparsity patterns keep a linear "
            "system controllable, build matching input matrices, and "
            "select sparse actuator placements."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "analyze", help="spectrum, multiplicities, and pattern requirements"
    )
    p.add_argument("matrix", help="state matrix file (.mtx/.mm/.csv/.txt)")
    _add_tol_options(p)
    _add_format_option(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("check", help="test a sparsity pattern for feasibility")
    p.add_argument("matrix")
    p.add_argument("pattern", help="pattern file (.json or 'n l' text)")
    p.add_argument(
        "--explain",
        action="store_true",
        help="show per-mode matchings or deficits",
    )
    _add_tol_options(p)
    _add_format_option(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser(
        "construct", help="build an input matrix for a feasible pattern"
    )
    p.add_argument("matrix")
    p.add_argument("pattern")
    p.add_argument("-o", "--output", default=None, help="write B to this file")
    p.add_argument(
        "--trace", action="store_true", help="show the per-mode value choices"
    )
    _add_tol_options(p)
    _add_format_option(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser(
        "micp", help="fewest-column pattern using any allowed states"
    )
    p.add_argument("matrix")
    p.add_argument(
        "--forbidden",
        default=None,
        help="comma-separated 1-based states that cannot be actuated",
    )
    p.add_argument(
        "--realize", action="store_true", help="also build an input matrix"
    )
    p.add_argument("-o", "--output", default=None, help="write the pattern")
    _add_tol_options(p)
    _add_format_option(p)
    p.set_defaults(func=cmd_micp)

    p = sub.add_parser("macp", help="select few actuated states")
    p.add_argument("matrix")
    p.add_argument(
        "--algo",
        choices=("greedy", "gramian", "brute"),
        default="greedy",
        help="selection method (gramian needs a Hurwitz matrix)",
    )
    p.add_argument("--forbidden", default=None)
    p.add_argument(
        "--max-states",
        type=int,
        default=20,
        help="budget guard for --algo brute",
    )
    p.add_argument("--trace", action="store_true")
    _add_tol_options(p)
    _add_format_option(p)
    p.set_defaults(func=cmd_macp)

    p = sub.add_parser(
        "mscp", help="sparsest pattern at a fixed input count"
    )
    p.add_argument("matrix")
    p.add_argument(
        "--inputs",
        type=int,
        default=None,
        help="number of input columns (default: the largest multiplicity)",
    )
    p.add_argument(
        "--algo",
        choices=("two-stage", "simple", "brute"),
        default="two-stage",
    )
    p.add_argument(
        "--certify",
        action="store_true",
        help="print the approximation certificate (two-stage only)",
    )
    p.add_argument("--trace", action="store_true")
    p.add_argument("--realize", action="store_true")
    p.add_argument("--max-states", type=int, default=20)
    p.add_argument("--max-checks", type=int, default=2_000_000)
    p.add_argument("-o", "--output", default=None)
    _add_tol_options(p)
    _add_format_option(p)
    p.set_defaults(func=cmd_mscp)

    p = sub.add_parser("gen", help="generate a random test system")
    p.add_argument("kind", choices=("jordan", "scale-free"))
    p.add_argument("n", type=int)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--coeff", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--stabilize",
        action="store_true",
        help="shift the spectrum into the left half plane",
    )
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run a timed comparison grid")
    p.add_argument("-o", "--output", required=True, help="CSV output path")
    p.add_argument(
        "--generator", choices=("jordan", "scale_free"), default="jordan"
    )
    p.add_argument("--sizes", default="20,40,60,80,100")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument(
        "--algorithms",
        default="greedy_macp,gramian_macp",
        help=(
            "comma list from greedy_macp, gramian_macp, simple_mscp, "
            "two_stage_mscp"
        ),
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inputs", type=int, default=3)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--coeff", type=float, default=0.3)
    _add_tol_options(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="exhaustive baselines on small systems")
    p.add_argument("problem", choices=("macp", "mscp"))
    p.add_argument("matrix")
    p.add_argument("--inputs", type=int, default=None)
    p.add_argument("--max-states", type=int, default=20)
    p.add_argument("--max-checks", type=int, default=2_000_000)
    _add_tol_options(p)
    _add_format_option(p)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CtrlSparseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
