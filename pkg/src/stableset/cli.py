"""Command-line entry point: ``stableset {solve,gen,bench,check}``.

Exit codes: 0 optimal (or check agreement), 2 limit reached, 1 error.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .baseline import SearchLimits
from .bench import (ALGORITHMS, RunConfig, SweepDisagreement, density_sweep, emit_report,
                    exit_code, load_instance, parse_densities, run_instance_full,
                    solve_instance)
from .graph import DimacsError, erdos_renyi, write_dimacs
from .oracle import MAX_ORACLE_N, brute_force_mwss

_ORDERINGS = {"input": "input", "maxdeg": "max_degree", "degeneracy": "degeneracy"}


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1; status 2 is reserved for "limit reached"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_format(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json")
    g.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    g.add_argument("--text", dest="fmt", action="store_const", const="text")
    p.set_defaults(fmt="text")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")


def _add_solver(p: argparse.ArgumentParser):
    p.add_argument("--ordering", choices=sorted(_ORDERINGS), default="maxdeg")
    p.add_argument("--time-limit", type=float, metavar="S")
    p.add_argument("--node-limit", type=int)
    p.add_argument("--root-iters", type=int, default=500, help="subgradient iterations at the root")
    p.add_argument("--node-iters", type=int, default=50, help="subgradient iterations per node")


def _add_instance(p: argparse.ArgumentParser, with_file=True):
    if with_file:
        p.add_argument("file", nargs="?", help="DIMACS edge file")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stableset", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance")
    _add_instance(p)
    p.add_argument("--alg", choices=ALGORITHMS, default="reps")
    p.add_argument("--threads", type=int, default=1)
    _add_solver(p)
    _add_format(p)

    p = sub.add_parser("gen", help="write an Erdos-Renyi instance in DIMACS format")
    _add_instance(p, with_file=False)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("bench", help="density sweep comparing the solvers")
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--densities", default="0.3:0.9:0.1", help="a:b:step or comma list")
    p.add_argument("--seeds", type=int, default=3, help="instances per density")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--alg", default=",".join(ALGORITHMS), help="comma list of algorithms")
    p.add_argument("--threads", default="1", help="comma list of worker counts for reps")
    _add_solver(p)
    _add_format(p)

    p = sub.add_parser("check", help=f"cross-check both solvers against brute force (n <= {MAX_ORACLE_N})")
    _add_instance(p)
    p.add_argument("--threads", type=int, default=1)
    return parser


def _limits(args) -> SearchLimits:
    return SearchLimits(time_limit=args.time_limit, node_limit=args.node_limit)


def _config(args, algorithm: str, workers: int, fmt: str = "text") -> RunConfig:
    gen = args.file is None
    return RunConfig(
        input_path=args.file,
        n=args.n if gen else None,
        p=args.p if gen else None,
        seed=args.seed if gen else None,
        algorithm=algorithm,
        workers=workers,
        ordering_strategy=_ORDERINGS[getattr(args, "ordering", "maxdeg")],
        limits=_limits(args) if hasattr(args, "time_limit") else SearchLimits(),
        root_iters=getattr(args, "root_iters", 500),
        node_iters=getattr(args, "node_iters", 50),
        output_format=fmt,
    )


def _write(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_solve(args) -> int:
    cfg = _config(args, args.alg, args.threads, args.fmt)
    report, res = run_instance_full(cfg)
    text = emit_report(report, args.fmt)
    if args.fmt == "text":
        text += "stable set: " + " ".join(str(v + 1) for v in res.best_set) + "\n"
    _write(text, args.out)
    return exit_code(report)


def _cmd_gen(args) -> int:
    if args.n is None or args.p is None:
        raise ValueError("gen needs --n and --p")
    g = erdos_renyi(args.n, args.p, args.seed)
    _write(write_dimacs(g, [f"seed={args.seed} p={args.p}"]), args.out)
    return 0


def _cmd_bench(args) -> int:
    algorithms = [a.strip() for a in args.alg.split(",") if a.strip()]
    for a in algorithms:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}")
    workers = [int(t) for t in args.threads.split(",")]
    cfg = RunConfig(n=args.n, p=0.0, seed=args.seed,
                    ordering_strategy=_ORDERINGS[args.ordering], limits=_limits(args),
                    root_iters=args.root_iters, node_iters=args.node_iters)
    report = density_sweep(cfg, parse_densities(args.densities), args.seeds, algorithms, workers)
    _write(emit_report(report, args.fmt), args.out)
    return 0 if all(r.status == "optimal" for r in report.rows) else 2


def _cmd_check(args) -> int:
    g, name, _ = load_instance(_config(args, "reps", args.threads))
    oracle = brute_force_mwss(g)
    values = {"oracle": oracle.value}
    for alg in ALGORITHMS:
        cfg = RunConfig(n=1, p=0.0, algorithm=alg, workers=args.threads)
        values[alg] = solve_instance(g, cfg).best_value
    ok = len(set(values.values())) == 1
    for k, v in values.items():
        print(f"{name}  {k:<8}  {v:g}")
    print("agree" if ok else "MISMATCH")
    return 0 if ok else 1


_COMMANDS = {"solve": _cmd_solve, "gen": _cmd_gen, "bench": _cmd_bench, "check": _cmd_check}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ValueError, DimacsError, SweepDisagreement) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
