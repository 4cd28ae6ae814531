"""Command-line entry point: ``conic-qaoa {landscape,optimize,jump-demo,benchmark}``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import conic, harness, qaoa
from .problem import Graph, load_graph, maxcut_hamiltonian


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail("UsageError", message, code=2)


def _fail(kind: str, message: str, code: int = 1):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    sys.exit(code)


def _graph(args) -> tuple[Graph, str]:
    if args.graph:
        return load_graph(args.graph), f"graph file {Path(args.graph).name}"
    gen = harness.parse_generator(args.generator)
    cfg = harness.RunConfig(generator=gen)
    return harness.load_instance(cfg), f"generator {args.generator}"


def _add_instance(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph", help="graph file ('n m' header, then 'u v [w]' lines)")
    g.add_argument("--generator", help="ring:N | complete:N | regular:N:D:SEED | erdos_renyi:N:P:SEED")


def _dump(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_landscape(args) -> None:
    graph, source = _graph(args)
    h = maxcut_hamiltonian(graph)
    table = qaoa.landscape(h, args.p, args.grid)
    comments = [
        f"instance: {source}",
        f"n_vertices={graph.n_vertices} edges={[list(e) for e in graph.edges]}",
        f"p={args.p} grid={args.grid} domain=[0,pi]^2 (shared gamma, beta across layers)",
    ]
    qaoa.write_landscape(table, args.out, comments)


def _run_config(args, graph_arg: dict) -> harness.RunConfig:
    return harness.RunConfig(
        **graph_arg,
        p=args.p,
        seed=args.seed,
        jump_budget=args.jumps,
        optimizer=qaoa.OptimizerConfig(step_size=args.step_size, max_iter=args.max_iter),
        pool=conic.PoolSpec(size=args.pool_size),
        shots=args.shots,
    )


def cmd_optimize(args) -> None:
    graph_arg = {"graph": args.graph} if args.graph else {"generator": harness.parse_generator(args.generator)}
    report = harness.run_jump_enhanced(_run_config(args, graph_arg))
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _matrix(m: np.ndarray) -> dict:
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def cmd_jump_demo(args) -> None:
    graph, source = _graph(args)
    h = maxcut_hamiltonian(graph)
    rng = np.random.default_rng([args.seed, 0])
    params = qaoa.QaoaParams(tuple(rng.uniform(0, math.pi, args.p)), tuple(rng.uniform(0, math.pi, args.p)))
    phi = qaoa.qaoa_state(h, params)
    pool = conic.build_pool(conic.PoolSpec(size=args.pool_size), h, np.random.default_rng([args.seed, 1]))
    moments = conic.moment_matrices(phi, pool, h)
    sol = conic.solve_gep(moments)
    jump = conic.apply_jump(phi, pool, sol.alpha, h)
    reports = [conic.lcu_verify(phi, pool, sol.alpha, enc, strict=False).to_dict() for enc in ("root", "naive")]
    _dump(
        {
            "instance": source,
            "phi_params": {"gammas": list(params.gammas), "betas": list(params.betas)},
            "energy_before": float(np.dot(phi.probabilities(), h.energies)),
            "moments": {"E": _matrix(moments.E), "H": _matrix(moments.H)},
            "gep": sol.to_dict(),
            "energy_after": jump.energy,
            "lcu": reports,
        },
        args.out,
    )
    if not all(r["passed"] for r in reports):
        _fail("VerificationError", "LCU simulation disagrees with the direct jump")


def cmd_benchmark(args) -> None:
    data = json.loads(Path(args.config).read_text(encoding="utf-8"))
    cells = harness.load_benchmark_config(data)
    rows = harness.run_benchmark(cells, workers=args.workers)
    harness.write_benchmark(rows, args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="conic-qaoa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("landscape", help="export a (gamma, beta) energy landscape table")
    _add_instance(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_landscape)

    p = sub.add_parser("optimize", help="gradient-descent QAOA, optionally with conic jumps")
    _add_instance(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jumps", type=int, default=0, help="jump budget (0 = baseline)")
    p.add_argument("--pool-size", type=int, default=8)
    p.add_argument("--step-size", type=float, default=0.05)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("jump-demo", help="moment matrices, GEP solution and LCU check on one state")
    _add_instance(p)
    p.add_argument("--pool-size", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--p", type=int, default=1, help="depth of the random QAOA state the jump acts on")
    p.add_argument("--out")
    p.set_defaults(func=cmd_jump_demo)

    p = sub.add_parser("benchmark", help="paired baseline / jump-enhanced runs from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except SystemExit:
        raise
    except Exception as exc:
        _fail(type(exc).__name__, str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
