"""Export the shared-angle (gamma, beta) landscapes for p = 2, 4, 8, 16.

Writes ``optimisation_landscape_p=<p>.txt`` files that plot directly as
filled contours over [0, pi]^2.

    python scripts/landscapes.py --generator regular:10:3:0 --out-dir data
"""

import argparse
import time
from pathlib import Path

from conic_qaoa.harness import RunConfig, load_instance, parse_generator
from conic_qaoa.problem import load_graph, maxcut_hamiltonian
from conic_qaoa.qaoa import landscape, write_landscape


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--graph")
    src.add_argument("--generator", default="regular:10:3:0")
    ap.add_argument("--depths", type=int, nargs="+", default=[2, 4, 8, 16])
    ap.add_argument("--grid", type=int, default=64)
    ap.add_argument("--out-dir", default="data")
    args = ap.parse_args()

    if args.graph:
        graph, label = load_graph(args.graph), args.graph
    else:
        graph, label = load_instance(RunConfig(generator=parse_generator(args.generator))), args.generator
    h = maxcut_hamiltonian(graph)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for p in args.depths:
        t0 = time.perf_counter()
        table = landscape(h, p, args.grid)
        path = out / f"optimisation_landscape_p={p}.txt"
        write_landscape(table, path, [f"instance: {label}", f"edges={[list(e) for e in graph.edges]}", f"p={p}"])
        print(f"p={p:2d}  min={table.energies.min():+.4f}  max={table.energies.max():+.4f}  "
              f"{time.perf_counter() - t0:.1f}s -> {path}")


if __name__ == "__main__":
    main()
