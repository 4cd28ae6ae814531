"""Paired baseline / jump-enhanced runs and a printed comparison.

    python scripts/plateau_benchmark.py scripts/configs/ring8_p2.json --out results/ring8
"""

import argparse
import json
from pathlib import Path

from conic_qaoa.harness import load_benchmark_config, run_benchmark, summarize, write_benchmark


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("config")
    ap.add_argument("--out", default="results")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    cells = load_benchmark_config(json.loads(Path(args.config).read_text()))
    rows = run_benchmark(cells, workers=args.workers)
    write_benchmark(rows, args.out)

    by_key = {(r["config_index"], r["seed"], r["method"]): r for r in rows}
    wins_e = wins_p = total = 0
    for (ci, seed, method), r in by_key.items():
        if method != "baseline" or not r["plateau_detected"]:
            continue
        j = by_key[(ci, seed, "jump")]
        if r["error"] or j["error"]:
            continue
        total += 1
        wins_e += j["final_energy"] <= r["final_energy"]
        wins_p += j["p_opt_exact"] >= r["p_opt_exact"]
    for s in summarize(rows):
        print(f"{s['instance']:>12} {s['method']:>8}  median E {s['median_final_energy']:+.4f}  "
              f"median ratio {s['median_approximation_ratio']:.4f}  median p_opt {s['median_p_opt_exact']:.4f}")
    if total:
        print(f"plateau runs: {total}  jump energy <= baseline: {wins_e / total:.0%}  "
              f"jump p_opt >= baseline: {wins_p / total:.0%}")


if __name__ == "__main__":
    main()
