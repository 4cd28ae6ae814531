"""
Experiment driver: plateau detection, jump-enhanced optimisation and
paired benchmarks against the plain gradient-descent baseline.

Random streams. Every run has a master ``seed``; independent streams are
derived as ``numpy.random.default_rng([seed, stream, k])`` with

    stream 0  initial QAOA angles
    stream 1  jump pool for jump k
    stream 2  post-jump angle reset for jump k
    stream 3  bitstring sampling of the final state

Benchmark cells that are not given explicit seeds get
``SeedSequence([master_seed, config_index, replicate]).generate_state(1)[0]``,
so results never depend on execution order or worker count.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .conic import (
    JumpPool,
    PoolSpec,
    apply_jump,
    build_pool,
    moment_matrices,
    pool_from_list,
    pool_to_list,
    solve_gep,
)
from .errors import ConfigurationError, ConicError
from .problem import (
    DiagonalHamiltonian,
    Graph,
    brute_force_ground,
    complete_graph,
    erdos_renyi_graph,
    load_graph,
    maxcut_hamiltonian,
    optimal_probability,
    random_regular_graph,
    ring_graph,
)
from .qaoa import OptimizerConfig, OptTrace, QaoaParams, optimize, qaoa_state
from .statevector import State, expectation_diagonal, sample_bitstrings, uniform_superposition

STREAM_INIT, STREAM_POOL, STREAM_RESET, STREAM_SAMPLE = 0, 1, 2, 3


def detect_plateau(trace: OptTrace, grad_tol: float, window: int) -> bool:
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if len(trace.records) < window:
        return False
    return all(r.grad_norm < grad_tol for r in trace.records[-window:])


# --------------------------------------------------------------------------
# Configuration
# --------------------------------------------------------------------------

GENERATORS = ("ring", "complete", "regular", "erdos_renyi")


@dataclass
class RunConfig:
    graph: str | None = None
    generator: dict | None = None
    p: int = 2
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    plateau_grad_tol: float = 1e-3
    plateau_window: int = 10
    pool: PoolSpec = field(default_factory=PoolSpec)
    jump_budget: int = 1
    init_scale: float = math.pi
    reset_scale: float = 0.05
    shots: int = 1000
    output_dir: str | None = None
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.optimizer, dict):
            self.optimizer = OptimizerConfig(**self.optimizer)
        if isinstance(self.pool, dict):
            self.pool = PoolSpec(**self.pool)
        if (self.graph is None) == (self.generator is None):
            raise ConfigurationError("exactly one of 'graph' and 'generator' must be given")
        if self.generator is not None and self.generator.get("kind") not in GENERATORS:
            raise ConfigurationError(f"generator kind must be one of {GENERATORS}, got {self.generator!r}")
        if self.p < 1:
            raise ConfigurationError(f"depth p must be >= 1, got {self.p}")
        if self.plateau_grad_tol <= 0 or self.plateau_window < 1:
            raise ConfigurationError("plateau thresholds must be positive")
        if self.jump_budget < 0 or self.shots < 1:
            raise ConfigurationError("jump_budget must be >= 0 and shots >= 1")
        if self.init_scale <= 0 or self.reset_scale <= 0:
            raise ConfigurationError("angle scales must be positive")

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def load_instance(config: RunConfig) -> Graph:
    if config.graph is not None:
        return load_graph(config.graph)
    gen = dict(config.generator)
    kind, n = gen["kind"], int(gen["n"])
    if kind == "ring":
        return ring_graph(n)
    if kind == "complete":
        return complete_graph(n)
    if "seed" not in gen:
        raise ConfigurationError(f"random generator {kind!r} needs a 'seed'")
    if kind == "regular":
        return random_regular_graph(n, int(gen.get("d", 3)), int(gen["seed"]))
    return erdos_renyi_graph(n, float(gen.get("p", 0.5)), int(gen["seed"]))


def parse_generator(text: str) -> dict:
    """``ring:8``, ``complete:5``, ``regular:10:3:SEED`` or ``erdos_renyi:8:0.5:SEED``."""
    parts = text.split(":")
    kind = parts[0]
    try:
        if kind in ("ring", "complete") and len(parts) == 2:
            return {"kind": kind, "n": int(parts[1])}
        if kind == "regular" and len(parts) == 4:
            return {"kind": kind, "n": int(parts[1]), "d": int(parts[2]), "seed": int(parts[3])}
        if kind == "erdos_renyi" and len(parts) == 4:
            return {"kind": kind, "n": int(parts[1]), "p": float(parts[2]), "seed": int(parts[3])}
    except ValueError:
        pass
    raise ConfigurationError(f"cannot parse generator spec {text!r}")


def instance_label(config: RunConfig) -> str:
    if config.graph is not None:
        return Path(config.graph).name
    return ":".join(str(v) for v in config.generator.values())


# --------------------------------------------------------------------------
# Runs
# --------------------------------------------------------------------------


def _rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), *stream])


def _random_params(rng: np.random.Generator, p: int, scale: float) -> QaoaParams:
    return QaoaParams(tuple(rng.uniform(0.0, scale, p)), tuple(rng.uniform(0.0, scale, p)))


def _trace_to_dict(trace: OptTrace) -> dict:
    return {
        "termination": trace.termination,
        "gammas": [list(r.params.gammas) for r in trace.records],
        "betas": [list(r.params.betas) for r in trace.records],
        "energy": [r.energy for r in trace.records],
        "grad_norm": [r.grad_norm for r in trace.records],
    }


@dataclass
class RunReport:
    config: dict
    instance: dict
    ground_energy: float
    n_optimal: int
    segments: list[dict]
    jump_events: list[dict]
    plateau_detected: bool
    final_energy: float
    approximation_ratio: float
    p_opt_exact: float
    p_opt_sampled: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True, allow_nan=True) + "\n"

    @property
    def baseline_trace(self) -> dict:
        return self.segments[0]["trace"]


def run_jump_enhanced(config: RunConfig, graph: Graph | None = None) -> RunReport:
    """Optimise, jump on plateaus, continue from the post-jump state.

    After each jump the post-jump state becomes the new reference input of the
    QAOA circuit and the angles restart from ``U[0, reset_scale)``.
    ``jump_budget=0`` reproduces the baseline exactly.
    """
    graph = graph if graph is not None else load_instance(config)
    h = maxcut_hamiltonian(graph)
    ground, optimal = brute_force_ground(h)

    def stop(trace: OptTrace) -> bool:
        return detect_plateau(trace, config.plateau_grad_tol, config.plateau_window)

    reference = uniform_superposition(h.n_qubits)
    params = _random_params(_rng(config.seed, STREAM_INIT), config.p, config.init_scale)
    segments: list[dict] = []
    events: list[dict] = []
    iterations = 0
    while True:
        trace = optimize(h, params, config.optimizer, reference, stop)
        segment = {"initial_params": [list(params.gammas), list(params.betas)], "trace": _trace_to_dict(trace),
                   "jump": None}
        segments.append(segment)
        iterations += len(trace.records) - 1
        state = qaoa_state(h, trace.final.params, reference)
        stalled = trace.termination in ("plateau", "zero_gradient")
        if not stalled or len(events) >= config.jump_budget:
            break
        k = len(events)
        pool = build_pool(config.pool, h, _rng(config.seed, STREAM_POOL, k))
        try:
            sol = solve_gep(moment_matrices(state, pool, h))
            jump = apply_jump(state, pool, sol.alpha, h)
        except ConicError as exc:
            raise type(exc)(f"jump {k} at iteration {iterations}: {exc}") from exc
        event = {
            "iteration": iterations,
            "energy_before": trace.final.energy,
            "lambda_opt": sol.lambda_opt,
            "energy_after": jump.energy,
            "p_succ_root": jump.p_succ_root,
            "p_succ_naive": jump.p_succ_naive,
            "alpha_l1": float(np.sum(np.abs(sol.alpha))),
            "gep": sol.to_dict(),
            "pool": pool_to_list(pool),
        }
        segment["jump"] = event
        events.append(event)
        reference = jump.state
        params = _random_params(_rng(config.seed, STREAM_RESET, k), config.p, config.reset_scale)

    final_energy = expectation_diagonal(state, h)
    probs = state.probabilities()
    samples = sample_bitstrings(state, config.shots, _rng(config.seed, STREAM_SAMPLE))
    hits = int(np.isin(samples, np.fromiter(optimal, dtype=np.int64)).sum())
    ratio = final_energy / ground if ground != 0 else 1.0
    first = segments[0]["trace"]["termination"]
    return RunReport(
        config=config.to_dict(),
        instance={"n_vertices": graph.n_vertices, "edges": [list(e) for e in graph.edges]},
        ground_energy=ground,
        n_optimal=len(optimal),
        segments=segments,
        jump_events=events,
        plateau_detected=first in ("plateau", "zero_gradient"),
        final_energy=final_energy,
        approximation_ratio=ratio,
        p_opt_exact=optimal_probability(probs, optimal),
        p_opt_sampled=hits / config.shots,
    )


def run_baseline(config: RunConfig, graph: Graph | None = None) -> RunReport:
    return run_jump_enhanced(dataclasses.replace(config, jump_budget=0), graph)


def reconstruct_final_state(report: dict) -> tuple[State, DiagonalHamiltonian]:
    """Rebuild the final state from the stored segments (params and jumps) of a report."""
    graph = Graph.from_edges(report["instance"]["n_vertices"], report["instance"]["edges"])
    h = maxcut_hamiltonian(graph)
    reference = uniform_superposition(h.n_qubits)
    state = reference
    for seg in report["segments"]:
        tr = seg["trace"]
        state = qaoa_state(h, QaoaParams(tr["gammas"][-1], tr["betas"][-1]), reference)
        if seg["jump"] is not None:
            jump = seg["jump"]
            pool: JumpPool = pool_from_list(jump["pool"], h)
            alpha = np.array(jump["gep"]["alpha_re"]) + 1j * np.array(jump["gep"]["alpha_im"])
            reference = apply_jump(state, pool, alpha, h).state
    return state, h


# --------------------------------------------------------------------------
# Benchmarks
# --------------------------------------------------------------------------

CSV_FIELDS = (
    "config_index", "instance", "seed", "method", "n", "p", "final_energy", "ground_energy",
    "approximation_ratio", "p_opt_exact", "p_opt_sampled", "plateau_detected", "n_jumps",
    "iterations", "error",
)
NUMERIC_FIELDS = ("final_energy", "ground_energy", "approximation_ratio", "p_opt_exact", "p_opt_sampled")


@dataclass
class BenchmarkCell:
    config_index: int
    config: RunConfig


def cell_seed(master_seed: int, config_index: int, replicate: int) -> int:
    return int(np.random.SeedSequence([master_seed, config_index, replicate]).generate_state(1)[0])


def load_benchmark_config(data: dict | list) -> list[BenchmarkCell]:
    """Expand a benchmark file into cells.

    Accepts a single RunConfig mapping, a list of them, or
    ``{"configs": [...], "seeds": [...]}`` / ``{"configs": [...],
    "replicates": R, "master_seed": S}``.
    """
    if isinstance(data, list):
        data = {"configs": data}
    elif "configs" not in data:
        data = {"configs": [data]}
    configs = data["configs"]
    if not configs:
        raise ConfigurationError("benchmark needs at least one config")
    cells = []
    for i, raw in enumerate(configs):
        base = RunConfig.from_dict(raw)
        if "seeds" in data:
            seeds = [int(s) for s in data["seeds"]]
        elif "replicates" in data:
            master = int(data.get("master_seed", 0))
            seeds = [cell_seed(master, i, r) for r in range(int(data["replicates"]))]
        else:
            seeds = [base.seed]
        cells.extend(BenchmarkCell(i, dataclasses.replace(base, seed=s)) for s in seeds)
    return cells


def _row(cell: BenchmarkCell, method: str, report: RunReport | None, error: str = "") -> dict:
    cfg = cell.config
    row: dict[str, Any] = {
        "config_index": cell.config_index,
        "instance": instance_label(cfg),
        "seed": cfg.seed,
        "method": method,
        "p": cfg.p,
        "error": error,
    }
    if report is None:
        row.update({k: float("nan") for k in NUMERIC_FIELDS})
        row.update(n=-1, plateau_detected=False, n_jumps=0, iterations=0)
    else:
        row.update(
            n=report.instance["n_vertices"],
            final_energy=report.final_energy,
            ground_energy=report.ground_energy,
            approximation_ratio=report.approximation_ratio,
            p_opt_exact=report.p_opt_exact,
            p_opt_sampled=report.p_opt_sampled,
            plateau_detected=report.plateau_detected,
            n_jumps=len(report.jump_events),
            iterations=sum(len(s["trace"]["energy"]) - 1 for s in report.segments),
        )
    return row


def run_cell(cell: BenchmarkCell) -> list[dict]:
    rows = []
    for method, fn in (("baseline", run_baseline), ("jump", run_jump_enhanced)):
        try:
            rows.append(_row(cell, method, fn(cell.config)))
        except Exception as exc:  # recorded per row, the benchmark continues
            rows.append(_row(cell, method, None, f"{type(exc).__name__}: {exc}"))
    return rows


def run_benchmark(cells: Sequence[BenchmarkCell], workers: int = 1) -> list[dict]:
    if not cells:
        raise ConfigurationError("benchmark needs at least one cell")
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            nested = list(pool.map(run_cell, cells))
    else:
        nested = [run_cell(c) for c in cells]
    return [row for rows in nested for row in rows]


def summarize(rows: Iterable[dict]) -> list[dict]:
    groups: dict[tuple, list[dict]] = {}
    for r in rows:
        groups.setdefault((r["config_index"], r["instance"], r["method"]), []).append(r)
    out = []
    for (ci, inst, method), rs in sorted(groups.items()):
        ok = [r for r in rs if not r["error"]]
        entry = {"config_index": ci, "instance": inst, "method": method, "runs": len(rs), "failures": len(rs) - len(ok)}
        for key in ("final_energy", "approximation_ratio", "p_opt_exact"):
            vals = [r[key] for r in ok]
            entry[f"median_{key}"] = statistics.median(vals) if vals else float("nan")
            entry[f"mean_{key}"] = statistics.fmean(vals) if vals else float("nan")
        out.append(entry)
    return out


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: Sequence[dict], path: str | Path, fields: Sequence[str] | None = None) -> None:
    fields = list(fields or rows[0].keys())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields)
        for r in rows:
            writer.writerow([_fmt(r[f]) for f in fields])


def read_benchmark_csv(path: str | Path) -> list[dict]:
    ints = ("config_index", "seed", "n", "p", "n_jumps", "iterations")
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for r in csv.DictReader(fh):
            for k in ints:
                r[k] = int(r[k])
            for k in NUMERIC_FIELDS:
                r[k] = float(r[k])
            r["plateau_detected"] = r["plateau_detected"] == "True"
            rows.append(r)
    return rows


def write_benchmark(rows: Sequence[dict], out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(rows, out / "benchmark.csv", CSV_FIELDS)
    write_csv(summarize(rows), out / "summary.csv")
