"""
MaxCut instances and their diagonal Hamiltonians.

Energy convention: each edge ``(u, v, w)`` contributes ``w * (z_u z_v - 1) / 2``
with ``z_i = +1`` if bit ``i`` is 0 and ``-1`` otherwise. A cut edge therefore
costs ``-w``, and the ground energy equals minus the maximum cut weight.

Graph file format (UTF-8): first line ``n m``, then ``m`` lines ``u v`` or
``u v w``. ``#`` starts a comment; blank lines are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import CapacityError, ParseError
from .statevector import MAX_QUBITS

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class Graph:
    n_vertices: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        for u, v, w in self.edges:
            if not (0 <= u < v < self.n_vertices):
                raise ValueError(f"edge ({u}, {v}) violates 0 <= u < v < {self.n_vertices}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable) -> "Graph":
        """Build a graph from ``(u, v)`` or ``(u, v, w)`` tuples in any orientation."""
        normalized = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            normalized.append((min(u, v), max(u, v), w))
        return cls(int(n_vertices), tuple(normalized))

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))

    def to_text(self) -> str:
        lines = [f"{self.n_vertices} {len(self.edges)}"]
        for u, v, w in self.edges:
            lines.append(f"{u} {v}" if w == 1.0 else f"{u} {v} {w!r}")
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    header = None
    edges: list[Edge] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if header is None:
            if len(fields) != 2:
                raise ParseError("header must be 'n m'", lineno)
            try:
                header = (int(fields[0]), int(fields[1]))
            except ValueError:
                raise ParseError(f"non-integer header {line!r}", lineno) from None
            if header[0] < 1 or header[1] < 0:
                raise ParseError(f"invalid header {line!r}", lineno)
            continue
        if len(fields) not in (2, 3):
            raise ParseError(f"expected 'u v' or 'u v w', got {line!r}", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
            w = float(fields[2]) if len(fields) == 3 else 1.0
        except ValueError:
            raise ParseError(f"malformed edge {line!r}", lineno) from None
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex index out of range [0, {n})", lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        if not np.isfinite(w):
            raise ParseError(f"non-finite weight {fields[2]!r}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {key} (first seen on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append((key[0], key[1], w))
    if header is None:
        raise ParseError("empty graph file", None)
    if len(edges) != header[1]:
        raise ParseError(f"header declares {header[1]} edges, found {len(edges)}", None)
    return Graph(header[0], tuple(edges))


def load_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


# -- generators -------------------------------------------------------------


def ring_graph(n: int) -> Graph:
    if n < 3:
        return Graph.from_edges(n, [(0, 1)] if n == 2 else [])
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_regular_graph(n: int, d: int, seed: int) -> Graph:
    import networkx as nx

    g = nx.random_regular_graph(d, n, seed=seed)
    return Graph.from_edges(n, sorted(tuple(sorted(e)) for e in g.edges()))


def erdos_renyi_graph(n: int, p: float, seed: int) -> Graph:
    import networkx as nx

    g = nx.gnp_random_graph(n, p, seed=seed)
    return Graph.from_edges(n, sorted(tuple(sorted(e)) for e in g.edges()))


# -- Hamiltonian ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DiagonalHamiltonian:
    n_qubits: int
    energies: np.ndarray
    source_edges: tuple[Edge, ...]

    def __post_init__(self):
        e = np.array(self.energies, dtype=np.float64)
        if e.shape != (1 << self.n_qubits,):
            raise ValueError(f"expected {1 << self.n_qubits} energies, got {e.shape}")
        e.flags.writeable = False
        object.__setattr__(self, "energies", e)


def maxcut_hamiltonian(g: Graph) -> DiagonalHamiltonian:
    n = g.n_vertices
    if n > MAX_QUBITS:
        raise CapacityError(f"{n} vertices exceeds the {MAX_QUBITS}-qubit limit")
    idx = np.arange(1 << n)
    energies = np.zeros(1 << n)
    for u, v, w in g.edges:
        zz = (1 - 2 * ((idx >> u) & 1)) * (1 - 2 * ((idx >> v) & 1))
        energies += w * (zz - 1) / 2
    return DiagonalHamiltonian(n, energies, g.edges)


def brute_force_ground(h: DiagonalHamiltonian, rtol: float = 1e-12) -> tuple[float, frozenset[int]]:
    """Exact ground energy and the set of minimising basis indices.

    Ties are resolved with a relative tolerance so float-weighted instances
    do not lose optimal strings to summation-order rounding.
    """
    e = h.energies
    ground = float(e.min())
    tol = rtol * max(1.0, float(np.abs(e).max()))
    return ground, frozenset(int(x) for x in np.flatnonzero(e <= ground + tol))


def optimal_probability(probabilities: np.ndarray, optimal: Iterable[int]) -> float:
    idx = np.fromiter(optimal, dtype=np.int64)
    return float(np.sum(probabilities[idx]))
