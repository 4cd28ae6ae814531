"""
QAOA ansatz, finite-difference gradients, a plain gradient-descent optimizer
and landscape scans.

Parameters are ordered ``(gamma_1..gamma_p, beta_1..beta_p)`` everywhere a flat
vector is used (gradients, traces).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import CapacityError, NumericalError, ShapeError
from .problem import DiagonalHamiltonian
from .statevector import (
    CostPhase,
    MixerX,
    State,
    apply_circuit_to_array,
    expectation_diagonal,
    uniform_superposition,
)

FD_STEP = 1e-4


@dataclass(frozen=True)
class QaoaParams:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        g = tuple(float(x) for x in self.gammas)
        b = tuple(float(x) for x in self.betas)
        if len(g) != len(b) or len(g) < 1:
            raise ShapeError(f"need equal-length, non-empty gammas/betas, got {len(g)} and {len(b)}")
        if not all(math.isfinite(x) for x in g + b):
            raise ValueError("QAOA parameters must be finite")
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "betas", b)

    @property
    def depth(self) -> int:
        return len(self.gammas)

    def to_vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)

    @classmethod
    def from_vector(cls, vec) -> "QaoaParams":
        vec = np.asarray(vec, dtype=float)
        if vec.ndim != 1 or vec.size % 2:
            raise ShapeError(f"flat parameter vector must have even length, got {vec.shape}")
        p = vec.size // 2
        return cls(tuple(vec[:p]), tuple(vec[p:]))


def qaoa_circuit(h: DiagonalHamiltonian, params: QaoaParams) -> tuple:
    layers = []
    for g, b in zip(params.gammas, params.betas):
        layers.append(CostPhase(g, h))
        layers.append(MixerX(b))
    return tuple(layers)


def qaoa_state(h: DiagonalHamiltonian, params: QaoaParams, initial: Optional[State] = None) -> State:
    """Apply ``p`` alternating cost/mixer layers to ``initial`` (default ``|+>^n``)."""
    if initial is None:
        initial = uniform_superposition(h.n_qubits)
    elif initial.n_qubits != h.n_qubits:
        raise ShapeError(f"initial state has {initial.n_qubits} qubits, Hamiltonian {h.n_qubits}")
    amps = apply_circuit_to_array(initial.amplitudes, h.n_qubits, qaoa_circuit(h, params))
    return State(h.n_qubits, amps, check=False)


def qaoa_energy(h: DiagonalHamiltonian, params: QaoaParams, initial: Optional[State] = None) -> float:
    return expectation_diagonal(qaoa_state(h, params, initial), h)


def qaoa_gradient(
    h: DiagonalHamiltonian,
    params: QaoaParams,
    initial: Optional[State] = None,
    step: float = FD_STEP,
) -> np.ndarray:
    """Central finite-difference gradient, ordered (gammas, betas)."""
    x = params.to_vector()
    grad = np.empty_like(x)
    for k in range(x.size):
        xp, xm = x.copy(), x.copy()
        xp[k] += step
        xm[k] -= step
        ep = qaoa_energy(h, QaoaParams.from_vector(xp), initial)
        em = qaoa_energy(h, QaoaParams.from_vector(xm), initial)
        grad[k] = (ep - em) / (2 * step)
    return grad


# --------------------------------------------------------------------------
# Optimizer
# --------------------------------------------------------------------------


@dataclass
class OptimizerConfig:
    step_size: float = 0.05
    momentum: float = 0.0
    max_iter: int = 2000
    tol_grad: float = 1e-6
    fd_step: float = FD_STEP

    def __post_init__(self):
        if self.step_size <= 0 or self.max_iter < 0 or self.tol_grad <= 0 or self.fd_step <= 0:
            raise ValueError(f"invalid optimizer settings: {self}")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError(f"momentum must lie in [0, 1), got {self.momentum}")


@dataclass(frozen=True)
class IterationRecord:
    params: QaoaParams
    energy: float
    grad_norm: float


@dataclass
class OptTrace:
    records: list[IterationRecord] = field(default_factory=list)
    termination: str = ""

    @property
    def final(self) -> IterationRecord:
        return self.records[-1]

    def grad_norms(self) -> np.ndarray:
        return np.array([r.grad_norm for r in self.records])

    def energies(self) -> np.ndarray:
        return np.array([r.energy for r in self.records])


def optimize(
    h: DiagonalHamiltonian,
    init: QaoaParams,
    config: OptimizerConfig | None = None,
    initial_state: Optional[State] = None,
    stop: Callable[[OptTrace], bool] | None = None,
) -> OptTrace:
    """Fixed-step gradient descent with optional heavy-ball momentum.

    Terminates with reason ``"zero_gradient"`` (infinity norm below
    ``tol_grad``), ``"plateau"`` (``stop(trace)`` returned true) or
    ``"max_iter"``. Every visited iterate is recorded, including the initial one.
    """
    config = config or OptimizerConfig()
    trace = OptTrace()
    x = init.to_vector()
    velocity = np.zeros_like(x)
    it = 0
    while True:
        params = QaoaParams.from_vector(x)
        energy = qaoa_energy(h, params, initial_state)
        grad = qaoa_gradient(h, params, initial_state, config.fd_step)
        if not (math.isfinite(energy) and np.all(np.isfinite(grad))):
            raise NumericalError(f"non-finite energy or gradient at iteration {it}")
        gnorm = float(np.max(np.abs(grad)))
        trace.records.append(IterationRecord(params, energy, gnorm))
        if gnorm < config.tol_grad:
            trace.termination = "zero_gradient"
            break
        if stop is not None and stop(trace):
            trace.termination = "plateau"
            break
        if it >= config.max_iter:
            trace.termination = "max_iter"
            break
        velocity = config.momentum * velocity - config.step_size * grad
        x = x + velocity
        it += 1
    return trace


# --------------------------------------------------------------------------
# Landscapes
# --------------------------------------------------------------------------


@dataclass
class Landscape:
    """Energies on a uniform grid; ``energies[i, j]`` is at ``(gammas[i], betas[j])``."""

    p: int
    gammas: np.ndarray
    betas: np.ndarray
    energies: np.ndarray


def _mixer_batch(states: np.ndarray, n: int, betas: np.ndarray) -> np.ndarray:
    c = np.cos(betas)[:, None, None]
    s = (-1j * np.sin(betas))[:, None, None]
    out = states.copy()
    batch = states.shape[0]
    for q in range(n):
        view = out.reshape(batch, -1, 2, 1 << q)
        a0 = view[:, :, 0, :].copy()
        a1 = view[:, :, 1, :]
        view[:, :, 0, :] = c * a0 + s * a1
        view[:, :, 1, :] = c * a1 + s * a0
    return out


def landscape(
    h: DiagonalHamiltonian,
    p: int,
    grid: int = 64,
    initial: Optional[State] = None,
) -> Landscape:
    """Scan ``[0, pi]^2`` with one shared ``(gamma, beta)`` across all ``p`` layers.

    Each gamma row is evaluated as one batch over all beta values.
    """
    if grid < 2:
        raise ValueError(f"grid must be >= 2, got {grid}")
    if p < 1:
        raise ValueError(f"depth must be >= 1, got {p}")
    n = h.n_qubits
    if grid * (1 << n) > 1 << 28:
        raise CapacityError(f"grid {grid} x 2^{n} amplitudes exceeds the batch memory limit")
    init = uniform_superposition(n) if initial is None else initial
    axis = np.linspace(0.0, math.pi, grid)
    energies = np.empty((grid, grid))
    for i, gamma in enumerate(axis):
        phase = np.exp(1j * gamma * h.energies)
        states = np.tile(init.amplitudes, (grid, 1))
        for _ in range(p):
            states = states * phase
            states = _mixer_batch(states, n, axis)
        energies[i] = (np.abs(states) ** 2) @ h.energies
    return Landscape(p, axis.copy(), axis.copy(), energies)


def write_landscape(table: Landscape, path: str | Path, comments: Sequence[str] = ()) -> None:
    """Three-column ``gamma beta energy`` text, gamma-major, blank line between gamma blocks.

    The header row comes first and ``#`` comment lines follow it, so column
    names are picked up by readers that take them from the first line.
    """
    lines = ["gamma beta energy"]
    lines.extend(f"# {c}" for c in comments)
    for i, g in enumerate(table.gammas):
        if i:
            lines.append("")
        for j, b in enumerate(table.betas):
            lines.append(f"{float(g)!r} {float(b)!r} {float(table.energies[i, j])!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_landscape(path: str | Path) -> np.ndarray:
    """Rows of ``(gamma, beta, energy)`` from a file written by :func:`write_landscape`."""
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("gamma"):
            continue
        rows.append([float(x) for x in line.split()])
    return np.array(rows, dtype=float).reshape(-1, 3)
