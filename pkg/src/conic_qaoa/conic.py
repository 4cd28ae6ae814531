"""
Conic jumps: optimal linear combinations of pool unitaries applied to a state.

Given a state ``phi`` and unitaries ``U_1..U_l`` the reachable family is
``M_a phi / |M_a phi|`` with ``M_a = sum_i a_i U_i``. Minimising the energy over
``a`` reduces to the smallest eigenvalue of the pencil ``(H, E)`` built from

    E_ij = <U_i phi | U_j phi>,     H_ij = <U_i phi | H | U_j phi>.

``lcu_verify`` simulates the ancilla-register construction that realises
``M_a`` on hardware (prepare, select, post-select) and checks it against the
direct combination computed by ``apply_jump``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import (
    CapacityError,
    ConfigurationError,
    DegenerateJumpError,
    DegenerateMetricError,
    DescriptorError,
    NumericalError,
    ShapeError,
    VerificationError,
)
from .problem import DiagonalHamiltonian
from .statevector import (
    MAX_QUBITS,
    CostPhase,
    Layer,
    MixerX,
    PauliStringRotation,
    SingleQubitRotation,
    State,
    apply_circuit_to_array,
    expectation_diagonal,
)

MAX_POOL = 16
TOL_RANK = 1e-10
DEGENERACY_TOL = 1e-9

# --------------------------------------------------------------------------
# Pools
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PoolSpec:
    """Default pool family: identity, random single QAOA layers, Y-rotation sweeps.

    ``size`` counts every entry. The last ``y_sweeps`` entries (after the
    identity) are sweeps of independent ``R_y`` rotations over all qubits; the
    rest are ``CostPhase(g) MixerX(b)`` with ``g ~ U[0, 2pi)``, ``b ~ U[0, pi)``.
    """

    size: int = 8
    include_identity: bool = True
    y_sweeps: int = 0

    def __post_init__(self):
        if not 1 <= self.size <= MAX_POOL:
            raise ConfigurationError(f"pool size must be in [1, {MAX_POOL}], got {self.size}")
        random_slots = self.size - int(self.include_identity)
        if not 0 <= self.y_sweeps <= random_slots:
            raise ConfigurationError(f"y_sweeps={self.y_sweeps} does not fit a pool of size {self.size}")


@dataclass(frozen=True)
class JumpPool:
    unitaries: tuple[tuple[Layer, ...], ...]

    def __post_init__(self):
        if not 1 <= len(self.unitaries) <= MAX_POOL:
            raise ConfigurationError(f"pool size must be in [1, {MAX_POOL}], got {len(self.unitaries)}")
        object.__setattr__(self, "unitaries", tuple(tuple(u) for u in self.unitaries))

    def __len__(self) -> int:
        return len(self.unitaries)


def build_pool(spec: PoolSpec, h: DiagonalHamiltonian, seed) -> JumpPool:
    rng = np.random.default_rng(seed)
    entries: list[tuple[Layer, ...]] = []
    if spec.include_identity:
        entries.append(())
    n_layers = spec.size - len(entries) - spec.y_sweeps
    for _ in range(n_layers):
        g = float(rng.uniform(0.0, 2 * math.pi))
        b = float(rng.uniform(0.0, math.pi))
        entries.append((CostPhase(g, h), MixerX(b)))
    for _ in range(spec.y_sweeps):
        angles = rng.uniform(0.0, 2 * math.pi, size=h.n_qubits)
        entries.append(tuple(SingleQubitRotation("Y", q, float(a)) for q, a in enumerate(angles)))
    return JumpPool(tuple(entries))


def layer_to_dict(layer: Layer) -> dict:
    if isinstance(layer, CostPhase):
        return {"kind": "cost_phase", "gamma": layer.gamma}
    if isinstance(layer, MixerX):
        return {"kind": "mixer_x", "beta": layer.beta}
    if isinstance(layer, SingleQubitRotation):
        return {"kind": "rotation", "axis": layer.axis, "qubit": layer.qubit, "angle": layer.angle}
    if isinstance(layer, PauliStringRotation):
        return {"kind": "pauli_rotation", "paulis": layer.paulis, "angle": layer.angle}
    raise DescriptorError(f"unknown layer {layer!r}")


def layer_from_dict(d: dict, h: DiagonalHamiltonian) -> Layer:
    kind = d.get("kind")
    if kind == "cost_phase":
        return CostPhase(d["gamma"], h)
    if kind == "mixer_x":
        return MixerX(d["beta"])
    if kind == "rotation":
        return SingleQubitRotation(d["axis"], d["qubit"], d["angle"])
    if kind == "pauli_rotation":
        return PauliStringRotation(d["paulis"], d["angle"])
    raise DescriptorError(f"unknown layer kind {kind!r}")


def pool_to_list(pool: JumpPool) -> list[list[dict]]:
    return [[layer_to_dict(layer) for layer in u] for u in pool.unitaries]


def pool_from_list(data: Sequence[Sequence[dict]], h: DiagonalHamiltonian) -> JumpPool:
    return JumpPool(tuple(tuple(layer_from_dict(d, h) for d in u) for u in data))


def pool_states(phi: State, pool: JumpPool) -> np.ndarray:
    """Rows are ``U_j |phi>``; each pool circuit is applied exactly once."""
    return np.stack([apply_circuit_to_array(phi.amplitudes, phi.n_qubits, u) for u in pool.unitaries])


# --------------------------------------------------------------------------
# Moment matrices and the generalised eigenvalue problem
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentPair:
    E: np.ndarray
    H: np.ndarray


def moment_matrices(phi: State, pool: JumpPool, h: DiagonalHamiltonian) -> MomentPair:
    if phi.n_qubits != h.n_qubits:
        raise ShapeError(f"state has {phi.n_qubits} qubits, Hamiltonian {h.n_qubits}")
    rows = pool_states(phi, pool)
    E = rows.conj() @ rows.T
    H = rows.conj() @ (rows * h.energies).T
    # exact hermiticity; the raw products differ from it only by rounding
    E = 0.5 * (E + E.conj().T)
    H = 0.5 * (H + H.conj().T)
    return MomentPair(E, H)


@dataclass(frozen=True)
class GepSolution:
    lambda_opt: float
    alpha: np.ndarray
    effective_rank: int
    p_succ_root: float
    p_succ_naive: float
    residual: float

    def to_dict(self) -> dict:
        return {
            "lambda_opt": self.lambda_opt,
            "alpha_re": [float(a.real) for a in self.alpha],
            "alpha_im": [float(a.imag) for a in self.alpha],
            "effective_rank": self.effective_rank,
            "p_succ_root": self.p_succ_root,
            "p_succ_naive": self.p_succ_naive,
            "residual": self.residual,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GepSolution":
        alpha = np.array(d["alpha_re"]) + 1j * np.array(d["alpha_im"])
        return cls(d["lambda_opt"], alpha, d["effective_rank"], d["p_succ_root"], d["p_succ_naive"],
                   d.get("residual", float("nan")))


def success_probability_root(alpha) -> float:
    return float(np.sum(np.abs(alpha))) ** -2


def success_probability_naive(alpha) -> float:
    alpha = np.asarray(alpha)
    return 1.0 / (alpha.size * float(np.vdot(alpha, alpha).real))


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    out = v * (abs(v[k]) / v[k])
    out[k] = abs(v[k])
    return out


def solve_gep(m: MomentPair, tol_rank: float = TOL_RANK) -> GepSolution:
    """Minimise ``a^H H a`` subject to ``a^H E a = 1``.

    ``E`` is diagonalised and directions with eigenvalue below
    ``tol_rank * max_eigenvalue`` are dropped (they map to the zero vector in
    state space). The whitened operator ``W^H H W`` with
    ``W = V_k diag(w_k)^(-1/2)`` is an ordinary Hermitian matrix whose lowest
    eigenpair gives the optimum.
    """
    E, H = np.asarray(m.E, dtype=complex), np.asarray(m.H, dtype=complex)
    if E.shape != H.shape or E.ndim != 2 or E.shape[0] != E.shape[1]:
        raise ShapeError(f"moment matrices must be equal square shapes, got {E.shape} and {H.shape}")
    w, V = np.linalg.eigh(E)
    if w[-1] <= np.finfo(float).tiny or not np.isfinite(w).all():
        raise DegenerateMetricError("overlap matrix E is numerically zero")
    keep = w > tol_rank * w[-1]
    W = V[:, keep] / np.sqrt(w[keep])
    reduced = W.conj().T @ H @ W
    scale = max(1.0, float(np.linalg.norm(reduced)))
    if np.linalg.norm(reduced - reduced.conj().T) > 1e-8 * scale:
        raise NumericalError("reduced Hamiltonian is not Hermitian; H is inconsistent with E")
    mu, Y = np.linalg.eigh(0.5 * (reduced + reduced.conj().T))
    lam = float(mu[0])

    best = None
    for k in np.flatnonzero(mu <= lam + DEGENERACY_TOL):
        v = W @ Y[:, k]
        alpha = v / math.sqrt(float(np.vdot(v, E @ v).real))
        l1 = float(np.sum(np.abs(alpha)))
        if best is None or l1 < best[0] - 1e-12:
            best = (l1, v, alpha)
    _, v, alpha = best
    alpha = _fix_phase(alpha)
    residual = float(np.linalg.norm(H @ v - lam * (E @ v)))
    return GepSolution(
        lambda_opt=lam,
        alpha=alpha,
        effective_rank=int(keep.sum()),
        p_succ_root=success_probability_root(alpha),
        p_succ_naive=success_probability_naive(alpha),
        residual=residual,
    )


# --------------------------------------------------------------------------
# Realising the jump
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class JumpResult:
    state: State
    energy: float
    p_succ_root: float
    p_succ_naive: float


def combine(phi: State, pool: JumpPool, alpha) -> np.ndarray:
    """Unnormalised ``sum_i alpha_i U_i |phi>``."""
    alpha = np.asarray(alpha, dtype=complex)
    if alpha.shape != (len(pool),):
        raise ShapeError(f"alpha has shape {alpha.shape}, pool has {len(pool)} entries")
    return alpha @ pool_states(phi, pool)


def apply_jump(
    phi: State,
    pool: JumpPool,
    alpha,
    h: DiagonalHamiltonian,
    norm_tol: float | None = 1e-8,
) -> JumpResult:
    """Apply ``M_alpha`` directly and renormalise.

    ``alpha`` is expected to satisfy ``alpha^H E alpha = 1``; pass
    ``norm_tol=None`` to accept an arbitrary scale.
    """
    v = combine(phi, pool, alpha)
    norm_sq = float(np.vdot(v, v).real)
    if math.sqrt(norm_sq) < 1e-8:
        raise DegenerateJumpError(f"combined jump vector has norm {math.sqrt(norm_sq):.3g}")
    if norm_tol is not None and abs(norm_sq - 1.0) > norm_tol:
        raise ValueError(f"alpha is not E-normalised: |M_alpha phi|^2 = {norm_sq!r}")
    state = State(phi.n_qubits, v / math.sqrt(norm_sq), check=False)
    return JumpResult(
        state=state,
        energy=expectation_diagonal(state, h),
        p_succ_root=success_probability_root(alpha),
        p_succ_naive=success_probability_naive(alpha),
    )


# --------------------------------------------------------------------------
# Ancilla-register (LCU) verification
# --------------------------------------------------------------------------

Encoding = Literal["root", "naive"]


def principal_sqrt(z: np.ndarray) -> np.ndarray:
    """Componentwise square root with the argument taken in (-pi, pi]."""
    z = np.asarray(z, dtype=complex)
    theta = np.angle(z)
    theta = np.where(theta <= -math.pi, math.pi, theta)
    return np.sqrt(np.abs(z)) * np.exp(0.5j * theta)


def ancilla_states(alpha, encoding: Encoding, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(psi, xi)`` on a ``dim``-dimensional (padded) ancilla space.

    root:  psi = sqrt(a)/sqrt(|a|_1), xi = conj(sqrt(a))/sqrt(|a|_1)
    naive: psi = a/|a|_2,            xi = uniform over the l used indices
    Padding indices carry zero amplitude in both vectors.
    """
    alpha = np.asarray(alpha, dtype=complex)
    ell = alpha.size
    psi = np.zeros(dim, dtype=complex)
    xi = np.zeros(dim, dtype=complex)
    if encoding == "root":
        s = principal_sqrt(alpha)
        l1 = float(np.sum(np.abs(alpha)))
        psi[:ell] = s / math.sqrt(l1)
        xi[:ell] = s.conj() / math.sqrt(l1)
    elif encoding == "naive":
        psi[:ell] = alpha / np.linalg.norm(alpha)
        xi[:ell] = 1.0 / math.sqrt(ell)
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
    return psi, xi


@dataclass(frozen=True)
class LcuReport:
    encoding: str
    ancilla_qubits: int
    fidelity: float
    p_succ_measured: float
    p_succ_closed_form: float
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def lcu_verify(
    phi: State,
    pool: JumpPool,
    alpha,
    encoding: Encoding = "root",
    strict: bool = True,
    fidelity_tol: float = 1e-10,
    prob_tol: float = 1e-10,
) -> LcuReport:
    """Simulate prepare / select / post-select on main + ancilla registers.

    The composite index is ``i * 2**n + x`` (ancilla in the high bits). The
    select unitary ``sum_i U_i (x) |i><i|`` acts block-diagonally; padded
    ancilla indices select the identity. Raises :class:`VerificationError`
    when ``strict`` and either check fails.
    """
    alpha = np.asarray(alpha, dtype=complex)
    ell = len(pool)
    if alpha.shape != (ell,):
        raise ShapeError(f"alpha has shape {alpha.shape}, pool has {ell} entries")
    k = max(0, math.ceil(math.log2(ell))) if ell > 1 else 0
    if phi.n_qubits + k > MAX_QUBITS:
        raise CapacityError(f"{phi.n_qubits} main + {k} ancilla qubits exceeds {MAX_QUBITS}")
    dim = 1 << k
    psi, xi = ancilla_states(alpha, encoding, dim)

    # |phi> (x) |psi>_a
    composite = psi[:, None] * phi.amplitudes[None, :]
    # select unitary
    circuits = list(pool.unitaries) + [()] * (dim - ell)
    for i, u in enumerate(circuits):
        composite[i] = apply_circuit_to_array(composite[i], phi.n_qubits, u)
    # 1 (x) <xi|_a
    projected = xi.conj() @ composite
    p_measured = float(np.vdot(projected, projected).real)

    direct = combine(phi, pool, alpha)
    metric = float(np.vdot(direct, direct).real)  # alpha^H E alpha
    if encoding == "root":
        p_closed = metric / float(np.sum(np.abs(alpha))) ** 2
    else:
        p_closed = metric / (ell * float(np.vdot(alpha, alpha).real))

    if p_measured <= 0.0 or metric <= 0.0:
        fid = 0.0
    else:
        overlap = np.vdot(direct, projected)
        fid = float(abs(overlap) ** 2 / (metric * p_measured))
    passed = fid >= 1.0 - fidelity_tol and abs(p_measured - p_closed) <= prob_tol
    report = LcuReport(encoding, k, fid, p_measured, p_closed, passed)
    if strict and not passed:
        raise VerificationError(f"LCU simulation disagrees with direct jump: {report}")
    return report
