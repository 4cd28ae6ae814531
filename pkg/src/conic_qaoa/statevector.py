"""
Dense statevector simulation.

Bit ordering is little-endian: qubit ``q`` is bit ``q`` of the basis index,
so ``index = sum_q b_q * 2**q``. When a bitstring is printed with
:func:`bitstring`, qubit 0 is the rightmost character.

Conventions for the layer kinds:

* ``CostPhase(gamma)`` applies the QAOA phase separator ``exp(-i gamma C)``
  where ``C = -H`` is the objective being maximised (the cut weight for
  MaxCut). On amplitudes this is ``psi[x] *= exp(+i gamma E(x))``.
* ``MixerX(beta)`` applies ``exp(-i beta X)`` to every qubit.
* ``SingleQubitRotation(axis, q, theta)`` is ``exp(-i theta/2 P_q)``.
* ``PauliStringRotation(paulis, theta)`` is ``exp(-i theta/2 P)``; character
  ``k`` of ``paulis`` acts on qubit ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence, Union

import numpy as np

from .errors import CapacityError, DescriptorError, ShapeError

if TYPE_CHECKING:
    from .problem import DiagonalHamiltonian

MAX_QUBITS = 20
NORM_TOL = 1e-10


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
        raise CapacityError(f"qubit count must be in [1, {MAX_QUBITS}], got {n!r}")


class State:
    """Unit-norm complex amplitude vector over ``n_qubits`` qubits.

    The amplitude array is made read-only so states can be shared freely.
    """

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes, *, check: bool = True):
        _check_n(n_qubits)
        amps = np.array(amplitudes, dtype=np.complex128)
        if amps.shape != (1 << n_qubits,):
            raise ShapeError(
                f"expected {1 << n_qubits} amplitudes for {n_qubits} qubits, got shape {amps.shape}"
            )
        if check:
            norm = float(np.linalg.norm(amps))
            if not abs(norm - 1.0) <= NORM_TOL:
                raise ValueError(f"state is not normalised (norm {norm!r})")
        amps.flags.writeable = False
        self.n_qubits = int(n_qubits)
        self.amplitudes = amps

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> "State":
        _check_n(n_qubits)
        if not 0 <= index < (1 << n_qubits):
            raise ShapeError(f"basis index {index} out of range for {n_qubits} qubits")
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n_qubits, amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __repr__(self) -> str:
        return f"State(n_qubits={self.n_qubits})"


class SubnormalizedState:
    """Result of a projection. Carries ``norm_sq``; never renormalised implicitly."""

    __slots__ = ("n_qubits", "amplitudes", "norm_sq")

    def __init__(self, n_qubits: int, amplitudes):
        _check_n(n_qubits)
        amps = np.array(amplitudes, dtype=np.complex128)
        if amps.shape != (1 << n_qubits,):
            raise ShapeError(f"expected {1 << n_qubits} amplitudes, got shape {amps.shape}")
        amps.flags.writeable = False
        self.n_qubits = int(n_qubits)
        self.amplitudes = amps
        self.norm_sq = float(np.vdot(amps, amps).real)

    def normalized(self) -> State:
        if self.norm_sq <= 0.0:
            raise ValueError("cannot normalise the zero vector")
        return State(self.n_qubits, self.amplitudes / math.sqrt(self.norm_sq), check=False)

    def __repr__(self) -> str:
        return f"SubnormalizedState(n_qubits={self.n_qubits}, norm_sq={self.norm_sq:.6g})"


# --------------------------------------------------------------------------
# Layer descriptors
# --------------------------------------------------------------------------


def _finite(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DescriptorError(f"{what} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class CostPhase:
    gamma: float
    hamiltonian: "DiagonalHamiltonian"

    def __post_init__(self):
        object.__setattr__(self, "gamma", _finite(self.gamma, "gamma"))


@dataclass(frozen=True)
class MixerX:
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "beta", _finite(self.beta, "beta"))


@dataclass(frozen=True)
class SingleQubitRotation:
    axis: str
    qubit: int
    angle: float

    def __post_init__(self):
        if self.axis not in ("X", "Y", "Z"):
            raise DescriptorError(f"rotation axis must be X, Y or Z, got {self.axis!r}")
        if int(self.qubit) != self.qubit or self.qubit < 0:
            raise DescriptorError(f"invalid qubit index {self.qubit!r}")
        object.__setattr__(self, "qubit", int(self.qubit))
        object.__setattr__(self, "angle", _finite(self.angle, "angle"))


@dataclass(frozen=True)
class PauliStringRotation:
    paulis: str
    angle: float

    def __post_init__(self):
        if not self.paulis or set(self.paulis) - set("IXYZ"):
            raise DescriptorError(f"invalid Pauli string {self.paulis!r}")
        object.__setattr__(self, "angle", _finite(self.angle, "angle"))


Layer = Union[CostPhase, MixerX, SingleQubitRotation, PauliStringRotation]
Circuit = tuple  # tuple[Layer, ...]; the empty tuple is the identity


def _apply_cost_phase(amps: np.ndarray, n: int, layer: CostPhase) -> np.ndarray:
    h = layer.hamiltonian
    if h.n_qubits != n:
        raise DescriptorError(f"CostPhase Hamiltonian acts on {h.n_qubits} qubits, state has {n}")
    return amps * np.exp(1j * layer.gamma * h.energies)


def _apply_mixer(amps: np.ndarray, n: int, beta: float) -> np.ndarray:
    c, s = math.cos(beta), -1j * math.sin(beta)
    out = amps.copy()
    for q in range(n):
        view = out.reshape(-1, 2, 1 << q)
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :]
        view[:, 0, :] = c * a0 + s * a1
        view[:, 1, :] = c * a1 + s * a0
    return out


def _pauli_action(amps: np.ndarray, n: int, paulis: dict[int, str]) -> np.ndarray:
    """Return ``P @ amps`` for a Pauli product given as ``{qubit: 'X'|'Y'|'Z'}``."""
    idx = np.arange(1 << n)
    flip = 0
    phase = np.ones(1 << n, dtype=np.complex128)
    for q, p in paulis.items():
        bit = (idx >> q) & 1
        sign = 1 - 2 * bit
        if p in "XY":
            flip |= 1 << q
        if p == "Z":
            phase *= sign
        elif p == "Y":
            phase *= 1j * sign
    out = np.empty_like(amps)
    out[idx ^ flip] = phase * amps
    return out


def _apply_pauli_rotation(amps: np.ndarray, n: int, paulis: dict[int, str], angle: float) -> np.ndarray:
    if not paulis:
        return amps * np.exp(-0.5j * angle)
    return math.cos(angle / 2) * amps - 1j * math.sin(angle / 2) * _pauli_action(amps, n, paulis)


def apply_layer_to_array(amps: np.ndarray, n: int, layer: Layer) -> np.ndarray:
    """Apply ``layer`` to a raw (not necessarily normalised) amplitude vector."""
    amps = np.asarray(amps, dtype=np.complex128)
    if amps.shape != (1 << n,):
        raise ShapeError(f"expected {1 << n} amplitudes, got shape {amps.shape}")
    if isinstance(layer, CostPhase):
        return _apply_cost_phase(amps, n, layer)
    if isinstance(layer, MixerX):
        return _apply_mixer(amps, n, layer.beta)
    if isinstance(layer, SingleQubitRotation):
        if layer.qubit >= n:
            raise DescriptorError(f"qubit {layer.qubit} out of range for {n} qubits")
        return _apply_pauli_rotation(amps, n, {layer.qubit: layer.axis}, layer.angle)
    if isinstance(layer, PauliStringRotation):
        if len(layer.paulis) != n:
            raise DescriptorError(f"Pauli string {layer.paulis!r} has length != {n}")
        paulis = {q: p for q, p in enumerate(layer.paulis) if p != "I"}
        return _apply_pauli_rotation(amps, n, paulis, layer.angle)
    raise DescriptorError(f"unknown layer {layer!r}")


def apply_layer(state: State, layer: Layer) -> State:
    return State(state.n_qubits, apply_layer_to_array(state.amplitudes, state.n_qubits, layer), check=False)


def apply_circuit_to_array(amps: np.ndarray, n: int, circuit: Sequence[Layer]) -> np.ndarray:
    amps = np.asarray(amps, dtype=np.complex128)
    for layer in circuit:
        amps = apply_layer_to_array(amps, n, layer)
    return amps


def apply_circuit(state: State, circuit: Sequence[Layer]) -> State:
    return State(
        state.n_qubits,
        apply_circuit_to_array(state.amplitudes, state.n_qubits, circuit),
        check=False,
    )


def layer_matrix(layer: Layer, n: int) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix of ``layer``, built column by column."""
    dim = 1 << n
    return np.column_stack([apply_layer_to_array(np.eye(dim, dtype=complex)[:, k], n, layer) for k in range(dim)])


# --------------------------------------------------------------------------
# Operations
# --------------------------------------------------------------------------


def uniform_superposition(n: int) -> State:
    _check_n(n)
    dim = 1 << n
    return State(n, np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128), check=False)


def _same_size(a, b) -> None:
    if a.n_qubits != b.n_qubits:
        raise ShapeError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")


def inner_product(a: State, b: State) -> complex:
    """``<a|b>``, conjugating the first argument."""
    _same_size(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: State, b: State) -> float:
    return abs(inner_product(a, b)) ** 2


def expectation_diagonal(state: State, h: "DiagonalHamiltonian") -> float:
    _same_size(state, h)
    return float(np.dot(np.abs(state.amplitudes) ** 2, h.energies))


def sample_bitstrings(state: State, shots: int, seed: int) -> np.ndarray:
    """Draw ``shots`` basis indices i.i.d. from the Born distribution.

    Returns a sorted integer array, i.e. a canonical form of the multiset.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    probs = state.probabilities()
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(probs.size, size=shots, p=probs))


def bitstring(index: int, n: int) -> str:
    return format(int(index), f"0{n}b")
