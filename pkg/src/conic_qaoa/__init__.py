"""Statevector QAOA with conic (linear-combination-of-unitaries) jumps."""

from .errors import *  # noqa: F401,F403
from .statevector import (
    CostPhase,
    MixerX,
    PauliStringRotation,
    SingleQubitRotation,
    State,
    SubnormalizedState,
    apply_layer,
    expectation_diagonal,
    inner_product,
    sample_bitstrings,
    uniform_superposition,
)
from .problem import DiagonalHamiltonian, Graph, brute_force_ground, maxcut_hamiltonian, parse_graph
from .qaoa import OptimizerConfig, OptTrace, QaoaParams, landscape, optimize, qaoa_energy, qaoa_gradient, qaoa_state
from .conic import (
    GepSolution,
    JumpPool,
    MomentPair,
    PoolSpec,
    apply_jump,
    build_pool,
    lcu_verify,
    moment_matrices,
    solve_gep,
)

__version__ = "0.1.0"
