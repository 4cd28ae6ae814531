"""Independent reference computations used by the test-suite.

Nothing here calls the package's layer application or GEP code: matrices are
built from Kronecker products and ``scipy.linalg.expm``, and the GEP optimum
is found by sweeping the constraint manifold directly.
"""

import math

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_qubits(ops: dict, n: int) -> np.ndarray:
    """Operator acting with ``ops[q]`` on qubit ``q`` (little-endian: qubit 0 is the last factor)."""
    out = np.array([[1.0 + 0j]])
    for q in reversed(range(n)):
        out = np.kron(out, ops.get(q, I2))
    return out


def dense_cost_phase(energies, gamma):
    return np.diag(np.exp(1j * gamma * np.asarray(energies)))


def dense_mixer(beta, n):
    one = expm(-1j * beta * X)
    return kron_qubits({q: one for q in range(n)}, n)


def dense_rotation(axis, qubit, angle, n):
    return kron_qubits({qubit: expm(-0.5j * angle * PAULI[axis])}, n)


def dense_pauli_rotation(paulis, angle, n):
    P = kron_qubits({q: PAULI[c] for q, c in enumerate(paulis)}, n)
    return expm(-0.5j * angle * P)


def maxcut_energies_loop(n, edges):
    """Per-basis-state evaluation, edge by edge."""
    out = []
    for x in range(1 << n):
        e = 0.0
        for u, v, w in edges:
            zu = 1 if not (x >> u) & 1 else -1
            zv = 1 if not (x >> v) & 1 else -1
            e += w * (zu * zv - 1) / 2
        out.append(e)
    return np.array(out)


def maxcut_exhaustive(n, edges):
    best = 0.0
    for x in range(1 << n):
        cut = sum(w for u, v, w in edges if ((x >> u) & 1) != ((x >> v) & 1))
        best = max(best, cut)
    return best


def single_edge_energy(gamma, beta):
    return -0.5 - 0.5 * math.sin(4 * beta) * math.sin(gamma)


def single_edge_gradient(gamma, beta):
    return np.array([
        -0.5 * math.sin(4 * beta) * math.cos(gamma),
        -2.0 * math.cos(4 * beta) * math.sin(gamma),
    ])


def dense_qaoa_energy_single_edge(gamma, beta):
    energies = np.array([0.0, -1.0, -1.0, 0.0])
    psi = np.full(4, 0.5, dtype=complex)
    psi = dense_mixer(beta, 2) @ (dense_cost_phase(energies, gamma) @ psi)
    return float(np.abs(psi) ** 2 @ energies)


def gep_sweep_2x2(E, H, n_theta=241, n_phi=241):
    """min a^H H a  s.t.  a^H E a = 1 for 2x2 pencils.

    Parameterise a = (cos t, sin t e^{i f}) up to scale and global phase, scan
    (t, f) on a grid, then polish the best grid point with Nelder-Mead.
    Returns (value, normalised alpha).
    """

    def rq(x):
        t, f = x
        a = np.array([math.cos(t), math.sin(t) * np.exp(1j * f)])
        den = float(np.real(a.conj() @ E @ a))
        if den <= 1e-14:
            return np.inf
        return float(np.real(a.conj() @ H @ a)) / den

    ts = np.linspace(0, math.pi, n_theta)
    fs = np.linspace(0, 2 * math.pi, n_phi)
    best = min(((rq((t, f)), t, f) for t in ts for f in fs), key=lambda r: r[0])
    res = minimize(rq, x0=[best[1], best[2]], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
    t, f = res.x
    a = np.array([math.cos(t), math.sin(t) * np.exp(1j * f)])
    a = a / math.sqrt(float(np.real(a.conj() @ E @ a)))
    return float(res.fun), a


def random_state_vector(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def random_unitary(rng, dim):
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    Q, R = np.linalg.qr(A)
    return Q * (np.diag(R) / np.abs(np.diag(R)))
