"""Full 2^N statevector simulation of layered graph states.

Basis convention: bit i of the amplitude index addresses qubit i
(little-endian); |0> is the Z = +1 eigenstate.  The layered state applies
exp(-i theta_0 H_M), then alternately exp(-i t_k H_G), exp(-i theta_k H_M),
with the rightmost factor acting on psi_0 first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .graph import Graph

DEFAULT_QUBIT_CAP = 20


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class QuantumState:
    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2**self.num_qubits,):
            raise SimulationError(
                f"amplitude vector length {amps.shape} != 2^{self.num_qubits}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-10:
            raise SimulationError(f"state not normalized: |psi| = {norm}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


def zero_state(n: int) -> QuantumState:
    """|0...0> on n qubits."""
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = 1.0
    return QuantumState(amps, n)


def basis_state(bits, n: int) -> QuantumState:
    """Computational basis state |b> with b given as an iterable of bits."""
    idx = sum((1 << i) for i, b in enumerate(bits) if b)
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[idx] = 1.0
    return QuantumState(amps, n)


@dataclass(frozen=True)
class EvolutionParams:
    """Layer schedule (theta_0, t_1, theta_1, ..., t_p, theta_p).

    mixing: 'sum_y' or 'sum_x' single-qubit mixing Hamiltonian.
    hamiltonian: 'ising' (ZZ with optional onsite -delta * sum Z), 'ising_mis'
    (the occupation-number cost diagonal E(b) = sum_edges J_ij b_i b_j
    - delta sum_i b_i, b_i = occupation of qubit i), or 'xy'.
    occupation: 'minus_z' for n = (I-Z)/2 (occupied = |1>), 'plus_z' for
    n = (I+Z)/2.  The flag selects the convention for both the cost diagonal
    and the measured occupations; the default combination (minus_z,
    ising_mis, psi0=|0..0>, schedule (theta, t, -theta)) is the one that
    reproduces the closed-form occupation covariance.  On a fixed state,
    cov(n_i, n_j) = cov(1-n_i, 1-n_j), but flipping the convention also
    changes the cost landscape and hence the evolved state.
    """

    schedule: tuple
    mixing: str = "sum_y"
    hamiltonian: str = "ising"
    delta: float = 0.0
    occupation: str = "minus_z"

    def __post_init__(self):
        sched = tuple(float(x) for x in self.schedule)
        if len(sched) < 3 or len(sched) % 2 == 0:
            raise SimulationError(
                f"schedule must have odd length 2p+1 >= 3, got {len(sched)}"
            )
        object.__setattr__(self, "schedule", sched)
        if self.mixing not in ("sum_y", "sum_x"):
            raise SimulationError(f"unknown mixing {self.mixing!r}")
        if self.hamiltonian not in ("ising", "ising_mis", "xy"):
            raise SimulationError(f"unknown hamiltonian {self.hamiltonian!r}")
        if self.occupation not in ("plus_z", "minus_z"):
            raise SimulationError(f"unknown occupation convention {self.occupation!r}")

    @property
    def layers(self):
        return (len(self.schedule) - 1) // 2


def _apply_single_qubit(amps, qubit, gate):
    """In-place application of a 2x2 gate to one qubit (little-endian)."""
    n = int(np.log2(amps.size))
    shaped = amps.reshape(2 ** (n - 1 - qubit), 2, 2**qubit)
    shaped[:] = np.einsum("ab,ibj->iaj", gate, shaped)


def _z_values(n):
    """(2^n, n) array of Z eigenvalues: +1 for bit 0, -1 for bit 1."""
    idx = np.arange(2**n)
    bits = (idx[:, None] >> np.arange(n)[None, :]) & 1
    return 1.0 - 2.0 * bits


def ising_diagonal(g: Graph, delta: float) -> np.ndarray:
    """Diagonal of sum_edges J_ij Z_i Z_j - delta sum_i Z_i in the Z basis."""
    z = _z_values(g.num_nodes)
    diag = np.zeros(2**g.num_nodes)
    for (u, v), w in g.weight_map().items():
        diag += w * z[:, u] * z[:, v]
    diag -= delta * z.sum(axis=1)
    return diag


def _occupation_values(n, occupation):
    """(2^n, n) array of n_i values per basis state, 0/1."""
    z = _z_values(n)
    return 0.5 * (1.0 - z) if occupation == "minus_z" else 0.5 * (1.0 + z)


def mis_cost_diagonal(g: Graph, delta: float, occupation="minus_z") -> np.ndarray:
    """Diagonal of E(b) = sum_edges J_ij b_i b_j - delta sum_i b_i.

    b_i is the occupation number of qubit i under the chosen convention; this
    is the maximum-independent-set cost operator for 0 < delta < 1.
    """
    b = _occupation_values(g.num_nodes, occupation)
    diag = np.zeros(2**g.num_nodes)
    for (u, v), w in g.weight_map().items():
        diag += w * b[:, u] * b[:, v]
    diag -= delta * b.sum(axis=1)
    return diag


def xy_hamiltonian_sparse(g: Graph) -> sp.csr_matrix:
    """sum_edges J_ij (X_i X_j + Y_i Y_j) as a sparse 2^N matrix."""
    n = g.num_nodes
    dim = 2**n
    idx = np.arange(dim)
    rows, cols, vals = [], [], []
    for (u, v), w in g.weight_map().items():
        bu = (idx >> u) & 1
        bv = (idx >> v) & 1
        mask = bu != bv
        src = idx[mask]
        dst = src ^ (1 << u) ^ (1 << v)
        rows.append(dst)
        cols.append(src)
        vals.append(np.full(src.size, 2.0 * w))
    if not rows:
        return sp.csr_matrix((dim, dim))
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    )


def build_graph_state(
    g: Graph, params: EvolutionParams, psi0: QuantumState | None = None, cap=DEFAULT_QUBIT_CAP
) -> QuantumState:
    """Layered evolution of psi0 under alternating mixing / graph Hamiltonians."""
    n = g.num_nodes
    if n > cap:
        raise SimulationError(f"N={n} exceeds simulation cap {cap}")
    if psi0 is None:
        psi0 = zero_state(n)
    if psi0.num_qubits != n:
        raise SimulationError("psi0 qubit count does not match graph")
    amps = psi0.amplitudes.astype(np.complex128).copy()

    def mix(theta):
        c, s = np.cos(theta), np.sin(theta)
        if params.mixing == "sum_y":
            gate = np.array([[c, -s], [s, c]], dtype=np.complex128)   # exp(-i theta Y)
        else:
            gate = np.array([[c, -1j * s], [-1j * s, c]])             # exp(-i theta X)
        for q in range(n):
            _apply_single_qubit(amps, q, gate)

    if params.hamiltonian in ("ising", "ising_mis"):
        diag = (
            ising_diagonal(g, params.delta)
            if params.hamiltonian == "ising"
            else mis_cost_diagonal(g, params.delta, params.occupation)
        )

        def graph_evolve(t):
            amps[:] = amps * np.exp(-1j * t * diag)
    else:
        h_xy = xy_hamiltonian_sparse(g)

        def graph_evolve(t):
            amps[:] = expm_multiply(-1j * t * h_xy, amps)

    sched = params.schedule
    mix(sched[0])
    for k in range(params.layers):
        graph_evolve(sched[1 + 2 * k])
        mix(sched[2 + 2 * k])
    amps /= np.linalg.norm(amps)
    return QuantumState(amps, n)


_FLIP = {"X": True, "Y": True, "Z": False}


def _apply_pauli(amps, qubit, pauli):
    out = amps.copy()
    if pauli == "Z":
        bit = ((np.arange(amps.size) >> qubit) & 1).astype(bool)
        out[bit] *= -1.0
        return out
    gate = (
        np.array([[0, 1], [1, 0]], dtype=np.complex128)
        if pauli == "X"
        else np.array([[0, -1j], [1j, 0]])
    )
    _apply_single_qubit(out, qubit, gate)
    return out


def pauli_expectation(psi: QuantumState, pstring: dict) -> float:
    """<psi| P |psi> for a sparse Pauli string {qubit: 'X'|'Y'|'Z'}."""
    amps = psi.amplitudes.copy()
    for qubit, pauli in pstring.items():
        if not (0 <= qubit < psi.num_qubits):
            raise SimulationError(f"qubit index {qubit} out of range")
        if pauli not in _FLIP:
            raise SimulationError(f"unknown Pauli {pauli!r}")
        amps = _apply_pauli(amps, qubit, pauli)
    return float(np.real(np.vdot(psi.amplitudes, amps)))


# listed order of the 9-component two-body correlator vector
CORRELATOR_ORDER = ("ZZ", "XX", "YY", "XZ", "XY", "YZ", "xZ", "xY", "yZ")


def correlator_vector(psi: QuantumState, i: int, j: int) -> np.ndarray:
    """Nine two-body Pauli expectations for qubits i != j.

    Order: Z_iZ_j, X_iX_j, Y_iY_j, X_iZ_j, X_iY_j, Y_iZ_j,
    X_jZ_i, X_jY_i, Y_jZ_i.
    """
    if i == j:
        raise SimulationError("correlator_vector requires i != j")
    pairs = [
        {i: "Z", j: "Z"},
        {i: "X", j: "X"},
        {i: "Y", j: "Y"},
        {i: "X", j: "Z"},
        {i: "X", j: "Y"},
        {i: "Y", j: "Z"},
        {j: "X", i: "Z"},
        {j: "X", i: "Y"},
        {j: "Y", i: "Z"},
    ]
    return np.array([pauli_expectation(psi, p) for p in pairs])


def occupation_covariance_bruteforce(
    g: Graph,
    theta: float,
    t: float,
    delta: float,
    occupation: str = "minus_z",
    psi0: QuantumState | None = None,
    cap=DEFAULT_QUBIT_CAP,
) -> np.ndarray:
    """Covariance of occupation numbers on the p=1 Ising graph state.

    Uses the schedule (theta_0, t_1, theta_1) = (theta, t, -theta), i.e. the
    state exp(+i theta H_M) exp(-i t H_G) exp(-i theta H_M) |psi_0>, with
    H_M = sum_i Y_i and H_G the occupation cost E(b) = sum_edges J_ij b_i b_j
    - delta sum_i b_i.  The occupation flag selects the convention for both
    the cost diagonal and the measured occupations; the closed form is
    reproduced by the default 'minus_z'.
    """
    n = g.num_nodes
    params = EvolutionParams(
        schedule=(theta, t, -theta),
        mixing="sum_y",
        hamiltonian="ising_mis",
        delta=delta,
        occupation=occupation,
    )
    psi = build_graph_state(g, params, psi0, cap=cap)
    probs = np.abs(psi.amplitudes) ** 2
    occ = _occupation_values(n, occupation)
    means = probs @ occ                          # <n_i>
    second = (probs[:, None] * occ).T @ occ      # <n_i n_j> (occ diagonal in Z basis)
    cov = second - np.outer(means, means)
    return 0.5 * (cov + cov.T)
