"""k-particle XY state graphs, continuous 1-/2-particle quantum walks and the
discrete 2-particle quantum-inspired walk.

The XY Hamiltonian conserves Hamming weight, so its action on the weight-k
sector is a sparse symmetric matrix over the C(N, k) size-k node subsets with
entry 2 J_ij between subsets differing by moving one particle along an edge.
Propagators reuse a dense symmetric eigendecomposition across time points.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .graph import Graph
from .petensor import PETensor


@dataclass(frozen=True)
class SubspaceOperator:
    k: int
    basis: tuple               # ordered tuple of sorted node-index tuples
    index: dict                # subset -> row
    matrix: sp.csr_matrix      # sparse real symmetric, zero diagonal

    @property
    def dim(self):
        return len(self.basis)

    def dense(self):
        return self.matrix.toarray()


def xy_subspace_hamiltonian(g: Graph, k: int) -> SubspaceOperator:
    """XY Hamiltonian restricted to the weight-k sector; for k=1 this is 2A."""
    n = g.num_nodes
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range [1, {n}]")
    basis = tuple(combinations(range(n), k))
    index = {s: r for r, s in enumerate(basis)}
    rows, cols, vals = [], [], []
    wmap = g.weight_map()
    for r, subset in enumerate(basis):
        occupied = frozenset(subset)
        for (u, v), w in wmap.items():
            # hop u -> v: u occupied, v empty (the reverse hop is generated
            # from the mirror-image basis state, keeping the matrix symmetric)
            if u in occupied and v not in occupied:
                src, dst = u, v
            elif v in occupied and u not in occupied:
                src, dst = v, u
            else:
                continue
            target = tuple(sorted((occupied - {src}) | {dst}))
            rows.append(index[target])
            cols.append(r)
            vals.append(2.0 * w)
    dim = len(basis)
    matrix = sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim))
    return SubspaceOperator(k=k, basis=basis, index=index, matrix=matrix)


class _Propagator:
    """exp(-i H t) for a real symmetric H, amortized over many t values."""

    def __init__(self, op: SubspaceOperator):
        self.evals, self.evecs = np.linalg.eigh(op.dense())

    def __call__(self, t):
        phases = np.exp(-1j * t * self.evals)
        return (self.evecs * phases) @ self.evecs.conj().T


def _initial_amplitudes(op: SubspaceOperator, g: Graph, initial):
    """Complex amplitude vector over the subspace basis for a named initial
    distribution: localized(node or pair), 'uniform_pairs', 'uniform_edges'."""
    dim = op.dim
    amps = np.zeros(dim, dtype=np.complex128)
    if initial == "uniform_pairs":
        amps[:] = 1.0 / np.sqrt(dim)
        return amps
    if initial == "uniform_edges":
        if op.k != 2:
            raise ValueError("uniform_edges initial state requires k=2")
        if g.num_edges == 0:
            raise ValueError("uniform_edges undefined on an edgeless graph")
        val = 1.0 / np.sqrt(g.num_edges)
        for e in g.edges:
            amps[op.index[e]] = val
        return amps
    # localized: a node index (k=1) or a node pair (k=2)
    key = (initial,) if np.isscalar(initial) else tuple(sorted(initial))
    if key not in op.index:
        raise ValueError(f"initial state {initial!r} not in the k={op.k} basis")
    amps[op.index[key]] = 1.0
    return amps


def cqrw_probabilities(g: Graph, k: int, t: float, initial):
    """|<basis|exp(-i H_k t)|psi_init>|^2 over the weight-k basis.

    For k=1 with initial='all' the full N x N matrix X^(1)(t) of pairwise
    transition probabilities is returned; otherwise a 1-D probability vector
    over the subspace basis, summing to 1.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    op = xy_subspace_hamiltonian(g, k)
    prop = _Propagator(op)(t)
    if k == 1 and initial == "all":
        return np.abs(prop) ** 2          # row i = start at node i
    amps = _initial_amplitudes(op, g, initial)
    probs = np.abs(prop @ amps) ** 2
    return probs


def sample_times(K: int, t_min: float = 0.1, t_max: float = np.pi, seed: int = 0):
    """K i.i.d. uniform times in [t_min, t_max], sorted; deterministic per seed."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if not 0 <= t_min < t_max:
        raise ValueError(f"invalid bounds [{t_min}, {t_max}]")
    rng = np.random.default_rng(seed)
    return np.sort(rng.uniform(t_min, t_max, K))


def qrw_pe_tensor(g: Graph, walkers: int, times, initial=None) -> PETensor:
    """Walk-family PE: identity slice then X^(n_w)(t_1) ... X^(n_w)(t_K).

    For 1 walker, entry (i, j) of slice m is the i->j transition probability
    at t_m.  For 2 walkers, entry (i, j) is the probability of observing the
    pair {i, j} at t_m starting from `initial` (default uniform_edges); the
    diagonal (repeated-node pair) is undefined in the pair basis and set to 0.
    """
    times = list(times)
    if not times:
        raise ValueError("times must be nonempty")
    if walkers not in (1, 2):
        raise ValueError("walkers must be 1 or 2")
    n = g.num_nodes
    op = xy_subspace_hamiltonian(g, walkers)
    prop = _Propagator(op)
    slices = [np.eye(n)]
    if walkers == 1:
        for t in times:
            slices.append(np.abs(prop(t)) ** 2)
    else:
        if initial is None:
            initial = "uniform_edges"
        amps = _initial_amplitudes(op, g, initial)
        for t in times:
            probs = np.abs(prop(t) @ amps) ** 2
            mat = np.zeros((n, n))
            for (a, b), p in zip(op.basis, probs):
                mat[a, b] = mat[b, a] = p
            slices.append(mat)
    values = np.stack(slices, axis=-1)
    return PETensor(
        values,
        encoding=f"qrw{walkers}",
        params={"times": [float(t) for t in times], "initial": str(initial),
                "diagonal": "zero (pair basis excludes repeated nodes)" if walkers == 2 else "return probability"},
    )


def qirw_discrete(g: Graph, K: int, initial="uniform_edges", normalization="per_step") -> PETensor:
    """Discrete 2-particle quantum-inspired walk: slice k holds
    <ij|(H_2)^k|psi_init> scattered onto (i, j) and (j, i); diagonal zero.

    initial='localized' gives each pair its own localized start, so slice k
    is the pair-basis diagonal of (H_2)^k (self-return amplitudes); the other
    modes share one initial vector across all pairs.  per_step normalization
    rescales the working vector (or matrix, Frobenius) to unit L2 norm after
    each application of H_2 (needed for large K); 'none' keeps raw powers.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    if normalization not in ("per_step", "none"):
        raise ValueError(f"unknown normalization {normalization!r}")
    n = g.num_nodes
    op = xy_subspace_hamiltonian(g, 2)
    if initial == "localized":
        state = np.eye(op.dim)
        read = np.diag
    else:
        vec = _initial_amplitudes(op, g, initial)
        if np.abs(vec.imag).max() > 0:
            raise ValueError("qirw initial amplitudes must be real")
        state = vec.real.copy()
        read = lambda v: v
    slices = []
    for k in range(K + 1):
        if k > 0:
            state = op.matrix @ state
            if normalization == "per_step":
                norm = np.linalg.norm(state)
                if norm > 0:
                    state /= norm
            elif not np.isfinite(state).all():
                raise OverflowError(f"raw qirw overflowed at step {k}; use per_step")
        mat = np.zeros((n, n))
        for (a, b), val in zip(op.basis, read(state)):
            mat[a, b] = mat[b, a] = val
        slices.append(mat)
    values = np.stack(slices, axis=-1)
    return PETensor(
        values,
        encoding="qirw2",
        params={"steps": K, "initial": str(initial), "normalization": normalization},
        normalization=normalization,
    )
