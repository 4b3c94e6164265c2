"""Toy graph-transformer layer with quantum-correlation attention.

The attention matrix is A(theta)_ij = gamma^T C_ij where C_ij is the
9-component two-body Pauli correlator vector of the evolved graph state
(see :func:`qgpe.quantum.correlator_vector`).  The layer update is
H' = sigma((A H || H) W).  Gradients with respect to any single evolution
angle are trigonometric polynomials with integer frequencies, so they can
be recovered exactly from finitely many evaluations (a generalized
parameter-shift rule); :func:`spectral_gradient` implements that.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .quantum import (
    DEFAULT_QUBIT_CAP,
    EvolutionParams,
    SimulationError,
    build_graph_state,
    correlator_vector,
)

__all__ = [
    "AttentionConfig",
    "quantum_attention_matrix",
    "gtqc_layer_forward",
    "spectral_gradient",
    "random_heads",
]

# i = j limit of the correlator vector: <Z^2> = <X^2> = <Y^2> = 1, the six
# mixed cross-terms have no single-site analogue and are excluded.
_DIAGONAL_CORRELATOR = np.array([1.0, 1.0, 1.0, 0, 0, 0, 0, 0, 0])


@dataclass(frozen=True)
class AttentionConfig:
    """gamma weights, softmax flag and per-head evolution parameters."""

    gamma: tuple
    head_params: tuple  # one EvolutionParams per head
    softmax: bool = False

    def __post_init__(self):
        gamma = tuple(float(x) for x in self.gamma)
        if len(gamma) != 9:
            raise ValueError(f"gamma must have 9 components, got {len(gamma)}")
        object.__setattr__(self, "gamma", gamma)
        if len(self.head_params) < 1:
            raise ValueError("need at least one head")
        for p in self.head_params:
            if not isinstance(p, EvolutionParams):
                raise TypeError("head_params must hold EvolutionParams")

    @property
    def heads(self) -> int:
        return len(self.head_params)


def quantum_attention_matrix(
    g: Graph, params: EvolutionParams, gamma, softmax: bool = False
) -> np.ndarray:
    """A_ij = gamma^T . correlator_vector(psi_G(theta), i, j).

    Diagonal entries use the i=j limit (1, 1, 1, 0, ..., 0).  With
    ``softmax=True`` a row-wise softmax is applied afterwards.
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    if gamma.shape != (9,):
        raise ValueError(f"gamma must have shape (9,), got {gamma.shape}")
    n = g.num_nodes
    psi = build_graph_state(g, params)
    a = np.empty((n, n))
    np.fill_diagonal(a, gamma @ _DIAGONAL_CORRELATOR)
    for i in range(n):
        for j in range(i + 1, n):
            a[i, j] = gamma @ correlator_vector(psi, i, j)
            a[j, i] = gamma @ correlator_vector(psi, j, i)
    if softmax:
        a = np.exp(a - a.max(axis=1, keepdims=True))
        a /= a.sum(axis=1, keepdims=True)
    return a


def gtqc_layer_forward(h: np.ndarray, a, w: np.ndarray, activation=None) -> np.ndarray:
    """H' = activation((A H || H) W), concatenated over heads.

    ``a`` is a single N x N attention matrix or a sequence of them (one per
    head); ``w`` is 2d x d_h, shared across heads.  Multi-head outputs are
    concatenated column-wise.  ``activation=None`` means identity.
    """
    h = np.asarray(h, dtype=np.float64)
    if h.ndim != 2:
        raise ValueError(f"H must be 2-d, got shape {h.shape}")
    heads = [np.asarray(m, dtype=np.float64) for m in (a if isinstance(a, (list, tuple)) else [a])]
    n, d = h.shape
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != 2 * d:
        raise ValueError(f"W must have shape (2d, d_h) = ({2 * d}, *), got {w.shape}")
    outs = []
    for m in heads:
        if m.shape != (n, n):
            raise ValueError(f"attention matrix shape {m.shape} != ({n}, {n})")
        z = np.hstack([m @ h, h]) @ w
        outs.append(z if activation is None else activation(z))
    return np.hstack(outs)


def spectral_gradient(f, n_freq: int):
    """Derivative of a trigonometric polynomial of degree ``n_freq``.

    f(theta) = sum_{w=0}^{n_freq} a_w sin(w theta) + b_w cos(w theta) is
    sampled at 2 n_freq + 1 equispaced points in [0, 2 pi); the coefficient
    system is solved once and the analytic derivative is returned as a
    callable.  Raises SimulationError if the sample system is
    ill-conditioned (which cannot happen for equispaced points unless
    n_freq < 0 or f returns non-finite values).
    """
    if n_freq < 0:
        raise ValueError(f"n_freq must be >= 0, got {n_freq}")
    npts = 2 * n_freq + 1
    thetas = 2.0 * np.pi * np.arange(npts) / npts
    omegas = np.arange(n_freq + 1)
    # design matrix: [sin(w th) for w>=1 | cos(w th) for w>=0]
    design = np.hstack(
        [np.sin(np.outer(thetas, omegas[1:])), np.cos(np.outer(thetas, omegas))]
    )
    vals = np.array([float(f(th)) for th in thetas])
    if not np.all(np.isfinite(vals)):
        raise SimulationError("f returned non-finite values")
    cond = np.linalg.cond(design)
    if not np.isfinite(cond) or cond > 1e8:
        raise SimulationError(
            f"trigonometric sample system ill-conditioned (cond={cond:.2e}); "
            "increase the number of sample points"
        )
    coeffs = np.linalg.solve(design, vals)
    a = coeffs[:n_freq]  # sin coefficients, w = 1..n_freq
    b = coeffs[n_freq:]  # cos coefficients, w = 0..n_freq

    def df(theta: float) -> float:
        th = float(theta)
        w = omegas[1:]
        return float(np.dot(a * w, np.cos(w * th)) - np.dot(b[1:] * w, np.sin(w * th)))

    return df


def random_heads(
    g: Graph,
    n_heads: int,
    seed: int,
    gamma=None,
    softmax: bool = False,
    layers: int = 1,
    delta: float = 0.0,
) -> list:
    """Attention matrices for i.i.d. uniform-angle parameter draws.

    Each head draws a schedule (theta_0, t_1, theta_1, ..., t_p, theta_p)
    with every entry uniform in [0, 2 pi); deterministic per seed.
    """
    if n_heads < 1:
        raise ValueError(f"n_heads must be >= 1, got {n_heads}")
    if g.num_nodes > DEFAULT_QUBIT_CAP:
        raise SimulationError(f"N={g.num_nodes} exceeds qubit cap {DEFAULT_QUBIT_CAP}")
    if gamma is None:
        gamma = np.eye(9)[0]
    rng = np.random.default_rng(seed)
    mats = []
    for _ in range(n_heads):
        schedule = tuple(rng.uniform(0.0, 2.0 * np.pi, size=2 * layers + 1))
        params = EvolutionParams(
            schedule=schedule, mixing="sum_y", hamiltonian="ising_mis", delta=delta
        )
        mats.append(quantum_attention_matrix(g, params, gamma, softmax=softmax))
    return mats
