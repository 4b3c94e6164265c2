"""Classical baseline positional encodings: RRWP, RWSE, Laplacian
eigenvectors and shortest-path distances."""

from __future__ import annotations

from collections import deque

import numpy as np

from .graph import Graph, laplacian, random_walk_matrix
from .petensor import PETensor


def rrwp(g: Graph, K: int) -> PETensor:
    """Relative random-walk probabilities: slice k = (D^-1 A)^k, k = 0..K-1."""
    if K < 1:
        raise ValueError("K must be >= 1")
    M = random_walk_matrix(g)
    slices = np.empty((g.num_nodes, g.num_nodes, K))
    power = np.eye(g.num_nodes)
    for k in range(K):
        slices[:, :, k] = power
        power = power @ M
    return PETensor(slices, encoding="rrwp", params={"steps": K})


def rwse(g: Graph, K: int) -> np.ndarray:
    """Return-probability rows: rwse[i, k] = ((D^-1 A)^k)_{ii}."""
    t = rrwp(g, K)
    n = g.num_nodes
    return t.values[np.arange(n), np.arange(n), :].copy()


def sign_fix(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-|.|-entry is positive (ties: lowest index)."""
    fixed = vectors.copy()
    for c in range(fixed.shape[1]):
        col = fixed[:, c]
        idx = np.argmax(np.abs(np.round(col, 12)))
        if col[idx] < 0:
            fixed[:, c] = -col
    return fixed


def laplacian_eigvecs(g: Graph, d: int, mode="combinatorial"):
    """First d Laplacian eigenvectors by ascending eigenvalue, sign-fixed.

    Returns (vectors (N, d), eigenvalues (d,), degenerate_flags (d,)); a flag
    marks columns inside a numerically degenerate cluster (gap < 1e-9), for
    which no rotation canonicalization is attempted.
    """
    if d > g.num_nodes:
        raise ValueError(f"d={d} exceeds N={g.num_nodes}")
    L = laplacian(g, mode)
    evals, evecs = np.linalg.eigh(L)
    vecs = sign_fix(evecs[:, :d])
    vals = evals[:d]
    degenerate = np.zeros(d, dtype=bool)
    for c in range(d):
        lo = evals[c - 1] if c > 0 else None
        hi = evals[c + 1] if c + 1 < len(evals) else None
        if (lo is not None and abs(evals[c] - lo) < 1e-9) or (
            hi is not None and abs(hi - evals[c]) < 1e-9
        ):
            degenerate[c] = True
    return vecs, vals, degenerate


def spd_matrix(g: Graph) -> np.ndarray:
    """BFS shortest-path distances; disconnected pairs get sentinel N."""
    n = g.num_nodes
    adj = [[] for _ in range(n)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    dist = np.full((n, n), n, dtype=np.int64)
    for s in range(n):
        dist[s, s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if dist[s, v] == n and v != s:
                    dist[s, v] = dist[s, u] + 1
                    queue.append(v)
    return dist
