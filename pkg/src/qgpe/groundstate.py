"""Exhaustive Ising/MIS ground-state manifolds and derived correlation PEs.

For 0 < delta < 1 the minimizers of E(b) = sum_edges b_i b_j - delta sum b_i
are exactly the maximum independent sets, so the manifold is enumerated by a
branch-and-bound over independent sets rather than all 2^N strings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

DEFAULT_EXHAUSTIVE_CAP = 30


class ManifoldCapError(ValueError):
    pass


@dataclass(frozen=True)
class GroundStateManifold:
    delta: float
    bitstrings: tuple          # tuple of length-N 0/1 tuples, sorted
    energy: float

    @property
    def size(self):
        return len(self.bitstrings)


def ising_energy(b, g: Graph, delta: float) -> float:
    """E(b) = sum_{(i,j) in E} J_ij b_i b_j - delta sum_i b_i."""
    b = tuple(int(x) for x in b)
    if len(b) != g.num_nodes:
        raise ValueError(f"bitstring length {len(b)} != N={g.num_nodes}")
    e = -delta * sum(b)
    for (u, v), w in g.weight_map().items():
        e += w * b[u] * b[v]
    return float(e)


def _all_maximum_independent_sets(adj_masks, n):
    """All maximum independent sets as bitmasks.

    Recursive enumeration with isolated-vertex peeling and connected-component
    splitting (per-component maxima combine additively, and the maximum sets
    are cross products), branching on a highest-degree vertex otherwise:
    MIS(G) = max(MIS(G - v), 1 + MIS(G - N[v])).  Memoized on the candidate
    mask, so chain-like graphs enumerate in near-linear time.
    """
    cache = {}

    def solve(cand):
        if cand == 0:
            return 0, [0]
        hit = cache.get(cand)
        if hit is not None:
            return hit
        # peel isolated candidates (no candidate neighbors): always included
        iso = 0
        rest = cand
        while rest:
            low = rest & -rest
            rest &= rest - 1
            if adj_masks[low.bit_length() - 1] & cand == 0:
                iso |= low
        live = cand & ~iso
        base = iso.bit_count()
        if live == 0:
            result = (base, [iso])
            cache[cand] = result
            return result
        # split the live subgraph into connected components
        comps = []
        work = live
        while work:
            comp = work & -work
            frontier = comp
            while frontier:
                grow = 0
                while frontier:
                    low = frontier & -frontier
                    frontier &= frontier - 1
                    grow |= adj_masks[low.bit_length() - 1] & live
                frontier = grow & ~comp
                comp |= grow & live
            comps.append(comp)
            work &= ~comp
        size = base
        sets = [iso]
        for comp in comps:
            if len(comps) == 1:
                # branch on a highest-degree vertex of the component
                v, deg = -1, -1
                scan = comp
                while scan:
                    low = scan & -scan
                    scan &= scan - 1
                    u = low.bit_length() - 1
                    d = (adj_masks[u] & comp).bit_count()
                    if d > deg:
                        v, deg = u, d
                s_out, l_out = solve(comp & ~(1 << v))
                s_in, l_in = solve(comp & ~adj_masks[v] & ~(1 << v))
                s_in += 1
                if s_in > s_out:
                    s, lst = s_in, [m | (1 << v) for m in l_in]
                elif s_out > s_in:
                    s, lst = s_out, l_out
                else:
                    s = s_in
                    lst = l_out + [m | (1 << v) for m in l_in]
            else:
                s, lst = solve(comp)
            size += s
            sets = [a | b for a in sets for b in lst]
        result = (size, sets)
        cache[cand] = result
        return result

    return solve((1 << n) - 1)


def _bits(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def ground_state_manifold(
    g: Graph, delta: float = 0.5, cap: int = DEFAULT_EXHAUSTIVE_CAP
) -> GroundStateManifold:
    """All global minimizers of E(b); for 0 < delta < 1, all maximum
    independent sets."""
    n = g.num_nodes
    if n > cap:
        raise ManifoldCapError(f"N={n} exceeds exhaustive cap {cap}")
    if 0.0 < delta < 1.0 and (
        g.edge_weights is None or all(w == 1.0 for w in g.edge_weights)
    ):
        adj_masks = [0] * n
        for u, v in g.edges:
            adj_masks[u] |= 1 << v
            adj_masks[v] |= 1 << u
        _, sets = _all_maximum_independent_sets(adj_masks, n)
        strings = sorted(
            tuple((mask >> i) & 1 for i in range(n)) for mask in sets
        )
    else:
        # general weights / delta: plain exhaustive scan
        energies = {}
        for idx in range(2**n):
            b = tuple((idx >> i) & 1 for i in range(n))
            energies[b] = ising_energy(b, g, delta)
        emin = min(energies.values())
        strings = sorted(b for b, e in energies.items() if abs(e - emin) < 1e-12)
    energy = ising_energy(strings[0], g, delta)
    return GroundStateManifold(delta=float(delta), bitstrings=tuple(strings), energy=energy)


def gs_correlation_matrix(
    g: Graph, delta: float = 0.5, cap: int = DEFAULT_EXHAUSTIVE_CAP
) -> np.ndarray:
    """C_ij = <Z_i Z_j> on the uniform ground-state superposition.

    z_i(b) = (-1)^{b_i}; C is the Gram matrix of the vectors (z_i(b))_b / sqrt
    (|H_GS|), hence PSD with unit diagonal.
    """
    manifold = ground_state_manifold(g, delta, cap)
    z = 1.0 - 2.0 * np.array(manifold.bitstrings, dtype=np.float64)  # (m, N)
    return z.T @ z / z.shape[0]


def gs_eigvec_pe(
    g: Graph, delta: float = 0.5, d: int | None = None, cap: int = DEFAULT_EXHAUSTIVE_CAP
):
    """Top-d eigenvectors of the GS correlation matrix, descending eigenvalue.

    Graphs above the exhaustive cap get an all-zero PE and above_cap=True
    instead of an error.  Returns (vectors (N, d), eigenvalues (d,), above_cap).
    """
    from .classical import sign_fix

    n = g.num_nodes
    if d is None:
        d = n
    if d > n:
        raise ValueError(f"d={d} exceeds N={n}")
    if n > cap:
        return np.zeros((n, d)), np.zeros(d), True
    C = gs_correlation_matrix(g, delta, cap)
    evals, evecs = np.linalg.eigh(C)
    order = np.argsort(evals)[::-1][:d]
    return sign_fix(evecs[:, order]), evals[order], False
