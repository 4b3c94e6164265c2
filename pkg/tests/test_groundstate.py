import itertools

import numpy as np
import pytest

from qgpe.graph import Graph, permutation_matrix, permute
from qgpe.groundstate import (
    GroundStateManifold,
    ManifoldCapError,
    gs_correlation_matrix,
    gs_eigvec_pe,
    ground_state_manifold,
    ising_energy,
)


def rand_graph(rng, n, p=0.4):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, tuple(edges))


def exhaustive_manifold(g, delta):
    n = g.num_nodes
    energies = {
        b: ising_energy(b, g, delta) for b in itertools.product((0, 1), repeat=n)
    }
    emin = min(energies.values())
    return sorted(b for b, e in energies.items() if abs(e - emin) < 1e-12)


def is_independent_set(g, b):
    return all(not (b[u] and b[v]) for u, v in g.edges)


def test_ising_energy_values():
    g = Graph(3, ((0, 1), (1, 2)))
    assert ising_energy((0, 0, 0), g, 0.5) == 0.0
    assert ising_energy((1, 0, 1), g, 0.5) == -1.0
    assert ising_energy((1, 1, 0), g, 0.5) == 0.0  # edge penalty cancels delta


def test_manifold_matches_exhaustive_scan():
    rng = np.random.default_rng(4)
    for _ in range(25):
        g = rand_graph(rng, int(rng.integers(2, 11)))
        m = ground_state_manifold(g, 0.5)
        assert list(m.bitstrings) == exhaustive_manifold(g, 0.5)


def test_manifold_members_are_maximum_independent_sets():
    rng = np.random.default_rng(8)
    for _ in range(15):
        g = rand_graph(rng, int(rng.integers(3, 12)))
        m = ground_state_manifold(g, 0.5)
        sizes = {sum(b) for b in m.bitstrings}
        assert len(sizes) == 1
        alpha = sizes.pop()
        for b in m.bitstrings:
            assert is_independent_set(g, b)
        # no independent set is larger
        for b in itertools.product((0, 1), repeat=g.num_nodes):
            if is_independent_set(g, b):
                assert sum(b) <= alpha


def test_general_delta_uses_exhaustive_route():
    # delta > 1: occupying both ends of an edge can pay off
    g = Graph(2, ((0, 1),))
    m = ground_state_manifold(g, 3.0)
    assert m.bitstrings == ((1, 1),)


def test_weighted_graph_exhaustive_route():
    g = Graph(3, ((0, 1), (1, 2)), edge_weights=(0.1, 5.0))
    m = ground_state_manifold(g, 0.5)
    assert list(m.bitstrings) == exhaustive_manifold(g, 0.5)


def test_cap_raises():
    g = Graph(31, tuple((i, i + 1) for i in range(30)))
    with pytest.raises(ManifoldCapError):
        ground_state_manifold(g, 0.5)


def test_triangle_correlation_matrix():
    g = Graph(3, ((0, 1), (1, 2), (0, 2)))
    c = gs_correlation_matrix(g)
    want = np.full((3, 3), -1.0 / 3.0)
    np.fill_diagonal(want, 1.0)
    assert np.abs(c - want).max() < 1e-12
    assert sorted(np.round(np.linalg.eigvalsh(c), 12).tolist()) == [
        pytest.approx(1.0 / 3.0),
        pytest.approx(4.0 / 3.0),
        pytest.approx(4.0 / 3.0),
    ]


def test_correlation_matrix_psd_unit_diagonal():
    rng = np.random.default_rng(12)
    for _ in range(10):
        g = rand_graph(rng, int(rng.integers(2, 12)))
        c = gs_correlation_matrix(g)
        assert np.allclose(np.diag(c), 1.0)
        assert np.linalg.eigvalsh(c).min() > -1e-10


def test_gs_eigvec_pe_descending_and_equivariant():
    rng = np.random.default_rng(19)
    g = rand_graph(rng, 8)
    vecs, vals, above_cap = gs_eigvec_pe(g, d=4)
    assert not above_cap
    assert vecs.shape == (8, 4)
    assert np.all(np.diff(vals) <= 1e-12)
    c = gs_correlation_matrix(g)
    for col in range(4):
        assert np.abs(c @ vecs[:, col] - vals[col] * vecs[:, col]).max() < 1e-10
    # eigenvalues are permutation invariant
    _, vals_p, _ = gs_eigvec_pe(permute(g, [3, 1, 7, 0, 2, 6, 4, 5]), d=4)
    assert np.abs(vals - vals_p).max() < 1e-10


def test_gs_eigvec_pe_above_cap_flags():
    g = Graph(40, tuple((i, i + 1) for i in range(39)))
    vecs, vals, above_cap = gs_eigvec_pe(g, d=3, cap=30)
    assert above_cap
    assert np.allclose(vecs, 0.0) and np.allclose(vals, 0.0)


def test_manifold_dataclass_size():
    m = GroundStateManifold(delta=0.5, bitstrings=((0, 1), (1, 0)), energy=-0.5)
    assert m.size == 2
