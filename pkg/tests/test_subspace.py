import numpy as np
import pytest
import scipy.linalg

from qgpe.graph import Graph, permutation_matrix, permute
from qgpe.quantum import xy_hamiltonian_sparse
from qgpe.subspace import (
    cqrw_probabilities,
    qirw_discrete,
    qrw_pe_tensor,
    sample_times,
    xy_subspace_hamiltonian,
)


def rand_graph(rng, n, p=0.5):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    if not edges:
        edges = [(0, 1)]
    return Graph(n, tuple(edges))


def full_space_probabilities(g, k, t, indices):
    """Oracle: evolve the localized weight-k basis state in the full 2^N
    space with a dense matrix exponential and read out weight-k amplitudes."""
    n = g.num_nodes
    h = xy_hamiltonian_sparse(g).toarray()
    u = scipy.linalg.expm(-1j * t * h)
    src = sum(1 << q for q in indices)
    column = u[:, src]
    out = {}
    for state in range(2**n):
        if bin(state).count("1") == k:
            subset = tuple(q for q in range(n) if state >> q & 1)
            out[subset] = abs(column[state]) ** 2
    return out


def test_k1_hamiltonian_is_twice_adjacency():
    g = Graph(4, ((0, 1), (1, 2), (2, 3)), edge_weights=(1.0, 0.5, 2.0))
    op = xy_subspace_hamiltonian(g, 1)
    a = np.zeros((4, 4))
    for (u, v), w in g.weight_map().items():
        a[u, v] = a[v, u] = w
    assert np.allclose(op.dense(), 2.0 * a)


def test_subspace_dims_and_symmetry():
    rng = np.random.default_rng(0)
    g = rand_graph(rng, 6)
    for k in (1, 2, 3):
        op = xy_subspace_hamiltonian(g, k)
        from math import comb

        assert op.dim == comb(6, k)
        h = op.dense()
        assert np.allclose(h, h.T)
        assert np.allclose(np.diag(h), 0.0)


@pytest.mark.parametrize("k", [1, 2])
def test_subspace_walk_matches_full_space(k):
    rng = np.random.default_rng(5 + k)
    for _ in range(5):
        n = int(rng.integers(k + 1, 7))
        g = rand_graph(rng, n)
        t = float(rng.uniform(0.2, 2.5))
        start = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
        op = xy_subspace_hamiltonian(g, k)
        probs = cqrw_probabilities(g, k, t, start if k > 1 else start[0])
        oracle = full_space_probabilities(g, k, t, start)
        for subset, row in op.index.items():
            assert probs[row] == pytest.approx(oracle[subset], abs=1e-10)
        assert probs.sum() == pytest.approx(1.0, abs=1e-10)


def test_cqrw_all_mode_rows_sum_to_one():
    rng = np.random.default_rng(9)
    g = rand_graph(rng, 6)
    x = cqrw_probabilities(g, 1, 1.3, "all")
    assert x.shape == (6, 6)
    assert np.allclose(x.sum(axis=1), 1.0, atol=1e-10)
    assert np.allclose(x, x.T, atol=1e-10)  # symmetric H => symmetric |U|^2


def test_sample_times_bounds_and_determinism():
    t1 = sample_times(8, seed=3)
    t2 = sample_times(8, seed=3)
    assert np.array_equal(t1, t2)
    assert t1.min() >= 0.1 and t1.max() <= np.pi
    assert np.all(np.diff(t1) >= 0)
    with pytest.raises(ValueError):
        sample_times(0)
    with pytest.raises(ValueError):
        sample_times(3, t_min=2.0, t_max=1.0)


def test_qrw_tensor_slice0_identity_and_walk_slices():
    rng = np.random.default_rng(21)
    g = rand_graph(rng, 5)
    times = [0.4, 1.1]
    t1 = qrw_pe_tensor(g, 1, times)
    assert np.array_equal(t1.slice(0), np.eye(5))
    for m, t in enumerate(times, start=1):
        assert np.allclose(t1.slice(m), cqrw_probabilities(g, 1, t, "all"), atol=1e-12)
    t2 = qrw_pe_tensor(g, 2, times)
    assert np.array_equal(t2.slice(0), np.eye(5))
    for m in range(1, 3):
        s = t2.slice(m)
        assert np.allclose(np.diag(s)[np.diag(s) != 1.0], 0.0)  # pair diagonal zero
        assert s[np.triu_indices(5, 1)].sum() == pytest.approx(1.0, abs=1e-10)


def test_qrw_tensor_equivariance():
    rng = np.random.default_rng(33)
    g = rand_graph(rng, 6)
    pi = [4, 2, 0, 5, 1, 3]
    p = permutation_matrix(pi)
    times = [0.7]
    for walkers in (1, 2):
        a = qrw_pe_tensor(g, walkers, times).values
        b = qrw_pe_tensor(permute(g, pi), walkers, times).values
        for m in range(a.shape[2]):
            assert np.abs(b[:, :, m] - p @ a[:, :, m] @ p.T).max() < 1e-10


def test_qirw_slices_are_h2_powers():
    g = Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))
    op = xy_subspace_hamiltonian(g, 2)
    t = qirw_discrete(g, 3, normalization="none")
    vec = np.zeros(op.dim)
    for e in g.edges:
        vec[op.index[e]] = 1.0 / np.sqrt(g.num_edges)
    for k in range(4):
        mat = np.zeros((4, 4))
        for (a, b), val in zip(op.basis, vec):
            mat[a, b] = mat[b, a] = val
        assert np.allclose(t.slice(k), mat, atol=1e-12)
        vec = op.matrix @ vec


def test_qirw_localized_reads_power_diagonal():
    g = Graph(4, ((0, 1), (1, 2), (2, 3)))
    op = xy_subspace_hamiltonian(g, 2)
    t = qirw_discrete(g, 2, initial="localized", normalization="none")
    h2 = op.dense()
    power = np.eye(op.dim)
    for k in range(3):
        mat = np.zeros((4, 4))
        for (a, b), val in zip(op.basis, np.diag(power)):
            mat[a, b] = mat[b, a] = val
        assert np.allclose(t.slice(k), mat, atol=1e-12)
        power = power @ h2


def test_qirw_per_step_stays_finite_at_large_k():
    rng = np.random.default_rng(41)
    g = rand_graph(rng, 6)
    t = qirw_discrete(g, 400, normalization="per_step")
    assert np.isfinite(t.values).all()
    assert np.abs(t.values).max() <= 1.0 + 1e-12


def test_qirw_raw_overflow_raises():
    g = Graph(10, tuple((i, j) for i in range(10) for j in range(i + 1, 10)))
    with pytest.raises(OverflowError):
        qirw_discrete(g, 400, normalization="none")


def test_uniform_edges_requires_edges():
    g = Graph(3, ())
    with pytest.raises(ValueError):
        qirw_discrete(g, 2)
