import numpy as np
import pytest

from qgpe.classical import laplacian_eigvecs, rrwp, rwse, sign_fix, spd_matrix
from qgpe.graph import Graph, permutation_matrix, permute


def cycle(n):
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def test_rrwp_slices_are_powers():
    g = Graph(5, ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)))
    t = rrwp(g, 5)
    m = np.zeros((5, 5))
    for u, v in g.edges:
        m[u, v] = m[v, u] = 1.0
    m /= m.sum(axis=1, keepdims=True)
    power = np.eye(5)
    for k in range(5):
        assert np.allclose(t.slice(k), power, atol=1e-12)
        power = power @ m
    assert t.slice(0).tolist() == np.eye(5).tolist()


def test_rwse_is_diagonal_fiber():
    g = cycle(6)
    t = rrwp(g, 4)
    r = rwse(g, 4)
    for i in range(6):
        assert np.array_equal(r[i], t.values[i, i, :])
    # cycle return probabilities: k=0 ->1, odd k -> 0, k=2 -> 1/2
    assert np.allclose(r[:, 0], 1.0)
    assert np.allclose(r[:, 1], 0.0)
    assert np.allclose(r[:, 2], 0.5)


def test_rrwp_equivariance():
    g = Graph(6, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (1, 4)))
    pi = [3, 5, 0, 2, 4, 1]
    p = permutation_matrix(pi)
    t = rrwp(g, 4).values
    tp = rrwp(permute(g, pi), 4).values
    for k in range(4):
        assert np.allclose(tp[:, :, k], p @ t[:, :, k] @ p.T, atol=1e-12)


def test_sign_fix_idempotent_and_flips():
    v = np.array([[-0.8, 0.1], [0.2, 0.9]])
    f = sign_fix(v)
    assert f[0, 0] > 0  # column 0 flipped
    assert np.allclose(sign_fix(f), f)


def test_laplacian_eigvecs_path3():
    # path 0-1-2: eigenvalues 0, 1, 3
    g = Graph(3, ((0, 1), (1, 2)))
    vecs, vals, degenerate = laplacian_eigvecs(g, 3)
    assert np.allclose(vals, [0.0, 1.0, 3.0], atol=1e-12)
    assert not degenerate.any()
    l = np.array([[1, -1, 0], [-1, 2, -1], [0, -1, 1]], dtype=float)
    for c in range(3):
        assert np.allclose(l @ vecs[:, c], vals[c] * vecs[:, c], atol=1e-12)


def test_laplacian_eigvecs_flags_degenerate_pairs():
    _, vals, degenerate = laplacian_eigvecs(cycle(6), 6)
    # C6 spectrum: 0, 1, 1, 3, 3, 4
    assert np.allclose(sorted(vals), [0, 1, 1, 3, 3, 4], atol=1e-12)
    assert degenerate.tolist() == [False, True, True, True, True, False]


def test_laplacian_eigvecs_dim_check():
    with pytest.raises(ValueError):
        laplacian_eigvecs(cycle(4), 5)


def test_spd_complete_and_path():
    k4 = Graph(4, tuple((i, j) for i in range(4) for j in range(i + 1, 4)))
    d = spd_matrix(k4)
    assert np.array_equal(d, np.ones((4, 4)) - np.eye(4))
    path = Graph(4, ((0, 1), (1, 2), (2, 3)))
    dp = spd_matrix(path)
    assert dp[0, 3] == 3
    assert np.array_equal(dp, dp.T)
    assert np.all(np.diag(dp) == 0)


def test_spd_disconnected_sentinel():
    g = Graph(4, ((0, 1),))
    d = spd_matrix(g)
    assert d[0, 2] == 4  # sentinel N
    assert d[0, 1] == 1


def test_spd_triangle_inequality():
    rng = np.random.default_rng(7)
    for _ in range(10):
        n = int(rng.integers(3, 9))
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
        if not edges:
            continue
        d = spd_matrix(Graph(n, tuple(edges)))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    assert d[i, j] <= d[i, k] + d[k, j] + 1e-12
