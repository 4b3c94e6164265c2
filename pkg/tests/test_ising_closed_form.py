import numpy as np
import pytest

from qgpe.graph import Graph, permutation_matrix, permute
from qgpe.ising_closed_form import (
    IsingPEParams,
    SingularFactorError,
    closed_form_covariance,
    closed_form_pe_tensor,
)
from qgpe.quantum import occupation_covariance_bruteforce


def rand_graph(rng, n, p=0.5, weighted=False):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    weights = tuple(rng.uniform(0.3, 2.0) for _ in edges) if weighted else None
    return Graph(n, tuple(edges), edge_weights=weights)


def test_params_validation():
    with pytest.raises(ValueError):
        IsingPEParams(theta=np.nan, t=1.0)
    with pytest.raises(ValueError):
        IsingPEParams(theta=0.3, t=np.inf)


def test_single_edge_matches_bruteforce():
    g = Graph(2, ((0, 1),))
    params = IsingPEParams(theta=0.6, t=1.1, delta=0.4)
    closed = closed_form_covariance(g, params)
    brute = occupation_covariance_bruteforce(g, 0.6, 1.1, 0.4)
    assert np.abs(closed[0, 1] - brute[0, 1]) < 1e-12


def test_matches_bruteforce_random_unweighted():
    rng = np.random.default_rng(11)
    for _ in range(20):
        g = rand_graph(rng, int(rng.integers(2, 8)))
        params = IsingPEParams(
            theta=float(rng.uniform(0.1, np.pi - 0.1)),
            t=float(rng.uniform(0.1, 2.0)),
            delta=float(rng.uniform(0.0, 1.0)),
        )
        closed = closed_form_covariance(g, params)
        brute = occupation_covariance_bruteforce(g, params.theta, params.t, params.delta)
        off = ~np.eye(g.num_nodes, dtype=bool)
        assert np.abs(closed - brute)[off].max() < 1e-10


def test_matches_bruteforce_weighted():
    rng = np.random.default_rng(13)
    for _ in range(10):
        g = rand_graph(rng, int(rng.integers(2, 7)), weighted=True)
        params = IsingPEParams(
            theta=float(rng.uniform(0.1, 1.4)),
            t=float(rng.uniform(0.1, 1.5)),
            delta=float(rng.uniform(0.0, 0.8)),
        )
        closed = closed_form_covariance(g, params)
        brute = occupation_covariance_bruteforce(g, params.theta, params.t, params.delta)
        off = ~np.eye(g.num_nodes, dtype=bool)
        assert np.abs(closed - brute)[off].max() < 1e-10


def test_diagonal_is_occupation_variance():
    rng = np.random.default_rng(17)
    g = rand_graph(rng, 6)
    params = IsingPEParams(theta=0.8, t=0.9, delta=0.3)
    closed = closed_form_covariance(g, params)
    brute = occupation_covariance_bruteforce(g, 0.8, 0.9, 0.3)
    assert np.abs(np.diag(closed) - np.diag(brute)).max() < 1e-10


def test_theta_zero_gives_zero_covariance():
    g = Graph(3, ((0, 1), (1, 2)))
    c = closed_form_covariance(g, IsingPEParams(theta=0.0, t=1.0, delta=0.5))
    assert np.allclose(c, 0.0, atol=1e-14)


def test_singular_factor_raises():
    # theta = pi/2 makes m(x) = exp(-i x t); m never vanishes then, but
    # cos^2 = sin^2 = 1/2 with x t = pi makes m = (1 - 1)/2 = 0
    g = Graph(2, ((0, 1),))
    with pytest.raises(SingularFactorError):
        closed_form_covariance(g, IsingPEParams(theta=np.pi / 4, t=np.pi))


def test_equivariance():
    rng = np.random.default_rng(23)
    g = rand_graph(rng, 6)
    params = IsingPEParams(theta=0.7, t=1.2, delta=0.6)
    pi = [2, 0, 5, 1, 4, 3]
    p = permutation_matrix(pi)
    c = closed_form_covariance(g, params)
    cp = closed_form_covariance(permute(g, pi), params)
    assert np.abs(cp - p @ c @ p.T).max() < 1e-12


def test_pe_tensor_stacks_slices():
    g = Graph(3, ((0, 1), (1, 2)))
    triples = [IsingPEParams(0.5, 0.7, 0.2), IsingPEParams(0.9, 1.3, 0.0)]
    t = closed_form_pe_tensor(g, triples)
    assert t.num_slices == 2
    for k, p in enumerate(triples):
        assert np.array_equal(t.slice(k), closed_form_covariance(g, p))
    assert t.encoding == "ising-cf"
    assert t.params["triples"] == [(0.5, 0.7, 0.2), (0.9, 1.3, 0.0)]
    with pytest.raises(ValueError):
        closed_form_pe_tensor(g, [])
