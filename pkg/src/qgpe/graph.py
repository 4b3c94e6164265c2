"""Graph data model, validation, JSON I/O and permutation utilities.

Everything downstream (walks, statevector evolution, ground states, GD-WL)
consumes the immutable ``Graph`` defined here.  Edges are kept in canonical
order (u < v, lexicographic) so that all derived iteration orders, and hence
all serialized artifacts, are byte-deterministic.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np


class GraphError(ValueError):
    """Invalid graph document or graph operation input."""


def _canonical_edges(edges):
    return [(u, v) if u < v else (v, u) for u, v in edges]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with optional edge weights and node features.

    edge_weights, when present, is parallel to ``edges``; missing weights
    default to 1.0 everywhere.  node_features is an (N, F) float64 array.
    """

    num_nodes: int
    edges: tuple = field(default_factory=tuple)
    edge_weights: tuple | None = None
    node_features: np.ndarray | None = None

    def __post_init__(self):
        if self.num_nodes < 1:
            raise GraphError(f"num_nodes must be positive, got {self.num_nodes}")
        canon = _canonical_edges(self.edges)
        for idx, (u, v) in enumerate(canon):
            if u == v:
                raise GraphError(f"self-loop at index {idx}: ({u},{v})")
            if not (0 <= u < self.num_nodes and v < self.num_nodes):
                raise GraphError(f"edge index out of range at index {idx}: ({u},{v})")
        if len(set(canon)) != len(canon):
            seen = set()
            for idx, e in enumerate(canon):
                if e in seen:
                    raise GraphError(f"duplicate edge at index {idx}: {e}")
                seen.add(e)
        if self.edge_weights is not None and len(self.edge_weights) != len(self.edges):
            raise GraphError(
                f"edge_weights length {len(self.edge_weights)} != edge count {len(self.edges)}"
            )
        # re-sort edges (and weights) into canonical lexicographic order
        order = sorted(range(len(canon)), key=lambda i: canon[i])
        object.__setattr__(self, "edges", tuple(canon[i] for i in order))
        if self.edge_weights is not None:
            w = tuple(float(self.edge_weights[i]) for i in order)
            object.__setattr__(self, "edge_weights", w)
        if self.node_features is not None:
            feats = np.asarray(self.node_features, dtype=np.float64)
            if feats.ndim != 2 or feats.shape[0] != self.num_nodes:
                raise GraphError(
                    f"node_features must be (N, F), got shape {feats.shape} with N={self.num_nodes}"
                )
            feats.setflags(write=False)
            object.__setattr__(self, "node_features", feats)

    @property
    def num_edges(self):
        return len(self.edges)

    def weight(self, u, v):
        """J_uv for an edge, 0.0 for a non-edge."""
        e = (u, v) if u < v else (v, u)
        try:
            idx = self.edges.index(e)
        except ValueError:
            return 0.0
        return 1.0 if self.edge_weights is None else self.edge_weights[idx]

    def weight_map(self):
        """Dict edge -> J_uv over the canonical edge set."""
        if self.edge_weights is None:
            return {e: 1.0 for e in self.edges}
        return dict(zip(self.edges, self.edge_weights))

    def adjacency(self):
        """Weighted adjacency matrix A (float64, symmetric)."""
        A = np.zeros((self.num_nodes, self.num_nodes))
        for (u, v), w in self.weight_map().items():
            A[u, v] = w
            A[v, u] = w
        return A

    def degrees(self):
        """Unweighted degree vector."""
        deg = np.zeros(self.num_nodes, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def neighbors(self, u):
        return sorted(
            {v for (a, v) in self.edges if a == u} | {a for (a, v) in self.edges if v == u}
        )

    def to_json_dict(self):
        doc = {"num_nodes": self.num_nodes, "edges": [list(e) for e in self.edges]}
        if self.edge_weights is not None:
            doc["edge_weights"] = list(self.edge_weights)
        if self.node_features is not None:
            doc["node_features"] = self.node_features.tolist()
        return doc

    def to_json(self):
        return json.dumps(self.to_json_dict())


def load_graph(path_or_text):
    """Parse and validate a graph JSON document (file path or raw text)."""
    text = path_or_text
    if not str(path_or_text).lstrip().startswith("{"):
        with open(path_or_text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or "num_nodes" not in doc:
        raise GraphError("graph document must be an object with a 'num_nodes' field")
    edges = [tuple(e) for e in doc.get("edges", [])]
    for idx, e in enumerate(edges):
        if len(e) != 2 or not all(isinstance(x, int) for x in e):
            raise GraphError(f"edge at index {idx} is not a pair of integers: {e}")
    weights = doc.get("edge_weights")
    feats = doc.get("node_features")
    return Graph(
        num_nodes=doc["num_nodes"],
        edges=tuple(edges),
        edge_weights=tuple(weights) if weights is not None else None,
        node_features=np.asarray(feats, dtype=np.float64) if feats is not None else None,
    )


def save_graph(g: Graph, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(g.to_json())


def permute(g: Graph, pi) -> Graph:
    """Relabel nodes: node u of g becomes node pi[u] of the result."""
    pi = list(pi)
    if sorted(pi) != list(range(g.num_nodes)):
        raise GraphError("pi is not a bijection on [0, N)")
    edges = tuple((pi[u], pi[v]) for u, v in g.edges)
    weights = g.edge_weights
    feats = None
    if g.node_features is not None:
        feats = np.empty_like(g.node_features)
        for u in range(g.num_nodes):
            feats[pi[u]] = g.node_features[u]
    return Graph(g.num_nodes, edges, weights, feats)


def permutation_matrix(pi):
    """P with P[pi[u], u] = 1, so P @ x relabels node-indexed vectors."""
    n = len(pi)
    P = np.zeros((n, n))
    for u in range(n):
        P[pi[u], u] = 1.0
    return P


def random_walk_matrix(g: Graph):
    """Row-stochastic M = D^-1 A (unweighted).

    Isolated nodes get an all-zero row; a warning is emitted rather than
    rejecting, since graph randomization can isolate nodes.
    """
    A = np.zeros((g.num_nodes, g.num_nodes))
    for u, v in g.edges:
        A[u, v] = 1.0
        A[v, u] = 1.0
    deg = A.sum(axis=1)
    M = np.zeros_like(A)
    nz = deg > 0
    M[nz] = A[nz] / deg[nz, None]
    if not nz.all():
        isolated = np.flatnonzero(~nz).tolist()
        warnings.warn(f"isolated nodes {isolated}: random-walk rows set to zero")
    return M


def laplacian(g: Graph, mode="combinatorial"):
    """Graph Laplacian, L = D - A or I - D^(-1/2) A D^(-1/2) (unweighted)."""
    A = np.zeros((g.num_nodes, g.num_nodes))
    for u, v in g.edges:
        A[u, v] = 1.0
        A[v, u] = 1.0
    deg = A.sum(axis=1)
    if mode == "combinatorial":
        return np.diag(deg) - A
    if mode == "sym_normalized":
        inv_sqrt = np.zeros_like(deg)
        nz = deg > 0
        inv_sqrt[nz] = deg[nz] ** -0.5
        L = -A * inv_sqrt[:, None] * inv_sqrt[None, :]
        L[np.diag_indices_from(L)] = np.where(nz, 1.0, 0.0)
        return L
    raise GraphError(f"unknown laplacian mode: {mode!r}")
