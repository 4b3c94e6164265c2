"""S-PATTERN / C-LADDER synthetic dataset generators and graph randomization.

S-PATTERN: two random strongly correlated subgraphs (snake tilings of
4-cycles, each with exactly two bit-flip-related ground states) are attached
to a fixed triangle-built base, either at the designated opposite pair of
attach nodes (class 0) or at the adjacent pair (class 1).  With this base the
cross-block ground-state correlations are 1/9 vs 1/11 in absolute value.

C-LADDER: ladder blocks of three types are concatenated in the fixed
sequence (1, 2, 1, 2, 0, 2, 1) with class-specific block-length parities.
Type 0 is a plain 2 x L ladder (2 ground states); type 1 inserts crossings
at same-parity columns (1 ground state); type 2 is an odd-length ladder with
crossings at both ends and tapered corners (exactly L ground states).
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import Graph, GraphError, load_graph, save_graph
from .groundstate import ground_state_manifold

# triangle-built S-PATTERN base: every edge lies in a triangle; its ground
# manifold has 4 members whose occupancies on the attach nodes give the
# 1/9 (opposite) and 1/11 (adjacent) cross-block correlations
SPATTERN_BASE_EDGES = (
    (0, 1), (0, 3), (1, 2), (1, 3), (1, 5), (1, 6), (2, 4), (2, 5),
    (2, 6), (3, 6), (3, 7), (4, 6), (4, 7), (5, 6), (6, 7),
)
SPATTERN_BASE_NODES = 8
SPATTERN_OPPOSITE = (2, 0)      # class-0 attach pair
SPATTERN_ADJACENT = (2, 7)      # class-1 attach pair
SPATTERN_CONTRAST = {0: 1.0 / 9.0, 1: 1.0 / 11.0}   # measured |cross C|


@dataclass(frozen=True)
class LabeledDataset:
    graphs: tuple
    labels: tuple
    splits: dict               # name -> tuple of indices
    seed: int

    def __post_init__(self):
        all_idx = sorted(i for part in self.splits.values() for i in part)
        if all_idx != list(range(len(self.graphs))):
            raise ValueError("splits must be disjoint and exhaustive")


def _stratified_splits(labels, rng, fractions=(0.8, 0.1, 0.1)):
    names = ("train", "val", "test")
    splits = {n: [] for n in names}
    labels = np.asarray(labels)
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        idx = idx[rng.permutation(len(idx))]
        n = len(idx)
        n_train = int(round(fractions[0] * n))
        n_val = int(round(fractions[1] * n))
        splits["train"] += idx[:n_train].tolist()
        splits["val"] += idx[n_train:n_train + n_val].tolist()
        splits["test"] += idx[n_train + n_val:].tolist()
    return {k: tuple(sorted(v)) for k, v in splits.items()}


# ---------------------------------------------------------------------------
# S-PATTERN

_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _snake_cells(rng, n_cells):
    """Self-avoiding walk of unit cells on the integer grid."""
    cells = [(0, 0)]
    occupied = {(0, 0)}
    while len(cells) < n_cells:
        x, y = cells[-1]
        options = [
            (x + dx, y + dy) for dx, dy in _STEPS if (x + dx, y + dy) not in occupied
        ]
        if not options:
            return None  # walk trapped itself; caller redraws
        nxt = options[rng.integers(len(options))]
        cells.append(nxt)
        occupied.add(nxt)
    return cells


def strongly_correlated_graph(rng, n_cells, max_tries=200):
    """Random tiling of 4-cycles with exactly two bit-flip-related ground
    states; invalid tilings are rejected and redrawn."""
    for _ in range(max_tries):
        cells = _snake_cells(rng, n_cells)
        if cells is None:
            continue
        corners = {}
        edges = set()
        for x, y in cells:
            quad = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)]
            ids = [corners.setdefault(p, len(corners)) for p in quad]
            for a, b in zip(ids, ids[1:] + ids[:1]):
                edges.add((min(a, b), max(a, b)))
        g = Graph(len(corners), tuple(sorted(edges)))
        manifold = ground_state_manifold(g, 0.5, cap=10**9)
        if manifold.size != 2:
            continue
        b1, b2 = manifold.bitstrings
        if all(x != y for x, y in zip(b1, b2)):
            return g
    raise RuntimeError(f"no valid strongly correlated tiling in {max_tries} tries")


def _attach_blocks(base_edges, base_n, attach_pair, blocks):
    """Union of the base and the blocks, one edge per (attach node, block)."""
    edges = list(base_edges)
    offset = base_n
    spans = []
    for anchor, block in zip(attach_pair, blocks):
        edges += [(u + offset, v + offset) for u, v in block.edges]
        edges.append((anchor, offset))   # block node 0 is the attach port
        spans.append((offset, offset + block.num_nodes))
        offset += block.num_nodes
    return Graph(offset, tuple(sorted(tuple(sorted(e)) for e in edges))), spans


def gen_spattern(n_per_class: int, seed: int, scale: float = 1.0) -> LabeledDataset:
    """S-PATTERN dataset: class 0 attaches the two strongly correlated
    subgraphs at opposite base nodes, class 1 at adjacent ones.

    scale shrinks the subgraph sizes toward desk scale (paper graphs have
    about 450 nodes at scale 1).
    """
    if n_per_class < 1:
        raise ValueError("n_per_class must be >= 1")
    rng = np.random.default_rng(seed)
    lo = 2
    hi = max(3, int(round(110 * scale)))
    graphs, labels = [], []
    for label, pair in ((0, SPATTERN_OPPOSITE), (1, SPATTERN_ADJACENT)):
        for _ in range(n_per_class):
            blocks = [
                strongly_correlated_graph(rng, int(rng.integers(lo, hi + 1)))
                for _ in range(2)
            ]
            g, _ = _attach_blocks(
                SPATTERN_BASE_EDGES, SPATTERN_BASE_NODES, pair, blocks
            )
            graphs.append(g)
            labels.append(label)
    splits = _stratified_splits(labels, rng)
    return LabeledDataset(tuple(graphs), tuple(labels), splits, seed)


# ---------------------------------------------------------------------------
# C-LADDER

CLADDER_SEQUENCE = (1, 2, 1, 2, 0, 2, 1)
CLADDER_PARITIES = {
    0: ("even", "odd", "even", "odd", "even", "even", "odd"),
    1: ("odd", "odd", "odd", "odd", "even", "even", "odd"),
}


def _ladder_block(L, crossings=(), taper=False):
    """2 x L ladder; crossings add the fixed-direction edge (0,c)-(1,c+1);
    taper removes the top-left and bottom-right corner nodes (type 2 ends)."""
    def node(r, c):
        return 2 * c + r

    edges = set()
    for c in range(L):
        edges.add((node(0, c), node(1, c)))
        if c + 1 < L:
            edges.add((node(0, c), node(0, c + 1)))
            edges.add((node(1, c), node(1, c + 1)))
    for c in crossings:
        edges.add(tuple(sorted((node(0, c), node(1, c + 1)))))
    drop = {node(0, 0), node(1, L - 1)} if taper else set()
    keep = [i for i in range(2 * L) if i not in drop]
    remap = {o: i for i, o in enumerate(keep)}
    es = tuple(
        sorted((remap[a], remap[b]) for a, b in edges if a in remap and b in remap)
    )
    left = tuple(remap[node(r, 0)] for r in (0, 1) if node(r, 0) in remap)
    right = tuple(remap[node(r, L - 1)] for r in (0, 1) if node(r, L - 1) in remap)
    return Graph(len(keep), es), left, right


def cladder_block(block_type: int, length: int, rng=None):
    """One C-LADDER building block; returns (graph, left_ports, right_ports).

    type 0: plain ladder, any length, 2 ground states.
    type 1: crossings at uniformly drawn same-parity columns, 1 ground state.
    type 2: odd length, crossings at both end 4-cycles, tapered corners,
    exactly `length` ground states.
    """
    if block_type == 0:
        if length < 2:
            raise ValueError("type-0 length must be >= 2")
        return _ladder_block(length)
    if block_type == 1:
        if length < 4:
            raise ValueError("type-1 length must be >= 4 to host two crossings")
        rng = np.random.default_rng() if rng is None else rng
        # even columns only: every crossing then vetoes the same alternating
        # ground state, so the block pins one phase regardless of crossing
        # count or position ("separated with an odd number of nodes")
        positions = [c for c in range(length - 1) if c % 2 == 0]
        n_cross = int(rng.integers(2, min(9, len(positions)) + 1))
        chosen = sorted(rng.choice(positions, n_cross, replace=False).tolist())
        return _ladder_block(length, crossings=chosen)
    if block_type == 2:
        if length < 3 or length % 2 == 0:
            raise ValueError("type-2 length must be odd and >= 3")
        return _ladder_block(length, crossings=(0, length - 2), taper=True)
    raise ValueError(f"unknown block type {block_type}")


def concat_blocks(blocks):
    """Concatenate (graph, left, right) blocks by rail-continuation edges."""
    edges = []
    offset = 0
    prev_right = None
    for g, left, right in blocks:
        edges += [(u + offset, v + offset) for u, v in g.edges]
        left_g = [p + offset for p in left]
        if prev_right is not None:
            if len(prev_right) == 2 and len(left_g) == 2:
                edges += list(zip(prev_right, left_g))    # row-wise rails
            else:
                # a tapered end exposes a single port; fan it out
                edges += [(a, b) for a in prev_right for b in left_g]
        prev_right = [p + offset for p in right]
        offset += g.num_nodes
    return Graph(offset, tuple(sorted(tuple(sorted(e)) for e in edges)))


def _draw_length(rng, parity, lo, hi, minimum):
    want_odd = parity == "odd"
    for _ in range(1000):
        val = int(rng.integers(lo, hi + 1))
        if val >= minimum and (val % 2 == 1) == want_odd:
            return val
    raise RuntimeError(f"no feasible {parity} length in [{lo}, {hi}] >= {minimum}")


def gen_cladder(n_per_class: int, seed: int, scale: float = 1.0) -> LabeledDataset:
    """C-LADDER dataset over the fixed type sequence with class parities.

    Each graph draws one even length E and one odd length O uniformly from
    the scaled range [10, 10 + 42*scale] and assigns them to the blocks by
    the class parity pattern; type-2 lengths are always drawn odd (the
    construction requires it; the parity slots for type-2 blocks coincide
    across the two classes, so class structure is untouched).  Crossing
    counts and positions in type-1 blocks are random but leave the ground
    states untouched, so they vary the spectrum of the graph without varying
    the ground-state correlations.
    """
    if n_per_class < 1:
        raise ValueError("n_per_class must be >= 1")
    rng = np.random.default_rng(seed)
    lo = 10
    hi = lo + max(1, int(round(42 * scale)))
    graphs, labels = [], []
    for label in (0, 1):
        parities = CLADDER_PARITIES[label]
        for _ in range(n_per_class):
            even_len = _draw_length(rng, "even", lo, hi, 4)
            odd_len = _draw_length(rng, "odd", lo, hi, 3)
            blocks = []
            for btype, parity in zip(CLADDER_SEQUENCE, parities):
                length = odd_len if (btype == 2 or parity == "odd") else even_len
                blocks.append(cladder_block(btype, length, rng))
            graphs.append(concat_blocks(blocks))
            labels.append(label)
    splits = _stratified_splits(labels, rng)
    return LabeledDataset(tuple(graphs), tuple(labels), splits, seed)


# ---------------------------------------------------------------------------
# randomization

def config_model_randomize(g: Graph, n_swaps: int | None = None, seed: int = 0) -> Graph:
    """Degree-preserving double edge swaps; simple-graph violations redrawn."""
    if g.num_edges < 2:
        warnings.warn("fewer than 2 edges: returning the graph unchanged")
        return g
    if n_swaps is None:
        n_swaps = 10 * g.num_edges
    rng = np.random.default_rng(seed)
    edges = [tuple(e) for e in g.edges]
    edge_set = set(edges)
    done = 0
    attempts = 0
    while done < n_swaps and attempts < 100 * n_swaps:
        attempts += 1
        i, j = rng.integers(len(edges)), rng.integers(len(edges))
        if i == j:
            continue
        (a, b), (c, d) = edges[i], edges[j]
        if rng.integers(2):
            c, d = d, c
        # rewire (a,b),(c,d) -> (a,c),(b,d)
        if len({a, b, c, d}) < 4:
            continue
        e1 = (min(a, c), max(a, c))
        e2 = (min(b, d), max(b, d))
        if e1 in edge_set or e2 in edge_set:
            continue
        edge_set -= {edges[i], edges[j]}
        edge_set |= {e1, e2}
        edges[i], edges[j] = e1, e2
        done += 1
    return Graph(g.num_nodes, tuple(sorted(edge_set)), None, g.node_features)


def gnm_randomize(g: Graph, seed: int = 0) -> Graph:
    """Uniform draw from G_{n,m} with the input's node and edge counts."""
    rng = np.random.default_rng(seed)
    n, m = g.num_nodes, g.num_edges
    all_pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if m > len(all_pairs):
        raise GraphError(f"{m} edges do not fit in a simple graph on {n} nodes")
    chosen = rng.choice(len(all_pairs), m, replace=False)
    edges = tuple(sorted(all_pairs[i] for i in chosen))
    return Graph(n, edges, None, g.node_features)


def permute_features(g: Graph, seed: int = 0) -> Graph:
    """Random within-vector permutation of each node's feature entries."""
    if g.node_features is None:
        raise GraphError("graph has no node features to permute")
    rng = np.random.default_rng(seed)
    feats = g.node_features.copy()
    for i in range(feats.shape[0]):
        feats[i] = feats[i, rng.permutation(feats.shape[1])]
    return Graph(g.num_nodes, g.edges, g.edge_weights, feats)


# ---------------------------------------------------------------------------
# serialization

def save_dataset(ds: LabeledDataset, out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, g in enumerate(ds.graphs):
        save_graph(g, out / f"graph_{i:05d}.json")
    with open(out / "labels.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "label"])
        for i, lab in enumerate(ds.labels):
            writer.writerow([i, lab])
    with open(out / "splits.json", "w", encoding="utf-8") as fh:
        json.dump({k: list(v) for k, v in ds.splits.items()}, fh)


def load_dataset(in_dir) -> LabeledDataset:
    src = Path(in_dir)
    with open(src / "labels.csv", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    graphs = tuple(load_graph(src / f"graph_{int(r['index']):05d}.json") for r in rows)
    labels = tuple(int(r["label"]) for r in rows)
    with open(src / "splits.json", encoding="utf-8") as fh:
        splits = {k: tuple(v) for k, v in json.load(fh).items()}
    return LabeledDataset(graphs, labels, splits, seed=-1)
