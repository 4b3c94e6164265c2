"""Command-line frontend: positional encodings, GD-WL tests, dataset
generation, randomization baselines, closed-form verification and the toy
attention forward pass.

Every command prints a JSON summary to stdout.  Exit codes: 1 = usage,
2 = data (unreadable/invalid inputs), 3 = numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import datasets
from .attention import gtqc_layer_forward, random_heads
from .classical import laplacian_eigvecs, rrwp, rwse, spd_matrix
from .gdwl import (
    DistanceProvider,
    NotStronglyRegularError,
    gdwl_distinguish,
    graphs_isomorphic,
    srg_parameters,
    srg_power_identity_check,
)
from .graph import Graph, GraphError, load_graph, save_graph
from .groundstate import ManifoldCapError, gs_eigvec_pe
from .ising_closed_form import (
    IsingPEParams,
    SingularFactorError,
    closed_form_covariance,
    closed_form_pe_tensor,
)
from .petensor import PETensor, save_petensor
from .quantum import SimulationError, occupation_covariance_bruteforce
from .subspace import qirw_discrete, qrw_pe_tensor, sample_times

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(summary):
    print(json.dumps(summary, indent=2, sort_keys=True))


def _load(path) -> Graph:
    try:
        return load_graph(path)
    except (OSError, ValueError) as exc:
        print(f"error: cannot load graph {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_DATA)


def _diag_embed(features: np.ndarray) -> np.ndarray:
    """(N, d) node features as the diagonal fibers of an (N, N, d) tensor."""
    n, d = features.shape
    vals = np.zeros((n, n, d))
    vals[np.arange(n), np.arange(n), :] = features
    return vals


def _plot_slices(tensor_vals, path, title):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    k = min(4, tensor_vals.shape[2])
    fig, axes = plt.subplots(1, k, figsize=(4 * k, 3.6), squeeze=False)
    for idx in range(k):
        ax = axes[0][idx]
        im = ax.imshow(tensor_vals[:, :, idx], cmap="viridis")
        ax.set_title(f"slice {idx}")
        fig.colorbar(im, ax=ax, fraction=0.046)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


# ---------------------------------------------------------------------------
# pe compute


def _cmd_pe_compute(args):
    g = _load(args.graph)
    enc = args.encoding
    if enc == "rrwp":
        tensor = rrwp(g, args.steps)
    elif enc == "rwse":
        feats = rwse(g, args.steps)
        tensor = PETensor(
            _diag_embed(feats),
            "rwse",
            {"steps": args.steps, "layout": "node_features_on_diagonal"},
        )
    elif enc == "le":
        d = args.dims if args.dims is not None else min(8, g.num_nodes)
        vecs, vals, _ = laplacian_eigvecs(g, d)
        tensor = PETensor(
            _diag_embed(vecs),
            "le",
            {
                "dims": d,
                "eigenvalues": [float(v) for v in vals],
                "layout": "node_features_on_diagonal",
            },
        )
    elif enc == "gs-eig":
        d = args.dims if args.dims is not None else min(8, g.num_nodes)
        vecs, vals, above_cap = gs_eigvec_pe(g, delta=args.delta, d=d, cap=args.cap)
        tensor = PETensor(
            _diag_embed(vecs),
            "gs-eig",
            {
                "dims": d,
                "delta": args.delta,
                "eigenvalues": [float(v) for v in vals],
                "above_cap": bool(above_cap),
                "layout": "node_features_on_diagonal",
            },
        )
    elif enc in ("cqrw1", "qrw2"):
        times = sample_times(args.steps, args.t_min, args.t_max, seed=args.seed)
        tensor = qrw_pe_tensor(g, 1 if enc == "cqrw1" else 2, times)
    elif enc == "qirw2":
        tensor = qirw_discrete(g, args.steps, initial=args.initial)
    elif enc == "ising-cf":
        tensor = closed_form_pe_tensor(
            g, [IsingPEParams(theta=args.theta, t=args.t, delta=args.delta)]
        )
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(EXIT_USAGE)
    save_petensor(tensor, args.out)
    if args.plot:
        _plot_slices(tensor.values, args.plot, f"{enc} on {args.graph}")
    _emit(
        {
            "command": "pe compute",
            "encoding": enc,
            "num_nodes": tensor.num_nodes,
            "num_slices": tensor.num_slices,
            "out": str(args.out),
            "metadata": tensor.metadata(),
        }
    )


# ---------------------------------------------------------------------------
# gdwl test


def _cmd_gdwl_test(args):
    g1, g2 = _load(args.g1), _load(args.g2)
    provider = DistanceProvider(kind=args.provider, steps=args.steps)
    distinguishable, h1, h2 = gdwl_distinguish(g1, g2, provider)
    summary = {
        "command": "gdwl test",
        "provider": args.provider,
        "steps": args.steps,
        "verdict": "distinguishable" if distinguishable else "indistinguishable",
        "histogram_g1": {str(k): v for k, v in sorted(h1.items())},
        "histogram_g2": {str(k): v for k, v in sorted(h2.items())},
    }
    if args.exact:
        summary["isomorphic"] = graphs_isomorphic(g1, g2)
    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        colors = sorted(set(h1) | set(h2))
        xs = np.arange(len(colors))
        fig, ax = plt.subplots(figsize=(6, 3.6))
        ax.bar(xs - 0.2, [h1.get(c, 0) for c in colors], width=0.4, label="g1")
        ax.bar(xs + 0.2, [h2.get(c, 0) for c in colors], width=0.4, label="g2")
        ax.set_xlabel("GD-WL color")
        ax.set_ylabel("count")
        ax.set_title(f"GD-WL histograms ({args.provider})")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=120)
        plt.close(fig)
    _emit(summary)


# ---------------------------------------------------------------------------
# srg check


def _cmd_srg_check(args):
    g = _load(args.graph)
    try:
        n, k, lam, mu = srg_parameters(g)
        results = srg_power_identity_check(g, args.max_power)
    except NotStronglyRegularError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_DATA)
    _emit(
        {
            "command": "srg check",
            "parameters": {"n": n, "k": k, "lambda": lam, "mu": mu},
            "powers": [
                {
                    "n": power,
                    "coefficients": {
                        "identity": coef[0],
                        "all_ones": coef[1],
                        "adjacency": coef[2],
                    },
                    "max_residual": residual,
                }
                for power, coef, residual in results
            ],
        }
    )


# ---------------------------------------------------------------------------
# gen


def _cmd_gen(args):
    maker = datasets.gen_spattern if args.dataset == "spattern" else datasets.gen_cladder
    ds = maker(args.per_class, seed=args.seed, scale=args.scale)
    datasets.save_dataset(ds, args.out)
    sizes = [g.num_nodes for g in ds.graphs]
    _emit(
        {
            "command": f"gen {args.dataset}",
            "per_class": args.per_class,
            "seed": args.seed,
            "scale": args.scale,
            "num_graphs": len(ds.graphs),
            "num_nodes_min": min(sizes),
            "num_nodes_max": max(sizes),
            "splits": {k: len(v) for k, v in ds.splits.items()},
            "out": str(args.out),
        }
    )


# ---------------------------------------------------------------------------
# randomize


def _cmd_randomize(args):
    g = _load(args.graph)
    if args.mode == "config":
        out = datasets.config_model_randomize(g, seed=args.seed)
    elif args.mode == "gnm":
        out = datasets.gnm_randomize(g, seed=args.seed)
    else:
        out = datasets.permute_features(g, seed=args.seed)
    dest = args.out if args.out else args.graph + f".{args.mode}.json"
    save_graph(out, dest)
    _emit(
        {
            "command": f"randomize {args.mode}",
            "seed": args.seed,
            "num_nodes": out.num_nodes,
            "num_edges": out.num_edges,
            "out": str(dest),
        }
    )


# ---------------------------------------------------------------------------
# verify closed-form


def _cmd_verify_closed_form(args):
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.trials):
        n = int(rng.integers(2, args.max_nodes + 1))
        edges = [
            (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5
        ]
        g = Graph(n, tuple(edges))
        params = IsingPEParams(
            theta=float(rng.uniform(0.1, np.pi - 0.1)),
            t=float(rng.uniform(0.1, 2.0)),
            delta=float(rng.uniform(0.0, 1.0)),
        )
        try:
            closed = closed_form_covariance(g, params)
        except SingularFactorError:
            continue
        brute = occupation_covariance_bruteforce(
            g, params.theta, params.t, params.delta
        )
        mask = ~np.eye(n, dtype=bool)
        worst = max(worst, float(np.abs(closed - brute)[mask].max()))
    _emit(
        {
            "command": "verify closed-form",
            "trials": args.trials,
            "max_nodes": args.max_nodes,
            "seed": args.seed,
            "max_abs_deviation": worst,
        }
    )


# ---------------------------------------------------------------------------
# attn forward


def _cmd_attn_forward(args):
    g = _load(args.graph)
    heads = random_heads(g, args.heads, seed=args.seed)
    rng = np.random.default_rng(args.seed + 1)
    n = g.num_nodes
    if g.node_features is not None:
        h = np.asarray(g.node_features, dtype=np.float64)
    else:
        h = np.asarray(g.degrees(), dtype=np.float64)[:, None]
    d = h.shape[1]
    w = rng.normal(size=(2 * d, args.out_dim)) / np.sqrt(2 * d)
    out = gtqc_layer_forward(h, heads, w, activation=np.tanh)
    if args.plot:
        _plot_slices(np.stack(heads, axis=2), args.plot, f"attention heads on {args.graph}")
    _emit(
        {
            "command": "attn forward",
            "heads": args.heads,
            "seed": args.seed,
            "num_nodes": n,
            "input_dim": d,
            "output_shape": list(out.shape),
            "output": [[float(x) for x in row] for row in out],
        }
    )


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qgpe", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("pe", help="positional-encoding computations")
    pe_sub = pe.add_subparsers(dest="pe_command", required=True)
    pc = pe_sub.add_parser("compute", help="compute one encoding for one graph")
    pc.add_argument("--graph", required=True)
    pc.add_argument(
        "--encoding",
        required=True,
        choices=["rrwp", "rwse", "le", "gs-eig", "cqrw1", "qrw2", "qirw2", "ising-cf"],
    )
    pc.add_argument("--out", required=True)
    pc.add_argument("--steps", type=int, default=8)
    pc.add_argument("--dims", type=int, default=None)
    pc.add_argument("--delta", type=float, default=0.5)
    pc.add_argument("--theta", type=float, default=0.6)
    pc.add_argument("--t", type=float, default=1.0)
    pc.add_argument("--t-min", type=float, default=0.1)
    pc.add_argument("--t-max", type=float, default=float(np.pi))
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--initial", default="uniform_edges",
                    choices=["uniform_edges", "uniform_pairs", "localized"])
    pc.add_argument("--cap", type=int, default=30)
    pc.add_argument("--plot", default=None, help="write slice heatmaps to this image")
    pc.set_defaults(func=_cmd_pe_compute)

    gd = sub.add_parser("gdwl", help="generalized-distance WL tests")
    gd_sub = gd.add_subparsers(dest="gdwl_command", required=True)
    gt = gd_sub.add_parser("test", help="GD-WL distinguishability of two graphs")
    gt.add_argument("--g1", required=True)
    gt.add_argument("--g2", required=True)
    gt.add_argument("--provider", required=True, choices=["spd", "rrwp", "qirw2"])
    gt.add_argument("--steps", type=int, default=16)
    gt.add_argument("--exact", action="store_true",
                    help="also run an exact isomorphism check")
    gt.add_argument("--plot", default=None, help="write color histograms to this image")
    gt.set_defaults(func=_cmd_gdwl_test)

    srg = sub.add_parser("srg", help="strongly-regular-graph checks")
    srg_sub = srg.add_subparsers(dest="srg_command", required=True)
    sc = srg_sub.add_parser("check", help="SRG parameters and power identities")
    sc.add_argument("--graph", required=True)
    sc.add_argument("--max-power", type=int, default=10)
    sc.set_defaults(func=_cmd_srg_check)

    gen = sub.add_parser("gen", help="synthetic dataset generation")
    gen.add_argument("dataset", choices=["spattern", "cladder"])
    gen.add_argument("--per-class", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--scale", type=float, default=1.0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen)

    rz = sub.add_parser("randomize", help="graph randomization baselines")
    rz.add_argument("mode", choices=["config", "gnm", "features"])
    rz.add_argument("--graph", required=True)
    rz.add_argument("--seed", type=int, required=True)
    rz.add_argument("--out", default=None)
    rz.set_defaults(func=_cmd_randomize)

    vf = sub.add_parser("verify", help="oracle verification suites")
    vf_sub = vf.add_subparsers(dest="verify_command", required=True)
    vc = vf_sub.add_parser("closed-form", help="closed form vs brute force")
    vc.add_argument("--trials", type=int, default=200)
    vc.add_argument("--max-nodes", type=int, default=12)
    vc.add_argument("--seed", type=int, default=0)
    vc.set_defaults(func=_cmd_verify_closed_form)

    at = sub.add_parser("attn", help="toy quantum-attention layer")
    at_sub = at.add_subparsers(dest="attn_command", required=True)
    af = at_sub.add_parser("forward", help="multi-head forward pass")
    af.add_argument("--graph", required=True)
    af.add_argument("--heads", type=int, required=True)
    af.add_argument("--seed", type=int, required=True)
    af.add_argument("--out-dim", type=int, default=4)
    af.add_argument("--plot", default=None, help="write head heatmaps to this image")
    af.set_defaults(func=_cmd_attn_forward)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (GraphError, ManifoldCapError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (SimulationError, SingularFactorError, OverflowError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
