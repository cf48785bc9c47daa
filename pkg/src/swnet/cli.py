"""Command-line front end: `swnet <subcommand>`.

Subcommands
-----------
extract     parse a source tree into an edge list + node attribute table
stats       basic network summary (n, m, mean/max degree, density)
mixing      degree mixing coefficients, connectivity profiles, power-law fit
clustering  clustering summary and profiles
groups      significant group extraction -> groups.json
groupmix    group-level mixing from a groups.json
predict     label prediction accuracy from network structure and groups
report      all of the above composed into one JSON document

Reports are JSON (one document to `--out` or stdout) with profile tables
optionally written as CSV next to them (`--profiles PREFIX`).  Every report
embeds a run manifest (command, inputs, config, master seed, tool version,
timestamps); two runs with the same manifest produce byte-identical JSON up
to the timestamps.

The master seed defaults to a fixed constant so repeated runs agree;
`--seed random` opts into a fresh seed (recorded in the manifest).  Exit
codes: 0 success, 1 usage error, 2 data error; diagnostics go to stderr.
`--threads` (or the SWNET_THREADS environment variable) caps worker
threads in the extraction stage.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__
from . import clustering as cl
from . import groupmix as gm
from . import mixing as mx
from . import netbuild as nb
from . import netio
from . import predict as pr
from .graph import DependencyNetwork, GraphError, degree_summary
from .groups import (
    DEFAULT_SEED,
    ExtractionConfig,
    NodeGroup,
    default_threads,
    extract_all,
    group_summary,
)


@dataclass
class RunManifest:
    command: str
    inputs: list[str]
    config: dict
    master_seed: int
    tool_version: str
    started: str
    finished: str


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        value = float(obj)
        return None if np.isnan(value) else value
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def _clean_float(value):
    if value is None:
        return None
    value = float(value)
    return None if np.isnan(value) else value


def _emit(document: dict, out_path: str | None):
    text = json.dumps(document, indent=2, sort_keys=True, default=_json_default)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def _write_csv(path: str, header: list[str], rows):
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def _resolve_seed(arg: str | None) -> int:
    if arg is None:
        return DEFAULT_SEED
    if arg == "random":
        return int(np.random.SeedSequence().entropy)
    try:
        return int(arg)
    except ValueError as exc:
        raise GraphError(f"invalid seed {arg!r}") from exc


def _sniff_directed(path: str) -> bool:
    """Honor a `# ... directed=true/false` header comment if present."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                if not line.startswith("#"):
                    break
                if "directed=true" in line.replace(" ", "").lower():
                    return True
                if "directed=false" in line.replace(" ", "").lower():
                    return False
    except OSError:
        pass
    return False


def _load(args) -> DependencyNetwork:
    directed = getattr(args, "directed", None)
    if directed is None:
        directed = _sniff_directed(args.network)
    nodes = getattr(args, "nodes", None)
    net, report = netio.load_network(args.network, directed=directed, nodes_path=nodes)
    for name in report.unknown_names:
        print(f"warning: unknown node name {name!r} in edge list", file=sys.stderr)
    return net


def _add_network_arg(sub):
    sub.add_argument("network", help="edge-list file (TSV, # comments ignored)")
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--directed", dest="directed", action="store_true", default=None,
                       help="treat links as directed (default: sniff header)")
    group.add_argument("--undirected", dest="directed", action="store_false",
                       help="treat links as undirected")


def _add_seed_arg(sub):
    sub.add_argument("--seed", default=None, metavar="N|random",
                     help=f"master seed (default {DEFAULT_SEED}; 'random' for entropy)")


def _manifest(args, command: str, inputs: list[str], config: dict, seed: int,
              started: str) -> dict:
    manifest = RunManifest(
        command=command,
        inputs=[str(p) for p in inputs],
        config=config,
        master_seed=seed,
        tool_version=__version__,
        started=started,
        finished=_utc_now(),
    )
    return asdict(manifest)


# -- subcommand payloads -------------------------------------------------------


def _stats_payload(net: DependencyNetwork) -> dict:
    summary = degree_summary(net)
    payload = asdict(summary)
    payload["mean_degree"] = _clean_float(payload["mean_degree"])
    payload["density"] = _clean_float(payload["density"])
    return payload


def _fit_payload(net: DependencyNetwork, seed: int) -> dict | None:
    degrees = net.undirected_view().degrees("total")
    try:
        fit = mx.fit_power_law(degrees, seed=seed)
    except ValueError as exc:
        print(f"warning: power-law fit skipped: {exc}", file=sys.stderr)
        return None
    return {
        "gamma": _clean_float(fit.gamma),
        "k_min": int(fit.k_min),
        "ks_distance": _clean_float(fit.ks_distance),
        "gof_p": _clean_float(fit.gof_p),
        "valid": bool(fit.valid),
        "n_tail": int(fit.n_tail),
    }


def _mixing_payload(net: DependencyNetwork, seed: int, profiles_prefix: str | None,
                    with_fit: bool = True) -> dict:
    report = mx.mixing_report(net)
    payload = {
        "directed": report.directed,
        "r": _clean_float(report.r),
        "r_in_in": _clean_float(report.r_in_in),
        "r_in_out": _clean_float(report.r_in_out),
        "r_out_in": _clean_float(report.r_out_in),
        "r_out_out": _clean_float(report.r_out_out),
        "sigma_k": _clean_float(report.sigma_k),
        "fit": _fit_payload(net, seed) if with_fit else None,
        "profiles": {
            f"{p.alpha}_{p.beta}": [
                {"k": k, "k_n": _clean_float(kn), "count": c} for k, kn, c in p.rows()
            ]
            for p in report.profiles
        },
    }
    if profiles_prefix:
        for p in report.profiles:
            _write_csv(f"{profiles_prefix}_profile_{p.alpha}_{p.beta}.csv",
                       ["k", "k_N", "count"], p.rows())
    return payload


def _clustering_payload(net: DependencyNetwork, profiles_prefix: str | None) -> dict:
    report = cl.clustering_report(net)
    payload = {
        "mean_c": _clean_float(report.mean_c),
        "mean_d": _clean_float(report.mean_d),
        "p_baseline": _clean_float(report.p_baseline),
        "share_d_eq_1": _clean_float(report.share_d_eq_1),
        "share_d_lt_p": _clean_float(report.share_d_lt_p),
        "r_c": _clean_float(report.r_c),
        "r_d": _clean_float(report.r_d),
    }
    profiles = [
        cl.degree_clustering_profile(net, which="c"),
        cl.degree_clustering_profile(net, which="d"),
        cl.neighbor_clustering_profile(net, which="d"),
    ]
    payload["profiles"] = {
        f"{p.y_kind}_vs_{p.x_kind}": [
            {"x": x, "mean": _clean_float(m), "count": c} for x, m, c in p.rows()
        ]
        for p in profiles
    }
    if profiles_prefix:
        for p in profiles:
            _write_csv(f"{profiles_prefix}_profile_{p.y_kind}_vs_{p.x_kind}.csv",
                       [p.x_kind, p.y_kind, "count"], p.rows())
    return payload


def _group_payload(result) -> dict:
    return {
        "n": result.n,
        "m": result.m,
        "stop_reason": result.stop_reason,
        "elapsed_seconds": round(result.elapsed_seconds, 3),
        "groups": [
            {
                "order": g.order,
                "S": list(g.S),
                "T": list(g.T),
                "W": _clean_float(g.W),
                "tau": _clean_float(g.tau),
                "kind": g.kind,
            }
            for g in result.groups
        ],
        "rounds": [asdict(r) for r in result.rounds],
        "background": {
            "nodes": int(result.background_nodes.size),
            "links": int(result.background_links),
            "node_fraction": _clean_float(result.background_node_fraction),
            "link_fraction": _clean_float(result.background_link_fraction),
        },
    }


def _summary_payload(groups, net) -> dict:
    summary = group_summary(groups, net)
    return {
        "n_groups": summary.n_groups,
        "mean_s": _clean_float(summary.mean_s),
        "mean_t": _clean_float(summary.mean_t),
        "mean_tau": _clean_float(summary.mean_tau),
        "grouped_node_fraction": _clean_float(summary.grouped_node_fraction),
        "explained_link_fraction": _clean_float(summary.explained_link_fraction),
        "background_node_fraction": _clean_float(summary.background_node_fraction),
        "background_link_fraction": _clean_float(summary.background_link_fraction),
        "kinds": [asdict(row) for row in summary.rows],
    }


def load_groups(path: str) -> tuple[list[NodeGroup], dict]:
    """Read a groups.json written by `swnet groups`; returns (groups, document)."""
    with open(path, "r", encoding="utf-8") as handle:
        document = json.load(handle)
    try:
        entries = document["groups"] if isinstance(document, dict) else document
        groups = [
            NodeGroup(
                order=int(e.get("order", k)),
                S=tuple(int(v) for v in e["S"]),
                T=tuple(int(v) for v in e["T"]),
                W=float(e["W"]),
                tau=float(e["tau"]),
                kind=str(e["kind"]),
            )
            for k, e in enumerate(entries)
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed groups file {path}: {exc}") from exc
    return groups, document if isinstance(document, dict) else {}


def _groupmix_payload(net, groups, profiles_prefix: str | None) -> dict:
    report = gm.group_mixing_report(groups, net)
    payload = {
        "n_groups": report.n_groups,
        "r_tilde": _clean_float(report.r_tilde),
        "r_in_in": _clean_float(report.r_in_in),
        "r_in_out": _clean_float(report.r_in_out),
        "r_out_in": _clean_float(report.r_out_in),
        "r_out_out": _clean_float(report.r_out_out),
        "r_c": _clean_float(report.r_c),
        "r_d": _clean_float(report.r_d),
        "per_group": [
            dict(zip(("k_s", "k_t", "c_s", "c_t", "d_s", "d_t", "tau"),
                     (_clean_float(v) for v in row)))
            for row in report.rows()
        ],
    }
    if groups:
        profile = gm.group_profiles(groups, net)
        payload["node_profile"] = [
            {"id": i, "k": k, "c": _clean_float(c), "d": _clean_float(d),
             "mean_tau": _clean_float(t), "groups": g}
            for i, k, c, d, t, g in profile.rows()
        ]
        if profiles_prefix:
            _write_csv(f"{profiles_prefix}_group_means.csv",
                       ["k_S", "k_T", "c_S", "c_T", "d_S", "d_T", "tau"],
                       report.rows())
            for axis in ("k", "c", "d"):
                rows = gm.profile_by_bucket(profile, axis=axis)
                _write_csv(f"{profiles_prefix}_tau_vs_{axis}.csv",
                           [axis, "mean_tau", "count"], rows)
    return payload


def _predict_payload(net, groups, args, seed: int) -> dict:
    names, attrs, keys = netio.read_node_table(args.labels)
    if len(names) != net.n:
        raise GraphError(
            f"label table has {len(names)} nodes, network has {net.n}"
        )
    if args.label_key not in keys:
        raise GraphError(f"label table has no column {args.label_key!r}")
    labels = [
        str(a.get(args.label_key)) if a.get(args.label_key) not in (None, "")
        else pr.UNKNOWN_LABEL
        for a in attrs
    ]
    results = {}
    strategies = [args.strategy] if args.strategy != "all" else list(pr.STRATEGIES)
    for strategy in strategies:
        config = pr.PredictionConfig(
            strategy=strategy, depth=args.depth, runs=args.runs, seed=seed,
        )
        result = pr.evaluate(net, groups, labels, config)
        results[strategy] = {
            "accuracy": _clean_float(result.accuracy),
            "accuracy_std": _clean_float(result.run_accuracies.std()),
            "n_evaluated": result.n_evaluated,
            "n_labels": result.n_labels,
            "majority_accuracy": _clean_float(result.majority_accuracy),
            "random_accuracy": _clean_float(result.random_accuracy),
            "fallback_nodes": result.fallback_nodes,
        }
    return {
        "label_key": args.label_key,
        "depth": args.depth,
        "runs": args.runs,
        "strategies": results,
    }


def _extraction_config(args, seed: int) -> ExtractionConfig:
    return ExtractionConfig(
        restarts=args.restarts,
        tenure=args.tenure,
        max_idle=args.max_idle,
        samples=args.samples,
        level=args.level,
        seed=seed,
        threads=args.threads if args.threads else default_threads(),
    )


# -- subcommand entry points ---------------------------------------------------


def _cmd_extract(args) -> int:
    started = _utc_now()
    result = nb.build_network(
        args.src,
        implicit=not args.no_implicit,
        keep_components=args.keep_components,
    )
    for message in result.warnings:
        print(f"warning: {message}", file=sys.stderr)
    for message in result.errors:
        print(f"error: {message}", file=sys.stderr)
    netio.save_edge_list(result.network, args.out)
    if args.nodes:
        netio.save_node_table(result.network, args.nodes,
                              keys=["package", "kind", "author", "version"])
    config = {
        "implicit": not args.no_implicit,
        "keep_components": args.keep_components,
        "out": args.out,
        "nodes": args.nodes,
    }
    document = {
        "manifest": _manifest(args, "extract", [args.src], config, DEFAULT_SEED, started),
        "classes": len(result.models),
        "n": result.network.n,
        "m": result.network.m,
        "explicit_links": result.explicit_links,
        "total_links": result.total_links,
        "corpus_explicit_links": result.corpus_explicit_links,
        "corpus_total_links": result.corpus_total_links,
        "parse_warnings": len(result.warnings),
        "parse_errors": len(result.errors),
    }
    _emit(document, None)
    return 0


def _cmd_stats(args) -> int:
    started = _utc_now()
    net = _load(args)
    document = {
        "manifest": _manifest(args, "stats", [args.network], {}, DEFAULT_SEED, started),
        "stats": _stats_payload(net),
    }
    _emit(document, args.out)
    return 0


def _cmd_mixing(args) -> int:
    started = _utc_now()
    seed = _resolve_seed(args.seed)
    net = _load(args)
    config = {"profiles": args.profiles, "fit": not args.no_fit}
    document = {
        "manifest": _manifest(args, "mixing", [args.network], config, seed, started),
        "mixing": _mixing_payload(net, seed, args.profiles, with_fit=not args.no_fit),
    }
    _emit(document, args.out)
    return 0


def _cmd_clustering(args) -> int:
    started = _utc_now()
    net = _load(args)
    document = {
        "manifest": _manifest(args, "clustering", [args.network],
                              {"profiles": args.profiles}, DEFAULT_SEED, started),
        "clustering": _clustering_payload(net, args.profiles),
    }
    _emit(document, args.out)
    return 0


def _cmd_groups(args) -> int:
    started = _utc_now()
    seed = _resolve_seed(args.seed)
    net = _load(args)
    config = _extraction_config(args, seed)
    result = extract_all(net, config)
    config_dict = {k: v for k, v in asdict(config).items() if k != "use_numba"}
    document = {
        "manifest": _manifest(args, "groups", [args.network], config_dict, seed, started),
        **_group_payload(result),
        "summary": _summary_payload(result.groups, net),
    }
    _emit(document, args.out)
    return 0


def _cmd_groupmix(args) -> int:
    started = _utc_now()
    net = _load(args)
    groups, _ = load_groups(args.groups)
    _validate_group_ids(groups, net)
    document = {
        "manifest": _manifest(args, "groupmix", [args.network, args.groups],
                              {"profiles": args.profiles}, DEFAULT_SEED, started),
        "groupmix": _groupmix_payload(net, groups, args.profiles),
    }
    _emit(document, args.out)
    return 0


def _cmd_predict(args) -> int:
    started = _utc_now()
    seed = _resolve_seed(args.seed)
    net = _load(args)
    groups, _ = load_groups(args.groups)
    _validate_group_ids(groups, net)
    config = {
        "labels": args.labels, "label_key": args.label_key,
        "depth": args.depth, "strategy": args.strategy, "runs": args.runs,
    }
    document = {
        "manifest": _manifest(args, "predict", [args.network, args.groups, args.labels],
                              config, seed, started),
        "prediction": _predict_payload(net, groups, args, seed),
    }
    _emit(document, args.out)
    return 0


def _cmd_report(args) -> int:
    started = _utc_now()
    seed = _resolve_seed(args.seed)
    net = _load(args)
    config = _extraction_config(args, seed)
    result = extract_all(net, config)
    config_dict = {k: v for k, v in asdict(config).items() if k != "use_numba"}
    document = {
        "manifest": _manifest(args, "report", [args.network], config_dict, seed, started),
        "stats": _stats_payload(net),
        "mixing": _mixing_payload(net, seed, args.profiles),
        "clustering": _clustering_payload(net, args.profiles),
        "groups": _group_payload(result),
        "summary": _summary_payload(result.groups, net),
        "groupmix": _groupmix_payload(net, result.groups, args.profiles),
    }
    if args.labels:
        document["prediction"] = _predict_payload(net, result.groups, args, seed)
    _emit(document, args.out)
    return 0


def _validate_group_ids(groups: list[NodeGroup], net: DependencyNetwork):
    for g in groups:
        for v in (*g.S, *g.T):
            if not 0 <= v < net.n:
                raise GraphError(f"group {g.order} references node {v} outside network")


# -- parser wiring -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="swnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"swnet {__version__}")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = subs.add_parser("extract", help="build a network from a source tree")
    p.add_argument("--src", required=True, help="source directory (recursive *.java)")
    p.add_argument("--out", required=True, help="edge-list output path")
    p.add_argument("--nodes", help="node attribute table output path")
    p.add_argument("--no-implicit", action="store_true",
                   help="skip inherited-dependency propagation")
    p.add_argument("--keep-components", action="store_true",
                   help="keep all weak components, not just the largest")
    p.set_defaults(func=_cmd_extract)

    p = subs.add_parser("stats", help="basic network summary")
    _add_network_arg(p)
    p.add_argument("--nodes", help="node attribute table input")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_stats)

    p = subs.add_parser("mixing", help="degree mixing and power-law fit")
    _add_network_arg(p)
    _add_seed_arg(p)
    p.add_argument("--no-fit", action="store_true", help="skip the degree power-law fit")
    p.add_argument("--profiles", metavar="PREFIX", help="write CSV profiles here")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_mixing)

    p = subs.add_parser("clustering", help="clustering coefficients and profiles")
    _add_network_arg(p)
    p.add_argument("--profiles", metavar="PREFIX", help="write CSV profiles here")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_clustering)

    p = subs.add_parser("groups", help="extract significant groups")
    _add_network_arg(p)
    _add_seed_arg(p)
    p.add_argument("--restarts", type=int, default=30)
    p.add_argument("--tenure", type=int, default=7)
    p.add_argument("--max-idle", type=int, default=None,
                   help="idle-step stop (default: 2n)")
    p.add_argument("--samples", type=int, default=100,
                   help="null-model samples per significance test")
    p.add_argument("--level", type=float, default=0.01, help="significance level")
    p.add_argument("--threads", type=int, default=0,
                   help="worker threads (0: SWNET_THREADS or 1)")
    p.add_argument("--out", help="groups.json path (default stdout)")
    p.set_defaults(func=_cmd_groups)

    p = subs.add_parser("groupmix", help="group-level mixing coefficients")
    _add_network_arg(p)
    p.add_argument("groups", help="groups.json from `swnet groups`")
    p.add_argument("--profiles", metavar="PREFIX", help="write CSV profiles here")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_groupmix)

    p = subs.add_parser("predict", help="structure-based label prediction")
    _add_network_arg(p)
    p.add_argument("groups", help="groups.json from `swnet groups`")
    p.add_argument("--labels", required=True, help="node attribute table with labels")
    p.add_argument("--label-key", default="package", help="attribute column to predict")
    p.add_argument("--depth", type=int, default=None,
                   help="truncate dotted labels to this many segments")
    p.add_argument("--strategy", default="groups",
                   choices=list(pr.STRATEGIES) + ["all"])
    p.add_argument("--runs", type=int, default=100)
    _add_seed_arg(p)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_predict)

    p = subs.add_parser("report", help="full analysis in one document")
    _add_network_arg(p)
    _add_seed_arg(p)
    p.add_argument("--restarts", type=int, default=30)
    p.add_argument("--tenure", type=int, default=7)
    p.add_argument("--max-idle", type=int, default=None)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--level", type=float, default=0.01)
    p.add_argument("--threads", type=int, default=0)
    p.add_argument("--labels", help="node table for prediction (optional)")
    p.add_argument("--label-key", default="package")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--strategy", default="groups",
                   choices=list(pr.STRATEGIES) + ["all"])
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--profiles", metavar="PREFIX", help="write CSV profiles here")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (GraphError, nb.CorpusError) as exc:
        print(f"swnet: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"swnet: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"swnet: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
