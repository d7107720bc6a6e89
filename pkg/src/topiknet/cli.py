"""Command-line pipeline orchestration.

Subcommands: ingest, build, metrics, nulls, communities, dynamics, stats,
synth, run (full pipeline) and export. Flags mirror the run-config field
names in kebab-case; TOPIKNET_* environment variables override flags.
Exit codes: 0 success, 2 config error, 3 data error, 4 convergence error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .community import (Partition, _canonical, consensus_partition,
                        modularity)
from .corpus import (CanonicalizationMap, canonicalize, ingest, select_top_k,
                     write_normalized)
from .dynamics import (enumerate_windows, neighbor_trend, slopes_table,
                       window_metric_series, window_networks)
from .errors import ConfigError, ConvergenceError, DataError, TopiknetError
from .exports import (export_graph, read_graphml, read_metrics_csv,
                      read_partition_csv,
                      write_agreement_csv, write_analysis_json, write_edge_csv,
                      write_global_metrics_json, write_graphml, write_json,
                      write_metrics_csv, write_omega_csv, write_partition_csv,
                      write_series_csv, write_slopes_csv, write_vocabulary_csv)
from .metrics import (compute_node_metrics, degree_strength, global_metrics)
from .months import MonthRange
from .network import build_network
from .smallworld import randomize_preserving, small_world_summary
from .stats import analysis_static, analysis_temporal, correlation_battery
from .synth import load_spec, write_corpus


@dataclass
class RunConfig:
    """Resolved pipeline configuration; defaults follow the standard setup."""

    corpus: str
    output_dir: str
    date_start: str
    date_end: str
    map: str | None = None
    k: int = 100
    alpha: float = 0.05
    bonferroni: bool = False
    half_width: int = 6
    nulls: int = 100
    louvain_iterations: int = 100
    tau: float = 0.5
    exclusion: tuple[str, ...] = ()
    seed: int = 0
    threads: int = 1

    def validate(self) -> None:
        if self.k < 2:
            raise ConfigError("k must be at least 2")
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError("alpha must lie in (0, 1]")
        if self.half_width < 0:
            raise ConfigError("half-width must be non-negative")
        if self.nulls < 2:
            raise ConfigError("null ensemble size must be at least 2")
        if self.louvain_iterations < 2:
            raise ConfigError("louvain-iterations must be at least 2")
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError("tau must lie in [0, 1]")
        if self.threads < 1:
            raise ConfigError("threads must be positive")

    def date_range(self) -> MonthRange:
        try:
            return MonthRange.from_labels(self.date_start, self.date_end)
        except DataError as exc:
            raise ConfigError(str(exc)) from exc


_ENV_PREFIX = "TOPIKNET_"

_FIELD_PARSERS = {
    "k": int,
    "alpha": float,
    "half_width": int,
    "nulls": int,
    "louvain_iterations": int,
    "tau": float,
    "seed": int,
    "threads": int,
    "bonferroni": lambda s: s.lower() in ("1", "true", "yes"),
    "exclusion": lambda s: tuple(x.strip() for x in s.split(",") if x.strip()),
}


def _apply_env_overrides(args: argparse.Namespace) -> None:
    """TOPIKNET_<FIELD> environment variables override parsed flags."""
    for f in fields(RunConfig):
        env = os.environ.get(_ENV_PREFIX + f.name.upper())
        if env is None or not hasattr(args, f.name):
            continue
        parser = _FIELD_PARSERS.get(f.name, str)
        try:
            setattr(args, f.name, parser(env))
        except ValueError as exc:
            raise ConfigError(
                f"bad value {env!r} for {_ENV_PREFIX}{f.name.upper()}"
            ) from exc


def _load_corpus(config: RunConfig):
    result = ingest(config.corpus, config.date_range())
    records = result.records
    if config.map:
        records = canonicalize(records, CanonicalizationMap.from_file(config.map))
    return records, result.n_rejected


def _outdir(config: RunConfig) -> Path:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def run_pipeline(config: RunConfig) -> dict:
    """Execute the full pipeline and write all artifacts plus a manifest.

    Any stage failure writes the manifest with a failure marker naming the
    stage, keeps whatever artifacts exist, and re-raises the error.
    """
    config.validate()
    out = _outdir(config)
    manifest: dict = {
        "version": __version__,
        "config": asdict(config),
        "seed": config.seed,
        "stages": [],
        "artifacts": [],
        "status": "running",
    }
    state: dict = {}

    def artifact(name: str) -> Path:
        manifest["artifacts"].append(name)
        return out / name

    def stage_ingest():
        records, rejected = _load_corpus(config)
        state["records"] = records
        state["rejected"] = rejected

    def stage_vocabulary():
        vocab = select_top_k(state["records"], config.k, config.date_range())
        state["vocab"] = vocab
        write_vocabulary_csv(vocab.topics, vocab.prevalence, artifact("vocabulary.csv"))

    def stage_network():
        net = build_network(
            state["records"], state["vocab"], config.date_range(),
            alpha=config.alpha, bonferroni=config.bonferroni,
        )
        state["net"] = net
        write_edge_csv(net, artifact("edges.csv"))

    def stage_communities():
        partition, agreement = consensus_partition(
            state["net"], iterations=config.louvain_iterations,
            tau=config.tau, seed=config.seed, threads=config.threads,
        )
        state["partition"] = partition
        write_partition_csv(state["net"].topics, partition, artifact("partition.csv"))
        write_agreement_csv(
            state["net"].topics, agreement, artifact("agreement.csv")
        )

    def stage_metrics():
        labels = state["partition"].labels
        nm = compute_node_metrics(state["net"], labels)
        state["node_metrics"] = nm
        write_metrics_csv(nm, artifact("metrics.csv"))
        write_global_metrics_json(global_metrics(state["net"]), artifact("global_metrics.json"))

    def stage_smallworld():
        ensemble = randomize_preserving(
            state["net"], config.nulls, config.seed, threads=config.threads
        )
        write_json(small_world_summary(state["net"], ensemble), artifact("swp.json"))

    def stage_windows():
        windows = enumerate_windows(config.date_range(), config.half_width)
        nets = window_networks(
            state["records"], state["vocab"], windows,
            alpha=config.alpha, bonferroni=config.bonferroni,
            threads=config.threads,
        )
        series = window_metric_series(nets, state["partition"].labels)
        state["windows"] = windows
        state["series"] = series
        write_series_csv(
            state["vocab"].topics, windows, series, artifact("series.csv")
        )

    def stage_slopes():
        net = state["net"]
        k, s = degree_strength(net)
        nm = state["node_metrics"]
        static_values = {
            "prevalence": net.node_prevalence,
            "degree": k.astype(float),
            "strength": s,
            "strength_per_edge": np.array([m.strength_per_edge for m in nm]),
            "clustering": np.array([m.clustering for m in nm]),
            "betweenness": np.array([m.betweenness for m in nm]),
            "participation": np.array([m.participation for m in nm]),
        }
        slopes = slopes_table(
            state["series"], static_values, state["windows"],
            state["vocab"].topics, exclusion=config.exclusion,
        )
        state["slopes"] = slopes
        write_slopes_csv(slopes, artifact("slopes.csv"))
        prevalence_slopes = {
            t: ms.delta for t, ms in slopes["prevalence"].items()
        }
        omega = neighbor_trend(net, prevalence_slopes)
        state["omega"] = omega
        write_omega_csv(omega, artifact("neighbor_trend.csv"))

    def stage_stats():
        static_res = analysis_static(
            state["node_metrics"], state["vocab"].prevalence
        )
        temporal_res = analysis_temporal(state["slopes"], state["omega"])
        battery = correlation_battery(state["node_metrics"], state["slopes"])
        write_analysis_json(
            static_res, temporal_res, battery, artifact("analysis.json"),
            notes=[
                f"static model: n={static_res.n_obs}, df={static_res.df}",
                f"temporal model: n={temporal_res.n_obs}, df={temporal_res.df}",
            ],
        )

    def stage_export():
        write_graphml(
            state["net"], artifact("network.graphml"),
            state["partition"], state["node_metrics"],
        )
        export_graph(
            state["net"], state["partition"], state["node_metrics"],
            "json", artifact("network.json"),
        )

    stages = [
        ("ingest", stage_ingest),
        ("vocabulary", stage_vocabulary),
        ("network", stage_network),
        ("communities", stage_communities),
        ("metrics", stage_metrics),
        ("smallworld", stage_smallworld),
        ("windows", stage_windows),
        ("slopes", stage_slopes),
        ("stats", stage_stats),
        ("export", stage_export),
    ]
    for name, fn in stages:
        t0 = time.perf_counter()
        try:
            fn()
        except Exception as exc:
            manifest["status"] = "failed"
            manifest["failed_stage"] = name
            manifest["error"] = str(exc)
            write_json(manifest, out / "manifest.json")
            raise TopiknetError(f"stage {name!r} failed: {exc}") from exc
        manifest["stages"].append(
            {"name": name, "seconds": round(time.perf_counter() - t0, 3)}
        )
    manifest["status"] = "ok"
    write_json(manifest, out / "manifest.json")
    return manifest


# -- argument plumbing -------------------------------------------------------

def _add_corpus_args(p: argparse.ArgumentParser, with_output_dir: bool = True) -> None:
    p.add_argument("--corpus", required=True, help="JSONL corpus file")
    p.add_argument("--map", default=None, help="variant<TAB>canonical map file")
    p.add_argument("--date-start", required=True, help="first corpus month, YYYY-MM")
    p.add_argument("--date-end", required=True, help="last corpus month, YYYY-MM")
    p.add_argument("--k", type=int, default=100, help="topic count (default 100)")
    p.add_argument("--alpha", type=float, default=0.05, help="edge significance level")
    p.add_argument("--bonferroni", action="store_true",
                   help="divide alpha by the number of topic pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    if with_output_dir:
        p.add_argument("--output-dir", required=True)


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        corpus=args.corpus,
        output_dir=getattr(args, "output_dir", "."),
        date_start=args.date_start,
        date_end=args.date_end,
        map=args.map,
        k=args.k,
        alpha=args.alpha,
        bonferroni=args.bonferroni,
        half_width=getattr(args, "half_width", 6),
        nulls=getattr(args, "nulls", 100),
        louvain_iterations=getattr(args, "louvain_iterations", 100),
        tau=getattr(args, "tau", 0.5),
        exclusion=tuple(getattr(args, "exclusion", ()) or ()),
        seed=args.seed,
        threads=args.threads,
    )
    cfg.validate()
    return cfg


def _build_static(config: RunConfig):
    records, _ = _load_corpus(config)
    vocab = select_top_k(records, config.k, config.date_range())
    net = build_network(
        records, vocab, config.date_range(),
        alpha=config.alpha, bonferroni=config.bonferroni,
    )
    return records, vocab, net


def _partition_for(net, config: RunConfig, partition_path: str | None) -> Partition:
    if partition_path:
        by_topic = read_partition_csv(partition_path)
        missing = [t for t in net.topics if t not in by_topic]
        if missing:
            raise DataError(f"partition file lacks topics: {missing[:5]}")
        labels = tuple(
            int(x) for x in _canonical(np.array([by_topic[t] for t in net.topics]))
        )
        return Partition(labels, modularity(net, labels), 1.0)
    partition, _ = consensus_partition(
        net, iterations=config.louvain_iterations, tau=config.tau,
        seed=config.seed, threads=config.threads,
    )
    return partition


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topiknet",
        description="Topic co-occurrence network analytics pipeline",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--spec", required=True, help="generator spec (JSON)")
    p.add_argument("--output", required=True, help="corpus JSONL to write")
    p.add_argument("--seed", type=int, default=None, help="override the spec seed")

    p = sub.add_parser("ingest", help="normalize and canonicalize a corpus")
    _add_corpus_args(p, with_output_dir=False)
    p.add_argument("--output", required=True, help="normalized records JSONL")

    p = sub.add_parser("build", help="build the static topic network")
    _add_corpus_args(p)

    p = sub.add_parser("metrics", help="node and global structural measures")
    _add_corpus_args(p)
    p.add_argument("--partition", default=None, help="partition CSV (else consensus)")
    p.add_argument("--louvain-iterations", type=int, default=100)
    p.add_argument("--tau", type=float, default=0.5)

    p = sub.add_parser("nulls", help="null ensemble and small-world propensity")
    _add_corpus_args(p)
    p.add_argument("--nulls", type=int, default=100)

    p = sub.add_parser("communities", help="consensus community detection")
    _add_corpus_args(p)
    p.add_argument("--louvain-iterations", type=int, default=100)
    p.add_argument("--tau", type=float, default=0.5)

    p = sub.add_parser("dynamics", help="sliding-window series and slopes")
    _add_corpus_args(p)
    p.add_argument("--half-width", type=int, default=6)
    p.add_argument("--exclusion", default="",
                   help="comma-separated topics to drop from temporal analyses")
    p.add_argument("--louvain-iterations", type=int, default=100)
    p.add_argument("--tau", type=float, default=0.5)

    p = sub.add_parser("stats", help="static and temporal regressions")
    _add_corpus_args(p)
    p.add_argument("--half-width", type=int, default=6)
    p.add_argument("--exclusion", default="")
    p.add_argument("--louvain-iterations", type=int, default=100)
    p.add_argument("--tau", type=float, default=0.5)

    p = sub.add_parser("run", help="full pipeline")
    _add_corpus_args(p)
    p.add_argument("--half-width", type=int, default=6)
    p.add_argument("--nulls", type=int, default=100)
    p.add_argument("--louvain-iterations", type=int, default=100)
    p.add_argument("--tau", type=float, default=0.5)
    p.add_argument("--exclusion", default="")

    p = sub.add_parser("export", help="convert a saved network between formats")
    p.add_argument("--network", required=True, help="GraphML produced by this tool")
    p.add_argument("--partition", default=None, help="partition CSV to attach")
    p.add_argument("--metrics", default=None, help="metrics CSV to attach")
    p.add_argument("--format", required=True, help="graphml, json or csv")
    p.add_argument("--output", required=True)

    return parser


def _cmd_synth(args) -> int:
    spec = load_spec(args.spec)
    if args.seed is not None:
        from dataclasses import replace

        spec = replace(spec, seed=args.seed)
    count = write_corpus(spec, args.output)
    print(f"wrote {count} articles to {args.output}")
    return 0


def _cmd_ingest(args) -> int:
    config = _config_from_args(args)
    records, rejected = _load_corpus(config)
    write_normalized(records, args.output)
    print(f"kept {len(records)} records, rejected {rejected} outside range")
    return 0


def _cmd_build(args) -> int:
    config = _config_from_args(args)
    _, vocab, net = _build_static(config)
    out = _outdir(config)
    write_vocabulary_csv(vocab.topics, vocab.prevalence, out / "vocabulary.csv")
    write_graphml(net, out / "network.graphml")
    write_edge_csv(net, out / "edges.csv")
    print(f"network: {net.n_nodes} nodes, {net.n_edges} edges -> {out}")
    return 0


def _cmd_metrics(args) -> int:
    config = _config_from_args(args)
    _, _, net = _build_static(config)
    partition = _partition_for(net, config, args.partition)
    nm = compute_node_metrics(net, partition.labels)
    out = _outdir(config)
    write_metrics_csv(nm, out / "metrics.csv")
    write_global_metrics_json(global_metrics(net), out / "global_metrics.json")
    print(f"metrics for {net.n_nodes} topics -> {out}")
    return 0


def _cmd_nulls(args) -> int:
    config = _config_from_args(args)
    _, _, net = _build_static(config)
    ensemble = randomize_preserving(net, config.nulls, config.seed,
                                    threads=config.threads)
    summary = small_world_summary(net, ensemble)
    out = _outdir(config)
    write_json(summary, out / "swp.json")
    print(f"swp={summary['swp']:.4f} (p={summary['p_swp']:.4f}) -> {out}")
    return 0


def _cmd_communities(args) -> int:
    config = _config_from_args(args)
    _, _, net = _build_static(config)
    partition, agreement = consensus_partition(
        net, iterations=config.louvain_iterations, tau=config.tau, seed=config.seed
    )
    out = _outdir(config)
    write_partition_csv(net.topics, partition, out / "partition.csv")
    write_agreement_csv(net.topics, agreement, out / "agreement.csv")
    print(f"{partition.n_communities} communities, Q={partition.q:.4f} -> {out}")
    return 0


def _dynamics_state(config: RunConfig):
    records, vocab, net = _build_static(config)
    partition, _ = consensus_partition(
        net, iterations=config.louvain_iterations, tau=config.tau,
        seed=config.seed, threads=config.threads,
    )
    windows = enumerate_windows(config.date_range(), config.half_width)
    nets = window_networks(records, vocab, windows, alpha=config.alpha,
                           bonferroni=config.bonferroni, threads=config.threads)
    series = window_metric_series(nets, partition.labels)
    nm = compute_node_metrics(net, partition.labels)
    k, s = degree_strength(net)
    static_values = {
        "prevalence": net.node_prevalence,
        "degree": k.astype(float),
        "strength": s,
        "strength_per_edge": np.array([m.strength_per_edge for m in nm]),
        "clustering": np.array([m.clustering for m in nm]),
        "betweenness": np.array([m.betweenness for m in nm]),
        "participation": np.array([m.participation for m in nm]),
    }
    slopes = slopes_table(series, static_values, windows, vocab.topics,
                          exclusion=config.exclusion)
    return records, vocab, net, partition, nm, windows, series, slopes


def _cmd_dynamics(args) -> int:
    config = _config_from_args(args)
    _, vocab, net, _, _, windows, series, slopes = _dynamics_state(config)
    out = _outdir(config)
    write_series_csv(vocab.topics, windows, series, out / "series.csv")
    write_slopes_csv(slopes, out / "slopes.csv")
    prevalence_slopes = {t: ms.delta for t, ms in slopes["prevalence"].items()}
    write_omega_csv(neighbor_trend(net, prevalence_slopes), out / "neighbor_trend.csv")
    print(f"{len(windows)} windows -> {out}")
    return 0


def _cmd_stats(args) -> int:
    config = _config_from_args(args)
    _, vocab, net, _, nm, _, _, slopes = _dynamics_state(config)
    prevalence_slopes = {t: ms.delta for t, ms in slopes["prevalence"].items()}
    omega = neighbor_trend(net, prevalence_slopes)
    static_res = analysis_static(nm, vocab.prevalence)
    temporal_res = analysis_temporal(slopes, omega)
    battery = correlation_battery(nm, slopes)
    out = _outdir(config)
    write_analysis_json(static_res, temporal_res, battery, out / "analysis.json")
    print(f"static df={static_res.df}, temporal df={temporal_res.df} -> {out}")
    return 0


def _cmd_run(args) -> int:
    config = _config_from_args(args)
    manifest = run_pipeline(config)
    print(
        f"pipeline ok: {len(manifest['artifacts'])} artifacts in "
        f"{config.output_dir} (seed {config.seed})"
    )
    return 0


def _cmd_export(args) -> int:
    net = read_graphml(args.network)
    partition = None
    if args.partition:
        by_topic = read_partition_csv(args.partition)
        labels = tuple(
            int(x) for x in _canonical(np.array([by_topic[t] for t in net.topics]))
        )
        partition = Partition(labels, modularity(net, labels), 1.0)
    node_metrics = read_metrics_csv(args.metrics) if args.metrics else None
    export_graph(net, partition, node_metrics, args.format, args.output)
    print(f"wrote {args.format} export to {args.output}")
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "ingest": _cmd_ingest,
    "build": _cmd_build,
    "metrics": _cmd_metrics,
    "nulls": _cmd_nulls,
    "communities": _cmd_communities,
    "dynamics": _cmd_dynamics,
    "stats": _cmd_stats,
    "run": _cmd_run,
    "export": _cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if hasattr(args, "exclusion") and isinstance(args.exclusion, str):
        args.exclusion = tuple(
            x.strip() for x in args.exclusion.split(",") if x.strip()
        )
    try:
        _apply_env_overrides(args)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (DataError, TopiknetError) as exc:
        cause = exc.__cause__
        if isinstance(cause, ConvergenceError) or isinstance(exc, ConvergenceError):
            code = 4
        elif isinstance(cause, ConfigError):
            code = 2
        else:
            code = 3
        print(f"error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    raise SystemExit(main())
