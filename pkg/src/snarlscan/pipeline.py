"""Pipeline orchestration, timing, and report emission.

Stage order follows the processing narrative: parse, preprocess,
component selection, root/end handling, BFS tree, tips and cycle
closers, LCA table, snarl acquisition, classification. Each stage is
wall-clock timed; reports mirror the benchmark table column structure.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field

from . import biedged, features, gfa, lca, rooting, snarls, ultrabubbles
from .errors import SnarlscanError, StructureError

log = logging.getLogger(__name__)

TIMING_KEYS = ("snarl_enum", "pre_table", "algo_lca", "algo_naive")

REPORT_COLUMNS = (
    "graph_name",
    "nodes",
    "edges",
    "removed_same_side",
    "biedged_nodes",
    "tips",
    "cycles",
    "ftip",
    "snarl_count",
    "snarl_source",
    "ultrabubbles",
    "rejected",
    "snarl_enum_s",
    "pre_table_s",
    "algo_lca_s",
    "algo_naive_s",
)

SCHEMA_VERSION = 1


@dataclass
class RunReport:
    graph_name: str
    nodes: int  # segment count (= black edges), the benchmark table convention
    edges: int  # grey edge count
    removed_same_side: int
    biedged_nodes: int
    tips: int
    cycles: int
    ftip: int
    snarl_count: int
    snarl_source: str
    ultrabubbles: int
    rejected: int
    timings: dict = field(default_factory=dict)

    def to_row(self):
        return [
            self.graph_name,
            str(self.nodes),
            str(self.edges),
            str(self.removed_same_side),
            str(self.biedged_nodes),
            str(self.tips),
            str(self.cycles),
            str(self.ftip),
            str(self.snarl_count),
            self.snarl_source,
            str(self.ultrabubbles),
            str(self.rejected),
            *(f"{self.timings.get(k, 0.0):.6f}" for k in TIMING_KEYS),
        ]


@dataclass
class PipelineConfig:
    path: str
    graph_name: str | None = None
    preprocess: str = "strip"  # strip | forwardize
    component: int | None = None  # 1-based, per deterministic component order
    allow_synthesis: bool = True
    force_root_synthesis: bool = False
    snarl_source: str = "brute"  # "brute" or a snarl TSV path
    method: str = "both"  # lca | naive | both
    minimality: str = "frontier"
    max_nodes: int | None = snarls.DEFAULT_NODE_LIMIT
    workers: int = 1


@dataclass
class PipelineResult:
    report: RunReport
    graph: biedged.BiedgedGraph
    tree: biedged.BfsTree
    ftip: features.FtipSet
    snarls: list
    verdicts_lca: list | None
    verdicts_naive: list | None
    crosscheck: ultrabubbles.CrosscheckReport | None


class PipelineError(SnarlscanError):
    """Stage failure wrapper; keeps the stage name and the cause."""

    def __init__(self, stage, cause, partial=None):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.partial = partial or {}
        self.exit_code = getattr(cause, "exit_code", 3)


def prepare_graph(config: PipelineConfig):
    """Parse and preprocess up to a rooted biedged graph with an end.

    Returns (graph, tree, removed_count). Shared by the pipeline and the
    CLI subcommands that stop before classification."""
    partial = {"graph_name": config.graph_name or config.path}

    def stage(name, fn):
        try:
            return fn()
        except SnarlscanError as exc:
            raise PipelineError(name, exc, partial) from exc
        except OSError as exc:
            err = PipelineError(name, exc, partial)
            err.exit_code = 2
            raise err from exc

    def read():
        with open(config.path, "r", encoding="utf-8") as fh:
            return fh.read()

    text = stage("read", read)
    g0 = stage("parse", lambda: gfa.parse_gfa(text))

    removed = 0
    if config.preprocess == "forwardize":
        g1 = stage("preprocess", lambda: gfa.forwardize(g0))
    elif config.preprocess == "strip":
        g1, removed = stage("preprocess", lambda: gfa.strip_same_side_links(g0))
    else:
        raise PipelineError("preprocess", ValueError(f"unknown mode {config.preprocess!r}"), partial)
    partial["removed_same_side"] = removed

    b = stage("biedge", lambda: biedged.to_biedged(g1))

    def pick_component():
        comps = biedged.connected_components(b)
        if config.component is not None:
            if not 1 <= config.component <= len(comps):
                raise StructureError(
                    f"component {config.component} out of range; graph has {len(comps)}"
                )
            return comps[config.component - 1]
        if len(comps) > 1:
            raise StructureError(
                f"graph has {len(comps)} connected components; pick one with --component"
            )
        return b

    b = stage("component", pick_component)

    def ensure_root():
        before_nodes, before_grey = b.n_nodes, b.n_grey
        c = rooting.condense(b)
        cand = c.in_degree_zero()
        simple = (
            len(cand) == 1
            and len(c.supernodes[cand[0]]) == 1
            and b.node_side[c.supernodes[cand[0]][0]] == "L"
        )
        if simple and not config.force_root_synthesis:
            g = b.copy()
            g.root = c.supernodes[cand[0]][0]
            return g
        if not config.allow_synthesis:
            raise StructureError(
                f"graph needs root synthesis ({len(cand)} candidate roots) "
                "but synthesis is disabled"
            )
        g = rooting.synthesize_root(b, force=config.force_root_synthesis)
        log.info(
            "root synthesis: +%d nodes, +%d grey edges, root %s",
            g.n_nodes - before_nodes, g.n_grey - before_grey, g.name(g.root),
        )
        return g

    b = stage("root", ensure_root)

    def ensure_sink():
        if b.sinks():
            return b
        if not config.allow_synthesis:
            raise StructureError("graph has no sink and synthesis is disabled")
        before_nodes, before_grey = b.n_nodes, b.n_grey
        g = rooting.synthesize_sink(b)
        log.info(
            "sink synthesis: +%d nodes, +%d grey edges",
            g.n_nodes - before_nodes, g.n_grey - before_grey,
        )
        return g

    b = stage("sink", ensure_sink)

    tree = stage("bfs", lambda: biedged.bfs_tree(b))
    b.end = b.index(biedged.choose_end(b, tree))
    return b, tree, removed


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    partial = {"graph_name": config.graph_name or config.path}

    def stage(name, fn):
        try:
            return fn()
        except SnarlscanError as exc:
            if isinstance(exc, PipelineError):
                raise
            raise PipelineError(name, exc, partial) from exc

    b, tree, removed = prepare_graph(config)
    partial.update(nodes=b.n_black, edges=b.n_grey, biedged_nodes=b.n_nodes)

    ft = stage("features", lambda: features.compute_ftip(b))
    partial.update(tips=len(ft.tips), cycles=len(ft.closer_nodes), ftip=len(ft.ftip))

    timings = dict.fromkeys(TIMING_KEYS, 0.0)

    t0 = time.perf_counter()
    idx = stage("pre_table", lambda: lca.build_index(tree))
    timings["pre_table"] = time.perf_counter() - t0

    def get_snarls():
        if config.snarl_source == "brute":
            return snarls.enumerate_snarls_naive(
                b, tree,
                minimality=config.minimality,
                max_nodes=config.max_nodes,
                workers=config.workers,
            )
        return snarls.load_snarls(config.snarl_source, b, tree)

    t0 = time.perf_counter()
    snarl_list = stage("snarls", get_snarls)
    timings["snarl_enum"] = time.perf_counter() - t0
    source_label = "brute" if config.snarl_source == "brute" else "external"
    partial.update(snarl_count=len(snarl_list), snarl_source=source_label)

    verdicts_lca = verdicts_naive = None
    if config.method in ("lca", "both"):
        t0 = time.perf_counter()
        verdicts_lca = stage("algo_lca", lambda: ultrabubbles.classify_lca(snarl_list, ft, idx))
        timings["algo_lca"] = time.perf_counter() - t0
    if config.method in ("naive", "both"):
        t0 = time.perf_counter()
        verdicts_naive = stage("algo_naive", lambda: ultrabubbles.classify_naive(snarl_list, b))
        timings["algo_naive"] = time.perf_counter() - t0

    check = None
    if verdicts_lca is not None and verdicts_naive is not None:
        check = ultrabubbles.crosscheck(verdicts_lca, verdicts_naive)

    chosen = verdicts_lca if verdicts_lca is not None else verdicts_naive
    ul, rej = ultrabubbles.count_ultrabubbles(chosen)

    report = RunReport(
        graph_name=config.graph_name or config.path,
        nodes=b.n_black,
        edges=b.n_grey,
        removed_same_side=removed,
        biedged_nodes=b.n_nodes,
        tips=len(ft.tips),
        cycles=len(ft.closer_nodes),
        ftip=len(ft.ftip),
        snarl_count=len(snarl_list),
        snarl_source=source_label,
        ultrabubbles=ul,
        rejected=rej,
        timings=timings,
    )
    return PipelineResult(report, b, tree, ft, snarl_list, verdicts_lca, verdicts_naive, check)


def emit_reports(reports, fmt: str = "tsv") -> str:
    """Serialize one or more reports; rows are sorted by graph name and
    field order is stable."""
    reports = sorted(reports, key=lambda r: r.graph_name)
    if fmt == "tsv":
        lines = ["\t".join(REPORT_COLUMNS)]
        lines.extend("\t".join(r.to_row()) for r in reports)
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "reports": [
                {
                    "graph_name": r.graph_name,
                    "nodes": r.nodes,
                    "edges": r.edges,
                    "removed_same_side": r.removed_same_side,
                    "biedged_nodes": r.biedged_nodes,
                    "tips": r.tips,
                    "cycles": r.cycles,
                    "ftip": r.ftip,
                    "snarl_count": r.snarl_count,
                    "snarl_source": r.snarl_source,
                    "ultrabubbles": r.ultrabubbles,
                    "rejected": r.rejected,
                    "timings": {k: r.timings.get(k, 0.0) for k in TIMING_KEYS},
                }
            for r in reports],
        }
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def parse_reports(text: str) -> list[RunReport]:
    payload = json.loads(text)
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema {payload.get('schema_version')!r}")
    out = []
    for r in payload["reports"]:
        out.append(
            RunReport(
                graph_name=r["graph_name"],
                nodes=r["nodes"],
                edges=r["edges"],
                removed_same_side=r["removed_same_side"],
                biedged_nodes=r["biedged_nodes"],
                tips=r["tips"],
                cycles=r["cycles"],
                ftip=r["ftip"],
                snarl_count=r["snarl_count"],
                snarl_source=r["snarl_source"],
                ultrabubbles=r["ultrabubbles"],
                rejected=r["rejected"],
                timings=dict(r["timings"]),
            )
        )
    return out
