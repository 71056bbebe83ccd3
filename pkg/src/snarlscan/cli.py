"""Command-line interface.

Subcommands mirror the pipeline stages so each is independently
runnable: preprocess, features, snarls, ultrabubbles, synth, bench.
Exit codes: 0 ok, 1 classifier disagreement, 2 I/O or parse error,
3 structure error. SNARLSCAN_THREADS overrides the worker count used
by the brute-force snarl scan.
"""

from __future__ import annotations

import argparse
import logging
import os
import statistics
import sys

from . import __version__, features, gfa, pipeline, snarls, ultrabubbles
from .biedged import node_sort_key
from .errors import SnarlscanError
from .synth import SynthParams, generate_gfa

log = logging.getLogger("snarlscan")


def _workers_from_env() -> int:
    raw = os.environ.get("SNARLSCAN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        log.warning("ignoring non-integer SNARLSCAN_THREADS=%r", raw)
        return 1


def _add_shared(p: argparse.ArgumentParser):
    p.add_argument("--mode", choices=("strip", "forwardize"), default="strip",
                   help="preprocessing for bidirected input (default strip)")
    p.add_argument("--component", type=int, default=None, metavar="K",
                   help="select the K-th connected component (1-based)")
    p.add_argument("--synthesize-root", action="store_true",
                   help="force artificial root construction even if a root exists")
    p.add_argument("--no-synthesize", action="store_true",
                   help="fail instead of synthesizing a missing root or sink")
    p.add_argument("--minimality", choices=snarls.MINIMALITY_MODES, default="frontier",
                   help="snarl minimality reading for the brute-force scan")
    p.add_argument("--max-nodes", type=int, default=snarls.DEFAULT_NODE_LIMIT,
                   help="brute-force refusal threshold in biedged nodes")
    p.add_argument("-q", "--quiet", action="store_true", help="suppress run log")


def _config(args, path, snarl_source="brute", method="both") -> pipeline.PipelineConfig:
    return pipeline.PipelineConfig(
        path=path,
        graph_name=os.path.basename(path),
        preprocess=args.mode,
        component=args.component,
        allow_synthesis=not args.no_synthesize,
        force_root_synthesis=args.synthesize_root,
        snarl_source=snarl_source,
        method=method,
        minimality=args.minimality,
        max_nodes=args.max_nodes if args.max_nodes > 0 else None,
        workers=_workers_from_env(),
    )


def _write_out(text: str, out_path: str | None):
    if out_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="snarlscan", description=__doc__)
    ap.add_argument("--version", action="version", version=f"snarlscan {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="strip or forwardize a GFA, optionally per component")
    p.add_argument("graph")
    p.add_argument("-o", "--output", default="-")
    _add_shared(p)

    p = sub.add_parser("features", help="emit tips and cycle-closing nodes as TSV")
    p.add_argument("graph")
    p.add_argument("-o", "--output", default="-")
    _add_shared(p)

    p = sub.add_parser("snarls", help="enumerate snarls (brute force) or load a snarl TSV")
    p.add_argument("graph")
    p.add_argument("--method", choices=("brute", "load"), default="brute")
    p.add_argument("--input", default=None, help="snarl TSV when --method load")
    p.add_argument("-o", "--output", default="-")
    _add_shared(p)

    p = sub.add_parser("ultrabubbles", help="classify snarls as ultrabubbles")
    p.add_argument("graph")
    p.add_argument("--method", choices=("lca", "naive", "both"), default="both")
    p.add_argument("--snarls", default="brute", metavar="FILE|brute",
                   help="snarl source: 'brute' or a snarl TSV path (default brute)")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--report", default=None, metavar="FILE",
                   help="also write a run report (format from --format)")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    _add_shared(p)

    p = sub.add_parser("synth", help="generate a synthetic GFA graph")
    p.add_argument("--segments", type=int, required=True)
    p.add_argument("--bubble-rate", type=float, default=0.0)
    p.add_argument("--cycles", type=int, default=0)
    p.add_argument("--tips", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")

    p = sub.add_parser("bench", help="run the pipeline on graphs and emit a report table")
    p.add_argument("graphs", nargs="+")
    p.add_argument("--method", choices=("lca", "naive", "both"), default="both")
    p.add_argument("--snarls", default="brute", metavar="FILE|brute")
    p.add_argument("--repeat", type=int, default=1,
                   help="rerun each graph R times; report minimum timings")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    _add_shared(p)

    return ap


def _cmd_preprocess(args) -> int:
    with open(args.graph, "r", encoding="utf-8") as fh:
        g = gfa.parse_gfa(fh.read())
    if args.mode == "forwardize":
        g = gfa.forwardize(g)
        log.info("forwardized: %d segments, %d links", g.n_segments(), g.n_links())
    else:
        g, removed = gfa.strip_same_side_links(g)
        log.info("removed %d same-side links", removed)
    if args.component is not None:
        g = gfa.select_component(g, args.component)
    _write_out(gfa.write_gfa(g), args.output)
    return 0


def _cmd_features(args) -> int:
    b, _tree, _removed = pipeline.prepare_graph(_config(args, args.graph))
    ft = features.compute_ftip(b)
    lines = [f"tip\t{t}" for t in sorted(ft.tips, key=node_sort_key)]
    for node, (u, v) in sorted(ft.cycle_closers, key=lambda c: node_sort_key(c[0])):
        lines.append(f"cycle_closer\t{node}\t{u}->{v}")
    _write_out("\n".join(lines) + ("\n" if lines else ""), args.output)
    return 0


def _cmd_snarls(args) -> int:
    source = "brute"
    if args.method == "load":
        if not args.input:
            log.error("--method load requires --input FILE")
            return 2
        source = args.input
    cfg = _config(args, args.graph, snarl_source=source, method="lca")
    result = pipeline.run_pipeline(cfg)
    _write_out(snarls.write_snarls_tsv(result.snarls), args.output)
    log.info("%d snarls (%s)", len(result.snarls), result.report.snarl_source)
    return 0


def _cmd_ultrabubbles(args) -> int:
    cfg = _config(args, args.graph, snarl_source=args.snarls, method=args.method)
    result = pipeline.run_pipeline(cfg)
    verdicts = result.verdicts_lca if result.verdicts_lca is not None else result.verdicts_naive
    _write_out(ultrabubbles.write_verdicts_tsv(verdicts), args.output)
    if args.report:
        _write_out(pipeline.emit_reports([result.report], args.format), args.report)
    log.info(
        "%d snarls: %d ultrabubbles, %d rejected",
        result.report.snarl_count, result.report.ultrabubbles, result.report.rejected,
    )
    if result.crosscheck is not None and not result.crosscheck.ok:
        sys.stderr.write(result.crosscheck.summary() + "\n")
        return 1
    return 0


def _cmd_synth(args) -> int:
    params = SynthParams(args.segments, args.bubble_rate, args.cycles, args.tips, args.seed)
    _write_out(generate_gfa(params), args.out)
    return 0


def _cmd_bench(args) -> int:
    reports = []
    disagreement = False
    for path in args.graphs:
        cfg = _config(args, path, snarl_source=args.snarls, method=args.method)
        runs = [pipeline.run_pipeline(cfg) for _ in range(max(1, args.repeat))]
        best = runs[0].report
        if len(runs) > 1:
            for key in pipeline.TIMING_KEYS:
                samples = [r.report.timings.get(key, 0.0) for r in runs]
                best.timings[key] = min(samples)
                log.info("%s %s: min %.4fs median %.4fs", path, key,
                         min(samples), statistics.median(samples))
        reports.append(best)
        if any(r.crosscheck is not None and not r.crosscheck.ok for r in runs):
            disagreement = True
            sys.stderr.write(runs[-1].crosscheck.summary() + "\n")
    sys.stdout.write(pipeline.emit_reports(reports, args.format))
    return 1 if disagreement else 0


_COMMANDS = {
    "preprocess": _cmd_preprocess,
    "features": _cmd_features,
    "snarls": _cmd_snarls,
    "ultrabubbles": _cmd_ultrabubbles,
    "synth": _cmd_synth,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if getattr(args, "quiet", False) else logging.INFO,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return _COMMANDS[args.command](args)
    except pipeline.PipelineError as exc:
        sys.stderr.write(f"error: {exc}\n")
        if exc.partial:
            sys.stderr.write(f"partial report: {exc.partial}\n")
        return exc.exit_code
    except SnarlscanError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
