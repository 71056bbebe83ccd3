"""snarlscan: ultrabubble enumeration in pangenome variation graphs.

Classifies the snarls of a biedged variation graph as ultrabubbles two
independent ways: constant-time LCA queries on a BFS tree against the
set of tips and cycle-closing nodes, and the per-snarl subgraph scan,
with full GFA preprocessing, root/sink construction, a brute-force
snarl enumerator for cross-validation, and a benchmark harness.
"""

__version__ = "0.1.0"

from .biedged import (
    BfsTree,
    BiedgedGraph,
    NodeSide,
    bfs_tree,
    choose_end,
    connected_components,
    to_biedged,
)
from .features import FtipSet, build_ftip, compute_ftip, find_cycle_closers, find_tips
from .gfa import (
    BidirectedGraph,
    forwardize,
    parse_gfa,
    reverse_complement,
    strip_same_side_links,
    write_gfa,
)
from .lca import LcaIndex, build_index, lca_naive, load_index, save_index
from .pipeline import PipelineConfig, RunReport, emit_reports, run_pipeline
from .rooting import (
    Condensation,
    candidate_roots,
    condense,
    outermost_rl_snarl_in_scc,
    synthesize_root,
    synthesize_sink,
)
from .snarls import (
    SnarlPair,
    check_snarl_pair,
    classify_pair,
    enumerate_snarls_naive,
    find_snarl_pairs,
    load_snarls,
)
from .synth import SynthParams, generate, generate_gfa
from .ultrabubbles import (
    Verdict,
    classify_lca,
    classify_naive,
    crosscheck,
    snarl_component,
)

__all__ = [
    "BfsTree",
    "BidirectedGraph",
    "BiedgedGraph",
    "Condensation",
    "FtipSet",
    "LcaIndex",
    "NodeSide",
    "PipelineConfig",
    "RunReport",
    "SnarlPair",
    "SynthParams",
    "Verdict",
    "bfs_tree",
    "build_ftip",
    "build_index",
    "candidate_roots",
    "check_snarl_pair",
    "choose_end",
    "classify_lca",
    "classify_naive",
    "classify_pair",
    "compute_ftip",
    "condense",
    "connected_components",
    "crosscheck",
    "emit_reports",
    "enumerate_snarls_naive",
    "find_cycle_closers",
    "find_snarl_pairs",
    "find_tips",
    "forwardize",
    "generate",
    "generate_gfa",
    "lca_naive",
    "load_index",
    "load_snarls",
    "outermost_rl_snarl_in_scc",
    "parse_gfa",
    "reverse_complement",
    "run_pipeline",
    "save_index",
    "snarl_component",
    "strip_same_side_links",
    "synthesize_root",
    "synthesize_sink",
    "to_biedged",
    "write_gfa",
]
