"""Ultrabubble classification of snarls, two independent ways.

The LCA route rejects every LL/RR and LR snarl outright (they always
contain the component of the root or of the end) and scans each R-L
snarl against the ftip set: a witness t lies strictly between the
frontiers exactly when LCA(t, sn1) = sn1 and LCA(t, sn2) != sn2 on the
BFS tree, which costs O(K * |ftip|) with O(1) queries.

The naive route extracts each snarl's component after deleting the two
frontier black edges and scans it for directed cycles and for tips,
O(n + m) per snarl. Both routes must agree on every snarl; crosscheck
wires that equivalence into the pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .biedged import BiedgedGraph, NodeSide
from .errors import CrosscheckMismatch, MalformedSnarlError
from .features import FtipSet
from .lca import LcaIndex
from .snarls import SnarlPair

REASON_NONE = "none"
REASON_LL_RR = "orientation_LL_RR"
REASON_LR = "orientation_LR"
REASON_FTIP = "ftip_witness"
REASON_CYCLE = "cycle_found"
REASON_TIP = "tip_found"


@dataclass(frozen=True)
class Verdict:
    snarl: SnarlPair
    is_ultrabubble: bool
    reason: str = REASON_NONE
    witness: NodeSide | None = None


def classify_lca(snarls, ftip: FtipSet, idx: LcaIndex) -> list[Verdict]:
    """Classify snarls with LCA queries against the ftip witness set.

    Witness scan order is tips first, then cycle closers, ascending;
    the first hit is recorded, so results are reproducible."""
    g = idx.graph
    verdicts: list[Verdict | None] = [None] * len(snarls)

    rl_pos = []
    for i, s in enumerate(snarls):
        if s.orientation == "RL":
            rl_pos.append(i)
        elif s.orientation == "LR":
            verdicts[i] = Verdict(s, False, REASON_LR)
        else:
            verdicts[i] = Verdict(s, False, REASON_LL_RR)

    if rl_pos:
        k = len(rl_pos)
        sn1 = np.array([g.index(snarls[i].sn1) for i in rl_pos], dtype=np.int64)
        sn2 = np.array([g.index(snarls[i].sn2) for i in rl_pos], dtype=np.int64)
        witness = np.full(k, -1, dtype=np.int64)
        open_mask = np.ones(k, dtype=bool)
        for t in ftip.scan_order():
            ti = g.index(t)
            t_arr = np.full(k, ti, dtype=np.int64)
            hit = (idx.lca_batch(t_arr, sn1) == sn1) & (idx.lca_batch(t_arr, sn2) != sn2)
            new = open_mask & hit
            witness[new] = ti
            open_mask &= ~hit
            if not open_mask.any():
                break
        for j, i in enumerate(rl_pos):
            s = snarls[i]
            if witness[j] == -1:
                verdicts[i] = Verdict(s, True)
            else:
                verdicts[i] = Verdict(s, False, REASON_FTIP, g.node_side_of(int(witness[j])))
    return verdicts  # type: ignore[return-value]


def snarl_component(b: BiedgedGraph, sn1: NodeSide, sn2: NodeSide) -> list[int]:
    """Nodes of the component containing both frontiers after deleting
    their black edges; raises if the frontiers end up separated."""
    x, y = b.index(sn1), b.index(sn2)
    bx, by = b.black_of[x], b.black_of[y]
    seen = {x}
    stack = [x]
    while stack:
        u = stack.pop()
        if b.black_of[u] not in (bx, by):
            v = b.partner[u]
            if v not in seen:
                seen.add(v)
                stack.append(v)
        for v in b.grey_out[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
        for v in b.grey_in[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if y not in seen:
        raise MalformedSnarlError(
            f"frontiers {sn1} and {sn2} are not in one component after deleting "
            "their black edges; separation violated"
        )
    return sorted(seen, key=b.ranks().__getitem__)


def _naive_one(b: BiedgedGraph, s: SnarlPair) -> Verdict:
    members = snarl_component(b, s.sn1, s.sn2)
    x, y = b.index(s.sn1), b.index(s.sn2)
    bx, by = b.black_of[x], b.black_of[y]

    # tip scan: any non-frontier node with no grey edge at all (the
    # component is closed, so local and global grey degree coincide)
    for v in members:
        if v != x and v != y and b.grey_degree(v) == 0:
            return Verdict(s, False, REASON_TIP, b.node_side_of(v))

    # cycle scan: colored DFS within the component under the traversal
    # rules, skipping the two deleted black edges; a back edge onto a
    # GRAY node is a directed cycle
    ranks = b.ranks()

    def succ(u):
        out = []
        if b.node_side[u] == "L":
            if b.black_of[u] not in (bx, by):
                out.append(b.partner[u])
        else:
            out.extend(b.grey_out[u])
        out.sort(key=ranks.__getitem__)
        return out

    color = {}
    for s0 in members:
        if color.get(s0):
            continue
        stack = [(s0, iter(succ(s0)))]
        color[s0] = 1
        while stack:
            u, children = stack[-1]
            advanced = False
            for v in children:
                c = color.get(v, 0)
                if c == 0:
                    color[v] = 1
                    stack.append((v, iter(succ(v))))
                    advanced = True
                    break
                if c == 1:
                    return Verdict(s, False, REASON_CYCLE, b.node_side_of(v))
            if not advanced:
                color[u] = 2
                stack.pop()
    return Verdict(s, True)


def classify_naive(snarls, b: BiedgedGraph) -> list[Verdict]:
    """Definition-level classification: reject on any directed cycle or
    any internal tip in the snarl's component."""
    return [_naive_one(b, s) for s in snarls]


@dataclass
class CrosscheckReport:
    total: int
    mismatches: list  # (SnarlPair, Verdict, Verdict)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        if self.ok:
            return f"crosscheck: {self.total} snarls, verdicts identical"
        lines = [f"crosscheck: {len(self.mismatches)} of {self.total} snarls disagree"]
        for s, va, vb in self.mismatches:
            lines.append(
                f"  {s.sn1}\t{s.sn2}\tlca={'UL' if va.is_ultrabubble else va.reason}"
                f"\tnaive={'UL' if vb.is_ultrabubble else vb.reason}"
            )
        return "\n".join(lines)


def crosscheck(a: list[Verdict], b: list[Verdict]) -> CrosscheckReport:
    """Per-snarl boolean agreement between two verdict lists."""
    if len(a) != len(b):
        raise CrosscheckMismatch(f"verdict lists differ in length: {len(a)} vs {len(b)}")
    mismatches = []
    for va, vb in zip(a, b):
        if va.snarl.name_pair() != vb.snarl.name_pair():
            raise CrosscheckMismatch(
                f"verdict lists are not over the same snarls: "
                f"{va.snarl.name_pair()} vs {vb.snarl.name_pair()}"
            )
        if va.is_ultrabubble != vb.is_ultrabubble:
            mismatches.append((va.snarl, va, vb))
    return CrosscheckReport(len(a), mismatches)


def write_verdicts_tsv(verdicts) -> str:
    """sn1, sn2, orientation, verdict, reason, witness columns; trivial
    ultrabubbles are marked in the verdict column for downstream filters."""
    lines = []
    for v in verdicts:
        s = v.snarl
        if v.is_ultrabubble:
            word = "ultrabubble-trivial" if s.trivial else "ultrabubble"
        else:
            word = "rejected"
        lines.append(
            "\t".join(
                [
                    str(s.sn1),
                    str(s.sn2),
                    s.orientation,
                    word,
                    v.reason,
                    str(v.witness) if v.witness is not None else "-",
                ]
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def count_ultrabubbles(verdicts) -> tuple[int, int]:
    ul = sum(1 for v in verdicts if v.is_ultrabubble)
    return ul, len(verdicts) - ul
