"""Root and sink construction that preserves every ultrabubble.

A unique root is guaranteed by condensing strongly connected components,
taking the in-degree-zero supernodes of the condensation as candidate
roots, and wiring an artificial black edge 00_L-00_R with grey edges
from 00_R into each candidate. Singleton candidates are attached
directly. A cyclic candidate needs care: attaching into the middle of a
snarl would break its separation, so when the SCC holds mixed R-L snarl
pairs, a non-nested one is picked by DFS finishing times and the black
edge entering its right frontier is split in two, the new gap node
becoming the attachment point. Sink construction mirrors the whole
procedure with an artificial ZZ_L-ZZ_R edge on the reversed graph.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .biedged import BiedgedGraph, NodeSide, node_sort_key
from .errors import StructureError
from .snarls import find_snarl_pairs

log = logging.getLogger(__name__)

ROOT_SEG = "00"
SINK_SEG = "ZZ"

# SCCs larger than this skip the snarl-aware split and fall back to a
# plain attachment with a warning; snarl preservation inside them is
# then unverified.
SCC_SNARL_LIMIT = 2000


@dataclass
class Condensation:
    graph: BiedgedGraph
    supernodes: list[list[int]]  # sorted members, supernodes sorted by smallest member
    f: list[int]  # node index -> supernode index
    dag_edges: set[tuple[int, int]]

    def in_degree_zero(self) -> list[int]:
        indeg = [0] * len(self.supernodes)
        for _, b in self.dag_edges:
            indeg[b] += 1
        return [i for i in range(len(self.supernodes)) if indeg[i] == 0]

    def out_degree_zero(self) -> list[int]:
        outdeg = [0] * len(self.supernodes)
        for a, _ in self.dag_edges:
            outdeg[a] += 1
        return [i for i in range(len(self.supernodes)) if outdeg[i] == 0]

    def members(self, i: int) -> list[NodeSide]:
        return [self.graph.node_side_of(v) for v in self.supernodes[i]]


def condense(b: BiedgedGraph) -> Condensation:
    """Tarjan SCC decomposition under the traversal rules, O(n + m)."""
    n = b.n_nodes
    index = [-1] * n
    low = [0] * n
    on_stack = bytearray(n)
    scc_of = [-1] * n
    scc_stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0

    for start in range(n):
        if index[start] != -1:
            continue
        work = [(start, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                scc_stack.append(v)
                on_stack[v] = 1
            succ = b.successors(v)
            recursed = False
            for i in range(pi, len(succ)):
                w = succ[i]
                if index[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    recursed = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if recursed:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                if low[v] < low[pv]:
                    low[pv] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = scc_stack.pop()
                    on_stack[w] = 0
                    scc_of[w] = len(sccs)
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)

    ranks = b.ranks()
    for comp in sccs:
        comp.sort(key=ranks.__getitem__)
    order = sorted(range(len(sccs)), key=lambda i: ranks[sccs[i][0]])
    remap = [0] * len(sccs)
    for pos, old in enumerate(order):
        remap[old] = pos
    supernodes = [sccs[old] for old in order]
    f = [remap[scc_of[v]] for v in range(n)]

    dag_edges = set()
    for v in range(n):
        for w in b.successors(v):
            if f[v] != f[w]:
                dag_edges.add((f[v], f[w]))
    return Condensation(b, supernodes, f, dag_edges)


def candidate_roots(c: Condensation) -> list[list[NodeSide]]:
    """Supernodes with condensation in-degree zero, deterministic order."""
    return [c.members(i) for i in c.in_degree_zero()]


def _mixed_pairs_in_scc(sub: BiedgedGraph):
    """Snarl pairs of an SCC subgraph with one R and one L frontier,
    returned as (r, l). Orientation classes need a root, which an SCC
    lacks; the split rule only needs the side roles."""
    pairs = []
    for x, y, _trivial in find_snarl_pairs(sub, max_nodes=None):
        if x.side == y.side:
            continue
        r, l = (x, y) if x.side == "R" else (y, x)
        pairs.append((r, l))
    pairs.sort(key=lambda p: (node_sort_key(p[0]), node_sort_key(p[1])))
    return pairs


def _scc_subgraph(b: BiedgedGraph, members: list[int]):
    member_set = set(members)
    sub = BiedgedGraph()
    idx_map = {}
    for v in members:
        if b.node_side[v] != "L":
            continue
        p = b.partner[v]
        if p not in member_set:
            raise StructureError(
                f"SCC splits black edge {b.name(v)}-{b.name(p)}; graph is malformed"
            )
        li = sub._add_node(b.node_seg[v], "L")
        ri = sub._add_node(b.node_seg[p], "R")
        sub._pair_black(li, ri, b.black_label[b.black_of[v]])
        idx_map[v], idx_map[p] = li, ri
    for (u, v), count in b.grey_count.items():
        if u in member_set and v in member_set:
            sub.grey_count[(idx_map[u], idx_map[v])] = count
            sub.grey_out[idx_map[u]].append(idx_map[v])
            sub.grey_in[idx_map[v]].append(idx_map[u])
    return sub, idx_map


def _finishing_times(g: BiedgedGraph, start: int, reverse: bool) -> dict[int, int]:
    ranks = g.ranks()
    neigh = g.predecessors if reverse else g.successors
    finish: dict[int, int] = {}
    seen = {start}
    t = 0
    stack = [(start, 0)]
    order = {start: sorted(neigh(start), key=ranks.__getitem__)}
    while stack:
        u, i = stack[-1]
        kids = order[u]
        if i == len(kids):
            stack.pop()
            finish[u] = t
            t += 1
            continue
        stack[-1] = (u, i + 1)
        v = kids[i]
        if v not in seen:
            seen.add(v)
            order[v] = sorted(neigh(v), key=ranks.__getitem__)
            stack.append((v, 0))
    return finish


def outermost_rl_snarl_in_scc(sub: BiedgedGraph, pairs, reverse: bool = False):
    """Pick a non-nested mixed snarl of an SCC by DFS finishing times.

    A DFS started at the right frontier of any snarl finishes the right
    frontier of every snarl it is nested in after that snarl's left
    frontier; if no snarl shows that inversion the start snarl itself is
    non-nested, otherwise the outermost offender (highest finishing time
    of its right frontier) is returned. With reverse=True the same logic
    runs on the reversed graph with the left frontiers leading."""
    if not pairs:
        raise ValueError("no snarl pairs supplied")
    first = pairs[0]
    start_ns = first[1] if reverse else first[0]
    finish = _finishing_times(sub, sub.index(start_ns), reverse)

    def tf(ns):
        return finish[sub.index(ns)]

    violators = []
    for r, l in pairs:
        lead_node, other = (l, r) if reverse else (r, l)
        if tf(lead_node) < tf(other):
            violators.append((r, l))
    if not violators:
        return first
    if reverse:
        return max(violators, key=lambda p: tf(p[1]))
    return max(violators, key=lambda p: tf(p[0]))


def _unique_seg(g: BiedgedGraph, base: str, letter: str) -> str:
    k = 0
    while True:
        cand = f"{base}~{letter}{k if k else ''}"
        if not g.has_node(f"{cand}_L") and not g.has_node(f"{cand}_R"):
            return cand
        k += 1


def _attach_point_for_scc(g: BiedgedGraph, members: list[int], for_sink: bool,
                          scc_snarl_limit: int):
    """Node of the main graph that the artificial source (or sink) should
    touch for one multi-node SCC candidate; splits a black edge when the
    SCC contains mixed snarl pairs."""
    ranks = g.ranks()
    want_side = "R" if for_sink else "L"
    fallback = min(
        (v for v in members if g.node_side[v] == want_side), key=ranks.__getitem__
    )
    if len(members) > scc_snarl_limit:
        log.warning(
            "SCC with %d nodes exceeds the snarl scan limit (%d); attaching %s "
            "directly, snarl preservation inside it is unverified",
            len(members), scc_snarl_limit, g.name(fallback),
        )
        return fallback
    sub, _ = _scc_subgraph(g, members)
    pairs = _mixed_pairs_in_scc(sub)
    if not pairs:
        return fallback
    r, l = outermost_rl_snarl_in_scc(sub, pairs, reverse=for_sink)

    if not for_sink:
        # split the black edge (n, r) entering the right frontier; the new
        # gap node n2 ahead of r is where the source connects
        bid = g.black_of[g.index(r)]
        label = g.black_label[bid]
        _r2, n2 = g.split_black_edge(bid, _unique_seg(g, label, "a"), _unique_seg(g, label, "b"))
        return n2
    # mirrored: split the black edge (l, m) leaving the left frontier; the
    # new node r2 after l feeds the sink, and a grey r2 -> n2 keeps the
    # severed half reachable from the root
    bid = g.black_of[g.index(l)]
    label = g.black_label[bid]
    r2, n2 = g.split_black_edge(bid, _unique_seg(g, label, "a"), _unique_seg(g, label, "b"))
    g.add_grey(r2, n2)
    return r2


def synthesize_root(b: BiedgedGraph, force: bool = False,
                    scc_snarl_limit: int = SCC_SNARL_LIMIT) -> BiedgedGraph:
    """Return a copy with a unique root reaching every node.

    A graph that already has a single working root is returned with that
    root assigned and no other change, unless force is set."""
    c = condense(b)
    cand = c.in_degree_zero()
    if not cand:
        raise StructureError("empty graph has no candidate roots")

    if not force and len(cand) == 1 and len(c.supernodes[cand[0]]) == 1:
        v = c.supernodes[cand[0]][0]
        if b.node_side[v] != "L":
            raise StructureError(f"sole candidate root {b.name(v)} is not an L node")
        g = b.copy()
        g.root = v
        return g

    if b.has_node(f"{ROOT_SEG}_L") or b.has_node(f"{ROOT_SEG}_R"):
        raise StructureError(f"reserved root segment id {ROOT_SEG!r} already in use")

    g = b.copy()
    l00, r00 = g.add_segment(ROOT_SEG)
    for ci in cand:
        members = c.supernodes[ci]
        if len(members) == 1:
            v = members[0]
            if g.node_side[v] != "L":
                raise StructureError(
                    f"candidate root {g.name(v)} is an R-side singleton; "
                    "no L node to attach"
                )
            g.add_grey(r00, v)
        else:
            attach = _attach_point_for_scc(g, members, False, scc_snarl_limit)
            g.add_grey(r00, attach)
    g.root = l00

    # every node must now be reachable from 00_L
    seen = {l00}
    stack = [l00]
    while stack:
        u = stack.pop()
        for v in g.successors(u):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) != g.n_nodes:
        raise StructureError(
            f"root synthesis left {g.n_nodes - len(seen)} nodes unreachable"
        )
    return g


def synthesize_sink(b: BiedgedGraph, force: bool = False,
                    scc_snarl_limit: int = SCC_SNARL_LIMIT) -> BiedgedGraph:
    """Mirror of synthesize_root: guarantee at least one sink by wiring
    out-degree-zero condensation candidates into an artificial ZZ edge."""
    c = condense(b)
    cand = c.out_degree_zero()
    if not cand:
        raise StructureError("empty graph has no candidate sinks")

    if not force and len(cand) == 1 and len(c.supernodes[cand[0]]) == 1:
        v = c.supernodes[cand[0]][0]
        if b.node_side[v] != "R":
            raise StructureError(f"sole candidate sink {b.name(v)} is not an R node")
        return b.copy()

    if b.has_node(f"{SINK_SEG}_L") or b.has_node(f"{SINK_SEG}_R"):
        raise StructureError(f"reserved sink segment id {SINK_SEG!r} already in use")

    g = b.copy()
    lzz, _rzz = g.add_segment(SINK_SEG)
    for ci in cand:
        members = c.supernodes[ci]
        if len(members) == 1:
            v = members[0]
            if g.node_side[v] != "R":
                raise StructureError(
                    f"candidate sink {g.name(v)} is an L-side singleton; "
                    "no R node to attach"
                )
            g.add_grey(v, lzz)
        else:
            attach = _attach_point_for_scc(g, members, True, scc_snarl_limit)
            g.add_grey(attach, lzz)
    return g
