"""Snarl sets: by-definition enumeration on small graphs, external ingestion.

A pair of nodes {x, y} on distinct black edges is a snarl when

  separation: deleting the black edges of x and y leaves a component X
  that contains x and y but neither partner, and
  minimality: no single black edge inside X disconnects the pair.

Two minimality readings are implemented. "frontier" (default) fails a
pair only when an internal black edge separates x from y; "component"
fails on any internal black edge whose removal splits X at all, which
also forbids every snarl that contains a tip. Real variation graphs
reject many snarls for internal tips, so frontier is the default.

``check_snarl_pair`` is the definitional checker; the enumerator feeds
it candidates found per black edge via a bridge scan (a pair can only
separate if each black edge is a bridge once the other is removed), so
every emitted snarl has passed the literal definition check.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .biedged import BfsTree, BiedgedGraph, NodeSide, node_sort_key, seg_sort_key
from .errors import GfaParseError, SizeLimitError, StructureError

log = logging.getLogger(__name__)

MINIMALITY_MODES = ("frontier", "component")
DEFAULT_NODE_LIMIT = 5000


@dataclass(frozen=True)
class SnarlPair:
    sn1: NodeSide  # frontier closer to the root
    sn2: NodeSide
    orientation: str  # RL, LR, LL, RR
    source: str  # brute_force or external
    trivial: bool = False
    flag: str | None = None

    def key(self):
        return (node_sort_key(self.sn1), node_sort_key(self.sn2))

    def name_pair(self):
        return (str(self.sn1), str(self.sn2))


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _undirected_edges(b: BiedgedGraph):
    """(u, v, eid, multi) triples; black edge ids first, then greys."""
    edges = []
    for bid, (l, r) in enumerate(b.blacks):
        edges.append((l, r, bid, False))
    gid = b.n_black
    for (u, v), count in b.grey_count.items():
        edges.append((u, v, gid, count > 1))
        gid += 1
    return edges


def check_snarl_pair(b: BiedgedGraph, x: int, y: int, minimality: str = "frontier"):
    """Literal definition check for one node pair (integer indices).

    Returns (is_snarl, trivial). Used to verify every enumerator
    candidate and reused directly as the all-pairs oracle in tests.
    """
    if minimality not in MINIMALITY_MODES:
        raise ValueError(f"minimality must be one of {MINIMALITY_MODES}")
    bx, by = b.black_of[x], b.black_of[y]
    if bx == by:
        return False, False

    uf = _UnionFind(b.n_nodes)
    for l, r, eid, _ in _undirected_edges(b):
        if eid == bx or eid == by:
            continue
        uf.union(l, r)

    cx = uf.find(x)
    if uf.find(y) != cx:
        return False, False
    if uf.find(b.partner[x]) == cx or uf.find(b.partner[y]) == cx:
        return False, False

    members = [i for i in range(b.n_nodes) if uf.find(i) == cx]
    if not _minimality_holds(b, members, x, y, bx, by, minimality):
        return False, False
    return True, len(members) == 2


def _minimality_holds(b, members, x, y, bx, by, minimality):
    """No internal black bridge splits X ("component") or separates the
    frontier pair ("frontier"). Single bridge-finding DFS over X."""
    local = {node: i for i, node in enumerate(members)}
    nloc = len(members)
    adj: list[list[tuple[int, int, bool]]] = [[] for _ in range(nloc)]
    black_eids = set()
    for l, r, eid, multi in _undirected_edges(b):
        if eid == bx or eid == by:
            continue
        li = local.get(l)
        ri = local.get(r)
        if li is None or ri is None:
            continue
        adj[li].append((ri, eid, multi))
        adj[ri].append((li, eid, multi))
        if eid < b.n_black:
            black_eids.add(eid)
    if not black_eids:
        return True

    tin = [-1] * nloc
    tout = [0] * nloc
    low = [0] * nloc
    parent_eid = [-1] * nloc
    parent = [-1] * nloc
    it = [0] * nloc
    timer = 0
    bridges = []  # (eid, child local idx)
    for s0 in range(nloc):
        if tin[s0] != -1:
            continue
        stack = [s0]
        tin[s0] = low[s0] = timer
        timer += 1
        while stack:
            u = stack[-1]
            moved = False
            while it[u] < len(adj[u]):
                v, eid, multi = adj[u][it[u]]
                it[u] += 1
                if tin[v] == -1:
                    parent[v] = u
                    parent_eid[v] = eid
                    tin[v] = low[v] = timer
                    timer += 1
                    stack.append(v)
                    moved = True
                    break
                if eid == parent_eid[u] and not multi:
                    continue
                if tin[v] < low[u]:
                    low[u] = tin[v]
            if not moved:
                stack.pop()
                tout[u] = timer
                p = parent[u]
                if p != -1:
                    if low[u] < low[p]:
                        low[p] = low[u]
                    if low[u] > tin[p]:
                        bridges.append((parent_eid[u], u))

    xi, yi = local[x], local[y]
    for eid, child in bridges:
        if eid >= b.n_black:
            continue
        if minimality == "component":
            return False
        in_x = tin[child] <= tin[xi] < tout[child]
        in_y = tin[child] <= tin[yi] < tout[child]
        if in_x != in_y:
            return False
    return True


def _scan_black_edge(b, adj, s, minimality):
    """One pass of the enumerator: remove black edge s, find components
    and bridges, and test the four side pairs against every black bridge
    t > s. Soundly prunes pairs with a separating black bridge on the
    DFS tree path before running the full definitional check."""
    n = b.n_nodes
    comp = [-1] * n
    tin = [0] * n
    tout = [0] * n
    low = [0] * n
    depth = [0] * n
    parent = [-1] * n
    parent_eid = [-1] * n
    it = [0] * n
    timer = 0
    ncomp = 0
    black_bridges = []  # (bid, child node)
    bridge_eids = set()

    for s0 in range(n):
        if comp[s0] != -1:
            continue
        comp[s0] = ncomp
        stack = [s0]
        tin[s0] = low[s0] = timer
        timer += 1
        while stack:
            u = stack[-1]
            moved = False
            au = adj[u]
            while it[u] < len(au):
                v, eid, multi = au[it[u]]
                it[u] += 1
                if eid == s:
                    continue
                if comp[v] == -1:
                    comp[v] = ncomp
                    parent[v] = u
                    parent_eid[v] = eid
                    depth[v] = depth[u] + 1
                    tin[v] = low[v] = timer
                    timer += 1
                    stack.append(v)
                    moved = True
                    break
                if eid == parent_eid[u] and not multi:
                    continue
                if tin[v] < low[u]:
                    low[u] = tin[v]
            if not moved:
                stack.pop()
                tout[u] = timer
                p = parent[u]
                if p != -1:
                    if low[u] < low[p]:
                        low[p] = low[u]
                    if low[u] > tin[p]:
                        bridge_eids.add(parent_eid[u])
                        if parent_eid[u] < b.n_black:
                            black_bridges.append((parent_eid[u], u))
        ncomp += 1
        it[s0] = it[s0]  # keep lists referenced; no-op

    def clean_path(a, c):
        """True if the DFS tree path a..c crosses no black bridge."""
        while depth[a] > depth[c]:
            eid = parent_eid[a]
            if eid < b.n_black and eid in bridge_eids:
                return False
            a = parent[a]
        while depth[c] > depth[a]:
            eid = parent_eid[c]
            if eid < b.n_black and eid in bridge_eids:
                return False
            c = parent[c]
        while a != c:
            for eid in (parent_eid[a], parent_eid[c]):
                if eid < b.n_black and eid in bridge_eids:
                    return False
            a = parent[a]
            c = parent[c]
        return True

    ls, rs = b.blacks[s]
    found = []
    for t, child in black_bridges:
        if t <= s:
            continue
        ct_lo, ct_hi = tin[child], tout[child]

        def cid(w):
            return (comp[w], ct_lo <= tin[w] < ct_hi)

        for u in (ls, rs):
            for v in b.blacks[t]:
                if cid(u) != cid(v):
                    continue
                if cid(b.partner[u]) == cid(u) or cid(b.partner[v]) == cid(v):
                    continue
                if not clean_path(u, v):
                    continue
                ok, trivial = check_snarl_pair(b, u, v, minimality)
                if ok:
                    found.append((u, v, trivial))
    return found


def _scan_range(args):
    b, lo, hi, minimality = args
    adj = _build_adj(b)
    out = []
    for s in range(lo, hi):
        out.extend(_scan_black_edge(b, adj, s, minimality))
    return out


def _build_adj(b: BiedgedGraph):
    adj: list[list[tuple[int, int, bool]]] = [[] for _ in range(b.n_nodes)]
    for l, r, eid, multi in _undirected_edges(b):
        adj[l].append((r, eid, multi))
        adj[r].append((l, eid, multi))
    return adj


def find_snarl_pairs(
    b: BiedgedGraph,
    minimality: str = "frontier",
    max_nodes: int | None = DEFAULT_NODE_LIMIT,
    workers: int = 1,
):
    """All snarls of the graph as (x, y, trivial) NodeSide triples,
    unordered pairs normalized and sorted. Refuses oversized graphs."""
    if minimality not in MINIMALITY_MODES:
        raise ValueError(f"minimality must be one of {MINIMALITY_MODES}")
    if max_nodes is not None and b.n_nodes > max_nodes:
        raise SizeLimitError(
            f"graph has {b.n_nodes} biedged nodes, above the brute-force limit "
            f"{max_nodes}; raise the limit or load an external snarl set"
        )

    nb = b.n_black
    if workers > 1 and nb >= 4:
        chunk = (nb + workers - 1) // workers
        ranges = [(b, i, min(i + chunk, nb), minimality) for i in range(0, nb, chunk)]
        raw = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_scan_range, ranges):
                raw.extend(part)
    else:
        adj = _build_adj(b)
        raw = []
        for s in range(nb):
            raw.extend(_scan_black_edge(b, adj, s, minimality))

    out = []
    seen = set()
    for u, v, trivial in raw:
        a, c = b.node_side_of(u), b.node_side_of(v)
        if node_sort_key(c) < node_sort_key(a):
            a, c = c, a
        if (a, c) in seen:
            continue
        seen.add((a, c))
        out.append((a, c, trivial))
    out.sort(key=lambda r: (node_sort_key(r[0]), node_sort_key(r[1])))
    return out


def classify_pair(
    x: NodeSide,
    y: NodeSide,
    tree: BfsTree,
    source: str,
    trivial: bool = False,
    flag: str | None = None,
) -> SnarlPair:
    """Order a raw pair by BFS depth and derive its orientation class.

    Mixed R/L pairs can never tie on depth (parity); same-side ties are
    broken by the smaller segment id."""
    dx, dy = tree.depth_of(x), tree.depth_of(y)
    if dx > dy:
        x, y = y, x
    elif dx == dy:
        if x.side != y.side:
            raise StructureError(
                f"mixed-side pair {x}/{y} at equal depth {dx} violates parity"
            )
        if seg_sort_key(y.seg) < seg_sort_key(x.seg):
            x, y = y, x
    return SnarlPair(x, y, x.side + y.side, source, trivial, flag)


def enumerate_snarls_naive(
    b: BiedgedGraph,
    tree: BfsTree,
    minimality: str = "frontier",
    max_nodes: int | None = DEFAULT_NODE_LIMIT,
    workers: int = 1,
) -> list[SnarlPair]:
    """Brute-force snarls of a rooted graph, classified and sorted."""
    pairs = find_snarl_pairs(b, minimality=minimality, max_nodes=max_nodes, workers=workers)
    out = [classify_pair(x, y, tree, "brute_force", trivial) for x, y, trivial in pairs]
    out.sort(key=SnarlPair.key)
    return out


def is_trivial_pair(b: BiedgedGraph, sn1: NodeSide, sn2: NodeSide) -> bool:
    """A trivial snarl is a single grey edge whose separation component
    is exactly the two frontier nodes."""
    r = sn1 if sn1.side == "R" else sn2
    l = sn2 if sn1.side == "R" else sn1
    if r.side != "R" or l.side != "L":
        return False
    ri, li = b.index(r), b.index(l)
    return b.grey_out[ri] == [li] and b.grey_in[li] == [ri]


def load_snarls(path, b: BiedgedGraph, tree: BfsTree) -> list[SnarlPair]:
    """Read a snarl TSV (node1<TAB>node2[<TAB>flag]) against a graph.

    Repeated pairs are deduplicated with a warning; upstream flags such
    as acyclic/cyclic are carried through untouched."""
    out = []
    seen = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n\r")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) < 2:
                raise GfaParseError("snarl line needs two node columns", line_no)
            try:
                x = NodeSide.parse(fields[0])
                y = NodeSide.parse(fields[1])
                xi, yi = b.index(x), b.index(y)
            except StructureError as exc:
                raise GfaParseError(str(exc), line_no) from None
            if b.black_of[xi] == b.black_of[yi]:
                raise GfaParseError(
                    f"{x} and {y} share a black edge; not a valid snarl pair", line_no
                )
            flag = fields[2] if len(fields) > 2 else None
            key = frozenset((x, y))
            if key in seen:
                log.warning("%s line %d: duplicate snarl pair %s/%s skipped", path, line_no, x, y)
                continue
            seen[key] = True
            out.append(classify_pair(x, y, tree, "external", is_trivial_pair(b, x, y), flag))
    out.sort(key=SnarlPair.key)
    return out


def write_snarls_tsv(pairs) -> str:
    lines = []
    for p in pairs:
        row = [str(p.sn1), str(p.sn2)]
        if p.flag is not None:
            row.append(p.flag)
        lines.append("\t".join(row))
    return "\n".join(lines) + ("\n" if lines else "")
