"""Bipartite directed biedged graph and its BFS tree.

Each segment contributes one black edge directed L -> R between its two
node sides; adjacencies are grey edges directed R -> L. Under these
traversal rules the graph is bipartite and isomorphic to a directed
graph: L nodes sit at even BFS depths, R nodes at odd depths, and every
black edge is a tree edge of any BFS from the root.

Nodes are integers internally (adjacency lists, hot loops); the public
API speaks NodeSide values named "SEGID_L" / "SEGID_R".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple

from .errors import RootingError, StructureError
from .gfa import BidirectedGraph, link_side_pair

_CHUNK = re.compile(r"(\d+)|(\D+)")


class NodeSide(NamedTuple):
    seg: str
    side: str  # "L" or "R"

    def __str__(self):
        return f"{self.seg}_{self.side}"

    @classmethod
    def parse(cls, name: str) -> "NodeSide":
        seg, _, side = name.rpartition("_")
        if side not in ("L", "R") or not seg:
            raise StructureError(f"bad node name {name!r}, expected SEGID_L or SEGID_R")
        return cls(seg, side)


def seg_sort_key(seg: str):
    """Natural sort key: digit runs compare numerically, text runs lexically."""
    return tuple(
        (0, int(num)) if num else (1, txt) for num, txt in _CHUNK.findall(seg)
    )


def node_sort_key(ns: NodeSide):
    return (seg_sort_key(ns.seg), 0 if ns.side == "L" else 1)


class BiedgedGraph:
    """Biedged graph with integer node indexing and deduplicated grey edges.

    Grey multi-edges are stored once with a multiplicity count; every
    separation/minimality/traversal question here depends only on
    connectivity, never on multiplicity.
    """

    def __init__(self):
        self.node_seg: list[str] = []
        self.node_side: list[str] = []
        self._name_to_idx: dict[str, int] = {}
        self.partner: list[int] = []
        self.black_of: list[int] = []  # node -> black edge id
        self.blacks: list[tuple[int, int]] = []  # black id -> (L idx, R idx)
        self.black_label: list[str] = []  # original segment label per black edge
        self.grey_out: list[list[int]] = []
        self.grey_in: list[list[int]] = []
        self.grey_count: dict[tuple[int, int], int] = {}
        self.root: int | None = None
        self.end: int | None = None
        self._ranks: list[int] | None = None

    # -- construction ---------------------------------------------------

    def _add_node(self, seg: str, side: str) -> int:
        name = f"{seg}_{side}"
        if name in self._name_to_idx:
            raise StructureError(f"duplicate node {name}")
        idx = len(self.node_seg)
        self.node_seg.append(seg)
        self.node_side.append(side)
        self._name_to_idx[name] = idx
        self.partner.append(-1)
        self.black_of.append(-1)
        self.grey_out.append([])
        self.grey_in.append([])
        self._ranks = None
        return idx

    def add_segment(self, seg: str, label: str | None = None) -> tuple[int, int]:
        l = self._add_node(seg, "L")
        r = self._add_node(seg, "R")
        self._pair_black(l, r, label if label is not None else seg)
        return l, r

    def _pair_black(self, l: int, r: int, label: str) -> int:
        bid = len(self.blacks)
        self.blacks.append((l, r))
        self.black_label.append(label)
        self.partner[l] = r
        self.partner[r] = l
        self.black_of[l] = bid
        self.black_of[r] = bid
        return bid

    def add_grey(self, u: int, v: int):
        """Grey edge u -> v; u must be an R node and v an L node."""
        if self.node_side[u] != "R" or self.node_side[v] != "L":
            raise StructureError(
                f"grey edge {self.name(u)} -> {self.name(v)} violates the R->L rule"
            )
        key = (u, v)
        if key in self.grey_count:
            self.grey_count[key] += 1
            return
        self.grey_count[key] = 1
        self.grey_out[u].append(v)
        self.grey_in[v].append(u)

    def split_black_edge(self, bid: int, seg_a: str, seg_b: str) -> tuple[int, int]:
        """Split black edge (n, r) into (n, r2) and (n2, r), keeping the
        original label on both halves. Returns (r2, n2). No grey edges
        are added here; callers wire the new nodes as needed."""
        n, r = self.blacks[bid]
        label = self.black_label[bid]
        r2 = self._add_node(seg_a, "R")
        n2 = self._add_node(seg_b, "L")
        self.blacks[bid] = (n, r2)
        self.partner[n] = r2
        self.partner[r2] = n
        self.black_of[r2] = bid
        self._pair_black(n2, r, label)
        return r2, n2

    def copy(self) -> "BiedgedGraph":
        g = BiedgedGraph()
        g.node_seg = list(self.node_seg)
        g.node_side = list(self.node_side)
        g._name_to_idx = dict(self._name_to_idx)
        g.partner = list(self.partner)
        g.black_of = list(self.black_of)
        g.blacks = list(self.blacks)
        g.black_label = list(self.black_label)
        g.grey_out = [list(a) for a in self.grey_out]
        g.grey_in = [list(a) for a in self.grey_in]
        g.grey_count = dict(self.grey_count)
        g.root = self.root
        g.end = self.end
        return g

    # -- inspection -----------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self.node_seg)

    @property
    def n_black(self) -> int:
        return len(self.blacks)

    @property
    def n_grey(self) -> int:
        return len(self.grey_count)

    def name(self, idx: int) -> str:
        return f"{self.node_seg[idx]}_{self.node_side[idx]}"

    def node_side_of(self, idx: int) -> NodeSide:
        return NodeSide(self.node_seg[idx], self.node_side[idx])

    def index(self, ns) -> int:
        if isinstance(ns, NodeSide):
            name = str(ns)
        elif isinstance(ns, str):
            name = ns
        else:
            raise TypeError(f"expected NodeSide or name, got {type(ns)!r}")
        try:
            return self._name_to_idx[name]
        except KeyError:
            raise StructureError(f"unknown node {name!r}") from None

    def has_node(self, name: str) -> bool:
        return name in self._name_to_idx

    def partner_of(self, ns: NodeSide) -> NodeSide:
        return self.node_side_of(self.partner[self.index(ns)])

    def root_side(self) -> NodeSide | None:
        return None if self.root is None else self.node_side_of(self.root)

    def end_side(self) -> NodeSide | None:
        return None if self.end is None else self.node_side_of(self.end)

    def ranks(self) -> list[int]:
        """rank[i] = position of node i under (segment key, side) order."""
        if self._ranks is None:
            order = sorted(
                range(self.n_nodes),
                key=lambda i: (seg_sort_key(self.node_seg[i]), self.node_side[i]),
            )
            ranks = [0] * self.n_nodes
            for pos, i in enumerate(order):
                ranks[i] = pos
            self._ranks = ranks
        return self._ranks

    def successors(self, i: int) -> list[int]:
        """Traversal-rule successors: black L->R, grey R->L."""
        if self.node_side[i] == "L":
            return [self.partner[i]]
        return self.grey_out[i]

    def predecessors(self, i: int) -> list[int]:
        if self.node_side[i] == "R":
            return [self.partner[i]]
        return self.grey_in[i]

    def sources(self) -> list[int]:
        """L nodes with no incoming grey edge (no node enters an L otherwise)."""
        return [
            i
            for i in range(self.n_nodes)
            if self.node_side[i] == "L" and not self.grey_in[i]
        ]

    def sinks(self) -> list[int]:
        """R nodes with no outgoing grey edge."""
        return [
            i
            for i in range(self.n_nodes)
            if self.node_side[i] == "R" and not self.grey_out[i]
        ]

    def grey_degree(self, i: int) -> int:
        return len(self.grey_out[i]) + len(self.grey_in[i])

    def undirected_neighbors(self, i: int):
        yield self.partner[i]
        yield from self.grey_out[i]
        yield from self.grey_in[i]

    def signature(self):
        """Structural identity used by tests: names, edges, root/end."""
        blacks = sorted((self.name(a), self.name(b)) for a, b in self.blacks)
        greys = sorted(
            (self.name(u), self.name(v), c) for (u, v), c in self.grey_count.items()
        )
        return (
            tuple(blacks),
            tuple(greys),
            None if self.root is None else self.name(self.root),
            None if self.end is None else self.name(self.end),
        )

    @classmethod
    def from_segments(cls, segments, grey_edges=(), root=None) -> "BiedgedGraph":
        """Build from segment ids and grey edges given as node names or
        NodeSides; convenience constructor for tests and synthesis."""
        g = cls()
        for seg in segments:
            g.add_segment(seg)
        for u, v in grey_edges:
            ui = g.index(u if isinstance(u, (NodeSide, str)) else str(u))
            vi = g.index(v if isinstance(v, (NodeSide, str)) else str(v))
            g.add_grey(ui, vi)
        if root is not None:
            g.root = g.index(root)
        return g


def to_biedged(g: BidirectedGraph) -> BiedgedGraph:
    """Biedged form of a forward-only (or same-side-stripped) graph.

    One black edge per segment, one grey edge per link oriented
    R(from) -> L(to). A residual same-side link is a structure error.
    """
    b = BiedgedGraph()
    for seg in g.segments:
        b.add_segment(seg)
    for link in g.links:
        (sa, side_a), (sb, side_b) = link_side_pair(link)
        if side_a == side_b:
            raise StructureError(
                f"link {link.src}{link.src_orient}->{link.dst}{link.dst_orient} joins two "
                f"{side_a} nodes; strip or forwardize the graph first"
            )
        if side_a == "R":
            b.add_grey(b.index(f"{sa}_R"), b.index(f"{sb}_L"))
        else:
            b.add_grey(b.index(f"{sb}_R"), b.index(f"{sa}_L"))
    return b


def connected_components(b: BiedgedGraph) -> list[BiedgedGraph]:
    """Partition by undirected connectivity over black + grey edges.

    Components are ordered by their smallest contained segment id. Root
    and end carry over to whichever component contains them.
    """
    comp = [-1] * b.n_nodes
    n_comp = 0
    for start in range(b.n_nodes):
        if comp[start] != -1:
            continue
        stack = [start]
        comp[start] = n_comp
        while stack:
            u = stack.pop()
            for v in b.undirected_neighbors(u):
                if comp[v] == -1:
                    comp[v] = n_comp
                    stack.append(v)
        n_comp += 1

    members: list[list[int]] = [[] for _ in range(n_comp)]
    for i in range(b.n_nodes):
        members[comp[i]].append(i)
    order = sorted(
        range(n_comp),
        key=lambda c: min(seg_sort_key(b.node_seg[i]) for i in members[c]),
    )

    out = []
    for c in order:
        sub = BiedgedGraph()
        idx_map = {}
        seen_black = set()
        for i in members[c]:
            bid = b.black_of[i]
            if bid in seen_black:
                continue
            seen_black.add(bid)
            l, r = b.blacks[bid]
            li = sub._add_node(b.node_seg[l], "L")
            ri = sub._add_node(b.node_seg[r], "R")
            sub._pair_black(li, ri, b.black_label[bid])
            idx_map[l], idx_map[r] = li, ri
        for (u, v), count in b.grey_count.items():
            if comp[u] == c:
                sub.grey_count[(idx_map[u], idx_map[v])] = count
                sub.grey_out[idx_map[u]].append(idx_map[v])
                sub.grey_in[idx_map[v]].append(idx_map[u])
        if b.root is not None and comp[b.root] == c:
            sub.root = idx_map[b.root]
        if b.end is not None and comp[b.end] == c:
            sub.end = idx_map[b.end]
        out.append(sub)
    return out


@dataclass
class BfsTree:
    """BFS tree over a rooted biedged graph: parent and depth per node.

    Depths count edges from the root; the parity invariant (L even,
    R odd) is checked at build time. Grey-parent ties at equal depth go
    to the parent with the smallest (segment id, side)."""

    graph: BiedgedGraph
    parent: list[int]  # -1 at the root
    depth: list[int]

    def parent_of(self, ns: NodeSide) -> NodeSide | None:
        p = self.parent[self.graph.index(ns)]
        return None if p == -1 else self.graph.node_side_of(p)

    def depth_of(self, ns: NodeSide) -> int:
        return self.depth[self.graph.index(ns)]


def bfs_tree(b: BiedgedGraph) -> BfsTree:
    """BFS from the root under the traversal rules.

    Each level is processed in ascending (segment id, side) order, so
    when several grey parents reach an L node at equal depth the
    smallest parent wins. Every black edge ends up a tree edge because
    R nodes are only reachable through their own L node.
    """
    if b.root is None:
        raise RootingError("graph has no root; run root synthesis first")
    if b.node_side[b.root] != "L":
        raise StructureError(f"root {b.name(b.root)} is not an L node")

    ranks = b.ranks()
    parent = [-2] * b.n_nodes  # -2 unvisited, -1 root
    depth = [-1] * b.n_nodes
    parent[b.root] = -1
    depth[b.root] = 0
    level = [b.root]
    while level:
        level.sort(key=ranks.__getitem__)
        nxt = []
        for u in level:
            du = depth[u]
            for v in b.successors(u):
                if parent[v] == -2:
                    parent[v] = u
                    depth[v] = du + 1
                    nxt.append(v)
        level = nxt

    unreachable = [b.name(i) for i in range(b.n_nodes) if parent[i] == -2]
    if unreachable:
        shown = ", ".join(unreachable[:20])
        more = f" (+{len(unreachable) - 20} more)" if len(unreachable) > 20 else ""
        raise RootingError(f"{len(unreachable)} nodes unreachable from root: {shown}{more}")

    for i in range(b.n_nodes):
        if (depth[i] % 2 == 0) != (b.node_side[i] == "L"):
            raise StructureError(
                f"depth parity violated at {b.name(i)} (depth {depth[i]})"
            )
    return BfsTree(b, parent, depth)


def choose_end(b: BiedgedGraph, t: BfsTree) -> NodeSide:
    """Deepest sink; ties broken by smallest segment id."""
    sinks = b.sinks()
    if not sinks:
        raise StructureError("graph has no sink; run sink synthesis first")
    ranks = b.ranks()
    best = max(sinks, key=lambda i: (t.depth[i], -ranks[i]))
    return b.node_side_of(best)
