"""Tips and cycle-closing nodes: the ftip witness set.

A tip has no incident grey edges at all, which under the traversal
rules makes tips exactly the sources and sinks of the graph (the root
and the end are always tips). Cycle-closing nodes are the targets of
DFS back edges; only L nodes can close a cycle because R nodes never
receive grey edges. One iterative DFS finds every cycle-closing node,
including those of nested and overlapping cycles, since every directed
cycle contains at least one back edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .biedged import BiedgedGraph, NodeSide
from .errors import RootingError

_WHITE, _GRAY, _BLACK = 0, 1, 2


def find_tips(b: BiedgedGraph) -> set[NodeSide]:
    return {
        b.node_side_of(i) for i in range(b.n_nodes) if b.grey_degree(i) == 0
    }


def find_cycle_closers(b: BiedgedGraph) -> set[tuple[NodeSide, tuple[NodeSide, NodeSide]]]:
    """Cycle-closing nodes with one closing grey edge each.

    Iterative DFS from the root, children visited in ascending
    (segment id, side) order so results are reproducible. A back edge
    (u, v) onto a GRAY node records v as a cycle closer; the first
    closing edge found for a node is kept.
    """
    if b.root is None:
        raise RootingError("cycle detection needs a rooted graph")
    ranks = b.ranks()
    color = bytearray(b.n_nodes)
    closers: dict[int, tuple[int, int]] = {}

    # stack holds (node, iterator position) over pre-sorted successor lists
    succ: dict[int, list[int]] = {}
    stack = [(b.root, 0)]
    color[b.root] = _GRAY
    succ[b.root] = sorted(b.successors(b.root), key=ranks.__getitem__)
    while stack:
        u, i = stack[-1]
        children = succ[u]
        if i == len(children):
            stack.pop()
            color[u] = _BLACK
            del succ[u]
            continue
        stack[-1] = (u, i + 1)
        v = children[i]
        if color[v] == _WHITE:
            color[v] = _GRAY
            succ[v] = sorted(b.successors(v), key=ranks.__getitem__)
            stack.append((v, 0))
        elif color[v] == _GRAY and v not in closers:
            closers[v] = (u, v)

    unvisited = [b.name(i) for i in range(b.n_nodes) if color[i] == _WHITE]
    if unvisited:
        shown = ", ".join(unvisited[:20])
        raise RootingError(f"{len(unvisited)} nodes unreachable from root: {shown}")

    return {
        (b.node_side_of(v), (b.node_side_of(u), b.node_side_of(v)))
        for v, (u, _) in closers.items()
    }


@dataclass
class FtipSet:
    """Union of tips and cycle-closing nodes scanned by the LCA classifier."""

    tips: set[NodeSide]
    cycle_closers: set[tuple[NodeSide, tuple[NodeSide, NodeSide]]]
    ftip: set[NodeSide] = field(init=False)

    def __post_init__(self):
        self.ftip = set(self.tips) | {node for node, _ in self.cycle_closers}

    @property
    def closer_nodes(self) -> set[NodeSide]:
        return {node for node, _ in self.cycle_closers}

    def scan_order(self) -> list[NodeSide]:
        """Tips first, then cycle closers, each ascending; the classifier
        takes the first witness in this order."""
        from .biedged import node_sort_key

        tips = sorted(self.tips, key=node_sort_key)
        closers = sorted(self.closer_nodes - self.tips, key=node_sort_key)
        return tips + closers


def build_ftip(tips, closers) -> FtipSet:
    return FtipSet(set(tips), set(closers))


def compute_ftip(b: BiedgedGraph) -> FtipSet:
    return build_ftip(find_tips(b), find_cycle_closers(b))
