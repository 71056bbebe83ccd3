"""Constant-time LCA on the BFS tree via Euler tour + sparse-table RMQ.

Preprocessing is O(n log n) time and space (the plain sparse table,
not the space-efficient +-1 variant), queries are two table lookups.
Adjacent entries of the tour depth array differ by exactly +-1. The
index is immutable after build and safe for concurrent readers.
"""

from __future__ import annotations

import numpy as np

from .biedged import BfsTree, BiedgedGraph, NodeSide
from .errors import StructureError

_MAGIC = "snarlscan-lca"
_FORMAT_VERSION = 1


class LcaIndex:
    def __init__(self, graph: BiedgedGraph, euler, depths, first):
        self.graph = graph
        self.euler = euler  # tour of node indices, length 2n-1
        self.depths = depths  # depth per tour position
        self.first = first  # node index -> first tour position
        m = len(euler)
        self.log = np.zeros(m + 1, dtype=np.int32)
        for i in range(2, m + 1):
            self.log[i] = self.log[i >> 1] + 1
        k_max = int(self.log[m]) + 1
        table = np.zeros((k_max, m), dtype=np.int32)
        table[0] = np.arange(m, dtype=np.int32)
        for k in range(1, k_max):
            half = 1 << (k - 1)
            width = m - (1 << k) + 1
            left = table[k - 1, :width]
            right = table[k - 1, half : half + width]
            table[k, :width] = np.where(depths[left] <= depths[right], left, right)
        self.table = table

    # -- queries ----------------------------------------------------------

    def _lca_idx(self, a: int, b: int) -> int:
        fa, fb = self.first[a], self.first[b]
        if fa > fb:
            fa, fb = fb, fa
        j = self.log[fb - fa + 1]
        p1 = self.table[j, fa]
        p2 = self.table[j, fb - (1 << j) + 1]
        pos = p1 if self.depths[p1] <= self.depths[p2] else p2
        return int(self.euler[pos])

    def lca(self, a: NodeSide, b: NodeSide) -> NodeSide:
        g = self.graph
        return g.node_side_of(self._lca_idx(g.index(a), g.index(b)))

    def lca_batch(self, a_idx: np.ndarray, b_idx: np.ndarray) -> np.ndarray:
        """Vectorized LCA over two equal-length arrays of node indices."""
        fa = self.first[a_idx]
        fb = self.first[b_idx]
        lo = np.minimum(fa, fb)
        hi = np.maximum(fa, fb)
        j = self.log[hi - lo + 1]
        p1 = self.table[j, lo]
        p2 = self.table[j, hi - (np.int64(1) << j.astype(np.int64)) + 1]
        pos = np.where(self.depths[p1] <= self.depths[p2], p1, p2)
        return self.euler[pos]

    def check_pm1(self) -> bool:
        """Adjacent tour depths differ by exactly +-1."""
        if len(self.euler) == 1:
            return True
        return bool(np.all(np.abs(np.diff(self.depths.astype(np.int64))) == 1))


def build_index(t: BfsTree) -> LcaIndex:
    """Euler tour of the BFS tree with children in ascending
    (segment id, side) order, then the RMQ sparse table."""
    g = t.graph
    n = g.n_nodes
    roots = [i for i in range(n) if t.parent[i] == -1]
    if len(roots) != 1:
        raise StructureError(f"expected one root in the tree, found {len(roots)}")
    root = roots[0]

    ranks = g.ranks()
    children: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        p = t.parent[v]
        if p >= 0:
            children[p].append(v)
    for c in children:
        c.sort(key=ranks.__getitem__)

    euler = np.empty(2 * n - 1, dtype=np.int32)
    depths = np.empty(2 * n - 1, dtype=np.int32)
    first = np.full(n, -1, dtype=np.int32)
    pos = 0
    stack = [(root, 0)]
    euler[pos] = root
    depths[pos] = 0
    first[root] = 0
    pos += 1
    while stack:
        u, i = stack[-1]
        kids = children[u]
        if i == len(kids):
            stack.pop()
            if stack:
                p = stack[-1][0]
                euler[pos] = p
                depths[pos] = t.depth[p]
                pos += 1
            continue
        stack[-1] = (u, i + 1)
        v = kids[i]
        euler[pos] = v
        depths[pos] = t.depth[v]
        if first[v] == -1:
            first[v] = pos
        pos += 1
        stack.append((v, 0))
    if pos != 2 * n - 1:
        raise StructureError("tree traversal did not produce a 2n-1 tour; not a tree?")
    return LcaIndex(g, euler, depths, first)


def lca_naive(t: BfsTree, a: NodeSide, b: NodeSide) -> NodeSide:
    """Parent-pointer walk after depth equalization; test oracle only."""
    g = t.graph
    x, y = g.index(a), g.index(b)
    while t.depth[x] > t.depth[y]:
        x = t.parent[x]
    while t.depth[y] > t.depth[x]:
        y = t.parent[y]
    while x != y:
        x = t.parent[x]
        y = t.parent[y]
    return g.node_side_of(x)


def save_index(idx: LcaIndex, path) -> None:
    """Binary cache of the index; versioned so stale caches are rejected."""
    names = np.array([idx.graph.name(i) for i in range(idx.graph.n_nodes)])
    np.savez_compressed(
        path,
        magic=np.array(_MAGIC),
        version=np.array([_FORMAT_VERSION]),
        euler=idx.euler,
        depths=idx.depths,
        first=idx.first,
        names=names,
    )


def load_index(path, graph: BiedgedGraph) -> LcaIndex:
    with np.load(path, allow_pickle=False) as data:
        if str(data["magic"]) != _MAGIC or int(data["version"][0]) != _FORMAT_VERSION:
            raise StructureError(f"{path}: not a compatible LCA cache file")
        names = list(data["names"])
        if len(names) != graph.n_nodes or any(
            graph.name(i) != str(nm) for i, nm in enumerate(names)
        ):
            raise StructureError(f"{path}: cached index does not match this graph")
        return LcaIndex(graph, data["euler"].copy(), data["depths"].copy(), data["first"].copy())
