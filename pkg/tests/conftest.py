"""Shared graph builders and independent oracles for the test suite."""

import itertools
from pathlib import Path

import pytest

from snarlscan.biedged import BiedgedGraph
from snarlscan.snarls import SnarlPair, check_snarl_pair
from snarlscan.ultrabubbles import classify_naive

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
LPA120 = DATA_DIR / "lpa120.gfa"


def build_graph(n_segments, links, root=None):
    """Biedged graph from 1-based segment count and (from, to) link pairs,
    all forward."""
    segs = [str(i) for i in range(1, n_segments + 1)]
    greys = [(f"{a}_R", f"{b}_L") for a, b in links]
    return BiedgedGraph.from_segments(segs, greys, root=root)


@pytest.fixture
def trivial_graph():
    # one grey edge between two black edges
    return build_graph(2, [(1, 2)], root="1_L")


@pytest.fixture
def diamond_graph():
    # two parallel single-segment branches between segments 1 and 4
    return build_graph(4, [(1, 2), (1, 3), (2, 4), (3, 4)], root="1_L")


@pytest.fixture
def e3_graph():
    # chain with a 2-segment directed cycle in the middle
    return build_graph(4, [(1, 2), (2, 3), (3, 2), (3, 4)], root="1_L")


def all_pairs_snarls(b, minimality="frontier"):
    """Independent enumeration oracle: run the definitional check over
    every eligible node pair. Quadratic; small graphs only."""
    out = []
    for x, y in itertools.combinations(range(b.n_nodes), 2):
        if b.black_of[x] == b.black_of[y]:
            continue
        ok, trivial = check_snarl_pair(b, x, y, minimality)
        if ok:
            a, c = b.node_side_of(x), b.node_side_of(y)
            from snarlscan.biedged import node_sort_key

            if node_sort_key(c) < node_sort_key(a):
                a, c = c, a
            out.append((a, c, trivial))
    out.sort()
    return out


def naive_ultrabubble_pairs(b, pairs):
    """Frontier name pairs of the ultrabubbles among the given raw snarl
    pairs, judged by the rootless definitional classifier."""
    out = set()
    for x, y, trivial in pairs:
        s = SnarlPair(x, y, "XX", "brute_force", trivial)
        if classify_naive([s], b)[0].is_ultrabubble:
            out.add(frozenset((str(x), str(y))))
    return out


def require_lpa120():
    if not LPA120.exists():
        pytest.skip(
            f"{LPA120} not present; fetch lpa120.gfa manually (see README, "
            "dataset table) and place it there to run the golden-count tests"
        )
