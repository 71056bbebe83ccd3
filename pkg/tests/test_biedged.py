"""Biedged construction, BFS tree, components, and end selection."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snarlscan.biedged import (
    BiedgedGraph,
    NodeSide,
    bfs_tree,
    choose_end,
    connected_components,
    node_sort_key,
    seg_sort_key,
    to_biedged,
)
from snarlscan.errors import RootingError, StructureError
from snarlscan.gfa import parse_gfa
from snarlscan.synth import SynthParams, generate

from .conftest import build_graph


class TestToBiedged:
    def test_trivial_shape(self):
        b = to_biedged(parse_gfa("S\t1\tACG\nS\t2\tT\nL\t1\t+\t2\t+\t0M\n"))
        assert b.n_nodes == 4 and b.n_black == 2 and b.n_grey == 1
        names = {b.name(i) for i in range(b.n_nodes)}
        assert names == {"1_L", "1_R", "2_L", "2_R"}
        (u, v), = b.grey_count
        assert (b.name(u), b.name(v)) == ("1_R", "2_L")

    def test_empty(self):
        b = to_biedged(parse_gfa(""))
        assert b.n_nodes == 0 and b.n_black == 0 and b.n_grey == 0

    def test_node_count_doubles_segments(self):
        b = generate(SynthParams(40, 0.3, 0, 0, seed=3))
        assert b.n_nodes == 2 * b.n_black

    def test_residual_same_side_link_rejected(self):
        g = parse_gfa("S\t1\tA\nS\t2\tC\nL\t1\t+\t2\t-\t0M\n")
        with pytest.raises(StructureError, match=r"1\+->2-"):
            to_biedged(g)

    def test_double_reverse_link_direction(self):
        b = to_biedged(parse_gfa("S\t1\tA\nS\t2\tC\nL\t1\t-\t2\t-\t0M\n"))
        (u, v), = b.grey_count
        assert (b.name(u), b.name(v)) == ("2_R", "1_L")

    def test_multi_edge_deduplicated_with_count(self):
        text = "S\t1\tA\nS\t2\tC\nL\t1\t+\t2\t+\t0M\nL\t1\t+\t2\t+\t0M\n"
        b = to_biedged(parse_gfa(text))
        assert b.n_grey == 1
        assert list(b.grey_count.values()) == [2]

    def test_self_loop_grey_kept(self):
        b = to_biedged(parse_gfa("S\t1\tA\nL\t1\t+\t1\t+\t0M\n"))
        (u, v), = b.grey_count
        assert (b.name(u), b.name(v)) == ("1_R", "1_L")


class TestInvariants:
    def test_grey_edges_are_r_to_l(self, diamond_graph):
        for u, v in diamond_graph.grey_count:
            assert diamond_graph.node_side[u] == "R"
            assert diamond_graph.node_side[v] == "L"

    def test_grey_wrong_direction_rejected(self, trivial_graph):
        with pytest.raises(StructureError, match="R->L"):
            trivial_graph.add_grey(
                trivial_graph.index("1_L"), trivial_graph.index("2_L")
            )

    def test_partner_involution(self, diamond_graph):
        g = diamond_graph
        for i in range(g.n_nodes):
            ns = g.node_side_of(i)
            assert g.partner_of(g.partner_of(ns)) == ns
            assert g.partner_of(ns).seg == ns.seg
            assert g.partner_of(ns).side != ns.side

    def test_node_side_parse(self):
        assert NodeSide.parse("12_L") == NodeSide("12", "L")
        assert str(NodeSide("x_y", "R")) == "x_y_R"
        assert NodeSide.parse("x_y_R") == NodeSide("x_y", "R")
        with pytest.raises(StructureError):
            NodeSide.parse("nounderscore")

    def test_natural_segment_order(self):
        assert seg_sort_key("2") < seg_sort_key("10")
        assert seg_sort_key("2") < seg_sort_key("2_rc")
        assert node_sort_key(NodeSide("1", "L")) < node_sort_key(NodeSide("1", "R"))


class TestComponents:
    def test_connected_graph_is_singleton(self, diamond_graph):
        assert len(connected_components(diamond_graph)) == 1

    def test_two_trivial_snarls(self):
        b = BiedgedGraph.from_segments(
            ["1", "2", "8", "9"], [("1_R", "2_L"), ("8_R", "9_L")]
        )
        comps = connected_components(b)
        assert [c.n_nodes for c in comps] == [4, 4]
        assert comps[0].has_node("1_L") and comps[1].has_node("8_L")

    def test_root_carries_over(self):
        b = BiedgedGraph.from_segments(
            ["1", "2", "8"], [("1_R", "2_L")], root="1_L"
        )
        comps = connected_components(b)
        assert comps[0].root is not None and comps[0].name(comps[0].root) == "1_L"
        assert comps[1].root is None


class TestBfsTree:
    def test_trivial_depths(self, trivial_graph):
        t = bfs_tree(trivial_graph)
        depths = {trivial_graph.name(i): t.depth[i] for i in range(4)}
        assert depths == {"1_L": 0, "1_R": 1, "2_L": 2, "2_R": 3}

    def test_diamond_tiebreak(self, diamond_graph):
        # 4_L is reachable at depth 4 from both 2_R and 3_R; the smaller
        # segment id wins
        t = bfs_tree(diamond_graph)
        four_l = NodeSide("4", "L")
        assert t.depth_of(four_l) == 4
        assert t.parent_of(four_l) == NodeSide("2", "R")

    def test_black_edges_are_tree_edges(self, diamond_graph):
        t = bfs_tree(diamond_graph)
        for l, r in diamond_graph.blacks:
            assert t.parent[r] == l

    def test_depth_parity(self):
        b = generate(SynthParams(60, 0.4, 2, 2, seed=11))
        t = bfs_tree(b)
        for i in range(b.n_nodes):
            assert (t.depth[i] % 2 == 0) == (b.node_side[i] == "L")

    def test_missing_root(self, diamond_graph):
        diamond_graph.root = None
        with pytest.raises(RootingError, match="no root"):
            bfs_tree(diamond_graph)

    def test_unreachable_nodes_listed(self):
        b = build_graph(3, [(1, 2)], root="1_L")  # segment 3 disconnected
        with pytest.raises(RootingError, match="3_L"):
            bfs_tree(b)

    def test_r_root_rejected(self, trivial_graph):
        trivial_graph.root = trivial_graph.index("1_R")
        with pytest.raises(StructureError, match="not an L node"):
            bfs_tree(trivial_graph)


class TestChooseEnd:
    def test_trivial(self, trivial_graph):
        assert choose_end(trivial_graph, bfs_tree(trivial_graph)) == NodeSide("2", "R")

    def test_diamond(self, diamond_graph):
        assert choose_end(diamond_graph, bfs_tree(diamond_graph)) == NodeSide("4", "R")

    def test_deeper_sink_wins(self):
        # sink 5_R at depth 5, sink 4_R at depth 9 down the longer arm
        b = build_graph(5, [(1, 5), (1, 2), (2, 3), (3, 4)], root="1_L")
        assert choose_end(b, bfs_tree(b)) == NodeSide("4", "R")

    def test_tie_smaller_segment(self):
        b = build_graph(3, [(1, 2), (1, 3)], root="1_L")
        assert choose_end(b, bfs_tree(b)) == NodeSide("2", "R")

    def test_no_sink_error(self):
        b = build_graph(2, [(1, 2), (2, 1)], root=None)
        b.root = b.index("1_L")
        with pytest.raises(StructureError, match="no sink"):
            choose_end(b, bfs_tree(b))


class TestDeepestNodeParity:
    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_max_depth_node_is_r(self, seed):
        # an L node at max depth would put its R partner one deeper
        p = SynthParams(10 + seed % 50, (seed % 4) * 0.2, 0, seed % 3, seed=seed)
        try:
            b = generate(p)
        except ValueError:
            return
        t = bfs_tree(b)
        deepest = max(range(b.n_nodes), key=lambda i: t.depth[i])
        assert b.node_side[deepest] == "R"
