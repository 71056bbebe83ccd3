"""GFA parsing, writing, forwardization, and same-side stripping."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snarlscan.errors import GfaParseError, GfaReferenceError, StructureError
from snarlscan.gfa import (
    Link,
    forwardize,
    is_same_side_link,
    link_side_pair,
    parse_gfa,
    reverse_complement,
    select_component,
    spell_path,
    strip_same_side_links,
    write_gfa,
)

MINIMAL = "S\t1\tACG\nS\t2\tT\nL\t1\t+\t2\t+\t0M\n"


class TestParse:
    def test_minimal(self):
        g = parse_gfa(MINIMAL)
        assert g.n_segments() == 2
        assert g.n_links() == 1
        assert g.segments == {"1": "ACG", "2": "T"}

    def test_empty_input(self):
        g = parse_gfa("")
        assert g.n_segments() == 0 and g.n_links() == 0 and not g.paths

    def test_line_order_irrelevant(self):
        reordered = "L\t1\t+\t2\t+\t0M\nS\t2\tT\nS\t1\tACG\n"
        a, b = parse_gfa(MINIMAL), parse_gfa(reordered)
        assert a.segments == b.segments
        assert [l.key() for l in a.links] == [l.key() for l in b.links]

    def test_unknown_record_tolerated(self):
        g = parse_gfa("S\t1\tA\nX\twhatever\nS\t2\tC\n")
        assert g.n_segments() == 2

    def test_bytes_input(self):
        assert parse_gfa(MINIMAL.encode()).n_segments() == 2

    def test_wrong_field_count_reports_line(self):
        with pytest.raises(GfaParseError, match="line 2"):
            parse_gfa("S\t1\tA\nS\t2\n")

    def test_link_field_count(self):
        with pytest.raises(GfaParseError, match="L record"):
            parse_gfa("S\t1\tA\nS\t2\tC\nL\t1\t+\t2\t+\n")

    def test_unknown_segment_reference(self):
        with pytest.raises(GfaReferenceError, match="unknown segment '9'"):
            parse_gfa("S\t1\tA\nL\t1\t+\t9\t+\t0M\n")

    def test_duplicate_segment(self):
        with pytest.raises(GfaParseError, match="duplicate"):
            parse_gfa("S\t1\tA\nS\t1\tC\n")

    def test_sequence_case_normalized(self):
        assert parse_gfa("S\t1\tacgt\n").segments["1"] == "ACGT"

    def test_bad_sequence_characters(self):
        with pytest.raises(GfaParseError, match="unsupported characters"):
            parse_gfa("S\t1\tAXG\n")

    def test_paths_parsed(self):
        g = parse_gfa(MINIMAL + "P\tp1\t1+,2+\t*\n")
        assert g.paths[0].steps == [("1", "+"), ("2", "+")]

    def test_roundtrip(self):
        text = MINIMAL + "P\tp1\t1+,2+\t*\n"
        g = parse_gfa(text)
        again = parse_gfa(write_gfa(g))
        assert again.segments == g.segments
        assert [l.key() for l in again.links] == [l.key() for l in g.links]
        assert [(p.name, p.steps) for p in again.paths] == [
            (p.name, p.steps) for p in g.paths
        ]


class TestSideMapping:
    # independent enumeration of the four orientation cases: + at the
    # source uses its right end, - its left; + at the destination uses
    # its left end, - its right
    CASES = {
        ("+", "+"): (("1", "R"), ("2", "L")),
        ("+", "-"): (("1", "R"), ("2", "R")),
        ("-", "+"): (("1", "L"), ("2", "L")),
        ("-", "-"): (("1", "L"), ("2", "R")),
    }

    @pytest.mark.parametrize("so,do", sorted(CASES))
    def test_link_side_pair(self, so, do):
        assert link_side_pair(Link("1", so, "2", do)) == self.CASES[(so, do)]

    def test_same_side_cases(self):
        assert not is_same_side_link(Link("1", "+", "2", "+"))
        assert is_same_side_link(Link("1", "+", "2", "-"))  # R-R
        assert is_same_side_link(Link("1", "-", "2", "+"))  # L-L
        assert not is_same_side_link(Link("1", "-", "2", "-"))


class TestStrip:
    def test_ll_adjacency_removed(self):
        g = parse_gfa("S\t1\tA\nS\t2\tC\nL\t1\t-\t2\t+\t0M\n")
        out, removed = strip_same_side_links(g)
        assert removed == 1 and out.n_links() == 0

    def test_all_forward_untouched(self):
        out, removed = strip_same_side_links(parse_gfa(MINIMAL))
        assert removed == 0 and out.n_links() == 1

    def test_double_reverse_kept(self):
        g = parse_gfa("S\t1\tA\nS\t2\tC\nL\t1\t-\t2\t-\t0M\n")
        out, removed = strip_same_side_links(g)
        assert removed == 0 and out.n_links() == 1


class TestForwardize:
    def test_reverse_destination_gets_rc_copy(self):
        g = parse_gfa("S\t1\tA\nS\t2\tACG\nL\t1\t+\t2\t-\t0M\n")
        out = forwardize(g)
        assert out.segments["2_rc"] == "CGT"
        assert out.links[0].key() == ("1", "+", "2_rc", "+")

    def test_all_forward_identity(self):
        g = parse_gfa(MINIMAL)
        out = forwardize(g)
        assert out.segments == g.segments
        assert [l.key() for l in out.links] == [l.key() for l in g.links]

    def test_double_reverse_both_copies(self):
        g = parse_gfa("S\t1\tAA\nS\t2\tACG\nL\t1\t-\t2\t-\t0M\n")
        out = forwardize(g)
        assert out.links[0].key() == ("1_rc", "+", "2_rc", "+")
        assert out.segments["1_rc"] == "TT" and out.segments["2_rc"] == "CGT"

    def test_only_forward_links_remain(self):
        g = parse_gfa(
            "S\t1\tA\nS\t2\tC\nS\t3\tG\nL\t1\t+\t2\t-\t0M\nL\t2\t-\t3\t+\t0M\n"
        )
        out = forwardize(g)
        assert all(l.src_orient == "+" and l.dst_orient == "+" for l in out.links)

    def test_counts_at_most_doubled(self):
        g = parse_gfa(
            "S\t1\tA\nS\t2\tC\nL\t1\t-\t2\t-\t0M\nL\t2\t-\t1\t-\t0M\n"
        )
        out = forwardize(g)
        assert out.n_segments() <= 2 * g.n_segments()
        assert out.n_links() <= 2 * g.n_links()

    def test_idempotent(self):
        g = parse_gfa("S\t1\tAC\nS\t2\tGG\nS\t3\tT\nL\t1\t-\t2\t+\t2M\nL\t2\t+\t3\t-\t0M\n")
        once = forwardize(g)
        twice = forwardize(once)
        assert write_gfa(once) == write_gfa(twice)

    def test_overlap_reversed_on_single_flip(self):
        g = parse_gfa("S\t1\tA\nS\t2\tC\nL\t1\t+\t2\t-\t10M2D3M\n")
        assert forwardize(g).links[0].overlap == "3M2D10M"

    def test_overlap_kept_on_double_flip(self):
        g = parse_gfa("S\t1\tA\nS\t2\tC\nL\t1\t-\t2\t-\t10M2D3M\n")
        assert forwardize(g).links[0].overlap == "10M2D3M"

    def test_rc_suffix_collision_rejected(self):
        g = parse_gfa("S\t1\tA\nS\t1_rc\tC\nL\t1\t-\t1_rc\t+\t0M\n")
        with pytest.raises(StructureError, match="reserved id"):
            forwardize(g)

    def test_path_steps_rewritten(self):
        g = parse_gfa(
            "S\t1\tAC\nS\t2\tGT\nL\t1\t+\t2\t-\t0M\nP\tp\t1+,2-\t*\n"
        )
        out = forwardize(g)
        assert out.paths[0].steps == [("1", "+"), ("2_rc", "+")]

    def test_rc_copies_after_originals_in_output(self):
        g = parse_gfa("S\t1\tA\nS\t2\tACG\nL\t1\t+\t2\t-\t0M\n")
        lines = [l for l in write_gfa(forwardize(g)).splitlines() if l.startswith("S")]
        assert lines == ["S\t1\tA", "S\t2\tACG", "S\t2_rc\tCGT"]


def _random_bidirected(draw_segments, draw_links):
    lines = []
    for i, seq in enumerate(draw_segments, start=1):
        lines.append(f"S\t{i}\t{seq}")
    n = len(draw_segments)
    for a, ao, b, bo in draw_links:
        lines.append(f"L\t{(a % n) + 1}\t{ao}\t{(b % n) + 1}\t{bo}\t0M")
    return parse_gfa("\n".join(lines) + "\n")


seqs = st.lists(st.text(alphabet="ACGT", min_size=1, max_size=6), min_size=1, max_size=6)
links = st.lists(
    st.tuples(st.integers(0, 5), st.sampled_from("+-"), st.integers(0, 5), st.sampled_from("+-")),
    max_size=10,
)


class TestForwardizeProperties:
    @settings(max_examples=60, deadline=None)
    @given(seqs, links)
    def test_idempotence(self, segs, lks):
        g = _random_bidirected(segs, lks)
        once = forwardize(g)
        assert write_gfa(forwardize(once)) == write_gfa(once)

    @settings(max_examples=60, deadline=None)
    @given(
        seqs,
        st.lists(st.tuples(st.integers(0, 5), st.sampled_from("+-")), min_size=1, max_size=8),
    )
    def test_path_spelling_preserved(self, segs, raw_steps):
        g = _random_bidirected(segs, [])
        n = g.n_segments()
        steps = ",".join(f"{(i % n) + 1}{o}" for i, o in raw_steps)
        g = parse_gfa(write_gfa(g) + f"P\tp\t{steps}\t*\n")
        out = forwardize(g)
        assert spell_path(out, out.paths[0]) == spell_path(g, g.paths[0])


class TestReverseComplement:
    def test_basics(self):
        assert reverse_complement("ACG") == "CGT"
        assert reverse_complement("N") == "N"
        assert reverse_complement("*") == "*"

    @settings(max_examples=50, deadline=None)
    @given(st.text(alphabet="ACGTN", max_size=30))
    def test_involution(self, seq):
        assert reverse_complement(reverse_complement(seq)) == seq


class TestSelectComponent:
    TWO = "S\t1\tA\nS\t2\tC\nS\t8\tG\nS\t9\tT\nL\t1\t+\t2\t+\t0M\nL\t8\t+\t9\t+\t0M\n"

    def test_pick_each(self):
        g = parse_gfa(self.TWO)
        first = select_component(g, 1)
        second = select_component(g, 2)
        assert set(first.segments) == {"1", "2"}
        assert set(second.segments) == {"8", "9"}

    def test_out_of_range(self):
        with pytest.raises(StructureError, match="out of range"):
            select_component(parse_gfa(self.TWO), 3)
