"""GFA v1 subset reader/writer and bidirected-to-forward-only transforms.

Only the record types the pipeline needs are interpreted (H, S, L, P);
anything else is tolerated and ignored. Overlap strings are carried
opaquely except for the operation-order reversal applied when exactly
one link end flips orientation during forwardization.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import GfaParseError, GfaReferenceError, StructureError

# Reserved suffix for lazily created reverse-complement copy segments.
RC_SUFFIX = "_rc"

_COMPLEMENT = str.maketrans("ACGTN", "TGCAN")
_VALID_SEQ = re.compile(r"[ACGTN]*\Z")
_CIGAR_TOKEN = re.compile(r"\d+[A-Za-z=]")


@dataclass
class Link:
    src: str
    src_orient: str
    dst: str
    dst_orient: str
    overlap: str = "*"
    tags: tuple = ()
    line_no: int | None = None

    def key(self):
        return (self.src, self.src_orient, self.dst, self.dst_orient)


@dataclass
class Path:
    name: str
    steps: list  # list of (segment id, orient)
    overlaps: str = "*"


@dataclass
class BidirectedGraph:
    """GFA-level graph: segments with sequences, oriented links, paths."""

    segments: dict = field(default_factory=dict)  # id -> sequence string
    links: list = field(default_factory=list)
    paths: list = field(default_factory=list)
    segment_tags: dict = field(default_factory=dict)  # id -> tuple of raw tags
    headers: list = field(default_factory=list)

    def n_segments(self):
        return len(self.segments)

    def n_links(self):
        return len(self.links)


def reverse_complement(seq: str) -> str:
    if seq == "*":
        return "*"
    return seq.translate(_COMPLEMENT)[::-1]


def _normalize_sequence(raw: str, line_no: int) -> str:
    if raw == "*":
        return "*"
    seq = raw.upper()
    if not _VALID_SEQ.match(seq):
        bad = sorted(set(seq) - set("ACGTN"))
        raise GfaParseError(f"sequence contains unsupported characters {bad}", line_no)
    return seq


def parse_gfa(source) -> BidirectedGraph:
    """Parse GFA v1 text (str, bytes, or line iterable) into a BidirectedGraph.

    Line order does not affect the result: link/path references are
    validated only after the whole input has been read.
    """
    if isinstance(source, bytes):
        lines = source.decode("utf-8").splitlines()
    elif isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = [ln.decode("utf-8") if isinstance(ln, bytes) else ln for ln in source]

    g = BidirectedGraph()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n\r")
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        kind = fields[0]
        if kind == "H":
            g.headers.append(line)
        elif kind == "S":
            if len(fields) < 3:
                raise GfaParseError(f"S record needs id and sequence, got {len(fields)} fields", line_no)
            seg_id = fields[1]
            if seg_id in g.segments:
                raise GfaParseError(f"duplicate segment id {seg_id!r}", line_no)
            g.segments[seg_id] = _normalize_sequence(fields[2], line_no)
            if len(fields) > 3:
                g.segment_tags[seg_id] = tuple(fields[3:])
        elif kind == "L":
            if len(fields) < 6:
                raise GfaParseError(f"L record needs 6 fields, got {len(fields)}", line_no)
            src, so, dst, do = fields[1], fields[2], fields[3], fields[4]
            if so not in "+-" or do not in "+-":
                raise GfaParseError(f"bad link orientation {so!r}/{do!r}", line_no)
            g.links.append(Link(src, so, dst, do, fields[5], tuple(fields[6:]), line_no))
        elif kind == "P":
            if len(fields) < 3:
                raise GfaParseError(f"P record needs name and steps, got {len(fields)}", line_no)
            steps = []
            if fields[2]:
                for step in fields[2].split(","):
                    if len(step) < 2 or step[-1] not in "+-":
                        raise GfaParseError(f"bad path step {step!r}", line_no)
                    steps.append((step[:-1], step[-1]))
            overlaps = fields[3] if len(fields) > 3 else "*"
            g.paths.append(Path(fields[1], steps, overlaps))
        # other record types tolerated

    for link in g.links:
        for end in (link.src, link.dst):
            if end not in g.segments:
                raise GfaReferenceError(
                    f"link {link.src}{link.src_orient}->{link.dst}{link.dst_orient} "
                    f"references unknown segment {end!r}"
                    + (f" (line {link.line_no})" if link.line_no else "")
                )
    for path in g.paths:
        for seg, _ in path.steps:
            if seg not in g.segments:
                raise GfaReferenceError(f"path {path.name!r} references unknown segment {seg!r}")
    return g


def write_gfa(g: BidirectedGraph) -> str:
    """Serialize in input order; segments first, then links, then paths."""
    out = []
    out.extend(g.headers)
    for seg_id, seq in g.segments.items():
        tags = g.segment_tags.get(seg_id, ())
        out.append("\t".join(["S", seg_id, seq, *tags]))
    for ln in g.links:
        out.append("\t".join(["L", ln.src, ln.src_orient, ln.dst, ln.dst_orient, ln.overlap, *ln.tags]))
    for p in g.paths:
        steps = ",".join(f"{seg}{o}" for seg, o in p.steps)
        out.append("\t".join(["P", p.name, steps, p.overlaps]))
    return "\n".join(out) + ("\n" if out else "")


def _reverse_overlap(overlap: str) -> str:
    """Reverse the operation order of a CIGAR-like overlap string.

    Strings that do not tokenize fully are carried through unchanged.
    """
    if overlap == "*" or not overlap:
        return overlap
    tokens = _CIGAR_TOKEN.findall(overlap)
    if "".join(tokens) != overlap:
        return overlap
    return "".join(reversed(tokens))


def link_side_pair(link: Link):
    """Node sides joined by a link, as ((segment, side), (segment, side)).

    A + at the source uses its R side, - its L side; a + at the
    destination uses its L side, - its R side.
    """
    a = (link.src, "R" if link.src_orient == "+" else "L")
    b = (link.dst, "L" if link.dst_orient == "+" else "R")
    return a, b


def is_same_side_link(link: Link) -> bool:
    (_, sa), (_, sb) = link_side_pair(link)
    return sa == sb


def strip_same_side_links(g: BidirectedGraph):
    """Drop links that would join two R sides or two L sides.

    Benchmarking-mode alternative to forwardize(). Returns the stripped
    graph and the number of removed links.
    """
    kept, removed = [], 0
    for link in g.links:
        if is_same_side_link(link):
            removed += 1
        else:
            kept.append(link)
    out = BidirectedGraph(
        segments=dict(g.segments),
        links=kept,
        paths=[Path(p.name, list(p.steps), p.overlaps) for p in g.paths],
        segment_tags=dict(g.segment_tags),
        headers=list(g.headers),
    )
    return out, removed


def forwardize(g: BidirectedGraph) -> BidirectedGraph:
    """Rewrite every link to (+,+); reversed ends point at lazily created
    reverse-complement copy segments (id = original + RC_SUFFIX).

    Overlap operation order is reversed exactly when one end flips. Path
    steps in - orientation are replaced by the RC copy in + orientation.
    Idempotent: an all-forward graph round-trips unchanged.
    """
    out = BidirectedGraph(
        segments=dict(g.segments),
        segment_tags=dict(g.segment_tags),
        headers=list(g.headers),
    )

    def rc_copy(seg_id: str) -> str:
        rc_id = seg_id + RC_SUFFIX
        if rc_id not in out.segments:
            if rc_id in g.segments:
                raise StructureError(
                    f"cannot forwardize: reserved id {rc_id!r} already exists in the input"
                )
            out.segments[rc_id] = reverse_complement(g.segments[seg_id])
            if seg_id in g.segment_tags:
                out.segment_tags[rc_id] = g.segment_tags[seg_id]
        return rc_id

    for link in g.links:
        src, dst = link.src, link.dst
        flips = 0
        if link.src_orient == "-":
            src = rc_copy(src)
            flips += 1
        if link.dst_orient == "-":
            dst = rc_copy(dst)
            flips += 1
        overlap = _reverse_overlap(link.overlap) if flips == 1 else link.overlap
        out.links.append(Link(src, "+", dst, "+", overlap, link.tags, link.line_no))

    for p in g.paths:
        steps = [(seg, "+") if o == "+" else (rc_copy(seg), "+") for seg, o in p.steps]
        out.paths.append(Path(p.name, steps, p.overlaps))
    return out


def select_component(g: BidirectedGraph, k: int) -> BidirectedGraph:
    """The k-th (1-based) connected component over segments and links,
    components ordered by their smallest segment id (natural order)."""
    from .biedged import seg_sort_key  # local import to avoid a cycle

    parent = {s: s for s in g.segments}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ln in g.links:
        ra, rb = find(ln.src), find(ln.dst)
        if ra != rb:
            parent[rb] = ra

    groups: dict[str, list[str]] = {}
    for s in g.segments:
        groups.setdefault(find(s), []).append(s)
    ordered = sorted(groups.values(), key=lambda segs: min(seg_sort_key(s) for s in segs))
    if not 1 <= k <= len(ordered):
        raise StructureError(f"component {k} out of range; graph has {len(ordered)}")
    keep = set(ordered[k - 1])

    out = BidirectedGraph(headers=list(g.headers))
    for s, seq in g.segments.items():
        if s in keep:
            out.segments[s] = seq
            if s in g.segment_tags:
                out.segment_tags[s] = g.segment_tags[s]
    out.links = [ln for ln in g.links if ln.src in keep]
    out.paths = [
        Path(p.name, list(p.steps), p.overlaps)
        for p in g.paths
        if p.steps and all(seg in keep for seg, _ in p.steps)
    ]
    return out


def spell_path(g: BidirectedGraph, path: Path) -> str:
    """Concatenate the oriented sequences of a path's steps."""
    parts = []
    for seg, orient in path.steps:
        seq = g.segments[seg]
        parts.append(seq if orient == "+" else reverse_complement(seq))
    return "".join(p for p in parts if p != "*")
