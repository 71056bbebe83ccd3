"""Seeded synthetic biedged graphs with controlled bubble, cycle, and
tip structure.

The generator emits GFA so the full parse -> biedge -> classify
pipeline can be exercised end to end. Layout: a rooted backbone chain;
sampled chain positions expand into 2-4 parallel branches of 1-3
segments each (superbubble motifs); cycles are grey back edges closing
one branch of a chosen bubble, so they never touch snarl frontier
candidates; tips are dead-end branch segments hanging off backbone
positions far enough from the chain end that the final sink stays the
unique deepest one. Counter-based RNG (Philox) keyed by the seed, no
global state: equal seeds give byte-identical GFA.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .biedged import BiedgedGraph, to_biedged
from .gfa import BidirectedGraph, Link, parse_gfa, write_gfa

_BASES = "ACGT"


@dataclass(frozen=True)
class SynthParams:
    n_segments: int
    bubble_rate: float = 0.0
    n_cycles: int = 0
    n_tips: int = 0
    seed: int = 0

    def validate(self):
        if self.n_segments < 1:
            raise ValueError("n_segments must be at least 1")
        if not 0.0 <= self.bubble_rate <= 1.0:
            raise ValueError("bubble_rate must be within [0, 1]")
        if self.n_cycles < 0 or self.n_tips < 0:
            raise ValueError("cycle and tip counts must be non-negative")


def generate_gfa(p: SynthParams) -> str:
    p.validate()
    rng = np.random.Generator(np.random.Philox(key=p.seed))

    seqs: list[str] = []
    links: list[tuple[str, str]] = []

    def new_seg() -> str:
        length = int(rng.integers(1, 9))
        seqs.append("".join(_BASES[i] for i in rng.integers(0, 4, size=length)))
        return str(len(seqs))

    budget = p.n_segments - p.n_tips
    if budget < 1:
        raise ValueError(
            f"{p.n_tips} tips need more than {p.n_segments} total segments"
        )

    backbone = [new_seg()]
    bubbles = []  # list of branch lists, each branch a list of segment ids
    while len(seqs) < budget:
        remaining = budget - len(seqs)
        made_bubble = False
        if remaining >= 3 and rng.random() < p.bubble_rate:
            k = int(rng.integers(2, 5))
            lens = [int(rng.integers(1, 4)) for _ in range(k)]
            if sum(lens) + 1 <= remaining:
                entry = backbone[-1]
                branches = []
                for blen in lens:
                    branch = [new_seg() for _ in range(blen)]
                    links.append((entry, branch[0]))
                    for a, b in zip(branch, branch[1:]):
                        links.append((a, b))
                    branches.append(branch)
                exit_seg = new_seg()
                for branch in branches:
                    links.append((branch[-1], exit_seg))
                backbone.append(exit_seg)
                bubbles.append(branches)
                made_bubble = True
        if not made_bubble:
            nxt = new_seg()
            links.append((backbone[-1], nxt))
            backbone.append(nxt)

    if p.n_cycles > len(bubbles):
        raise ValueError(
            f"cannot place {p.n_cycles} cycles: only {len(bubbles)} bubbles were "
            f"generated (raise bubble_rate or n_segments)"
        )
    if p.n_cycles:
        chosen = sorted(rng.choice(len(bubbles), size=p.n_cycles, replace=False).tolist())
        for bi in chosen:
            branches = bubbles[bi]
            branch = branches[int(rng.integers(0, len(branches)))]
            links.append((branch[-1], branch[0]))

    # tips attach only where at least two backbone segments follow, so the
    # chain end stays the strictly deepest sink
    eligible = backbone[:-2]
    if p.n_tips > len(eligible):
        raise ValueError(
            f"cannot place {p.n_tips} tips: only {len(eligible)} eligible backbone "
            f"positions (need two trailing segments after each tip)"
        )
    if p.n_tips:
        spots = sorted(rng.choice(len(eligible), size=p.n_tips, replace=False).tolist())
        for pos in spots:
            tip = new_seg()
            links.append((eligible[pos], tip))

    g = BidirectedGraph(headers=["H\tVN:Z:1.0"])
    for i, seq in enumerate(seqs, start=1):
        g.segments[str(i)] = seq
    for a, b in links:
        g.links.append(Link(a, "+", b, "+", "0M"))
    return write_gfa(g)


def generate(p: SynthParams) -> BiedgedGraph:
    """Biedged form of the generated graph with its root assigned."""
    b = to_biedged(parse_gfa(generate_gfa(p)))
    b.root = b.index("1_L")
    return b
