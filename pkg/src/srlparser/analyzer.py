"""Transition-count complexity statistics over a corpus of graphs.

Every graph of n words with a arcs takes exactly t = n + a transitions
(one Arc per arc, one Shift per word), so the per-sentence records and
the least-squares slope of t against n expose how far the corpus sits
from the worst case of n arcs per word.
"""
from __future__ import annotations

import io
from dataclasses import dataclass

from .graph import SemGraph


@dataclass(frozen=True)
class ComplexityRecord:
    n: int
    transitions: int
    arcs: int


@dataclass(frozen=True)
class CorpusStats:
    ratio: float        # mean arcs per word per sentence
    slope: float        # least-squares fit of transitions ~ slope * n
    max_transitions: int


def analyze(graphs: list[SemGraph]) -> tuple[list[ComplexityRecord], CorpusStats]:
    if not graphs:
        raise ValueError("cannot analyze an empty corpus")
    records = [ComplexityRecord(n=g.n, transitions=g.n + g.arc_count(), arcs=g.arc_count())
               for g in graphs]
    ratios = [r.arcs / r.n for r in records if r.n > 0]
    ratio = sum(ratios) / len(ratios) if ratios else 0.0
    sum_tn = sum(r.transitions * r.n for r in records)
    sum_nn = sum(r.n * r.n for r in records)
    slope = sum_tn / sum_nn if sum_nn else 0.0
    stats = CorpusStats(ratio=ratio, slope=slope,
                        max_transitions=max(r.transitions for r in records))
    return records, stats


def bound_check(records: list[ComplexityRecord], k: float) -> bool:
    """True iff every sentence fits within k transitions per word."""
    if k < 1:
        raise ValueError("k must be at least 1 (every word takes one Shift)")
    return all(r.transitions <= k * r.n for r in records)


def to_csv(records: list[ComplexityRecord], stats: CorpusStats) -> str:
    out = io.StringIO()
    out.write("n,transitions,arcs\n")
    for r in records:
        out.write(f"{r.n},{r.transitions},{r.arcs}\n")
    out.write(f"# ratio={stats.ratio:.6f}\n")
    out.write(f"# slope={stats.slope:.6f}\n")
    out.write(f"# max_transitions={stats.max_transitions}\n")
    return out.getvalue()
