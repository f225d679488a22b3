"""Labeled precision/recall/F1 over semantic dependencies.

Two item categories are pooled, mirroring the CoNLL-2009 semantic score:
predicate senses as (position, sense) pairs and arguments as
(predicate, argument, role) triples.  Senses are compared on the sense
suffix only (the lemma part is never predicted).  The report also breaks
out sense-only and argument-only F1.
"""
from __future__ import annotations

from dataclasses import dataclass

from .conll import Sentence


class EvalAlignmentError(ValueError):
    pass


@dataclass(frozen=True)
class EvalItems:
    senses: frozenset[tuple[int, str]]
    args: frozenset[tuple[int, int, str]]

    @staticmethod
    def from_sentence(sentence: Sentence) -> "EvalItems":
        senses = frozenset((f.predicate, f.sense) for f in sentence.frames)
        args = frozenset((f.predicate, position, role)
                         for f in sentence.frames for position, role in f.args)
        return EvalItems(senses=senses, args=args)


@dataclass
class Counts:
    matched: int = 0
    predicted: int = 0
    gold: int = 0

    def add(self, other: "Counts") -> None:
        self.matched += other.matched
        self.predicted += other.predicted
        self.gold += other.gold

    @property
    def precision(self) -> float:
        return 100.0 * self.matched / self.predicted if self.predicted else 0.0

    @property
    def recall(self) -> float:
        return 100.0 * self.matched / self.gold if self.gold else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2.0 * p * r / (p + r) if p + r > 0 else 0.0


@dataclass
class ScoreReport:
    senses: Counts
    args: Counts

    @property
    def overall(self) -> Counts:
        return Counts(matched=self.senses.matched + self.args.matched,
                      predicted=self.senses.predicted + self.args.predicted,
                      gold=self.senses.gold + self.args.gold)

    @property
    def precision(self) -> float:
        return self.overall.precision

    @property
    def recall(self) -> float:
        return self.overall.recall

    @property
    def f1(self) -> float:
        return self.overall.f1

    @property
    def f1_pred(self) -> float:
        return self.senses.f1

    @property
    def f1_arg(self) -> float:
        return self.args.f1

    def as_text(self) -> str:
        lines = [
            "category    matched  predicted  gold       P       R      F1",
            f"senses     {self.senses.matched:8d} {self.senses.predicted:10d} "
            f"{self.senses.gold:5d} {self.senses.precision:7.2f} "
            f"{self.senses.recall:7.2f} {self.senses.f1:7.2f}",
            f"arguments  {self.args.matched:8d} {self.args.predicted:10d} "
            f"{self.args.gold:5d} {self.args.precision:7.2f} "
            f"{self.args.recall:7.2f} {self.args.f1:7.2f}",
            f"overall    {self.overall.matched:8d} {self.overall.predicted:10d} "
            f"{self.overall.gold:5d} {self.precision:7.2f} "
            f"{self.recall:7.2f} {self.f1:7.2f}",
        ]
        return "\n".join(lines)

    def as_keyvalues(self) -> str:
        return "\n".join([
            f"precision={self.precision:.4f}",
            f"recall={self.recall:.4f}",
            f"f1={self.f1:.4f}",
            f"f1_pred={self.f1_pred:.4f}",
            f"f1_arg={self.f1_arg:.4f}",
        ])


def _score_pair(gold: Sentence, pred: Sentence) -> ScoreReport:
    g = EvalItems.from_sentence(gold)
    p = EvalItems.from_sentence(pred)
    return ScoreReport(
        senses=Counts(matched=len(g.senses & p.senses),
                      predicted=len(p.senses), gold=len(g.senses)),
        args=Counts(matched=len(g.args & p.args),
                    predicted=len(p.args), gold=len(g.args)))


def score(gold: list[Sentence], pred: list[Sentence]) -> ScoreReport:
    if len(gold) != len(pred):
        raise EvalAlignmentError(
            f"{len(gold)} gold sentences but {len(pred)} predicted")
    total = ScoreReport(senses=Counts(), args=Counts())
    for index, (g, p) in enumerate(zip(gold, pred)):
        if len(g) != len(p):
            raise EvalAlignmentError(
                f"sentence {index}: {len(g)} gold tokens but {len(p)} predicted")
        pair = _score_pair(g, p)
        total.senses.add(pair.senses)
        total.args.add(pair.args)
    return total


def score_breakdown_by_length(gold: list[Sentence], pred: list[Sentence],
                              buckets: list[int]) -> list[tuple[str, int, ScoreReport]]:
    """Per-bucket reports; `buckets` lists inclusive upper length bounds.

    A final open bucket collects longer sentences.  Bucket counts sum to
    the global counts.
    """
    if len(gold) != len(pred):
        raise EvalAlignmentError(
            f"{len(gold)} gold sentences but {len(pred)} predicted")
    bounds = sorted(buckets)
    labels = []
    lower = 1
    for bound in bounds:
        labels.append(f"{lower}-{bound}")
        lower = bound + 1
    labels.append(f">{bounds[-1]}" if bounds else "all")
    rows = [(label, 0, ScoreReport(senses=Counts(), args=Counts())) for label in labels]
    rows = [list(row) for row in rows]
    for index, (g, p) in enumerate(zip(gold, pred)):
        if len(g) != len(p):
            raise EvalAlignmentError(
                f"sentence {index}: {len(g)} gold tokens but {len(p)} predicted")
        slot = len(bounds)
        for k, bound in enumerate(bounds):
            if len(g) <= bound:
                slot = k
                break
        pair = _score_pair(g, p)
        rows[slot][1] += 1
        rows[slot][2].senses.add(pair.senses)
        rows[slot][2].args.add(pair.args)
    return [tuple(row) for row in rows]
