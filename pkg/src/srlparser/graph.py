"""Single-rooted labeled dependency graphs over predicate-argument structure.

Every predicate is attached to an artificial root node at position 0 and
the arc carries the predicate sense as its label.  Two encoding tricks
keep the structure a plain graph with at most one arc per ordered pair:

* several roles between the same predicate and argument collapse into one
  arc labeled "role1|role2|..." (reading order);
* a predicate serving as its own argument folds the self-role into the
  root arc, whose label becomes "sense#role1|role2|...".

Both transforms are inverted before evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .conll import Frame, Sentence

# Sense assigned when a predicted argument hangs off a word that never
# received a root arc; "01" is the most frequent sense id.
REPAIR_SENSE = "01"


class GraphStructureError(ValueError):
    """A graph cannot be mapped back to predicate-argument frames."""


@dataclass(frozen=True)
class CompositeLabel:
    """Decomposition of an arc label into sense and role parts."""

    raw: str
    sense: str | None
    roles: tuple[str, ...]

    @staticmethod
    def parse(raw: str, root_arc: bool) -> "CompositeLabel":
        if root_arc:
            sense, _, role_part = raw.partition("#")
            roles = tuple(role_part.split("|")) if role_part else ()
            return CompositeLabel(raw=raw, sense=sense, roles=roles)
        return CompositeLabel(raw=raw, sense=None, roles=tuple(raw.split("|")))


class SemGraph:
    """Arc set over positions 0..n with at most one labeled arc per pair."""

    __slots__ = ("n", "_arcs")

    def __init__(self, n: int, arcs: dict[tuple[int, int], str] | None = None):
        self.n = n
        self._arcs: dict[tuple[int, int], str] = {}
        if arcs:
            for (head, dep), label in arcs.items():
                self.add_arc(head, dep, label)

    def add_arc(self, head: int, dep: int, label: str) -> None:
        if not 0 <= head <= self.n:
            raise GraphStructureError(f"head {head} out of range 0..{self.n}")
        if not 1 <= dep <= self.n:
            raise GraphStructureError(f"dependent {dep} out of range 1..{self.n}")
        if head == dep:
            raise GraphStructureError(f"self-loop at {head} (self-roles fold into the root arc)")
        if (head, dep) in self._arcs:
            raise GraphStructureError(f"duplicate arc {head} -> {dep}")
        if head != 0 and "#" in label:
            raise GraphStructureError(
                f"label {label!r} carries a sense part but arc {head} -> {dep} is not a root arc")
        self._arcs[(head, dep)] = label

    @property
    def arcs(self) -> dict[tuple[int, int], str]:
        return dict(self._arcs)

    def arc_count(self) -> int:
        return len(self._arcs)

    def label(self, head: int, dep: int) -> str:
        return self._arcs[(head, dep)]

    def has_arc(self, head: int, dep: int) -> bool:
        return (head, dep) in self._arcs

    def heads_of(self, dep: int) -> list[int]:
        return sorted(h for (h, d) in self._arcs if d == dep)

    def predicates(self) -> list[int]:
        return sorted(d for (h, d) in self._arcs if h == 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SemGraph):
            return NotImplemented
        return self.n == other.n and self._arcs == other._arcs

    def __hash__(self):
        return hash((self.n, frozenset(self._arcs.items())))

    def __repr__(self):
        arcs = ", ".join(f"{h}->{d}:{l}" for (h, d), l in sorted(self._arcs.items()))
        return f"SemGraph(n={self.n}, arcs={{{arcs}}})"


def to_graph(sentence: Sentence) -> SemGraph:
    """Build the rooted graph for a sentence's gold frames."""
    graph = SemGraph(len(sentence))
    for frame in sentence.frames:
        root_label = frame.sense
        self_roles = [role for position, role in frame.args if position == frame.predicate]
        if self_roles:
            root_label = f"{frame.sense}#{'|'.join(self_roles)}"
        graph.add_arc(0, frame.predicate, root_label)
    for frame in sentence.frames:
        merged: dict[int, list[str]] = {}
        for position, role in frame.args:
            if position == frame.predicate:
                continue
            merged.setdefault(position, []).append(role)
        for position, parts in merged.items():
            graph.add_arc(frame.predicate, position, "|".join(parts))
    return graph


def from_graph(graph: SemGraph, skeleton: Sentence,
               repairs: dict[str, int] | None = None) -> Sentence:
    """Recover a Sentence with frames from a graph; inverse of `to_graph`.

    `skeleton` supplies the token columns (FORM, LEMMA, ...); its frames
    and predicate flags are ignored.  A non-root arc whose head has no
    root arc cannot be expressed in the column format, so a root arc with
    the sense "01" is added and counted in `repairs["added_root_arcs"]`.
    """
    if graph.n != len(skeleton):
        raise GraphStructureError(
            f"graph has {graph.n} words but skeleton has {len(skeleton)}")
    arcs = graph.arcs
    rooted = {dep for (head, dep) in arcs if head == 0}
    for (head, dep), label in sorted(arcs.items()):
        if head != 0 and head not in rooted:
            arcs[(0, head)] = REPAIR_SENSE
            rooted.add(head)
            if repairs is not None:
                repairs["added_root_arcs"] = repairs.get("added_root_arcs", 0) + 1

    frames: list[Frame] = []
    for predicate in sorted(rooted):
        parsed = CompositeLabel.parse(arcs[(0, predicate)], root_arc=True)
        if not parsed.sense:
            raise GraphStructureError(
                f"root arc for {predicate} has label {parsed.raw!r} with no sense part")
        by_position: dict[int, list[str]] = {}
        if parsed.roles:
            by_position[predicate] = list(parsed.roles)
        for (head, dep), label in arcs.items():
            if head == predicate:
                by_position.setdefault(dep, []).extend(label.split("|"))
        args = [(position, role)
                for position in sorted(by_position)
                for role in by_position[position]]
        lemma = skeleton.tokens[predicate - 1].lemma
        pred_lemma = lemma if lemma not in ("", "_") else ""
        frames.append(Frame(predicate=predicate, sense=parsed.sense,
                            args=tuple(args), pred_lemma=pred_lemma))

    tokens = tuple(
        replace(tok,
                fillpred=tok.id in rooted,
                pred=next((f.pred_column() for f in frames if f.predicate == tok.id), ""))
        for tok in skeleton.tokens)
    return Sentence(tokens=tokens, frames=tuple(frames))
