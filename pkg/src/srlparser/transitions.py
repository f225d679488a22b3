"""Shift/Arc transition system for building rooted dependency graphs.

A state is <i, j, sigma>: i is the focus word receiving heads, j the
position of the last head assigned to it (-1 when none yet), and sigma
the set of built (head, dependent) pairs.  Parsing starts at <1, -1, {}>
and ends at <n+1, -1, sigma> after a single left-to-right pass:

* Arc(p) attaches the focus word to head p, moving to <i, p, sigma + {p->i}>.
  Legal only while the edge is new and p lies beyond the last head (j < p),
  which fixes the left-to-right head order.
* Shift advances the focus, moving to <i+1, -1, sigma>.

In gold-predicates mode every gold predicate is attached to the root
deterministically before decoding and Arc heads are restricted to gold
predicates (the root stays a legal target).
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import REPAIR_SENSE, SemGraph

SHIFT = "shift"
ARC = "arc"


class TransitionError(ValueError):
    """An action was applied in a state where it is not legal."""


class IncompleteDerivationError(TransitionError):
    """An action sequence ended before reaching the terminal state."""


@dataclass(frozen=True)
class Action:
    kind: str
    p: int = -1

    @staticmethod
    def shift() -> "Action":
        return Action(SHIFT)

    @staticmethod
    def arc(p: int) -> "Action":
        return Action(ARC, p)

    def __repr__(self):
        return "Shift" if self.kind == SHIFT else f"Arc({self.p})"


@dataclass(frozen=True)
class ParserState:
    i: int
    j: int
    sigma: frozenset[tuple[int, int]]

    @staticmethod
    def initial(arcs: frozenset[tuple[int, int]] = frozenset()) -> "ParserState":
        return ParserState(1, -1, arcs)

    def is_terminal(self, n: int) -> bool:
        return self.i > n


@dataclass(frozen=True)
class Mode:
    kind: str
    gold_set: frozenset[int] = frozenset()

    @staticmethod
    def full() -> "Mode":
        return Mode("full")

    @staticmethod
    def gold_predicates(positions) -> "Mode":
        return Mode("gold-predicates", frozenset(positions))

    @property
    def is_gold(self) -> bool:
        return self.kind == "gold-predicates"


FULL = Mode.full()


def legal(state: ParserState, action: Action, n: int, mode: Mode = FULL) -> bool:
    """Whether `action` may fire in `state`.  Total; False at terminal states."""
    if state.is_terminal(n):
        return False
    if action.kind == SHIFT:
        return True
    p = action.p
    if not 0 <= p <= n or p == state.i:
        return False
    if (p, state.i) in state.sigma or state.j >= p:
        return False
    if mode.is_gold and p != 0 and p not in mode.gold_set:
        return False
    return True


def apply_action(state: ParserState, action: Action, n: int, mode: Mode = FULL) -> ParserState:
    if not legal(state, action, n, mode):
        raise TransitionError(f"{action!r} is not legal in state "
                              f"<{state.i}, {state.j}, |sigma|={len(state.sigma)}>")
    if action.kind == SHIFT:
        return ParserState(state.i + 1, -1, state.sigma)
    return ParserState(state.i, action.p, state.sigma | {(action.p, state.i)})


def oracle(graph: SemGraph, mode: Mode = FULL) -> list[tuple[Action, str | None]]:
    """Canonical action sequence rebuilding `graph` left to right.

    Heads of each focus word are emitted in ascending position order
    followed by a Shift, so the sequence has exactly n + |arcs| actions
    (minus the pre-installed root arcs in gold-predicates mode).
    """
    actions: list[tuple[Action, str | None]] = []
    for i in range(1, graph.n + 1):
        for head in graph.heads_of(i):
            if mode.is_gold and head == 0 and i in mode.gold_set:
                continue
            actions.append((Action.arc(head), graph.label(head, i)))
        actions.append((Action.shift(), None))
    return actions


def run(actions: list[tuple[Action, str | None]], n: int, mode: Mode = FULL,
        root_labels: dict[int, str] | None = None) -> SemGraph:
    """Execute an action sequence and return the graph it builds.

    In gold-predicates mode the root arcs for the gold set are installed
    first, labeled from `root_labels` (falling back to the default sense
    for positions the caller did not label).
    """
    graph = SemGraph(n)
    if mode.is_gold:
        for p in sorted(mode.gold_set):
            label = (root_labels or {}).get(p, REPAIR_SENSE)
            graph.add_arc(0, p, label)
    state = ParserState.initial(frozenset((h, d) for (h, d) in graph.arcs))
    for action, label in actions:
        if action.kind == ARC:
            if label is None:
                raise ValueError(f"{action!r} carries no label")
            new_state = apply_action(state, action, n, mode)
            graph.add_arc(action.p, state.i, label)
            state = new_state
        else:
            state = apply_action(state, action, n, mode)
    if not state.is_terminal(n):
        raise IncompleteDerivationError(
            f"sequence stopped at focus {state.i} of {n}; terminal state not reached")
    return graph


def serialize_actions(actions: list[tuple[Action, str | None]]) -> str:
    """One action per line: `SHIFT` or `ARC <p> <label>`."""
    lines = []
    for action, label in actions:
        if action.kind == SHIFT:
            lines.append("SHIFT")
        else:
            lines.append(f"ARC {action.p} {label}")
    return "\n".join(lines) + "\n" if lines else ""


def parse_actions(text: str) -> list[tuple[Action, str | None]]:
    actions: list[tuple[Action, str | None]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split(" ")
        if parts[0] == "SHIFT" and len(parts) == 1:
            actions.append((Action.shift(), None))
        elif parts[0] == "ARC" and len(parts) == 3:
            actions.append((Action.arc(int(parts[1])), parts[2]))
        else:
            raise ValueError(f"line {lineno}: cannot parse action {line!r}")
    return actions
