"""Shared fixtures: the worked example sentence, random corpus generators,
and toy model builders used across the test modules."""
from __future__ import annotations

import numpy as np

from srlparser.conll import Frame, Sentence, Token
from srlparser.graph import SemGraph, to_graph
from srlparser.model import ModelConfig, PointerNetwork, Vocabulary

FORMS = ["the", "fund", "managers", "say", "they", "buy", "sell", "shares",
         "quickly", "report", "gains", "market"]
ROLES = ["A0", "A1", "A2", "A3", "AM-TMP", "AM-LOC", "AM-DIS"]
SENSES = ["01", "02", "03"]


def example_sentence() -> Sentence:
    """8-token sentence with two predicates, one of them its own argument."""
    forms = ["But", "fund", "managers", "say", "they", "'re", "ready", "."]
    lemmas = ["but", "fund", "manager", "say", "they", "be", "ready", "."]
    tokens = []
    for i, (form, lemma) in enumerate(zip(forms, lemmas), start=1):
        fillpred = i in (3, 4)
        pred = {3: "manager.01", 4: "say.01"}.get(i, "")
        tokens.append(Token(id=i, form=form, lemma=lemma, plemma=lemma,
                            fillpred=fillpred, pred=pred))
    frames = (
        Frame(predicate=3, sense="01", args=((2, "A1"), (3, "A0")), pred_lemma="manager"),
        Frame(predicate=4, sense="01", args=((1, "AM-DIS"), (3, "A0"), (6, "A1")),
              pred_lemma="say"),
    )
    return Sentence(tokens=tuple(tokens), frames=frames)


def example_graph_arcs() -> dict[tuple[int, int], str]:
    return {
        (0, 3): "01#A0",
        (0, 4): "01",
        (4, 1): "AM-DIS",
        (3, 2): "A1",
        (4, 3): "A0",
        (4, 6): "A1",
    }


def plain_token(i: int, form: str, lemma: str | None = None, **kwargs) -> Token:
    return Token(id=i, form=form, lemma=lemma or form.lower(),
                 plemma=lemma or form.lower(), **kwargs)


def random_sentence(rng: np.random.Generator, max_n: int = 12,
                    predicate_prob: float = 0.35, self_arg_prob: float = 0.25,
                    multi_role_prob: float = 0.2) -> Sentence:
    """Well-formed random sentence with frames, including multi-role and
    self-argument cases; PRED columns follow the lemma.sense convention."""
    n = int(rng.integers(1, max_n + 1))
    forms = [FORMS[rng.integers(0, len(FORMS))] for _ in range(n)]
    is_pred = [rng.random() < predicate_prob for _ in range(n)]
    tokens = []
    frames = []
    for i in range(1, n + 1):
        form = forms[i - 1]
        lemma = form.lower()
        if not is_pred[i - 1]:
            tokens.append(plain_token(i, form, lemma))
            continue
        sense = SENSES[rng.integers(0, len(SENSES))]
        by_position: dict[int, list[str]] = {}
        candidates = [a for a in range(1, n + 1) if a != i]
        rng.shuffle(candidates)
        for a in candidates[: int(rng.integers(0, min(4, n) + 1))]:
            roles = [ROLES[rng.integers(0, len(ROLES))]]
            if rng.random() < multi_role_prob:
                extra = ROLES[rng.integers(0, len(ROLES))]
                if extra not in roles:
                    roles.append(extra)
            by_position[a] = roles
        if rng.random() < self_arg_prob:
            by_position[i] = ["A0"]
        args = tuple((a, role) for a in sorted(by_position) for role in by_position[a])
        tokens.append(plain_token(i, form, lemma, fillpred=True, pred=f"{lemma}.{sense}"))
        frames.append(Frame(predicate=i, sense=sense, args=args, pred_lemma=lemma))
    return Sentence(tokens=tuple(tokens), frames=tuple(frames))


def random_graph(rng: np.random.Generator, n: int | None = None, max_n: int = 12,
                 ratio: float | None = None) -> SemGraph:
    """Random graph satisfying the invariants: every non-root head also has
    a root arc, '#' only on root labels, arcs/word close to `ratio`."""
    if n is None:
        n = int(rng.integers(1, max_n + 1))
    if ratio is None:
        ratio = float(rng.uniform(0.0, 2.0))
    target = int(round(ratio * n))
    graph = SemGraph(n)
    if target == 0:
        return graph
    n_preds = int(rng.integers(1, min(n, target) + 1))
    predicates = sorted(rng.choice(np.arange(1, n + 1), size=n_preds, replace=False).tolist())
    for p in predicates:
        sense = SENSES[rng.integers(0, len(SENSES))]
        if rng.random() < 0.25:
            roles = ["A0"]
            if rng.random() < 0.3:
                roles.append("A1")
            sense = f"{sense}#{'|'.join(roles)}"
        graph.add_arc(0, p, sense)
    pairs = [(p, d) for p in predicates for d in range(1, n + 1) if d != p]
    rng.shuffle(pairs)
    for p, d in pairs[: max(0, target - n_preds)]:
        role = ROLES[rng.integers(0, len(ROLES))]
        if rng.random() < 0.2:
            extra = ROLES[rng.integers(0, len(ROLES))]
            if extra != role:
                role = f"{role}|{extra}"
        graph.add_arc(p, d, role)
    return graph


def graph_with_exact_arcs(rng: np.random.Generator, n: int, arcs: int) -> SemGraph:
    """Graph with exactly `arcs` arcs over n words (root arcs included)."""
    graph = SemGraph(n)
    if arcs == 0:
        return graph
    n_preds = min(n, max(1, int(round(arcs / 2))))
    predicates = sorted(rng.choice(np.arange(1, n + 1), size=n_preds, replace=False).tolist())
    remaining = arcs
    for p in predicates[:remaining]:
        graph.add_arc(0, p, "01")
        remaining -= 1
    pairs = [(p, d) for p in predicates for d in range(1, n + 1) if d != p]
    rng.shuffle(pairs)
    if remaining > len(pairs):
        raise ValueError(f"cannot place {arcs} arcs over {n} words")
    for p, d in pairs[:remaining]:
        graph.add_arc(p, d, ROLES[rng.integers(0, len(ROLES))])
    return graph


def small_training_corpus() -> list[Sentence]:
    """Eight handcrafted sentences with a compact shared vocabulary."""

    def sent(words, preds):
        # preds: {position: (sense, {arg_position: [roles]})}
        tokens = []
        frames = []
        for i, form in enumerate(words, start=1):
            lemma = form.lower()
            if i in preds:
                sense, arg_map = preds[i]
                tokens.append(plain_token(i, form, lemma, fillpred=True,
                                          pred=f"{lemma}.{sense}"))
                args = tuple((a, role) for a in sorted(arg_map) for role in arg_map[a])
                frames.append(Frame(predicate=i, sense=sense, args=args, pred_lemma=lemma))
            else:
                tokens.append(plain_token(i, form, lemma))
        return Sentence(tokens=tuple(tokens), frames=tuple(frames))

    return [
        sent(["the", "fund", "buys", "shares"],
             {3: ("01", {2: ["A0"], 4: ["A1"]})}),
        sent(["managers", "sell", "gains", "quickly"],
             {2: ("01", {1: ["A0"], 3: ["A1"], 4: ["AM-TMP"]})}),
        sent(["they", "say", "markets", "rise"],
             {2: ("01", {1: ["A0"], 4: ["A1"]}), 4: ("02", {3: ["A0"]})}),
        sent(["shares", "fall", "today"],
             {2: ("01", {1: ["A1"], 3: ["AM-TMP"]})}),
        sent(["the", "managers", "report", "gains"],
             {3: ("02", {2: ["A0"], 4: ["A1"]})}),
        sent(["funds", "rise", "and", "fall"],
             {2: ("02", {1: ["A1"]}), 4: ("01", {1: ["A1"]})}),
        sent(["investors", "trade", "shares", "daily"],
             {2: ("01", {1: ["A0"], 3: ["A1"], 4: ["AM-TMP"], 2: ["A0"]})}),
        sent(["markets", "open", "early"],
             {2: ("03", {1: ["A1"], 3: ["AM-TMP"]})}),
    ]


def toy_model(rng: np.random.Generator, sentences: list[Sentence] | None = None,
              gold_mode: bool = False, **overrides) -> PointerNetwork:
    if sentences is None:
        sentences = [random_sentence(rng, max_n=8) for _ in range(4)]
    graphs = [to_graph(s) for s in sentences]
    vocab = Vocabulary.build(sentences, graphs)
    config = ModelConfig(word_dim=8, lemma_dim=6, char_emb_dim=5, char_filters=6,
                         char_window=3, hidden=8, dropout=0.0, beam=5)
    for key, value in overrides.items():
        setattr(config, key, value)
    return PointerNetwork(config, vocab, gold_mode, rng)
