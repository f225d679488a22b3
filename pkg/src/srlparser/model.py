"""Pointer network over the Shift/Arc transition system.

The network encodes the sentence once with a stacked BiLSTM and then
drives the transition system with a decoder LSTM plus attention:

* each token is the concatenation of word, lemma and character-CNN
  embeddings (plus optional frozen context vectors, plus a predicate
  indicator embedding in gold-predicates mode);
* a learned root vector h_0 is prepended to the encoder outputs;
* at each step the decoder consumes r_t = h_i + h_j (the focus word plus
  the last predicate assigned to it, when any) and a biaffine attention
  scores every position 0..n; the highest-scoring *legal* position is
  taken: pointing at the focus word itself means Shift, anything else
  means Arc to that head;
* a second biaffine scorer labels each arc over the closed label
  vocabulary (composite "role1|role2" and "sense#role" labels included).

Training teacher-forces the canonical oracle sequence and sums the
pointer and labeler log losses.  Decoding is greedy or beam search over
cumulative pointer log probabilities; the greedy trajectory always
occupies one beam slot, so widening the beam can never fall below greedy
decoding.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from . import autodiff as ad
from .autodiff import Parameter, Tensor
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .conll import Sentence
from .graph import SemGraph
from .transitions import (ARC, Action, FULL, Mode, ParserState, apply_action, legal,
                          oracle)

UNK = "<unk>"


@dataclass
class ModelConfig:
    """Architecture sizes and ablation switches (desk-scale defaults)."""

    word_dim: int = 64
    lemma_dim: int = 64
    char_emb_dim: int = 100
    char_filters: int = 100
    char_window: int = 3
    indicator_dim: int = 16
    encoder_layers: int = 3
    decoder_layers: int = 1
    hidden: int = 64  # 512 at full paper scale
    dropout: float = 0.33
    beam: int = 5
    use_beam: bool = True
    use_coparent: bool = True
    use_lemma: bool = True
    use_char: bool = True
    use_indicator: bool = True
    use_context_vectors: bool = False
    context_dim: int = 0

    def validate(self) -> None:
        if self.hidden <= 0 or self.hidden % 2 != 0:
            raise ValueError("hidden must be a positive even number")
        if self.beam < 1:
            raise ValueError("beam must be at least 1")
        if self.decoder_layers != 1:
            raise ValueError("only a one-layer decoder is supported")
        if self.use_context_vectors and self.context_dim <= 0:
            raise ValueError("context_dim must be set when context vectors are enabled")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @staticmethod
    def from_dict(data: dict) -> "ModelConfig":
        known = {f.name for f in dataclasses.fields(ModelConfig)}
        return ModelConfig(**{k: v for k, v in data.items() if k in known})


class Vocabulary:
    """Closed vocabularies built from the training corpus; index 0 is UNK."""

    def __init__(self, forms: list[str], lemmas: list[str], chars: list[str],
                 labels: list[str]):
        self.forms = forms
        self.lemmas = lemmas
        self.chars = chars
        self.labels = labels
        self._form_index = {f: i for i, f in enumerate(forms)}
        self._lemma_index = {f: i for i, f in enumerate(lemmas)}
        self._char_index = {c: i for i, c in enumerate(chars)}
        self._label_index = {l: i for i, l in enumerate(labels)}

    @staticmethod
    def build(sentences: list[Sentence], graphs: list[SemGraph]) -> "Vocabulary":
        forms: dict[str, None] = {}
        lemmas: dict[str, None] = {}
        chars: dict[str, None] = {}
        labels: dict[str, None] = {}
        for sentence in sentences:
            for token in sentence.tokens:
                forms.setdefault(token.form)
                lemmas.setdefault(token.lemma)
                for ch in token.form:
                    chars.setdefault(ch)
        for graph in graphs:
            for label in graph.arcs.values():
                labels.setdefault(label)
        if not labels:
            labels.setdefault("01")
        if not any("#" not in label for label in labels):
            # the decoder must always have a label it may put on a non-root arc
            labels.setdefault("A0")
        return Vocabulary([UNK] + list(forms), [UNK] + list(lemmas),
                          [UNK] + list(chars), list(labels))

    def form_id(self, form: str) -> int:
        return self._form_index.get(form, 0)

    def lemma_id(self, lemma: str) -> int:
        return self._lemma_index.get(lemma, 0)

    def char_ids(self, form: str) -> list[int]:
        return [self._char_index.get(c, 0) for c in form]

    def label_id(self, label: str) -> int | None:
        return self._label_index.get(label)

    @property
    def n_labels(self) -> int:
        return len(self.labels)

    def to_dict(self) -> dict:
        return {"forms": self.forms, "lemmas": self.lemmas,
                "chars": self.chars, "labels": self.labels}

    @staticmethod
    def from_dict(data: dict) -> "Vocabulary":
        return Vocabulary(data["forms"], data["lemmas"], data["chars"], data["labels"])


@dataclass
class DecodeResult:
    graph: SemGraph
    log_prob: float
    steps: int


@dataclass
class _DropoutMasks:
    """Variational masks sampled once per sentence (training only)."""

    layer_inputs: list[np.ndarray | None]
    recurrent: list[tuple[np.ndarray, np.ndarray]]
    decoder_recurrent: np.ndarray


@dataclass
class _BeamItem:
    state: ParserState
    dec_h: Tensor
    dec_c: Tensor
    log_prob: float
    arcs: dict[tuple[int, int], str]
    root_labels: dict[int, str]
    steps: int
    is_greedy: bool


class PointerNetwork:
    def __init__(self, config: ModelConfig, vocab: Vocabulary, gold_mode: bool,
                 rng: np.random.Generator,
                 word_vectors: dict[str, np.ndarray] | None = None,
                 lemma_vectors: dict[str, np.ndarray] | None = None):
        config.validate()
        self.config = config
        self.vocab = vocab
        self.gold_mode = gold_mode
        self.params: dict[str, Parameter] = {}
        self._build(rng, word_vectors, lemma_vectors)
        # labels carrying a sense part may only sit on root arcs
        self._nonroot_label_ok = np.array(["#" not in l for l in vocab.labels])

    # -- construction -----------------------------------------------------

    def _param(self, name: str, data: np.ndarray) -> Parameter:
        p = Parameter(name, data)
        self.params[name] = p
        return p

    def _lstm(self, name: str, input_dim: int, rng) -> ad.LSTMWeights:
        h = self.config.hidden
        return ad.LSTMWeights(
            self._param(f"{name}/w_x", ad.glorot_uniform(rng, (4 * h, input_dim))).tensor,
            self._param(f"{name}/w_h", ad.glorot_uniform(rng, (4 * h, h))).tensor,
            self._param(f"{name}/bias", np.zeros(4 * h)).tensor)

    def _build(self, rng, word_vectors, lemma_vectors) -> None:
        cfg = self.config
        def emb(name, rows, dim, table, keys):
            data = rng.normal(0.0, 0.01, size=(rows, dim))
            if table:
                sample = next(iter(table.values()))
                if sample.shape[0] != dim:
                    raise ValueError(f"{name}: vector file dimension {sample.shape[0]} "
                                     f"does not match configured dimension {dim}")
                for row, key in enumerate(keys):
                    if key in table:
                        data[row] = table[key]
            return self._param(name, data)

        emb("emb/word", len(self.vocab.forms), cfg.word_dim, word_vectors, self.vocab.forms)
        if cfg.use_lemma:
            emb("emb/lemma", len(self.vocab.lemmas), cfg.lemma_dim, lemma_vectors,
                self.vocab.lemmas)
        if cfg.use_char:
            self._param("emb/char", rng.normal(0.0, 0.01,
                                               size=(len(self.vocab.chars), cfg.char_emb_dim)))
            self._param("char/filters", ad.glorot_uniform(
                rng, (cfg.char_filters, cfg.char_window * cfg.char_emb_dim)))
            self._param("char/bias", np.zeros(cfg.char_filters))
        if self.gold_mode and cfg.use_indicator:
            self._param("emb/indicator", rng.normal(0.0, 0.01, size=(2, cfg.indicator_dim)))

        self.encoder: list[tuple[ad.LSTMWeights, ad.LSTMWeights]] = []
        in_dim = self.embedding_dim()
        for layer in range(cfg.encoder_layers):
            fw = self._lstm(f"enc/l{layer}/fw", in_dim, rng)
            bw = self._lstm(f"enc/l{layer}/bw", in_dim, rng)
            self.encoder.append((fw, bw))
            in_dim = 2 * cfg.hidden
        self._param("enc/root", rng.normal(0.0, 0.01, size=2 * cfg.hidden))
        self.decoder = self._lstm("dec/l0", 2 * cfg.hidden, rng)

        h, d = cfg.hidden, cfg.hidden // 2
        self._param("ptr/f1_w", ad.glorot_uniform(rng, (d, h)))
        self._param("ptr/f1_b", np.zeros(d))
        self._param("ptr/f2_w", ad.glorot_uniform(rng, (d, 2 * h)))
        self._param("ptr/f2_b", np.zeros(d))
        self._param("ptr/w", ad.glorot_uniform(rng, (d, d)))
        self._param("ptr/u", np.zeros(d))
        self._param("ptr/v", np.zeros(d))
        self._param("ptr/b", np.zeros(()))
        n_labels = self.vocab.n_labels
        self._param("lab/g1_w", ad.glorot_uniform(rng, (d, h)))
        self._param("lab/g1_b", np.zeros(d))
        self._param("lab/g2_w", ad.glorot_uniform(rng, (d, 2 * h)))
        self._param("lab/g2_b", np.zeros(d))
        self._param("lab/w", ad.glorot_uniform(rng, (n_labels, d, d)))
        self._param("lab/u", np.zeros((n_labels, d)))
        self._param("lab/v", np.zeros((n_labels, d)))
        self._param("lab/b", np.zeros(n_labels))

    def embedding_dim(self) -> int:
        cfg = self.config
        dim = cfg.word_dim
        if cfg.use_lemma:
            dim += cfg.lemma_dim
        if cfg.use_char:
            dim += cfg.char_filters
        if cfg.use_context_vectors:
            dim += cfg.context_dim
        if self.gold_mode and cfg.use_indicator:
            dim += cfg.indicator_dim
        return dim

    def _t(self, name: str) -> Tensor:
        return self.params[name].tensor

    def parameters(self) -> list[Parameter]:
        return list(self.params.values())

    # -- forward ----------------------------------------------------------

    def represent(self, sentence: Sentence, gold_set: frozenset[int], train: bool,
                  rng: np.random.Generator | None = None,
                  context: np.ndarray | None = None) -> list[Tensor]:
        """Token embeddings e_1..e_n (concatenation of the enabled parts)."""
        cfg = self.config
        if cfg.use_context_vectors:
            if context is None:
                raise ValueError("model expects context vectors but none were given")
            if context.shape != (len(sentence), cfg.context_dim):
                raise ad.DimensionError("represent",
                                        f"context matrix {context.shape} does not match "
                                        f"({len(sentence)}, {cfg.context_dim})")
        out: list[Tensor] = []
        for idx, token in enumerate(sentence.tokens):
            parts = [ad.embed(self._t("emb/word"), self.vocab.form_id(token.form))]
            if cfg.use_lemma:
                parts.append(ad.embed(self._t("emb/lemma"), self.vocab.lemma_id(token.lemma)))
            if cfg.use_char:
                chars = ad.take_rows(self._t("emb/char"), self.vocab.char_ids(token.form))
                parts.append(ad.conv1d_maxpool(chars, self._t("char/filters"),
                                               self._t("char/bias"), cfg.char_window))
            if cfg.use_context_vectors:
                parts.append(ad.constant(context[idx]))
            if self.gold_mode and cfg.use_indicator:
                parts.append(ad.embed(self._t("emb/indicator"),
                                      1 if token.id in gold_set else 0))
            e = ad.concat_vec(parts)
            if train:
                e = ad.dropout(e, cfg.dropout, True, rng)
            out.append(e)
        return out

    def _sample_masks(self, rng: np.random.Generator) -> _DropoutMasks:
        cfg = self.config
        h = cfg.hidden
        layer_inputs: list[np.ndarray | None] = [None]
        recurrent = []
        for layer in range(cfg.encoder_layers):
            if layer > 0:
                layer_inputs.append(ad.dropout_mask((2 * h,), cfg.dropout, rng))
            recurrent.append((ad.dropout_mask((h,), cfg.dropout, rng),
                              ad.dropout_mask((h,), cfg.dropout, rng)))
        return _DropoutMasks(layer_inputs=layer_inputs, recurrent=recurrent,
                             decoder_recurrent=ad.dropout_mask((h,), cfg.dropout, rng))

    def encode(self, embeddings: list[Tensor], train: bool = False,
               masks: _DropoutMasks | None = None) -> list[Tensor]:
        """Stacked BiLSTM; returns [h_0, h_1, ..., h_n] with the learned root."""
        if not embeddings:
            raise ValueError("cannot encode an empty sentence")
        cfg = self.config
        zeros = ad.constant(np.zeros(cfg.hidden))
        inputs = embeddings
        for layer, (fw, bw) in enumerate(self.encoder):
            if train and masks.layer_inputs[layer] is not None:
                inputs = [ad.mul_const(x, masks.layer_inputs[layer]) for x in inputs]
            outputs = []
            for direction, weights in ((0, fw), (1, bw)):
                seq = inputs if direction == 0 else list(reversed(inputs))
                h, c = zeros, zeros
                states = []
                for x in seq:
                    h_in = ad.mul_const(h, masks.recurrent[layer][direction]) if train else h
                    h, c = ad.lstm_step(x, h_in, c, weights)
                    states.append(h)
                outputs.append(states if direction == 0 else list(reversed(states)))
            inputs = [ad.concat_vec([f, b]) for f, b in zip(outputs[0], outputs[1])]
        return [self._t("enc/root")] + inputs

    def encode_sentence(self, sentence: Sentence, mode: Mode, train: bool = False,
                        rng: np.random.Generator | None = None,
                        context: np.ndarray | None = None,
                        masks: _DropoutMasks | None = None) -> list[Tensor]:
        gold_set = mode.gold_set if mode.is_gold else frozenset()
        embeddings = self.represent(sentence, gold_set, train, rng, context)
        return self.encode(embeddings, train, masks)

    def pointer_cache(self, h: list[Tensor]) -> tuple[Tensor, Tensor, Tensor]:
        """Per-sentence projections shared by the training loss steps."""
        h_mat = ad.stack_rows(h)
        f2 = ad.elu(ad.linear(h_mat, self._t("ptr/f2_w"), self._t("ptr/f2_b")))
        f2v = ad.matmul(f2, self._t("ptr/v"))
        return h_mat, f2, f2v

    def decoder_start(self) -> tuple[Tensor, Tensor]:
        zeros = np.zeros(self.config.hidden)
        return ad.constant(zeros), ad.constant(zeros.copy())

    def decoder_step(self, h: list[Tensor], i: int, j: int,
                     dec: tuple[Tensor, Tensor],
                     cache: tuple[Tensor, Tensor, Tensor] | None = None,
                     train: bool = False,
                     masks: _DropoutMasks | None = None
                     ) -> tuple[Tensor, Tensor, tuple[Tensor, Tensor]]:
        """One decoder step at state <i, j>; returns (alpha, s_t, new memory).

        With co-parent features off (or before any head is assigned,
        j = -1), the decoder input is h_i alone.
        """
        r = h[i]
        if j >= 0 and self.config.use_coparent:
            r = ad.add(r, h[j])
        dec_h, dec_c = dec
        if train:
            dec_h = ad.mul_const(dec_h, masks.decoder_recurrent)
        s, c_new = ad.lstm_step(r, dec_h, dec_c, self.decoder)

        if cache is None:
            cache = self.pointer_cache(h)
        _, f2, f2v = cache
        f1 = ad.elu(ad.linear(s, self._t("ptr/f1_w"), self._t("ptr/f1_b")))
        bil = ad.matmul(f2, ad.matmul(ad.transpose(self._t("ptr/w")), f1))
        const = ad.add(ad.matmul(self._t("ptr/u"), f1), self._t("ptr/b"))
        alpha = ad.softmax(ad.add_scalar(ad.add(bil, f2v), const))
        return alpha, s, (s, c_new)

    def label_distribution(self, s: Tensor, h_head: Tensor) -> Tensor:
        """Softmax over the label vocabulary for an arc (s_t, h_head)."""
        g1 = ad.elu(ad.linear(s, self._t("lab/g1_w"), self._t("lab/g1_b")))
        g2 = ad.elu(ad.linear(h_head, self._t("lab/g2_w"), self._t("lab/g2_b")))
        scores = ad.add_n([
            ad.bilinear(g1, self._t("lab/w"), g2),
            ad.matmul(self._t("lab/u"), g1),
            ad.matmul(self._t("lab/v"), g2),
            self._t("lab/b"),
        ])
        return ad.softmax(scores)

    def pick_label(self, beta: np.ndarray, head: int) -> str:
        """Greedy label choice; sense-bearing labels only on root arcs."""
        if head != 0 and self._nonroot_label_ok.any():
            masked = np.where(self._nonroot_label_ok, beta, -1.0)
            return self.vocab.labels[int(masked.argmax())]
        return self.vocab.labels[int(beta.argmax())]

    # -- training loss ----------------------------------------------------

    def loss(self, sentence: Sentence, graph: SemGraph, mode: Mode = FULL,
             train: bool = True, rng: np.random.Generator | None = None,
             context: np.ndarray | None = None) -> Tensor:
        """Teacher-forced pointer + labeler log loss for one sentence."""
        n = len(sentence)
        masks = self._sample_masks(rng) if train else None
        h = self.encode_sentence(sentence, mode, train, rng, context, masks)
        cache = self.pointer_cache(h)
        actions = oracle(graph, mode)
        state = _initial_state(n, mode)
        dec = self.decoder_start()
        terms: list[Tensor] = []
        pending_root = set(mode.gold_set) if mode.is_gold else set()
        for action, arc_label in actions:
            alpha, s, dec = self.decoder_step(h, state.i, state.j, dec, cache, train, masks)
            if state.i in pending_root:
                pending_root.discard(state.i)
                gold = self._label_index(graph.label(0, state.i))
                terms.append(ad.cross_entropy(self.label_distribution(s, h[0]), gold))
            target = action.p if action.kind == ARC else state.i
            terms.append(ad.cross_entropy(alpha, target))
            if action.kind == ARC:
                beta = self.label_distribution(s, h[action.p])
                terms.append(ad.cross_entropy(beta, self._label_index(arc_label)))
            state = apply_action(state, action, n, mode)
        return ad.add_n(terms)

    def _label_index(self, label: str) -> int:
        idx = self.vocab.label_id(label)
        if idx is None:
            raise ValueError(f"label {label!r} is not in the training vocabulary")
        return idx

    # -- decoding ---------------------------------------------------------

    def decode(self, sentence: Sentence, mode: Mode = FULL, beam: int | None = None,
               context: np.ndarray | None = None) -> DecodeResult:
        """Parse one sentence; beam defaults to the configured width."""
        with ad.no_grad():
            h = self.encode_sentence(sentence, mode, context=context)
            return self.beam_decode(h, len(sentence), mode, beam)

    def beam_decode(self, h: list[Tensor], n: int, mode: Mode = FULL,
                    beam: int | None = None) -> DecodeResult:
        """Beam search from precomputed encoder vectors.

        Items are (state, decoder memory, cumulative pointer log prob);
        every step each live item is extended with its top-scoring legal
        actions, terminal items are frozen, and the best-scoring survivors
        are kept.  One slot is reserved for the greedy trajectory, so the
        returned log prob is monotone in the beam width relative to
        beam = 1 (which is exactly greedy decoding).
        """
        width = beam if beam is not None else (self.config.beam if self.config.use_beam else 1)
        if width < 1:
            raise ValueError("beam width must be at least 1")
        with ad.no_grad():
            dec_h, dec_c = self.decoder_start()
            root_arcs = {}
            if mode.is_gold:
                root_arcs = {(0, p): "" for p in mode.gold_set}
            live = [_BeamItem(state=_initial_state(n, mode), dec_h=dec_h, dec_c=dec_c,
                              log_prob=0.0, arcs=dict(root_arcs), root_labels={},
                              steps=0, is_greedy=True)]
            finished: list[_BeamItem] = []
            while live:
                children: list[_BeamItem] = []
                for item in live:
                    children.extend(self._extend(item, h, n, mode, width))
                next_live: list[_BeamItem] = []
                greedy_child = next((c for c in children if c.is_greedy), None)
                if greedy_child is not None and greedy_child.state.is_terminal(n):
                    finished.append(greedy_child)
                    greedy_child = None
                for child in sorted(
                        (c for c in children if not c.is_greedy),
                        key=lambda c: -c.log_prob):
                    if child.state.is_terminal(n):
                        finished.append(child)
                    elif len(next_live) < width - (1 if greedy_child is not None else 0):
                        next_live.append(child)
                if greedy_child is not None:
                    next_live.insert(0, greedy_child)
                live = next_live
            best = max(finished, key=lambda item: item.log_prob)
            return DecodeResult(graph=self._item_graph(best, n), log_prob=best.log_prob,
                                steps=best.steps)

    def _extend(self, item: _BeamItem, h: list[Tensor], n: int, mode: Mode,
                width: int) -> list[_BeamItem]:
        alpha, s, dec = self.decoder_step(h, item.state.i, item.state.j,
                                          (item.dec_h, item.dec_c))
        root_labels = item.root_labels
        if mode.is_gold and item.state.i in mode.gold_set and item.state.i not in root_labels:
            beta = self.label_distribution(s, h[0]).data
            root_labels = dict(root_labels)
            root_labels[item.state.i] = self.vocab.labels[int(beta.argmax())]
        probs = alpha.data
        children: list[_BeamItem] = []
        for p in np.argsort(-probs, kind="stable"):
            p = int(p)
            if p == item.state.i:
                action = Action.shift()
            elif p == 0 and mode.is_gold:
                # root attachment is deterministic under gold predicates
                continue
            elif legal(item.state, Action.arc(p), n, mode):
                action = Action.arc(p)
            else:
                continue
            arcs = dict(item.arcs)
            if action.kind == ARC:
                beta = self.label_distribution(s, h[p]).data
                arcs[(p, item.state.i)] = self.pick_label(beta, p)
            children.append(_BeamItem(
                state=apply_action(item.state, action, n, mode),
                dec_h=dec[0], dec_c=dec[1],
                log_prob=item.log_prob + float(np.log(probs[p])),
                arcs=arcs, root_labels=root_labels, steps=item.steps + 1,
                is_greedy=item.is_greedy and not children))
            if len(children) >= width:
                break
        return children

    def _item_graph(self, item: _BeamItem, n: int) -> SemGraph:
        graph = SemGraph(n)
        for (head, dep), label in sorted(item.arcs.items()):
            if head == 0 and dep in item.root_labels:
                label = item.root_labels[dep]
            graph.add_arc(head, dep, label)
        return graph

    # -- persistence --------------------------------------------------------

    def save(self, path: str) -> None:
        tensors = {name: p.data for name, p in self.params.items()}
        metadata = {"kind": "srl-pointer-network",
                    "config": self.config.to_dict(),
                    "vocab": self.vocab.to_dict(),
                    "gold_mode": self.gold_mode}
        save_checkpoint(path, tensors, metadata)

    @staticmethod
    def load(path: str) -> "PointerNetwork":
        metadata, tensors = load_checkpoint(path)
        if metadata.get("kind") != "srl-pointer-network":
            raise CheckpointError(f"{path}: not a pointer-network checkpoint")
        config = ModelConfig.from_dict(metadata["config"])
        vocab = Vocabulary.from_dict(metadata["vocab"])
        model = PointerNetwork(config, vocab, bool(metadata["gold_mode"]),
                               np.random.default_rng(0))
        expected = set(model.params)
        stored = set(tensors)
        if expected != stored:
            raise CheckpointError(
                f"{path}: parameter set mismatch (missing {sorted(expected - stored)}, "
                f"unexpected {sorted(stored - expected)})")
        for name, param in model.params.items():
            if param.data.shape != tensors[name].shape:
                raise CheckpointError(
                    f"{path}: {name} has shape {tensors[name].shape}, "
                    f"expected {param.data.shape}")
            param.tensor.data = tensors[name]
            param.m = np.zeros_like(param.tensor.data)
            param.v = np.zeros_like(param.tensor.data)
        return model


def _initial_state(n: int, mode: Mode) -> ParserState:
    if mode.is_gold:
        return ParserState.initial(frozenset((0, p) for p in mode.gold_set))
    return ParserState.initial()


def select_action(alpha: np.ndarray, state: ParserState, n: int, mode: Mode = FULL) -> Action:
    """Highest-scoring legal position: the focus itself means Shift, any
    other legal position means Arc; ties go to the lower index."""
    for p in np.argsort(-alpha, kind="stable"):
        p = int(p)
        if p == state.i:
            return Action.shift()
        if legal(state, Action.arc(p), n, mode):
            return Action.arc(p)
    raise RuntimeError("no legal action; state is terminal")


def mode_for_sentence(sentence: Sentence, gold_predicates: bool) -> Mode:
    if gold_predicates:
        return Mode.gold_predicates(sentence.predicate_positions())
    return FULL
