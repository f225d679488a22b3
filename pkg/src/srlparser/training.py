"""Training loop and batch prediction on top of the pointer network.

One seeded generator drives parameter initialization, dropout masks and
the per-epoch shuffle, so a fixed seed reproduces the whole trajectory
(and the training log) byte for byte on a single thread.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import autodiff as ad
from .config import RunConfig
from .conll import STRIP_KEEP_PREDICATES, STRIP_PLAIN_TEXT, Sentence, strip_gold
from .graph import from_graph, to_graph
from .model import ModelConfig, PointerNetwork, Vocabulary, mode_for_sentence
from .optim import Adam, OptimizerConfig
from .scorer import ScoreReport, score
from .vectors import load_context_vectors, load_word_vectors


@dataclass
class TrainResult:
    best_f1: float
    best_epoch: int
    epochs_run: int
    log_lines: list[str]


def strip_mode(gold_predicates: bool) -> str:
    return STRIP_KEEP_PREDICATES if gold_predicates else STRIP_PLAIN_TEXT


def predict_sentences(model: PointerNetwork, sentences: list[Sentence],
                      beam: int | None = None,
                      contexts: list[np.ndarray] | None = None,
                      jobs: int = 1,
                      repairs: dict[str, int] | None = None) -> list[Sentence]:
    """Strip any gold annotation, decode, and rebuild CoNLL sentences."""
    stripped = [strip_gold(s, strip_mode(model.gold_mode)) for s in sentences]

    def parse_one(index: int) -> Sentence:
        sentence = stripped[index]
        mode = mode_for_sentence(sentence, model.gold_mode)
        context = contexts[index] if contexts is not None else None
        result = model.decode(sentence, mode, beam=beam, context=context)
        return from_graph(result.graph, sentence, repairs)

    if jobs > 1:
        with ad.no_grad():
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                return list(pool.map(parse_one, range(len(stripped))))
    return [parse_one(i) for i in range(len(stripped))]


def evaluate_model(model: PointerNetwork, gold: list[Sentence],
                   beam: int | None = None,
                   contexts: list[np.ndarray] | None = None,
                   jobs: int = 1) -> ScoreReport:
    predictions = predict_sentences(model, gold, beam=beam, contexts=contexts, jobs=jobs)
    return score(gold, predictions)


def build_model(run: RunConfig, train_sentences: list[Sentence],
                rng: np.random.Generator) -> PointerNetwork:
    graphs = [to_graph(s) for s in train_sentences]
    vocab = Vocabulary.build(train_sentences, graphs)
    word_vectors = None
    if run.vector_file:
        dim, word_vectors = load_word_vectors(run.vector_file)
        run.model.word_dim = dim
        run.model.lemma_dim = dim
    return PointerNetwork(run.model, vocab, run.gold_mode, rng,
                          word_vectors=word_vectors, lemma_vectors=word_vectors)


def train(run: RunConfig, train_sentences: list[Sentence],
          dev_sentences: list[Sentence],
          log=None) -> TrainResult:
    """Train up to run.epochs epochs, keeping the best-dev checkpoint.

    `log` is called with one preformatted line per epoch.  The learning
    rate decays by the configured factor after every `decay_patience`
    epochs without a dev-F1 improvement; `patience` (when non-zero) stops
    training after that many epochs without improvement.
    """
    run.validate()
    rng = np.random.default_rng(run.seed)
    model = build_model(run, train_sentences, rng)
    train_contexts = None
    dev_contexts = None
    if run.model.use_context_vectors:
        train_contexts = load_context_vectors(run.train_context, train_sentences)
        dev_contexts = load_context_vectors(run.dev_context, dev_sentences)

    if run.epochs == 0:
        if run.model_path:
            model.save(run.model_path)
        return TrainResult(best_f1=0.0, best_epoch=0, epochs_run=0, log_lines=[])

    graphs = [to_graph(s) for s in train_sentences]
    modes = [mode_for_sentence(s, run.gold_mode) for s in train_sentences]
    optimizer = Adam(model.parameters(), OptimizerConfig())
    best_f1 = -1.0
    best_epoch = 0
    since_best = 0
    lines: list[str] = []
    for epoch in range(1, run.epochs + 1):
        order = rng.permutation(len(train_sentences))
        total_loss = 0.0
        for start in range(0, len(order), run.batch):
            batch = order[start:start + run.batch]
            optimizer.zero_grad()
            for index in batch:
                context = train_contexts[index] if train_contexts is not None else None
                loss = model.loss(train_sentences[index], graphs[index], modes[index],
                                  train=True, rng=rng, context=context)
                total_loss += loss.item()
                ad.scale(loss, 1.0 / len(batch)).backward()
            optimizer.step()
        report = evaluate_model(model, dev_sentences, contexts=dev_contexts, jobs=run.jobs)
        avg_loss = total_loss / len(train_sentences)
        line = (f"epoch={epoch} loss={avg_loss:.6f} dev_p={report.precision:.2f} "
                f"dev_r={report.recall:.2f} dev_f1={report.f1:.2f} lr={optimizer.lr:.6g}")
        lines.append(line)
        if log is not None:
            log(line)
        if report.f1 > best_f1:
            best_f1 = report.f1
            best_epoch = epoch
            since_best = 0
            if run.model_path:
                model.save(run.model_path)
        else:
            since_best += 1
            if since_best % run.decay_patience == 0:
                optimizer.decay_lr()
            if run.patience and since_best >= run.patience:
                break
    return TrainResult(best_f1=best_f1, best_epoch=best_epoch,
                       epochs_run=epoch, log_lines=lines)
