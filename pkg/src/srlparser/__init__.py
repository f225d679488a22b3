"""Transition-based semantic role labeling with a pointer-network decoder."""

from .analyzer import ComplexityRecord, CorpusStats, analyze, bound_check
from .conll import (Frame, Sentence, Token, read_conll, read_conll_file, strip_gold,
                    write_conll, write_conll_file)
from .graph import SemGraph, from_graph, to_graph
from .model import DecodeResult, ModelConfig, PointerNetwork, Vocabulary, select_action
from .scorer import ScoreReport, score, score_breakdown_by_length
from .training import TrainResult, evaluate_model, predict_sentences, train
from .transitions import (Action, Mode, ParserState, apply_action, legal, oracle, run)

__version__ = "0.1.0"

__all__ = [
    "Action", "ComplexityRecord", "CorpusStats", "DecodeResult", "Frame",
    "Mode", "ModelConfig", "ParserState", "PointerNetwork", "ScoreReport",
    "SemGraph", "Sentence", "Token", "TrainResult", "Vocabulary", "analyze",
    "apply_action", "bound_check", "evaluate_model", "from_graph", "legal",
    "oracle", "predict_sentences", "read_conll", "read_conll_file", "run",
    "score", "score_breakdown_by_length", "select_action", "strip_gold",
    "to_graph", "train", "write_conll", "write_conll_file",
]
