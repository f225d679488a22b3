"""Loaders for external embedding files.

Two text formats are supported:

* type-level word vectors, one `token v1 ... vd` line per word type,
  used to initialize word/lemma embedding tables;
* token-aligned context vectors, one whitespace-separated vector line per
  corpus token in reading order (blank lines are ignored), used as frozen
  per-token inputs.
"""
from __future__ import annotations

import numpy as np

from .conll import Sentence


class VectorFileError(ValueError):
    pass


def load_word_vectors(path: str) -> tuple[int, dict[str, np.ndarray]]:
    """Returns (dimension, token -> vector).  Later duplicates win."""
    table: dict[str, np.ndarray] = {}
    dim = None
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) < 2:
                raise VectorFileError(f"{path}:{lineno}: no vector components")
            token = parts[0]
            try:
                vector = np.asarray([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError:
                raise VectorFileError(f"{path}:{lineno}: non-numeric component") from None
            if dim is None:
                dim = vector.shape[0]
            elif vector.shape[0] != dim:
                raise VectorFileError(
                    f"{path}:{lineno}: expected {dim} components, got {vector.shape[0]}")
            table[token] = vector
    if dim is None:
        raise VectorFileError(f"{path}: empty vector file")
    return dim, table


def load_context_vectors(path: str, sentences: list[Sentence]) -> list[np.ndarray]:
    """Split a token-aligned vector file into one (n_i, dim) matrix per sentence."""
    rows: list[np.ndarray] = []
    dim = None
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            parts = line.split()
            if not parts:
                continue
            try:
                vector = np.asarray([float(x) for x in parts], dtype=np.float64)
            except ValueError:
                raise VectorFileError(f"{path}:{lineno}: non-numeric component") from None
            if dim is None:
                dim = vector.shape[0]
            elif vector.shape[0] != dim:
                raise VectorFileError(
                    f"{path}:{lineno}: expected {dim} components, got {vector.shape[0]}")
            rows.append(vector)
    total = sum(len(s) for s in sentences)
    if len(rows) != total:
        raise VectorFileError(
            f"{path}: {len(rows)} vector lines for {total} corpus tokens")
    matrices: list[np.ndarray] = []
    offset = 0
    for sentence in sentences:
        matrices.append(np.stack(rows[offset:offset + len(sentence)]))
        offset += len(sentence)
    return matrices
