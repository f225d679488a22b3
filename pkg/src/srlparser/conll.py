"""Reading and writing CoNLL-2009 files.

Each sentence is a block of tab-separated rows delimited by a blank line.
The first 14 columns are fixed:

    ID FORM LEMMA PLEMMA POS PPOS FEAT PFEAT HEAD PHEAD DEPREL PDEPREL
    FILLPRED PRED

followed by one APRED column per predicate (per row with FILLPRED = "Y",
in token order).  Empty cells hold "_".  An APRED cell may carry several
roles for the same predicate-argument pair, joined with "|".

Comment lines are rejected and CRLF line endings are normalized; the
round-trip guarantee (bytes -> sentences -> bytes) holds for files with
single-tab separators and a trailing newline.
"""
from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, replace

FIXED_COLUMNS = 14

STRIP_KEEP_PREDICATES = "keep-predicates"
STRIP_PLAIN_TEXT = "plain-text"


class ConllFormatError(ValueError):
    """Malformed input; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConllSerializationError(ValueError):
    """A Sentence violates its invariants and cannot be written."""


class ConllFormatWarning(UserWarning):
    """Recoverable irregularity in a gold file (e.g. FILLPRED/PRED mismatch)."""


@dataclass(frozen=True)
class Token:
    id: int
    form: str
    lemma: str = "_"
    plemma: str = "_"
    pos: str = "_"
    ppos: str = "_"
    feat: str = "_"
    pfeat: str = "_"
    head: int | None = None
    phead: int | None = None
    deprel: str = "_"
    pdeprel: str = "_"
    fillpred: bool = False
    pred: str = ""


@dataclass(frozen=True)
class Frame:
    """Gold annotation of one predicate: its sense and its arguments.

    `sense` is the part of the PRED column after the last '.', with the
    lemma part kept separately in `pred_lemma` so the column can be
    reconstructed verbatim.  `args` lists (token position, role) pairs in
    APRED reading order; a position may repeat with distinct roles.
    """

    predicate: int
    sense: str
    args: tuple[tuple[int, str], ...] = ()
    pred_lemma: str = ""

    def pred_column(self) -> str:
        if self.pred_lemma:
            return f"{self.pred_lemma}.{self.sense}"
        return self.sense


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    frames: tuple[Frame, ...] = ()

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def n(self) -> int:
        return len(self.tokens)

    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    def predicate_positions(self) -> list[int]:
        return [t.id for t in self.tokens if t.fillpred]


def _parse_head(cell: str, line: int) -> int | None:
    if cell in ("_", ""):
        return None
    try:
        return int(cell)
    except ValueError:
        raise ConllFormatError(f"HEAD/PHEAD value {cell!r} is not an integer", line) from None


def _head_cell(value: int | None) -> str:
    return "_" if value is None else str(value)


def _split_pred(pred: str, line: int) -> tuple[str, str]:
    """Split a PRED column value into (lemma part, sense part)."""
    if "." in pred:
        lemma, sense = pred.rsplit(".", 1)
        return lemma, sense
    warnings.warn(
        ConllFormatWarning(f"line {line}: PRED value {pred!r} has no '.' separator; "
                           f"treating the whole value as the sense"))
    return "", pred


def read_conll(data: bytes | str) -> list[Sentence]:
    """Parse CoNLL-2009 content into sentences.

    Raises ConllFormatError for rows with fewer than 14 columns, ragged
    APRED blocks, non-consecutive token ids, comment lines, and
    APRED/FILLPRED count mismatches.  FILLPRED/PRED inconsistencies only
    emit a ConllFormatWarning.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data
    text = text.replace("\r\n", "\n").replace("\r", "\n")

    sentences: list[Sentence] = []
    block: list[tuple[int, list[str]]] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if line.startswith("#"):
            raise ConllFormatError("comment lines are not supported", lineno)
        if line.strip() == "":
            if block:
                sentences.append(_parse_block(block))
                block = []
            continue
        columns = line.split("\t")
        if len(columns) < FIXED_COLUMNS:
            raise ConllFormatError(
                f"expected at least {FIXED_COLUMNS} tab-separated columns, got {len(columns)}",
                lineno)
        block.append((lineno, columns))
    if block:
        sentences.append(_parse_block(block))
    return sentences


def _parse_block(block: list[tuple[int, list[str]]]) -> Sentence:
    first_line = block[0][0]
    width = len(block[0][1])
    tokens: list[Token] = []
    for expect_id, (lineno, cols) in enumerate(block, start=1):
        if len(cols) != width:
            raise ConllFormatError(
                f"row has {len(cols)} columns but the sentence starts with {width}", lineno)
        try:
            tok_id = int(cols[0])
        except ValueError:
            raise ConllFormatError(f"token id {cols[0]!r} is not an integer", lineno) from None
        if tok_id != expect_id:
            raise ConllFormatError(
                f"token ids must be consecutive from 1; expected {expect_id}, got {tok_id}",
                lineno)
        if cols[12] not in ("Y", "_"):
            raise ConllFormatError(f"FILLPRED must be 'Y' or '_', got {cols[12]!r}", lineno)
        fillpred = cols[12] == "Y"
        pred = "" if cols[13] == "_" else cols[13]
        if fillpred != bool(pred):
            warnings.warn(
                ConllFormatWarning(f"line {lineno}: FILLPRED={cols[12]!r} but PRED={cols[13]!r}"))
        tokens.append(Token(
            id=tok_id, form=cols[1], lemma=cols[2], plemma=cols[3],
            pos=cols[4], ppos=cols[5], feat=cols[6], pfeat=cols[7],
            head=_parse_head(cols[8], lineno), phead=_parse_head(cols[9], lineno),
            deprel=cols[10], pdeprel=cols[11], fillpred=fillpred, pred=pred))

    apred_count = width - FIXED_COLUMNS
    predicate_rows = [i for i, t in enumerate(tokens) if t.fillpred]
    if apred_count != len(predicate_rows):
        raise ConllFormatError(
            f"sentence has {len(predicate_rows)} FILLPRED rows but {apred_count} APRED columns",
            first_line)

    frames: list[Frame] = []
    for col, row_idx in enumerate(predicate_rows):
        tok = tokens[row_idx]
        pred_lemma, sense = _split_pred(tok.pred, block[row_idx][0]) if tok.pred else ("", "")
        args: list[tuple[int, str]] = []
        seen: set[tuple[int, str]] = set()
        for (lineno, cols) in block:
            cell = cols[FIXED_COLUMNS + col]
            if cell == "_":
                continue
            position = int(cols[0])
            for role in cell.split("|"):
                if (position, role) in seen:
                    raise ConllFormatError(
                        f"duplicate role {role!r} for predicate {tok.id} and argument {position}",
                        lineno)
                seen.add((position, role))
                args.append((position, role))
        frames.append(Frame(predicate=tok.id, sense=sense, args=tuple(args),
                            pred_lemma=pred_lemma))
    return Sentence(tokens=tuple(tokens), frames=tuple(frames))


def write_conll(sentences: list[Sentence]) -> bytes:
    """Serialize sentences back to CoNLL-2009 bytes (UTF-8, LF endings)."""
    out = io.StringIO()
    for index, sentence in enumerate(sentences):
        _write_block(out, sentence, index)
    return out.getvalue().encode("utf-8")


def _write_block(out: io.StringIO, sentence: Sentence, index: int) -> None:
    n = len(sentence.tokens)
    predicates = [t.id for t in sentence.tokens if t.fillpred]
    if len(predicates) != len(sentence.frames):
        raise ConllSerializationError(
            f"sentence {index}: {len(sentence.frames)} frames but "
            f"{len(predicates)} FILLPRED tokens")
    # roles[column][position] -> "role1|role2"
    roles: list[dict[int, str]] = []
    for frame in sentence.frames:
        if not 1 <= frame.predicate <= n:
            raise ConllSerializationError(
                f"sentence {index}: frame predicate {frame.predicate} out of range 1..{n}")
        cells: dict[int, list[str]] = {}
        for position, role in frame.args:
            if not 1 <= position <= n:
                raise ConllSerializationError(
                    f"sentence {index}: argument position {position} out of range 1..{n}")
            cells.setdefault(position, []).append(role)
        roles.append({pos: "|".join(parts) for pos, parts in cells.items()})

    for tok in sentence.tokens:
        cols = [str(tok.id), tok.form, tok.lemma, tok.plemma, tok.pos, tok.ppos,
                tok.feat, tok.pfeat, _head_cell(tok.head), _head_cell(tok.phead),
                tok.deprel, tok.pdeprel, "Y" if tok.fillpred else "_",
                tok.pred if tok.pred else "_"]
        cols.extend(column.get(tok.id, "_") for column in roles)
        out.write("\t".join(cols))
        out.write("\n")
    out.write("\n")


def read_conll_file(path: str) -> list[Sentence]:
    with open(path, "rb") as handle:
        return read_conll(handle.read())


def write_conll_file(path: str, sentences: list[Sentence]) -> None:
    with open(path, "wb") as handle:
        handle.write(write_conll(sentences))


def strip_gold(sentence: Sentence, mode: str) -> Sentence:
    """Remove gold annotation to build evaluation inputs.

    "keep-predicates" blanks PRED and all APRED columns but keeps the
    FILLPRED flags; "plain-text" additionally blanks FILLPRED.  FORM and
    LEMMA columns are never touched.  Idempotent.
    """
    if mode not in (STRIP_KEEP_PREDICATES, STRIP_PLAIN_TEXT):
        raise ValueError(f"unknown strip mode {mode!r}")
    keep_flags = mode == STRIP_KEEP_PREDICATES
    tokens = tuple(
        replace(t, pred="", fillpred=t.fillpred if keep_flags else False)
        for t in sentence.tokens)
    return Sentence(tokens=tokens, frames=())
