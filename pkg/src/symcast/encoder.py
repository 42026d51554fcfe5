"""Symbol-to-integer-class encoding.

A corpus of symbol strings becomes a padded integer matrix of character
codes. Every row is compared position-by-position against a chosen
reference row; the agreement bits, read most-significant-bit first, give
each row an integer match value. Match values are normalized by the
corpus maximum into a scale in [0, 1], and the scale is mapped through
``floor(class_level ** scale)`` onto an integer class in
[1, class_level]. A decodable class -> symbol memory is built alongside,
with the last corpus row to land on a class owning its slot.

Match values are kept as arbitrary-precision integers and scales as exact
rationals; floating point enters only inside the class formula. All
functions here are pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import (
    BadClassError,
    BadClassLevelError,
    BadReferenceError,
    EmptyCorpusError,
    EmptyMemoryError,
    EmptyRowError,
    LengthMismatchError,
)

# Reference-row selector: "last", "first", or a 0-based row index.
Reference = Union[str, int]

MIN_CLASS_LEVEL = 2
MAX_CLASS_LEVEL = 10


@dataclass(frozen=True)
class SymbolMatrix:
    """Padded matrix of character codes, one row per corpus item."""

    rows: int
    width: int
    codes: tuple[tuple[int, ...], ...]
    lengths: tuple[int, ...]


@dataclass(frozen=True)
class MatchScore:
    """Positional agreement of one row against the reference row.

    ``bits`` holds 1 where the row's cell equals the reference cell
    (padding zeros compare equal to padding zeros), ``value`` is the bit
    vector read MSB-first as an integer, and ``scale`` is value divided by
    the maximum value over all rows.
    """

    bits: tuple[int, ...]
    value: int
    scale: Fraction


@dataclass(frozen=True)
class ClassSequence:
    """Integer classes for a corpus, each in [1, class_level]."""

    classes: tuple[int, ...]
    class_level: int

    def __len__(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class SensorMemory:
    """Class-indexed symbol slots used to decode predictions.

    Slot i holds the symbol for class i+1, or None when no corpus row
    encoded to that class (a redundant class cell).
    """

    slots: tuple[str | None, ...]

    @property
    def class_level(self) -> int:
        return len(self.slots)


@dataclass(frozen=True)
class EncodedCorpus:
    """Bundle of everything the encoder derives from one corpus."""

    matrix: SymbolMatrix
    scores: tuple[MatchScore, ...]
    classes: ClassSequence
    memory: SensorMemory


def symbol_integer_transform(corpus: Sequence[str]) -> SymbolMatrix:
    """Turn symbol strings into a zero-padded matrix of character codes.

    Raises EmptyCorpusError for an empty corpus and EmptyRowError (with the
    0-based row index) for an empty string. NUL characters are rejected
    because code 0 is reserved for padding.
    """
    if len(corpus) == 0:
        raise EmptyCorpusError("corpus is empty")
    for index, word in enumerate(corpus):
        if word == "":
            raise EmptyRowError(index)
        if "\x00" in word:
            raise ValueError(f"corpus row {index} contains NUL, which collides with padding")

    lengths = tuple(len(word) for word in corpus)
    width = max(lengths)
    codes = tuple(
        tuple(ord(ch) for ch in word) + (0,) * (width - len(word))
        for word in corpus
    )
    return SymbolMatrix(rows=len(corpus), width=width, codes=codes, lengths=lengths)


def resolve_reference(reference: Reference, rows: int) -> int:
    """Resolve a reference selector to a 0-based row index."""
    if reference == "last":
        return rows - 1
    if reference == "first":
        return 0
    if isinstance(reference, int) and not isinstance(reference, bool):
        if 0 <= reference < rows:
            return reference
        raise BadReferenceError(f"reference row {reference} out of range for {rows} rows")
    raise BadReferenceError(f"unknown reference selector: {reference!r}")


def swap_match(matrix: SymbolMatrix, reference: Reference = "last") -> list[MatchScore]:
    """Score every row's positional agreement against the reference row.

    Scaling all cells by the shared global maximum preserves cell equality
    exactly, so agreement is computed directly on the integer codes. Match
    values use arbitrary-precision integers and scales are exact rationals,
    so wide rows lose nothing.
    """
    ref_index = resolve_reference(reference, matrix.rows)
    ref_row = matrix.codes[ref_index]

    bit_rows = [
        tuple(1 if row[k] == ref_row[k] else 0 for k in range(matrix.width))
        for row in matrix.codes
    ]
    values = []
    for bits in bit_rows:
        value = 0
        for bit in bits:
            value = (value << 1) | bit
        values.append(value)

    max_value = max(values)
    return [
        MatchScore(bits=bits, value=value, scale=Fraction(value, max_value))
        for bits, value in zip(bit_rows, values)
    ]


def class_encode(scores: Sequence[MatchScore], class_level: int) -> ClassSequence:
    """Map match scales onto integer classes via floor(class_level ** scale)."""
    if not (MIN_CLASS_LEVEL <= class_level <= MAX_CLASS_LEVEL):
        raise BadClassLevelError(
            f"class_level must be in [{MIN_CLASS_LEVEL}, {MAX_CLASS_LEVEL}], got {class_level}"
        )
    if len(scores) == 0:
        raise ValueError("scores is empty")
    classes = tuple(
        math.floor(class_level ** float(score.scale)) for score in scores
    )
    return ClassSequence(classes=classes, class_level=class_level)


def build_sensor_memory(corpus: Sequence[str], classes: ClassSequence) -> SensorMemory:
    """Fill class slots with symbols; the last row per class wins its slot."""
    if len(corpus) != len(classes):
        raise LengthMismatchError(
            f"corpus has {len(corpus)} rows but class sequence has {len(classes)}"
        )
    slots: list[str | None] = [None] * classes.class_level
    for word, cls in zip(corpus, classes.classes):
        slots[cls - 1] = word
    return SensorMemory(slots=tuple(slots))


def decode_class(cls: int, memory: SensorMemory) -> tuple[str, bool]:
    """Decode a class to its symbol, falling back to the nearest filled slot.

    Returns (symbol, exact). exact is False when the class's own slot is
    empty and the nearest filled slot was used instead; equal distances
    resolve toward the lower class.
    """
    level = memory.class_level
    if not (1 <= cls <= level):
        raise BadClassError(f"class {cls} out of range [1, {level}]")

    slot = memory.slots[cls - 1]
    if slot is not None:
        return slot, True

    filled = [index for index, value in enumerate(memory.slots) if value is not None]
    if not filled:
        raise EmptyMemoryError("sensor memory has no filled slots")
    nearest = min(filled, key=lambda index: (abs(index - (cls - 1)), index))
    symbol = memory.slots[nearest]
    assert symbol is not None
    return symbol, False


def encode_corpus(
    corpus: Sequence[str],
    class_level: int,
    reference: Reference = "last",
) -> EncodedCorpus:
    """Run the full encoding chain over a corpus."""
    matrix = symbol_integer_transform(corpus)
    scores = swap_match(matrix, reference)
    classes = class_encode(scores, class_level)
    memory = build_sensor_memory(corpus, classes)
    return EncodedCorpus(
        matrix=matrix, scores=tuple(scores), classes=classes, memory=memory
    )
