"""Reading corpora and numeric series from byte streams."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import BinaryIO

from .errors import BadEncodingError, BadNumberError, EmptyCorpusError


@dataclass(frozen=True)
class Corpus:
    """Ordered, non-empty list of symbol strings plus where they came from."""

    items: tuple[str, ...]
    source: str


def _decode_lines(stream: BinaryIO) -> list[str]:
    data = stream.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise BadEncodingError(exc.start) from exc
    # Normalize \r\n and bare \r so only terminators are stripped.
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    return text.split("\n")


def read_text_corpus(stream: BinaryIO, source: str = "<stream>") -> Corpus:
    """One item per non-empty line, order preserved, blank lines skipped."""
    items = tuple(line for line in _decode_lines(stream) if line != "")
    if not items:
        raise EmptyCorpusError(f"{source}: no non-empty lines")
    return Corpus(items=items, source=source)


def read_numeric_series(stream: BinaryIO, source: str = "<stream>") -> Corpus:
    """Parse each non-empty line as a decimal number and canonicalize it.

    Integer-valued numbers are rendered without a decimal point ("20.0"
    becomes "20"); anything else uses the shortest round-trip decimal.
    Unparseable or non-finite lines raise BadNumberError with the 1-based
    physical line number.
    """
    items = []
    for line_number, line in enumerate(_decode_lines(stream), start=1):
        if line == "":
            continue
        try:
            value = float(line)
        except ValueError as exc:
            raise BadNumberError(line_number, line) from exc
        if not math.isfinite(value):
            raise BadNumberError(line_number, line)
        if value == int(value):
            items.append(str(int(value)))
        else:
            items.append(repr(value))
    if not items:
        raise EmptyCorpusError(f"{source}: no non-empty lines")
    return Corpus(items=tuple(items), source=source)
