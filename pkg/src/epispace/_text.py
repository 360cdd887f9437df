"""Line handling shared by the newline-delimited text formats."""

from __future__ import annotations

from typing import Iterator

from .errors import FormatError
from .logic import Signature, WorldSet


def directives(text: str) -> Iterator[tuple[int, list[str]]]:
    """Yield ``(line_number, tokens)`` for every non-blank, non-comment line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def worlds_field(sig: Signature, tokens: list[str], path: str, lineno: int) -> WorldSet:
    if tokens == ["(empty)"]:
        return 0
    mask = 0
    for tok in tokens:
        try:
            w = sig.parse_world(tok)
        except ValueError as exc:
            raise FormatError(str(exc), path, lineno, tok) from None
        mask |= 1 << w
    return mask


def format_worlds(sig: Signature, mask: WorldSet, empty: str = "") -> str:
    return " ".join(sig.format_worlds(mask)) if mask else empty
