"""Token-label wire format shared by both bracketing codecs.

A label is an optional root marker ``^`` followed by bracket symbols.
Each symbol is an optional super-tier marker ``!``, one bracket character
and an optional non-negative index::

    label   :=  '^'? symbol*        (empty label renders as '_')
    symbol  :=  '!'? bracket digits?
    bracket :=  '<' | '\\' | '/' | '>'

``<`` and ``\\`` belong to left arcs, ``/`` and ``>`` to right arcs;
``<`` and ``/`` open, ``\\`` and ``>`` close.  The index digit slot holds
the skip count in the hierarchical codec and the plane id in the plane
codec; the file header's codec tag tells them apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

Tier = Literal["plain", "super"]
Direction = Literal["left", "right"]
Polarity = Literal["open", "close"]

ROOT_MARKER = "^"
EMPTY_LABEL = "_"
SUPER_MARKER = "!"

_BRACKET_OF = {
    ("open", "left"): "<",
    ("open", "right"): "/",
    ("close", "left"): "\\",
    ("close", "right"): ">",
}
_MEANING_OF = {char: key for key, char in _BRACKET_OF.items()}


class LabelParseError(ValueError):
    """Raised by :func:`parse_label`; ``column`` is 1-based."""

    def __init__(self, text: str, column: int, message: str):
        super().__init__(f"column {column}: {message} in label {text!r}")
        self.text = text
        self.column = column


@dataclass(frozen=True)
class BracketSymbol:
    """One bracket: tier, direction, open/close and a non-negative index."""

    tier: Tier
    direction: Direction
    polarity: Polarity
    index: int = 0

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"negative symbol index: {self.index}")

    @property
    def is_super(self) -> bool:
        return self.tier == "super"

    @property
    def is_open(self) -> bool:
        return self.polarity == "open"

    def render(self) -> str:
        char = _BRACKET_OF[(self.polarity, self.direction)]
        prefix = SUPER_MARKER if self.tier == "super" else ""
        suffix = str(self.index) if self.index else ""
        return f"{prefix}{char}{suffix}"


@dataclass(frozen=True)
class TokenLabel:
    """Ordered symbols for one token, plus the root-attachment marker."""

    symbols: tuple[BracketSymbol, ...] = ()
    top: bool = False

    @classmethod
    def of(cls, *symbols: BracketSymbol, top: bool = False) -> "TokenLabel":
        return cls(symbols, top)

    def render(self) -> str:
        parts = [ROOT_MARKER] if self.top else []
        parts.extend(sym.render() for sym in self.symbols)
        return "".join(parts) or EMPTY_LABEL


def render_label(label: TokenLabel) -> str:
    return label.render()


def parse_label(text: str) -> TokenLabel:
    """Inverse of :func:`render_label`; errors carry the column offset."""
    if text == EMPTY_LABEL:
        return TokenLabel()
    symbols: list[BracketSymbol] = []
    top = False
    i, n = 0, len(text)
    if text.startswith(ROOT_MARKER):
        top = True
        i = 1
    while i < n:
        start = i
        tier: Tier = "plain"
        if text[i] == SUPER_MARKER:
            tier = "super"
            i += 1
            if i >= n:
                raise LabelParseError(text, start + 1, "dangling super marker")
        char = text[i]
        if char not in _MEANING_OF:
            raise LabelParseError(text, i + 1, f"unexpected character {char!r}")
        polarity, direction = _MEANING_OF[char]
        i += 1
        digits = i
        while i < n and text[i].isdigit():
            i += 1
        index = int(text[digits:i]) if i > digits else 0
        symbols.append(BracketSymbol(tier, direction, polarity, index))
    if not symbols and not top:
        raise LabelParseError(text, 1, "empty label must be written as '_'")
    return TokenLabel(tuple(symbols), top)
