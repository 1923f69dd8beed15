"""Deterministic, reversible tokenization.

Tokens carry character offsets into the original text, so the exact input
string (including all whitespace) can always be reconstructed from the
token list plus the recorded inter-token gaps. Word tokens are maximal
runs of letters, numbers keep internal decimal separators, punctuation is
split one character per token, and anything else (emoji, URLs' stray
bytes...) becomes a symbol run. A configurable abbreviation list keeps
forms like "t.d." as single word tokens.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from importlib import resources

__all__ = [
    "Token",
    "Tokenizer",
    "tokenize",
    "gaps",
    "detokenize",
    "default_spacing",
    "surfaces",
]

WORD = "word"
NUMBER = "number"
PUNCT = "punct"
SYMBOL = "symbol"

# One-char punctuation tokens; everything else non-alphanumeric is "symbol".
PUNCT_CHARS = string.punctuation + "«»„“”‘’‚–—…·"

# Spacing policy used when rendering token lists that carry no offsets
# (e.g. sentences read from a tagged corpus).
NO_SPACE_BEFORE = frozenset(".,;:!?)]}%…”’")
NO_SPACE_AFTER = frozenset("([{„‚")


@dataclass(frozen=True, slots=True)
class Token:
    surface: str
    start: int
    end: int
    kind: str


def _load_default_abbreviations() -> tuple[str, ...]:
    text = resources.files("gecpipe.data").joinpath("abbreviations.txt").read_text("utf-8")
    return tuple(line.strip() for line in text.splitlines() if line.strip())


class Tokenizer:
    """Rule-based tokenizer; a total function over Unicode strings."""

    def __init__(self, abbreviations: tuple[str, ...] | list[str] | None = None):
        if abbreviations is None:
            abbreviations = _load_default_abbreviations()
        self.abbreviations = tuple(abbreviations)
        self._pattern = self._compile()

    @classmethod
    def from_abbrev_file(cls, path) -> "Tokenizer":
        with open(path, encoding="utf-8") as f:
            abbrevs = [line.strip() for line in f if line.strip()]
        return cls(abbrevs)

    def _compile(self) -> re.Pattern[str]:
        parts = []
        if self.abbreviations:
            alts = "|".join(re.escape(a) for a in sorted(self.abbreviations, key=len, reverse=True))
            # whole-token match only: no letter directly before or after
            parts.append(rf"(?P<abbr>(?<![^\W\d_])(?:{alts})(?![^\W\d_]))")
        parts.append(r"(?P<num>\d+(?:[.,]\d+)*)")
        parts.append(r"(?P<word>[^\W\d_]+)")
        punct_cls = re.escape(PUNCT_CHARS)
        parts.append(rf"(?P<punct>[{punct_cls}])")
        parts.append(rf"(?P<sym>[^\s\w{punct_cls}]+)")
        return re.compile("|".join(parts))

    def tokenize(self, text: str) -> list[Token]:
        tokens: list[Token] = []
        for m in self._pattern.finditer(text):
            kind = m.lastgroup
            if kind == "abbr":
                kind = WORD
            elif kind == "num":
                kind = NUMBER
            elif kind == "sym":
                kind = SYMBOL
            tokens.append(Token(m.group(), m.start(), m.end(), kind))
        return tokens


_default = None


def _default_tokenizer() -> Tokenizer:
    global _default
    if _default is None:
        _default = Tokenizer()
    return _default


def tokenize(text: str) -> list[Token]:
    return _default_tokenizer().tokenize(text)


def surfaces(tokens: list[Token]) -> list[str]:
    return [t.surface for t in tokens]


def gaps(text: str, tokens: list[Token]) -> list[str]:
    """Whitespace strings around the tokens: gaps[i] precedes token i,
    gaps[len(tokens)] is the trailing whitespace."""
    out = []
    prev_end = 0
    for t in tokens:
        out.append(text[prev_end:t.start])
        prev_end = t.end
    out.append(text[prev_end:])
    return out


def detokenize(tokens, spacing: list[str]) -> str:
    """Inverse of tokenize: interleave recorded gaps with token surfaces.

    `tokens` may be Token objects or plain surface strings.
    """
    if len(spacing) != len(tokens) + 1:
        raise ValueError(
            f"spacing arity mismatch: {len(tokens)} tokens need {len(tokens) + 1} gaps, got {len(spacing)}"
        )
    parts = []
    for gap, tok in zip(spacing, tokens):
        parts.append(gap)
        parts.append(tok.surface if isinstance(tok, Token) else tok)
    parts.append(spacing[-1])
    return "".join(parts)


def default_spacing(token_surfaces: list[str]) -> list[str]:
    """Conventional gaps for a bare surface list: single spaces, none
    around attaching punctuation. Used for sentences whose original
    spacing was never recorded."""
    n = len(token_surfaces)
    spacing = [""] * (n + 1)
    for i in range(1, n):
        cur = token_surfaces[i]
        prev = token_surfaces[i - 1]
        if cur and cur[0] in NO_SPACE_BEFORE:
            continue
        if prev and prev[-1] in NO_SPACE_AFTER:
            continue
        spacing[i] = " "
    return spacing
