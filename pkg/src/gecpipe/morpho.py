"""Lexicon-backed morphology lookups.

Four small, immutable resources drive the grammar-aware corruption ops:
an inflection lexicon (surface ↔ lemma/pos/features, both directions), a
misspelling list (correct form → attested misspellings), an oblique-verb
list (verbs whose subjects tempt speakers into the dative), and a
character-rule table (letter swaps and accent pairs). All are flat TSV
files so real, full-size resources can replace the bundled fixtures
without code changes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import ConfigError, FormatError, IOFailure

__all__ = [
    "Analysis",
    "InflectionLexicon",
    "MisspellingLexicon",
    "ObliqueVerb",
    "ObliqueVerbLexicon",
    "CharRule",
    "CharRuleTable",
    "match_capitalization",
    "valid_compound_splits",
    "feats_to_str",
    "feats_from_str",
    "with_feat",
]

CASES = ("nom", "acc", "dat", "gen")


class Analysis(NamedTuple):
    """One reading of a surface form."""

    lemma: str
    pos: str
    feats: frozenset  # of (key, value) pairs


def feats_from_str(raw: str) -> frozenset:
    if not raw or raw == "_":
        return frozenset()
    pairs = []
    for item in raw.split("|"):
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"bad feature {item!r}")
        pairs.append((key, value))
    return frozenset(pairs)


def feats_to_str(feats: Iterable[tuple[str, str]]) -> str:
    items = sorted(feats)
    return "|".join(f"{k}={v}" for k, v in items) if items else "_"


def with_feat(feats: frozenset, key: str, value: str) -> frozenset:
    """Copy of `feats` with `key` set to `value` (replacing any old value)."""
    return frozenset((k, v) for k, v in feats if k != key) | {(key, value)}


def match_capitalization(template: str, form: str) -> str:
    """Transfer the capitalization shape of `template` onto `form`."""
    if not template or not form:
        return form
    if len(template) > 1 and template.isupper():
        return form.upper()
    if template[0].isupper():
        return form[0].upper() + form[1:]
    return form


def _open_lexicon(path):
    try:
        return open(path, encoding="utf-8")
    except OSError as e:
        raise IOFailure(f"cannot open lexicon {path}: {e}") from e


class InflectionLexicon:
    """Bidirectional index between surfaces and (lemma, pos, feats) keys."""

    def __init__(self, rows: Iterable[tuple[str, str, str, frozenset]] = ()):
        # (lemma, pos, feats) -> surfaces in file order; surface -> analyses
        self._forward: dict[tuple[str, str, frozenset], list[str]] = {}
        self._reverse: dict[str, list[Analysis]] = {}
        for surface, lemma, pos, feats in rows:
            self.add(surface, lemma, pos, feats)

    def add(self, surface: str, lemma: str, pos: str, feats: frozenset) -> None:
        if not surface:
            raise ConfigError("inflection entry with empty surface")
        key = (lemma, pos, feats)
        surfaces = self._forward.setdefault(key, [])
        if surface not in surfaces:
            surfaces.append(surface)
        analyses = self._reverse.setdefault(surface, [])
        analysis = Analysis(lemma, pos, feats)
        if analysis not in analyses:
            analyses.append(analysis)

    @classmethod
    def load(cls, path) -> "InflectionLexicon":
        lex = cls()
        with _open_lexicon(path) as f:
            for lineno, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cols = line.split("\t")
                if len(cols) != 4:
                    raise FormatError(f"expected 4 columns, got {len(cols)}", str(path), lineno)
                surface, lemma, pos, feats_raw = cols
                try:
                    feats = feats_from_str(feats_raw)
                except ValueError as e:
                    raise FormatError(str(e), str(path), lineno) from e
                lex.add(surface, lemma or surface, pos, feats)
        return lex

    def __len__(self) -> int:
        return len(self._reverse)

    def inflect(self, lemma: str, pos: str, feats: frozenset) -> tuple[str, ...]:
        """All surfaces for the key, in file order; empty when unknown."""
        return tuple(self._forward.get((lemma, pos, feats), ()))

    def analyze(self, surface: str) -> tuple[Analysis, ...]:
        """All readings of the exact surface; falls back to the
        decapitalized form for sentence-initial capitals."""
        hits = self._reverse.get(surface)
        if hits is None and surface[:1].isupper():
            hits = self._reverse.get(surface[0].lower() + surface[1:])
        return tuple(hits) if hits else ()

    def has_surface(self, surface: str) -> bool:
        if surface in self._reverse:
            return True
        return surface[:1].isupper() and (surface[0].lower() + surface[1:]) in self._reverse

    def keys(self):
        return self._forward.keys()

    def surfaces(self):
        return self._reverse.keys()


class MisspellingLexicon:
    """Correct surface → misspelled variants, in file order."""

    def __init__(self, pairs: Iterable[tuple[str, str]] = ()):
        self._variants: dict[str, list[str]] = {}
        for correct, variant in pairs:
            self.add(correct, variant)

    def add(self, correct: str, variant: str) -> None:
        if not correct or not variant:
            raise ConfigError("misspelling entry with empty field")
        if variant == correct:
            raise ConfigError(f"misspelling variant equals its correct form: {correct!r}")
        variants = self._variants.setdefault(correct, [])
        if variant not in variants:
            variants.append(variant)

    @classmethod
    def load(cls, path) -> "MisspellingLexicon":
        lex = cls()
        with _open_lexicon(path) as f:
            for lineno, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cols = line.split("\t")
                if len(cols) != 2:
                    raise FormatError(f"expected 2 columns, got {len(cols)}", str(path), lineno)
                try:
                    lex.add(cols[0], cols[1])
                except ConfigError as e:
                    raise FormatError(str(e), str(path), lineno) from e
        return lex

    def __len__(self) -> int:
        return len(self._variants)

    def misspellings_of(self, surface: str) -> list[str]:
        """Variants for the surface, capitalization carried over."""
        hits = self._variants.get(surface)
        if hits is not None:
            return list(hits)
        if surface[:1].isupper():
            hits = self._variants.get(surface[0].lower() + surface[1:])
            if hits is not None:
                return [match_capitalization(surface, v) for v in hits]
        return []

    def keys(self):
        return self._variants.keys()

    def all_variants(self) -> frozenset:
        """Casefolded variant set, for the sentence-filter blocklist."""
        return frozenset(v.casefold() for vs in self._variants.values() for v in vs)


@dataclass(frozen=True, slots=True)
class ObliqueVerb:
    lemma: str
    standard_case: str  # subject case in standard language: nom or acc
    third_sg: str  # 3rd person singular form, "" when not listed


class ObliqueVerbLexicon:
    def __init__(self, verbs: Iterable[ObliqueVerb] = ()):
        self._verbs: dict[str, ObliqueVerb] = {}
        for v in verbs:
            self.add(v)

    def add(self, verb: ObliqueVerb) -> None:
        if verb.standard_case not in ("nom", "acc"):
            raise ConfigError(
                f"oblique verb {verb.lemma!r}: standard case must be nom or acc, got {verb.standard_case!r}"
            )
        self._verbs[verb.lemma] = verb

    @classmethod
    def load(cls, path) -> "ObliqueVerbLexicon":
        lex = cls()
        with _open_lexicon(path) as f:
            for lineno, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cols = line.split("\t")
                if len(cols) != 3:
                    raise FormatError(f"expected 3 columns, got {len(cols)}", str(path), lineno)
                lemma, case, third = cols
                try:
                    lex.add(ObliqueVerb(lemma, case, "" if third == "_" else third))
                except ConfigError as e:
                    raise FormatError(str(e), str(path), lineno) from e
        return lex

    def __len__(self) -> int:
        return len(self._verbs)

    def get(self, lemma: str) -> ObliqueVerb | None:
        return self._verbs.get(lemma)


@dataclass(frozen=True, slots=True)
class CharRule:
    pattern: str
    replacement: str
    bidirectional: bool


class CharRuleTable:
    """Ordered character-rewrite rules, e.g. y→i swaps or accent pairs."""

    def __init__(self, rules: Iterable[CharRule] = ()):
        self.rules: list[CharRule] = []
        self._directed: list[tuple[str, str]] | None = None
        self._search: re.Pattern | None = None
        for r in rules:
            self.add(r)

    def add(self, rule: CharRule) -> None:
        if not rule.pattern:
            raise ConfigError("char rule with empty pattern")
        if rule.pattern == rule.replacement:
            raise ConfigError(f"char rule maps {rule.pattern!r} to itself")
        self.rules.append(rule)
        self._directed = None
        self._search = None

    @classmethod
    def load(cls, path) -> "CharRuleTable":
        table = cls()
        with _open_lexicon(path) as f:
            for lineno, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cols = line.split("\t")
                if len(cols) == 2:
                    pattern, replacement, mode = cols[0], cols[1], "bi"
                elif len(cols) == 3:
                    pattern, replacement, mode = cols
                else:
                    raise FormatError(f"expected 2 or 3 columns, got {len(cols)}", str(path), lineno)
                if mode not in ("bi", "uni"):
                    raise FormatError(f"rule mode must be bi or uni, got {mode!r}", str(path), lineno)
                try:
                    table.add(CharRule(pattern, replacement, mode == "bi"))
                except ConfigError as e:
                    raise FormatError(str(e), str(path), lineno) from e
        return table

    def __len__(self) -> int:
        return len(self.rules)

    def directed_rules(self) -> list[tuple[str, str]]:
        """(pattern, replacement) pairs with bidirectional rules expanded."""
        if self._directed is None:
            out = []
            for r in self.rules:
                out.append((r.pattern, r.replacement))
                if r.bidirectional:
                    out.append((r.replacement, r.pattern))
            self._directed = out
        return self._directed

    def has_match(self, text: str) -> bool:
        if self._search is None:
            alts = "|".join(re.escape(p) for p, _ in self.directed_rules())
            self._search = re.compile(alts) if alts else re.compile(r"(?!)")
        return self._search.search(text) is not None

    def occurrences(self, text: str) -> list[tuple[int, str, str]]:
        """Every (position, pattern, replacement) applicable in `text`,
        sorted by position then rule order."""
        hits = []
        for rule_idx, (pattern, replacement) in enumerate(self.directed_rules()):
            start = text.find(pattern)
            while start != -1:
                hits.append((start, rule_idx, pattern, replacement))
                start = text.find(pattern, start + 1)
        hits.sort(key=lambda h: (h[0], h[1]))
        return [(pos, pattern, replacement) for pos, _, pattern, replacement in hits]


def valid_compound_splits(
    surface: str, lexicon: InflectionLexicon, min_part_len: int = 3
) -> list[tuple[str, str]]:
    """All ways to cut `surface` into two attested words, by cut position."""
    if min_part_len < 1:
        raise ConfigError(f"min_part_len must be >= 1, got {min_part_len}")
    out = []
    for cut in range(min_part_len, len(surface) - min_part_len + 1):
        left, right = surface[:cut], surface[cut:]
        if lexicon.has_surface(left) and lexicon.has_surface(right):
            out.append((left, right))
    return out
