"""File formats and the sentence-quality filter.

Formats handled here:

* plain corpus — one sentence per line, UTF-8, NFC-normalized on read
* tagged corpus — ``surface<TAB>lemma<TAB>pos<TAB>feat=val|feat=val`` per
  token, blank line between sentences, ``_`` for an empty field
* parallel corpus — ``source<TAB>target`` per line with ``\\t``/``\\n``/``\\\\``
  escapes inside fields
* edit-log sidecar — one JSON object per line mirroring the parallel file
* M2 — ``S`` token line plus ``A`` edit lines, blank-line-separated entries

All readers raise FormatError with file and line number on malformed
input; read-then-write round trips are byte-identical.
"""

from __future__ import annotations

import json
import random
import unicodedata
from dataclasses import dataclass, field

from . import tokenizer as tok
from .edits import EditLog
from .errors import ConfigError, ExhaustedError, FormatError, IOFailure

__all__ = [
    "SentenceRecord",
    "TaggedToken",
    "TaggedSentence",
    "ParallelPair",
    "FilterRules",
    "M2Entry",
    "PlainCorpusReader",
    "read_plain_corpus",
    "write_plain_corpus",
    "read_tagged_corpus",
    "write_tagged_corpus",
    "filter_sentence",
    "read_parallel",
    "write_parallel",
    "read_edit_logs",
    "write_edit_logs",
    "read_m2",
    "write_m2",
    "split_corpus",
    "ICELANDIC_LETTERS",
    "REJECT_REASONS",
]

# Official Icelandic alphabet (no c, q, w, z), both cases. Used as the
# default "allowed" letter set for the foreign-text ratio check.
_LOWER = "aábdðeéfghiíjklmnoóprstuúvxyýþæö"
ICELANDIC_LETTERS = frozenset(_LOWER + _LOWER.upper())

REJECT_REASONS = ("illegal_char", "foreign_ratio", "known_misspelling", "length")


@dataclass(frozen=True, slots=True)
class SentenceRecord:
    id: str
    text: str


@dataclass(frozen=True, slots=True)
class TaggedToken:
    surface: str
    lemma: str
    pos: str
    feats: dict[str, str] = field(default_factory=dict)


@dataclass(slots=True)
class TaggedSentence:
    id: str
    tokens: list[TaggedToken]
    raw_text: str | None = None

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]


@dataclass(slots=True)
class ParallelPair:
    source: str
    target: str
    edits: EditLog | None = None

    def applied_ops(self) -> list[str]:
        return self.edits.applied_ops() if self.edits is not None else []


# ---------------------------------------------------------------------------
# plain corpus


class PlainCorpusReader:
    """Iterates SentenceRecords off a one-sentence-per-line file.

    Counts what it skips so preprocessing reports can say why the output
    is shorter than the input. In lenient mode undecodable lines are
    skipped; in strict mode they abort with a FormatError.
    """

    def __init__(self, path, lenient: bool = False, normalize: bool = True):
        self.path = str(path)
        self.lenient = lenient
        self.normalize = normalize
        self.n_lines = 0
        self.n_blank = 0
        self.n_decode_errors = 0

    def __iter__(self):
        try:
            f = open(self.path, "rb")
        except OSError as e:
            raise IOFailure(f"cannot open {self.path}: {e}") from e
        with f:
            for lineno, raw in enumerate(f, start=1):
                self.n_lines += 1
                raw = raw.rstrip(b"\r\n")
                try:
                    text = raw.decode("utf-8")
                except UnicodeDecodeError as e:
                    if self.lenient:
                        self.n_decode_errors += 1
                        continue
                    raise FormatError("invalid UTF-8", self.path, lineno) from e
                if self.normalize:
                    text = unicodedata.normalize("NFC", text)
                if not text.strip():
                    self.n_blank += 1
                    continue
                yield SentenceRecord(id=str(lineno), text=text)


def read_plain_corpus(path, lenient: bool = False):
    return iter(PlainCorpusReader(path, lenient=lenient))


def read_text_lines(path, normalize: bool = True) -> list[str]:
    """All lines of a line-aligned file, blanks preserved (unlike the
    corpus reader, which skips them)."""
    try:
        with open(path, encoding="utf-8") as f:
            lines = [line.rstrip("\n").rstrip("\r") for line in f]
    except OSError as e:
        raise IOFailure(f"cannot open {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise FormatError(f"invalid UTF-8: {e}", str(path)) from e
    if normalize:
        lines = [unicodedata.normalize("NFC", line) for line in lines]
    return lines


def write_plain_corpus(records, path) -> int:
    """Write sentences one per line; accepts SentenceRecords or strings."""
    n = 0
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for rec in records:
                text = rec.text if isinstance(rec, SentenceRecord) else rec
                if "\n" in text or "\r" in text:
                    raise ValueError(f"sentence contains a line break: {text!r}")
                f.write(text)
                f.write("\n")
                n += 1
    except OSError as e:
        raise IOFailure(f"cannot write {path}: {e}") from e
    return n


# ---------------------------------------------------------------------------
# tagged corpus


def _parse_feats(raw: str, path: str, lineno: int) -> dict[str, str]:
    if raw == "_" or not raw:
        return {}
    feats: dict[str, str] = {}
    for item in raw.split("|"):
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise FormatError(f"bad feature {item!r}", path, lineno)
        if key in feats:
            raise FormatError(f"duplicate feature key {key!r}", path, lineno)
        feats[key] = value
    return feats


def read_tagged_corpus(path):
    """Yield TaggedSentences from a 4-column tab-separated file."""
    path = str(path)
    try:
        f = open(path, encoding="utf-8")
    except OSError as e:
        raise IOFailure(f"cannot open {path}: {e}") from e
    with f:
        tokens: list[TaggedToken] = []
        n_sent = 0
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                if tokens:
                    n_sent += 1
                    yield TaggedSentence(id=str(n_sent), tokens=tokens)
                    tokens = []
                continue
            cols = line.split("\t")
            if len(cols) != 4:
                raise FormatError(f"expected 4 columns, got {len(cols)}", path, lineno)
            surface, lemma, pos, feats_raw = cols
            if not surface or surface == "_":
                raise FormatError("empty surface", path, lineno)
            surface = unicodedata.normalize("NFC", surface)
            if lemma == "_" or not lemma:
                lemma = surface
            else:
                lemma = unicodedata.normalize("NFC", lemma)
            if pos == "_":
                pos = ""
            tokens.append(TaggedToken(surface, lemma, pos, _parse_feats(feats_raw, path, lineno)))
        if tokens:
            n_sent += 1
            yield TaggedSentence(id=str(n_sent), tokens=tokens)


def write_tagged_corpus(sentences, path) -> int:
    n = 0
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for sent in sentences:
                for t in sent.tokens:
                    feats = "|".join(f"{k}={v}" for k, v in sorted(t.feats.items())) or "_"
                    lemma = t.lemma if t.lemma != t.surface else "_"
                    f.write(f"{t.surface}\t{lemma or '_'}\t{t.pos or '_'}\t{feats}\n")
                f.write("\n")
                n += 1
    except OSError as e:
        raise IOFailure(f"cannot write {path}: {e}") from e
    return n


# ---------------------------------------------------------------------------
# sentence filter


@dataclass(frozen=True)
class FilterRules:
    """Quality gate for clean-corpus sentences."""

    allowed_charset: frozenset = ICELANDIC_LETTERS
    min_allowed_ratio: float = 0.9
    misspelling_blocklist: frozenset = frozenset()
    min_len: int = 1
    max_len: int = 128

    def __post_init__(self):
        if not 0.0 <= self.min_allowed_ratio <= 1.0:
            raise ConfigError(f"min_allowed_ratio must be in [0,1], got {self.min_allowed_ratio}")
        if self.min_len > self.max_len:
            raise ConfigError(f"min_len {self.min_len} exceeds max_len {self.max_len}")
        if self.min_len < 0:
            raise ConfigError(f"min_len must be >= 0, got {self.min_len}")


def _is_illegal(ch: str) -> bool:
    # Control, format, surrogate, private-use, unassigned — plus U+FFFD,
    # which decoders substitute for broken byte sequences.
    return unicodedata.category(ch)[0] == "C" or ch == "\ufffd"


def filter_sentence(text: str, rules: FilterRules, tokenizer: tok.Tokenizer | None = None) -> str | None:
    """Return None to keep the sentence, else the first rejection reason.

    Checks run in a fixed order (illegal_char, foreign_ratio,
    known_misspelling, length) so a sentence failing several gets a
    stable, order-independent reason.
    """
    alpha_total = 0
    alpha_allowed = 0
    for ch in text:
        if _is_illegal(ch):
            return "illegal_char"
        if ch.isalpha():
            alpha_total += 1
            if ch in rules.allowed_charset:
                alpha_allowed += 1
    if alpha_total > 0 and alpha_allowed / alpha_total < rules.min_allowed_ratio:
        return "foreign_ratio"
    tokens = (tokenizer or tok._default_tokenizer()).tokenize(text)
    if rules.misspelling_blocklist:
        for t in tokens:
            if t.kind == tok.WORD and t.surface.casefold() in rules.misspelling_blocklist:
                return "known_misspelling"
    if not rules.min_len <= len(tokens) <= rules.max_len:
        return "length"
    return None


# ---------------------------------------------------------------------------
# parallel corpus


def _escape_field(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _unescape_field(text: str, path: str, lineno: int) -> str:
    if "\\" not in text:
        return text
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(text):
            raise FormatError("dangling backslash", path, lineno)
        nxt = text[i + 1]
        if nxt == "\\":
            out.append("\\")
        elif nxt == "t":
            out.append("\t")
        elif nxt == "n":
            out.append("\n")
        else:
            raise FormatError(f"unknown escape \\{nxt}", path, lineno)
        i += 2
    return "".join(out)


def write_parallel(pairs, path) -> int:
    """One source<TAB>target line per pair; accepts ParallelPairs or tuples."""
    n = 0
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for pair in pairs:
                if isinstance(pair, ParallelPair):
                    source, target = pair.source, pair.target
                else:
                    source, target = pair
                f.write(_escape_field(source))
                f.write("\t")
                f.write(_escape_field(target))
                f.write("\n")
                n += 1
    except OSError as e:
        raise IOFailure(f"cannot write {path}: {e}") from e
    return n


def read_parallel(path):
    """Yield (source, target) pairs; inverse of write_parallel."""
    path = str(path)
    try:
        f = open(path, encoding="utf-8")
    except OSError as e:
        raise IOFailure(f"cannot open {path}: {e}") from e
    with f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise FormatError(f"expected source<TAB>target, got {len(cols)} fields", path, lineno)
            yield (
                _unescape_field(cols[0], path, lineno),
                _unescape_field(cols[1], path, lineno),
            )


# ---------------------------------------------------------------------------
# edit-log sidecar (JSONL)


def write_edit_logs(logs, path) -> int:
    n = 0
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for log in logs:
                json.dump(log.to_json_obj(), f, ensure_ascii=False, separators=(",", ":"))
                f.write("\n")
                n += 1
    except OSError as e:
        raise IOFailure(f"cannot write {path}: {e}") from e
    return n


def read_edit_logs(path):
    path = str(path)
    try:
        f = open(path, encoding="utf-8")
    except OSError as e:
        raise IOFailure(f"cannot open {path}: {e}") from e
    with f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise FormatError(f"bad JSON: {e.msg}", path, lineno) from e
            try:
                yield EditLog.from_json_obj(obj)
            except (KeyError, TypeError, ValueError) as e:
                raise FormatError(f"bad edit log: {e}", path, lineno) from e


# ---------------------------------------------------------------------------
# M2


@dataclass(slots=True)
class M2Entry:
    """One scored sentence: its source tokens and gold edit triples.

    Each edit is (start, end, replacement) over token indices; an
    insertion has start == end and a deletion has an empty replacement.
    """

    source_tokens: list[str]
    edits: list[tuple[int, int, str]] = field(default_factory=list)


def write_m2(entries, path) -> int:
    n = 0
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for entry in entries:
                f.write("S " + " ".join(entry.source_tokens) + "\n")
                for start, end, replacement in entry.edits:
                    f.write(f"A {start} {end}|||UNK|||{replacement}|||REQUIRED|||-NONE-|||0\n")
                f.write("\n")
                n += 1
    except OSError as e:
        raise IOFailure(f"cannot write {path}: {e}") from e
    return n


def read_m2(path):
    """Yield M2Entry values; tolerant of edit types other than UNK."""
    path = str(path)
    try:
        f = open(path, encoding="utf-8")
    except OSError as e:
        raise IOFailure(f"cannot open {path}: {e}") from e
    with f:
        entry: M2Entry | None = None
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line:
                if entry is not None:
                    yield entry
                    entry = None
                continue
            if line.startswith("S "):
                if entry is not None:
                    yield entry
                entry = M2Entry(source_tokens=line[2:].split(" "))
            elif line.startswith("A "):
                if entry is None:
                    raise FormatError("A line before any S line", path, lineno)
                fields = line[2:].split("|||")
                if len(fields) != 6:
                    raise FormatError(f"expected 6 |||-fields, got {len(fields)}", path, lineno)
                span = fields[0].split()
                if len(span) != 2:
                    raise FormatError(f"bad edit span {fields[0]!r}", path, lineno)
                try:
                    start, end = int(span[0]), int(span[1])
                except ValueError:
                    raise FormatError(f"non-integer edit span {fields[0]!r}", path, lineno) from None
                if not 0 <= start <= end <= len(entry.source_tokens):
                    raise FormatError(
                        f"edit span {start}..{end} outside sentence of {len(entry.source_tokens)} tokens",
                        path, lineno,
                    )
                entry.edits.append((start, end, fields[2]))
            else:
                raise FormatError(f"unexpected line {line[:30]!r}", path, lineno)
        if entry is not None:
            yield entry


# ---------------------------------------------------------------------------
# corpus splitting


def split_corpus(pairs: list, n_valid: int = 2000, n_test: int = 4000, seed: int = 0):
    """Deterministically partition into (train, valid, test).

    Validation and test indices are drawn without replacement from the
    seeded RNG; each split preserves original corpus order.
    """
    n = len(pairs)
    if n_valid < 0 or n_test < 0:
        raise ConfigError("split sizes must be non-negative")
    if n_valid + n_test > n:
        raise ExhaustedError(
            f"corpus has {n} pairs, cannot set aside {n_valid} + {n_test}"
        )
    rng = random.Random(seed)
    held_out = rng.sample(range(n), n_valid + n_test)
    valid_idx = sorted(held_out[:n_valid])
    test_idx = sorted(held_out[n_valid:])
    held_set = frozenset(held_out)
    train = [pairs[i] for i in range(n) if i not in held_set]
    valid = [pairs[i] for i in valid_idx]
    test = [pairs[i] for i in test_idx]
    return train, valid, test
