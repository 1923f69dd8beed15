"""Span-based edit extraction and F0.5 scoring, with M2 interop.

Edits are extracted from a minimum-cost token alignment (match 0,
substitution 1 — discounted to 0.5 when the tokens differ only by case —
insertion 1, deletion 1, adjacent transposition 1). Runs of consecutive
non-match operations merge into maximal spans. Equal-cost alignments are
disambiguated deterministically: walking back from the end of both
sequences, the first divergence is resolved by operation preference
substitution > transposition > deletion > insertion > match, which
pushes edits toward the right of the sentence (latest start) when they
border repeated tokens.

Scoring is span-exact: a hypothesis edit counts as a true positive only
when the gold set contains the identical (start, end, replacement)
triple. No partial credit, no error types.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .corpus_io import M2Entry

__all__ = [
    "EditSpan",
    "SpanScore",
    "extract_edits",
    "apply_edit_spans",
    "score_spans",
    "score_corpus_spans",
    "to_m2",
    "from_m2_entry",
    "pair_to_m2_entry",
]

# Backtrace preference on cost ties, best first.
_SUB, _TRA, _DEL, _INS, _MATCH = 0, 1, 2, 3, 4


@dataclass(frozen=True, slots=True)
class EditSpan:
    """Replace source[start:end] with the replacement tokens; start ==
    end is an insertion point, an empty replacement is a deletion."""

    start: int
    end: int
    replacement: tuple[str, ...] = ()

    def key(self) -> tuple:
        return (self.start, self.end, self.replacement)


@dataclass(frozen=True, slots=True)
class SpanScore:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f05: float

    def to_json_obj(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": self.precision,
            "recall": self.recall,
            "f05": self.f05,
        }


def _nfc_tokens(tokens) -> list[str]:
    return [unicodedata.normalize("NFC", t) for t in tokens]


def extract_edits(source, corrected) -> list[EditSpan]:
    """Minimum-cost edit spans turning `source` into `corrected`."""
    src = _nfc_tokens(source)
    cor = _nfc_tokens(corrected)
    n, m = len(src), len(cor)
    if src == cor:
        return []

    # dp[i][j] = min cost aligning src[:i] with cor[:j]
    dp = [[0.0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dp[i][0] = float(i)
    for j in range(1, m + 1):
        dp[0][j] = float(j)
    for i in range(1, n + 1):
        s_tok = src[i - 1]
        row = dp[i]
        prev = dp[i - 1]
        for j in range(1, m + 1):
            c_tok = cor[j - 1]
            if s_tok == c_tok:
                best = prev[j - 1]
            else:
                sub = 0.5 if s_tok.casefold() == c_tok.casefold() else 1.0
                best = prev[j - 1] + sub
            up = prev[j] + 1.0
            if up < best:
                best = up
            left = row[j - 1] + 1.0
            if left < best:
                best = left
            if (
                i >= 2
                and j >= 2
                and s_tok != c_tok
                and src[i - 2] == c_tok
                and s_tok == cor[j - 2]
                and dp[i - 2][j - 2] + 1.0 < best
            ):
                best = dp[i - 2][j - 2] + 1.0
            row[j] = best

    # Backtrace, resolving ties by fixed op preference. Each step
    # records (op, src_consumed, cor_consumed).
    ops: list[tuple[int, int, int]] = []  # built end-to-start
    i, j = n, m
    while i > 0 or j > 0:
        here = dp[i][j]
        if i > 0 and j > 0:
            s_tok, c_tok = src[i - 1], cor[j - 1]
            sub = 0.5 if s_tok.casefold() == c_tok.casefold() else 1.0
            if s_tok != c_tok and dp[i - 1][j - 1] + sub == here:
                ops.append((_SUB, 1, 1))
                i -= 1
                j -= 1
                continue
            if (
                i >= 2
                and j >= 2
                and s_tok != c_tok
                and src[i - 2] == c_tok
                and s_tok == cor[j - 2]
                and dp[i - 2][j - 2] + 1.0 == here
            ):
                ops.append((_TRA, 2, 2))
                i -= 2
                j -= 2
                continue
        if i > 0 and dp[i - 1][j] + 1.0 == here:
            ops.append((_DEL, 1, 0))
            i -= 1
            continue
        if j > 0 and dp[i][j - 1] + 1.0 == here:
            ops.append((_INS, 0, 1))
            j -= 1
            continue
        ops.append((_MATCH, 1, 1))
        i -= 1
        j -= 1
    ops.reverse()

    # Merge maximal runs of non-match ops into spans.
    spans: list[EditSpan] = []
    si = sj = 0
    run_start = None
    run_cor_start = 0
    for op, ds, dc in ops:
        if op == _MATCH:
            if run_start is not None:
                spans.append(EditSpan(run_start, si, tuple(cor[run_cor_start:sj])))
                run_start = None
        else:
            if run_start is None:
                run_start = si
                run_cor_start = sj
        si += ds
        sj += dc
    if run_start is not None:
        spans.append(EditSpan(run_start, si, tuple(cor[run_cor_start:sj])))
    return spans


def apply_edit_spans(source, spans: list[EditSpan]) -> list[str]:
    """Apply non-overlapping spans to the source token list."""
    _check_span_list(spans, "edits")
    out = list(source)
    for span in sorted(spans, key=lambda e: (e.start, e.end), reverse=True):
        out[span.start:span.end] = list(span.replacement)
    return out


def _check_span_list(spans, label: str) -> None:
    ordered = sorted(spans, key=lambda e: (e.start, e.end))
    prev = None
    for span in ordered:
        if span.start > span.end or span.start < 0:
            raise ValueError(f"{label}: bad span ({span.start}, {span.end})")
        if prev is not None:
            if span.start < prev.end:
                raise ValueError(
                    f"{label}: overlapping spans ({prev.start},{prev.end}) and ({span.start},{span.end})"
                )
            if (span.start, span.end) == (prev.start, prev.end) and span.start == span.end:
                raise ValueError(f"{label}: duplicate insertion point at {span.start}")
        prev = span


def score_spans(gold, hyp) -> SpanScore:
    """Span-exact precision/recall/F0.5 of hypothesis edits vs gold."""
    gold = [e if isinstance(e, EditSpan) else EditSpan(e[0], e[1], tuple(e[2])) for e in gold]
    hyp = [e if isinstance(e, EditSpan) else EditSpan(e[0], e[1], tuple(e[2])) for e in hyp]
    _check_span_list(gold, "gold")
    _check_span_list(hyp, "hypothesis")
    gold_keys = {e.key() for e in gold}
    tp = sum(1 for e in hyp if e.key() in gold_keys)
    return _score_from_counts(tp, len(hyp) - tp, len(gold) - tp)


def _score_from_counts(tp: int, fp: int, fn: int) -> SpanScore:
    if tp + fp == 0:
        precision = 1.0 if fn == 0 else 0.0
    else:
        precision = tp / (tp + fp)
    if tp + fn == 0:
        recall = 1.0 if fp == 0 else 0.0
    else:
        recall = tp / (tp + fn)
    if precision == 0.0 and recall == 0.0:
        f05 = 0.0
    else:
        f05 = 1.25 * precision * recall / (0.25 * precision + recall)
    return SpanScore(tp=tp, fp=fp, fn=fn, precision=precision, recall=recall, f05=f05)


def score_corpus_spans(entries) -> SpanScore:
    """Micro-averaged score over (source_tokens, gold_spans, hyp_tokens)
    entries; hypothesis edits are extracted per entry."""
    tp = fp = fn = 0
    for source, gold, hyp_tokens in entries:
        gold = [e if isinstance(e, EditSpan) else EditSpan(e[0], e[1], tuple(e[2])) for e in gold]
        hyp = extract_edits(source, hyp_tokens)
        gold_keys = {e.key() for e in gold}
        matched = sum(1 for e in hyp if e.key() in gold_keys)
        tp += matched
        fp += len(hyp) - matched
        fn += len(gold) - matched
    return _score_from_counts(tp, fp, fn)


# ---------------------------------------------------------------------------
# M2 bridging


def to_m2(source_tokens, spans: list[EditSpan]) -> M2Entry:
    _check_span_list(spans, "edits")
    return M2Entry(
        source_tokens=list(source_tokens),
        edits=[(e.start, e.end, " ".join(e.replacement)) for e in spans],
    )


def from_m2_entry(entry: M2Entry) -> tuple[list[str], list[EditSpan]]:
    spans = [
        EditSpan(start, end, tuple(replacement.split(" ")) if replacement else ())
        for start, end, replacement in entry.edits
    ]
    return entry.source_tokens, spans


def pair_to_m2_entry(source_tokens, target_tokens) -> M2Entry:
    """Gold M2 entry for a (noised source, clean target) token pair."""
    return to_m2(source_tokens, extract_edits(source_tokens, target_tokens))
