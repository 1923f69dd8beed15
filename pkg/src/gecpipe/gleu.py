"""GLEU scoring for correction hypotheses.

This is the GEC-specific GLEU (not Google's sentence BLEU): each n-gram
precision rewards hypothesis overlap with the reference and subtracts a
penalty for n-grams the hypothesis shares with the *source* but that the
reference rejected — text the system should have changed and did not.
Aggregation is BLEU-style micro-averaging: per-n counts and lengths are
summed over the corpus before precisions and the brevity penalty are
computed; a sentence-level mean is available as an alternative mode.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field

__all__ = [
    "GleuReport",
    "ngram_counts",
    "gleu_sentence",
    "gleu_corpus",
    "gleu_multiref",
    "EPSILON",
]

# Precision floor when a count is zero, so ln() stays finite. An n-gram
# order that is vacuous for the pair — neither hypothesis nor reference
# is long enough to contain any — contributes 1 instead: it carries no
# evidence, and a hypothesis equal to the reference must score 100
# regardless of sentence length.
EPSILON = 1e-9


def ngram_counts(tokens: list[str], n: int) -> Counter:
    """Multiset of contiguous n-grams."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


@dataclass
class GleuReport:
    score: float
    per_n_precision: list[float]
    brevity_penalty: float
    # per-n (matched, penalized, total-hypothesis-ngrams)
    counts: list[tuple[int, int, int]]
    hyp_len: int = 0
    ref_len: int = 0
    sentences: int = 1
    empty_hypothesis: bool = False

    def to_json_obj(self) -> dict:
        return {
            "score": self.score,
            "per_n_precision": self.per_n_precision,
            "brevity_penalty": self.brevity_penalty,
            "sentences": self.sentences,
        }


def _sentence_counts(source, reference, hypothesis, max_n: int) -> list[tuple[int, int, int]]:
    """(matched, penalized, total) for each n in 1..max_n."""
    out = []
    for n in range(1, max_n + 1):
        h = ngram_counts(hypothesis, n)
        r = ngram_counts(reference, n)
        s = ngram_counts(source, n)
        matched = sum(min(count, r[g]) for g, count in h.items())
        penalized = sum(
            max(0, min(count, s[g]) - r[g]) for g, count in h.items()
        )
        total = max(0, len(hypothesis) - n + 1)
        out.append((matched, penalized, total))
    return out


def _finish(counts, ref_totals, hyp_len, ref_len, sentences, max_n) -> GleuReport:
    precisions = []
    for (matched, penalized, total), ref_total in zip(counts, ref_totals):
        numerator = max(0, matched - penalized)
        if total == 0 and ref_total == 0:
            precisions.append(1.0)  # vacuous order, see EPSILON note
        elif total == 0 or numerator == 0:
            precisions.append(EPSILON)
        else:
            precisions.append(numerator / total)
    if hyp_len == 0:
        return GleuReport(
            score=0.0,
            per_n_precision=precisions,
            brevity_penalty=0.0,
            counts=counts,
            hyp_len=0,
            ref_len=ref_len,
            sentences=sentences,
            empty_hypothesis=True,
        )
    bp = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    log_mean = sum(math.log(p) for p in precisions) / max_n
    return GleuReport(
        score=100.0 * bp * math.exp(log_mean),
        per_n_precision=precisions,
        brevity_penalty=bp,
        counts=counts,
        hyp_len=hyp_len,
        ref_len=ref_len,
        sentences=sentences,
    )


def _ref_totals(ref_len: int, max_n: int) -> list[int]:
    return [max(0, ref_len - n + 1) for n in range(1, max_n + 1)]


def gleu_sentence(source, reference, hypothesis, max_n: int = 4) -> GleuReport:
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    if not reference:
        raise ValueError("reference must be non-empty")
    counts = _sentence_counts(source, reference, hypothesis, max_n)
    return _finish(counts, _ref_totals(len(reference), max_n),
                   len(hypothesis), len(reference), 1, max_n)


def gleu_corpus(triples, max_n: int = 4, sentence_average: bool = False) -> GleuReport:
    """Score a stream of (source, reference, hypothesis) token lists.

    Micro-average by default; sentence_average=True reports the
    unweighted mean of per-sentence scores instead.
    """
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    if sentence_average:
        reports = [gleu_sentence(s, r, h, max_n) for s, r, h in triples]
        if not reports:
            raise ValueError("empty corpus")
        mean = sum(rep.score for rep in reports) / len(reports)
        return GleuReport(
            score=mean,
            per_n_precision=[],
            brevity_penalty=float("nan"),
            counts=[],
            hyp_len=sum(r.hyp_len for r in reports),
            ref_len=sum(r.ref_len for r in reports),
            sentences=len(reports),
        )
    totals = [(0, 0, 0)] * max_n
    ref_totals = [0] * max_n
    hyp_len = ref_len = sentences = 0
    for source, reference, hypothesis in triples:
        if not reference:
            raise ValueError(f"sentence {sentences + 1}: reference must be non-empty")
        counts = _sentence_counts(source, reference, hypothesis, max_n)
        totals = [
            (tm + m, tp + p, tt + t)
            for (tm, tp, tt), (m, p, t) in zip(totals, counts)
        ]
        ref_totals = [a + b for a, b in zip(ref_totals, _ref_totals(len(reference), max_n))]
        hyp_len += len(hypothesis)
        ref_len += len(reference)
        sentences += 1
    if sentences == 0:
        raise ValueError("empty corpus")
    return _finish(totals, ref_totals, hyp_len, ref_len, sentences, max_n)


def gleu_multiref(entries, max_n: int = 4, iterations: int = 500, seed: int = 0) -> float:
    """Mean corpus GLEU over seeded samplings of one reference per
    sentence; entries are (source, [reference, ...], hypothesis)."""
    entries = list(entries)
    if not entries:
        raise ValueError("empty corpus")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    for source, refs, hypothesis in entries:
        if not refs:
            raise ValueError("every sentence needs at least one reference")
    if all(len(set(map(tuple, refs))) == 1 for _, refs, _ in entries):
        triples = [(s, refs[0], h) for s, refs, h in entries]
        return gleu_corpus(triples, max_n).score
    rng = random.Random(seed)
    total = 0.0
    for _ in range(iterations):
        triples = [(s, refs[rng.randrange(len(refs))], h) for s, refs, h in entries]
        total += gleu_corpus(triples, max_n).score
    return total / iterations
