"""The corruption engine: 14 noise operations over tagged sentences.

Operations run in a fixed order — grammar-level first (case swaps, mood,
dative-subject substitution, compound splitting, known misspellings),
then word-level (space/comma deletion, swaps, duplication), then
character-level (duplication, drops, rule swaps, accent toggles, random
replacement) — so character noise can land on top of everything else.

Each op draws from its own RNG stream derived from (seed, op_id,
sentence id), which makes output independent of worker count and shard
order, and means disabling one op never perturbs another. Grammar ops
fire wherever they find an applicable site; the naive ops are gated per
sentence by `naive_op_probability`. Every change is recorded as an
invertible character-level edit.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Callable

from . import tokenizer as tok
from .config import ALL_OPS, NAIVE_OPS, RULE_OPS, LexiconPaths, NoiseConfig, OpConfig
from .corpus_io import ParallelPair, TaggedSentence
from .edits import EditLog, EditRecord, invert_edits
from .errors import ConfigError, ExhaustedError
from .morpho import (
    CharRuleTable,
    InflectionLexicon,
    MisspellingLexicon,
    ObliqueVerbLexicon,
    match_capitalization,
    valid_compound_splits,
)

__all__ = [
    "Lexicons",
    "WorkSentence",
    "NoiseEngine",
    "NoiseStats",
    "OpStats",
    "SplitMixRandom",
    "compose_noise",
    "generate_typed_testset",
    "gate_value",
    "invert",
    "rng_for",
    "stream_base",
    "TYPED_SETS",
    "NOUN_TAGS",
    "NOMINAL_TAGS",
    "VERB_TAGS",
]

NOUN_TAGS = frozenset({"no"})
NOMINAL_TAGS = frozenset({"no", "fn", "pfn"})
VERB_TAGS = frozenset({"so"})

# Test-set name -> the single op its sentences must exhibit.
TYPED_SETS = {
    "dativitis": "dativitis",
    "spaces": "delete_space",
    "commas": "delete_commas",
    "dupl-words": "duplicate_word",
    "mood": "mood",
    "rand-noise": "random_char",
    "noun-case": "noun_case",
}


def _bundled(name: str) -> str:
    return str(resources.files("gecpipe.data").joinpath(name))


@dataclass
class Lexicons:
    """All lexical resources the ops consult, loaded once per run."""

    inflection: InflectionLexicon = field(default_factory=InflectionLexicon)
    misspellings: MisspellingLexicon = field(default_factory=MisspellingLexicon)
    oblique_verbs: ObliqueVerbLexicon = field(default_factory=ObliqueVerbLexicon)
    char_rules: CharRuleTable = field(default_factory=CharRuleTable)
    accents: CharRuleTable = field(default_factory=CharRuleTable)
    tokenizer: tok.Tokenizer = field(default_factory=tok.Tokenizer)

    @classmethod
    def load(cls, paths: LexiconPaths) -> "Lexicons":
        return cls(
            inflection=(
                InflectionLexicon.load(paths.inflection) if paths.inflection else InflectionLexicon()
            ),
            misspellings=(
                MisspellingLexicon.load(paths.misspellings) if paths.misspellings else MisspellingLexicon()
            ),
            oblique_verbs=(
                ObliqueVerbLexicon.load(paths.oblique_verbs) if paths.oblique_verbs else ObliqueVerbLexicon()
            ),
            char_rules=CharRuleTable.load(paths.char_rules or _bundled("char_rules.tsv")),
            accents=CharRuleTable.load(paths.accents or _bundled("accents.tsv")),
            tokenizer=(
                tok.Tokenizer.from_abbrev_file(paths.abbreviations) if paths.abbreviations else tok.Tokenizer()
            ),
        )


_KIND_CACHE: dict[str, str] = {}


def _classify(surface: str) -> str:
    kind = _KIND_CACHE.get(surface)
    if kind is None:
        if surface.isalpha():
            kind = tok.WORD
        elif len(surface) == 1:
            kind = tok.PUNCT if surface in tok.PUNCT_CHARS else tok.SYMBOL
        elif surface[0].isdigit() and all(c.isdigit() or c in ".," for c in surface):
            kind = tok.NUMBER
        elif all(c.isalpha() or c == "-" for c in surface):
            kind = tok.WORD
        else:
            kind = tok.SYMBOL
        if len(_KIND_CACHE) >= 1 << 17:
            _KIND_CACHE.clear()
        _KIND_CACHE[surface] = kind
    return kind


def _feats_key(feats: dict, key: str, value: str) -> frozenset:
    """Lexicon lookup key for the token's features with one overridden."""
    return frozenset((k, v) for k, v in feats.items() if k != key) | {(key, value)}


class WorkSentence:
    """Mutable sentence state while ops run: parallel token arrays plus
    the whitespace gaps around them. Every mutator returns the
    EditRecord describing its change against the current text."""

    __slots__ = ("surfaces", "gaps", "lemmas", "pos", "feats", "kinds")

    def __init__(self, surfaces, gaps, lemmas, pos, feats, kinds):
        self.surfaces: list[str] = surfaces
        self.gaps: list[str] = gaps
        self.lemmas: list[str] = lemmas
        self.pos: list[str] = pos
        self.feats: list[dict] = feats
        self.kinds: list[str] = kinds

    @classmethod
    def from_tagged(cls, sent: TaggedSentence, tokenizer: tok.Tokenizer) -> "WorkSentence":
        surfaces = [t.surface for t in sent.tokens]
        gaps = None
        if sent.raw_text is not None:
            raw_tokens = tokenizer.tokenize(sent.raw_text)
            if [t.surface for t in raw_tokens] == surfaces:
                gaps = tok.gaps(sent.raw_text, raw_tokens)
        if gaps is None:
            gaps = tok.default_spacing(surfaces)
        return cls(
            surfaces=surfaces,
            gaps=gaps,
            lemmas=[t.lemma for t in sent.tokens],
            pos=[t.pos for t in sent.tokens],
            feats=[t.feats for t in sent.tokens],
            kinds=[_classify(t.surface) for t in sent.tokens],
        )

    def __len__(self) -> int:
        return len(self.surfaces)

    def text(self) -> str:
        return tok.detokenize(self.surfaces, self.gaps)

    def token_start(self, i: int) -> int:
        return sum(map(len, self.gaps[: i + 1])) + sum(map(len, self.surfaces[:i]))

    # --- mutators -----------------------------------------------------

    def set_surface(self, i: int, new: str, op_id: str) -> EditRecord:
        rec = EditRecord(op_id, self.token_start(i), self.surfaces[i], new)
        self.surfaces[i] = new
        return rec

    def replace_in_token(self, i: int, j: int, before: str, after: str, op_id: str) -> EditRecord:
        surface = self.surfaces[i]
        assert surface[j:j + len(before)] == before
        rec = EditRecord(op_id, self.token_start(i) + j, before, after)
        self.surfaces[i] = surface[:j] + after + surface[j + len(before):]
        return rec

    def delete_gap(self, g: int, op_id: str) -> EditRecord:
        """Remove the gap before token g, merging tokens g-1 and g."""
        pos = self.token_start(g) - len(self.gaps[g])
        rec = EditRecord(op_id, pos, self.gaps[g], "")
        merged = self.surfaces[g - 1] + self.surfaces[g]
        self.surfaces[g - 1] = merged
        self.lemmas[g - 1] = merged
        self.feats[g - 1] = {}
        self.kinds[g - 1] = tok.WORD
        for arr in (self.surfaces, self.lemmas, self.pos, self.feats, self.kinds):
            del arr[g]
        del self.gaps[g]
        return rec

    def remove_token(self, i: int, op_id: str) -> EditRecord:
        rec = EditRecord(op_id, self.token_start(i), self.surfaces[i], "")
        merged_gap = self.gaps[i] + self.gaps[i + 1]
        for arr in (self.surfaces, self.lemmas, self.pos, self.feats, self.kinds):
            del arr[i]
        self.gaps[i:i + 2] = [merged_gap]
        return rec

    def insert_after(self, i: int, surface: str, op_id: str, sep: str = " ") -> EditRecord:
        pos = self.token_start(i) + len(self.surfaces[i])
        rec = EditRecord(op_id, pos, "", sep + surface)
        self.surfaces.insert(i + 1, surface)
        self.lemmas.insert(i + 1, self.lemmas[i])
        self.pos.insert(i + 1, self.pos[i])
        self.feats.insert(i + 1, self.feats[i])
        self.kinds.insert(i + 1, self.kinds[i])
        self.gaps.insert(i + 1, sep)
        return rec

    def swap_adjacent(self, i: int, op_id: str) -> EditRecord:
        gap = self.gaps[i + 1]
        before = self.surfaces[i] + gap + self.surfaces[i + 1]
        after = self.surfaces[i + 1] + gap + self.surfaces[i]
        rec = EditRecord(op_id, self.token_start(i), before, after)
        for arr in (self.surfaces, self.lemmas, self.pos, self.feats, self.kinds):
            arr[i], arr[i + 1] = arr[i + 1], arr[i]
        return rec

    def split_token(self, i: int, left: str, right: str, op_id: str) -> EditRecord:
        rec = EditRecord(op_id, self.token_start(i), self.surfaces[i], left + " " + right)
        self.surfaces[i:i + 1] = [left, right]
        self.lemmas[i:i + 1] = [left, right]
        self.pos[i:i + 1] = [self.pos[i], self.pos[i]]
        self.feats[i:i + 1] = [{}, {}]
        self.kinds[i:i + 1] = [tok.WORD, tok.WORD]
        self.gaps.insert(i + 1, " ")
        return rec


# ---------------------------------------------------------------------------
# individual operations
#
# Each op is (find_sites, apply). find_sites uses no randomness; apply
# consumes the op's RNG stream and is only called when sites is truthy,
# so a gated-on op with a site always produces at least one record.


def _sites_noun_case(work: WorkSentence, conf: OpConfig, lex: Lexicons):
    sites = []
    for i, pos in enumerate(work.pos):
        if pos not in NOUN_TAGS or work.kinds[i] != tok.WORD:
            continue
        feats = work.feats[i]
        current_case = feats.get("case")
        if current_case is None:
            continue
        options = []
        for case in ("nom", "acc", "dat", "gen"):
            if case == current_case:
                continue
            for form in lex.inflection.inflect(work.lemmas[i], pos, _feats_key(feats, "case", case)):
                shaped = match_capitalization(work.surfaces[i], form)
                if shaped != work.surfaces[i]:
                    options.append((case, shaped))
        if options:
            sites.append((i, options))
    return sites


def _apply_noun_case(work, conf, rng, sites, op_id="noun_case"):
    i, options = sites[rng.randrange(len(sites))]
    case, form = options[rng.randrange(len(options))]
    rec = work.set_surface(i, form, op_id)
    work.feats[i] = {**work.feats[i], "case": case}
    return [rec]


def _sites_mood(work: WorkSentence, conf: OpConfig, lex: Lexicons):
    src, dst = ("ind", "subj") if conf.direction == "ind2subj" else ("subj", "ind")
    sites = []
    for i, pos in enumerate(work.pos):
        if pos not in VERB_TAGS or work.kinds[i] != tok.WORD:
            continue
        feats = work.feats[i]
        if feats.get("mood") != src:
            continue
        options = []
        for form in lex.inflection.inflect(work.lemmas[i], pos, _feats_key(feats, "mood", dst)):
            shaped = match_capitalization(work.surfaces[i], form)
            if shaped != work.surfaces[i]:
                options.append(shaped)
        if options:
            sites.append((i, dst, options))
    return sites


def _apply_mood(work, conf, rng, sites, op_id="mood"):
    i, dst, options = sites[rng.randrange(len(sites))]
    form = options[rng.randrange(len(options))]
    rec = work.set_surface(i, form, op_id)
    work.feats[i] = {**work.feats[i], "mood": dst}
    return [rec]


def _dat_form(work: WorkSentence, lex: Lexicons, i: int) -> str | None:
    forms = lex.inflection.inflect(work.lemmas[i], work.pos[i], _feats_key(work.feats[i], "case", "dat"))
    if not forms:
        return None
    shaped = match_capitalization(work.surfaces[i], forms[0])
    return shaped if shaped != work.surfaces[i] else None


def _sites_dativitis(work: WorkSentence, conf: OpConfig, lex: Lexicons):
    if len(lex.oblique_verbs) == 0:
        return []
    sites = []
    for v, pos in enumerate(work.pos):
        if pos not in VERB_TAGS:
            continue
        verb = lex.oblique_verbs.get(work.lemmas[v])
        if verb is None:
            continue
        # nearest preceding nominal in the verb's standard subject case
        for s in range(v - 1, -1, -1):
            if work.pos[s] not in NOMINAL_TAGS:
                continue
            if work.feats[s].get("case") != verb.standard_case:
                break
            dat = _dat_form(work, lex, s)
            if dat is not None:
                sites.append((s, v, dat, verb.third_sg))
            break
    return sites


def _apply_dativitis(work, conf, rng, sites, op_id="dativitis", lex: Lexicons = None):
    s, v, dat, third_sg = sites[rng.randrange(len(sites))]
    records = []
    if conf.np_wide:
        # Re-inflect contiguous same-case modifiers in front of the
        # subject too. Records must stay in mutation order: each pos is an
        # offset into the text as it stood when that edit landed.
        j = s - 1
        head_case = work.feats[s].get("case")
        while j >= 0 and work.pos[j] in ("lo", "gr", "fn"):
            if work.feats[j].get("case") != head_case:
                break
            mod_dat = _dat_form(work, lex, j)
            if mod_dat is not None:
                records.append(work.set_surface(j, mod_dat, op_id))
                work.feats[j] = {**work.feats[j], "case": "dat"}
            j -= 1
    records.append(work.set_surface(s, dat, op_id))
    work.feats[s] = {**work.feats[s], "case": "dat"}
    if third_sg and third_sg != work.surfaces[v]:
        records.append(work.set_surface(v, match_capitalization(work.surfaces[v], third_sg), op_id))
    return records


def _sites_split_compound(work: WorkSentence, conf: OpConfig, lex: Lexicons):
    if len(lex.inflection) == 0:
        return []
    sites = []
    for i, surface in enumerate(work.surfaces):
        if work.kinds[i] != tok.WORD or len(surface) < 2 * conf.min_part_len:
            continue
        splits = valid_compound_splits(surface, lex.inflection, conf.min_part_len)
        if splits:
            sites.append((i, splits))
    return sites


def _apply_split_compound(work, conf, rng, sites, op_id="split_compound"):
    i, splits = sites[rng.randrange(len(sites))]
    left, right = splits[rng.randrange(len(splits))]
    return [work.split_token(i, left, right, op_id)]


def _sites_misspelling(work: WorkSentence, conf: OpConfig, lex: Lexicons):
    if len(lex.misspellings) == 0:
        return []
    sites = []
    for i, surface in enumerate(work.surfaces):
        if work.kinds[i] != tok.WORD:
            continue
        variants = lex.misspellings.misspellings_of(surface)
        if variants:
            sites.append((i, variants))
    return sites


def _apply_misspelling(work, conf, rng, sites, op_id="misspelling"):
    i, variants = sites[rng.randrange(len(sites))]
    variant = variants[rng.randrange(len(variants))]
    return [work.set_surface(i, variant, op_id)]


def _sites_delete_space(work: WorkSentence, conf: OpConfig, lex: Lexicons):
    return [
        g
        for g in range(1, len(work))
        if work.gaps[g]
        and work.gaps[g].isspace()
        and work.kinds[g - 1] == tok.WORD
        and work.kinds[g] == tok.WORD
    ]


def _apply_delete_space(work, conf, rng, sites, op_id="delete_space"):
    records = []
    for _ in range(min(conf.words, len(sites))):
        g = sites[rng.randrange(len(sites))]
        records.append(work.delete_gap(g, op_id))
        sites = _sites_delete_space(work, conf, None)
        if not sites:
            break
    return records


def _sites_delete_commas(work: WorkSentence, conf: OpConfig, lex: Lexicons):
    return [i for i, s in enumerate(work.surfaces) if s == ","]


def _apply_delete_commas(work, conf, rng, sites, op_id="delete_commas"):
    chosen = [i for i in sites if conf.site_probability >= 1.0 or rng.random() < conf.site_probability]
    records = []
    for n_done, i in enumerate(chosen):
        records.append(work.remove_token(i - n_done, op_id))
    return records


def _sites_swap_words(work: WorkSentence, conf: OpConfig, lex: Lexicons):
    return [
        i
        for i in range(len(work) - 1)
        if work.kinds[i] == tok.WORD
        and work.kinds[i + 1] == tok.WORD
        and work.surfaces[i] != work.surfaces[i + 1]
    ]


def _apply_swap_words(work, conf, rng, sites, op_id="swap_words"):
    return [work.swap_adjacent(sites[rng.randrange(len(sites))], op_id)]


def _sites_words(work: WorkSentence, conf: OpConfig, lex: Lexicons):
    return [i for i, k in enumerate(work.kinds) if k == tok.WORD]


def _apply_duplicate_word(work, conf, rng, sites, op_id="duplicate_word"):
    i = sites[rng.randrange(len(sites))]
    return [work.insert_after(i, work.surfaces[i], op_id)]


def _pick_words(rng, sites, count: int) -> list[int]:
    if count >= len(sites):
        return list(sites)
    return sorted(rng.sample(sites, count))


def _apply_duplicate_char(work, conf, rng, sites, op_id="duplicate_char"):
    records = []
    for i in _pick_words(rng, sites, conf.words):
        for _ in range(conf.intensity):
            j = rng.randrange(len(work.surfaces[i]))
            c = work.surfaces[i][j]
            records.append(work.replace_in_token(i, j, c, c + c, op_id))
    return records


def _sites_drop_char(work: WorkSentence, conf: OpConfig, lex: Lexicons):
    return [i for i, k in enumerate(work.kinds) if k == tok.WORD and len(work.surfaces[i]) >= 2]


def _apply_drop_char(work, conf, rng, sites, op_id="drop_char"):
    records = []
    for i in _pick_words(rng, sites, conf.words):
        for _ in range(conf.intensity):
            if len(work.surfaces[i]) < 2:
                break
            j = rng.randrange(len(work.surfaces[i]))
            c = work.surfaces[i][j]
            records.append(work.replace_in_token(i, j, c, "", op_id))
    return records


def _sites_char_table(work: WorkSentence, table: CharRuleTable) -> list[int]:
    return [
        i
        for i, surface in enumerate(work.surfaces)
        if work.kinds[i] == tok.WORD and table.has_match(surface)
    ]


def _sites_char_swap(work, conf, lex):
    return _sites_char_table(work, lex.char_rules)


def _apply_char_swap(work, conf, rng, sites, op_id="char_swap", lex: Lexicons = None):
    i = sites[rng.randrange(len(sites))]
    occs = lex.char_rules.occurrences(work.surfaces[i])
    j, pattern, replacement = occs[rng.randrange(len(occs))]
    return [work.replace_in_token(i, j, pattern, replacement, op_id)]


def _sites_accent(work, conf, lex):
    return _sites_char_table(work, lex.accents)


def _apply_accent(work, conf, rng, sites, op_id="accent", lex: Lexicons = None):
    i = sites[rng.randrange(len(sites))]
    records = []
    for _ in range(conf.intensity):
        occs = lex.accents.occurrences(work.surfaces[i])
        if not occs:
            break
        j, pattern, replacement = occs[rng.randrange(len(occs))]
        records.append(work.replace_in_token(i, j, pattern, replacement, op_id))
    return records


def _sites_random_char(work: WorkSentence, conf: OpConfig, lex: Lexicons):
    alphabet = conf.alphabet
    multi = len(set(alphabet)) > 1
    sites = []
    for i, k in enumerate(work.kinds):
        if k != tok.WORD:
            continue
        if multi or any(c != alphabet[0] for c in work.surfaces[i]):
            sites.append(i)
    return sites


def _apply_random_char(work, conf, rng, sites, op_id="random_char"):
    records = []
    for i in _pick_words(rng, sites, conf.words):
        for _ in range(conf.intensity):
            surface = work.surfaces[i]
            positions = [j for j in range(len(surface)) if any(a != surface[j] for a in conf.alphabet)]
            if not positions:
                break
            j = positions[rng.randrange(len(positions))]
            choices = [a for a in conf.alphabet if a != surface[j]]
            records.append(work.replace_in_token(i, j, surface[j], choices[rng.randrange(len(choices))], op_id))
    return records


_FIND: dict[str, Callable] = {
    "noun_case": _sites_noun_case,
    "mood": _sites_mood,
    "dativitis": _sites_dativitis,
    "split_compound": _sites_split_compound,
    "misspelling": _sites_misspelling,
    "delete_space": _sites_delete_space,
    "delete_commas": _sites_delete_commas,
    "swap_words": _sites_swap_words,
    "duplicate_word": _sites_words,
    "duplicate_char": _sites_words,
    "drop_char": _sites_drop_char,
    "char_swap": _sites_char_swap,
    "accent": _sites_accent,
    "random_char": _sites_random_char,
}

_APPLY: dict[str, Callable] = {
    "noun_case": _apply_noun_case,
    "mood": _apply_mood,
    "dativitis": _apply_dativitis,
    "split_compound": _apply_split_compound,
    "misspelling": _apply_misspelling,
    "delete_space": _apply_delete_space,
    "delete_commas": _apply_delete_commas,
    "swap_words": _apply_swap_words,
    "duplicate_word": _apply_duplicate_word,
    "duplicate_char": _apply_duplicate_char,
    "drop_char": _apply_drop_char,
    "char_swap": _apply_char_swap,
    "accent": _apply_accent,
    "random_char": _apply_random_char,
}

_NEEDS_LEX_AT_APPLY = frozenset({"char_swap", "accent", "dativitis"})


_MASK64 = (1 << 64) - 1
_RNG_SALT = 0xD6E8FEB86659FD93


def _mix64(x: int) -> int:
    """splitmix64 finalizer: cheap bijective 64-bit avalanche."""
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK64
    return x ^ (x >> 31)


class SplitMixRandom:
    """Deterministic RNG over the splitmix64 stream, supporting just the
    draw shapes the ops use. Construction is two integer ops — every
    (op, sentence) pair gets a fresh stream, so the Mersenne Twister's
    state-initialisation cost in ``random.Random`` is the wrong trade."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def _next(self) -> int:
        self._state = s = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        s = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
        s = (s ^ (s >> 27)) * 0x94D049BB133111EB & _MASK64
        return s ^ (s >> 31)

    def random(self) -> float:
        return (self._next() >> 11) * 2.0 ** -53

    def randrange(self, n: int) -> int:
        """Uniform int in [0, n): top-bits rejection, so no modulo bias."""
        if n <= 0:
            raise ValueError(f"empty range for randrange({n})")
        shift = 64 - n.bit_length()
        r = self._next() >> shift
        while r >= n:
            r = self._next() >> shift
        return r

    def choice(self, seq):
        if not seq:
            raise IndexError("cannot choose from an empty sequence")
        return seq[self.randrange(len(seq))]

    def sample(self, population, k: int) -> list:
        """k distinct elements by partial Fisher-Yates; order is part of
        the deterministic contract."""
        pool = list(population)
        n = len(pool)
        if not 0 <= k <= n:
            raise ValueError(f"sample {k} from population of {n}")
        for i in range(k):
            j = i + self.randrange(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


def _op_salt(op_id: str) -> int:
    digest = hashlib.blake2b(op_id.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


_OP_SALTS = {op_id: _op_salt(op_id) for op_id in ALL_OPS}


def stream_base(seed: int, sentence_id: str) -> int:
    """Shared 64-bit root for all of one sentence's op streams."""
    digest = hashlib.blake2b(
        f"{seed}:{sentence_id}".encode("utf-8"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


def _stream_key(base: int, salt: int) -> int:
    return _mix64(base ^ salt)


def gate_value(seed: int, op_id: str, sentence_id: str) -> float:
    """The per-sentence uniform draw an op's probability gate compares
    against. A pure function of its arguments, so the gate outcome never
    depends on what other ops did."""
    key = _stream_key(stream_base(seed, sentence_id), _OP_SALTS[op_id])
    return (key >> 11) * 2.0 ** -53


def rng_for(seed: int, op_id: str, sentence_id: str) -> SplitMixRandom:
    """Independent, reproducible RNG stream per (seed, op, sentence)."""
    key = _stream_key(stream_base(seed, sentence_id), _OP_SALTS[op_id])
    return SplitMixRandom(_mix64(key ^ _RNG_SALT))


@dataclass
class OpStats:
    applicable: int = 0
    applied: int = 0
    edits: int = 0

    def merge(self, other: "OpStats") -> None:
        self.applicable += other.applicable
        self.applied += other.applied
        self.edits += other.edits


@dataclass
class NoiseStats:
    sentences: int = 0
    changed: int = 0
    per_op: dict = field(default_factory=dict)  # op_id -> OpStats

    def op(self, op_id: str) -> OpStats:
        if op_id not in self.per_op:
            self.per_op[op_id] = OpStats()
        return self.per_op[op_id]

    def merge(self, other: "NoiseStats") -> None:
        self.sentences += other.sentences
        self.changed += other.changed
        for op_id, stats in other.per_op.items():
            self.op(op_id).merge(stats)

    def to_json_obj(self) -> dict:
        return {
            "sentences": self.sentences,
            "changed": self.changed,
            "per_op": {
                op_id: vars(self.per_op[op_id]).copy()
                for op_id in ALL_OPS
                if op_id in self.per_op
            },
        }


class NoiseEngine:
    """Applies the configured ops to tagged sentences, tracking stats."""

    def __init__(self, config: NoiseConfig, lexicons: Lexicons | None = None):
        self.config = config
        self.lexicons = lexicons if lexicons is not None else Lexicons.load(config.lexicons)
        self.stats = NoiseStats()
        self._enabled = [op for op in ALL_OPS if config.op(op).enabled]
        # One flat row per enabled op so the per-sentence loop is free of
        # dict lookups: (op_id, conf, find, apply, pass_lexicons, gate_p, salt).
        self._plan = [
            (
                op_id,
                config.op(op_id),
                _FIND[op_id],
                _APPLY[op_id],
                op_id in _NEEDS_LEX_AT_APPLY,
                config.op_probability(op_id),
                _OP_SALTS[op_id],
            )
            for op_id in self._enabled
        ]

    def corrupt(self, sent: TaggedSentence) -> ParallelPair:
        work = WorkSentence.from_tagged(sent, self.lexicons.tokenizer)
        target = work.text()
        log = EditLog(sent.id)
        stats = self.stats
        stats.sentences += 1
        base = stream_base(self.config.seed, sent.id)
        for op_id, conf, find, apply_op, pass_lex, gate_p, salt in self._plan:
            sites = find(work, conf, self.lexicons)
            if not sites:
                continue
            op_stats = stats.op(op_id)
            op_stats.applicable += 1
            key = _stream_key(base, salt)
            if gate_p < 1.0 and (key >> 11) * 2.0 ** -53 >= gate_p:
                continue
            rng = SplitMixRandom(_mix64(key ^ _RNG_SALT))
            if pass_lex:
                records = apply_op(work, conf, rng, sites, lex=self.lexicons)
            else:
                records = apply_op(work, conf, rng, sites)
            if records:
                op_stats.applied += 1
                op_stats.edits += len(records)
                log.records.extend(records)
        if log.records:
            stats.changed += 1
        return ParallelPair(source=work.text(), target=target, edits=log)


def compose_noise(sent: TaggedSentence, config: NoiseConfig, lexicons: Lexicons | None = None) -> ParallelPair:
    return NoiseEngine(config, lexicons).corrupt(sent)


def invert(pair: ParallelPair) -> str:
    """Recover the clean text from a pair's source via its edit log."""
    if pair.edits is None:
        raise ConfigError("pair has no edit log to invert")
    return invert_edits(pair.source, pair.edits.records)


def generate_typed_testset(
    corpus,
    op_id: str,
    n: int,
    config: NoiseConfig,
    lexicons: Lexicons | None = None,
) -> list[ParallelPair]:
    """Emit exactly n pairs whose only corruption is `op_id`, skipping
    sentences where the op finds no site."""
    if op_id not in ALL_OPS:
        raise ConfigError(f"unknown op id: {op_id}")
    solo = config.only_op(op_id)
    solo = replace(solo, ops={**solo.ops, op_id: replace(solo.ops[op_id], probability=1.0)})
    engine = NoiseEngine(solo, lexicons)
    out: list[ParallelPair] = []
    scanned = 0
    for sent in corpus:
        scanned += 1
        pair = engine.corrupt(sent)
        if not pair.edits.records:
            continue
        out.append(pair)
        if len(out) == n:
            return out
    raise ExhaustedError(
        f"typed test set {op_id!r}: needed {n} applicable sentences, "
        f"found {len(out)} in {scanned}"
    )
