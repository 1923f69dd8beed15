"""Per-op corruption behavior, including exact-string replays of each
error class on real Icelandic words (y/i swaps, accent toggles, char
duplication, space deletion, random char replacement, case changes,
dative substitution, compound splitting, known misspellings)."""

from dataclasses import replace

import pytest

from gecpipe.config import NoiseConfig
from gecpipe.corpus_io import TaggedSentence, TaggedToken
from gecpipe.edits import apply_edits, invert_edits
from gecpipe.morpho import InflectionLexicon
from gecpipe.noise import Lexicons, NoiseEngine, invert

V3 = {"num": "sg", "person": "3", "tense": "pres"}


def N(surface, lemma, case, num="sg"):
    return (surface, lemma, "no", {"case": case, "num": num})


def sent(sid, tokens):
    return TaggedSentence(sid, [TaggedToken(*t) for t in tokens])


# (sentence id, op, tokens, op-config overrides, frozen seed, corrupted text)
# The seed constants were searched once and frozen; the sentence id is part
# of the op's RNG stream, so it must not change.
REPLAYS = [
    ("t2-yswap", "char_swap",
     [N("Atvinnuleysi", "atvinnuleysi", "nom")], {}, 1, "Atvinnuleisi"),
    ("t2-iswap", "char_swap",
     [N("vinnu", "vinna", "acc")], {}, 0, "vynnu"),
    ("t2-accents", "accent",
     [N("vestra", "", "nom")], {"intensity": 2}, 1, "véstrá"),
    ("t2-dupchar", "duplicate_char",
     [("ein", "", "to", {})], {}, 6, "eein"),
    ("t2-dupchar2", "duplicate_char",
     [("af", "", "fs", {})], {"intensity": 2}, 3, "afff"),
    ("t2-space", "delete_space",
     [("á", "", "fs", {}), N("Norðurlandi", "Norðurland", "dat")], {}, 0,
     "áNorðurlandi"),
    ("t2-randchar", "random_char",
     [("leita", "", "so", {})], {}, 335, "4eita"),
    ("t2-nouncase", "noun_case",
     [N("ástæðum", "ástæða", "dat", "pl")], {}, 1, "ástæðna"),
    ("t2-dativitis", "dativitis",
     [("mig", "ég", "pfn", {"case": "acc", "num": "sg"}),
      ("langar", "langa", "so", {**V3, "mood": "ind"})], {}, 0, "mér langar"),
    ("t2-dropchar", "drop_char",
     [("atvinnuauglýsingarnar", "", "no", {})], {}, 21, "atvinnuauglýsingrnar"),
    ("mood-er", "mood",
     [("er", "vera", "so", {**V3, "mood": "ind"})], {}, 0, "sé"),
    ("compound", "split_compound",
     [N("eldhúsborð", "eldhúsborð", "nom")], {}, 0, "eldhús borð"),
    ("missp", "misspelling",
     [("einnig", "", "ao", {})], {}, 0, "eining"),
]


@pytest.mark.parametrize("sid,op_id,tokens,overrides,seed,expected",
                         REPLAYS, ids=[r[0] for r in REPLAYS])
def test_replay_exact_strings(solo_engine, sid, op_id, tokens, overrides, seed, expected):
    engine = solo_engine(op_id, seed=seed, **overrides)
    pair = engine.corrupt(sent(sid, tokens))
    assert pair.source == expected
    assert all(r.op_id == op_id for r in pair.edits.records)
    # every replay must invert back to the clean text
    assert invert(pair) == pair.target


def test_noun_case_skips_nouns_without_alternatives(solo_engine):
    # fólksfækkun has identical nom/acc/dat surfaces; only gen differs
    engine = solo_engine("noun_case", seed=0)
    for seed in range(30):
        pair = solo_engine("noun_case", seed=seed).corrupt(
            sent(f"nc-{seed}", [N("fólksfækkun", "fólksfækkun", "nom")]))
        assert pair.source == "fólksfækkunar"
    # unknown lemma -> no site, sentence unchanged
    pair = engine.corrupt(sent("nc-unknown", [N("skrifborð", "skrifborð", "nom")]))
    assert pair.source == pair.target == "skrifborð"
    assert not pair.edits.records


def test_noun_case_updates_feats_for_later_ops(lexicons):
    config = NoiseConfig(seed=1).only_op("noun_case")
    engine = NoiseEngine(config, lexicons)
    pair = engine.corrupt(sent("nc-feats", [N("ástæðum", "ástæða", "dat", "pl")]))
    assert pair.source == "ástæðna"
    rec = pair.edits.records[0]
    assert (rec.pos, rec.before, rec.after) == (0, "ástæðum", "ástæðna")


def test_mood_direction_subj2ind(solo_engine):
    engine = solo_engine("mood", seed=0, direction="subj2ind")
    pair = engine.corrupt(sent("mood-rev", [("sé", "vera", "so", {**V3, "mood": "subj"})]))
    assert pair.source == "er"
    # the ind2subj engine leaves subjunctive forms alone
    engine = solo_engine("mood", seed=0)
    pair = engine.corrupt(sent("mood-noop", [("sé", "vera", "so", {**V3, "mood": "subj"})]))
    assert not pair.edits.records


def test_mood_preserves_capitalization(solo_engine):
    pair = solo_engine("mood", seed=0).corrupt(
        sent("mood-cap", [("Er", "vera", "so", {**V3, "mood": "ind"})]))
    assert pair.source == "Sé"


def test_dativitis_verb_agreement_rewrite(solo_engine):
    # nominative-subject verb: subject to dative, verb to its 3sg form
    pair = solo_engine("dativitis", seed=0).corrupt(
        sent("dat-1sg", [("ég", "ég", "pfn", {"case": "nom", "num": "sg"}),
                         ("hlakka", "hlakka", "so",
                          {"mood": "ind", "num": "sg", "person": "1", "tense": "pres"})]))
    assert pair.source == "mér hlakkar"
    assert len(pair.edits.records) == 2
    assert invert(pair) == "ég hlakka"


def test_dativitis_subject_case_must_match(solo_engine):
    # a dative subject is not in the verb's standard case -> no site
    pair = solo_engine("dativitis", seed=0).corrupt(
        sent("dat-miss", [("mér", "ég", "pfn", {"case": "dat", "num": "sg"}),
                          ("langar", "langa", "so", {**V3, "mood": "ind"})]))
    assert not pair.edits.records


def test_dativitis_np_wide_reinflects_modifiers(solo_engine):
    tokens = [("góðan", "góður", "lo", {"case": "acc", "num": "sg"}),
              ("hest", "hestur", "no", {"case": "acc", "num": "sg"}),
              ("vantar", "vanta", "so", {**V3, "mood": "ind"})]
    pair = solo_engine("dativitis", seed=0, np_wide=True).corrupt(sent("dat-np", tokens))
    assert pair.source == "góðum hesti vantar"
    assert invert(pair) == "góðan hest vantar"
    # noun-only mode leaves the adjective as-is
    pair = solo_engine("dativitis", seed=0).corrupt(sent("dat-np2", tokens))
    assert pair.source == "góðan hesti vantar"


def test_dativitis_np_wide_replay_with_length_changing_modifiers():
    # two stacked modifiers whose dative forms change length: the edit log
    # must replay forward and invert exactly even as offsets shift
    inf = InflectionLexicon()
    rows = [
        ("xa", "xa", "fn", "acc"), ("xaaaum", "xa", "fn", "dat"),
        ("ybbb", "yb", "lo", "acc"), ("ym", "yb", "lo", "dat"),
        ("kött", "köttur", "no", "acc"), ("ketti", "köttur", "no", "dat"),
    ]
    for surface, lemma, pos, case in rows:
        inf.add(surface, lemma, pos, frozenset({("case", case), ("num", "sg")}))
    from gecpipe.morpho import ObliqueVerb, ObliqueVerbLexicon

    lex = Lexicons(inflection=inf,
                   oblique_verbs=ObliqueVerbLexicon([ObliqueVerb("vanta", "acc", "vantar")]))
    config = NoiseConfig(seed=0).only_op("dativitis")
    config = replace(config, ops={**config.ops,
                                  "dativitis": replace(config.ops["dativitis"], np_wide=True)})
    tokens = [("xa", "xa", "fn", {"case": "acc", "num": "sg"}),
              ("ybbb", "yb", "lo", {"case": "acc", "num": "sg"}),
              ("kött", "köttur", "no", {"case": "acc", "num": "sg"}),
              ("vantar", "vanta", "so", {**V3, "mood": "ind"})]
    pair = NoiseEngine(config, lex).corrupt(sent("dat-np3", tokens))
    assert pair.source == "xaaaum ym ketti vantar"
    records = pair.edits.records
    assert apply_edits(pair.target, records) == pair.source
    assert invert_edits(pair.source, records) == pair.target


def test_split_compound_respects_min_part_len(solo_engine):
    # with min_part_len=5 the only valid cut (eldhús|borð) is gone
    pair = solo_engine("split_compound", seed=0, min_part_len=5).corrupt(
        sent("comp-min", [N("eldhúsborð", "eldhúsborð", "nom")]))
    assert not pair.edits.records


def test_misspelling_transfers_capitalization(solo_engine):
    pair = solo_engine("misspelling", seed=0).corrupt(
        sent("missp-cap", [("Einnig", "", "ao", {})]))
    assert pair.source == "Eining"


def test_delete_space_only_between_words(solo_engine):
    # no word-word whitespace gap here: "5" is a number, "." is punctuation
    pair = solo_engine("delete_space", seed=0).corrupt(
        sent("ds-none", [("ég", "ég", "pfn", {}), ("5", "5", "ta", {}), (".", ".", "pk", {})]))
    assert not pair.edits.records


def test_delete_space_words_knob(solo_engine):
    tokens = [("ég", "", "pfn", {}), ("fer", "", "so", {}),
              ("alltaf", "", "ao", {}), ("heim", "", "ao", {})]
    pair = solo_engine("delete_space", seed=0, words=3).corrupt(sent("ds-all", tokens))
    assert pair.source == "égferalltafheim"
    assert len(pair.edits.records) == 3
    assert invert(pair) == "ég fer alltaf heim"


def test_delete_commas_all_and_none(solo_engine):
    tokens = [("ég", "", "pfn", {}), (",", ",", "pk", {}), ("fer", "", "so", {}),
              (",", ",", "pk", {}), ("heim", "", "ao", {})]
    pair = solo_engine("delete_commas", seed=0).corrupt(sent("dc-all", tokens))
    assert pair.source == "ég fer heim"
    assert invert(pair) == "ég, fer, heim"
    pair = solo_engine("delete_commas", seed=0, site_probability=0.0).corrupt(
        sent("dc-none", tokens))
    assert not pair.edits.records


def test_swap_words_requires_differing_neighbours(solo_engine):
    pair = solo_engine("swap_words", seed=0).corrupt(
        sent("sw-same", [("er", "", "so", {}), ("er", "", "so", {})]))
    assert not pair.edits.records
    pair = solo_engine("swap_words", seed=0).corrupt(
        sent("sw-two", [("ég", "", "pfn", {}), ("fer", "", "so", {})]))
    assert pair.source == "fer ég"
    assert invert(pair) == "ég fer"


def test_duplicate_word_inserts_adjacent_copy(solo_engine):
    pair = solo_engine("duplicate_word", seed=0).corrupt(
        sent("dw", [("hestur", "hestur", "no", {"case": "nom", "num": "sg"})]))
    assert pair.source == "hestur hestur"
    assert invert(pair) == "hestur"


def test_drop_char_skips_single_letter_words(solo_engine):
    pair = solo_engine("drop_char", seed=0).corrupt(sent("drop-1", [("á", "", "fs", {})]))
    assert not pair.edits.records


def test_random_char_single_letter_alphabet(solo_engine):
    # one-letter alphabet: a word already spelled with it has no site
    pair = solo_engine("random_char", seed=0, alphabet="x").corrupt(
        sent("rc-x", [("xxx", "", "ao", {})]))
    assert not pair.edits.records
    pair = solo_engine("random_char", seed=0, alphabet="x").corrupt(
        sent("rc-y", [("yyy", "", "ao", {})]))
    assert sorted(pair.source) == ["x", "y", "y"]
    assert invert(pair) == "yyy"


def test_accent_intensity_draws_are_word_local(solo_engine):
    # intensity 3 on a single word stays within that word and inverts
    pair = solo_engine("accent", seed=4, intensity=3).corrupt(
        sent("acc-3", [("vestra", "", "no", {}), (".", ".", "pk", {})]))
    assert pair.edits.records
    assert invert(pair) == "vestra."
    corrupted_word = pair.source.rstrip(".")
    assert len(corrupted_word) == len("vestra")


def test_char_swap_leaves_rule_free_words_alone(solo_engine):
    pair = solo_engine("char_swap", seed=0).corrupt(sent("cs-none", [("berg", "", "no", {})]))
    assert not pair.edits.records


def test_ops_never_touch_the_tagged_feats_of_the_input(lexicons):
    # corruption works on copies: the caller's TaggedToken dicts survive
    tokens = [TaggedToken("ástæðum", "ástæða", "no", {"case": "dat", "num": "pl"})]
    before = {k: dict(t.feats) for k, t in enumerate(tokens)}
    NoiseEngine(NoiseConfig(seed=1).only_op("noun_case"), lexicons).corrupt(
        TaggedSentence("feats-own", tokens))
    assert {k: dict(t.feats) for k, t in enumerate(tokens)} == before
