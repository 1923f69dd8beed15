"""Lexicon lookups: index consistency, compound splitting against a
brute-force oracle, capitalization transfer, and TSV loading errors."""

import pytest

from fixture_data import build_lexicons
from gecpipe.errors import ConfigError, FormatError
from gecpipe.morpho import (
    Analysis,
    CharRule,
    CharRuleTable,
    InflectionLexicon,
    MisspellingLexicon,
    ObliqueVerb,
    ObliqueVerbLexicon,
    feats_from_str,
    feats_to_str,
    match_capitalization,
    valid_compound_splits,
    with_feat,
)

# ---------------------------------------------------------------------------
# inflection lexicon


def test_forward_and_reverse_indices_agree(lexicons):
    lex = lexicons.inflection
    assert len(lex) > 30
    for key in lex.keys():
        for surface in lex.inflect(*key):
            assert Analysis(*key) in lex.analyze(surface), (key, surface)
    for surface in lex.surfaces():
        for analysis in lex.analyze(surface):
            assert surface in lex.inflect(*analysis), (surface, analysis)


def test_inflect_known_verb_form(lexicons):
    feats = feats_from_str("mood=ind|num=sg|person=3|tense=pres")
    assert lexicons.inflection.inflect("hlakka", "so", feats) == ("hlakkar",)
    assert lexicons.inflection.inflect("vera", "so", feats) == ("er",)


def test_inflect_absent_key_is_empty(lexicons):
    assert lexicons.inflection.inflect("zzz", "so", frozenset()) == ()
    assert lexicons.inflection.analyze("zzz") == ()


def test_inflect_ambiguous_key_returns_all_in_file_order():
    feats = feats_from_str("case=dat|num=sg")
    lex = InflectionLexicon(
        [("velli", "völlur", "no", feats), ("vellinum", "völlur", "no", feats)]
    )
    assert lex.inflect("völlur", "no", feats) == ("velli", "vellinum")


def test_analyze_falls_back_to_decapitalized_form():
    feats = feats_from_str("case=dat|num=sg")
    lex = InflectionLexicon([("páli", "páll", "no", feats)])
    assert lex.analyze("Páli") == (Analysis("páll", "no", feats),)
    assert lex.has_surface("Páli")
    assert not lex.has_surface("PÁLI")


def test_inflection_add_rejects_empty_surface():
    with pytest.raises(ConfigError):
        InflectionLexicon([("", "x", "no", frozenset())])


def test_inflection_load_and_errors(tmp_path):
    path = tmp_path / "inflection.tsv"
    path.write_text(
        "# comment line\n"
        "\n"
        "hestur\thestur\tno\tcase=nom|num=sg\n"
        "hesti\thestur\tno\tcase=dat|num=sg\n",
        encoding="utf-8",
    )
    lex = InflectionLexicon.load(path)
    assert len(lex) == 2
    assert lex.inflect("hestur", "no", feats_from_str("case=dat|num=sg")) == ("hesti",)

    path.write_text("hestur\thestur\tno\n", encoding="utf-8")
    with pytest.raises(FormatError) as err:
        InflectionLexicon.load(path)
    assert err.value.line == 1

    path.write_text("hestur\thestur\tno\tcase\n", encoding="utf-8")
    with pytest.raises(FormatError, match="feature"):
        InflectionLexicon.load(path)


# ---------------------------------------------------------------------------
# misspellings


def test_misspellings_file_order_and_capitalization():
    lex = MisspellingLexicon([("einnig", "eining"), ("einnig", "einig")])
    assert lex.misspellings_of("einnig") == ["eining", "einig"]
    assert lex.misspellings_of("Einnig") == ["Eining", "Einig"]
    assert lex.misspellings_of("óþekkt") == []
    for variant in lex.misspellings_of("einnig"):
        assert variant != "einnig"


def test_misspellings_duplicates_collapse_and_validation():
    lex = MisspellingLexicon()
    lex.add("ýta", "íta")
    lex.add("ýta", "íta")
    assert lex.misspellings_of("ýta") == ["íta"]
    with pytest.raises(ConfigError):
        lex.add("orð", "orð")
    with pytest.raises(ConfigError):
        lex.add("", "x")
    assert lex.all_variants() == frozenset({"íta"})


def test_misspellings_load_errors(tmp_path):
    path = tmp_path / "missp.tsv"
    path.write_text("einnig\teining\textra\n", encoding="utf-8")
    with pytest.raises(FormatError) as err:
        MisspellingLexicon.load(path)
    assert err.value.line == 1
    path.write_text("einnig\teinnig\n", encoding="utf-8")
    with pytest.raises(FormatError, match="equals"):
        MisspellingLexicon.load(path)


# ---------------------------------------------------------------------------
# oblique verbs


def test_oblique_verb_lookup(lexicons):
    verb = lexicons.oblique_verbs.get("langa")
    assert verb is not None
    assert verb.standard_case == "acc"
    assert verb.third_sg == "langar"
    assert lexicons.oblique_verbs.get("borða") is None


def test_oblique_verb_validation(tmp_path):
    with pytest.raises(ConfigError, match="nom or acc"):
        ObliqueVerbLexicon([ObliqueVerb("langa", "dat", "langar")])
    path = tmp_path / "oblique.tsv"
    path.write_text("langa\tacc\n", encoding="utf-8")
    with pytest.raises(FormatError):
        ObliqueVerbLexicon.load(path)
    path.write_text("hlakka\tnom\t_\n", encoding="utf-8")
    lex = ObliqueVerbLexicon.load(path)
    assert lex.get("hlakka").third_sg == ""


# ---------------------------------------------------------------------------
# char rules


def test_directed_rules_expand_bidirectional_in_order():
    table = CharRuleTable([CharRule("y", "i", True), CharRule("ýi", "ýji", False)])
    assert table.directed_rules() == [("y", "i"), ("i", "y"), ("ýi", "ýji")]


def test_occurrences_sorted_by_position_then_rule():
    table = CharRuleTable([CharRule("y", "i", True)])
    assert table.occurrences("vinny") == [(1, "i", "y"), (4, "y", "i")]
    # same position, two rules: file order breaks the tie
    two = CharRuleTable([CharRule("a", "á", False), CharRule("a", "ä", False)])
    assert two.occurrences("ba") == [(1, "a", "á"), (1, "a", "ä")]
    # overlapping matches are all reported
    runs = CharRuleTable([CharRule("aa", "á", False)])
    assert [pos for pos, _, _ in runs.occurrences("aaa")] == [0, 1]


def test_has_match_tracks_added_rules():
    table = CharRuleTable()
    assert not table.has_match("vinna")
    assert table.occurrences("vinna") == []
    table.add(CharRule("i", "y", False))
    assert table.has_match("vinna")
    table.add(CharRule("q", "k", False))
    assert table.has_match("aqua")


def test_char_rule_validation_and_load(tmp_path):
    with pytest.raises(ConfigError):
        CharRuleTable([CharRule("", "x", False)])
    with pytest.raises(ConfigError, match="itself"):
        CharRuleTable([CharRule("x", "x", True)])

    path = tmp_path / "rules.tsv"
    path.write_text("y\ti\n# accent pairs\na\tá\tbi\nýi\týji\tuni\n", encoding="utf-8")
    table = CharRuleTable.load(path)
    # two-column lines default to bidirectional
    assert table.directed_rules() == [
        ("y", "i"), ("i", "y"), ("a", "á"), ("á", "a"), ("ýi", "ýji"),
    ]

    path.write_text("y\n", encoding="utf-8")
    with pytest.raises(FormatError):
        CharRuleTable.load(path)
    path.write_text("y\ti\tsometimes\n", encoding="utf-8")
    with pytest.raises(FormatError, match="mode"):
        CharRuleTable.load(path)


# ---------------------------------------------------------------------------
# compound splits


def test_compound_splits_match_brute_force_over_fixture_lexicon(lexicons):
    lex = lexicons.inflection
    for surface in lex.surfaces():
        for min_len in (2, 3):
            expected = [
                (surface[:cut], surface[cut:])
                for cut in range(min_len, len(surface) - min_len + 1)
                if lex.has_surface(surface[:cut]) and lex.has_surface(surface[cut:])
            ]
            assert valid_compound_splits(surface, lex, min_len) == expected, surface


def test_compound_split_examples(lexicons):
    assert valid_compound_splits("eldhúsborð", lexicons.inflection) == [("eldhús", "borð")]
    assert valid_compound_splits("hestur", lexicons.inflection) == []

    feats = frozenset()
    small = InflectionLexicon([("af", "af", "fs", feats), ("bragð", "bragð", "no", feats)])
    assert valid_compound_splits("afbragð", small, min_part_len=2) == [("af", "bragð")]
    # both parts shorter than the minimum → nothing
    assert valid_compound_splits("afbragð", small, min_part_len=6) == []


def test_compound_splits_ordered_by_cut_position():
    feats = frozenset()
    lex = InflectionLexicon(
        [("a", "a", "no", feats), ("aa", "aa", "no", feats), ("aaa", "aaa", "no", feats)]
    )
    assert valid_compound_splits("aaaa", lex, min_part_len=1) == [
        ("a", "aaa"), ("aa", "aa"), ("aaa", "a"),
    ]
    with pytest.raises(ConfigError):
        valid_compound_splits("aaaa", lex, min_part_len=0)


# ---------------------------------------------------------------------------
# small helpers


def test_match_capitalization():
    assert match_capitalization("Hann", "hestur") == "Hestur"
    assert match_capitalization("hann", "Hestur") == "Hestur"
    assert match_capitalization("hann", "hestur") == "hestur"
    assert match_capitalization("VIÐ", "okkur") == "OKKUR"
    assert match_capitalization("", "x") == "x"
    assert match_capitalization("x", "") == ""


def test_feats_string_round_trip():
    feats = feats_from_str("num=sg|case=nom")
    assert feats == frozenset({("num", "sg"), ("case", "nom")})
    assert feats_to_str(feats) == "case=nom|num=sg"
    assert feats_from_str("_") == frozenset()
    assert feats_from_str("") == frozenset()
    assert feats_to_str(frozenset()) == "_"
    with pytest.raises(ValueError):
        feats_from_str("case")


def test_with_feat_replaces_value():
    feats = feats_from_str("case=nom|num=sg")
    assert with_feat(feats, "case", "dat") == feats_from_str("case=dat|num=sg")
    assert with_feat(frozenset(), "case", "dat") == feats_from_str("case=dat")
