"""Tokenizer round-trip guarantees, offset bookkeeping, and the
classification rules the noise ops rely on."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gecpipe.tokenizer import (
    Token,
    Tokenizer,
    default_spacing,
    detokenize,
    gaps,
    surfaces,
    tokenize,
)

_CHARSET = (
    "aábcdðeéfghiíjklmnoóprstuúvxyýþæö"
    "AÁBDÐEÉFGHIÍJKLMNOÓPRSTUÚVXYÝÞÆÖ"
    "0123456789"
    ".,;:!?()[]«»„“”‘’–—…/%-_"
    " \t\n"
    "€🌵@#"
)


def test_simple_sentence_splits_trailing_period():
    toks = tokenize("Ég er hér.")
    assert surfaces(toks) == ["Ég", "er", "hér", "."]
    assert [t.kind for t in toks] == ["word", "word", "word", "punct"]


def test_number_and_period_split():
    toks = tokenize("sjá á mynd 1.")
    assert surfaces(toks) == ["sjá", "á", "mynd", "1", "."]
    assert toks[3].kind == "number"


def test_merged_word_stays_single():
    toks = tokenize("áNorðurlandi véstrá")
    assert surfaces(toks) == ["áNorðurlandi", "véstrá"]
    assert all(t.kind == "word" for t in toks)


def test_decimal_numbers_stay_single():
    assert surfaces(tokenize("1,5 km og 3.14")) == ["1,5", "km", "og", "3.14"]
    # a comma followed by space is not a decimal separator
    assert surfaces(tokenize("1, 5")) == ["1", ",", "5"]


def test_abbreviations_stay_single():
    assert surfaces(tokenize("t.d. er það o.s.frv.")) == ["t.d.", "er", "það", "o.s.frv."]
    toks = tokenize("þ.á m. í dag")
    assert toks[0].surface == "þ.á m."
    assert toks[0].kind == "word"


def test_abbreviation_needs_token_boundary():
    # letter directly before or after blocks the abbreviation rule
    assert surfaces(tokenize("át.d.")) == ["át", ".", "d", "."]
    assert surfaces(tokenize("t.d.x")) == ["t", ".", "d", ".", "x"]


def test_custom_abbreviation_list(tmp_path):
    plain = Tokenizer(abbreviations=[])
    assert surfaces(plain.tokenize("t.d. hér")) == ["t", ".", "d", ".", "hér"]

    listing = tmp_path / "abbr.txt"
    listing.write_text("t.d.\nq.e.d.\n\n", encoding="utf-8")
    custom = Tokenizer.from_abbrev_file(listing)
    assert surfaces(custom.tokenize("q.e.d. og t.d.")) == ["q.e.d.", "og", "t.d."]


def _assert_well_formed(text, toks):
    prev_end = 0
    for t in toks:
        assert t.surface, "empty token"
        assert t.start < t.end
        assert text[t.start:t.end] == t.surface
        assert t.start >= prev_end
        between = text[prev_end:t.start]
        assert between == "" or between.isspace()
        assert t.kind in {"word", "number", "punct", "symbol"}
        prev_end = t.end
    tail = text[prev_end:]
    assert tail == "" or tail.isspace()


@given(text=st.text(alphabet=_CHARSET, max_size=60))
def test_round_trip_random_text(text):
    toks = tokenize(text)
    _assert_well_formed(text, toks)
    assert detokenize(toks, gaps(text, toks)) == text


def test_round_trip_awkward_inputs():
    for text in [
        "",
        "   ",
        "sjá www.mbl.is núna",
        "verð: 1.234,5 kr. 🌵🌵",
        "  leading and trailing\t\n",
        "(a), [b] og „c“!",
    ]:
        toks = tokenize(text)
        _assert_well_formed(text, toks)
        assert detokenize(toks, gaps(text, toks)) == text
    assert tokenize("") == []


def test_round_trip_and_idempotence_over_fixture_corpus(corpus_1k):
    for sentence in corpus_1k:
        surfs = sentence.surfaces()
        text = detokenize(surfs, default_spacing(surfs))
        toks = tokenize(text)
        assert detokenize(toks, gaps(text, toks)) == text
        assert surfaces(toks) == surfs, sentence.id


def test_gaps_arity_and_edges():
    text = "  Ég er \n"
    toks = tokenize(text)
    spacing = gaps(text, toks)
    assert len(spacing) == len(toks) + 1
    assert spacing[0] == "  "
    assert spacing[-1] == " \n"


def test_zero_width_gaps_concatenate():
    assert detokenize(["á", "Norðurlandi"], ["", "", ""]) == "áNorðurlandi"
    tok = Token("x", 0, 1, "word")
    assert detokenize([tok, tok], ["", "", ""]) == "xx"


def test_detokenize_arity_mismatch():
    with pytest.raises(ValueError, match="arity"):
        detokenize(["a", "b"], ["", " "])


def test_default_spacing_attachment():
    assert detokenize(["Ég", "er", "hér", "."], default_spacing(["Ég", "er", "hér", "."])) == "Ég er hér."
    surfs = ["(", "a", ")", ",", "b"]
    assert detokenize(surfs, default_spacing(surfs)) == "(a), b"


def test_kind_classification():
    toks = tokenize("Ég á 1,5 € núna!")
    assert [(t.surface, t.kind) for t in toks] == [
        ("Ég", "word"),
        ("á", "word"),
        ("1,5", "number"),
        ("€", "symbol"),
        ("núna", "word"),
        ("!", "punct"),
    ]
