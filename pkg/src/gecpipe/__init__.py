"""Synthetic-error generation and evaluation toolkit for grammatical
error correction: reversible tokenization, lexicon-driven and naive text
corruption with invertible edit logs, GLEU and span-based F0.5 scoring,
and M2 interop — as a library and a batch CLI (`gecpipe`)."""

__version__ = "0.1.0"

from .corpus_io import (
    FilterRules,
    M2Entry,
    ParallelPair,
    SentenceRecord,
    TaggedSentence,
    TaggedToken,
    filter_sentence,
    read_m2,
    read_parallel,
    read_plain_corpus,
    read_tagged_corpus,
    split_corpus,
    write_m2,
    write_parallel,
    write_plain_corpus,
    write_tagged_corpus,
)
from .config import NoiseConfig, OpConfig, load_filter_rules, load_noise_config
from .edits import EditLog, EditRecord, apply_edits, invert_edits
from .errors import (
    ConfigError,
    EditIntegrityError,
    ExhaustedError,
    FormatError,
    GecPipeError,
    IOFailure,
)
from .gleu import gleu_corpus, gleu_multiref, gleu_sentence
from .noise import (
    Lexicons,
    NoiseEngine,
    compose_noise,
    generate_typed_testset,
    invert,
)
from .spans import (
    EditSpan,
    SpanScore,
    apply_edit_spans,
    extract_edits,
    score_corpus_spans,
    score_spans,
)
from .tokenizer import Token, Tokenizer, detokenize, tokenize

__all__ = [
    "__version__",
    "ConfigError",
    "EditIntegrityError",
    "EditLog",
    "EditRecord",
    "EditSpan",
    "ExhaustedError",
    "FilterRules",
    "FormatError",
    "GecPipeError",
    "IOFailure",
    "Lexicons",
    "M2Entry",
    "NoiseConfig",
    "NoiseEngine",
    "OpConfig",
    "ParallelPair",
    "SentenceRecord",
    "SpanScore",
    "TaggedSentence",
    "TaggedToken",
    "Token",
    "Tokenizer",
    "apply_edit_spans",
    "apply_edits",
    "compose_noise",
    "detokenize",
    "extract_edits",
    "filter_sentence",
    "generate_typed_testset",
    "gleu_corpus",
    "gleu_multiref",
    "gleu_sentence",
    "invert",
    "invert_edits",
    "load_filter_rules",
    "load_noise_config",
    "read_m2",
    "read_parallel",
    "read_plain_corpus",
    "read_tagged_corpus",
    "score_corpus_spans",
    "score_spans",
    "split_corpus",
    "tokenize",
    "write_m2",
    "write_parallel",
    "write_plain_corpus",
    "write_tagged_corpus",
]
