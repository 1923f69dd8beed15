import random
from dataclasses import replace

import pytest

from fixture_data import build_corpus, build_lexicons, write_lexicon_files
from gecpipe.config import NoiseConfig
from gecpipe.noise import NoiseEngine


@pytest.fixture(scope="session")
def lexicons():
    return build_lexicons()


@pytest.fixture(scope="session")
def lexicon_dir(tmp_path_factory):
    """Directory holding the fixture lexicons as TSV files."""
    d = tmp_path_factory.mktemp("lexicons")
    write_lexicon_files(d)
    return d


@pytest.fixture(scope="session")
def corpus_1k():
    return build_corpus(1000, seed=1234)


@pytest.fixture(scope="session")
def corpus_10k():
    return build_corpus(10_000, seed=1234)


@pytest.fixture
def solo_engine(lexicons):
    """Factory for an engine with a single op enabled at probability 1."""

    def make(op_id: str, seed: int = 0, **op_overrides) -> NoiseEngine:
        config = NoiseConfig(seed=seed).only_op(op_id)
        conf = replace(config.ops[op_id], probability=1.0, **op_overrides)
        return NoiseEngine(replace(config, ops={**config.ops, op_id: conf}), lexicons)

    return make


@pytest.fixture
def rng():
    return random.Random(99)
