import time

import pytest

from kse import data
from kse.index import IndexBuilder
from kse.ontology import load_ontology
from kse.textproc import Lexicon, StopList

FIXED_NOW = 1767225600.0  # 2026-01-01T00:00:00Z, after every sample timestamp


@pytest.fixture(scope="session")
def lexicon():
    return Lexicon.load(data.DEFAULT_LEXICON)


@pytest.fixture(scope="session")
def stops():
    return StopList.load(data.DEFAULT_STOPWORDS)


@pytest.fixture(scope="session")
def ontology():
    return load_ontology(data.DEFAULT_ONTOLOGY)


@pytest.fixture(scope="session")
def sample_snapshot(lexicon, stops):
    builder = IndexBuilder(lexicon, stops)
    builder.add_corpus_file(data.SAMPLE_CORPUS, now=time.time())
    return builder.build()


@pytest.fixture
def now():
    return FIXED_NOW
