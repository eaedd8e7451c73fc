"""Khmer semantic search engine.

Core building blocks: dictionary-based Khmer segmentation, TF-IDF keyword
extraction, a tourism ontology with query expansion and taxonomy similarity,
an inverted index with snapshot persistence, multi-signal ranking, and a
precision/recall evaluation harness. The HTTP service and CLI live in
kse.service and kse.cli.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    EmptyQueryError,
    EncodingError,
    GroundTruthError,
    IndexFormatError,
    KseError,
    LexiconError,
    OntologyError,
    StateError,
)
from .textproc import Lexicon, StopList, TokenStream, normalize, remove_stop_words, segment, tokenize_query

__all__ = [
    "ConfigError",
    "EmptyQueryError",
    "EncodingError",
    "GroundTruthError",
    "IndexFormatError",
    "KseError",
    "LexiconError",
    "Lexicon",
    "OntologyError",
    "StateError",
    "StopList",
    "TokenStream",
    "normalize",
    "remove_stop_words",
    "segment",
    "tokenize_query",
    "__version__",
]
