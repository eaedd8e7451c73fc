"""Bundled sample data: lexicon, stop words, tourism ontology, demo corpus."""

from pathlib import Path

_HERE = Path(__file__).parent

DEFAULT_LEXICON = _HERE / "lexicon_km.txt"
DEFAULT_STOPWORDS = _HERE / "stopwords_km.txt"
DEFAULT_ONTOLOGY = _HERE / "ontology_tourism.json"
SAMPLE_CORPUS = _HERE / "sample_corpus.jsonl"
SAMPLE_GROUND_TRUTH = _HERE / "sample_ground_truth.jsonl"
