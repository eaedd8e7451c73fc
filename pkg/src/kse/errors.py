"""Exception types shared across the engine."""


class KseError(Exception):
    """Base class for all engine errors."""


class EncodingError(KseError):
    """Input text is not valid UTF-8 (e.g. contains lone surrogates)."""


class LexiconError(KseError):
    """Segmentation lexicon file is malformed or violates its invariants."""


class OntologyError(KseError):
    """Ontology file fails validation (dangling ids, cycles, multiple parents)."""


class IndexFormatError(KseError):
    """Persisted index is unreadable: bad version, checksum mismatch, truncation."""


class StateError(KseError):
    """Operation called on an object in the wrong state (e.g. untokenized document)."""


class EmptyQueryError(KseError):
    """Query is empty, or empty after stop-word removal."""


class GroundTruthError(KseError):
    """Ground-truth file is malformed or references unknown documents."""


class ConfigError(KseError):
    """Service configuration is invalid or points at missing files."""
