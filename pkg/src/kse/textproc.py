"""Text pipeline: Khmer dictionary segmentation, stop-word removal, normalization.

Khmer script has no inter-word spaces, so tokenization is driven by a word
lexicon with greedy longest-match. Latin-script runs are split on whitespace
instead, and characters the lexicon does not cover fall back to
single-character tokens flagged out-of-vocabulary. The same pipeline is used
for titles, bodies and queries so that index terms and query terms always
agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import EncodingError, LexiconError

ZERO_WIDTH_SPACE = "​"


def _is_separator(ch: str) -> bool:
    return ch.isspace() or ch == ZERO_WIDTH_SPACE


def _is_latin(ch: str) -> bool:
    return ch.isascii() and ch.isalnum()


def normalize(token: str) -> str:
    """Reduce a token to its matching form.

    Khmer (any non-ASCII) tokens pass through unchanged. ASCII tokens are
    lowercased and lose a single trailing "s" when longer than 3 characters,
    so "Sites" -> "site" and "wats" -> "wat". Idempotent.
    """
    if not token:
        raise ValueError("cannot normalize an empty token")
    if not token.isascii():
        return token
    token = token.lower()
    if len(token) > 3 and token.endswith("s"):
        token = token[:-1]
    return token


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    offset: int
    field: str = "body"
    oov: bool = False


@dataclass(frozen=True)
class TokenStream:
    """Ordered tokens with strictly increasing character offsets."""

    tokens: tuple[Token, ...] = ()

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __bool__(self) -> bool:
        return bool(self.tokens)

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def terms(self) -> list[str]:
        """Normalized forms, in stream order."""
        return [t.normalized for t in self.tokens]


@dataclass(frozen=True)
class Lexicon:
    """Word inventory the segmenter matches against."""

    entries: frozenset[str]
    max_entry_len: int = field(default=0)

    def __post_init__(self):
        if not self.entries:
            raise LexiconError("lexicon is empty")
        longest = max(len(e) for e in self.entries)
        object.__setattr__(self, "max_entry_len", longest)

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "Lexicon":
        checked = set()
        for w in words:
            if not w:
                raise LexiconError("lexicon entry is empty")
            if any(_is_separator(c) for c in w):
                raise LexiconError(f"lexicon entry contains whitespace: {w!r}")
            checked.add(w)
        return cls(entries=frozenset(checked))

    @classmethod
    def load(cls, path: str | Path) -> "Lexicon":
        return cls.from_words(_read_word_lines(path))


@dataclass(frozen=True)
class StopList:
    """Words dropped before indexing and matching. Stored in normalized form."""

    words: frozenset[str]

    def __contains__(self, term: str) -> bool:
        return term in self.words

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "StopList":
        return cls(words=frozenset(normalize(w) for w in words if w))

    @classmethod
    def load(cls, path: str | Path) -> "StopList":
        return cls.from_words(_read_word_lines(path))

    @classmethod
    def empty(cls) -> "StopList":
        return cls(words=frozenset())


def _read_word_lines(path: str | Path) -> list[str]:
    """One word per line; blank lines and `#` comment lines are ignored."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"{path}: not valid UTF-8: {exc}") from exc
    words = []
    for line in text.splitlines():
        stripped = line.strip().strip(ZERO_WIDTH_SPACE)
        if not stripped or stripped.startswith("#"):
            continue
        words.append(stripped)
    return words


def _check_utf8(text: str) -> None:
    try:
        text.encode("utf-8")
    except UnicodeEncodeError as exc:
        raise EncodingError(f"input is not valid UTF-8: {exc}") from exc


def segment(text: str, lexicon: Lexicon, field: str = "body") -> TokenStream:
    """Split text into tokens by greedy longest lexicon match.

    Whitespace and zero-width spaces are hard boundaries and are dropped.
    Where the lexicon has no match, Latin-script runs are taken whole (split
    on whitespace only) and anything else is emitted one character at a
    time, flagged out-of-vocabulary.
    """
    _check_utf8(text)
    tokens: list[Token] = []
    n = len(text)
    i = 0
    while i < n:
        ch = text[i]
        if _is_separator(ch):
            i += 1
            continue
        limit = min(n - i, lexicon.max_entry_len)
        matched = None
        for length in range(limit, 0, -1):
            candidate = text[i : i + length]
            if candidate in lexicon.entries:
                matched = candidate
                break
        if matched is not None:
            tokens.append(Token(matched, normalize(matched), i, field, oov=False))
            i += len(matched)
        elif _is_latin(ch):
            j = i + 1
            while j < n and _is_latin(text[j]):
                j += 1
            surface = text[i:j]
            tokens.append(Token(surface, normalize(surface), i, field, oov=False))
            i = j
        else:
            tokens.append(Token(ch, normalize(ch), i, field, oov=True))
            i += 1
    return TokenStream(tokens=tuple(tokens))


def remove_stop_words(stream: TokenStream, stops: StopList) -> TokenStream:
    """Order-preserving subsequence whose normalized forms are not stop words."""
    return TokenStream(
        tokens=tuple(t for t in stream if t.normalized not in stops)
    )


def tokenize_query(query: str, lexicon: Lexicon, stops: StopList) -> TokenStream:
    """Full query pipeline: segment, drop stop words, normalized forms attached."""
    return remove_stop_words(segment(query, lexicon, field="query"), stops)
