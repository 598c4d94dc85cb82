"""Vocabulary-driven greedy subword tokenization.

All length decisions in the augmentation pipeline are made in subword units
so they match what a downstream text encoder sees.  The algorithm is the
classic uncased WordPiece recipe: text cleanup, whitespace + punctuation
splitting, accent stripping, then greedy longest-match against a vocabulary
with a ``##`` continuation marker.  Words that cannot be covered by the
vocabulary (or exceed the per-word character cap) collapse to the unknown
token, so tokenization is total.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

DEFAULT_CONTINUATION = "##"
DEFAULT_UNKNOWN = "[UNK]"
DEFAULT_WORD_CHAR_CAP = 100


def _is_control(ch: str) -> bool:
    if ch in ("\t", "\n", "\r"):
        return False
    return unicodedata.category(ch).startswith("C")


def _is_whitespace(ch: str) -> bool:
    if ch in (" ", "\t", "\n", "\r"):
        return True
    return unicodedata.category(ch) == "Zs"


def _is_punctuation(ch: str) -> bool:
    cp = ord(ch)
    # ASCII ranges that are not alphanumeric count as punctuation even when
    # unicode classifies them otherwise (e.g. ^ $ ` ~), matching BERT.
    if 33 <= cp <= 47 or 58 <= cp <= 64 or 91 <= cp <= 96 or 123 <= cp <= 126:
        return True
    return unicodedata.category(ch).startswith("P")


def _is_cjk(cp: int) -> bool:
    return (
        0x4E00 <= cp <= 0x9FFF
        or 0x3400 <= cp <= 0x4DBF
        or 0x20000 <= cp <= 0x2A6DF
        or 0x2A700 <= cp <= 0x2B73F
        or 0x2B740 <= cp <= 0x2B81F
        or 0x2B820 <= cp <= 0x2CEAF
        or 0xF900 <= cp <= 0xFAFF
        or 0x2F800 <= cp <= 0x2FA1F
    )


def _clean_text(text: str) -> str:
    out = []
    for ch in text:
        cp = ord(ch)
        if cp == 0 or cp == 0xFFFD or _is_control(ch):
            continue
        out.append(" " if _is_whitespace(ch) else ch)
    return "".join(out)


def _space_cjk(text: str) -> str:
    out = []
    for ch in text:
        if _is_cjk(ord(ch)):
            out.append(" ")
            out.append(ch)
            out.append(" ")
        else:
            out.append(ch)
    return "".join(out)


def _strip_accents(word: str) -> str:
    return "".join(
        ch for ch in unicodedata.normalize("NFD", word)
        if unicodedata.category(ch) != "Mn"
    )


def _split_punctuation(word: str) -> list[str]:
    pieces: list[str] = []
    current: list[str] = []
    for ch in word:
        if _is_punctuation(ch):
            if current:
                pieces.append("".join(current))
                current = []
            pieces.append(ch)
        else:
            current.append(ch)
    if current:
        pieces.append("".join(current))
    return pieces


def basic_words(text: str, lowercase: bool = True) -> list[str]:
    """Split text into cleaned words: whitespace split, punctuation isolated,
    accents stripped, CJK characters spaced out into single-char words."""
    text = _space_cjk(_clean_text(text))
    words: list[str] = []
    for chunk in text.split():
        if lowercase:
            chunk = chunk.lower()
        chunk = _strip_accents(chunk)
        words.extend(_split_punctuation(chunk))
    return words


@dataclass
class SubwordVocabulary:
    """An ordered subword vocabulary with a continuation marker.

    The token id of an entry is its position in ``entries`` (= its line index
    in the vocab file).
    """

    entries: list[str]
    continuation_prefix: str = DEFAULT_CONTINUATION
    unknown_token: str = DEFAULT_UNKNOWN
    word_char_cap: int = DEFAULT_WORD_CHAR_CAP
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.index = {}
        for i, token in enumerate(self.entries):
            if token in self.index:
                raise ConfigError(f"duplicate vocabulary entry {token!r} at line {i + 1}")
            self.index[token] = i
        if not self.continuation_prefix:
            raise ConfigError("continuation prefix must be non-empty")
        if self.continuation_prefix in self.index:
            raise ConfigError("continuation prefix must not be a standalone vocabulary entry")
        if self.unknown_token not in self.index:
            raise ConfigError(f"unknown token {self.unknown_token!r} missing from vocabulary")

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    @classmethod
    def load(cls, path: str | Path, **kwargs) -> "SubwordVocabulary":
        """Load a one-token-per-line vocabulary file (UTF-8, line index = id)."""
        entries = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                token = line.rstrip("\n").rstrip("\r")
                if token:
                    entries.append(token)
        if not entries:
            raise ConfigError(f"empty vocabulary file: {path}")
        return cls(entries=entries, **kwargs)


def default_vocabulary() -> SubwordVocabulary:
    """The vocabulary shipped with the package (see resources/vocab.txt)."""
    return SubwordVocabulary.load(Path(__file__).parent / "resources" / "vocab.txt")


def _wordpiece(word: str, vocab: SubwordVocabulary) -> list[str]:
    if len(word) > vocab.word_char_cap:
        return [vocab.unknown_token]
    pieces: list[str] = []
    start = 0
    while start < len(word):
        end = len(word)
        match = None
        while start < end:
            piece = word[start:end]
            if start > 0:
                piece = vocab.continuation_prefix + piece
            if piece in vocab.index:
                match = piece
                break
            end -= 1
        if match is None:
            return [vocab.unknown_token]
        pieces.append(match)
        start = end
    return pieces


def tokenize(text: str, vocab: SubwordVocabulary) -> list[str]:
    """Tokenize ``text`` into subword tokens.

    Words tokenize independently, so token counts are additive across
    space-separated concatenation.  Unmatchable words become the unknown
    token; no other out-of-vocabulary token can appear in the output.
    """
    tokens: list[str] = []
    for word in basic_words(text):
        tokens.extend(_wordpiece(word, vocab))
    return tokens


def token_length(text: str, vocab: SubwordVocabulary) -> int:
    """Subword length of ``text`` (no [CLS]/[SEP] accounting)."""
    return len(tokenize(text, vocab))
