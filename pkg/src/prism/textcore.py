"""Tokenization, POS tagging and case-preserving word substitution.

The tokenizer is deliberately simple and exactly reversible: text is
NFC-normalized, whitespace runs are collapsed, chunks are split on spaces,
and leading/trailing punctuation is peeled off into separate tokens.
``detokenize(tokenize(s)) == s`` holds for any normalized string.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from typing import Iterable, Optional


class TokenKind(str, Enum):
    WORD = "word"
    PUNCTUATION = "punctuation"
    NUMBER = "number"


class CaseShape(str, Enum):
    LOWER = "lower"
    TITLE = "title"
    UPPER = "upper"
    MIXED = "mixed"


class PosTag(str, Enum):
    NOUN = "NOUN"
    PROPN = "PROPN"
    VERB = "VERB"
    ADJ = "ADJ"
    ADV = "ADV"
    DET = "DET"
    PRON = "PRON"
    ADP = "ADP"
    CONJ = "CONJ"
    NUM = "NUM"
    PUNCT = "PUNCT"
    OTHER = "OTHER"


_NUMBER_RE = re.compile(r"\d+(?:[.,]\d+)*")


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("P", "S")


def case_shape_of(surface: str) -> CaseShape:
    """Classify the capitalization pattern of a token surface."""
    if surface == surface.lower():
        return CaseShape.LOWER
    if surface[:1].isupper() and surface[1:] == surface[1:].lower():
        return CaseShape.TITLE
    if surface == surface.upper():
        return CaseShape.UPPER
    return CaseShape.MIXED


def apply_case(word: str, shape: CaseShape) -> str:
    """Re-shape ``word`` to a capitalization pattern.

    ``MIXED`` shapes cannot be transferred generically, so the word is left
    as given.
    """
    if shape is CaseShape.LOWER:
        return word.lower()
    if shape is CaseShape.TITLE:
        return word[:1].upper() + word[1:].lower()
    if shape is CaseShape.UPPER:
        return word.upper()
    return word


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind
    case_shape: CaseShape

    def __post_init__(self) -> None:
        if not self.surface or any(ch.isspace() for ch in self.surface):
            raise ValueError(f"token surface must be non-empty and whitespace-free: {self.surface!r}")


def make_token(surface: str) -> Token:
    if all(_is_punct_char(ch) for ch in surface):
        kind = TokenKind.PUNCTUATION
    elif _NUMBER_RE.fullmatch(surface):
        kind = TokenKind.NUMBER
    else:
        kind = TokenKind.WORD
    return Token(surface=surface, kind=kind, case_shape=case_shape_of(surface))


@dataclass(frozen=True)
class TaggedText:
    """Tokens with one POS tag each plus the separators needed to rebuild
    the original string."""

    tokens: tuple[Token, ...]
    tags: tuple[PosTag, ...]
    separators: tuple[str, ...]

    def __post_init__(self) -> None:
        if not (len(self.tokens) == len(self.tags) == len(self.separators)):
            raise ValueError("tokens, tags and separators must have equal length")

    def __len__(self) -> int:
        return len(self.tokens)

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def word_indices(self) -> list[int]:
        return [i for i, t in enumerate(self.tokens) if t.kind is TokenKind.WORD]

    def char_spans(self) -> list[tuple[int, int]]:
        """Character offsets of each token in ``detokenize(self)``."""
        spans = []
        pos = 0
        for tok, sep in zip(self.tokens, self.separators):
            pos += len(sep)
            spans.append((pos, pos + len(tok.surface)))
            pos += len(tok.surface)
        return spans


@dataclass(frozen=True)
class Vocabulary:
    """Lowercase source-language word set used for substitution draws."""

    words: frozenset[str]

    def __post_init__(self) -> None:
        if not self.words:
            raise ValueError("vocabulary must contain at least one word")
        bad = [w for w in self.words if w != w.lower()]
        if bad:
            raise ValueError(f"vocabulary words must be lowercase: {sorted(bad)[:3]}")

    @classmethod
    def of(cls, words: Iterable[str]) -> "Vocabulary":
        return cls(frozenset(w.lower() for w in words))

    @property
    def size(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def sorted(self) -> list[str]:
        return sorted(self.words)


def normalize(text: str) -> str:
    """NFC-normalize and collapse all whitespace runs to single spaces."""
    return " ".join(unicodedata.normalize("NFC", text).split())


def _default_tag_for(token: Token) -> PosTag:
    if token.kind is TokenKind.PUNCTUATION:
        return PosTag.PUNCT
    if token.kind is TokenKind.NUMBER:
        return PosTag.NUM
    return PosTag.OTHER


def tokenize(text: str) -> TaggedText:
    """Split normalized text into word/number/punctuation tokens.

    Leading and trailing punctuation of each whitespace chunk becomes
    separate tokens; intra-word apostrophes and hyphens are kept. Word
    tokens get the placeholder tag OTHER until ``pos_tag`` runs.
    """
    norm = normalize(text)
    tokens: list[Token] = []
    seps: list[str] = []
    for chunk_index, chunk in enumerate(norm.split(" ") if norm else []):
        lead: list[str] = []
        trail: list[str] = []
        core = chunk
        while core and _is_punct_char(core[0]):
            lead.append(core[0])
            core = core[1:]
        while core and _is_punct_char(core[-1]):
            trail.append(core[-1])
            core = core[:-1]
        first_sep = " " if chunk_index > 0 else ""
        parts = lead + ([core] if core else []) + list(reversed(trail))
        for j, part in enumerate(parts):
            tokens.append(make_token(part))
            seps.append(first_sep if j == 0 else "")
    tags = tuple(_default_tag_for(t) for t in tokens)
    return TaggedText(tokens=tuple(tokens), tags=tags, separators=tuple(seps))


def detokenize(text: TaggedText) -> str:
    """Exact inverse of ``tokenize`` on normalized input."""
    return "".join(sep + tok.surface for sep, tok in zip(text.separators, text.tokens))


# Suffix rules applied to words missing from the lexicon, in order.
_SUFFIX_RULES: tuple[tuple[str, PosTag], ...] = (
    ("ly", PosTag.ADV),
    ("ing", PosTag.VERB),
    ("ed", PosTag.VERB),
    ("tion", PosTag.NOUN),
    ("sion", PosTag.NOUN),
    ("ness", PosTag.NOUN),
    ("ment", PosTag.NOUN),
    ("ity", PosTag.NOUN),
    ("ous", PosTag.ADJ),
    ("ful", PosTag.ADJ),
    ("ive", PosTag.ADJ),
    ("able", PosTag.ADJ),
)


@dataclass
class PosTagger:
    """Deterministic, context-free tagger: lexicon lookup, then suffix
    heuristics, then NOUN.

    Context independence matters: a word gets the same tag in a sentence
    and in isolation, which keeps POS-keyed dictionary keys consistent
    between build time and encode time.
    """

    lexicon: dict[str, PosTag] = field(default_factory=dict)

    @classmethod
    def load(cls, path) -> "PosTagger":
        """Read a ``word<TAB>tag`` TSV lexicon."""
        lexicon: dict[str, PosTag] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                try:
                    word, tag = line.split("\t")
                    lexicon[word.lower()] = PosTag(tag)
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: bad lexicon row {line!r}") from exc
        return cls(lexicon=lexicon)

    def tag_word(self, word: str) -> PosTag:
        lower = word.lower()
        if lower in self.lexicon:
            return self.lexicon[lower]
        for suffix, tag in _SUFFIX_RULES:
            if len(lower) > len(suffix) + 1 and lower.endswith(suffix):
                return tag
        return PosTag.NOUN

    def tag(self, text: TaggedText) -> TaggedText:
        tags = []
        for token in text.tokens:
            if token.kind is TokenKind.PUNCTUATION:
                tags.append(PosTag.PUNCT)
            elif token.kind is TokenKind.NUMBER:
                tags.append(PosTag.NUM)
            else:
                tags.append(self.tag_word(token.surface))
        return replace(text, tags=tuple(tags))


_DEFAULT_TAGGER: Optional[PosTagger] = None


def default_tagger() -> PosTagger:
    """Tagger backed by the lexicon shipped with the package."""
    global _DEFAULT_TAGGER
    if _DEFAULT_TAGGER is None:
        ref = resources.files("prism.data").joinpath("pos_lexicon_en.tsv")
        with resources.as_file(ref) as path:
            _DEFAULT_TAGGER = PosTagger.load(path)
    return _DEFAULT_TAGGER


def pos_tag(text: TaggedText, tagger: Optional[PosTagger] = None) -> TaggedText:
    """Assign one PosTag per token; total over all inputs."""
    return (tagger or default_tagger()).tag(text)


def substitute_token(text: TaggedText, index: int, replacement: str) -> TaggedText:
    """Replace the word token at ``index``, inheriting its case shape.

    Tags and separators are untouched; punctuation and numbers are
    rejected.
    """
    if not 0 <= index < len(text.tokens):
        raise IndexError(f"token index {index} out of range for {len(text.tokens)} tokens")
    original = text.tokens[index]
    if original.kind is not TokenKind.WORD:
        raise ValueError(f"cannot substitute non-word token {original.surface!r} at index {index}")
    shaped = apply_case(replacement, original.case_shape)
    new_token = Token(surface=shaped, kind=TokenKind.WORD, case_shape=case_shape_of(shaped))
    tokens = list(text.tokens)
    tokens[index] = new_token
    return replace(text, tokens=tuple(tokens))
