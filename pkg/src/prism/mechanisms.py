"""Word-substitution encoders and the matching decoder.

Two encoders are provided. The randomized one replaces each word token
independently with probability r by a uniform draw from the dictionary's
source vocabulary, which yields a provable epsilon-differential-privacy
bound of ln((r + |V|(1-r)) / r) on the masked text. The confidence-guided
one substitutes the ceil(r*n) tokens whose dictionary translations are
most reliable, swapping in unused same-POS words with the highest
confidence; it trades the formal bound for better restoration quality.
A beta-mixture picks between the two with one seeded coin flip.

The decoder walks the substitution history, locates each substitute's
candidate translations in the translated text and swaps the original
word's translation back in. The history never leaves the machine.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from dataclasses import replace as dc_replace
from typing import Optional

from .dictionary import POS_KEYED, PLAIN, ConfidenceTable, WordDictionary
from .textcore import (
    PosTag,
    PosTagger,
    TokenKind,
    apply_case,
    default_tagger,
    detokenize,
    make_token,
    pos_tag,
    substitute_token,
    tokenize,
)

PRISM_R = "prism_r"
PRISM_STAR = "prism_star"
MIXED = "mixed"

_METHODS = (PRISM_R, PRISM_STAR, MIXED)


class MechanismError(ValueError):
    pass


@dataclass(frozen=True)
class MechanismParams:
    method: str
    ratio: float
    beta: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.method not in _METHODS:
            raise MechanismError(f"unknown method {self.method!r}")
        if not 0.0 < self.ratio < 1.0:
            raise MechanismError(f"ratio must be in (0, 1), got {self.ratio}")
        if not 0.0 <= self.beta <= 1.0:
            raise MechanismError(f"beta must be in [0, 1], got {self.beta}")


@dataclass(frozen=True)
class SubstitutionRecord:
    position: int
    original: str  # surface as it appeared, case preserved
    substitute: str  # lowercase dictionary word
    tag: Optional[PosTag] = None


@dataclass(frozen=True)
class SubstitutionHistory:
    """The user-side secret: which token was swapped for which word.

    ``source_len`` is the total token count of the tokenized source text;
    positions index into that token list.
    """

    records: tuple[SubstitutionRecord, ...]
    source_len: int

    def __post_init__(self) -> None:
        positions = [r.position for r in self.records]
        if len(set(positions)) != len(positions):
            raise MechanismError("history positions must be distinct")
        if any(not 0 <= p < self.source_len for p in positions):
            raise MechanismError("history position out of range")

    def __len__(self) -> int:
        return len(self.records)

    def to_json(self) -> dict:
        return {
            "source_len": self.source_len,
            "records": [
                {
                    "position": r.position,
                    "original": r.original,
                    "substitute": r.substitute,
                    "tag": r.tag.value if r.tag else None,
                }
                for r in self.records
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SubstitutionHistory":
        records = tuple(
            SubstitutionRecord(
                position=r["position"],
                original=r["original"],
                substitute=r["substitute"],
                tag=PosTag(r["tag"]) if r.get("tag") else None,
            )
            for r in data["records"]
        )
        return cls(records=records, source_len=data["source_len"])


@dataclass(frozen=True)
class EncodeResult:
    x_pub: str
    history: SubstitutionHistory
    epsilon: Optional[float]
    method: str
    branch: Optional[str] = None  # set by the mixture
    mixture: Optional[dict] = None  # {"beta": ..., "epsilon_r": ...}
    warning: Optional[str] = None


@dataclass(frozen=True)
class DecodeMiss:
    record: SubstitutionRecord
    reason: str

    def to_json(self) -> dict:
        return {
            "position": self.record.position,
            "original": self.record.original,
            "substitute": self.record.substitute,
            "tag": self.record.tag.value if self.record.tag else None,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class DecodeResult:
    y_pri: str
    misses: tuple[DecodeMiss, ...]


def epsilon_for(ratio: float, vocab_size: int) -> float:
    """Differential-privacy bound of the randomized encoder.

    epsilon = ln((r + |V|(1 - r)) / r); strictly decreasing in r and 0 in
    the limit r -> 1.
    """
    if not 0.0 < ratio < 1.0:
        raise MechanismError(f"ratio must be in (0, 1), got {ratio}")
    if vocab_size < 1:
        raise MechanismError(f"vocab_size must be >= 1, got {vocab_size}")
    return math.log((ratio + vocab_size * (1.0 - ratio)) / ratio)


def ratio_for_epsilon(epsilon: float, vocab_size: int) -> float:
    """Inverse of ``epsilon_for``: the ratio that spends a given budget."""
    if epsilon <= 0.0:
        raise MechanismError(f"epsilon must be > 0, got {epsilon}")
    if vocab_size < 1:
        raise MechanismError(f"vocab_size must be >= 1, got {vocab_size}")
    return vocab_size / (math.expm1(epsilon) + vocab_size)


def encode_prism_r(
    text: str,
    dictionary: WordDictionary,
    params: MechanismParams,
    tagger: Optional[PosTagger] = None,
    record_tags: bool = False,
) -> EncodeResult:
    """Randomized encoder: per word token, one coin and one uniform draw.

    The draw may reproduce the original word; the bound's accounting
    requires self-draws to stay in. Punctuation and numbers are never
    touched and do not count toward n. Draw order is token order, so a
    seed pins the whole encode.
    """
    if params.method != PRISM_R:
        raise MechanismError(f"params.method must be {PRISM_R!r}")
    if len(dictionary) == 0:
        raise MechanismError("dictionary is empty")
    tagged = tokenize(text)
    if record_tags:
        tagged = pos_tag(tagged, tagger)
    vocab_list = dictionary.source_vocab.sorted()
    rng = random.Random(params.seed)
    records = []
    for i, token in enumerate(tagged.tokens):
        if token.kind is not TokenKind.WORD:
            continue
        if rng.random() < params.ratio:
            substitute = vocab_list[rng.randrange(len(vocab_list))]
            records.append(
                SubstitutionRecord(
                    position=i,
                    original=token.surface,
                    substitute=substitute,
                    tag=tagged.tags[i] if record_tags else None,
                )
            )
            tagged = substitute_token(tagged, i, substitute)
    history = SubstitutionHistory(records=tuple(records), source_len=len(tagged))
    return EncodeResult(
        x_pub=detokenize(tagged),
        history=history,
        epsilon=epsilon_for(params.ratio, len(vocab_list)),
        method=PRISM_R,
    )


def _substitution_target(ratio: float, n_words: int) -> int:
    # smallest k with k >= r*n, guarded against float fuzz in r*n
    return max(0, math.ceil(ratio * n_words - 1e-9))


def encode_prism_star(
    text: str,
    dictionary: WordDictionary,
    confidence: ConfidenceTable,
    params: MechanismParams,
    tagger: Optional[PosTagger] = None,
) -> EncodeResult:
    """Confidence-guided encoder.

    Word tokens present in the POS-keyed dictionary are visited in
    decreasing confidence (ties by position) and swapped for the unused
    same-tag word with the highest confidence, skipping the token's own
    word. Encoding stops once ceil(r * n) substitutions are made, n being
    the count of word tokens. Fully deterministic; no privacy bound.
    """
    if params.method != PRISM_STAR:
        raise MechanismError(f"params.method must be {PRISM_STAR!r}")
    if dictionary.mode != POS_KEYED:
        raise MechanismError("confidence-guided encoding needs a pos-keyed dictionary")
    tagged = pos_tag(tokenize(text), tagger)
    word_positions = tagged.word_indices()
    target = _substitution_target(params.ratio, len(word_positions))

    candidates = []
    for i in word_positions:
        key = (tagged.tokens[i].surface.lower(), tagged.tags[i])
        c = confidence.get(key)
        if c is not None:
            candidates.append((-c, i))
    candidates.sort()

    if not candidates:
        history = SubstitutionHistory(records=(), source_len=len(tagged))
        return EncodeResult(
            x_pub=detokenize(tagged),
            history=history,
            epsilon=None,
            method=PRISM_STAR,
            warning="no dictionary words in text; nothing substituted",
        )

    # per-tag candidate substitutes, best confidence first, ties lexicographic
    by_tag: dict[PosTag, list[tuple[float, str]]] = {}
    for (word, tag), c in confidence.scores.items():
        if tag is not None:
            by_tag.setdefault(tag, []).append((-c, word))
    for entries in by_tag.values():
        entries.sort()

    used: set[str] = set()
    records = []
    for _neg_c, i in candidates:
        if len(records) >= target:
            break
        original = tagged.tokens[i].surface
        tag = tagged.tags[i]
        substitute = next(
            (w for _c, w in by_tag.get(tag, []) if w != original.lower() and w not in used),
            None,
        )
        if substitute is None:
            continue
        records.append(SubstitutionRecord(position=i, original=original, substitute=substitute, tag=tag))
        used.add(substitute)
        tagged = substitute_token(tagged, i, substitute)

    warning = None
    if len(records) < target:
        warning = f"substitution target not met: {len(records)} of {target}"
    history = SubstitutionHistory(records=tuple(records), source_len=len(tagged))
    return EncodeResult(
        x_pub=detokenize(tagged),
        history=history,
        epsilon=None,
        method=PRISM_STAR,
        warning=warning,
    )


def encode_mixed(
    text: str,
    dictionary: WordDictionary,
    confidence: ConfidenceTable,
    params: MechanismParams,
    tagger: Optional[PosTagger] = None,
) -> EncodeResult:
    """One seeded coin: confidence-guided with probability beta, else
    randomized.

    The result is tagged with the branch taken. A single epsilon is only
    reported when the randomized branch ran; otherwise the mixture
    metadata carries (beta, epsilon of the randomized branch) because the
    mixture has no closed-form bound.
    """
    if params.method != MIXED:
        raise MechanismError(f"params.method must be {MIXED!r}")
    if dictionary.mode != POS_KEYED:
        raise MechanismError("the mixture needs a pos-keyed dictionary")
    rng = random.Random(params.seed)
    take_star = rng.random() < params.beta
    sub_seed = rng.getrandbits(32)
    epsilon_r = epsilon_for(params.ratio, dictionary.source_vocab.size)
    if take_star:
        delegated = encode_prism_star(
            text,
            dictionary,
            confidence,
            MechanismParams(method=PRISM_STAR, ratio=params.ratio, seed=sub_seed),
            tagger,
        )
        epsilon = None
    else:
        delegated = encode_prism_r(
            text,
            dictionary,
            MechanismParams(method=PRISM_R, ratio=params.ratio, seed=sub_seed),
            tagger,
            record_tags=True,
        )
        epsilon = delegated.epsilon
    return EncodeResult(
        x_pub=delegated.x_pub,
        history=delegated.history,
        epsilon=epsilon,
        method=MIXED,
        branch=delegated.method,
        mixture={"beta": params.beta, "epsilon_r": epsilon_r},
        warning=delegated.warning,
    )


def _lookup_entries(dictionary: WordDictionary, word: str, tag: Optional[PosTag], tagger: PosTagger):
    """Candidate list for a word under the dictionary's mode.

    Records from the randomized encoder carry no tag; against a pos-keyed
    dictionary the context-free tagger supplies the key tag, which matches
    how pos-keyed dictionaries are built (one key per word, under the tag
    the same tagger assigns).
    """
    if dictionary.mode == PLAIN:
        key = (word.lower(), None)
    else:
        key = (word.lower(), tag if tag is not None else tagger.tag_word(word))
    if key not in dictionary:
        return None
    return dictionary.entries(key)


def decode(
    y_pub: str,
    history: SubstitutionHistory,
    dictionary: WordDictionary,
    tagger: Optional[PosTagger] = None,
) -> DecodeResult:
    """Restore the original words' translations in the translated text.

    For each history record (w -> u), the substitute's candidate
    translations are scanned in rank order; the first candidate present as
    a whole token (case-insensitive, unconsumed) is replaced by the top
    translation of w, keeping the token's case shape. When the token at
    the recorded source position matches the candidate it is preferred
    over the leftmost occurrence: order-preserving engines then restore
    exactly even if the same word occurs elsewhere. Records that find no
    candidate, or whose words are missing from the dictionary, are
    reported as misses and leave the text unchanged.
    """
    tagger = tagger or default_tagger()
    tagged = tokenize(y_pub)
    lower_surfaces = [t.surface.lower() for t in tagged.tokens]
    consumed: set[int] = set()
    misses = []
    for record in history.records:
        candidates = _lookup_entries(dictionary, record.substitute, record.tag, tagger)
        if candidates is None:
            misses.append(DecodeMiss(record, "substitute not in dictionary"))
            continue
        restoration = _lookup_entries(dictionary, record.original, record.tag, tagger)
        if restoration is None:
            misses.append(DecodeMiss(record, "original not in dictionary"))
            continue
        replacement = restoration[0].target_word
        hit = None
        for entry in candidates:
            needle = entry.target_word.lower()
            occurrences = [
                j
                for j, surface in enumerate(lower_surfaces)
                if j not in consumed and surface == needle
            ]
            if not occurrences:
                continue
            hit = record.position if record.position in occurrences else occurrences[0]
            break
        if hit is None:
            misses.append(DecodeMiss(record, "no candidate found in translation"))
            continue
        consumed.add(hit)
        shaped = apply_case(replacement, tagged.tokens[hit].case_shape)
        tokens = list(tagged.tokens)
        tokens[hit] = make_token(shaped)
        tagged = dc_replace(tagged, tokens=tuple(tokens))
        lower_surfaces[hit] = shaped.lower()
    return DecodeResult(y_pri=detokenize(tagged), misses=tuple(misses))


def export_history(history: SubstitutionHistory, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(history.to_json(), fh, ensure_ascii=False, indent=2)


def import_history(path) -> SubstitutionHistory:
    with open(path, encoding="utf-8") as fh:
        return SubstitutionHistory.from_json(json.load(fh))
