"""Word translation dictionary induced by probing a translator.

For each source word w we inject it into random corpus sentences,
translate them, and compare how often each target word v appears with and
without the injection. The ratio of the two appearance rates scores v as
a translation of w: words that only show up when w is present score high,
while ubiquitous words (articles and the like) score about 1. Ranked
candidate lists and per-key confidence scores (the head of each list)
come out of the same pass.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .engines import EngineError
from .textcore import (
    PosTag,
    PosTagger,
    TaggedText,
    TokenKind,
    Vocabulary,
    default_tagger,
    detokenize,
    substitute_token,
    tokenize,
)

# key: (source_word, tag) with tag None in plain mode
DictKey = tuple[str, Optional[PosTag]]

PLAIN = "plain"
POS_KEYED = "pos_keyed"

DEFAULT_ALPHA = 1.0
DEFAULT_TOP_K = 10
DEFAULT_MIN_SUPPORT = 10


class DictionaryError(ValueError):
    pass


def _as_key(key: Union[str, DictKey]) -> DictKey:
    if isinstance(key, str):
        return (key.lower(), None)
    word, tag = key
    return (word.lower(), PosTag(tag) if tag is not None else None)


@dataclass
class ProbeStats:
    """Appearance counts gathered while probing the engine.

    Appearance is boolean per sentence: a target word either occurs in a
    translation or it does not, regardless of multiplicity.
    """

    base_counts: Counter = field(default_factory=Counter)
    base_trials: int = 0
    cond_counts: dict = field(default_factory=dict)  # DictKey -> Counter
    cond_trials: dict = field(default_factory=dict)  # DictKey -> int

    def add_base(self, translation_words: set) -> None:
        self.base_trials += 1
        self.base_counts.update(translation_words)

    def add_cond(self, key: DictKey, translation_words: set) -> None:
        self.cond_trials[key] = self.cond_trials.get(key, 0) + 1
        self.cond_counts.setdefault(key, Counter()).update(translation_words)

    def discard_key(self, key: DictKey) -> None:
        self.cond_counts.pop(key, None)
        self.cond_trials.pop(key, None)


def score(stats: ProbeStats, key: Union[str, DictKey], target_word: str, alpha: float = DEFAULT_ALPHA) -> float:
    """Smoothed appearance-rate ratio for one (key, target word) pair.

    p = ((cond_count + a) / (cond_trials + a)) / ((base_count + a) / (base_trials + a))

    The additive smoothing keeps the ratio finite when a target word never
    occurs in the base pool.
    """
    key = _as_key(key)
    if stats.base_trials <= 0:
        raise DictionaryError("no base trials recorded")
    if key not in stats.cond_trials or stats.cond_trials[key] <= 0:
        raise DictionaryError(f"no probe trials for key {key!r}")
    target = target_word.lower()
    cond_rate = (stats.cond_counts[key][target] + alpha) / (stats.cond_trials[key] + alpha)
    base_rate = (stats.base_counts[target] + alpha) / (stats.base_trials + alpha)
    return cond_rate / base_rate


@dataclass(frozen=True)
class RankedEntry:
    target_word: str
    score: float


@dataclass(frozen=True)
class WordDictionary:
    mode: str  # PLAIN | POS_KEYED
    lists: dict  # DictKey -> tuple[RankedEntry, ...]

    def __post_init__(self) -> None:
        if self.mode not in (PLAIN, POS_KEYED):
            raise DictionaryError(f"unknown dictionary mode {self.mode!r}")
        for key, entries in self.lists.items():
            if not entries:
                raise DictionaryError(f"empty candidate list for {key!r}")

    @property
    def source_vocab(self) -> Vocabulary:
        return Vocabulary.of(word for word, _ in self.lists)

    def __len__(self) -> int:
        return len(self.lists)

    def __contains__(self, key: Union[str, DictKey]) -> bool:
        return _as_key(key) in self.lists

    def entries(self, key: Union[str, DictKey]) -> tuple[RankedEntry, ...]:
        k = _as_key(key)
        if k not in self.lists:
            raise DictionaryError(f"key {k!r} not in dictionary")
        return self.lists[k]


@dataclass(frozen=True)
class ConfidenceTable:
    """c(w, s): head score of each candidate list, exactly."""

    scores: dict  # DictKey -> float

    def get(self, key: Union[str, DictKey]) -> Optional[float]:
        return self.scores.get(_as_key(key))

    @classmethod
    def from_dictionary(cls, dictionary: WordDictionary) -> "ConfidenceTable":
        return cls(scores={key: entries[0].score for key, entries in dictionary.lists.items()})


def lookup(dictionary: WordDictionary, key: Union[str, DictKey], rank: int) -> str:
    """Return the rank-th candidate (1-based) for a key."""
    entries = dictionary.entries(key)
    if not 1 <= rank <= len(entries):
        raise DictionaryError(f"rank {rank} out of range for {key!r} (1..{len(entries)})")
    return entries[rank - 1].target_word


def _translation_word_set(engine, text: str) -> set:
    translated = engine.translate(text)
    return {t.surface.lower() for t in tokenize(translated).tokens if t.kind is TokenKind.WORD}


def _word_positions(tagged: TaggedText, tag: Optional[PosTag]) -> list[int]:
    if tag is None:
        return tagged.word_indices()
    return [i for i in tagged.word_indices() if tagged.tags[i] is tag]


def collect_probe_stats(
    corpus: Sequence[str],
    engine,
    vocab: Vocabulary,
    samples_per_word: int,
    mode: str = PLAIN,
    seed: int = 0,
    tagger: Optional[PosTagger] = None,
    resample_limit: int = 200,
) -> ProbeStats:
    """Translate a shared base pool plus per-key injected samples.

    One base pool of ``samples_per_word`` translated sentences serves as
    the denominator for every key. Per key, each sample draws a sentence
    uniformly with replacement, replaces one uniformly chosen word (in
    pos-keyed mode, one with the key's tag, resampling the sentence if it
    has none), and translates the result. Seeding is per key, so results
    do not depend on iteration order.
    """
    if not corpus:
        raise DictionaryError("corpus must be non-empty")
    if samples_per_word < 1:
        raise DictionaryError("samples_per_word must be >= 1")
    tagger = tagger or default_tagger()

    tokenized = [tokenize(sentence) for sentence in corpus]
    if mode == POS_KEYED:
        tokenized = [tagger.tag(t) for t in tokenized]

    stats = ProbeStats()
    base_rng = random.Random(f"{seed}:base")
    for _ in range(samples_per_word):
        sentence = corpus[base_rng.randrange(len(corpus))]
        stats.add_base(_translation_word_set(engine, sentence))

    keys: list[DictKey]
    if mode == PLAIN:
        keys = [(w, None) for w in vocab.sorted()]
    else:
        keys = [(w, tagger.tag_word(w)) for w in vocab.sorted()]

    for key in keys:
        word, tag = key
        rng = random.Random(f"{seed}:{word}:{tag.value if tag else '-'}")
        try:
            for _ in range(samples_per_word):
                positions: list[int] = []
                tagged = None
                for _attempt in range(resample_limit):
                    idx = rng.randrange(len(corpus))
                    tagged = tokenized[idx]
                    positions = _word_positions(tagged, tag)
                    if positions:
                        break
                if not positions:
                    # corpus offers no slot for this tag; key ends unsupported
                    break
                position = positions[rng.randrange(len(positions))]
                probe = substitute_token(tagged, position, word)
                stats.add_cond(key, _translation_word_set(engine, detokenize(probe)))
        except EngineError:
            stats.discard_key(key)
            raise
    return stats


def rank_from_stats(
    stats: ProbeStats,
    mode: str,
    alpha: float = DEFAULT_ALPHA,
    top_k: int = DEFAULT_TOP_K,
    min_support: int = DEFAULT_MIN_SUPPORT,
) -> tuple[WordDictionary, ConfidenceTable]:
    """Turn probe counts into ranked candidate lists and confidences.

    Candidates are the words observed in a key's translations, ordered by
    descending score with lexicographic tie-break, truncated to ``top_k``.
    Keys with fewer than ``min_support`` trials are dropped as unreliable.
    """
    lists = {}
    for key, counts in stats.cond_counts.items():
        trials = stats.cond_trials.get(key, 0)
        if trials < min_support or not counts:
            continue
        scored = [(-score(stats, key, v, alpha), v) for v in counts]
        scored.sort()
        entries = tuple(RankedEntry(target_word=v, score=-neg) for neg, v in scored[:top_k])
        lists[key] = entries
    dictionary = WordDictionary(mode=mode, lists=lists)
    return dictionary, ConfidenceTable.from_dictionary(dictionary)


def build_dictionary(
    corpus: Sequence[str],
    engine,
    vocab: Vocabulary,
    samples_per_word: int,
    mode: str = PLAIN,
    seed: int = 0,
    alpha: float = DEFAULT_ALPHA,
    top_k: int = DEFAULT_TOP_K,
    min_support: int = DEFAULT_MIN_SUPPORT,
    tagger: Optional[PosTagger] = None,
) -> tuple[WordDictionary, ConfidenceTable]:
    """Full induction pass: probe the engine, then rank the counts."""
    if mode not in (PLAIN, POS_KEYED):
        raise DictionaryError(f"unknown dictionary mode {mode!r}")
    stats = collect_probe_stats(
        corpus, engine, vocab, samples_per_word, mode=mode, seed=seed, tagger=tagger
    )
    effective_min = min(min_support, samples_per_word)
    return rank_from_stats(stats, mode, alpha=alpha, top_k=top_k, min_support=effective_min)


def dictionary_from_pairs(
    pairs: dict,
    mode: str = PLAIN,
    tagger: Optional[PosTagger] = None,
    head_score: float = 2.0,
) -> tuple[WordDictionary, ConfidenceTable]:
    """Exact dictionary from known source→target pairs.

    Used for fixture dictionaries where the ground-truth translation of
    every word is known (e.g. derived from a mock lexicon). In pos-keyed
    mode each word is keyed under the tag the tagger assigns it.
    """
    tagger = tagger or default_tagger()
    lists = {}
    for src, tgt in pairs.items():
        tag = tagger.tag_word(src) if mode == POS_KEYED else None
        lists[(src.lower(), tag)] = (RankedEntry(target_word=tgt.lower(), score=head_score),)
    dictionary = WordDictionary(mode=mode, lists=lists)
    return dictionary, ConfidenceTable.from_dictionary(dictionary)


TSV_HEADER = "source_word\tpos\trank\ttarget_word\tscore"


def save_dictionary(dictionary: WordDictionary, confidence: ConfidenceTable, path) -> None:
    """Write the TSV form; scores keep full precision so load is exact.

    The confidence table is recoverable from the head rows, so only the
    ranked lists are serialized.
    """
    rows = []
    for (word, tag), entries in dictionary.lists.items():
        pos = tag.value if tag is not None else "-"
        for rank, entry in enumerate(entries, start=1):
            rows.append((word, pos, rank, entry.target_word, repr(entry.score)))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(TSV_HEADER + "\n")
        for row in rows:
            fh.write("\t".join(str(c) for c in row) + "\n")


def load_dictionary(path) -> tuple[WordDictionary, ConfidenceTable]:
    """Parse a dictionary TSV; errors name the offending line."""
    lists: dict[DictKey, list[RankedEntry]] = {}
    modes = set()
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != TSV_HEADER:
            raise DictionaryError(f"{path}:1: bad header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 5:
                raise DictionaryError(f"{path}:{lineno}: expected 5 columns, got {len(cols)}")
            word, pos, rank_s, target, score_s = cols
            try:
                rank = int(rank_s)
                value = float(score_s)
            except ValueError:
                raise DictionaryError(f"{path}:{lineno}: non-numeric rank or score") from None
            if not math.isfinite(value) or value <= 0:
                raise DictionaryError(f"{path}:{lineno}: score must be finite and positive")
            tag = None if pos == "-" else PosTag(pos)
            modes.add(tag is not None)
            key = (word, tag)
            lists.setdefault(key, [])
            if rank != len(lists[key]) + 1:
                raise DictionaryError(f"{path}:{lineno}: rank {rank} out of sequence for {word!r}")
            lists[key].append(RankedEntry(target_word=target, score=value))
    if len(modes) > 1:
        raise DictionaryError(f"{path}: mixed plain and pos-keyed rows")
    mode = POS_KEYED if modes and modes.pop() else PLAIN
    dictionary = WordDictionary(mode=mode, lists={k: tuple(v) for k, v in lists.items()})
    return dictionary, ConfidenceTable.from_dictionary(dictionary)
