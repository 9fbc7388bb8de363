"""Exhaustive verification of the randomized encoder's privacy bound.

These routines enumerate every replacement pattern of the randomized
encoder on tiny inputs, producing its exact output distribution. The
distribution is checked against the closed form

    Pr[output = s] = r^c (1-r)^(n-c) (1/|V|)^c (1 + r / (|V| (1-r)))^(n-c)

with c the Hamming distance between input and output, and against the
differential-privacy bound e^epsilon = (r + |V|(1-r)) / r over all
neighboring input pairs. Enumeration is independent of the encoder
implementation and of the closed form, so it can arbitrate between them.
"""

from __future__ import annotations

import itertools
import math
from typing import Dict, Sequence, Tuple

from .mechanisms import epsilon_for

MAX_N = 6
MAX_VOCAB = 6


class BoundsError(ValueError):
    pass


def _check_bounds(n: int, vocab_size: int) -> None:
    if n < 1 or n > MAX_N:
        raise BoundsError(f"text length {n} outside exhaustive bounds 1..{MAX_N}")
    if vocab_size < 1 or vocab_size > MAX_VOCAB:
        raise BoundsError(f"vocab size {vocab_size} outside exhaustive bounds 1..{MAX_VOCAB}")


def encoder_distribution(
    x: Sequence[str], vocab: Sequence[str], ratio: float
) -> Dict[Tuple[str, ...], float]:
    """Exact output distribution of the randomized encoder on ``x``.

    Sums over every keep/replace pattern and every draw assignment, which
    is feasible only for small n and |V|.
    """
    words = tuple(x)
    vocab_list = sorted(set(vocab))
    _check_bounds(len(words), len(vocab_list))
    if not 0.0 < ratio < 1.0:
        raise BoundsError(f"ratio must be in (0, 1), got {ratio}")
    n = len(words)
    v = len(vocab_list)
    dist: Dict[Tuple[str, ...], float] = {}
    for pattern in itertools.product((False, True), repeat=n):
        replaced = [i for i, flag in enumerate(pattern) if flag]
        base_p = ratio ** len(replaced) * (1.0 - ratio) ** (n - len(replaced))
        draw_p = base_p / (v ** len(replaced))
        for draws in itertools.product(vocab_list, repeat=len(replaced)):
            out = list(words)
            for i, word in zip(replaced, draws):
                out[i] = word
            key = tuple(out)
            dist[key] = dist.get(key, 0.0) + draw_p
    return dist


def closed_form_probability(
    x: Sequence[str], s: Sequence[str], vocab_size: int, ratio: float
) -> float:
    """Closed-form encoder probability via the Hamming distance c.

    Requires every word of ``x`` to be drawable (inside the vocabulary),
    as the derivation folds self-draws into the kept positions.
    """
    if len(x) != len(s):
        raise BoundsError("texts must have equal length")
    n = len(x)
    c = sum(1 for a, b in zip(x, s) if a != b)
    v = vocab_size
    return (
        ratio**c
        * (1.0 - ratio) ** (n - c)
        * (1.0 / v) ** c
        * (1.0 + ratio / (v * (1.0 - ratio))) ** (n - c)
    )


def dp_ratio_check(n: int, vocab_size: int, ratio: float) -> float:
    """Max output-probability ratio over all neighboring text pairs.

    Enumerates all texts over a synthetic vocabulary, all single-word
    neighbors and all outputs; asserts the maximum equals
    (r + |V|(1-r)) / r within 1e-9 and never exceeds e^epsilon. Returns
    the maximum observed ratio.
    """
    _check_bounds(n, vocab_size)
    vocab = [f"w{i}" for i in range(vocab_size)]
    distributions: Dict[Tuple[str, ...], Dict[Tuple[str, ...], float]] = {}
    for text in itertools.product(vocab, repeat=n):
        distributions[text] = encoder_distribution(text, vocab, ratio)

    max_ratio = 0.0
    for text, dist in distributions.items():
        for slot in range(n):
            for other in vocab:
                if other == text[slot]:
                    continue
                neighbor = text[:slot] + (other,) + text[slot + 1 :]
                neighbor_dist = distributions[neighbor]
                for output, p in dist.items():
                    q = neighbor_dist[output]
                    max_ratio = max(max_ratio, p / q)

    expected = (ratio + vocab_size * (1.0 - ratio)) / ratio
    if abs(max_ratio - expected) > 1e-9:
        raise AssertionError(
            f"max neighboring ratio {max_ratio!r} != theoretical bound {expected!r}"
        )
    if max_ratio > math.exp(epsilon_for(ratio, vocab_size)) * (1.0 + 1e-9):
        raise AssertionError("observed ratio exceeds e^epsilon")
    return max_ratio
