"""Bundled English→French fixture: lexicon, engines, dictionaries,
sentence generator.

Everything here is deterministic so that offline tests and the default
CLI/service configuration work without any external translator. The
lexicon is injective by construction (validated on load), which gives
dictionary induction a unique ground truth.
"""

from __future__ import annotations

import random
from typing import Optional

from .dictionary import (
    PLAIN,
    POS_KEYED,
    ConfidenceTable,
    WordDictionary,
    dictionary_from_pairs,
)
from .engines import EngineDescriptor, EngineRegistry, MockLexicon
from .evaluation import ACTIONS, NAMES, OBJECTS, PLACES
from .textcore import PosTagger, default_tagger

# Content banks translate 1:1; names map to themselves.
_PLACES_FR = [
    "boulangerie", "bibliothèque", "port", "musée", "jardin", "château",
    "marché", "forêt", "gare", "temple", "pont", "tour", "ferme", "cinéma",
    "hôpital", "école", "hôtel", "magasin", "parc", "moulin",
]
_OBJECTS_FR = [
    "lanterne", "panier", "violon", "échelle", "miroir", "boussole",
    "bouilloire", "ruban", "marteau", "bougie", "seau", "couverture",
    "sifflet", "tonneau", "casque", "ancre", "pelle", "médaillon", "selle",
    "télescope",
]
_ACTIONS_FR = [
    "porta", "peignit", "emprunta", "répara", "polit", "découvrit", "lâcha",
    "échangea", "mesura", "enveloppa", "enterra", "aiguisa", "nettoya",
    "pesa", "garda", "dessina", "compta", "empila", "rinça", "équilibra",
]

_FUNCTION_FR = {
    "the": "la",
    "a": "une",
    "an": "un",
    "in": "dans",
    "on": "sur",
    "at": "à",
    "to": "vers",
    "of": "de",
    "with": "avec",
    "near": "près",
    "and": "et",
    "is": "se",
    "was": "était",
    "went": "alla",
    "go": "aller",
    "did": "fit",
    "do": "faire",
    "admired": "admira",
    "returned": "revint",
    "rested": "reposa",
    "pleased": "plut",
    "heading": "dirige",
    "everyone": "chacun",
    "who": "qui",
    "what": "quoi",
    "where": "où",
    "later": "ensuite",
    "early": "tôt",
    "home": "maison",
    "morning": "matin",
    "hideout": "cachette",
    "store": "boutique",
    "he": "il",
    "she": "elle",
    "they": "ils",
    "it": "cela",
}


def fixture_lexicon_entries() -> dict:
    entries = dict(_FUNCTION_FR)
    entries.update({name: name for name in NAMES})
    entries.update(zip(PLACES, _PLACES_FR))
    entries.update(zip(OBJECTS, _OBJECTS_FR))
    entries.update(zip(ACTIONS, _ACTIONS_FR))
    return entries


def fixture_lexicon(passthrough: str = "copy") -> MockLexicon:
    return MockLexicon(entries=fixture_lexicon_entries(), passthrough=passthrough)


FIXTURE_ENGINE_ID = "mock-en-fr"


def fixture_registry() -> EngineRegistry:
    registry = EngineRegistry()
    registry.register(
        EngineDescriptor(id=FIXTURE_ENGINE_ID, kind="mock", source_lang="en", target_lang="fr"),
        lexicon=fixture_lexicon(),
    )
    return registry


def content_words() -> list[str]:
    return sorted(NAMES + PLACES + OBJECTS + ACTIONS)


def complete_dictionary(
    mode: str = PLAIN, tagger: Optional[PosTagger] = None
) -> tuple[WordDictionary, ConfidenceTable]:
    """Exact dictionary over the whole fixture lexicon."""
    return dictionary_from_pairs(fixture_lexicon_entries(), mode=mode, tagger=tagger)


def content_dictionary(
    mode: str = PLAIN, tagger: Optional[PosTagger] = None
) -> tuple[WordDictionary, ConfidenceTable]:
    """Dictionary restricted to content words.

    Function words score near 1 under rate-ratio induction (they occur in
    nearly every translation either way), so a realistically induced
    dictionary only covers content vocabulary. The evaluation defaults use
    this restriction.
    """
    entries = fixture_lexicon_entries()
    pairs = {w: entries[w] for w in content_words()}
    return dictionary_from_pairs(pairs, mode=mode, tagger=tagger)


EXAMPLE_TEXT = "Alice is heading to the hideout."


def example_dictionary(mode: str = POS_KEYED) -> tuple[WordDictionary, ConfidenceTable]:
    """Four-word dictionary that forces the alice→bob, hideout→store
    substitution chain at ratio 0.3."""
    from .dictionary import RankedEntry

    scores = {"alice": 5.0, "bob": 6.0, "hideout": 4.0, "store": 4.5}
    targets = {"alice": "alice", "bob": "bob", "hideout": "cachette", "store": "boutique"}
    tagger = default_tagger()
    lists = {}
    for word, value in scores.items():
        tag = tagger.tag_word(word) if mode == POS_KEYED else None
        lists[(word, tag)] = (RankedEntry(target_word=targets[word], score=value),)
    dictionary = WordDictionary(mode=mode, lists=lists)
    return dictionary, ConfidenceTable.from_dictionary(dictionary)


_SENTENCE_TEMPLATES = (
    "{name} {action} the {obj} near the {place}.",
    "{name} went to the {place} in the morning.",
    "The {obj} at the {place} pleased {name}.",
    "{name} and {name2} admired the {obj}.",
    "Everyone at the {place} admired the {obj} of {name}.",
)


def fixture_sentences(count: int, seed: int = 0) -> list[str]:
    """Seeded sentences built entirely from lexicon-covered words."""
    rng = random.Random(seed)
    sentences = []
    for _ in range(count):
        template = _SENTENCE_TEMPLATES[rng.randrange(len(_SENTENCE_TEMPLATES))]
        name, name2 = rng.sample(NAMES, 2)
        sentences.append(
            template.format(
                name=name.title(),
                name2=name2.title(),
                place=rng.choice(PLACES),
                obj=rng.choice(OBJECTS),
                action=rng.choice(ACTIONS),
            )
        )
    return sentences
