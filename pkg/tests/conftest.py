from __future__ import annotations

import pytest

from prism import fixtures
from prism.dictionary import PLAIN, POS_KEYED
from prism.pipeline import Pipeline


@pytest.fixture
def registry():
    return fixtures.fixture_registry()


@pytest.fixture
def mock_engine(registry):
    return registry.implementation(fixtures.FIXTURE_ENGINE_ID)


@pytest.fixture
def complete_pipeline(registry):
    plain_d, _ = fixtures.complete_dictionary(PLAIN)
    pos_d, pos_c = fixtures.complete_dictionary(POS_KEYED)
    return Pipeline(
        registry=registry,
        plain_dictionary=plain_d,
        pos_dictionary=pos_d,
        confidence=pos_c,
    )


@pytest.fixture
def content_pipeline(registry):
    plain_d, _ = fixtures.content_dictionary(PLAIN)
    pos_d, pos_c = fixtures.content_dictionary(POS_KEYED)
    return Pipeline(
        registry=registry,
        plain_dictionary=plain_d,
        pos_dictionary=pos_d,
        confidence=pos_c,
    )
