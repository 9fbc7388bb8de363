from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from prism import fixtures
from prism.engines import payload_hash
from prism.pipeline import Pipeline
from prism.service import create_app

ENGINE = fixtures.FIXTURE_ENGINE_ID


@pytest.fixture
def example_client():
    registry = fixtures.fixture_registry()
    pos_d, pos_c = fixtures.example_dictionary()
    pipeline = Pipeline(registry=registry, pos_dictionary=pos_d, confidence=pos_c)
    return TestClient(create_app(pipeline)), pipeline


@pytest.fixture
def client(complete_pipeline):
    return TestClient(create_app(complete_pipeline)), complete_pipeline


def _create(client, text):
    response = client.post("/v1/sessions", json={"text": text})
    assert response.status_code == 200
    return response.json()["session_id"]


class TestSessionChain:
    def test_example_chain(self, example_client):
        client, _ = example_client
        sid = _create(client, fixtures.EXAMPLE_TEXT)

        encoded = client.post(
            f"/v1/sessions/{sid}/encode",
            json={"method": "prism-star", "ratio": 0.3, "seed": 1},
        ).json()
        assert encoded["x_pub"] == "Bob is heading to the store."
        subs = {s["position"]: s for s in encoded["substitutions"]}
        assert subs[0]["original"] == "Alice" and subs[0]["substitute"] == "bob"
        assert subs[5]["original"] == "hideout" and subs[5]["substitute"] == "store"
        # spans cover the substituted tokens exactly
        assert encoded["x_pub"][slice(*subs[0]["span"])] == "Bob"
        assert encoded["x_pub"][slice(*subs[5]["span"])] == "store"
        assert "epsilon" not in encoded

        sent = client.post(f"/v1/sessions/{sid}/send", json={"engine": ENGINE}).json()
        assert sent["y_pub"] == "Bob se dirige vers la boutique."

        decoded = client.post(f"/v1/sessions/{sid}/decode").json()
        assert decoded["y_pri"] == "Alice se dirige vers la cachette."
        assert decoded["misses"] == []

        view = client.get(f"/v1/sessions/{sid}").json()
        assert view["state"] == "decoded"
        assert view["x_pri"] == fixtures.EXAMPLE_TEXT

    def test_epsilon_returned_for_randomized_encode(self, client):
        c, pipeline = client
        sid = _create(c, "Alice carried the lantern.")
        encoded = c.post(
            f"/v1/sessions/{sid}/encode",
            json={"method": "prism-r", "ratio": 0.5, "seed": 3},
        ).json()
        assert encoded["epsilon"] > 0

    def test_parity_with_pipeline_run(self, client):
        c, pipeline = client
        text = "Emma repaired the kettle near the station."
        sid = _create(c, text)
        c.post(f"/v1/sessions/{sid}/encode", json={"method": "prism-star", "ratio": 0.4, "seed": 11})
        c.post(f"/v1/sessions/{sid}/send", json={"engine": ENGINE})
        y_pri = c.post(f"/v1/sessions/{sid}/decode").json()["y_pri"]
        direct = pipeline.run(text, "prism_star", 0.4, ENGINE, seed=11)
        assert y_pri == direct.y_pri


class TestStateMachine:
    def test_decode_before_send_is_409(self, client):
        c, _ = client
        sid = _create(c, "Alice carried the lantern.")
        c.post(f"/v1/sessions/{sid}/encode", json={"method": "prism-star", "ratio": 0.4})
        assert c.post(f"/v1/sessions/{sid}/decode").status_code == 409

    def test_send_before_encode_is_409(self, client):
        c, _ = client
        sid = _create(c, "Alice carried the lantern.")
        assert c.post(f"/v1/sessions/{sid}/send", json={"engine": ENGINE}).status_code == 409

    def test_reencode_after_send_is_409(self, client):
        c, _ = client
        sid = _create(c, "Alice carried the lantern.")
        c.post(f"/v1/sessions/{sid}/encode", json={"method": "prism-star", "ratio": 0.4})
        c.post(f"/v1/sessions/{sid}/send", json={"engine": ENGINE})
        response = c.post(
            f"/v1/sessions/{sid}/encode", json={"method": "prism-star", "ratio": 0.5}
        )
        assert response.status_code == 409

    def test_reencode_replaces_draft_and_audit_sees_final_payload(self, client):
        c, pipeline = client
        sid = _create(c, "Alice carried the lantern near the museum.")
        first = c.post(
            f"/v1/sessions/{sid}/encode",
            json={"method": "prism-star", "ratio": 0.2, "seed": 5},
        ).json()
        second = c.post(
            f"/v1/sessions/{sid}/encode",
            json={"method": "prism-star", "ratio": 0.8, "seed": 5},
        ).json()
        assert first["x_pub"] != second["x_pub"]
        c.post(f"/v1/sessions/{sid}/send", json={"engine": ENGINE})
        hashes = {r.payload_hash for r in pipeline.registry.audit.records()}
        assert payload_hash(second["x_pub"]) in hashes
        assert payload_hash(first["x_pub"]) not in hashes

    def test_unknown_session_404(self, client):
        c, _ = client
        assert c.post("/v1/sessions/nope/encode", json={"method": "prism-r", "ratio": 0.5}).status_code == 404
        assert c.get("/v1/sessions/nope").status_code == 404

    def test_delete_removes_session_and_history(self, client):
        c, _ = client
        sid = _create(c, "Alice carried the lantern.")
        assert c.delete(f"/v1/sessions/{sid}").json() == {"deleted": True}
        assert c.get(f"/v1/sessions/{sid}").status_code == 404


class TestValidation:
    def test_ratio_out_of_range_is_422(self, client):
        c, _ = client
        sid = _create(c, "Alice carried the lantern.")
        response = c.post(f"/v1/sessions/{sid}/encode", json={"method": "prism-r", "ratio": 1.5})
        assert response.status_code == 422

    def test_unknown_method_is_422(self, client):
        c, _ = client
        sid = _create(c, "Alice carried the lantern.")
        response = c.post(f"/v1/sessions/{sid}/encode", json={"method": "banana", "ratio": 0.5})
        assert response.status_code == 422

    def test_unknown_engine_is_422(self, client):
        c, _ = client
        sid = _create(c, "Alice carried the lantern.")
        c.post(f"/v1/sessions/{sid}/encode", json={"method": "prism-star", "ratio": 0.4})
        response = c.post(f"/v1/sessions/{sid}/send", json={"engine": "nope"})
        assert response.status_code == 422

    def test_empty_text_rejected(self, client):
        c, _ = client
        assert c.post("/v1/sessions", json={"text": ""}).status_code == 422


class TestInfoEndpoints:
    def test_engines_listing(self, client):
        c, _ = client
        engines = c.get("/v1/engines").json()["engines"]
        assert any(e["id"] == ENGINE for e in engines)

    def test_dict_stats(self, client):
        c, pipeline = client
        stats = c.get("/v1/dict/stats").json()
        assert stats["mode"] == "pos_keyed"
        assert stats["entries"] == len(pipeline.pos_dictionary)
        assert stats["vocab_size"] == pipeline.pos_dictionary.source_vocab.size

    def test_audit_endpoint(self, client):
        c, _ = client
        sid = _create(c, "Alice carried the lantern.")
        c.post(f"/v1/sessions/{sid}/encode", json={"method": "prism-star", "ratio": 0.4})
        c.post(f"/v1/sessions/{sid}/send", json={"engine": ENGINE})
        records = c.get("/v1/audit").json()
        assert len(records) == 1
        assert set(records[0]) == {"timestamp", "engine_id", "payload_hash", "payload_len"}
