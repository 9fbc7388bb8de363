from __future__ import annotations

import json

import pytest

from prism import fixtures
from prism.cli import main


def run_cli(*argv):
    return main(list(argv))


class TestRun:
    def test_full_pipeline_writes_session(self, tmp_path, capsys):
        letter = tmp_path / "letter.txt"
        letter.write_text(fixtures.EXAMPLE_TEXT, encoding="utf-8")
        code = run_cli(
            "run",
            "--method", "prism-star",
            "--ratio", "0.3",
            "--engine", "mock-en-fr",
            "--in", str(letter),
            "--seed", "1",
            "--session-dir", str(tmp_path / "sessions"),
        )
        out = capsys.readouterr().out
        assert code == 0
        assert out.splitlines()[0].endswith(".")
        exports = list((tmp_path / "sessions").glob("*.json"))
        assert len(exports) == 1
        payload = json.loads(exports[0].read_text())
        assert payload["x_pri"] == fixtures.EXAMPLE_TEXT
        assert payload["history"]["records"]

    def test_no_decode_mode(self, tmp_path, capsys):
        code = run_cli(
            "run",
            "--method", "nodecode",
            "--ratio", "0.5",
            "--text", "Alice carried the lantern to the museum.",
            "--seed", "2",
            "--session-dir", str(tmp_path),
        )
        assert code == 0
        out = capsys.readouterr().out.splitlines()[0]
        # still the translator's output of the masked text, never restored
        assert "lanterne" not in out or "musée" not in out


class TestValidationErrors:
    def test_ratio_out_of_range_exits_1(self, capsys):
        assert run_cli("encode", "--ratio", "1.5", "--text", "hello world") == 1
        assert "error" in capsys.readouterr().err

    def test_unknown_flag_exits_1(self, capsys):
        assert run_cli("run", "--frobnicate", "--ratio", "0.5", "--text", "x") == 1

    def test_unknown_method_exits_1(self, capsys):
        assert run_cli("run", "--method", "banana", "--ratio", "0.5", "--text", "x") == 1

    def test_missing_input_exits_1(self, capsys):
        assert run_cli("encode", "--ratio", "0.5") == 1


class TestEncodeDecode:
    def test_encode_translate_decode_matches_run(self, tmp_path, capsys):
        session = tmp_path / "session.json"
        code = run_cli(
            "encode",
            "--method", "prism-star",
            "--ratio", "0.3",
            "--text", fixtures.EXAMPLE_TEXT,
            "--seed", "1",
            "--session-out", str(session),
        )
        assert code == 0
        x_pub = capsys.readouterr().out.strip()

        code = run_cli("translate", "--engine", "mock-en-fr", "--text", x_pub)
        assert code == 0
        y_pub = capsys.readouterr().out.strip()

        code = run_cli("decode", "--session", str(session), "--text", y_pub)
        assert code == 0
        y_pri = capsys.readouterr().out.strip()

        engine = fixtures.fixture_registry().implementation("mock-en-fr")
        assert y_pri == engine.translate(fixtures.EXAMPLE_TEXT)

    def test_translate_appends_audit(self, tmp_path, capsys):
        audit = tmp_path / "audit.ndjson"
        run_cli("translate", "--text", "Alice carried the lantern", "--audit", str(audit))
        capsys.readouterr()
        lines = [l for l in audit.read_text().splitlines() if l.strip()]
        assert len(lines) == 1
        assert "payload_hash" in json.loads(lines[0])


class TestBuildDict:
    def test_build_and_reuse(self, tmp_path, capsys):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("\n".join(fixtures.fixture_sentences(60, seed=5)), encoding="utf-8")
        vocab = tmp_path / "vocab.txt"
        vocab.write_text("\n".join(fixtures.content_words()[:6]), encoding="utf-8")
        out = tmp_path / "dict.tsv"
        code = run_cli(
            "build-dict",
            "--corpus", str(corpus),
            "--vocab", str(vocab),
            "--samples", "25",
            "--mode", "pos-keyed",
            "--seed", "7",
            "--out", str(out),
        )
        assert code == 0
        assert "wrote 6 keys" in capsys.readouterr().out

        code = run_cli(
            "encode",
            "--method", "prism-star",
            "--ratio", "0.5",
            "--dict", str(out),
            "--text", "Alice carried the lantern.",
            "--seed", "3",
        )
        assert code == 0

    def test_samples_zero_exits_1(self, tmp_path, capsys):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("a sentence here.", encoding="utf-8")
        code = run_cli(
            "build-dict", "--corpus", str(corpus), "--samples", "0", "--out", str(tmp_path / "d.tsv")
        )
        assert code == 1


class TestAupqc:
    def test_fixture_value(self, tmp_path, capsys):
        curve = tmp_path / "curve.csv"
        curve.write_text("param,pps,qs\n0.2,0.2,0.9\n0.5,0.5,0.7\n", encoding="utf-8")
        assert run_cli("aupqc", str(curve)) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "0.42"
        assert "qs@0.5" in out

    def test_missing_file_exits_1(self, capsys):
        assert run_cli("aupqc", "/nonexistent/curve.csv") == 1


class TestEvalSweep:
    def test_writes_report_files(self, tmp_path, capsys):
        out_dir = tmp_path / "report"
        code = run_cli(
            "eval-sweep",
            "--mechanism", "prism-star",
            "--grid", "0.3,0.6",
            "--docs", "4",
            "--seed", "13",
            "--out-dir", str(out_dir),
        )
        assert code == 0
        assert (out_dir / "curve.csv").exists()
        assert (out_dir / "curve_summary.json").exists()
        assert (out_dir / "curve.png").stat().st_size > 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["mechanism"] == "prism_star"
        assert 0.0 <= summary["aupqc"] <= 1.0


class TestEngineErrors:
    def test_transport_failure_exits_2(self, tmp_path, capsys):
        registry = tmp_path / "registry.json"
        registry.write_text(
            json.dumps(
                {
                    "engines": [
                        {
                            "id": "dead-remote",
                            "kind": "remote",
                            "source_lang": "en",
                            "target_lang": "fr",
                            "endpoint": {
                                "url": "http://127.0.0.1:9/translate",
                                "max_retries": 0,
                                "backoff": 0.01,
                                "timeout": 0.2,
                            },
                        }
                    ]
                }
            ),
            encoding="utf-8",
        )
        code = run_cli(
            "translate",
            "--registry", str(registry),
            "--engine", "dead-remote",
            "--text", "hello there",
        )
        assert code == 2
        assert "engine error" in capsys.readouterr().err
