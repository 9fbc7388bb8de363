"""Command-line surface: one subcommand per pipeline stage.

Exit codes: 0 success, 1 validation/usage error, 2 engine or transport
failure. Every randomized stage takes --seed. The bundled en→fr mock
engine and fixture dictionaries are used whenever no registry or
dictionary file is given, so the whole pipeline runs offline out of the
box.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import uuid
from datetime import datetime, timezone
from pathlib import Path

from . import evaluation, fixtures
from .dictionary import (
    PLAIN,
    POS_KEYED,
    DictionaryError,
    Vocabulary,
    build_dictionary,
    load_dictionary,
    save_dictionary,
)
from .engines import EngineError, RegistryError, load_registry
from .evaluation import aupqc as aupqc_fn
from .evaluation import generate_synthetic_corpus, load_curve, qs_at, sweep, write_report
from .mechanisms import (
    MIXED,
    PRISM_R,
    PRISM_STAR,
    MechanismError,
    MechanismParams,
    import_history,
)
from .pipeline import NODECODE, Pipeline

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ENGINE = 2

_METHOD_ALIASES = {
    "prism-r": PRISM_R,
    "prism_r": PRISM_R,
    "prism-star": PRISM_STAR,
    "prism_star": PRISM_STAR,
    "mixed": MIXED,
    "nodecode": NODECODE,
}


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # spec'd behavior: usage problems print help text and exit 1, not 2
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message)


def _default_seed() -> int:
    return int(os.environ.get("PRISM_SEED", "0"))


def _read_text(args) -> str:
    if getattr(args, "text", None) is not None:
        return args.text
    if getattr(args, "infile", None):
        return Path(args.infile).read_text(encoding="utf-8").strip()
    raise CliError("provide --in FILE or --text STRING")


def _registry(args):
    if getattr(args, "registry", None):
        return load_registry(args.registry)
    return fixtures.fixture_registry()


def _method(name: str) -> str:
    try:
        return _METHOD_ALIASES[name.lower()]
    except KeyError:
        raise CliError(f"unknown method {name!r}") from None


def _pipeline(args, method: str) -> Pipeline:
    registry = _registry(args)
    plain_d = plain_c = pos_d = pos_c = None
    if getattr(args, "dict", None):
        dictionary, confidence = load_dictionary(args.dict)
        if dictionary.mode == PLAIN:
            plain_d, plain_c = dictionary, confidence
        else:
            pos_d, pos_c = dictionary, confidence
    if plain_d is None and method == PRISM_R:
        plain_d, plain_c = fixtures.complete_dictionary(PLAIN)
    if pos_d is None and method in (PRISM_STAR, MIXED, NODECODE):
        pos_d, pos_c = fixtures.complete_dictionary(POS_KEYED)
    confidence = pos_c or plain_c
    return Pipeline(
        registry=registry,
        plain_dictionary=plain_d,
        pos_dictionary=pos_d,
        confidence=confidence,
    )


def _session_payload(result, method, args) -> dict:
    return {
        "session_id": uuid.uuid4().hex,
        "created_at": datetime.now(timezone.utc).isoformat(),
        "method": method,
        "ratio": args.ratio,
        "seed": args.seed,
        "x_pri": result.x_pri,
        "x_pub": result.x_pub,
        "y_pub": result.y_pub,
        "y_pri": result.y_pri,
        "epsilon": result.encode_result.epsilon,
        "history": result.encode_result.history.to_json(),
        "misses": [m.to_json() for m in result.decode_result.misses]
        if result.decode_result
        else [],
    }


def _write_session(payload: dict, session_dir: str) -> Path:
    directory = Path(session_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{payload['session_id']}.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2)
    return path


def cmd_build_dict(args) -> int:
    registry = _registry(args)
    engine = registry.implementation(args.engine)
    corpus = [
        line.strip()
        for line in Path(args.corpus).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    if args.vocab:
        words = [
            w.strip().lower()
            for w in Path(args.vocab).read_text(encoding="utf-8").splitlines()
            if w.strip()
        ]
    else:
        from collections import Counter

        from .textcore import TokenKind, tokenize

        counts = Counter(
            t.surface.lower()
            for sentence in corpus
            for t in tokenize(sentence).tokens
            if t.kind is TokenKind.WORD
        )
        words = [w for w, _ in counts.most_common(args.vocab_size)]
    vocab = Vocabulary.of(words)
    mode = POS_KEYED if args.mode == "pos-keyed" else PLAIN
    dictionary, confidence = build_dictionary(
        corpus,
        engine,
        vocab,
        samples_per_word=args.samples,
        mode=mode,
        seed=args.seed,
        top_k=args.top_k,
        min_support=args.min_support,
    )
    save_dictionary(dictionary, confidence, args.out)
    print(f"wrote {len(dictionary)} keys to {args.out}")
    return EXIT_OK


def cmd_encode(args) -> int:
    method = _method(args.method)
    if method == NODECODE:
        raise CliError("nodecode is a run/eval mode, not an encoder")
    pipeline = _pipeline(args, method)
    params = MechanismParams(method=method, ratio=args.ratio, beta=args.beta, seed=args.seed)
    result = pipeline.encode(_read_text(args), params)
    print(result.x_pub)
    if result.epsilon is not None:
        print(f"epsilon: {result.epsilon:.6f}", file=sys.stderr)
    if result.warning:
        print(f"warning: {result.warning}", file=sys.stderr)
    if args.session_out:
        payload = {
            "session_id": uuid.uuid4().hex,
            "created_at": datetime.now(timezone.utc).isoformat(),
            "method": method,
            "ratio": args.ratio,
            "seed": args.seed,
            "x_pri": _read_text(args),
            "x_pub": result.x_pub,
            "epsilon": result.epsilon,
            "history": result.history.to_json(),
        }
        with open(args.session_out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False, indent=2)
    return EXIT_OK


def cmd_translate(args) -> int:
    registry = _registry(args)
    print(registry.translate(args.engine, _read_text(args)))
    if args.audit:
        registry.audit.save(args.audit)
    return EXIT_OK


def cmd_decode(args) -> int:
    from .mechanisms import SubstitutionHistory, decode

    with open(args.session, encoding="utf-8") as fh:
        payload = json.load(fh)
    history = SubstitutionHistory.from_json(payload["history"])
    method = payload.get("method", PRISM_R)
    pipeline = _pipeline(args, method)
    dictionary = pipeline.dictionary_for(method)
    y_pub = _read_text(args)
    result = decode(y_pub, history, dictionary)
    print(result.y_pri)
    for miss in result.misses:
        print(f"miss: {miss.to_json()}", file=sys.stderr)
    return EXIT_OK


def cmd_run(args) -> int:
    method = _method(args.method)
    pipeline = _pipeline(args, method)
    result = pipeline.run(
        _read_text(args),
        method,
        args.ratio,
        args.engine,
        seed=args.seed,
        beta=args.beta,
        decode_output=not args.no_decode,
    )
    print(result.y_pri)
    if result.encode_result.epsilon is not None:
        print(f"epsilon: {result.encode_result.epsilon:.6f}", file=sys.stderr)
    path = _write_session(_session_payload(result, method, args), args.session_dir)
    print(f"session: {path}", file=sys.stderr)
    return EXIT_OK


def cmd_eval_sweep(args) -> int:
    method = _method(args.mechanism)
    registry = _registry(args)
    pos_d, pos_c = fixtures.content_dictionary(POS_KEYED)
    plain_d, _plain_c = fixtures.content_dictionary(PLAIN)
    pipeline = Pipeline(
        registry=registry,
        plain_dictionary=plain_d,
        pos_dictionary=pos_d,
        confidence=pos_c,
    )
    grid = [float(v) for v in args.grid.split(",") if v]
    documents, items = generate_synthetic_corpus(args.docs, seed=args.seed)
    curve = sweep(pipeline, method, grid, documents, items, args.engine, seed=args.seed)
    summary = write_report(curve, args.out_dir, thresholds=args.qs_at, basename=args.basename)
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_aupqc(args) -> int:
    curve = load_curve(args.curve)
    area = aupqc_fn(curve)
    print(f"{area:.6g}")
    if args.qs_at:
        for p in args.qs_at:
            result = qs_at(curve, p)
            suffix = " (extrapolated)" if result.extrapolated else ""
            print(f"qs@{p:g}: {result.value:.6g}{suffix}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = {}
    config_path = args.config or os.environ.get("PRISM_CONFIG")
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            config = json.load(fh)
    if not getattr(args, "registry", None) and config.get("registry"):
        args.registry = config["registry"]
    if not getattr(args, "dict", None) and config.get("dictionary"):
        args.dict = config["dictionary"]
    host = args.host or config.get("bind", {}).get("host", "127.0.0.1")
    port = args.port or int(config.get("bind", {}).get("port", 8765))
    ui_dir = args.ui_dir or config.get("ui_dir")
    pipeline = _pipeline(args, MIXED)
    if pipeline.plain_dictionary is None:
        plain_d, _ = fixtures.complete_dictionary(PLAIN)
        pipeline.plain_dictionary = plain_d
    app = create_app(pipeline, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="prism", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, seed=True):
        p.add_argument("--registry", help="engine registry config JSON (default: bundled mock)")
        if seed:
            p.add_argument("--seed", type=int, default=_default_seed())

    p = sub.add_parser("build-dict", help="induce a dictionary by probing an engine")
    add_common(p)
    p.add_argument("--corpus", required=True, help="one sentence per line")
    p.add_argument("--vocab", help="one source word per line")
    p.add_argument("--vocab-size", type=int, default=50, help="top-N corpus words when --vocab absent")
    p.add_argument("--engine", default=fixtures.FIXTURE_ENGINE_ID)
    p.add_argument("--samples", type=int, default=200, help="probe samples per word")
    p.add_argument("--mode", choices=["plain", "pos-keyed"], default="plain")
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--min-support", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_dict)

    p = sub.add_parser("encode", help="mask a text; print x_pub")
    add_common(p)
    p.add_argument("--method", default="prism-star")
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--dict", help="dictionary TSV (default: bundled fixture)")
    p.add_argument("--in", dest="infile")
    p.add_argument("--text")
    p.add_argument("--session-out", help="write the session secret (history) here")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("translate", help="send text to an engine")
    add_common(p, seed=False)
    p.add_argument("--engine", default=fixtures.FIXTURE_ENGINE_ID)
    p.add_argument("--in", dest="infile")
    p.add_argument("--text")
    p.add_argument("--audit", help="append audit records to this NDJSON file")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("decode", help="restore a translation using a session export")
    add_common(p, seed=False)
    p.add_argument("--session", required=True, help="session JSON from encode/run")
    p.add_argument("--dict")
    p.add_argument("--in", dest="infile")
    p.add_argument("--text")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("run", help="encode, translate and decode in one go")
    add_common(p)
    p.add_argument("--method", default="prism-star")
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--engine", default=fixtures.FIXTURE_ENGINE_ID)
    p.add_argument("--dict")
    p.add_argument("--in", dest="infile")
    p.add_argument("--text")
    p.add_argument("--no-decode", action="store_true", help="skip restoration (ablation)")
    p.add_argument("--session-dir", default="prism-sessions")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval-sweep", help="scan the trade-off and write curve/report/figure")
    add_common(p)
    p.add_argument("--mechanism", default="prism-star")
    p.add_argument("--grid", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    p.add_argument("--docs", type=int, default=100)
    p.add_argument("--engine", default=fixtures.FIXTURE_ENGINE_ID)
    p.add_argument("--qs-at", type=float, action="append", default=None)
    p.add_argument("--out-dir", default="eval-report")
    p.add_argument("--basename", default="curve")
    p.set_defaults(func=cmd_eval_sweep)

    p = sub.add_parser("aupqc", help="area under a saved trade-off curve")
    p.add_argument("curve", help="curve CSV (param,pps,qs)")
    p.add_argument("--qs-at", type=float, action="append", default=None)
    p.set_defaults(func=cmd_aupqc)

    p = sub.add_parser("serve", help="start the local HTTP service")
    add_common(p)
    p.add_argument("--config", help="service config JSON (env PRISM_CONFIG)")
    p.add_argument("--dict")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--ui-dir", help="static single-page app directory")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "qs_at", None) is None and hasattr(args, "qs_at"):
            args.qs_at = [0.5]
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MechanismError, DictionaryError, RegistryError, evaluation.EvaluationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EngineError as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
