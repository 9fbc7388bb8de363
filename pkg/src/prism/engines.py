"""Uniform access to black-box translators.

Two engine kinds exist: a deterministic word-by-word mock for offline
tests and a generic JSON-over-HTTP client for real services. Every
outbound call is recorded in an append-only audit log holding the hash of
the exact payload, so a run can prove that only masked text left the
machine.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

import requests

from .textcore import TokenKind, apply_case, tokenize


class EngineError(Exception):
    """Base class for translation failures."""


class TransportError(EngineError):
    """Retryable network-level failure; carries the engine id."""


class ProtocolError(EngineError):
    """The remote service answered with something we cannot use."""


class RegistryError(ValueError):
    """Invalid registration or unknown engine id."""


@dataclass(frozen=True)
class EngineDescriptor:
    id: str
    kind: str  # "mock" | "remote"
    source_lang: str
    target_lang: str
    endpoint_config: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in ("mock", "remote"):
            raise RegistryError(f"unknown engine kind {self.kind!r}")
        if self.source_lang == self.target_lang:
            raise RegistryError("source and target language must differ")


@dataclass(frozen=True)
class MockLexicon:
    """One-to-one source→target word map backing the mock engine.

    Injectivity is enforced so that dictionary induction against the mock
    has a unique ground truth. ``passthrough`` controls unknown words:
    "copy" keeps them verbatim, "drop" removes them.
    """

    entries: dict
    passthrough: str = "copy"

    def __post_init__(self) -> None:
        if self.passthrough not in ("copy", "drop"):
            raise ValueError(f"unknown passthrough policy {self.passthrough!r}")
        seen: dict[str, str] = {}
        for src, tgt in self.entries.items():
            if tgt in seen:
                raise ValueError(f"lexicon not injective: {seen[tgt]!r} and {src!r} both map to {tgt!r}")
            seen[tgt] = src

    def lookup(self, word: str) -> Optional[str]:
        return self.entries.get(word.lower())


@dataclass(frozen=True)
class AuditRecord:
    timestamp: str
    engine_id: str
    payload_hash: str
    payload_len: int

    def to_json(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "engine_id": self.engine_id,
            "payload_hash": self.payload_hash,
            "payload_len": self.payload_len,
        }


def payload_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class AuditLog:
    """Append-only, thread-safe log of outbound payload digests."""

    def __init__(self) -> None:
        self._records: list[AuditRecord] = []
        self._lock = threading.Lock()

    def append(self, engine_id: str, payload: str) -> AuditRecord:
        record = AuditRecord(
            timestamp=datetime.now(timezone.utc).isoformat(),
            engine_id=engine_id,
            payload_hash=payload_hash(payload),
            payload_len=len(payload),
        )
        with self._lock:
            self._records.append(record)
        return record

    def records(self) -> list[AuditRecord]:
        with self._lock:
            return list(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def save(self, path) -> None:
        with open(path, "a", encoding="utf-8") as fh:
            for record in self.records():
                fh.write(json.dumps(record.to_json(), ensure_ascii=False) + "\n")

    @classmethod
    def load(cls, path) -> "AuditLog":
        log = cls()
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    log._records.append(AuditRecord(**json.loads(line)))
        return log


class MockEngine:
    """Pure word-by-word translator over an injective lexicon.

    Token order and case shapes are preserved; punctuation and numbers are
    copied through untouched.
    """

    def __init__(self, lexicon: MockLexicon) -> None:
        self.lexicon = lexicon

    def translate(self, text: str) -> str:
        tagged = tokenize(text)
        parts: list[tuple[str, str]] = []  # (separator, surface)
        for token, sep in zip(tagged.tokens, tagged.separators):
            if token.kind is not TokenKind.WORD:
                parts.append((sep, token.surface))
                continue
            target = self.lexicon.lookup(token.surface)
            if target is None:
                if self.lexicon.passthrough == "drop":
                    continue
                target = token.surface.lower()
            parts.append((sep, apply_case(target, token.case_shape)))
        if parts:
            parts[0] = ("", parts[0][1])
        return "".join(sep + surface for sep, surface in parts)


class RemoteEngine:
    """Generic JSON-over-HTTP translator client.

    ``endpoint_config`` keys:
      url (required), text_field, source_field, target_field,
      response_field, prompt_template, timeout, max_retries, backoff.
    A prompt template may reference ``[Language]`` and ``[Source Text]``;
    it is applied verbatim before sending.
    """

    def __init__(self, descriptor: EngineDescriptor) -> None:
        cfg = descriptor.endpoint_config
        if "url" not in cfg:
            raise RegistryError(f"remote engine {descriptor.id!r} needs endpoint_config.url")
        self.descriptor = descriptor
        self.url = cfg["url"]
        self.text_field = cfg.get("text_field", "text")
        self.source_field = cfg.get("source_field", "source_lang")
        self.target_field = cfg.get("target_field", "target_lang")
        self.response_field = cfg.get("response_field", "text")
        self.prompt_template = cfg.get("prompt_template")
        self.timeout = float(cfg.get("timeout", 10.0))
        self.max_retries = int(cfg.get("max_retries", 2))
        self.backoff = float(cfg.get("backoff", 0.5))

    def outbound_text(self, text: str) -> str:
        if not self.prompt_template:
            return text
        return self.prompt_template.replace("[Language]", self.descriptor.target_lang).replace(
            "[Source Text]", text
        )

    def translate(self, text: str) -> str:
        payload = {
            self.text_field: self.outbound_text(text),
            self.source_field: self.descriptor.source_lang,
            self.target_field: self.descriptor.target_lang,
        }
        last_error: Optional[Exception] = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff * 2 ** (attempt - 1))
            try:
                response = requests.post(self.url, json=payload, timeout=self.timeout)
            except requests.RequestException as exc:
                last_error = exc
                continue
            if response.status_code >= 500:
                last_error = ProtocolError(f"{self.descriptor.id}: server error {response.status_code}")
                continue
            if response.status_code != 200:
                raise ProtocolError(f"{self.descriptor.id}: unexpected status {response.status_code}")
            try:
                body = response.json()
                result = body[self.response_field]
            except (ValueError, KeyError) as exc:
                raise ProtocolError(f"{self.descriptor.id}: malformed response: {exc}") from exc
            if not isinstance(result, str):
                raise ProtocolError(f"{self.descriptor.id}: response field is not text")
            return result
        raise TransportError(f"{self.descriptor.id}: transport failed after retries: {last_error}")


class EngineRegistry:
    """Engine lookup by id plus the shared audit log."""

    def __init__(self, audit: Optional[AuditLog] = None) -> None:
        self._descriptors: dict[str, EngineDescriptor] = {}
        self._impls: dict[str, object] = {}
        self.audit = audit or AuditLog()

    def register(self, descriptor: EngineDescriptor, lexicon: Optional[MockLexicon] = None) -> str:
        if descriptor.id in self._descriptors:
            raise RegistryError(f"duplicate engine id {descriptor.id!r}")
        if descriptor.kind == "mock":
            if lexicon is None:
                raise RegistryError(f"mock engine {descriptor.id!r} needs a lexicon")
            impl = MockEngine(lexicon)
        else:
            impl = RemoteEngine(descriptor)
        self._descriptors[descriptor.id] = descriptor
        self._impls[descriptor.id] = impl
        return descriptor.id

    def get(self, engine_id: str) -> EngineDescriptor:
        try:
            return self._descriptors[engine_id]
        except KeyError:
            raise RegistryError(f"unknown engine id {engine_id!r}") from None

    def implementation(self, engine_id: str):
        self.get(engine_id)
        return self._impls[engine_id]

    def list(self) -> list[EngineDescriptor]:
        return [self._descriptors[k] for k in sorted(self._descriptors)]

    def mock_lexicon(self, engine_id: str) -> Optional[MockLexicon]:
        impl = self.implementation(engine_id)
        return impl.lexicon if isinstance(impl, MockEngine) else None

    def translate(self, engine_id: str, text: str) -> str:
        """Translate ``text``, auditing exactly one outbound payload.

        The audit record is appended before the attempt so that a failed
        remote call still leaves evidence of what was about to leave.
        """
        if not text:
            raise ValueError("cannot translate empty text")
        impl = self.implementation(engine_id)
        outbound = impl.outbound_text(text) if isinstance(impl, RemoteEngine) else text
        self.audit.append(engine_id, outbound)
        return impl.translate(text)


def load_lexicon_tsv(path) -> dict:
    entries: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            try:
                src, tgt = line.split("\t")
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad lexicon row {line!r}") from exc
            entries[src.lower()] = tgt.lower()
    return entries


def registry_from_config(config: dict, base_dir=None) -> EngineRegistry:
    """Build a registry from a config mapping: ``{"engines": [...]}``.

    Mock engines take their lexicon from an inline ``lexicon`` map, a
    ``lexicon_path`` TSV, or ``"fixture": "en-fr"`` for the bundled one.
    """
    from pathlib import Path

    registry = EngineRegistry()
    for entry in config.get("engines", []):
        descriptor = EngineDescriptor(
            id=entry["id"],
            kind=entry["kind"],
            source_lang=entry["source_lang"],
            target_lang=entry["target_lang"],
            endpoint_config=entry.get("endpoint", {}),
        )
        lexicon = None
        if descriptor.kind == "mock":
            passthrough = entry.get("passthrough", "copy")
            if "lexicon" in entry:
                entries = {k.lower(): v.lower() for k, v in entry["lexicon"].items()}
            elif "lexicon_path" in entry:
                path = Path(entry["lexicon_path"])
                if base_dir is not None and not path.is_absolute():
                    path = Path(base_dir) / path
                entries = load_lexicon_tsv(path)
            elif entry.get("fixture") == "en-fr":
                from .fixtures import fixture_lexicon_entries

                entries = fixture_lexicon_entries()
            else:
                raise RegistryError(f"mock engine {descriptor.id!r} has no lexicon source")
            lexicon = MockLexicon(entries=entries, passthrough=passthrough)
        registry.register(descriptor, lexicon)
    return registry


def load_registry(path) -> EngineRegistry:
    from pathlib import Path

    with open(path, encoding="utf-8") as fh:
        config = json.load(fh)
    return registry_from_config(config, base_dir=Path(path).parent)
