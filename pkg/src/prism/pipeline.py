"""End-to-end orchestration: encode, translate through an engine, decode.

Keeps the sensitive text and the substitution history on this side of the
engine boundary; only the masked text is handed to the registry's
translate call (and thus the audit log).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .dictionary import ConfidenceTable, WordDictionary
from .engines import EngineRegistry, payload_hash
from .mechanisms import (
    MIXED,
    PRISM_R,
    PRISM_STAR,
    DecodeResult,
    EncodeResult,
    MechanismParams,
    decode,
    encode_mixed,
    encode_prism_r,
    encode_prism_star,
)
from .textcore import PosTagger, TokenKind, default_tagger, tokenize

NODECODE = "nodecode"


@dataclass(frozen=True)
class PipelineResult:
    x_pri: str
    x_pub: str
    y_pub: str
    y_pri: str
    encode_result: EncodeResult
    decode_result: Optional[DecodeResult]  # None when decoding was skipped


class Pipeline:
    """Bundles the dictionaries, tagger and engine registry for runs.

    ``method`` accepts the two encoders, the mixture, and "nodecode",
    which encodes with the confidence-guided encoder but skips the final
    restoration step (the ablation baseline).
    """

    def __init__(
        self,
        registry: EngineRegistry,
        plain_dictionary: Optional[WordDictionary] = None,
        pos_dictionary: Optional[WordDictionary] = None,
        confidence: Optional[ConfidenceTable] = None,
        tagger: Optional[PosTagger] = None,
    ) -> None:
        self.registry = registry
        self.plain_dictionary = plain_dictionary
        self.pos_dictionary = pos_dictionary
        self.confidence = confidence
        self.tagger = tagger or default_tagger()

    def _require(self, value, what: str):
        if value is None:
            raise ValueError(f"pipeline is missing {what}")
        return value

    def dictionary_for(self, method: str) -> WordDictionary:
        if method == PRISM_R:
            return self._require(self.plain_dictionary, "a plain dictionary")
        return self._require(self.pos_dictionary, "a pos-keyed dictionary")

    def encode(self, text: str, params: MechanismParams) -> EncodeResult:
        if params.method == PRISM_R:
            return encode_prism_r(text, self.dictionary_for(PRISM_R), params, self.tagger)
        if params.method == PRISM_STAR:
            return encode_prism_star(
                text,
                self.dictionary_for(PRISM_STAR),
                self._require(self.confidence, "a confidence table"),
                params,
                self.tagger,
            )
        if params.method == MIXED:
            return encode_mixed(
                text,
                self.dictionary_for(MIXED),
                self._require(self.confidence, "a confidence table"),
                params,
                self.tagger,
            )
        raise ValueError(f"unknown method {params.method!r}")

    def decode(self, y_pub: str, encode_result: EncodeResult) -> DecodeResult:
        dictionary = self.dictionary_for(
            encode_result.branch if encode_result.method == MIXED else encode_result.method
        )
        return decode(y_pub, encode_result.history, dictionary, self.tagger)

    def run(
        self,
        text: str,
        method: str,
        ratio: float,
        engine_id: str,
        seed: int = 0,
        beta: float = 0.0,
        decode_output: bool = True,
    ) -> PipelineResult:
        encode_method = PRISM_STAR if method == NODECODE else method
        if method == NODECODE:
            decode_output = False
        params = MechanismParams(method=encode_method, ratio=ratio, beta=beta, seed=seed)
        encoded = self.encode(text, params)
        y_pub = self.registry.translate(engine_id, encoded.x_pub)
        decoded = self.decode(y_pub, encoded) if decode_output else None
        return PipelineResult(
            x_pri=text,
            x_pub=encoded.x_pub,
            y_pub=y_pub,
            y_pri=decoded.y_pri if decoded else y_pub,
            encode_result=encoded,
            decode_result=decoded,
        )


def leaked_history_tokens(result: PipelineResult) -> set:
    """History originals that would leak if they appeared outbound.

    Tokens of original words that also survive in the masked text are not
    secrets; everything else must stay off the wire.
    """
    x_pub_tokens = {t.surface.lower() for t in tokenize(result.x_pub).tokens}
    secrets = set()
    for record in result.encode_result.history.records:
        for token in tokenize(record.original).tokens:
            if token.kind is TokenKind.WORD and token.surface.lower() not in x_pub_tokens:
                secrets.add(token.surface.lower())
    return secrets


def audit_matches_runs(registry: EngineRegistry, results) -> bool:
    """True iff the audit log's payload hashes are exactly the x_pub set."""
    audited = {r.payload_hash for r in registry.audit.records()}
    expected = {payload_hash(r.x_pub) for r in results}
    return audited == expected
