/** Responses captured verbatim from the local service running the
 * bundled example dictionary (encode seed 1, ratio 0.3). */

import type { DecodeResponse, EncodeResponse, EngineInfo, SendResponse } from "../src/types.js";

export const ENCODE_RESPONSE: EncodeResponse = {
  x_pub: "Bob is heading to the store.",
  substitutions: [
    { position: 0, original: "Alice", substitute: "bob", tag: "PROPN", span: [0, 3] },
    { position: 5, original: "hideout", substitute: "store", tag: "NOUN", span: [22, 27] },
  ],
  method: "prism-star",
};

export const SEND_RESPONSE: SendResponse = { y_pub: "Bob se dirige vers la boutique." };

export const DECODE_RESPONSE: DecodeResponse = {
  y_pri: "Alice se dirige vers la cachette.",
  misses: [],
};

export const ENGINES: EngineInfo[] = [
  { id: "mock-en-fr", kind: "mock", source_lang: "en", target_lang: "fr" },
];

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
