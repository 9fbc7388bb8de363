/** Wire types mirrored from the local service. The UI never derives
 * privacy information itself; everything here comes back from /v1. */

export interface Substitution {
  position: number;
  original: string;
  substitute: string;
  tag: string | null;
  /** Character offsets [start, end) into x_pub. */
  span: [number, number];
}

export interface EncodeResponse {
  x_pub: string;
  substitutions: Substitution[];
  method: string;
  epsilon?: number;
  branch?: string;
  mixture?: { beta: number; epsilon_r: number };
  warning?: string;
}

export interface SendResponse {
  y_pub: string;
}

export interface DecodeMiss {
  position: number;
  original: string;
  substitute: string;
  tag: string | null;
  reason: string;
}

export interface DecodeResponse {
  y_pri: string;
  misses: DecodeMiss[];
}

export interface EngineInfo {
  id: string;
  kind: string;
  source_lang: string;
  target_lang: string;
}

export type SessionPhase = "drafted" | "encoded" | "sent" | "decoded";
