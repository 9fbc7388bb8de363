/** View state mirroring the service's session, plus a sequence counter
 * that discards stale responses (at most one request wins per session). */

import type {
  DecodeMiss,
  EngineInfo,
  SessionPhase,
  Substitution,
} from "./types.js";

export interface ViewState {
  sessionId: string | null;
  phase: SessionPhase;
  text: string;
  method: string;
  ratio: number;
  engine: string | null;
  engines: EngineInfo[];
  xPub: string | null;
  substitutions: Substitution[];
  epsilon: number | null;
  branch: string | null;
  warning: string | null;
  yPub: string | null;
  yPri: string | null;
  misses: DecodeMiss[];
  error: string | null;
  busy: boolean;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    phase: "drafted",
    text: "",
    method: "prism-star",
    ratio: 0.3,
    engine: null,
    engines: [],
    xPub: null,
    substitutions: [],
    epsilon: null,
    branch: null,
    warning: null,
    yPub: null,
    yPri: null,
    misses: [],
    error: null,
    busy: false,
  };
}

export type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState = initialState();
  private listeners: Listener[] = [];
  private sequence = 0;

  get current(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  reset(): void {
    const { engines, engine, method, ratio } = this.state;
    this.state = { ...initialState(), engines, engine, method, ratio };
    this.sequence += 1; // orphan any in-flight request
    for (const listener of this.listeners) listener(this.state);
  }

  /** Start a request; the returned token must still be current when the
   * response arrives, otherwise the response is stale and dropped. */
  beginRequest(): number {
    this.sequence += 1;
    return this.sequence;
  }

  isCurrent(token: number): boolean {
    return token === this.sequence;
  }
}
