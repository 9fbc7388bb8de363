/** Session flow logic, kept DOM-free so it can be tested directly. */

import { ApiClient, ApiError } from "./api.js";
import { Store } from "./state.js";

export class AppController {
  private sendInFlight = false;

  constructor(
    private readonly api: ApiClient,
    readonly store: Store,
  ) {}

  async loadEngines(): Promise<void> {
    try {
      const { engines } = await this.api.engines();
      const current = this.store.current.engine;
      this.store.update({
        engines,
        engine: current ?? engines[0]?.id ?? null,
        error: null,
      });
    } catch (err) {
      this.store.update({ error: describe(err) });
    }
  }

  /** Create (or re-create) the session for the pasted text. */
  async draft(text: string): Promise<void> {
    this.store.reset();
    this.store.update({ text, busy: true });
    const token = this.store.beginRequest();
    try {
      const { session_id } = await this.api.createSession(text);
      if (!this.store.isCurrent(token)) return;
      this.store.update({ sessionId: session_id, phase: "drafted", busy: false });
    } catch (err) {
      if (!this.store.isCurrent(token)) return;
      this.store.update({ error: describe(err), busy: false });
    }
  }

  /** Re-encode the draft; safe to call repeatedly while tuning. */
  async encode(method: string, ratio: number, seed = 0): Promise<void> {
    const { sessionId, phase } = this.store.current;
    if (!sessionId || (phase !== "drafted" && phase !== "encoded")) return;
    this.store.update({ method, ratio, busy: true, error: null });
    const token = this.store.beginRequest();
    try {
      const response = await this.api.encode(sessionId, { method, ratio, seed });
      if (!this.store.isCurrent(token)) return; // stale slider position
      this.store.update({
        phase: "encoded",
        xPub: response.x_pub,
        substitutions: response.substitutions,
        epsilon: response.epsilon ?? null,
        branch: response.branch ?? null,
        warning: response.warning ?? null,
        busy: false,
      });
    } catch (err) {
      if (!this.store.isCurrent(token)) return;
      this.store.update({ error: describe(err), busy: false });
    }
  }

  /** One outbound call, ever, per approval; double-clicks are no-ops.
   * After a successful send the restored text is fetched immediately so
   * both panes fill together. A retry after a failed decode never
   * re-sends: the session is already in the sent phase. */
  async approveAndSend(): Promise<void> {
    const { sessionId, phase, engine } = this.store.current;
    if (!sessionId || !engine) return;
    if (phase === "sent") {
      // the send already went through; only the restore step is retried
      await this.decodeOnly();
      return;
    }
    if (this.sendInFlight || phase !== "encoded") return;
    this.sendInFlight = true;
    this.store.update({ busy: true, error: null });
    try {
      const sent = await this.api.send(sessionId, engine);
      this.store.update({ phase: "sent", yPub: sent.y_pub });
    } catch (err) {
      // 409/502 and transport problems: the send did not go through
      this.sendInFlight = false;
      this.store.update({ error: describe(err), busy: false });
      return;
    }
    await this.decodeOnly();
  }

  private decodeInFlight = false;

  private async decodeOnly(): Promise<void> {
    const { sessionId } = this.store.current;
    if (!sessionId || this.decodeInFlight) return;
    this.decodeInFlight = true;
    this.store.update({ busy: true, error: null });
    try {
      const decoded = await this.api.decode(sessionId);
      this.store.update({
        phase: "decoded",
        yPri: decoded.y_pri,
        misses: decoded.misses,
        busy: false,
      });
    } catch (err) {
      this.store.update({ error: describe(err), busy: false });
    } finally {
      this.decodeInFlight = false;
    }
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return err.status ? `service error ${err.status}: ${err.message}` : err.message;
  }
  return err instanceof Error ? err.message : String(err);
}
