import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { AppController } from "../src/controller.js";
import { Store } from "../src/state.js";
import {
  DECODE_RESPONSE,
  ENCODE_RESPONSE,
  ENGINES,
  SEND_RESPONSE,
  jsonResponse,
} from "./fixtures.js";

interface Counters {
  send: number;
  decode: number;
  encode: number;
}

function makeApi(
  counters: Counters,
  options: { failSends?: number; failDecodes?: number; encodeDelays?: number[] } = {},
): ApiClient {
  let failSends = options.failSends ?? 0;
  let failDecodes = options.failDecodes ?? 0;
  const delays = [...(options.encodeDelays ?? [])];
  return new ApiClient(async (url) => {
    if (url.endsWith("/engines")) return jsonResponse({ engines: ENGINES });
    if (url === "/v1/sessions") return jsonResponse({ session_id: "s1" });
    if (url.endsWith("/encode")) {
      counters.encode += 1;
      const delay = delays.shift() ?? 0;
      if (delay) await new Promise((r) => setTimeout(r, delay));
      return jsonResponse(ENCODE_RESPONSE);
    }
    if (url.endsWith("/send")) {
      counters.send += 1;
      if (failSends > 0) {
        failSends -= 1;
        return jsonResponse({ detail: "engine unreachable" }, 502);
      }
      return jsonResponse(SEND_RESPONSE);
    }
    if (url.endsWith("/decode")) {
      counters.decode += 1;
      if (failDecodes > 0) {
        failDecodes -= 1;
        return jsonResponse({ detail: "try again" }, 502);
      }
      return jsonResponse(DECODE_RESPONSE);
    }
    throw new Error(`unexpected ${url}`);
  });
}

async function encodedController(counters: Counters, options = {}) {
  const store = new Store();
  const controller = new AppController(makeApi(counters, options), store);
  await controller.loadEngines();
  await controller.draft("Alice is heading to the hideout.");
  await controller.encode("prism-star", 0.3, 1);
  expect(store.current.phase).toBe("encoded");
  return { store, controller };
}

describe("approve idempotence", () => {
  it("a double-click triggers exactly one send", async () => {
    const counters: Counters = { send: 0, decode: 0, encode: 0 };
    const { controller, store } = await encodedController(counters);
    await Promise.all([controller.approveAndSend(), controller.approveAndSend()]);
    expect(counters.send).toBe(1);
    expect(store.current.phase).toBe("decoded");
    expect(store.current.yPub).toBe(SEND_RESPONSE.y_pub);
    expect(store.current.yPri).toBe(DECODE_RESPONSE.y_pri);
  });

  it("approving after success stays a no-op", async () => {
    const counters: Counters = { send: 0, decode: 0, encode: 0 };
    const { controller } = await encodedController(counters);
    await controller.approveAndSend();
    await controller.approveAndSend();
    expect(counters.send).toBe(1);
  });

  it("a failed send allows one retry that sends again", async () => {
    const counters: Counters = { send: 0, decode: 0, encode: 0 };
    const { controller, store } = await encodedController(counters, { failSends: 1 });
    await controller.approveAndSend();
    expect(store.current.error).toContain("502");
    expect(store.current.phase).toBe("encoded");
    await controller.approveAndSend();
    expect(counters.send).toBe(2);
    expect(store.current.phase).toBe("decoded");
  });

  it("a failed decode retries decode only, never re-sending", async () => {
    const counters: Counters = { send: 0, decode: 0, encode: 0 };
    const { controller, store } = await encodedController(counters, { failDecodes: 1 });
    await controller.approveAndSend();
    expect(store.current.phase).toBe("sent");
    await controller.approveAndSend();
    expect(counters.send).toBe(1);
    expect(counters.decode).toBe(2);
    expect(store.current.phase).toBe("decoded");
  });
});

describe("stale responses", () => {
  it("a slow early encode cannot overwrite a newer one", async () => {
    const counters: Counters = { send: 0, decode: 0, encode: 0 };
    const store = new Store();
    const controller = new AppController(
      makeApi(counters, { encodeDelays: [40, 0] }),
      store,
    );
    await controller.loadEngines();
    await controller.draft("Alice is heading to the hideout.");
    const slow = controller.encode("prism-star", 0.9, 1);
    const fast = controller.encode("prism-star", 0.3, 1);
    await Promise.all([slow, fast]);
    // the second call owns the freshest sequence token
    expect(store.current.ratio).toBe(0.3);
    expect(store.current.phase).toBe("encoded");
    expect(counters.encode).toBe(2);
  });
});

describe("encode state guard", () => {
  it("no encode without a session", async () => {
    const counters: Counters = { send: 0, decode: 0, encode: 0 };
    const store = new Store();
    const controller = new AppController(makeApi(counters), store);
    await controller.encode("prism-star", 0.3);
    expect(counters.encode).toBe(0);
  });

  it("no re-encode after send", async () => {
    const counters: Counters = { send: 0, decode: 0, encode: 0 };
    const { controller } = await encodedController(counters, { failDecodes: 1 });
    await controller.approveAndSend(); // leaves phase at "sent"
    await controller.encode("prism-star", 0.5);
    expect(counters.encode).toBe(1);
  });
});
