import { describe, expect, it } from "vitest";

import { highlightedRanges, markMisses, segmentBySpans } from "../src/highlight.js";
import { ENCODE_RESPONSE } from "./fixtures.js";

describe("preview segmentation", () => {
  it("highlight ranges equal the service's substitution spans exactly", () => {
    const segments = segmentBySpans(ENCODE_RESPONSE.x_pub, ENCODE_RESPONSE.substitutions);
    const ranges = highlightedRanges(segments);
    const expected = ENCODE_RESPONSE.substitutions
      .map((s) => s.span)
      .sort((a, b) => a[0] - b[0]);
    expect(ranges).toEqual(expected);
  });

  it("reassembles the masked text losslessly", () => {
    const segments = segmentBySpans(ENCODE_RESPONSE.x_pub, ENCODE_RESPONSE.substitutions);
    expect(segments.map((s) => s.text).join("")).toBe(ENCODE_RESPONSE.x_pub);
  });

  it("carries the original word for hover display", () => {
    const segments = segmentBySpans(ENCODE_RESPONSE.x_pub, ENCODE_RESPONSE.substitutions);
    const highlighted = segments.filter((s) => s.substitution !== null);
    expect(highlighted.map((s) => s.text)).toEqual(["Bob", "store"]);
    expect(highlighted.map((s) => s.substitution?.original)).toEqual(["Alice", "hideout"]);
  });

  it("zero substitutions produce one plain segment", () => {
    const segments = segmentBySpans("nothing replaced here.", []);
    expect(segments).toEqual([{ text: "nothing replaced here.", substitution: null }]);
  });

  it("rejects overlapping or out-of-range spans", () => {
    const bad = [
      { position: 0, original: "a", substitute: "b", tag: null, span: [0, 50] as [number, number] },
    ];
    expect(() => segmentBySpans("short", bad)).toThrow();
  });
});

describe("miss marking", () => {
  const miss = {
    position: 2,
    original: "hideout",
    substitute: "store",
    tag: null,
    reason: "no candidate found in translation",
  };

  it("underlines the first whole-word occurrence of the substitute", () => {
    const marks = markMisses("le Store reste store.", [miss]);
    expect(marks.map((m) => m.text)).toEqual(["le ", "Store", " reste store."]);
    expect(marks[1]?.miss).toBe(miss);
  });

  it("leaves text untouched when nothing matches", () => {
    const marks = markMisses("rien ici.", [miss]);
    expect(marks).toEqual([{ text: "rien ici.", miss: null }]);
  });
});
