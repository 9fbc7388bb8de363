/** Pure text-segmentation helpers for the preview and output panes.
 * Rendering works off these segments; tests can verify that highlight
 * spans cover exactly the substituted ranges the service reported. */

import type { DecodeMiss, Substitution } from "./types.js";

export interface Segment {
  text: string;
  /** Present when this segment is a substituted token. */
  substitution: Substitution | null;
}

export function segmentBySpans(text: string, substitutions: Substitution[]): Segment[] {
  const ordered = [...substitutions].sort((a, b) => a.span[0] - b.span[0]);
  const segments: Segment[] = [];
  let cursor = 0;
  for (const sub of ordered) {
    const [start, end] = sub.span;
    if (start < cursor || end > text.length || start >= end) {
      throw new Error(`invalid span [${start}, ${end}) for text of length ${text.length}`);
    }
    if (start > cursor) {
      segments.push({ text: text.slice(cursor, start), substitution: null });
    }
    segments.push({ text: text.slice(start, end), substitution: sub });
    cursor = end;
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor), substitution: null });
  }
  return segments;
}

/** Recover the [start, end) ranges of highlighted segments, for fidelity
 * checks against the service's substitution spans. */
export function highlightedRanges(segments: Segment[]): Array<[number, number]> {
  const ranges: Array<[number, number]> = [];
  let cursor = 0;
  for (const segment of segments) {
    if (segment.substitution) {
      ranges.push([cursor, cursor + segment.text.length]);
    }
    cursor += segment.text.length;
  }
  return ranges;
}

export interface MissMark {
  text: string;
  miss: DecodeMiss | null;
}

/** Underline the first whole-word occurrence of each missed substitute
 * in the restored text; misses that match nothing are reported in the
 * side list only. */
export function markMisses(yPri: string, misses: DecodeMiss[]): MissMark[] {
  const marks: Array<{ start: number; end: number; miss: DecodeMiss }> = [];
  const taken: Array<[number, number]> = [];
  for (const miss of misses) {
    const pattern = new RegExp(`\\b${escapeRegExp(miss.substitute)}\\b`, "iu");
    const match = pattern.exec(yPri);
    if (!match) continue;
    const start = match.index;
    const end = start + match[0].length;
    if (taken.some(([s, e]) => start < e && end > s)) continue;
    taken.push([start, end]);
    marks.push({ start, end, miss });
  }
  marks.sort((a, b) => a.start - b.start);
  const out: MissMark[] = [];
  let cursor = 0;
  for (const mark of marks) {
    if (mark.start > cursor) out.push({ text: yPri.slice(cursor, mark.start), miss: null });
    out.push({ text: yPri.slice(mark.start, mark.end), miss: mark.miss });
    cursor = mark.end;
  }
  if (cursor < yPri.length) out.push({ text: yPri.slice(cursor), miss: null });
  return out;
}

function escapeRegExp(value: string): string {
  return value.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");
}
