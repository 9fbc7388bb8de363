/** DOM rendering for the preview and output panes. */

import { markMisses, segmentBySpans } from "./highlight.js";
import type { ViewState } from "./state.js";

export function renderPreview(container: HTMLElement, state: ViewState): void {
  container.textContent = "";
  if (state.xPub === null) {
    const hint = document.createElement("span");
    hint.className = "hint";
    hint.textContent = "Encode to preview the masked text.";
    container.appendChild(hint);
    return;
  }
  for (const segment of segmentBySpans(state.xPub, state.substitutions)) {
    if (segment.substitution === null) {
      container.appendChild(document.createTextNode(segment.text));
    } else {
      const mark = document.createElement("mark");
      mark.className = "substituted";
      mark.textContent = segment.text;
      mark.title = `was: ${segment.substitution.original}`;
      container.appendChild(mark);
    }
  }
}

export function renderEpsilon(badge: HTMLElement, state: ViewState): void {
  if (state.xPub === null) {
    badge.textContent = "";
    badge.className = "badge";
    return;
  }
  if (state.epsilon !== null) {
    badge.textContent = `ε = ${state.epsilon.toFixed(4)}`;
    badge.className = "badge badge-bound";
  } else {
    badge.textContent = "no formal bound";
    badge.className = "badge badge-unbound";
  }
}

export function renderRestored(container: HTMLElement, state: ViewState): void {
  container.textContent = "";
  if (state.yPri === null) return;
  for (const mark of markMisses(state.yPri, state.misses)) {
    if (mark.miss === null) {
      container.appendChild(document.createTextNode(mark.text));
    } else {
      const span = document.createElement("span");
      span.className = "miss";
      span.textContent = mark.text;
      span.title = `not restored (${mark.miss.reason}); original: ${mark.miss.original}`;
      container.appendChild(span);
    }
  }
}

export function renderMissList(list: HTMLElement, state: ViewState): void {
  list.textContent = "";
  for (const miss of state.misses) {
    const item = document.createElement("li");
    item.textContent = `${miss.original} → ${miss.substitute}: ${miss.reason}`;
    list.appendChild(item);
  }
}
