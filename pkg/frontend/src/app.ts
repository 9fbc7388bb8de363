/** Page wiring: controls on the left, preview and outputs on the right.
 * All state flows Store -> render; the DOM never computes anything. */

import { ApiClient } from "./api.js";
import { AppController } from "./controller.js";
import { renderEpsilon, renderMissList, renderPreview, renderRestored } from "./render.js";
import { bindRatioSlider } from "./slider.js";
import { Store } from "./state.js";

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing element #${id}`);
  return element as T;
}

export function startApp(): void {
  const store = new Store();
  const controller = new AppController(new ApiClient(), store);

  const textInput = byId<HTMLTextAreaElement>("text-input");
  const draftButton = byId<HTMLButtonElement>("draft-button");
  const methodSelect = byId<HTMLSelectElement>("method-select");
  const ratioSlider = byId<HTMLInputElement>("ratio-slider");
  const ratioLabel = byId<HTMLElement>("ratio-label");
  const engineSelect = byId<HTMLSelectElement>("engine-select");
  const epsilonBadge = byId<HTMLElement>("epsilon-badge");
  const warningLine = byId<HTMLElement>("warning-line");
  const preview = byId<HTMLElement>("preview");
  const approveButton = byId<HTMLButtonElement>("approve-button");
  const yPubPane = byId<HTMLElement>("y-pub");
  const yPriPane = byId<HTMLElement>("y-pri");
  const missList = byId<HTMLElement>("miss-list");
  const errorBanner = byId<HTMLElement>("error-banner");
  const stateLine = byId<HTMLElement>("state-line");

  const reencode = () => {
    void controller.encode(methodSelect.value, Number(ratioSlider.value));
  };

  draftButton.addEventListener("click", () => {
    void controller.draft(textInput.value).then(reencode);
  });
  methodSelect.addEventListener("change", reencode);
  bindRatioSlider({ input: ratioSlider, label: ratioLabel, onRelease: reencode });
  engineSelect.addEventListener("change", () => {
    store.update({ engine: engineSelect.value || null });
  });
  approveButton.addEventListener("click", () => {
    approveButton.disabled = true; // immediate idempotence guard
    void controller.approveAndSend();
  });

  store.subscribe((state) => {
    renderPreview(preview, state);
    renderEpsilon(epsilonBadge, state);
    renderRestored(yPriPane, state);
    renderMissList(missList, state);
    yPubPane.textContent = state.yPub ?? "";
    warningLine.textContent = state.warning ?? "";
    stateLine.textContent = state.sessionId ? `session ${state.sessionId.slice(0, 8)} · ${state.phase}` : "";
    errorBanner.textContent = state.error ?? "";
    errorBanner.hidden = state.error === null;
    approveButton.disabled =
      state.busy || state.phase === "decoded" || (state.phase !== "encoded" && state.phase !== "sent");
    approveButton.textContent = state.error && state.phase !== "decoded" ? "Retry" : "Approve & send";
    if (engineSelect.options.length !== state.engines.length) {
      engineSelect.textContent = "";
      for (const engine of state.engines) {
        const option = document.createElement("option");
        option.value = engine.id;
        option.textContent = `${engine.id} (${engine.source_lang}→${engine.target_lang})`;
        engineSelect.appendChild(option);
      }
      if (state.engine) engineSelect.value = state.engine;
    }
  });

  void controller.loadEngines();
}

startApp();
