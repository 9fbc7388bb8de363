/** Ratio slider: the label tracks every tick, but re-encoding only fires
 * on release (the change event), debounced so a quick series of
 * adjustments costs one request. */

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
  timers: { set: typeof setTimeout; clear: typeof clearTimeout } = {
    set: setTimeout,
    clear: clearTimeout,
  },
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (handle !== null) timers.clear(handle);
    handle = timers.set(() => {
      handle = null;
      fn(...args);
    }, waitMs);
  };
}

export interface SliderBinding {
  input: HTMLInputElement;
  label: HTMLElement;
  onRelease: (value: number) => void;
  debounceMs?: number;
}

export function bindRatioSlider({ input, label, onRelease, debounceMs = 150 }: SliderBinding): void {
  const fire = debounce(onRelease, debounceMs);
  input.addEventListener("input", () => {
    label.textContent = Number(input.value).toFixed(2);
  });
  input.addEventListener("change", () => {
    fire(Number(input.value));
  });
  label.textContent = Number(input.value).toFixed(2);
}
