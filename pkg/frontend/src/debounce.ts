/**
 * Trailing-edge debounce with an injectable clock so tests control time.
 *
 * During a burst of calls (a slider drag) nothing fires; one call with the
 * latest arguments fires after the wait elapses without further input.
 */

export type TimerHandle = unknown;

export interface Clock {
  setTimeout(fn: () => void, ms: number): TimerHandle;
  clearTimeout(handle: TimerHandle): void;
}

export const systemClock: Clock = {
  setTimeout: (fn, ms) => globalThis.setTimeout(fn, ms),
  clearTimeout: (handle) =>
    globalThis.clearTimeout(handle as ReturnType<typeof globalThis.setTimeout>),
};

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  /** Drop any pending trailing call. */
  cancel(): void;
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
  clock: Clock = systemClock,
): Debounced<A> {
  let pending: TimerHandle | null = null;

  const debounced = (...args: A) => {
    if (pending !== null) clock.clearTimeout(pending);
    pending = clock.setTimeout(() => {
      pending = null;
      fn(...args);
    }, waitMs);
  };

  debounced.cancel = () => {
    if (pending !== null) {
      clock.clearTimeout(pending);
      pending = null;
    }
  };

  return debounced;
}
