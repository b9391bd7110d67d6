/**
 * Sequence gate keeping displayed results consistent with the newest request.
 *
 * Every request takes a monotonically increasing token; a response is applied
 * only if its token exceeds the last applied one, so a slow old response can
 * never overwrite a newer one that already arrived.
 */

export interface RequestGate {
  /** Issue the next token. */
  next(): number;
  /** True while no newer token has been issued after this one. */
  isCurrent(token: number): boolean;
  /** Record the token and return true iff it is newer than the last applied. */
  accept(token: number): boolean;
  /** Mark everything issued so far as superseded. */
  invalidate(): void;
}

export function createRequestGate(): RequestGate {
  let issued = 0;
  let applied = 0;

  return {
    next() {
      issued += 1;
      return issued;
    },
    isCurrent(token: number) {
      return token === issued;
    },
    accept(token: number) {
      if (token <= applied) return false;
      applied = token;
      return true;
    },
    invalidate() {
      applied = issued;
    },
  };
}

/**
 * Run one request under the gate: apply the result only if no newer request
 * was issued and applied meanwhile.  A failure is reported only when the
 * failing request is still the newest one, and then blocks older in-flight
 * responses from landing afterwards (the error outcome is the current state).
 */
export async function dispatchLatest<T>(
  gate: RequestGate,
  work: () => Promise<T>,
  apply: (value: T) => void,
  onError?: (err: unknown) => void,
): Promise<void> {
  const token = gate.next();
  try {
    const value = await work();
    if (gate.accept(token)) apply(value);
  } catch (err) {
    if (gate.isCurrent(token)) {
      gate.invalidate();
      onError?.(err);
    }
  }
}
