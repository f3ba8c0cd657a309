/** Reconnect backoff: exponential with a cap, reset on successful connect. */

export const BACKOFF_INITIAL_MS = 500;
export const BACKOFF_FACTOR = 2;
export const BACKOFF_CAP_MS = 10_000;

export class Backoff {
  private attempt = 0;

  /** Delay before the next reconnect attempt, advancing the schedule. */
  nextDelayMs(): number {
    const delay = Math.min(
      BACKOFF_CAP_MS,
      BACKOFF_INITIAL_MS * BACKOFF_FACTOR ** this.attempt,
    );
    this.attempt += 1;
    return delay;
  }

  reset(): void {
    this.attempt = 0;
  }
}
