import { describe, expect, it } from "vitest";

import {
  BACKOFF_CAP_MS,
  BACKOFF_INITIAL_MS,
  Backoff,
} from "../src/backoff";

describe("Backoff", () => {
  it("doubles from the initial delay up to the cap", () => {
    const b = new Backoff();
    expect(b.nextDelayMs()).toBe(BACKOFF_INITIAL_MS);
    expect(b.nextDelayMs()).toBe(1000);
    expect(b.nextDelayMs()).toBe(2000);
    expect(b.nextDelayMs()).toBe(4000);
    expect(b.nextDelayMs()).toBe(8000);
    expect(b.nextDelayMs()).toBe(BACKOFF_CAP_MS);
    expect(b.nextDelayMs()).toBe(BACKOFF_CAP_MS);
  });

  it("restarts the schedule after reset", () => {
    const b = new Backoff();
    b.nextDelayMs();
    b.nextDelayMs();
    b.reset();
    expect(b.nextDelayMs()).toBe(BACKOFF_INITIAL_MS);
  });
});
