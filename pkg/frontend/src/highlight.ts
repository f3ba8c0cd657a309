/** Per-word highlight state and the repeated-read opacity schedule. */

import type { HighlightFrame } from "./protocol";

export const BASE_OPACITY = 0.2;
export const OPACITY_STEP = 0.1;
export const OPACITY_CAP = 0.6;

/** Green underlay opacity: count 1 -> 20%, +10% per extra read, capped 60%. */
export function opacityForCount(count: number): number {
  if (count <= 0) return 0;
  return Math.min(OPACITY_CAP, BASE_OPACITY + OPACITY_STEP * (count - 1));
}

export class HighlightState {
  private counts = new Map<number, number>();

  apply(frame: HighlightFrame): void {
    if (frame.snapshot) {
      this.counts = new Map(frame.words.map((w) => [w.index, w.count]));
      return;
    }
    for (const w of frame.words) {
      this.counts.set(w.index, w.count);
    }
  }

  countFor(wordIndex: number): number {
    return this.counts.get(wordIndex) ?? 0;
  }

  opacityFor(wordIndex: number): number {
    return opacityForCount(this.countFor(wordIndex));
  }

  /** Word indices with at least one read, for rendering. */
  readWords(): number[] {
    return [...this.counts.keys()].filter((i) => this.counts.get(i)! > 0);
  }

  clear(): void {
    this.counts.clear();
  }
}
