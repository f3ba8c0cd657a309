/** Mouse-as-gaze sampling: cursor position to outbound gaze frames. */

import { GazeFrame, gazeFrame } from "./protocol";
import type { NoiseGenerator } from "./noise";

export interface PageRect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export interface Cursor {
  x: number;
  y: number;
}

/** Half-open containment, matching the engine's hit tests. */
export function insidePage(cursor: Cursor, page: PageRect): boolean {
  return (
    cursor.x >= page.x0 &&
    cursor.x < page.x1 &&
    cursor.y >= page.y0 &&
    cursor.y < page.y1
  );
}

/**
 * Build the gaze frame for one sampling tick. A cursor outside the page
 * yields valid:false (and consumes no noise draw, so toggling validity
 * does not shift the seeded sequence's alignment with sample count).
 */
export function sampleGaze(
  tMs: number,
  cursor: Cursor,
  page: PageRect,
  noise: NoiseGenerator | null,
): GazeFrame {
  if (!insidePage(cursor, page)) {
    return gazeFrame(tMs, 0, 0, false);
  }
  if (noise === null) {
    return gazeFrame(tMs, cursor.x, cursor.y, true);
  }
  const { dx, dy } = noise.next();
  return gazeFrame(tMs, cursor.x + dx, cursor.y + dy, true);
}
