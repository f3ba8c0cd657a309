/** Stream-service wire protocol v1: one JSON object per text frame. */

export const PROTOCOL_VERSION = 1;

export interface LayoutConfigExport {
  screen_width_px: number;
  screen_height_px: number;
  pixels_per_cm: number;
  line_spacing_mm: number;
  font_height_mm: number;
  mean_char_width_mm: number;
  paragraph_rect: [number, number, number, number];
}

export interface LineExport {
  index: number;
  y_center: number;
  x_left: number;
  x_right: number;
}

export interface WordExport {
  index: number;
  line: number;
  box: [number, number, number, number];
  text: string;
}

export interface AnchorExport {
  index: number;
  mark: string;
  x: number;
  y: number;
  sentence_word_range: [number, number];
}

export interface LayoutFrame {
  v: 1;
  type: "layout";
  config: LayoutConfigExport;
  lines: LineExport[];
  words: WordExport[];
  anchors: AnchorExport[];
}

export interface HighlightFrame {
  v: 1;
  type: "highlight";
  words: { index: number; count: number }[];
  snapshot: boolean;
}

export interface EventFrame {
  v: 1;
  type: "event";
  event: Record<string, unknown>;
}

export interface RelocatedFrame {
  v: 1;
  type: "relocated";
  word: number | null;
  confirm: boolean;
}

export interface ErrorFrame {
  v: 1;
  type: "error";
  msg: string;
}

export type ServerFrame =
  | LayoutFrame
  | HighlightFrame
  | EventFrame
  | RelocatedFrame
  | ErrorFrame;

export interface GazeFrame {
  v: 1;
  type: "gaze";
  t_ms: number;
  x: number;
  y: number;
  valid: boolean;
}

export interface DoubleClickFrame {
  v: 1;
  type: "double_click";
  x: number;
  y: number;
}

/** The only message types the UI is allowed to send. */
export type ClientFrame = GazeFrame | DoubleClickFrame;

export function gazeFrame(
  tMs: number,
  x: number,
  y: number,
  valid: boolean,
): GazeFrame {
  return { v: PROTOCOL_VERSION, type: "gaze", t_ms: tMs, x, y, valid };
}

export function doubleClickFrame(x: number, y: number): DoubleClickFrame {
  return { v: PROTOCOL_VERSION, type: "double_click", x, y };
}

const SERVER_TYPES = new Set([
  "layout",
  "highlight",
  "event",
  "relocated",
  "error",
]);

/** Parse an inbound frame; null for malformed JSON or foreign versions/types. */
export function parseServerFrame(raw: string): ServerFrame | null {
  let obj: unknown;
  try {
    obj = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null) return null;
  const frame = obj as { v?: unknown; type?: unknown };
  if (frame.v !== PROTOCOL_VERSION) return null;
  if (typeof frame.type !== "string" || !SERVER_TYPES.has(frame.type)) {
    return null;
  }
  return obj as ServerFrame;
}
