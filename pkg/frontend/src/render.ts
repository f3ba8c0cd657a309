/** Canvas rendering: text at layout geometry, yellow anchors, green reads. */

import type { HighlightState } from "./highlight";
import type { LayoutFrame } from "./protocol";

export const GREEN = "0, 160, 60";
export const YELLOW = "rgba(250, 210, 40, 0.45)";

export function render(
  ctx: CanvasRenderingContext2D,
  layout: LayoutFrame,
  highlights: HighlightState,
): void {
  const cfg = layout.config;
  ctx.clearRect(0, 0, cfg.screen_width_px, cfg.screen_height_px);
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, cfg.screen_width_px, cfg.screen_height_px);

  // punctuation anchors: shaded from load, before any gaze arrives
  const markWidth = (cfg.mean_char_width_mm / 10) * cfg.pixels_per_cm;
  const markHeight = (cfg.font_height_mm / 10) * cfg.pixels_per_cm;
  ctx.fillStyle = YELLOW;
  for (const a of layout.anchors) {
    ctx.fillRect(a.x - markWidth / 2, a.y - markHeight / 2, markWidth, markHeight);
  }

  // green underlays deepen with read count
  for (const w of layout.words) {
    const opacity = highlights.opacityFor(w.index);
    if (opacity <= 0) continue;
    const [x0, y0, x1, y1] = w.box;
    ctx.fillStyle = `rgba(${GREEN}, ${opacity})`;
    ctx.fillRect(x0, y0, x1 - x0, y1 - y0);
  }

  // the text itself
  ctx.fillStyle = "#1a1a1a";
  const fontPx = (cfg.font_height_mm / 10) * cfg.pixels_per_cm;
  ctx.font = `${fontPx.toFixed(1)}px monospace`;
  ctx.textBaseline = "middle";
  for (const w of layout.words) {
    const [x0, , , ] = w.box;
    const line = layout.lines[w.line];
    ctx.fillText(w.text, x0, line.y_center);
  }
}
