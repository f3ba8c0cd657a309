/** Browser wiring: socket, 60 Hz mouse-as-gaze loop, canvas, controls. */

import { WebAudioBeeper, handleRelocated } from "./audio";
import { ServiceClient, type Socket } from "./client";
import { sampleGaze, type Cursor, type PageRect } from "./gaze";
import { HighlightState } from "./highlight";
import { NoiseGenerator } from "./noise";
import { doubleClickFrame, type LayoutFrame } from "./protocol";
import { render } from "./render";

const SAMPLE_RATE_HZ = 60;
const SERVICE_URL = `ws://${location.hostname || "127.0.0.1"}:8765/ws`;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("page");
const banner = el<HTMLDivElement>("banner");
const noiseToggle = el<HTMLInputElement>("noise");
const seedInput = el<HTMLInputElement>("seed");
const statusNote = el<HTMLSpanElement>("note");

let layout: LayoutFrame | null = null;
let page: PageRect | null = null;
let noise: NoiseGenerator | null = null;
const highlights = new HighlightState();
const beeper = new WebAudioBeeper();
const cursor: Cursor = { x: -1, y: -1 };
let needsRedraw = false;

function rebuildNoise(): void {
  noise = noiseToggle.checked
    ? new NoiseGenerator(Number(seedInput.value) || 1)
    : null;
}
noiseToggle.addEventListener("change", rebuildNoise);
seedInput.addEventListener("change", rebuildNoise);

// Adapt the browser WebSocket to the client's narrower Socket interface.
function openSocket(url: string): Socket {
  const ws = new WebSocket(url);
  const socket: Socket = {
    send: (data) => ws.send(data),
    close: () => ws.close(),
    onopen: null,
    onmessage: null,
    onclose: null,
  };
  ws.onopen = () => socket.onopen?.();
  ws.onmessage = (ev) => {
    if (typeof ev.data === "string") socket.onmessage?.({ data: ev.data });
  };
  ws.onclose = () => socket.onclose?.();
  return socket;
}

const client = new ServiceClient(SERVICE_URL, openSocket, {
  onLayout(frame) {
    layout = frame;
    const cfg = frame.config;
    canvas.width = cfg.screen_width_px;
    canvas.height = cfg.screen_height_px;
    page = {
      x0: 0,
      y0: 0,
      x1: cfg.screen_width_px,
      y1: cfg.screen_height_px,
    };
    highlights.clear();
    needsRedraw = true;
  },
  onFrame(frame) {
    if (frame.type === "highlight") {
      highlights.apply(frame);
      needsRedraw = true;
    } else if (frame.type === "relocated") {
      const beeped = handleRelocated(frame, beeper);
      statusNote.textContent = beeped
        ? `relocated to word ${frame.word}`
        : "relocation not confirmed";
    }
  },
  onStatus(status) {
    banner.hidden = status === "connected";
    banner.textContent =
      status === "reconnecting" ? "connection lost, reconnecting…" : "connecting…";
  },
});
client.connect();

canvas.addEventListener("mousemove", (ev) => {
  const rect = canvas.getBoundingClientRect();
  cursor.x = ((ev.clientX - rect.left) * canvas.width) / rect.width;
  cursor.y = ((ev.clientY - rect.top) * canvas.height) / rect.height;
});
canvas.addEventListener("mouseleave", () => {
  cursor.x = -1;
  cursor.y = -1;
});
canvas.addEventListener("dblclick", (ev) => {
  const rect = canvas.getBoundingClientRect();
  const x = ((ev.clientX - rect.left) * canvas.width) / rect.width;
  const y = ((ev.clientY - rect.top) * canvas.height) / rect.height;
  client.send(doubleClickFrame(x, y));
});

const t0 = performance.now();
setInterval(() => {
  if (page === null) return;
  const tMs = Math.round(performance.now() - t0);
  client.send(sampleGaze(tMs, cursor, page, noise));
}, 1000 / SAMPLE_RATE_HZ);

function paint(): void {
  if (needsRedraw && layout !== null) {
    const ctx = canvas.getContext("2d");
    if (ctx) render(ctx, layout, highlights);
    needsRedraw = false;
  }
  requestAnimationFrame(paint);
}
requestAnimationFrame(paint);
