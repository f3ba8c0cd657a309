import { describe, expect, it } from "vitest";

import {
  ServiceClient,
  type ClientHooks,
  type ConnectionStatus,
  type Socket,
} from "../src/client";
import { gazeFrame, type ServerFrame } from "../src/protocol";

class FakeSocket implements Socket {
  sent: string[] = [];
  closed = false;
  onopen: (() => void) | null = null;
  onmessage: ((ev: { data: string }) => void) | null = null;
  onclose: (() => void) | null = null;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
  }

  serverSays(frame: unknown): void {
    this.onmessage?.({ data: JSON.stringify(frame) });
  }
}

interface Scheduled {
  fn: () => void;
  delayMs: number;
}

function makeClient(hooks: ClientHooks = {}) {
  const sockets: FakeSocket[] = [];
  const scheduled: Scheduled[] = [];
  const client = new ServiceClient(
    "ws://test/ws",
    () => {
      const s = new FakeSocket();
      sockets.push(s);
      return s;
    },
    hooks,
    (fn, delayMs) => {
      scheduled.push({ fn, delayMs });
    },
  );
  return { client, sockets, scheduled };
}

const LAYOUT = {
  v: 1,
  type: "layout",
  config: {
    screen_width_px: 1920,
    screen_height_px: 1080,
    pixels_per_cm: 55.6,
    line_spacing_mm: 13,
    font_height_mm: 5,
    mean_char_width_mm: 3,
    paragraph_rect: [100, 100, 1820, 980],
  },
  lines: [],
  words: [],
  anchors: [],
};

describe("ServiceClient", () => {
  it("reports connected once the socket opens", () => {
    const statuses: ConnectionStatus[] = [];
    const { client, sockets } = makeClient({
      onStatus: (s) => statuses.push(s),
    });
    client.connect();
    expect(statuses).toEqual(["connecting"]);
    sockets[0].onopen!();
    expect(statuses).toEqual(["connecting", "connected"]);
  });

  it("routes the layout frame to both onLayout and onFrame", () => {
    const layouts: unknown[] = [];
    const frames: ServerFrame[] = [];
    const { client, sockets } = makeClient({
      onLayout: (f) => layouts.push(f),
      onFrame: (f) => frames.push(f),
    });
    client.connect();
    sockets[0].onopen!();
    sockets[0].serverSays(LAYOUT);
    expect(layouts).toHaveLength(1);
    expect(frames).toHaveLength(1);
    expect(frames[0].type).toBe("layout");
  });

  it("drops malformed and foreign frames without calling hooks", () => {
    const frames: ServerFrame[] = [];
    const { client, sockets } = makeClient({ onFrame: (f) => frames.push(f) });
    client.connect();
    sockets[0].onopen!();
    sockets[0].onmessage!({ data: "{broken" });
    sockets[0].serverSays({ v: 2, type: "highlight", words: [] });
    sockets[0].serverSays({ v: 1, type: "mystery" });
    expect(frames).toHaveLength(0);
  });

  it("sends only gaze and double_click, throwing on anything else", () => {
    const { client, sockets } = makeClient();
    client.connect();
    sockets[0].onopen!();
    expect(client.send(gazeFrame(0, 10, 20, true))).toBe(true);
    expect(
      client.send({ v: 1, type: "double_click", x: 5, y: 6 }),
    ).toBe(true);
    expect(() =>
      client.send({ v: 1, type: "calibrate" } as never),
    ).toThrow(/not allowed/);
    expect(sockets[0].sent).toHaveLength(2);
    expect(JSON.parse(sockets[0].sent[0]).type).toBe("gaze");
    expect(JSON.parse(sockets[0].sent[1]).type).toBe("double_click");
  });

  it("refuses to send while disconnected", () => {
    const { client, sockets } = makeClient();
    client.connect();
    expect(client.send(gazeFrame(0, 1, 2, true))).toBe(false);
    expect(sockets[0].sent).toHaveLength(0);
  });

  it("schedules reconnects with exponential backoff after disconnect", () => {
    const statuses: ConnectionStatus[] = [];
    const { client, sockets, scheduled } = makeClient({
      onStatus: (s) => statuses.push(s),
    });
    client.connect();
    sockets[0].onopen!();
    sockets[0].onclose!();
    expect(statuses.at(-1)).toBe("reconnecting");
    expect(scheduled).toHaveLength(1);
    expect(scheduled[0].delayMs).toBe(500);

    scheduled[0].fn();
    expect(sockets).toHaveLength(2);
    sockets[1].onclose!();
    expect(scheduled[1].delayMs).toBe(1000);
    scheduled[1].fn();
    sockets[2].onclose!();
    expect(scheduled[2].delayMs).toBe(2000);
  });

  it("resets the backoff once a reconnect succeeds", () => {
    const { client, sockets, scheduled } = makeClient();
    client.connect();
    sockets[0].onopen!();
    sockets[0].onclose!();
    scheduled[0].fn();
    sockets[1].onclose!();
    expect(scheduled[1].delayMs).toBe(1000);
    scheduled[1].fn();
    sockets[2].onopen!();
    sockets[2].onclose!();
    expect(scheduled[2].delayMs).toBe(500);
  });

  it("stops reconnecting after stop()", () => {
    const { client, sockets, scheduled } = makeClient();
    client.connect();
    sockets[0].onopen!();
    client.stop();
    expect(sockets[0].closed).toBe(true);
    sockets[0].onclose!();
    expect(scheduled).toHaveLength(0);
  });
});
