/** Service connection: frame dispatch, outbound guard, auto-reconnect. */

import { Backoff } from "./backoff";
import {
  ClientFrame,
  LayoutFrame,
  ServerFrame,
  parseServerFrame,
} from "./protocol";

/** Structural subset of WebSocket, so tests can inject a fake. */
export interface Socket {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: (() => void) | null;
}

export type SocketFactory = (url: string) => Socket;
export type ConnectionStatus = "connecting" | "connected" | "reconnecting";

export interface ClientHooks {
  onLayout?(frame: LayoutFrame): void;
  onFrame?(frame: ServerFrame): void;
  onStatus?(status: ConnectionStatus): void;
}

const OUTBOUND_TYPES = new Set(["gaze", "double_click"]);

export class ServiceClient {
  private socket: Socket | null = null;
  private backoff = new Backoff();
  private stopped = false;
  status: ConnectionStatus = "connecting";

  constructor(
    private url: string,
    private factory: SocketFactory,
    private hooks: ClientHooks,
    private schedule: (fn: () => void, delayMs: number) => void = (fn, d) => {
      setTimeout(fn, d);
    },
  ) {}

  connect(): void {
    this.setStatus(this.status === "connecting" ? "connecting" : "reconnecting");
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.backoff.reset();
      this.setStatus("connected");
    };
    socket.onmessage = (ev) => {
      const frame = parseServerFrame(ev.data);
      if (frame === null) return;
      if (frame.type === "layout") this.hooks.onLayout?.(frame);
      this.hooks.onFrame?.(frame);
    };
    socket.onclose = () => {
      if (this.socket !== socket || this.stopped) return;
      this.socket = null;
      this.setStatus("reconnecting");
      this.schedule(() => {
        if (!this.stopped) this.connect();
      }, this.backoff.nextDelayMs());
    };
  }

  /** The UI sends nothing but gaze and double_click; anything else throws. */
  send(frame: ClientFrame): boolean {
    if (!OUTBOUND_TYPES.has(frame.type)) {
      throw new Error(`outbound frame type not allowed: ${frame.type}`);
    }
    if (this.socket === null || this.status !== "connected") return false;
    this.socket.send(JSON.stringify(frame));
    return true;
  }

  stop(): void {
    this.stopped = true;
    this.socket?.close();
    this.socket = null;
  }

  private setStatus(status: ConnectionStatus): void {
    this.status = status;
    this.hooks.onStatus?.(status);
  }
}
