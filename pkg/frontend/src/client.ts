/**
 * Session client: one WebSocket, strictly ordered request/reply.
 *
 * The server answers every message exactly once, in order, so replies
 * are matched to senders with a FIFO of resolvers; no ids on the wire.
 * The socket implementation is injectable (browser WebSocket by default,
 * the `ws` package in tests).
 */

import { parseServerMessage, type Incoming, type SessionEvent } from "./protocol.js";
import { applyMessage, initialViewState, setConnection, type ViewState } from "./store.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  addEventListener(
    type: "open" | "message" | "close" | "error",
    listener: (event: { data?: unknown }) => void,
  ): void;
}

export type SocketFactory = (url: string) => SocketLike;

const browserSocket: SocketFactory = (url) => new WebSocket(url);

export class SessionClient {
  private socket: SocketLike;
  private view: ViewState = initialViewState();
  private pending: Array<(reply: Incoming) => void> = [];
  private opened: Promise<void>;
  private listeners: Array<(view: ViewState) => void> = [];

  constructor(url: string, factory: SocketFactory = browserSocket) {
    this.socket = factory(url);
    this.opened = new Promise((resolve) => {
      this.socket.addEventListener("open", () => {
        this.update(setConnection(this.view, "open"));
        resolve();
      });
    });
    this.socket.addEventListener("message", (event) => {
      const reply = parseServerMessage(String(event.data));
      this.update(applyMessage(this.view, reply));
      const resolve = this.pending.shift();
      if (resolve !== undefined) {
        resolve(reply);
      }
    });
    this.socket.addEventListener("close", () => {
      this.update(setConnection(this.view, "closed"));
    });
  }

  state(): ViewState {
    return this.view;
  }

  subscribe(listener: (view: ViewState) => void): void {
    this.listeners.push(listener);
    listener(this.view);
  }

  async hello(): Promise<Incoming> {
    return this.request({ type: "hello" });
  }

  async sendEvent(event: SessionEvent): Promise<Incoming> {
    return this.request(event);
  }

  /** Send a batch in order; resolves with the reply to the last one. */
  async sendEvents(events: SessionEvent[]): Promise<Incoming[]> {
    const replies: Incoming[] = [];
    for (const event of events) {
      replies.push(await this.sendEvent(event));
    }
    return replies;
  }

  close(): void {
    this.socket.close();
  }

  private async request(payload: object): Promise<Incoming> {
    await this.opened;
    const reply = new Promise<Incoming>((resolve) => {
      this.pending.push(resolve);
    });
    this.socket.send(JSON.stringify(payload));
    return reply;
  }

  private update(view: ViewState): void {
    this.view = view;
    for (const listener of this.listeners) {
      listener(view);
    }
  }
}
