/**
 * View state: a pure reducer over incoming server messages.
 *
 * The UI holds no physics. Panel colors, amplitudes, Bloch angles and
 * gamma are carried through exactly as received: the frame object is
 * stored by reference and never copied or recomputed, so what the
 * renderer reads is byte-for-byte what the server sent.
 */

import type { Incoming, MeasurementPayload, ServerConfig, TraceFrame } from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface ViewState {
  connection: ConnectionStatus;
  config: ServerConfig | null;
  frame: TraceFrame | null;
  /** Measurement records in arrival order, oldest first. */
  history: MeasurementPayload[];
  annotations: string[];
  lastError: string | null;
}

export function initialViewState(): ViewState {
  return {
    connection: "connecting",
    config: null,
    frame: null,
    history: [],
    annotations: [],
    lastError: null,
  };
}

export function applyMessage(state: ViewState, message: Incoming): ViewState {
  switch (message.kind) {
    case "hello":
      return {
        ...state,
        connection: "open",
        config: message.config,
        frame: message.frame,
        lastError: null,
      };
    case "frame": {
      const next: ViewState = { ...state, frame: message.frame, lastError: null };
      if (message.frame.measurement !== undefined) {
        next.history = [...state.history, message.frame.measurement];
      }
      if (message.annotation !== undefined) {
        next.annotations = [...state.annotations, message.annotation];
      }
      return next;
    }
    case "error":
      // the session continues server-side; keep the last good frame
      return { ...state, lastError: message.message };
  }
}

export function setConnection(state: ViewState, connection: ConnectionStatus): ViewState {
  return { ...state, connection };
}
