/**
 * Wire types for the qubitball serve protocol.
 *
 * One JSON object per WebSocket text message. The server replies to every
 * inbound message exactly once, in order: "hello" with {frame, config},
 * script events with a flattened frame ({"type": "frame", ...frame keys}),
 * anything malformed with {"type": "error", "message"}.
 */

export type Vec3 = [number, number, number];
export type ComplexPair = [number, number];

export interface BlochReadout {
  theta: number;
  phi: number;
  vector: Vec3;
}

export interface MeasurementPayload {
  axis: number[];
  outcome: 1 | -1;
  p_up: number;
  draw: number;
  post: { alpha: ComplexPair; beta: ComplexPair };
  seed_position: number;
}

export interface TraceFrame {
  step: number;
  orientation: [number, number, number, number];
  alpha: ComplexPair;
  beta: ComplexPair;
  pentagon: Vec3;
  hexagon: Vec3;
  bloch: BlochReadout;
  gamma: number | null;
  measurement?: MeasurementPayload;
}

export interface ServerConfig {
  seed: number;
  steps_per_degree: number;
  closure_tol: number;
  initial: { alpha: ComplexPair; beta: ComplexPair };
}

export type SessionEvent =
  | { type: "rotate"; axis: Vec3; angle: number; steps?: number }
  | { type: "geodesic"; from: Vec3; to: Vec3; steps?: number }
  | { type: "fiber"; delta: number; steps?: number }
  | { type: "field"; omega: Vec3; t0: number; t1: number; dt: number }
  | { type: "measure"; axis: Vec3 }
  | { type: "annotate"; text: string };

/** Normalized incoming message, frame always nested. */
export type Incoming =
  | { kind: "hello"; frame: TraceFrame; config: ServerConfig }
  | { kind: "frame"; frame: TraceFrame; annotation?: string }
  | { kind: "error"; message: string };

export class ProtocolError extends Error {}

function isNumber(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

function requireNumber(x: unknown, what: string): number {
  if (!isNumber(x)) {
    throw new ProtocolError(`${what} must be a finite number`);
  }
  return x;
}

function numberArray(x: unknown, length: number, what: string): number[] {
  if (!Array.isArray(x) || x.length !== length || !x.every(isNumber)) {
    throw new ProtocolError(`${what} must be a ${length}-number array`);
  }
  return x as number[];
}

function asFrame(obj: Record<string, unknown>): TraceFrame {
  const bloch = obj["bloch"] as Record<string, unknown> | undefined;
  if (typeof bloch !== "object" || bloch === null) {
    throw new ProtocolError("frame is missing bloch");
  }
  const gamma = obj["gamma"];
  if (gamma !== null && !isNumber(gamma)) {
    throw new ProtocolError("gamma must be a number or null");
  }
  const frame: TraceFrame = {
    step: requireNumber(obj["step"], "step"),
    orientation: numberArray(obj["orientation"], 4, "orientation") as TraceFrame["orientation"],
    alpha: numberArray(obj["alpha"], 2, "alpha") as ComplexPair,
    beta: numberArray(obj["beta"], 2, "beta") as ComplexPair,
    pentagon: numberArray(obj["pentagon"], 3, "pentagon") as Vec3,
    hexagon: numberArray(obj["hexagon"], 3, "hexagon") as Vec3,
    bloch: {
      theta: requireNumber(bloch["theta"], "bloch.theta"),
      phi: requireNumber(bloch["phi"], "bloch.phi"),
      vector: numberArray(bloch["vector"], 3, "bloch.vector") as Vec3,
    },
    gamma: gamma as number | null,
  };
  if (obj["measurement"] !== undefined) {
    frame.measurement = obj["measurement"] as MeasurementPayload;
  }
  return frame;
}

export function parseServerMessage(text: string): Incoming {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch {
    throw new ProtocolError("server sent unparseable JSON");
  }
  if (typeof obj !== "object" || obj === null) {
    throw new ProtocolError("server message must be an object");
  }
  const record = obj as Record<string, unknown>;
  switch (record["type"]) {
    case "hello":
      return {
        kind: "hello",
        frame: asFrame(record["frame"] as Record<string, unknown>),
        config: record["config"] as ServerConfig,
      };
    case "frame": {
      const incoming: Incoming = { kind: "frame", frame: asFrame(record) };
      if (typeof record["annotation"] === "string") {
        incoming.annotation = record["annotation"];
      }
      return incoming;
    }
    case "error": {
      const message = record["message"];
      if (typeof message !== "string") {
        throw new ProtocolError("error message must be a string");
      }
      return { kind: "error", message };
    }
    default:
      throw new ProtocolError(`unknown server message type ${String(record["type"])}`);
  }
}
