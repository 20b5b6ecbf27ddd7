/**
 * Virtual trackball: screen-space pointer drags become streams of small
 * world-frame rotation events.
 *
 * A horizontal drag spins the ball about the camera's up axis, a vertical
 * drag about the camera's right axis; the default sensitivity is PI
 * radians per viewport width. Every emitted event stays at or below
 * MAX_EVENT_ANGLE so the server's per-step continuity bound is never in
 * danger, no matter how fast the pointer moves between frames.
 */

import type { SessionEvent, Vec3 } from "./protocol.js";

/** Per-event angle cap in radians, well under the server's step bound. */
export const MAX_EVENT_ANGLE = 0.05;

export const DEFAULT_SENSITIVITY = Math.PI;

export interface CameraBasis {
  /** World-frame unit vector pointing up on screen. */
  up: Vec3;
  /** World-frame unit vector pointing right on screen. */
  right: Vec3;
}

export interface TrackballOptions {
  viewportWidth: number;
  /** Radians of ball rotation per full viewport width of drag. */
  sensitivity?: number;
}

function scaled(v: Vec3, s: number): Vec3 {
  return [v[0] * s, v[1] * s, v[2] * s];
}

function added(a: Vec3, b: Vec3): Vec3 {
  return [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
}

function norm(v: Vec3): number {
  return Math.hypot(v[0], v[1], v[2]);
}

/**
 * Convert one pointer delta (pixels; dy positive when dragging up) into
 * rotate events. Zero deltas produce no events.
 */
export function dragToRotations(
  dxPixels: number,
  dyPixels: number,
  camera: CameraBasis,
  options: TrackballOptions,
): SessionEvent[] {
  if (!(options.viewportWidth > 0)) {
    throw new Error("viewportWidth must be positive");
  }
  const perPixel = (options.sensitivity ?? DEFAULT_SENSITIVITY) / options.viewportWidth;
  // dragging right turns about +up, dragging up turns about +right
  const rotation = added(
    scaled(camera.up, dxPixels * perPixel),
    scaled(camera.right, dyPixels * perPixel),
  );
  const total = norm(rotation);
  if (total === 0.0) {
    return [];
  }
  const axis = scaled(rotation, 1.0 / total);
  const chunks = Math.ceil(total / MAX_EVENT_ANGLE);
  const per = total / chunks;
  const events: SessionEvent[] = [];
  for (let i = 0; i < chunks; i++) {
    events.push({ type: "rotate", axis, angle: per, steps: 1 });
  }
  return events;
}

/** Total signed angle of a batch about a fixed axis; test and HUD helper. */
export function totalAngle(events: SessionEvent[]): number {
  let sum = 0.0;
  for (const event of events) {
    if (event.type === "rotate") {
      sum += event.angle;
    }
  }
  return sum;
}
