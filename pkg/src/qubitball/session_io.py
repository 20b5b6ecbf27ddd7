"""Session formats and the event engine: scripts, IMU logs, trace frames.

Everything here is JSON or JSON lines; the trace writer emits a fixed key
order with compact separators so that identical sessions produce
byte-identical output.  Scripts are step-indexed rather than wall-clock
timed, and every rotation-bearing event is validated against the per-step
pi lift-safety bound at parse time, naming the offending event index.

Gyroscope logs are body-frame by default (the sensor is mounted in the
ball); each interval contributes one increment whose axis is the midpoint
average of the two bounding rate samples and whose angle is that average
rate times the interval.  The increments feed path_lift.step under the
chosen frame mode.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .dynamics import FieldSegment, evolve_path
from .measurement import (
    MeasurementRecord,
    measure_axis,
    record_from_payload,
    record_payload,
)
from .path_lift import (
    DEFAULT_CLOSURE_TOL,
    MAX_STEP_ANGLE,
    BallState,
    LoopNotClosed,
    classify_loop,
    init,
    step,
)
from .phase_geometry import geodesic_increments
from .rotor_core import Spinor, quaternion_from_so3
from .spin_state import bloch_point, panel_frame

_Z = np.array([0.0, 0.0, 1.0])


class ScriptError(ValueError):
    """A script that fails JSON, schema, or lift-safety validation."""


class LogFormatError(ValueError):
    """An IMU log or trace whose lines fail parsing or validation."""


# ---------------------------------------------------------------------------
# events


def _unit(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be a finite 3-vector")
    n = float(np.linalg.norm(arr))
    if n == 0.0:
        raise ValueError(f"{name} must be nonzero")
    arr = arr / n
    arr.flags.writeable = False
    return arr


def _finite(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{name} must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite")
    return value


def _step_count(value, name: str = "steps") -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValueError(f"{name} must be a positive integer")
    return value


@dataclass(frozen=True, eq=False)
class Rotate:
    """Fixed-axis rotation, subdivided into equal world-frame steps."""

    axis: np.ndarray
    angle: float
    steps: int

    def __post_init__(self):
        object.__setattr__(self, "axis", _unit(self.axis, "axis"))
        object.__setattr__(self, "angle", _finite(self.angle, "angle"))
        object.__setattr__(self, "steps", _step_count(self.steps))
        if abs(self.angle) / self.steps >= MAX_STEP_ANGLE:
            raise ValueError(
                f"per-step angle {abs(self.angle) / self.steps!r} reaches the"
                " pi lift-safety bound; increase steps"
            )


@dataclass(frozen=True, eq=False)
class Geodesic:
    """Great-circle move of the principal axis between two directions."""

    start: np.ndarray
    end: np.ndarray
    steps: int

    def __post_init__(self):
        object.__setattr__(self, "start", _unit(self.start, "from"))
        object.__setattr__(self, "end", _unit(self.end, "to"))
        object.__setattr__(self, "steps", _step_count(self.steps))
        if float(np.linalg.norm(self.start + self.end)) <= 1e-6:
            raise ValueError("from and to are antipodal; the geodesic is ambiguous")


@dataclass(frozen=True, eq=False)
class Fiber:
    """Rotation about the current principal axis (pure phase motion)."""

    delta: float
    steps: int

    def __post_init__(self):
        object.__setattr__(self, "delta", _finite(self.delta, "delta"))
        object.__setattr__(self, "steps", _step_count(self.steps))
        if abs(self.delta) / self.steps >= MAX_STEP_ANGLE:
            raise ValueError(
                f"per-step angle {abs(self.delta) / self.steps!r} reaches the"
                " pi lift-safety bound; increase steps"
            )


@dataclass(frozen=True, eq=False)
class Field:
    """Constant-field evolution segment with its own time step."""

    omega: np.ndarray
    t0: float
    t1: float
    dt: float

    def __post_init__(self):
        arr = np.asarray(self.omega, dtype=float)
        if arr.shape != (3,) or not np.all(np.isfinite(arr)):
            raise ValueError("omega must be a finite 3-vector")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "omega", arr)
        object.__setattr__(self, "t0", _finite(self.t0, "t0"))
        object.__setattr__(self, "t1", _finite(self.t1, "t1"))
        object.__setattr__(self, "dt", _finite(self.dt, "dt"))
        self.segment()  # validates ordering, dt, and lift safety

    def segment(self) -> FieldSegment:
        return FieldSegment(self.omega, self.t0, self.t1, self.dt)


@dataclass(frozen=True, eq=False)
class Measure:
    """Projective measurement along a unit axis."""

    axis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "axis", _unit(self.axis, "axis"))


@dataclass(frozen=True)
class Annotate:
    """Free-text marker; leaves the state untouched."""

    text: str

    def __post_init__(self):
        if not isinstance(self.text, str):
            raise ValueError("text must be a string")


SessionEvent = Rotate | Geodesic | Fiber | Field | Measure | Annotate

# required and optional keys per event type, besides "type" itself
_SCHEMAS = {
    "rotate": ({"axis", "angle"}, {"steps"}),
    "geodesic": ({"from", "to"}, {"steps"}),
    "fiber": ({"delta"}, {"steps"}),
    "field": ({"omega", "t0", "t1", "dt"}, set()),
    "measure": ({"axis"}, set()),
    "annotate": ({"text"}, set()),
}


def _default_steps(angle: float, steps_per_degree: float) -> int:
    return max(1, math.ceil(abs(math.degrees(angle)) * steps_per_degree))


def parse_event(obj, index=None, steps_per_degree: float = 1.0) -> SessionEvent:
    """Validate one script event object; errors name events[index]."""

    def fail(message: str):
        where = f"events[{index}]: " if index is not None else ""
        raise ScriptError(where + message)

    if not isinstance(obj, dict):
        fail("event must be a JSON object")
    kind = obj.get("type")
    if kind not in _SCHEMAS:
        fail(f"unknown event type {kind!r}")
    required, optional = _SCHEMAS[kind]
    keys = set(obj) - {"type"}
    if keys - required - optional:
        fail(f"unexpected keys {sorted(keys - required - optional)}")
    if required - keys:
        fail(f"missing keys {sorted(required - keys)}")

    try:
        if kind == "rotate":
            angle = _finite(obj["angle"], "angle")
            steps = obj.get("steps", _default_steps(angle, steps_per_degree))
            return Rotate(axis=obj["axis"], angle=angle, steps=steps)
        if kind == "geodesic":
            start = _unit(obj["from"], "from")
            end = _unit(obj["to"], "to")
            arc = math.atan2(
                float(np.linalg.norm(np.cross(start, end))), float(start @ end)
            )
            steps = obj.get("steps", _default_steps(arc, steps_per_degree))
            return Geodesic(start=start, end=end, steps=steps)
        if kind == "fiber":
            delta = _finite(obj["delta"], "delta")
            steps = obj.get("steps", _default_steps(delta, steps_per_degree))
            return Fiber(delta=delta, steps=steps)
        if kind == "field":
            return Field(
                omega=obj["omega"], t0=obj["t0"], t1=obj["t1"], dt=obj["dt"]
            )
        if kind == "measure":
            return Measure(axis=obj["axis"])
        return Annotate(text=obj["text"])
    except ValueError as e:
        fail(str(e))


def parse_script(text: str, steps_per_degree: float = 1.0) -> list[SessionEvent]:
    """Parse a script document: {"events": [...]} or a bare event array."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScriptError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    if isinstance(doc, list):
        events = doc
    elif isinstance(doc, dict) and isinstance(doc.get("events"), list):
        events = doc["events"]
    else:
        raise ScriptError('script must be an array or {"events": [...]}')
    return [
        parse_event(obj, index=i, steps_per_degree=steps_per_degree)
        for i, obj in enumerate(events)
    ]


# ---------------------------------------------------------------------------
# IMU logs


@dataclass(frozen=True, eq=False)
class ImuSample:
    """One gyroscope reading: time in seconds, body rates in rad/s."""

    t: float
    gyro: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t", _finite(self.t, "t"))
        arr = np.asarray(self.gyro, dtype=float)
        if arr.shape != (3,) or not np.all(np.isfinite(arr)):
            raise ValueError("gyro must be a finite 3-vector")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "gyro", arr)


def parse_imu_log(text: str) -> list[ImuSample]:
    """JSON lines {"t": seconds, "gyro": [x, y, z]}; blank lines skipped."""
    samples = []
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise LogFormatError(f"line {n}: {e.msg}") from None
        if not isinstance(obj, dict) or set(obj) != {"t", "gyro"}:
            raise LogFormatError(f'line {n}: expected keys "t" and "gyro"')
        try:
            samples.append(ImuSample(t=obj["t"], gyro=obj["gyro"]))
        except ValueError as e:
            raise LogFormatError(f"line {n}: {e}") from None
    return samples


def integrate_imu(
    samples: Sequence[ImuSample], mode: str = "body"
) -> list[tuple[np.ndarray, float]]:
    """Per-interval (axis, angle) increments from a gyroscope log.

    The mode does not change the numbers, only how they must be applied
    downstream (body increments right-multiply, world increments
    left-multiply); it is validated here so a typo fails before any
    stepping happens.  Zero-rate intervals become zero-angle increments.
    """
    if mode not in ("body", "world"):
        raise ValueError(f"mode must be 'body' or 'world', got {mode!r}")
    samples = list(samples)
    increments = []
    for k in range(len(samples) - 1):
        a, b = samples[k], samples[k + 1]
        dt = b.t - a.t
        if dt <= 0.0:
            raise ValueError(
                f"timestamps must be strictly increasing (sample {k + 1})"
            )
        mid = 0.5 * (a.gyro + b.gyro)
        speed = float(np.linalg.norm(mid))
        angle = speed * dt
        if angle >= MAX_STEP_ANGLE:
            raise ValueError(
                f"interval {k} turns by {angle!r} rad, reaching the pi"
                " lift-safety bound; sample faster"
            )
        axis = mid / speed if speed > 0.0 else _Z
        increments.append((axis, angle))
    return increments


def replay_imu(
    samples: Sequence[ImuSample], mode: str = "body", initial: BallState | None = None
) -> list[BallState]:
    """Lift a gyroscope log into states, starting from initial (or init())."""
    state = init() if initial is None else initial
    states = [state]
    for axis, angle in integrate_imu(samples, mode=mode):
        state = step(state, axis, angle, frame=mode)
        states.append(state)
    return states


# ---------------------------------------------------------------------------
# trace frames


@dataclass(frozen=True)
class TraceFrame:
    """One displayed instant: orientation, spinor, colors, Bloch readout.

    gamma is None while the orientation loop is open and 0 or pi once the
    orientation has returned to the session's initial one.
    """

    step: int
    orientation: tuple
    alpha: complex
    beta: complex
    pentagon: tuple
    hexagon: tuple
    theta: float
    phi: float
    vector: tuple
    gamma: float | None = None
    measurement: MeasurementRecord | None = None


def frame_from_state(
    state: BallState, step: int, gamma: float | None = None, measurement=None
) -> TraceFrame:
    q = quaternion_from_so3(state.orientation)
    panel = panel_frame(state.spinor)
    b = bloch_point(state.spinor)
    return TraceFrame(
        step=int(step),
        orientation=(float(q.w), float(q.x), float(q.y), float(q.z)),
        alpha=complex(state.spinor.alpha),
        beta=complex(state.spinor.beta),
        pentagon=tuple(int(c) for c in panel.pentagon_rgb),
        hexagon=tuple(int(c) for c in panel.hexagon_rgb),
        theta=float(b.theta),
        phi=float(b.phi),
        vector=tuple(float(c) for c in b.unit_vector),
        gamma=gamma,
        measurement=measurement,
    )


def frame_payload(frame: TraceFrame) -> dict:
    """Frame as a plain dict in the wire key order."""
    payload = {
        "step": frame.step,
        "orientation": list(frame.orientation),
        "alpha": [frame.alpha.real, frame.alpha.imag],
        "beta": [frame.beta.real, frame.beta.imag],
        "pentagon": list(frame.pentagon),
        "hexagon": list(frame.hexagon),
        "bloch": {
            "theta": frame.theta,
            "phi": frame.phi,
            "vector": list(frame.vector),
        },
        "gamma": frame.gamma,
    }
    if frame.measurement is not None:
        payload["measurement"] = record_payload(frame.measurement)
    return payload


def frame_to_json(frame: TraceFrame) -> str:
    """One compact JSON line, fixed key order; byte-stable per input."""
    return json.dumps(frame_payload(frame), separators=(",", ":"))


_FRAME_KEYS = {
    "step", "orientation", "alpha", "beta", "pentagon", "hexagon",
    "bloch", "gamma",
}


def _frame_from_payload(obj: dict) -> TraceFrame:
    keys = set(obj)
    if not (keys == _FRAME_KEYS or keys == _FRAME_KEYS | {"measurement"}):
        raise ValueError(f"unexpected frame keys {sorted(keys ^ _FRAME_KEYS)}")
    bloch = obj["bloch"]
    if set(bloch) != {"theta", "phi", "vector"}:
        raise ValueError("bloch must carry theta, phi, vector")
    measurement = None
    if "measurement" in obj:
        measurement = record_from_payload(obj["measurement"])
    return TraceFrame(
        step=int(obj["step"]),
        orientation=tuple(float(v) for v in obj["orientation"]),
        alpha=complex(*obj["alpha"]),
        beta=complex(*obj["beta"]),
        pentagon=tuple(int(v) for v in obj["pentagon"]),
        hexagon=tuple(int(v) for v in obj["hexagon"]),
        theta=float(bloch["theta"]),
        phi=float(bloch["phi"]),
        vector=tuple(float(v) for v in bloch["vector"]),
        gamma=None if obj["gamma"] is None else float(obj["gamma"]),
        measurement=measurement,
    )


def parse_trace(text: str) -> list[TraceFrame]:
    """Parse trace JSON lines back into frames (numerically lossless)."""
    frames = []
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("frame must be a JSON object")
            frames.append(_frame_from_payload(obj))
        except json.JSONDecodeError as e:
            raise LogFormatError(f"line {n}: {e.msg}") from None
        except (ValueError, TypeError) as e:
            raise LogFormatError(f"line {n}: {e}") from None
    return frames


def emit_trace(states: Iterable[BallState], sink) -> list[TraceFrame]:
    """Write one frame line per state to sink; returns the frames."""
    frames = []
    for i, state in enumerate(states):
        frame = frame_from_state(state, step=i)
        sink.write(frame_to_json(frame) + "\n")
        frames.append(frame)
    return frames


def gamma_so_far(
    initial: BallState, current: BallState, closure_tol: float = DEFAULT_CLOSURE_TOL
) -> float | None:
    """0 or pi once the orientation is back at the session start, else None."""
    try:
        return classify_loop([initial, current], closure_tol).gamma
    except LoopNotClosed:
        return None


# ---------------------------------------------------------------------------
# event engine


@dataclass
class EventResult:
    """What one event did: final state, per-step states, side outputs."""

    state: BallState
    states: list
    record: MeasurementRecord | None = None
    annotation: str | None = None


def apply_event(state: BallState, event: SessionEvent, rng) -> EventResult:
    """Run one event against a state; rng feeds measurement draws only."""
    if isinstance(event, Rotate):
        per = event.angle / event.steps
        states = []
        for _ in range(event.steps):
            state = step(state, event.axis, per)
            states.append(state)
        return EventResult(state, states)
    if isinstance(event, Geodesic):
        states = []
        for axis, angle in geodesic_increments(event.start, event.end, event.steps):
            state = step(state, axis, angle)
            states.append(state)
        return EventResult(state, states)
    if isinstance(event, Fiber):
        per = event.delta / event.steps
        axis = state.principal_axis
        states = []
        for _ in range(event.steps):
            state = step(state, axis, per)
            states.append(state)
        return EventResult(state, states)
    if isinstance(event, Field):
        states = list(evolve_path(state, event.segment()))
        return EventResult(states[-1] if states else state, states)
    if isinstance(event, Measure):
        record, state = measure_axis(state, event.axis, rng)
        return EventResult(state, [state], record=record)
    if isinstance(event, Annotate):
        return EventResult(state, [], annotation=event.text)
    raise TypeError(f"unknown event type {type(event).__name__}")
