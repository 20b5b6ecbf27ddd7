"""Projective measurement with quantum statistics, along z or any axis.

Outcome rule (strict): a uniform draw t decides up exactly when t < p_up,
so a tie at t = p_up collapses down.  The up branch keeps the up
amplitude's phase: post state (alpha/|alpha|, 0); the down branch keeps
the down amplitude's: (0, beta/|beta|).

Collapse is the one discontinuity the continuous lift cannot span, so
measure_z re-anchors the state: the collapsed spinor becomes the new
anchor, the lift resets to the identity, and anchor_orientation records
the orientation at that moment.  The orientation itself never moves.
project(lift) always equals the orientation relative to the anchor's.

An arbitrary axis is measured by the rotate-measure-derotate protocol:
apply the inverse of the rotor S taking z to the axis, measure along z,
then apply S.  S is the geodesic rotation (unique away from -z; at -z it
is the half turn about x).  The detour leaves the probability equal to
the direct projector value |<n|psi>|^2 and the final state on the axis
eigenstate picked by the outcome.

All randomness flows through RandomStream, a counted, seedable uniform
source whose vectorized draws match its sequential ones, so bulk
statistics and step-by-step sessions consume identical numbers.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .path_lift import BallState, rotate
from .rotor_core import (
    IDENTITY_SU2,
    SU2Element,
    Spinor,
    _as_unit_vector,
    apply,
    inverse,
    su2_from_axis_angle,
)

_X = np.array([1.0, 0.0, 0.0])
_Z = np.array([0.0, 0.0, 1.0])


@dataclass
class RandomStream:
    """Counted uniform draws in [0, 1) from a seeded PCG64 generator.

    count is the number of draws consumed so far; constructing a stream
    with a nonzero count fast-forwards past that many draws, so a
    recorded (seed, count) pair resumes a session's randomness in place.

    Splitting rule: the k-th child spawned from a stream carries
    spawn_key = parent key + (k,), and a stream with seed s and spawn key
    K draws from SeedSequence(s, spawn_key=K).  Children are independent
    of the parent and of each other and consume nothing from the parent.
    """

    seed: int
    spawn_key: tuple = ()
    count: int = 0

    def __post_init__(self):
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        self._generator = np.random.Generator(np.random.PCG64(sequence))
        self._spawned = 0
        if self.count:
            self._generator.random(self.count)

    def uniform(self) -> float:
        value = float(self._generator.random())
        self.count += 1
        return value

    def uniforms(self, n: int) -> np.ndarray:
        """n draws at once, identical to n sequential uniform() calls."""
        values = self._generator.random(int(n))
        self.count += int(n)
        return values

    def spawn(self) -> "RandomStream":
        child = RandomStream(self.seed, self.spawn_key + (self._spawned,))
        self._spawned += 1
        return child


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    """One projective measurement: the draw, the outcome, the collapse.

    Deliberately excludes the pre-measurement amplitudes; a record plus
    its post state cannot reconstruct what was destroyed.
    """

    axis: np.ndarray
    outcome: int
    p_up: float
    draw: float
    post_state: Spinor
    seed_position: int

    def __post_init__(self):
        axis = _as_unit_vector(self.axis)
        axis.flags.writeable = False
        object.__setattr__(self, "axis", axis)
        if self.outcome not in (+1, -1):
            raise ValueError(f"outcome must be +1 or -1, got {self.outcome!r}")
        if not 0.0 <= self.p_up <= 1.0:
            raise ValueError(f"p_up must lie in [0, 1], got {self.p_up!r}")
        if not 0.0 <= self.draw < 1.0:
            raise ValueError(f"draw must lie in [0, 1), got {self.draw!r}")
        if (self.outcome == +1) != (self.draw < self.p_up):
            raise ValueError("outcome must be +1 exactly when draw < p_up")
        norm2 = abs(self.post_state.alpha) ** 2 + abs(self.post_state.beta) ** 2
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError("post_state must be normalized within 1e-12")


@dataclass(frozen=True, eq=False)
class FrequencyReport:
    """Empirical up-frequency over seeded trials against the expected p."""

    axis: np.ndarray
    trials: int
    expected_p: float
    observed_p: float
    up_count: int
    standard_error: float
    bound: float
    within_bound: bool
    seed: int


def _up_probability(s: Spinor) -> float:
    # exact in the degenerate cases, where the draw is deterministic; the
    # clamp absorbs representation roundoff a few ulp past 1
    a = abs(s.alpha)
    if abs(s.beta) == 0.0:
        return 1.0
    if a == 0.0:
        return 0.0
    return min(1.0, a * a)


def _rotor_taking_z_to(axis: np.ndarray) -> SU2Element:
    """Geodesic rotor S with S z = axis; half turn about x at the antipode."""
    sin_part = math.hypot(axis[0], axis[1])
    if sin_part == 0.0:
        if axis[2] > 0.0:
            return IDENTITY_SU2
        return su2_from_axis_angle(_X, math.pi)
    rotation_axis = np.array([-axis[1], axis[0], 0.0]) / sin_part
    return su2_from_axis_angle(rotation_axis, math.atan2(sin_part, axis[2]))


def measure_z(state: BallState, rng) -> tuple[MeasurementRecord, BallState]:
    """Measure along z: draw, collapse the spinor, re-anchor the lift."""
    s = state.spinor
    p_up = _up_probability(s)
    position = rng.count
    draw = rng.uniform()
    if draw < p_up:
        outcome = +1
        post = Spinor(s.alpha / abs(s.alpha), 0.0)
    else:
        outcome = -1
        post = Spinor(0.0, s.beta / abs(s.beta))
    record = MeasurementRecord(
        axis=_Z.copy(),
        outcome=outcome,
        p_up=p_up,
        draw=draw,
        post_state=post,
        seed_position=position,
    )
    collapsed = BallState(
        orientation=state.orientation,
        lift=IDENTITY_SU2,
        spinor=post,
        principal_axis=state.principal_axis,
        step_count=state.step_count,
        anchor=post,
        anchor_orientation=state.orientation,
    )
    return record, collapsed


def measure_axis(state: BallState, axis, rng) -> tuple[MeasurementRecord, BallState]:
    """Rotate-measure-derotate along an arbitrary unit axis.

    Outcome +1 occurs with probability |<n|psi>|^2 and leaves the state on
    |n>, outcome -1 on |-n>, each up to the phase inherited from the
    collapsed branch.
    """
    n = _as_unit_vector(axis)
    forward = _rotor_taking_z_to(n)
    turned = rotate(state, inverse(forward))
    partial, collapsed = measure_z(turned, rng)
    restored = rotate(collapsed, forward)
    record = MeasurementRecord(
        axis=n,
        outcome=partial.outcome,
        p_up=partial.p_up,
        draw=partial.draw,
        post_state=restored.spinor,
        seed_position=partial.seed_position,
    )
    return record, restored


def statistics(state: BallState, axis, trials: int, seed: int) -> FrequencyReport:
    """Seeded up-frequency over repeated measurements of the same state.

    The input state is never touched; every trial measures a fresh copy.
    Draws come vectorized from RandomStream(seed), so the up-count equals
    what the same number of sequential measure_axis calls would produce
    with that stream on an identically anchored state.  Pass/fail is the
    binomial 5-sigma bound 5 sqrt(p(1-p)/trials).
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials!r}")
    n = _as_unit_vector(axis)
    turned = apply(inverse(_rotor_taking_z_to(n)), state.spinor)
    p = _up_probability(turned)
    stream = RandomStream(int(seed))
    ups = int(np.count_nonzero(stream.uniforms(trials) < p))
    observed = ups / trials
    sigma = math.sqrt(p * (1.0 - p) / trials)
    bound = 5.0 * sigma
    return FrequencyReport(
        axis=n,
        trials=int(trials),
        expected_p=p,
        observed_p=observed,
        up_count=ups,
        standard_error=sigma,
        bound=bound,
        within_bound=bool(abs(observed - p) <= bound),
        seed=int(seed),
    )


def record_payload(record: MeasurementRecord) -> dict:
    """JSON-ready dict for a record, fixed key order."""
    return {
        "axis": [float(c) for c in record.axis],
        "outcome": record.outcome,
        "p_up": record.p_up,
        "draw": record.draw,
        "post": {
            "alpha": [record.post_state.alpha.real, record.post_state.alpha.imag],
            "beta": [record.post_state.beta.real, record.post_state.beta.imag],
        },
        "seed_position": record.seed_position,
    }


def record_from_payload(payload: dict) -> MeasurementRecord:
    """Rebuild a record from its payload; ValueError on bad shape."""
    if not isinstance(payload, dict) or set(payload) != set(
        ("axis", "outcome", "p_up", "draw", "post", "seed_position")
    ):
        raise ValueError("malformed measurement payload")
    post = payload["post"]
    if set(post) != {"alpha", "beta"}:
        raise ValueError("malformed measurement post state")
    return MeasurementRecord(
        axis=np.asarray(payload["axis"], dtype=float),
        outcome=int(payload["outcome"]),
        p_up=float(payload["p_up"]),
        draw=float(payload["draw"]),
        post_state=Spinor(complex(*post["alpha"]), complex(*post["beta"])),
        seed_position=int(payload["seed_position"]),
    )


def record_to_json(record: MeasurementRecord) -> str:
    """One compact JSON line per record, fixed key order."""
    return json.dumps(record_payload(record), separators=(",", ":"))
