"""Continuous lifting of orientation paths from SO(3) to SU(2).

A BallState pairs the physical orientation with the unique SU(2) lift
reached by composing per-step rotors, each of angle strictly below pi.
That bound is what pins the sign: consecutive lifts always satisfy
dot(q_k, q_{k+1}) > 0, so the lift is the one connected to the identity
along the path actually taken.  Where the orientation alone forgets
whether the ball turned by 0 or by 2*pi, the lift does not.

The spinor is always apply(lift, anchor).  The anchor starts as the
initial spinor and is replaced only by measurement collapse (see
measurement.py), which also re-anchors the lift at the identity; the
anchor_orientation field records where that happened so that
project(lift) == orientation relative to the anchor stays checkable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .rotor_core import (
    IDENTITY_SO3,
    IDENTITY_SU2,
    SO3Element,
    SU2Element,
    Spinor,
    apply,
    compose,
    project,
    relative,
    rotate_vector,
    su2_from_axis_angle,
)

MAX_STEP_ANGLE = math.pi - 1e-6
DEFAULT_CLOSURE_TOL = 1e-6

_Z = np.array([0.0, 0.0, 1.0])


class StepTooLarge(ValueError):
    """A single step's rotation angle reached the lift-safety bound pi."""


class LoopNotClosed(ValueError):
    """Loop classification was asked for a path whose orientation does not close."""


@dataclass(frozen=True, eq=False)
class BallState:
    orientation: SO3Element
    lift: SU2Element
    spinor: Spinor
    principal_axis: np.ndarray
    step_count: int
    anchor: Spinor
    anchor_orientation: SO3Element


@dataclass(frozen=True)
class HomotopyClass:
    is_trivial: bool
    endpoint_sign: int
    gamma: float

    def __post_init__(self):
        if self.endpoint_sign not in (+1, -1):
            raise ValueError("endpoint_sign must be +1 or -1")
        expected = 0.0 if self.endpoint_sign == +1 else math.pi
        if self.gamma != expected or self.is_trivial != (self.endpoint_sign == +1):
            raise ValueError("inconsistent homotopy class fields")


def init(initial_spinor: Spinor | None = None) -> BallState:
    """Fresh state: identity orientation and lift, spinor = initial."""
    s = Spinor(1.0, 0.0) if initial_spinor is None else initial_spinor
    return BallState(
        orientation=IDENTITY_SO3,
        lift=IDENTITY_SU2,
        spinor=s,
        principal_axis=_Z.copy(),
        step_count=0,
        anchor=s,
        anchor_orientation=IDENTITY_SO3,
    )


def rotate(state: BallState, u: SU2Element, frame: str = "world") -> BallState:
    """Compose a known rotor onto the state (no angle bound; callers that
    follow a sampled path must go through step() instead)."""
    if frame == "world":
        lift = compose(u, state.lift)
        orientation = compose(project(u), state.orientation)
    elif frame == "body":
        lift = compose(state.lift, u)
        orientation = compose(state.orientation, project(u))
    else:
        raise ValueError(f"frame must be 'world' or 'body', got {frame!r}")
    return BallState(
        orientation=orientation,
        lift=lift,
        spinor=apply(lift, state.anchor),
        principal_axis=rotate_vector(orientation, _Z),
        step_count=state.step_count + 1,
        anchor=state.anchor,
        anchor_orientation=state.anchor_orientation,
    )


def step(state: BallState, axis, angle: float, frame: str = "world") -> BallState:
    """One rotation increment of |angle| < pi - 1e-6 about a unit axis."""
    if abs(angle) >= MAX_STEP_ANGLE:
        raise StepTooLarge(
            f"step angle {angle!r} reaches the pi bound; subdivide the path"
        )
    return rotate(state, su2_from_axis_angle(axis, angle), frame=frame)


def lift_path(
    orientations: Iterable[SO3Element], initial: BallState | None = None
) -> list[BallState]:
    """Lift a sampled orientation path, one BallState per sample.

    Consecutive samples must differ by a relative angle below pi; the
    increment between them is recovered with relative() and applied in the
    world frame.
    """
    state = init() if initial is None else initial
    out: list[BallState] = []
    prev = state
    for r in orientations:
        axis, angle = relative(prev.orientation, r)
        nxt = step(prev, axis, angle) if angle != 0.0 else rotate(prev, IDENTITY_SU2)
        out.append(nxt)
        prev = nxt
    return out


def quaternion_dot(a: SU2Element, b: SU2Element) -> float:
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z


def classify_loop(
    states: Sequence[BallState], closure_tol: float = DEFAULT_CLOSURE_TOL
) -> HomotopyClass:
    """Homotopy class of a closed orientation loop from its lifted endpoints."""
    if len(states) < 2:
        raise ValueError("need at least two states to classify a loop")
    first, last = states[0], states[-1]
    gap = float(np.linalg.norm(last.orientation.m - first.orientation.m))
    if gap > closure_tol:
        raise LoopNotClosed(
            f"orientation endpoints differ by {gap!r} (Frobenius), tol {closure_tol!r}"
        )
    sign = +1 if quaternion_dot(first.lift, last.lift) > 0.0 else -1
    return HomotopyClass(
        is_trivial=(sign == +1),
        endpoint_sign=sign,
        gamma=0.0 if sign == +1 else math.pi,
    )
