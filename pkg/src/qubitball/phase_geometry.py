"""Geodesic loops on the sphere, solid angles, and Berry-phase experiments.

The solid angle here is an oracle deliberately independent of any lifting:
the loop is fanned into spherical triangles from its first vertex and each
triangle contributes the two-argument-arctangent area

    Omega = 2 * atan2(det[a b c], 1 + a.b + b.c + c.a)

signed positive for counterclockwise circulation seen from outside the
sphere.  Transporting an aligned spinor around the loop with the per-edge
rotors must then reproduce overlap phase = -Omega/2 (spin up; opposite
sign for spin down), which berry_experiment reports and checks.

Geodesic edges are single-axis rotations, so subdividing them changes the
endpoint rotor only at rounding level; the samples_per_edge knob exists to
keep every individual step well below the pi lift-safety bound and to give
downstream consumers a smooth trace.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import path_lift
from .rotor_core import Spinor
from .spin_state import bloch_point

DEFAULT_STEPS_PER_QUARTER_ARC = 90
DEFAULT_BERRY_TOLERANCE = 1e-6
_ANTIPODAL_TOL = 1e-6


class AmbiguousGeodesic(ValueError):
    """Endpoints are antipodal within tolerance; the great circle is not unique."""


class PhaseUndefined(ValueError):
    """Final state is orthogonal to the start; no overlap phase exists."""


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(v))
    if abs(n - 1.0) > 1e-9:
        raise ValueError(f"loop vertices must be unit vectors, |v| = {n!r}")
    return v / n


@dataclass(frozen=True, eq=False)
class GeodesicLoop:
    """Closed spherical polygon; the edge back to vertices[0] is implied."""

    vertices: tuple
    samples_per_edge: int

    def __post_init__(self):
        verts = tuple(_unit(v) for v in self.vertices)
        if len(verts) < 2:
            raise ValueError("a loop needs at least two vertices")
        if self.samples_per_edge < 8:
            raise ValueError("samples_per_edge must be at least 8")
        for i, v in enumerate(verts):
            w = verts[(i + 1) % len(verts)]
            if float(np.linalg.norm(v + w)) <= _ANTIPODAL_TOL:
                raise AmbiguousGeodesic(
                    f"vertices {i} and {(i + 1) % len(verts)} are antipodal"
                )
        object.__setattr__(self, "vertices", verts)


@dataclass(frozen=True)
class PhaseReport:
    overlap_phase: float
    solid_angle: float
    berry_prediction: float
    mismatch: float
    tolerance: float
    agrees: bool
    gamma: float | None


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    w = math.fmod(a + math.pi, 2.0 * math.pi)
    if w <= 0.0:
        w += 2.0 * math.pi
    return w - math.pi


def geodesic_increments(start, end, steps: int) -> list[tuple[np.ndarray, float]]:
    """Per-step (axis, angle) pairs rotating `start` onto `end` along the
    great circle.  All steps share the axis (start x end)/|start x end|."""
    a, b = _unit(start), _unit(end)
    if steps < 1:
        raise ValueError("steps must be positive")
    if float(np.linalg.norm(a + b)) <= _ANTIPODAL_TOL:
        raise AmbiguousGeodesic("endpoints are antipodal; geodesic is not unique")
    cross = np.cross(a, b)
    sin_total = float(np.linalg.norm(cross))
    total = math.atan2(sin_total, float(np.dot(a, b)))
    if sin_total == 0.0:
        return [(np.array([0.0, 0.0, 1.0]), 0.0)] * steps
    axis = cross / sin_total
    return [(axis, total / steps)] * steps


def solid_angle(loop: GeodesicLoop) -> float:
    """Signed enclosed solid angle; no lifting involved."""
    verts = loop.vertices
    if len(verts) < 3:
        return 0.0
    total = 0.0
    v0 = verts[0]
    for i in range(1, len(verts) - 1):
        a, b, c = v0, verts[i], verts[i + 1]
        num = float(np.dot(a, np.cross(b, c)))
        den = 1.0 + float(np.dot(a, b)) + float(np.dot(b, c)) + float(np.dot(c, a))
        total += 2.0 * math.atan2(num, den)
    return total


def transport(loop: GeodesicLoop, state: path_lift.BallState) -> list[path_lift.BallState]:
    """Carry a BallState around the loop edge by edge; per-sample states."""
    out = []
    verts = loop.vertices
    for i in range(len(verts)):
        a, b = verts[i], verts[(i + 1) % len(verts)]
        for axis, angle in geodesic_increments(a, b, loop.samples_per_edge):
            state = path_lift.step(state, axis, angle)
            out.append(state)
    return out


def berry_experiment(
    loop: GeodesicLoop,
    initial: Spinor,
    tolerance: float = DEFAULT_BERRY_TOLERANCE,
) -> PhaseReport:
    """Transport `initial` around the loop and compare the overlap phase
    against the solid-angle prediction.

    `initial` must sit on the loop's start vertex (spin up, prediction
    -Omega/2) or on its antipode (spin down, prediction +Omega/2).
    """
    start = bloch_point(initial).unit_vector
    v0 = loop.vertices[0]
    if float(np.linalg.norm(start - v0)) < 1e-6:
        spin_sign = -1.0
    elif float(np.linalg.norm(start + v0)) < 1e-6:
        spin_sign = +1.0
    else:
        raise ValueError(
            "initial spinor must point along the loop's first vertex or its antipode"
        )
    states = transport(loop, path_lift.init(initial))
    final = states[-1]
    overlap = initial.overlap(final.spinor)
    if abs(overlap) < 1e-9:
        raise PhaseUndefined("final state is orthogonal to the initial state")
    omega = solid_angle(loop)
    prediction = spin_sign * omega / 2.0
    phase = cmath.phase(overlap)
    mismatch = abs(wrap_angle(phase - prediction))
    gamma = None
    gap = float(np.linalg.norm(final.orientation.m - np.eye(3)))
    if gap <= path_lift.DEFAULT_CLOSURE_TOL:
        gamma = path_lift.classify_loop([path_lift.init(initial)] + states).gamma
    return PhaseReport(
        overlap_phase=phase,
        solid_angle=omega,
        berry_prediction=prediction,
        mismatch=mismatch,
        tolerance=tolerance,
        agrees=mismatch < tolerance,
        gamma=gamma,
    )


def parallel_transport_correction(
    theta0: float, steps: int = 4 * DEFAULT_STEPS_PER_QUARTER_ARC
) -> list[tuple[np.ndarray, float]]:
    """Increments tracing the latitude circle at polar angle theta0 while
    parallel-transporting the frame (no twist about the moving axis).

    Plain rotation about z would add a rotation about the principal axis at
    rate cos(theta0); the returned increments subtract it, leaving angular
    velocity p x dp/dt of magnitude sin(theta0) per unit of azimuth.  An
    aligned spinor carried through them acquires the cap Berry phase
    -pi*(1 - cos(theta0)).
    """
    if not 0.0 < theta0 < math.pi:
        raise ValueError("theta0 must lie strictly between 0 and pi")
    if steps < 8:
        raise ValueError("steps must be at least 8")
    h = 2.0 * math.pi / steps
    z = np.array([0.0, 0.0, 1.0])
    out = []
    for k in range(steps):
        phi_mid = (k + 0.5) * h
        p_mid = np.array(
            [
                math.sin(theta0) * math.cos(phi_mid),
                math.sin(theta0) * math.sin(phi_mid),
                math.cos(theta0),
            ]
        )
        axis = z - math.cos(theta0) * p_mid
        axis /= np.linalg.norm(axis)
        out.append((axis, math.sin(theta0) * h))
    return out


def loop_from_json(obj: dict) -> GeodesicLoop:
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise ValueError("loop JSON must be an object with a 'vertices' list")
    return GeodesicLoop(
        vertices=tuple(np.asarray(v, dtype=float) for v in obj["vertices"]),
        samples_per_edge=int(obj.get("samples_per_edge", DEFAULT_STEPS_PER_QUARTER_ARC)),
    )


def loop_to_json(loop: GeodesicLoop) -> dict:
    return {
        "vertices": [list(map(float, v)) for v in loop.vertices],
        "samples_per_edge": loop.samples_per_edge,
    }
