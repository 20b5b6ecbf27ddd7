"""Field-driven evolution d|psi>/dt = -i Omega(t).sigma |psi> (hbar = 1).

Each time step applies the rotor su2_from_axis_angle(n_mid, 2*|Omega_mid|*dt)
with Omega sampled at the step midpoint, composed through path_lift.step so
orientation, lift and spinor stay paired.  One exponential per step keeps
every step exactly unitary; the midpoint sampling makes the scheme exact
for constant fields and second-order accurate for time-dependent ones.

The factor 2 between generator and geometry: Omega.sigma exponentiates to a
rotation by angle 2*|Omega|*dt, so the physical rotation rate of the ball
is twice the field (field_to_rotation_rate).  A magnetic Hamiltonian
H = -B.sigma maps onto Omega(t) = -B(t); the identity part of any H is not
a rotation at all and only contributes the global phase e^{-i c (t1-t0)},
which trace_shift_check demonstrates against a direct matrix-exponential
integration of the shifted Hamiltonian.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np
from scipy.linalg import expm

from .path_lift import BallState, StepTooLarge, step

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

OmegaFn = Callable[[float], np.ndarray]


def step_is_lift_safe(omega, dt: float) -> bool:
    """True while the per-step rotation 2*|Omega|*dt stays below pi."""
    return 2.0 * float(np.linalg.norm(omega)) * dt < math.pi


@dataclass(frozen=True, eq=False)
class FieldSegment:
    """Omega over [t0, t1], integrated with time step dt.

    omega is either a constant 3-vector or a callable t -> 3-vector.
    """

    omega: np.ndarray | OmegaFn
    t0: float
    t1: float
    dt: float

    def __post_init__(self):
        if not self.t1 > self.t0:
            raise ValueError("need t1 > t0")
        if not self.dt > 0.0:
            raise ValueError("need dt > 0")
        if not callable(self.omega):
            om = np.asarray(self.omega, dtype=float)
            if om.shape != (3,):
                raise ValueError("constant omega must be a 3-vector")
            if not step_is_lift_safe(om, self.dt):
                raise ValueError("dt * max rotation rate reaches pi; shrink dt")
            object.__setattr__(self, "omega", om)

    def omega_at(self, t: float) -> np.ndarray:
        if callable(self.omega):
            return np.asarray(self.omega(t), dtype=float)
        return self.omega


def _steps(seg: FieldSegment) -> Iterator[tuple[float, float]]:
    """(t, h) pairs covering [t0, t1] with h = dt and a final remainder."""
    t = seg.t0
    while t < seg.t1 - 1e-12 * max(1.0, abs(seg.t1)):
        h = min(seg.dt, seg.t1 - t)
        yield t, h
        t += h


def evolve_path(state: BallState, seg: FieldSegment) -> Iterator[BallState]:
    """Yield the state after each integration step."""
    for t, h in _steps(seg):
        om = seg.omega_at(t + 0.5 * h)
        rate = float(np.linalg.norm(om))
        angle = 2.0 * rate * h
        if angle >= math.pi - 1e-6:
            raise StepTooLarge(
                f"field step at t = {t!r} needs angle {angle!r}; shrink dt"
            )
        if rate == 0.0:
            yield state  # exact identity step
            continue
        state = step(state, om / rate, angle)
        yield state


def evolve(state: BallState, seg: FieldSegment) -> BallState:
    for state in evolve_path(state, seg):
        pass
    return state


def field_to_rotation_rate(omega) -> np.ndarray:
    """Physical angular velocity of the ball for a given field."""
    return 2.0 * np.asarray(omega, dtype=float)


def magnetic_hamiltonian(field) -> Callable[[float, float, float], FieldSegment]:
    """Segment builder for H = -B.sigma, i.e. Omega(t) = -B(t).

    `field` is a constant 3-vector or callable t -> 3-vector; the returned
    builder takes (t0, t1, dt).
    """
    if callable(field):
        def omega(t: float) -> np.ndarray:
            return -np.asarray(field(t), dtype=float)
    else:
        omega = -np.asarray(field, dtype=float)

    def build(t0: float, t1: float, dt: float) -> FieldSegment:
        return FieldSegment(omega=omega, t0=t0, t1=t1, dt=dt)

    return build


def trace_shift_check(state: BallState, seg: FieldSegment, c: float) -> float:
    """Phase picked up by adding c*I to the Hamiltonian.

    The rotor route cannot see the trace; the comparison route integrates
    the full 2x2 Schrodinger equation for Omega.sigma + c*I with dense
    matrix exponentials.  Returns arg<psi_rotor|psi_shifted>, which must be
    -c*(t1-t0) up to wrapping; raises if the two routes disagree beyond
    the phase.
    """
    rotor_final = evolve(state, seg).spinor.as_array()
    psi = state.spinor.as_array()
    for t, h in _steps(seg):
        om = seg.omega_at(t + 0.5 * h)
        h_matrix = om[0] * SIGMA[0] + om[1] * SIGMA[1] + om[2] * SIGMA[2]
        h_matrix = h_matrix + c * np.eye(2)
        psi = expm(-1j * h * h_matrix) @ psi
    overlap = complex(np.vdot(rotor_final, psi))
    if abs(abs(overlap) - 1.0) > 1e-8:
        raise AssertionError(
            f"shifted evolution is not a pure phase away, |overlap| = {abs(overlap)!r}"
        )
    return cmath.phase(overlap)
