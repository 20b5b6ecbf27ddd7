"""Exact double-cover arithmetic: unit quaternions, SU(2) matrices, rotations.

Conventions (used everywhere else in this package, never redefined):

  * Quaternions are scalar-first Hamilton quaternions q = (w, x, y, z).
  * A rotation by angle theta about the unit axis n is the quaternion
        q = (cos(theta/2), sin(theta/2) * n)
    acting on vectors as v' = q v q*  (right-hand rule: theta > 0 turns
    x-hat into y-hat about z-hat).
  * The same q names the SU(2) matrix
        U(q) = w * I - i (x sigma_x + y sigma_y + z sigma_z)
    which equals exp(-i theta (sigma . n) / 2).  Quaternion products and
    matrix products agree: U(q1 q2) = U(q1) U(q2).
  * project() sends q to the SO(3) matrix of v -> q v q*; it is the 2:1
    homomorphism with project(u) = project(-u).

The half angle in U(q) is what makes the covering two-to-one: theta = 2*pi
gives the identity rotation but U = -I.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_UNIT_ATOL = 1e-9          # constructor-level norm checks
_EXACT_ATOL = 1e-14        # below this we skip renormalization entirely


class AmbiguousRelativeRotation(ValueError):
    """Relative rotation angle is within tolerance of pi; axis is not unique."""


def _as_unit_vector(v, atol: float = _UNIT_ATOL) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    n = float(np.linalg.norm(v))
    if abs(n - 1.0) > atol:
        raise ValueError(f"axis must be a unit vector, |axis| = {n!r}")
    if abs(n - 1.0) > _EXACT_ATOL:
        v = v / n
    return v


@dataclass(frozen=True)
class SU2Element:
    """Unit quaternion / SU(2) matrix per the module-level identification."""

    w: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        n2 = self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
        if abs(n2 - 1.0) > _UNIT_ATOL:
            raise ValueError(f"quaternion norm^2 = {n2!r}, expected 1")
        if abs(n2 - 1.0) > _EXACT_ATOL:
            n = math.sqrt(n2)
            object.__setattr__(self, "w", self.w / n)
            object.__setattr__(self, "x", self.x / n)
            object.__setattr__(self, "y", self.y / n)
            object.__setattr__(self, "z", self.z / n)

    def __neg__(self) -> "SU2Element":
        return SU2Element(-self.w, -self.x, -self.y, -self.z)

    def as_quaternion(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def as_matrix(self) -> np.ndarray:
        """The 2x2 complex matrix U(q) = w I - i (x sx + y sy + z sz)."""
        w, x, y, z = self.w, self.x, self.y, self.z
        return np.array(
            [[w - 1j * z, -y - 1j * x],
             [y - 1j * x, w + 1j * z]]
        )


@dataclass(frozen=True, eq=False)
class SO3Element:
    """Proper rotation matrix (3x3, orthogonal, det +1)."""

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
        if not np.allclose(m.T @ m, np.eye(3), rtol=0.0, atol=_UNIT_ATOL):
            raise ValueError("matrix is not orthogonal within 1e-9")
        if abs(float(np.linalg.det(m)) - 1.0) > _UNIT_ATOL:
            raise ValueError("matrix determinant is not +1 within 1e-9")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "m", m)


def _so3_trusted(m: np.ndarray) -> SO3Element:
    """Wrap a matrix that is orthogonal by construction, skipping checks.

    Internal: only for results of project/compose/Rodrigues, which stay
    orthogonal to machine precision.  Everything user-supplied goes through
    the validating constructor.
    """
    r = object.__new__(SO3Element)
    m.flags.writeable = False
    object.__setattr__(r, "m", m)
    return r


IDENTITY_SU2 = SU2Element(1.0, 0.0, 0.0, 0.0)
IDENTITY_SO3 = SO3Element(np.eye(3))


@dataclass(frozen=True)
class Spinor:
    """Normalized two-component complex state (alpha, beta)."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        n2 = abs(a) ** 2 + abs(b) ** 2
        if abs(n2 - 1.0) > _UNIT_ATOL:
            raise ValueError(f"spinor norm^2 = {n2!r}, expected 1")
        if abs(n2 - 1.0) > _EXACT_ATOL:
            n = math.sqrt(n2)
            a, b = a / n, b / n
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    def __neg__(self) -> "Spinor":
        return Spinor(-self.alpha, -self.beta)

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta])

    def overlap(self, other: "Spinor") -> complex:
        """Inner product <self|other>."""
        return (self.alpha.conjugate() * other.alpha
                + self.beta.conjugate() * other.beta)


# ---------------------------------------------------------------------------
# constructors


def su2_from_axis_angle(axis, angle: float) -> SU2Element:
    """Rotor for a rotation by `angle` (radians, any real) about unit `axis`."""
    n = _as_unit_vector(axis)
    h = 0.5 * float(angle)
    c, s = math.cos(h), math.sin(h)
    return SU2Element(c, s * n[0], s * n[1], s * n[2])


def so3_from_axis_angle(axis, angle: float) -> SO3Element:
    """Rodrigues rotation matrix for `angle` about unit `axis`."""
    n = _as_unit_vector(axis)
    k = np.array(
        [[0.0, -n[2], n[1]],
         [n[2], 0.0, -n[0]],
         [-n[1], n[0], 0.0]]
    )
    a = float(angle)
    m = np.eye(3) + math.sin(a) * k + (1.0 - math.cos(a)) * (k @ k)
    return _so3_trusted(m)


# ---------------------------------------------------------------------------
# group operations


def compose(a, b):
    """Group product a*b (apply b first, then a).  Renormalizes the result."""
    if isinstance(a, SU2Element) and isinstance(b, SU2Element):
        w = a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z
        x = a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y
        y = a.w * b.y + a.y * b.w + a.z * b.x - a.x * b.z
        z = a.w * b.z + a.z * b.w + a.x * b.y - a.y * b.x
        return SU2Element(w, x, y, z)
    if isinstance(a, SO3Element) and isinstance(b, SO3Element):
        m = a.m @ b.m
        # one orthogonalization step; drift per product is O(eps) so this
        # keeps compositions orthogonal to machine precision indefinitely
        m = m @ (1.5 * np.eye(3) - 0.5 * (m.T @ m))
        return _so3_trusted(m)
    raise TypeError(f"cannot compose {type(a).__name__} with {type(b).__name__}")


def inverse(u):
    """Group inverse (conjugate quaternion / transposed matrix)."""
    if isinstance(u, SU2Element):
        return SU2Element(u.w, -u.x, -u.y, -u.z)
    if isinstance(u, SO3Element):
        return _so3_trusted(u.m.T.copy())
    raise TypeError(f"cannot invert {type(u).__name__}")


def project(u: SU2Element) -> SO3Element:
    """The 2:1 covering map.  project(u) == project(-u)."""
    w, x, y, z = u.w, u.x, u.y, u.z
    m = np.array(
        [[1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
         [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
         [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)]]
    )
    return _so3_trusted(m)


def apply(u: SU2Element, s: Spinor) -> Spinor:
    """Act with U(u) on a spinor."""
    a = (u.w - 1j * u.z) * s.alpha + (-u.y - 1j * u.x) * s.beta
    b = (u.y - 1j * u.x) * s.alpha + (u.w + 1j * u.z) * s.beta
    return Spinor(a, b)


def rotate_vector(r: SO3Element, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return r.m @ v


def su2_from_matrix(m: np.ndarray) -> SU2Element:
    """Inverse of as_matrix() for a unitary 2x2 with det 1."""
    m = np.asarray(m, dtype=complex)
    w = 0.5 * (m[0, 0] + m[1, 1]).real
    z = -0.5 * (m[0, 0] - m[1, 1]).imag
    x = -0.5 * (m[0, 1] + m[1, 0]).imag
    y = 0.5 * (m[1, 0] - m[0, 1]).real
    return SU2Element(w, x, y, z)


def quaternion_from_so3(r: SO3Element) -> SU2Element:
    """One of the two quaternion preimages of r (the one with w >= 0).

    Shepperd-style branch selection keeps the extraction well conditioned
    for all rotation angles, including near pi.
    """
    m = r.m
    t = float(np.trace(m))
    if t > 0.0:
        s = math.sqrt(t + 1.0) * 2.0
        w = 0.25 * s
        x = (m[2, 1] - m[1, 2]) / s
        y = (m[0, 2] - m[2, 0]) / s
        z = (m[1, 0] - m[0, 1]) / s
    elif m[0, 0] > m[1, 1] and m[0, 0] > m[2, 2]:
        s = math.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2]) * 2.0
        w = (m[2, 1] - m[1, 2]) / s
        x = 0.25 * s
        y = (m[0, 1] + m[1, 0]) / s
        z = (m[0, 2] + m[2, 0]) / s
    elif m[1, 1] > m[2, 2]:
        s = math.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2]) * 2.0
        w = (m[0, 2] - m[2, 0]) / s
        x = (m[0, 1] + m[1, 0]) / s
        y = 0.25 * s
        z = (m[1, 2] + m[2, 1]) / s
    else:
        s = math.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1]) * 2.0
        w = (m[1, 0] - m[0, 1]) / s
        x = (m[0, 2] + m[2, 0]) / s
        y = (m[1, 2] + m[2, 1]) / s
        z = 0.25 * s
    q = SU2Element(w, x, y, z)
    return -q if q.w < 0.0 else q


def relative(a: SO3Element, b: SO3Element) -> tuple[np.ndarray, float]:
    """Axis and angle of the rotation r with r a = b, angle in [0, pi].

    The angle-pi case has two opposite valid axes, so it is rejected.
    """
    q = quaternion_from_so3(compose(b, inverse(a)))
    vec = np.array([q.x, q.y, q.z])
    vn = float(np.linalg.norm(vec))
    angle = 2.0 * math.atan2(vn, q.w)
    if angle >= math.pi - 1e-9:
        raise AmbiguousRelativeRotation(
            f"relative angle {angle!r} is within 1e-9 of pi; axis is ambiguous"
        )
    if vn == 0.0:
        return np.array([0.0, 0.0, 1.0]), 0.0
    return vec / vn, angle
