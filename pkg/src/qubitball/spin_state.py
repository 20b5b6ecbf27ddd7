"""Readout of a spinor: Bloch point, Hopf coordinates, panel colors.

Angle conventions:

  * Bloch angles come from expectation values, theta = atan2(hypot(<sx>,
    <sy>), <sz>) and phi = atan2(<sy>, <sx>) mod 2*pi, so they are global
    phase invariant by construction.  At the poles phi is set to 0.
  * The Euler-angle spinor is
        (e^{-i(delta+phi)/2} cos(theta/2), e^{-i(delta-phi)/2} sin(theta/2))
    optionally times -1.  delta is the fiber coordinate; because the sign
    is part of the state here, delta runs over [0, 4*pi) and rotating by
    delta about the Bloch axis multiplies the spinor by e^{-i delta/2}.

Color map (the encoding; decode inverts the same table):

  * hue = arg(z) linearly around the standard HSV wheel, arg 0 = red,
    2*pi/3 = green, 4*pi/3 = blue; saturation 1; value = |z|, linear,
    no gamma.  z = 0 is black.
  * 8-bit quantization picks the code whose decoded hue is nearest
    (then nearest modulus), which keeps the decoded hue within half a
    quantization step everywhere instead of a full step near sextant
    boundaries.
"""
from __future__ import annotations

import cmath
import colorsys
import math
from dataclasses import dataclass

import numpy as np

from .rotor_core import Spinor

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True, eq=False)
class BlochPoint:
    theta: float
    phi: float
    unit_vector: np.ndarray


@dataclass(frozen=True)
class HopfCoordinates:
    base: BlochPoint
    fiber_phase: float


@dataclass(frozen=True)
class PanelFrame:
    pentagon_rgb: tuple[int, int, int]
    hexagon_rgb: tuple[int, int, int]
    alpha: complex
    beta: complex


def bloch_point(s: Spinor) -> BlochPoint:
    """Bloch sphere point of a spinor (phase invariant)."""
    cross = s.alpha.conjugate() * s.beta
    sx = 2.0 * cross.real
    sy = 2.0 * cross.imag
    sz = abs(s.alpha) ** 2 - abs(s.beta) ** 2
    r_perp = math.hypot(sx, sy)
    theta = math.atan2(r_perp, sz)
    phi = math.atan2(sy, sx) % TWO_PI if r_perp > 0.0 else 0.0
    vec = np.array(
        [math.cos(phi) * math.sin(theta), math.sin(phi) * math.sin(theta), math.cos(theta)]
    )
    return BlochPoint(theta=theta, phi=phi, unit_vector=vec)


def spinor_from_euler(theta: float, phi: float, delta: float, sign: int = +1) -> Spinor:
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    a = cmath.exp(-0.5j * (delta + phi)) * math.cos(theta / 2.0)
    b = cmath.exp(-0.5j * (delta - phi)) * math.sin(theta / 2.0)
    return Spinor(sign * a, sign * b)


def hopf_coordinates(s: Spinor) -> HopfCoordinates:
    """Base point plus the fiber phase that reconstructs s with sign +1.

    At the poles the vanishing component carries no phase, so the fiber
    phase absorbs the full phase of the remaining one.
    """
    base = bloch_point(s)
    if abs(s.beta) == 0.0:
        delta = -2.0 * cmath.phase(s.alpha)
    elif abs(s.alpha) == 0.0:
        delta = -2.0 * cmath.phase(s.beta)
    else:
        delta = -2.0 * cmath.phase(s.alpha) - base.phi
    return HopfCoordinates(base=base, fiber_phase=delta % FOUR_PI)


# ---------------------------------------------------------------------------
# panel colors


def _decoded_hue_value(rgb: tuple[int, int, int]) -> tuple[float, float]:
    h, _, v = colorsys.rgb_to_hsv(rgb[0] / 255.0, rgb[1] / 255.0, rgb[2] / 255.0)
    return h, v


def _hue_distance(a: float, b: float) -> float:
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def color_encode(z: complex) -> tuple[int, int, int]:
    """Complex amplitude to 8-bit RGB per the module color map."""
    m = abs(z)
    if m > 1.0 + 1e-9:
        raise ValueError(f"|z| = {m!r} exceeds 1 beyond tolerance")
    m = min(m, 1.0)
    if m == 0.0:
        return (0, 0, 0)
    hue = (cmath.phase(z) % TWO_PI) / TWO_PI
    ideal = tuple(c * 255.0 * m for c in colorsys.hsv_to_rgb(hue, 1.0, 1.0))
    candidates = []
    for r in {math.floor(ideal[0]), math.ceil(ideal[0])}:
        for g in {math.floor(ideal[1]), math.ceil(ideal[1])}:
            for b in {math.floor(ideal[2]), math.ceil(ideal[2])}:
                cand = (int(min(max(r, 0), 255)), int(min(max(g, 0), 255)), int(min(max(b, 0), 255)))
                ch, cv = _decoded_hue_value(cand)
                candidates.append((_hue_distance(ch, hue), abs(cv - m), cand))
    # keep the modulus strictly inside a code step, then optimize hue
    inside = [c for c in candidates if c[1] < (1.0 - 1e-6) / 255.0]
    return min(inside or candidates)[2]


def color_decode(rgb: tuple[int, int, int]) -> complex:
    """Inverse of color_encode (assumes a saturated code)."""
    h, v = _decoded_hue_value(rgb)
    return v * cmath.exp(1j * TWO_PI * h)


def panel_frame(s: Spinor) -> PanelFrame:
    """Display frame: pentagons carry alpha, hexagons carry beta."""
    return PanelFrame(
        pentagon_rgb=color_encode(s.alpha),
        hexagon_rgb=color_encode(s.beta),
        alpha=s.alpha,
        beta=s.beta,
    )


def panel_frame_json(f: PanelFrame) -> dict:
    return {
        "pentagon": list(f.pentagon_rgb),
        "hexagon": list(f.hexagon_rgb),
        "alpha": [f.alpha.real, f.alpha.imag],
        "beta": [f.beta.real, f.beta.imag],
    }
