"""Double-cover arithmetic against independent matrix-exponential oracles."""
import math

import numpy as np
import pytest
from scipy.linalg import expm

from qubitball.rotor_core import (
    AmbiguousRelativeRotation,
    IDENTITY_SO3,
    IDENTITY_SU2,
    SO3Element,
    SU2Element,
    Spinor,
    apply,
    compose,
    inverse,
    project,
    quaternion_from_so3,
    relative,
    rotate_vector,
    so3_from_axis_angle,
    su2_from_axis_angle,
    su2_from_matrix,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

X, Y, Z = np.eye(3)


def random_axis(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def su2_oracle(axis, angle):
    """exp(-i angle (axis . sigma) / 2) via Pade, not via quaternions."""
    h = axis[0] * SX + axis[1] * SY + axis[2] * SZ
    return expm(-0.5j * angle * h)


def so3_oracle(axis, angle):
    k = np.array(
        [[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]]
    )
    return expm(angle * k)


class TestSU2Construction:
    def test_half_turn_about_z_matrix(self):
        # frozen value: diag(e^{-i pi/4}, e^{+i pi/4})
        u = su2_from_axis_angle(Z, math.pi / 2)
        expected = np.diag([np.exp(-0.25j * math.pi), np.exp(0.25j * math.pi)])
        assert np.allclose(u.as_matrix(), expected, atol=1e-15)

    def test_full_turn_is_minus_identity(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            u = su2_from_axis_angle(random_axis(rng), 2 * math.pi)
            assert np.allclose(u.as_quaternion(), [-1, 0, 0, 0], atol=1e-12)

    def test_matches_matrix_exponential(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            axis = random_axis(rng)
            angle = rng.uniform(-4 * math.pi, 4 * math.pi)
            u = su2_from_axis_angle(axis, angle)
            assert np.allclose(u.as_matrix(), su2_oracle(axis, angle), atol=1e-12)

    def test_non_unit_axis_rejected(self):
        with pytest.raises(ValueError):
            su2_from_axis_angle([0.0, 0.0, 2.0], 0.1)
        with pytest.raises(ValueError):
            su2_from_axis_angle([0.0, 0.0, 0.0], 0.1)

    def test_norm_validation(self):
        with pytest.raises(ValueError):
            SU2Element(1.0, 1.0, 0.0, 0.0)

    def test_matrix_round_trip(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            u = su2_from_axis_angle(random_axis(rng), rng.uniform(0, 2 * math.pi))
            v = su2_from_matrix(u.as_matrix())
            assert np.allclose(u.as_quaternion(), v.as_quaternion(), atol=1e-12)


class TestSO3Construction:
    def test_quarter_turn_about_z(self):
        expected = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]], dtype=float)
        r = so3_from_axis_angle(Z, math.pi / 2)
        assert np.allclose(r.m, expected, atol=1e-15)

    def test_full_turn_is_identity(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            r = so3_from_axis_angle(random_axis(rng), 2 * math.pi)
            assert np.allclose(r.m, np.eye(3), atol=1e-12)

    def test_matches_matrix_exponential(self):
        rng = np.random.default_rng(22)
        for _ in range(50):
            axis = random_axis(rng)
            angle = rng.uniform(-2 * math.pi, 2 * math.pi)
            r = so3_from_axis_angle(axis, angle)
            assert np.allclose(r.m, so3_oracle(axis, angle), atol=1e-12)

    def test_rejects_non_rotation(self):
        with pytest.raises(ValueError):
            SO3Element(np.diag([1.0, 1.0, 2.0]))
        with pytest.raises(ValueError):
            SO3Element(np.diag([1.0, 1.0, -1.0]))  # reflection


class TestProjection:
    def test_projection_identifies_signs(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            u = su2_from_axis_angle(random_axis(rng), rng.uniform(0, 2 * math.pi))
            assert np.allclose(project(u).m, project(-u).m, atol=1e-15)

    def test_angle_convention_agrees(self):
        # project(su2(n, t)) == so3(n, t) for the same right-hand convention
        rng = np.random.default_rng(32)
        for _ in range(50):
            axis = random_axis(rng)
            angle = rng.uniform(-math.pi, math.pi)
            assert np.allclose(
                project(su2_from_axis_angle(axis, angle)).m,
                so3_from_axis_angle(axis, angle).m,
                atol=1e-12,
            )

    def test_homomorphism(self):
        rng = np.random.default_rng(33)
        for _ in range(200):
            a = su2_from_axis_angle(random_axis(rng), rng.uniform(0, 4 * math.pi))
            b = su2_from_axis_angle(random_axis(rng), rng.uniform(0, 4 * math.pi))
            assert np.allclose(
                project(compose(a, b)).m,
                compose(project(a), project(b)).m,
                atol=1e-9,
            )


class TestCompose:
    def test_two_half_turns_make_minus_identity(self):
        rng = np.random.default_rng(41)
        axis = random_axis(rng)
        u = su2_from_axis_angle(axis, math.pi)
        m = compose(u, u)
        assert np.allclose(m.as_quaternion(), [-1, 0, 0, 0], atol=1e-12)

    def test_norm_stays_unit_over_long_products(self):
        rng = np.random.default_rng(42)
        u = IDENTITY_SU2
        r = IDENTITY_SO3
        inc_u = su2_from_axis_angle(random_axis(rng), 0.1)
        inc_r = project(inc_u)
        for _ in range(10_000):
            u = compose(inc_u, u)
            r = compose(inc_r, r)
        assert abs(sum(c * c for c in u.as_quaternion()) - 1.0) < 1e-12
        assert np.allclose(r.m.T @ r.m, np.eye(3), atol=1e-12)

    def test_inverse(self):
        rng = np.random.default_rng(43)
        u = su2_from_axis_angle(random_axis(rng), 1.2)
        assert np.allclose(
            compose(u, inverse(u)).as_quaternion(), [1, 0, 0, 0], atol=1e-15
        )
        r = project(u)
        assert np.allclose(compose(r, inverse(r)).m, np.eye(3), atol=1e-15)

    def test_type_mismatch(self):
        with pytest.raises(TypeError):
            compose(IDENTITY_SU2, IDENTITY_SO3)


class TestApply:
    def test_z_rotor_phases(self):
        # su2(z, delta) |up> = e^{-i delta/2} |up>
        for delta in (0.3, 1.0, math.pi, 5.0):
            u = su2_from_axis_angle(Z, delta)
            s = apply(u, Spinor(1.0, 0.0))
            assert abs(s.alpha - np.exp(-0.5j * delta)) < 1e-15
            assert s.beta == 0.0

    def test_norm_preserved(self):
        rng = np.random.default_rng(51)
        s = Spinor(0.6, 0.8j)
        for _ in range(50):
            u = su2_from_axis_angle(random_axis(rng), rng.uniform(0, 2 * math.pi))
            s = apply(u, s)
            assert abs(abs(s.alpha) ** 2 + abs(s.beta) ** 2 - 1.0) < 1e-12

    def test_matches_matrix_action(self):
        rng = np.random.default_rng(52)
        for _ in range(20):
            axis = random_axis(rng)
            angle = rng.uniform(0, 2 * math.pi)
            u = su2_from_axis_angle(axis, angle)
            expected = su2_oracle(axis, angle) @ np.array([0.6, 0.8j])
            got = apply(u, Spinor(0.6, 0.8j))
            assert np.allclose(got.as_array(), expected, atol=1e-12)

    def test_spinor_validation(self):
        with pytest.raises(ValueError):
            Spinor(0.59, 0.8)


class TestRotateVector:
    def test_right_hand_convention(self):
        # quarter turn about x sends z to -y under v' = q v q*
        r = so3_from_axis_angle(X, math.pi / 2)
        assert np.allclose(rotate_vector(r, Z), -Y, atol=1e-15)
        r = so3_from_axis_angle(Z, math.pi / 2)
        assert np.allclose(rotate_vector(r, X), Y, atol=1e-15)

    def test_identity(self):
        assert np.allclose(rotate_vector(IDENTITY_SO3, Z), Z)


class TestRelative:
    def test_simple_case(self):
        axis, angle = relative(IDENTITY_SO3, so3_from_axis_angle(Y, 0.3))
        assert np.allclose(axis, Y, atol=1e-12)
        assert abs(angle - 0.3) < 1e-12

    def test_recovers_increment(self):
        rng = np.random.default_rng(61)
        for _ in range(100):
            a = so3_from_axis_angle(random_axis(rng), rng.uniform(0, 2 * math.pi))
            inc_axis = random_axis(rng)
            inc_angle = rng.uniform(1e-3, math.pi - 1e-3)
            b = compose(so3_from_axis_angle(inc_axis, inc_angle), a)
            axis, angle = relative(a, b)
            assert abs(angle - inc_angle) < 1e-9
            assert np.allclose(axis, inc_axis, atol=1e-8)

    def test_zero_angle(self):
        r = so3_from_axis_angle(Y, 1.0)
        axis, angle = relative(r, r)
        assert angle == 0.0
        assert np.allclose(axis, Z)  # fixed arbitrary choice

    def test_near_pi_is_ambiguous(self):
        rng = np.random.default_rng(62)
        a = so3_from_axis_angle(random_axis(rng), 0.7)
        b = compose(so3_from_axis_angle(X, math.pi), a)
        with pytest.raises(AmbiguousRelativeRotation):
            relative(a, b)
        b = compose(so3_from_axis_angle(X, math.pi - 1e-10), a)
        with pytest.raises(AmbiguousRelativeRotation):
            relative(a, b)

    def test_just_below_threshold_ok(self):
        a = IDENTITY_SO3
        b = so3_from_axis_angle(X, math.pi - 1e-6)
        axis, angle = relative(a, b)
        assert abs(angle - (math.pi - 1e-6)) < 1e-9
        assert np.allclose(axis, X, atol=1e-6)


class TestQuaternionFromSO3:
    def test_round_trip_all_angle_ranges(self):
        rng = np.random.default_rng(71)
        for angle in list(np.linspace(0.0, math.pi - 1e-4, 20)) + [
            rng.uniform(0, math.pi) for _ in range(30)
        ]:
            axis = random_axis(rng)
            u = su2_from_axis_angle(axis, angle)
            q = quaternion_from_so3(project(u))
            assert q.w >= 0.0
            dot = abs(float(np.dot(q.as_quaternion(), u.as_quaternion())))
            assert abs(dot - 1.0) < 1e-9
