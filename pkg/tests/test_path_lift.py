"""Lift bookkeeping: sign memory, continuity witness, loop classification."""
import math

import numpy as np
import pytest

from qubitball.path_lift import (
    BallState,
    HomotopyClass,
    LoopNotClosed,
    StepTooLarge,
    classify_loop,
    init,
    lift_path,
    quaternion_dot,
    step,
)
from qubitball.rotor_core import (
    Spinor,
    compose,
    project,
    so3_from_axis_angle,
    su2_from_axis_angle,
)

X = np.array([1.0, 0.0, 0.0])
Y = np.array([0.0, 1.0, 0.0])
Z = np.array([0.0, 0.0, 1.0])


def walk(state, axis, angle, n):
    for _ in range(n):
        state = step(state, axis, angle / n)
    return state


class TestInit:
    def test_defaults(self):
        s = init()
        assert s.spinor.alpha == 1.0 and s.spinor.beta == 0.0
        assert np.allclose(s.orientation.m, np.eye(3))
        assert np.allclose(s.principal_axis, Z)
        assert s.step_count == 0

    def test_custom_initial(self):
        s = init(Spinor(0.6, 0.8))
        assert s.spinor.alpha == 0.6

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError):
            init(Spinor(0.59, 0.8))


class TestStep:
    def test_full_turn_flips_spinor_sign(self):
        s = walk(init(), X, 2 * math.pi, 100)
        assert np.allclose(s.orientation.m, np.eye(3), atol=1e-9)
        assert abs(s.spinor.alpha - (-1.0)) < 1e-8
        assert abs(s.spinor.beta) < 1e-12
        assert abs(quaternion_dot(s.lift, init().lift) - (-1.0)) < 1e-9

    def test_double_turn_restores(self):
        s = walk(init(), X, 4 * math.pi, 200)
        assert abs(s.spinor.alpha - 1.0) < 1e-8
        assert s.step_count == 200

    def test_angle_bound(self):
        with pytest.raises(StepTooLarge):
            step(init(), X, math.pi - 1e-7)
        with pytest.raises(StepTooLarge):
            step(init(), X, -math.pi)
        step(init(), X, math.pi - 1e-5)  # just under the bound is fine

    def test_world_vs_body_frame(self):
        tilted = step(init(), Y, 0.8)
        w = step(tilted, Z, 0.5, frame="world")
        b = step(tilted, Z, 0.5, frame="body")
        rz = so3_from_axis_angle(Z, 0.5)
        assert np.allclose(w.orientation.m, rz.m @ tilted.orientation.m, atol=1e-12)
        assert np.allclose(b.orientation.m, tilted.orientation.m @ rz.m, atol=1e-12)

    def test_spinor_tracks_lift_times_anchor(self):
        rng = np.random.default_rng(5)
        s = init(Spinor(0.6, 0.8j))
        for _ in range(50):
            axis = rng.normal(size=3)
            axis /= np.linalg.norm(axis)
            s = step(s, axis, rng.uniform(-3, 3))
        expected = s.lift.as_matrix() @ np.array([0.6, 0.8j])
        assert np.allclose(s.spinor.as_array(), expected, atol=1e-12)

    def test_brute_force_matrix_product(self):
        # same path reduced by raw 2x2 complex matmul, no quaternion code
        rng = np.random.default_rng(6)
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
        sz = np.array([[1, 0], [0, -1]], dtype=complex)
        s = init()
        u = np.eye(2, dtype=complex)
        for _ in range(50):
            axis = rng.normal(size=3)
            axis /= np.linalg.norm(axis)
            angle = rng.uniform(-3, 3)
            s = step(s, axis, angle)
            h = axis[0] * sx + axis[1] * sy + axis[2] * sz
            u = (
                math.cos(angle / 2) * np.eye(2) - 1j * math.sin(angle / 2) * h
            ) @ u
        assert np.allclose(s.lift.as_matrix(), u, atol=1e-10)

    def test_principal_axis_follows_orientation(self):
        s = step(init(), Y, math.pi / 2)
        assert np.allclose(s.principal_axis, X, atol=1e-12)


def sampled_loop(axis, total, k):
    return [so3_from_axis_angle(axis, total * i / k) for i in range(k + 1)]


class TestLiftPath:
    def test_full_turn_lifts_to_minus_identity(self):
        states = lift_path(sampled_loop(Y, 2 * math.pi, 360))
        assert np.allclose(states[-1].lift.as_quaternion(), [-1, 0, 0, 0], atol=1e-9)

    def test_constant_path(self):
        states = lift_path([init().orientation] * 3)
        assert len(states) == 3
        for s in states:
            assert np.allclose(s.lift.as_quaternion(), [1, 0, 0, 0])

    def test_consecutive_quaternion_dots_positive(self):
        rng = np.random.default_rng(7)
        orientations = []
        r = init().orientation
        for _ in range(200):
            axis = rng.normal(size=3)
            axis /= np.linalg.norm(axis)
            r = compose(so3_from_axis_angle(axis, rng.uniform(0, 0.5)), r)
            orientations.append(r)
        states = lift_path(orientations)
        prev = init()
        for s in states:
            assert quaternion_dot(prev.lift, s.lift) > 0.0
            prev = s

    def test_reprojection_consistency(self):
        states = lift_path(sampled_loop(X, 2 * math.pi, 360))
        for s in states:
            assert np.linalg.norm(project(s.lift).m - s.orientation.m) < 1e-8

    def test_refinement_stability(self):
        def path(k):
            # smooth two-axis path, fixed endpoints
            return [
                compose(
                    so3_from_axis_angle(X, 2.0 * i / k),
                    so3_from_axis_angle(Y, 1.0 * i / k),
                )
                for i in range(k + 1)
            ]

        a = lift_path(path(200))[-1].lift.as_quaternion()
        b = lift_path(path(400))[-1].lift.as_quaternion()
        assert np.linalg.norm(a - b) < 1e-6


class TestClassifyLoop:
    def test_single_turn_is_nontrivial(self):
        states = lift_path(sampled_loop(X, 2 * math.pi, 360), init())
        cls = classify_loop([init()] + states)
        assert cls.gamma == math.pi
        assert cls.endpoint_sign == -1
        assert not cls.is_trivial

    def test_double_turn_is_trivial(self):
        states = lift_path(sampled_loop(X, 4 * math.pi, 720), init())
        cls = classify_loop([init()] + states)
        assert cls.gamma == 0.0
        assert cls.is_trivial

    def test_out_and_back_is_trivial(self):
        fwd = [so3_from_axis_angle(X, 2.0 * i / 100) for i in range(101)]
        back = fwd[-2::-1]
        cls = classify_loop([init()] + lift_path(fwd + back, init()))
        assert cls.is_trivial and cls.gamma == 0.0

    def test_open_path_rejected(self):
        states = lift_path(sampled_loop(X, 1.0, 50), init())
        with pytest.raises(LoopNotClosed):
            classify_loop([init()] + states)

    def test_history_dependence(self):
        # same closed orientation endpoints, opposite lift signs
        loop = lift_path(sampled_loop(X, 2 * math.pi, 360), init())
        constant = lift_path([init().orientation] * 361, init())
        assert classify_loop([init()] + loop).endpoint_sign == -1
        assert classify_loop([init()] + constant).endpoint_sign == +1

    def test_gamma_stable_under_small_perturbations(self):
        rng = np.random.default_rng(8)
        base = sampled_loop(X, 2 * math.pi, 360)
        jittered = [base[0]]
        for r in base[1:-1]:
            axis = rng.normal(size=3)
            axis /= np.linalg.norm(axis)
            jittered.append(compose(so3_from_axis_angle(axis, 0.009), r))
        jittered.append(base[-1])
        cls = classify_loop([init()] + lift_path(jittered, init()))
        assert cls.gamma == math.pi

    def test_inconsistent_fields_rejected(self):
        with pytest.raises(ValueError):
            HomotopyClass(is_trivial=True, endpoint_sign=-1, gamma=0.0)
