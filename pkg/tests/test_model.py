"""Geometry and domain-type checks for the model module."""

import math

import numpy as np
import pytest

from replicon.model import (Arm, BoundaryError, CodonType, FieldKind, FieldSize,
                            Pose, SimParams, alignment_error,
                            enumerate_discrete_states, fields_touch, make_codon,
                            tip_position, wrap_angle)

from builders import make_world, add_codon

PARAMS = SimParams()


def unit_params(arm: float = 1.0) -> SimParams:
    return SimParams(arm_length_horizontal=arm, arm_length_vertical=arm)


class TestMakeCodon:
    def test_fresh_codon_is_free(self):
        c = make_codon(CodonType.TYPE0, Pose(0.0, 0.0, 0.0), 0, PARAMS)
        assert all(size == FieldSize.SMALL for size in c.field_sizes.values())
        assert all(slot is None for slot in c.bonds.values())
        assert c.strand_location_state == 0
        assert c.splitting_state == 0
        assert c.yellow_timer == 0 and c.z_timer == 0
        assert c.vx == c.vy == c.omega == 0.0

    def test_type_selects_vertical_field(self):
        c0 = make_codon(CodonType.TYPE0, Pose(1.0, 1.0, 0.3), 0, PARAMS)
        c1 = make_codon(CodonType.TYPE1, Pose(1.0, 1.0, 0.3), 1, PARAMS)
        # type 0 carries the purple field, type 1 the green one
        c0.vertical_large = True
        c1.vertical_large = True
        assert c0.purple_large and not c0.green_large
        assert c1.green_large and not c1.purple_large

    def test_outside_container_rejected(self):
        with pytest.raises(BoundaryError):
            make_codon(CodonType.TYPE0, Pose(-1.0, 5.0, 0.0), 0, PARAMS,
                       container=(10.0, 10.0))

    def test_fresh_discrete_state_is_known(self):
        c = make_codon(CodonType.TYPE1, Pose(0.0, 0.0, 0.0), 0, PARAMS)
        assert c.discrete_state() in set(enumerate_discrete_states())

    def test_state_vector_has_16_elements(self):
        c = make_codon(CodonType.TYPE0, Pose(2.0, 3.0, 1.0), 5, PARAMS)
        assert len(c.state_vector()) == 16


class TestTipPosition:
    def test_axis_aligned(self):
        w = make_world(params=unit_params())
        c = add_codon(w, CodonType.TYPE0, 0.0, 0.0, 0.0)
        assert tip_position(c, Arm.RED, w.params) == pytest.approx((1.0, 0.0))
        assert tip_position(c, Arm.BLUE, w.params) == pytest.approx((-1.0, 0.0))

    def test_vertical_is_perpendicular(self):
        w = make_world(params=unit_params())
        c = add_codon(w, CodonType.TYPE0, 0.0, 0.0, 0.0)
        assert tip_position(c, Arm.VERTICAL, w.params) == pytest.approx((0.0, 1.0))

    def test_quarter_turn(self):
        w = make_world(params=unit_params())
        c = add_codon(w, CodonType.TYPE0, 0.0, 0.0, math.pi / 2)
        assert tip_position(c, Arm.RED, w.params) == pytest.approx((0.0, 1.0))

    def test_rigidity_over_random_poses(self):
        rng = np.random.default_rng(42)
        p = SimParams(arm_length_horizontal=3.7, arm_length_vertical=2.2)
        w = make_world(params=p)
        for _ in range(200):
            x, y = rng.uniform(0, 200, size=2)
            c = add_codon(w, CodonType.TYPE1, x, y, rng.uniform(0, 2 * math.pi))
            for arm in Arm:
                tx, ty = tip_position(c, arm, p)
                d = math.hypot(tx - c.x, ty - c.y)
                assert d == pytest.approx(p.arm_length(arm), rel=1e-12)

    def test_red_blue_antipodal_vertical_orthogonal(self):
        rng = np.random.default_rng(7)
        w = make_world(params=unit_params(2.5))
        for _ in range(100):
            c = add_codon(w, CodonType.TYPE0, 100.0, 100.0, rng.uniform(0, 2 * math.pi))
            rx, ry = tip_position(c, Arm.RED, w.params)
            bx, by = tip_position(c, Arm.BLUE, w.params)
            vx, vy = tip_position(c, Arm.VERTICAL, w.params)
            assert (rx + bx) / 2 == pytest.approx(c.x, abs=1e-12)
            assert (ry + by) / 2 == pytest.approx(c.y, abs=1e-12)
            dot = (rx - c.x) * (vx - c.x) + (ry - c.y) * (vy - c.y)
            assert abs(dot) < 1e-11


class TestFieldsTouch:
    def test_overlapping(self):
        assert fields_touch((0.0, 0.0), 1.0, (1.5, 0.0), 1.0)

    def test_separated(self):
        assert not fields_touch((0.0, 0.0), 1.0, (2.5, 0.0), 1.0)

    def test_coincident(self):
        assert fields_touch((3.0, 4.0), 0.1, (3.0, 4.0), 5.0)

    def test_boundary_counts_as_touching(self):
        assert fields_touch((0.0, 0.0), 1.0, (2.0, 0.0), 1.0)

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            a = tuple(rng.uniform(-10, 10, size=2))
            b = tuple(rng.uniform(-10, 10, size=2))
            ra, rb = rng.uniform(0.1, 5.0, size=2)
            assert fields_touch(a, ra, b, rb) == fields_touch(b, rb, a, ra)


class TestAlignmentError:
    def test_anti_parallel_is_zero(self):
        w = make_world()
        a = add_codon(w, CodonType.TYPE0, 0.0, 0.0, 0.0)
        b = add_codon(w, CodonType.TYPE0, 10.0, 0.0, 0.0)
        # a's red arm points at b's blue arm: perfectly aligned chain geometry
        assert alignment_error(a, Arm.RED, b, Arm.BLUE) == pytest.approx(0.0, abs=1e-12)

    def test_parallel_is_worst_case(self):
        w = make_world()
        a = add_codon(w, CodonType.TYPE0, 0.0, 0.0, 0.0)
        b = add_codon(w, CodonType.TYPE0, 10.0, 0.0, 0.0)
        assert alignment_error(a, Arm.RED, b, Arm.RED) == pytest.approx(math.pi)

    def test_near_gate_value(self):
        # arm B rotated by pi - pi/512 relative to arm A leaves an error of
        # pi/512, inside the pi/256 red-blue gate
        w = make_world()
        a = add_codon(w, CodonType.TYPE0, 0.0, 0.0, 0.0)
        b = add_codon(w, CodonType.TYPE0, 10.0, 0.0, math.pi - math.pi / 512)
        err = alignment_error(a, Arm.RED, b, Arm.RED)
        assert err == pytest.approx(math.pi / 512, rel=1e-9)
        assert err <= SimParams().red_blue_angle

    def test_symmetric_and_bounded(self):
        rng = np.random.default_rng(11)
        w = make_world()
        arms = list(Arm)
        for _ in range(300):
            a = add_codon(w, CodonType.TYPE0, 50.0, 50.0, rng.uniform(0, 2 * math.pi))
            b = add_codon(w, CodonType.TYPE1, 60.0, 50.0, rng.uniform(0, 2 * math.pi))
            arm_a = arms[rng.integers(3)]
            arm_b = arms[rng.integers(3)]
            e1 = alignment_error(a, arm_a, b, arm_b)
            e2 = alignment_error(b, arm_b, a, arm_a)
            assert e1 == pytest.approx(e2, abs=1e-12)
            assert 0.0 <= e1 <= math.pi + 1e-12

    def test_matches_vector_formula(self):
        # independent check: angle between direction vectors via acos
        rng = np.random.default_rng(23)
        w = make_world()
        for _ in range(200):
            a = add_codon(w, CodonType.TYPE0, 50.0, 50.0, rng.uniform(0, 2 * math.pi))
            b = add_codon(w, CodonType.TYPE1, 60.0, 50.0, rng.uniform(0, 2 * math.pi))
            da = a.angle
            db = b.angle + math.pi  # blue arm of b
            va = (math.cos(da), math.sin(da))
            vb = (-math.cos(db), -math.sin(db))
            dot = max(-1.0, min(1.0, va[0] * vb[0] + va[1] * vb[1]))
            expected = math.acos(dot)
            assert alignment_error(a, Arm.RED, b, Arm.BLUE) == pytest.approx(expected, abs=1e-9)


class TestDiscreteStates:
    def test_raw_product_is_288(self):
        states = enumerate_discrete_states()
        assert len(states) == 288
        assert len(set(states)) == 288

    def test_wrap_angle_range(self):
        for a in (-0.1, 0.0, 1.0, 2 * math.pi, 7.0, -13.0, 1e-18, -1e-18):
            w = wrap_angle(a)
            assert 0.0 <= w < 2 * math.pi


class TestSimParams:
    def test_defaults_validate(self):
        SimParams().validate()

    def test_bad_radius_rejected(self):
        p = SimParams(radius_small_red=3.0)  # above the large radius
        with pytest.raises(ValueError):
            p.validate()

    def test_bad_viscosity_rejected(self):
        with pytest.raises(ValueError):
            SimParams(linear_viscosity=1.0).validate()

    def test_per_kind_radius_access(self):
        p = SimParams(radius_large_yellow=4.0)
        assert p.radius_large_for(FieldKind.YELLOW) == 4.0
        assert p.radius_small_for(FieldKind.RED) == 0.5
