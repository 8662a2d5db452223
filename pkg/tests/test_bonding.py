"""Bond formation, maintenance and breakage rules."""

import math

import numpy as np
from replicon import bonding
from replicon.bonding import BondEventKind
from replicon.model import CodonType, SimParams
from replicon.spatial import build_index

from builders import make_world, add_codon

ARM = 5.0  # default horizontal and vertical arm length


def form_red_blue(world):
    index = build_index(world)
    return bonding.try_form_red_blue_bonds(world, index)[1]


def form_vertical(world):
    index = build_index(world)
    return bonding.try_form_vertical_bonds(world, index)[1]


def place_red_blue_candidates(world, blue_middle_x=2 * ARM, heading_b=0.0):
    """A at origin heading 0; B placed so B's blue tip is at A's red tip."""
    a = add_codon(world, CodonType.TYPE0, 100.0, 100.0, 0.0)
    bx = 100.0 + ARM + ARM * math.cos(heading_b)
    by = 100.0 + ARM * math.sin(heading_b)
    b = add_codon(world, CodonType.TYPE0, bx, by, heading_b)
    return a, b


class TestRedBlueFormation:
    def test_perfectly_aligned_pair_bonds(self):
        world = make_world()
        a, b = place_red_blue_candidates(world)
        events = form_red_blue(world)
        assert len(events) == 1
        assert events[0].kind is BondEventKind.RED_BLUE_FORMED
        assert a.bond_red == b.id and b.bond_blue == a.id
        assert a.red_large and b.blue_large

    def test_misaligned_pair_ignored(self):
        world = make_world()
        place_red_blue_candidates(world, heading_b=math.pi / 8)
        assert form_red_blue(world) == []

    def test_within_gate_bonds(self):
        world = make_world()
        place_red_blue_candidates(world, heading_b=math.pi / 512)
        assert len(form_red_blue(world)) == 1

    def test_tips_apart_ignored(self):
        world = make_world()
        a = add_codon(world, CodonType.TYPE0, 100.0, 100.0, 0.0)
        add_codon(world, CodonType.TYPE0, 100.0 + 2 * ARM + 1.5, 100.0, 0.0)
        assert form_red_blue(world) == []

    def test_tie_break_prefers_lower_id(self):
        world = make_world()
        # codons 0 and 1 both present a red tip to codon 2's blue tip
        a = add_codon(world, CodonType.TYPE0, 100.0, 100.0, 0.0)
        b = add_codon(world, CodonType.TYPE0, 100.4, 100.3, 0.0)
        c = add_codon(world, CodonType.TYPE0, 110.0, 100.0, 0.0)
        events = form_red_blue(world)
        assert len(events) == 1
        assert a.bond_red == c.id and c.bond_blue == a.id
        assert b.bond_red is None

    def test_tie_break_two_blue_one_red(self):
        world = make_world()
        # mirrored contention: codons 0 and 1 offer blue tips to 2's red tip
        a = add_codon(world, CodonType.TYPE0, 100.0, 100.0, 0.0)
        b = add_codon(world, CodonType.TYPE0, 100.4, 100.3, 0.0)
        c = add_codon(world, CodonType.TYPE0, 90.0, 100.0, 0.0)
        events = form_red_blue(world)
        assert len(events) == 1
        assert c.bond_red == a.id and a.bond_blue == c.id
        assert b.bond_blue is None

    def test_occupied_slot_ignored(self):
        world = make_world()
        a, b = place_red_blue_candidates(world)
        form_red_blue(world)
        # third codon offers its blue tip to the already-bonded red arm
        add_codon(world, CodonType.TYPE0, a.x + 2 * ARM, a.y + 0.2, 0.0)
        assert form_red_blue(world) == []

    def test_spontaneous_flag(self):
        world = make_world()
        a, b = place_red_blue_candidates(world)
        events = form_red_blue(world)
        # neither codon is held by a vertical bond, so this is spontaneous
        assert events[0].spontaneous is True

    def test_cycle_guard_blocks_loop(self):
        world = make_world()
        # bent chain 0 -> 1 -> 2 whose free ends meet perfectly: bonding the
        # ends would close a loop, which extraction must never see
        a = add_codon(world, CodonType.TYPE0, 100.0, 100.0, 0.0)
        b = add_codon(world, CodonType.TYPE0, 150.0, 100.0, 0.0)
        c = add_codon(world, CodonType.TYPE0, 90.0, 100.0, 0.0)
        a.bond_red = b.id
        b.bond_blue = a.id
        b.bond_red = c.id
        c.bond_blue = b.id
        bonding.update_field_sizes(world)
        # c's red tip now touches a's blue tip with equal headings
        events = form_red_blue(world)
        assert events == []
        assert c.bond_red is None and a.bond_blue is None


class TestVerticalFormation:
    def place_pair(self, world, heading_b=math.pi, type_a=CodonType.TYPE0,
                   type_b=CodonType.TYPE1):
        # a's vertical tip at (100, 105); b positioned so its vertical tip lands there
        a = add_codon(world, type_a, 100.0, 100.0, 0.0)
        tip = (100.0, 100.0 + ARM)
        bx = tip[0] - ARM * math.cos(heading_b + math.pi / 2)
        by = tip[1] - ARM * math.sin(heading_b + math.pi / 2)
        b = add_codon(world, type_b, bx, by, heading_b)
        return a, b

    def test_small_small_pair_bonds(self):
        world = make_world()
        a, b = self.place_pair(world)
        events = form_vertical(world)
        assert len(events) == 1
        assert events[0].kind is BondEventKind.VERTICAL_FORMED
        assert a.bond_vertical == b.id and b.bond_vertical == a.id

    def test_beyond_gate_ignored(self):
        world = make_world()
        # 1.2 rad misalignment exceeds the pi/3 gate
        self.place_pair(world, heading_b=math.pi - 1.2)
        assert form_vertical(world) == []

    def test_moderate_misalignment_bonds(self):
        world = make_world()
        self.place_pair(world, heading_b=math.pi - 0.8)
        assert len(form_vertical(world)) == 1

    def test_same_type_never_bonds(self):
        world = make_world()
        self.place_pair(world, type_a=CodonType.TYPE0, type_b=CodonType.TYPE0)
        assert form_vertical(world) == []
        world2 = make_world()
        self.place_pair(world2, type_a=CodonType.TYPE1, type_b=CodonType.TYPE1)
        assert form_vertical(world2) == []

    def test_two_large_fields_cannot_initiate(self):
        world = make_world()
        a, b = self.place_pair(world)
        a.vertical_large = True
        b.vertical_large = True
        assert form_vertical(world) == []

    def test_small_large_initiates(self):
        world = make_world()
        a, b = self.place_pair(world)
        b.vertical_large = True
        assert len(form_vertical(world)) == 1

    def test_large_reach_extends_range(self):
        world = make_world()
        a = add_codon(world, CodonType.TYPE0, 100.0, 100.0, 0.0)
        # vertical tips 2.4 apart: outside small+small (1.0), inside small+large (3.0)
        b = add_codon(world, CodonType.TYPE1, 100.0, 100.0 + 2 * ARM + 2.4, math.pi)
        assert form_vertical(world) == []
        a.vertical_large = True
        assert len(form_vertical(world)) == 1


class TestBreakage:
    def bonded_pair(self, world):
        a, b = place_red_blue_candidates(world)
        form_red_blue(world)
        return a, b

    def test_break_beyond_contact(self):
        world = make_world()
        a, b = self.bonded_pair(world)
        b.x += 2 * 2.5 + 0.01  # tips now just beyond the large radii sum
        _, events = bonding.break_lost_contact_bonds(world)
        assert len(events) == 1
        assert events[0].kind is BondEventKind.RED_BLUE_BROKEN
        assert a.bond_red is None and b.bond_blue is None
        assert not a.red_large and not b.blue_large

    def test_boundary_distance_keeps_bond(self):
        world = make_world()
        a, b = self.bonded_pair(world)
        b.x += 5.0  # tip separation exactly the radii sum
        _, events = bonding.break_lost_contact_bonds(world)
        assert events == []
        assert a.bond_red == b.id

    def test_vertical_break_small_small(self):
        world = make_world()
        a = add_codon(world, CodonType.TYPE0, 100.0, 100.0, 0.0)
        b = add_codon(world, CodonType.TYPE1, 100.0, 100.0 + 2 * ARM, math.pi)
        form_vertical(world)
        assert a.bond_vertical == b.id
        b.y += 1.01  # beyond small+small contact
        _, events = bonding.break_lost_contact_bonds(world)
        assert len(events) == 1
        assert events[0].kind is BondEventKind.VERTICAL_BROKEN
        assert events[0].cause == "contact"
        assert a.bond_vertical is None and b.bond_vertical is None

    def test_large_fields_hold_longer(self):
        world = make_world()
        a = add_codon(world, CodonType.TYPE0, 100.0, 100.0, 0.0)
        b = add_codon(world, CodonType.TYPE1, 100.0, 100.0 + 2 * ARM, math.pi)
        form_vertical(world)
        a.vertical_large = True  # as if a were part of a strand
        b.y += 1.5  # would break a small-small bond, not small-large
        _, events = bonding.break_lost_contact_bonds(world)
        assert events == []
        assert a.bond_vertical == b.id


class TestFieldSizes:
    def test_red_bond_enlarges_vertical(self):
        world = make_world()
        a, b = place_red_blue_candidates(world)
        form_red_blue(world)
        bonding.update_field_sizes(world)
        assert a.vertical_large and b.vertical_large
        assert a.red_large and not a.blue_large

    def test_losing_horizontal_bonds_shrinks_vertical(self):
        world = make_world()
        a, b = place_red_blue_candidates(world)
        form_red_blue(world)
        bonding.update_field_sizes(world)
        b.x += 100.0
        bonding.break_lost_contact_bonds(world)
        bonding.update_field_sizes(world)
        assert not a.vertical_large and not b.vertical_large

    def test_free_codon_all_small(self):
        world = make_world()
        c = add_codon(world, CodonType.TYPE1, 50.0, 50.0)
        bonding.update_field_sizes(world)
        assert not any([c.red_large, c.blue_large, c.green_large,
                        c.purple_large, c.yellow_large])


class TestInvariance:
    def run_formation(self, world):
        index = build_index(world)
        bonding.try_form_red_blue_bonds(world, index)
        bonding.try_form_vertical_bonds(world, index)
        red = sorted((c.id, c.bond_red) for c in world.codons if c.bond_red is not None)
        vert = sorted((c.id, c.bond_vertical) for c in world.codons
                      if c.bond_vertical is not None and c.id < c.bond_vertical)
        return red, vert

    def test_rigid_motion_preserves_decisions(self):
        # decisions depend only on relative geometry, so translating and
        # rotating every pose together changes nothing
        params = SimParams(red_blue_angle=math.pi / 8)  # relaxed: more bonds to compare
        rng = np.random.default_rng(99)
        poses = []
        types = []
        # clusters of near-bonding pairs straddling both gates, so the
        # decision set is non-trivial in both directions
        for k in range(25):
            x, y = rng.uniform(60, 140), rng.uniform(60, 140)
            heading = rng.uniform(0, 2 * math.pi)
            poses.append((x, y, heading))
            types.append(CodonType.TYPE0 if k % 2 else CodonType.TYPE1)
            jitter_angle = rng.uniform(-math.pi / 5, math.pi / 5)
            if k % 2 == 0:
                # partner offered tip-to-tip along the red arm
                off = 2 * ARM + rng.uniform(-0.8, 1.5)
                poses.append((x + off * math.cos(heading), y + off * math.sin(heading),
                              heading + jitter_angle))
            else:
                # partner offered at the vertical tip, anti-parallel-ish
                off = 2 * ARM + rng.uniform(-0.8, 1.5)
                vx = x + off * math.cos(heading + math.pi / 2)
                vy = y + off * math.sin(heading + math.pi / 2)
                poses.append((vx, vy, heading + math.pi + jitter_angle))
            types.append(CodonType.TYPE1 if k % 2 else CodonType.TYPE0)

        world_a = make_world(400.0, 400.0, params=params)
        for (x, y, t), ct in zip(poses, types):
            add_codon(world_a, ct, x, y, t)
        base = self.run_formation(world_a)
        assert base[0] and base[1], "expected both bond kinds in the fixture"

        phi = 0.7
        cx, cy = 100.0, 100.0
        world_b = make_world(400.0, 400.0, params=params)
        for (x, y, t), ct in zip(poses, types):
            dx, dy = x - cx, y - cy
            rx = cx + dx * math.cos(phi) - dy * math.sin(phi) + 120.0
            ry = cy + dx * math.sin(phi) + dy * math.cos(phi) + 90.0
            add_codon(world_b, ct, rx, ry, t + phi)
        assert self.run_formation(world_b) == base

    def test_bond_symmetry_invariant(self):
        rng = np.random.default_rng(5)
        params = SimParams(red_blue_angle=math.pi / 8)
        world = make_world(params=params)
        for _ in range(80):
            add_codon(world, CodonType.TYPE0 if rng.random() < 0.5 else CodonType.TYPE1,
                      rng.uniform(0, 200), rng.uniform(0, 200), rng.uniform(0, 2 * math.pi))
        index = build_index(world)
        bonding.try_form_red_blue_bonds(world, index)
        bonding.try_form_vertical_bonds(world, index)
        bonding.update_field_sizes(world)
        for c in world.codons:
            if c.bond_red is not None:
                assert world.codons[c.bond_red].bond_blue == c.id
            if c.bond_blue is not None:
                assert world.codons[c.bond_blue].bond_red == c.id
            if c.bond_vertical is not None:
                other = world.codons[c.bond_vertical]
                assert other.bond_vertical == c.id
                assert other.ctype != c.ctype
            assert c.red_large == (c.bond_red is not None)
            assert c.blue_large == (c.bond_blue is not None)
