"""Bond initiation, maintenance, breakage and field-size bookkeeping.

Red-blue bonds chain codons into strands: a small red field touching a small
blue field, with the arms anti-parallel to within the red-blue gate, bonds
the pair and flips both fields large. Vertical (purple-green) bonds join a
type 0 codon to a type 1 codon under a much wider gate; two large vertical
fields can only maintain an existing bond, never start one, which is what
keeps finished strands from gluing to each other. Any bond breaks the moment
its two field circles stop intersecting.

All candidate detection in one step reads the poses left by the previous
step's integration, so pair evaluation order cannot change the outcome;
contention for the same arm is resolved by processing candidate pairs in
ascending (min id, max id) order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .model import CodonType, World
from .spatial import SpatialIndex, neighbor_pairs


class BondEventKind(Enum):
    RED_BLUE_FORMED = "red_blue_formed"
    RED_BLUE_BROKEN = "red_blue_broken"
    VERTICAL_FORMED = "vertical_formed"
    VERTICAL_BROKEN = "vertical_broken"


@dataclass
class BondEvent:
    """One bond transition; a < b so logs are canonical."""

    step: int
    kind: BondEventKind
    a: int
    b: int
    # red-blue formation between codons not both held by vertical bonds
    spontaneous: bool = False
    # vertical breakage cause: lost field contact vs. protocol split release
    cause: str = ""

    def as_dict(self) -> dict:
        d = {"step": self.step, "event": self.kind.value, "a": self.a, "b": self.b}
        if self.kind is BondEventKind.RED_BLUE_FORMED:
            d["spontaneous"] = self.spontaneous
        if self.kind is BondEventKind.VERTICAL_BROKEN:
            d["cause"] = self.cause
        return d


def _would_close_cycle(world: World, red_owner: int, blue_owner: int) -> bool:
    """True if bonding red_owner's red arm to blue_owner would close a loop.

    Slot exclusivity alone does not rule out cycles (every member of a loop
    holds one red and one blue bond), so walk red-ward from the blue owner:
    if the chain leads back to the red owner, reject the bond.
    """
    codons = world.codons
    cur = codons[blue_owner].bond_red
    while cur is not None:
        if cur == red_owner:
            return True
        cur = codons[cur].bond_red
    return False


def try_form_red_blue_bonds(world: World, index: SpatialIndex,
                            pairs: Optional[list] = None) -> tuple[World, list[BondEvent]]:
    """Bond every qualifying (red tip, blue tip) pair of small fields.

    Qualifying: both slots free, tips' small circles intersect, and the two
    codons' arms are anti-parallel within params.red_blue_angle. Candidates
    are ranked (min id, max id, red-owner side) and accepted greedily while
    both slots remain free. A prebuilt neighbor_pairs list may be passed in
    so one enumeration serves several operations in a step.
    """
    p = world.params
    codons = world.codons
    arm = p.arm_length_horizontal
    touch = p.radius_small_red + p.radius_small_blue
    touch_sq = touch * touch
    # middles further apart than two arms plus the touch distance cannot qualify
    reject_sq = (2.0 * arm + touch) ** 2
    gate = p.red_blue_angle
    if pairs is None:
        pairs = neighbor_pairs(index, world)

    two_pi = 2.0 * math.pi
    candidates: list[tuple[int, int, int]] = []
    for ca, cb, d2 in pairs:
        if d2 > reject_sq:
            continue
        # anti-parallel arms means equal headings, for both pairing directions
        err = (ca.angle - cb.angle) % two_pi
        if err > math.pi:
            err = two_pi - err
        if err > gate:
            continue
        cos_a = math.cos(ca.angle)
        sin_a = math.sin(ca.angle)
        cos_b = math.cos(cb.angle)
        sin_b = math.sin(cb.angle)
        # ca.red tip vs cb.blue tip
        if ca.bond_red is None and cb.bond_blue is None and not ca.red_large and not cb.blue_large:
            tx = (cb.x - arm * cos_b) - (ca.x + arm * cos_a)
            ty = (cb.y - arm * sin_b) - (ca.y + arm * sin_a)
            if tx * tx + ty * ty <= touch_sq:
                candidates.append((ca.id, cb.id, 0 if ca.id < cb.id else 1))
        # cb.red tip vs ca.blue tip
        if cb.bond_red is None and ca.bond_blue is None and not cb.red_large and not ca.blue_large:
            tx = (ca.x - arm * cos_a) - (cb.x + arm * cos_b)
            ty = (ca.y - arm * sin_a) - (cb.y + arm * sin_b)
            if tx * tx + ty * ty <= touch_sq:
                candidates.append((cb.id, ca.id, 0 if cb.id < ca.id else 1))

    events: list[BondEvent] = []
    if not candidates:
        return world, events
    candidates.sort(key=lambda t: (min(t[0], t[1]), max(t[0], t[1]), t[2]))
    for red_owner, blue_owner, _ in candidates:
        cr = codons[red_owner]
        cb = codons[blue_owner]
        if cr.bond_red is not None or cb.bond_blue is not None:
            continue
        if _would_close_cycle(world, red_owner, blue_owner):
            continue
        cr.bond_red = blue_owner
        cb.bond_blue = red_owner
        cr.red_large = True
        cb.blue_large = True
        spontaneous = cr.bond_vertical is None or cb.bond_vertical is None
        events.append(BondEvent(world.step, BondEventKind.RED_BLUE_FORMED,
                                min(red_owner, blue_owner), max(red_owner, blue_owner),
                                spontaneous=spontaneous))
    return world, events


def try_form_vertical_bonds(world: World, index: SpatialIndex,
                            pairs: Optional[list] = None) -> tuple[World, list[BondEvent]]:
    """Bond qualifying purple-green (vertical tip) pairs.

    Only a type 0 and a type 1 codon can pair; both vertical slots must be
    free; alignment of the vertical arms must be anti-parallel within
    params.purple_green_angle; and at least one of the two fields must be
    small, since two large fields can only maintain an existing bond.
    """
    p = world.params
    codons = world.codons
    arm = p.arm_length_vertical
    gate = p.purple_green_angle
    half_pi = 0.5 * math.pi
    pi = math.pi
    two_pi = 2.0 * math.pi

    rs_p, rl_p = p.radius_small_purple, p.radius_large_purple
    rs_g, rl_g = p.radius_small_green, p.radius_large_green
    max_touch = max(rs_p, rl_p) + max(rs_g, rl_g)
    reject_sq = (2.0 * arm + max_touch) ** 2
    if pairs is None:
        pairs = neighbor_pairs(index, world)

    candidates: list[tuple[int, int]] = []
    for ca, cb, d2 in pairs:
        if d2 > reject_sq:
            continue
        if ca.ctype == cb.ctype:
            continue
        if ca.bond_vertical is not None or cb.bond_vertical is not None:
            continue
        if ca.ctype == 0:
            a_large = ca.purple_large
            b_large = cb.green_large
            ra = rl_p if a_large else rs_p
            rb = rl_g if b_large else rs_g
        else:
            a_large = ca.green_large
            b_large = cb.purple_large
            ra = rl_g if a_large else rs_g
            rb = rl_p if b_large else rs_p
        if a_large and b_large:
            continue
        # vertical arms aligned linearly means the headings are anti-parallel
        err = (ca.angle - cb.angle - pi) % two_pi
        if err > pi:
            err = two_pi - err
        if err > gate:
            continue
        da = ca.angle + half_pi
        db = cb.angle + half_pi
        tx = (cb.x + arm * math.cos(db)) - (ca.x + arm * math.cos(da))
        ty = (cb.y + arm * math.sin(db)) - (ca.y + arm * math.sin(da))
        r = ra + rb
        if tx * tx + ty * ty <= r * r:
            candidates.append((ca.id, cb.id))

    events: list[BondEvent] = []
    if not candidates:
        return world, events
    candidates.sort()
    for a, b in candidates:
        ca = codons[a]
        cb = codons[b]
        if ca.bond_vertical is not None or cb.bond_vertical is not None:
            continue
        ca.bond_vertical = b
        cb.bond_vertical = a
        events.append(BondEvent(world.step, BondEventKind.VERTICAL_FORMED, a, b))
    return world, events


def break_lost_contact_bonds(world: World) -> tuple[World, list[BondEvent]]:
    """Clear every bonded pair whose field circles no longer intersect.

    Breakage is strict: a pair at exactly the radius sum stays bonded.
    Red-blue breakage flips both fields small; vertical field sizes are
    derived from horizontal bond status elsewhere and are left alone.
    """
    p = world.params
    codons = world.codons
    arm_h = p.arm_length_horizontal
    arm_v = p.arm_length_vertical
    rb_touch = p.radius_large_red + p.radius_large_blue
    rb_touch_sq = rb_touch * rb_touch
    rs_p, rl_p = p.radius_small_purple, p.radius_large_purple
    rs_g, rl_g = p.radius_small_green, p.radius_large_green
    half_pi = 0.5 * math.pi

    events: list[BondEvent] = []
    for ca in codons:
        b = ca.bond_red
        if b is not None:
            cb = codons[b]
            ax = ca.x + arm_h * math.cos(ca.angle)
            ay = ca.y + arm_h * math.sin(ca.angle)
            bx = cb.x - arm_h * math.cos(cb.angle)
            by = cb.y - arm_h * math.sin(cb.angle)
            dx = bx - ax
            dy = by - ay
            if dx * dx + dy * dy > rb_touch_sq:
                ca.bond_red = None
                cb.bond_blue = None
                ca.red_large = False
                cb.blue_large = False
                events.append(BondEvent(world.step, BondEventKind.RED_BLUE_BROKEN,
                                        min(ca.id, b), max(ca.id, b)))
        b = ca.bond_vertical
        if b is not None and ca.id < b:
            cb = codons[b]
            if ca.ctype == CodonType.TYPE0:
                ra = rl_p if ca.vertical_large else rs_p
                rb = rl_g if cb.vertical_large else rs_g
            else:
                ra = rl_g if ca.vertical_large else rs_g
                rb = rl_p if cb.vertical_large else rs_p
            da = ca.angle + half_pi
            db = cb.angle + half_pi
            ax = ca.x + arm_v * math.cos(da)
            ay = ca.y + arm_v * math.sin(da)
            bx = cb.x + arm_v * math.cos(db)
            by = cb.y + arm_v * math.sin(db)
            dx = bx - ax
            dy = by - ay
            r = ra + rb
            if dx * dx + dy * dy > r * r:
                ca.bond_vertical = None
                cb.bond_vertical = None
                events.append(BondEvent(world.step, BondEventKind.VERTICAL_BROKEN,
                                        ca.id, b, cause="contact"))
    return world, events


def update_field_sizes(world: World) -> World:
    """Re-derive field sizes from bond status.

    Red and blue fields are large exactly while their own slot is bonded;
    the vertical (purple or green) field is large exactly while at least one
    horizontal slot is bonded. Yellow is driven by the splitting protocol
    and is not touched here.
    """
    for c in world.codons:
        c.red_large = c.bond_red is not None
        c.blue_large = c.bond_blue is not None
        c.vertical_large = c.red_large or c.blue_large
    return world
