"""The splitting protocol: local signalling that detects a finished copy.

Each codon carries two small protocol variables. The strand location state
answers "am I at an extreme end of a double strand?" using only bond-slot
counts and the vertical neighbour's opinion. The splitting state runs a
two-pass handshake over a confirmed double strand: a ready wave starts at
the no-red end, sweeps to the no-blue end (any gap leaves a codon in
location state 1, which blocks the wave, so the wave completing proves the
double strand is complete), then a splitting wave sweeps back. A codon
entering the splitting state turns its yellow field large for a fixed number
of steps and releases its vertical bond, letting the yellow-yellow repulsion
push the two finished strands apart.

Updates are synchronous: the location pass reads the previous step's
location states, and the splitting pass reads this step's location states
plus the previous step's splitting states, so codon iteration order never
affects the result. A predicate about a neighbour's state is false when
that neighbour does not exist, except in the splitting-wave spread rule,
where an already-released vertical partner must not stall the wave.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bonding import BondEvent, BondEventKind
from .model import SPLIT_X, SPLIT_Y, SPLIT_Z, World


@dataclass
class NeighborView:
    """Read-only snapshot of per-codon protocol states, indexed by codon id."""

    loc: list[int]
    split: list[int]


def build_neighbor_view(world: World) -> NeighborView:
    codons = world.codons
    return NeighborView(
        loc=[c.strand_location_state for c in codons],
        split=[c.splitting_state for c in codons],
    )


def update_strand_location_states(world: World) -> World:
    """Apply the end-of-double-strand detection rules to every codon."""
    codons = world.codons
    old = [c.strand_location_state for c in codons]
    for c in codons:
        state = c.strand_location_state
        if state == 0 and c.bond_vertical is None:
            continue  # free or horizontally-only bonded codons stay in 0
        exactly_one = (c.bond_red is None) != (c.bond_blue is None)
        has_vert = c.bond_vertical is not None
        if state == 0:
            if exactly_one and has_vert:
                c.strand_location_state = 1
        elif state == 1:
            if not exactly_one or not has_vert:
                c.strand_location_state = 0
            elif old[c.bond_vertical] in (1, 2):
                c.strand_location_state = 2
        else:  # state == 2
            if not exactly_one or not has_vert or old[c.bond_vertical] == 0:
                c.strand_location_state = 0
    return world


def update_splitting_states(world: World) -> World:
    """Advance the ready/splitting handshake one step.

    Must run after update_strand_location_states in the same step: the rules
    consume this step's location states. The dwell counter of a codon in the
    splitting state is incremented before its rule is evaluated, so "in z for
    N steps" fires on the Nth step after entry.
    """
    codons = world.codons
    old_split = [c.splitting_state for c in codons]
    timer = world.params.split_timer

    for c in codons:
        if old_split[c.id] == SPLIT_Z:
            c.z_timer += 1

    transitions: list[tuple[int, int]] = []
    for c in codons:
        state = old_split[c.id]
        if state == SPLIT_X and c.bond_vertical is None:
            continue  # x -> y always needs a vertical neighbour
        has_red = c.bond_red is not None
        has_vert = c.bond_vertical is not None
        my_loc = c.strand_location_state
        vert_loc = codons[c.bond_vertical].strand_location_state if has_vert else None
        if state == SPLIT_X:
            if my_loc == 2 and vert_loc == 2 and not has_red:
                transitions.append((c.id, SPLIT_Y))
            elif (my_loc != 1 and has_vert and vert_loc != 1
                    and has_red and old_split[c.bond_red] == SPLIT_Y):
                transitions.append((c.id, SPLIT_Y))
        elif state == SPLIT_Y:
            has_blue = c.bond_blue is not None
            if my_loc == 2 and vert_loc == 2 and not has_blue:
                transitions.append((c.id, SPLIT_Z))
            elif (my_loc != 1 and (not has_vert or vert_loc != 1)
                    and has_blue and old_split[c.bond_blue] == SPLIT_Z):
                # a vertical partner already released by the advancing split
                # wave counts as "not in state 1"; the ready wave has already
                # proven the double strand complete, and requiring a partner
                # here would stall the wave at the strand midpoint
                transitions.append((c.id, SPLIT_Z))
        else:  # SPLIT_Z
            if not has_red and c.z_timer >= timer:
                transitions.append((c.id, SPLIT_X))
            elif has_red and old_split[c.bond_red] == SPLIT_X:
                transitions.append((c.id, SPLIT_X))

    for cid, new_state in transitions:
        c = codons[cid]
        c.splitting_state = new_state
        c.z_timer = 0
    return world


def apply_split_release(world: World) -> tuple[World, list[BondEvent]]:
    """Handle codons that entered the splitting state this step.

    Each one turns its yellow field large for split_timer steps and releases
    its vertical bond (the partner's slot is cleared too). Codons already
    splitting are left alone; entry is recognized by a zero dwell counter,
    which only ever occurs on the entry step.
    """
    codons = world.codons
    events: list[BondEvent] = []
    for c in codons:
        if c.splitting_state != SPLIT_Z or c.z_timer != 0:
            continue
        c.yellow_large = True
        c.yellow_timer = world.params.split_timer
        partner = c.bond_vertical
        if partner is not None:
            codons[partner].bond_vertical = None
            c.bond_vertical = None
            events.append(BondEvent(world.step, BondEventKind.VERTICAL_BROKEN,
                                    min(c.id, partner), max(c.id, partner),
                                    cause="split"))
    return world, events


def tick_yellow_timers(world: World) -> World:
    """Count down every large yellow field; at zero it returns to small.

    Fields set large this step (splitting entry, dwell counter still zero)
    are skipped so the large phase lasts exactly split_timer steps.
    """
    for c in world.codons:
        if not c.yellow_large:
            continue
        if c.splitting_state == SPLIT_Z and c.z_timer == 0:
            continue
        c.yellow_timer -= 1
        if c.yellow_timer <= 0:
            c.yellow_timer = 0
            c.yellow_large = False
    return world
