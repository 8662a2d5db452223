"""World construction helpers shared across the test suite."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from replicon import bonding
from replicon.model import CodonType, Pose, SimParams, World


def make_world(width: float = 200.0, height: float = 200.0,
               params: Optional[SimParams] = None, seed: int = 0) -> World:
    world = World(width=width, height=height, params=params or SimParams())
    world.rng = np.random.default_rng(seed)
    return world


def add_codon(world: World, ctype: CodonType, x: float, y: float,
              angle: float = 0.0):
    return world.add_codon(ctype, Pose(x, y, angle))


def build_double_strand(world: World, bits: str, x0: float, y0: float,
                        missing_vertical: Optional[int] = None,
                        missing_template_link: Optional[int] = None,
                        missing_partner_link: Optional[int] = None,
                        missing_partner: Optional[int] = None) -> tuple[list, list]:
    """A fully assembled double strand in its relaxed geometry.

    Template codons (ids offset..offset+L-1) run blue-end to red-end along
    +x at y0, heading 0. Partner codons sit one vertical-arm pair above,
    heading pi, so their strand runs the opposite way. All bonds are linked
    unless knocked out via the missing_* arguments (indices match the
    template positions, as in the abstract graph builder used by the
    protocol oracle). Field sizes are left consistent with the bonds.

    Returns (template_codons, partner_codons); missing partners appear as
    None entries.
    """
    p = world.params
    length = len(bits)
    spacing = 2.0 * p.arm_length_horizontal
    gap = 2.0 * p.arm_length_vertical
    template = []
    for i, ch in enumerate(bits):
        ctype = CodonType.TYPE1 if ch == "1" else CodonType.TYPE0
        template.append(add_codon(world, ctype, x0 + spacing * i, y0, 0.0))
    partners: list = []
    for i, ch in enumerate(bits):
        if missing_partner is not None and i == missing_partner:
            partners.append(None)
            continue
        # complement type so the purple-green pairing rule holds
        ctype = CodonType.TYPE0 if ch == "1" else CodonType.TYPE1
        partners.append(add_codon(world, ctype, x0 + spacing * i, y0 + gap, math.pi))
    for i in range(length - 1):
        if missing_template_link is not None and i == missing_template_link:
            continue
        a, b = template[i], template[i + 1]
        a.bond_red = b.id
        b.bond_blue = a.id
    for i in range(length - 1):
        if missing_partner_link is not None and i == missing_partner_link:
            continue
        a, b = partners[i], partners[i + 1]
        if a is None or b is None:
            continue
        b.bond_red = a.id
        a.bond_blue = b.id
    for i in range(length):
        if missing_vertical is not None and i == missing_vertical:
            continue
        if partners[i] is None:
            continue
        template[i].bond_vertical = partners[i].id
        partners[i].bond_vertical = template[i].id
    bonding.update_field_sizes(world)
    return template, partners
