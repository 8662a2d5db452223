"""Strand reconstruction and the bit-string algebra of replication.

Strands are emergent: the simulation keeps no strand data structure, so
analysis reconstructs maximal red-blue chains from the bond slots on
demand. A chain is read from its blue-free end to its red-free end; type 0
codons read as 0, type 1 codons as 1. Under that convention a replica of a
strand encoding X encodes reverse(negate(X)) - the copy is a negated mirror
image - and strings of the form X + reverse(negate(X)) replicate to exactly
themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .model import BoundaryError, CodonType, Pose, World


class StrandStructureError(RuntimeError):
    """The red-blue bond graph contains a cycle; state is corrupt."""


def _check_bits(bits: str) -> str:
    if not all(ch in "01" for ch in bits):
        raise ValueError(f"bit string may contain only 0 and 1, got {bits!r}")
    return bits


def negate(bits: str) -> str:
    """Complement every bit: 0 <-> 1."""
    _check_bits(bits)
    return bits.translate(str.maketrans("01", "10"))


def reverse(bits: str) -> str:
    """Reverse the character order."""
    _check_bits(bits)
    return bits[::-1]


def symmetrize(bits: str) -> str:
    """Append the negated mirror image: the result replicates to itself.

    symmetrize(X) = X + reverse(negate(X)), which is its own negated mirror
    image, so replication cannot alter the pattern.
    """
    _check_bits(bits)
    return bits + reverse(negate(bits))


@dataclass
class StrandRecord:
    """One maximal red-blue chain, oriented blue-free end to red-free end."""

    codon_ids: list[int]
    bits: str
    complete: bool
    partner_ids: Optional[list[Optional[int]]] = None

    def __len__(self) -> int:
        return len(self.codon_ids)


def extract_strands(world: World) -> list[StrandRecord]:
    """Partition all codons into maximal red-blue chains.

    Singletons count as strands of length 1. Records are ordered by their
    smallest member id. A chain is complete when it is either free-standing
    (no vertical partners) or fully paired one-to-one with a single partner
    chain of the same length; fragments of a half-built double strand are
    therefore reported as incomplete.
    """
    codons = world.codons
    chains: list[list[int]] = []
    seen = 0
    for c in codons:
        if c.bond_blue is not None:
            continue
        ids = []
        cur: Optional[int] = c.id
        while cur is not None:
            ids.append(cur)
            if len(ids) > len(codons):
                raise StrandStructureError("red-blue walk exceeded codon count")
            cur = codons[cur].bond_red
        chains.append(ids)
        seen += len(ids)
    if seen != len(codons):
        # every acyclic chain has a blue-free head, so leftovers mean a loop
        raise StrandStructureError(
            f"{len(codons) - seen} codons unreachable from any blue-free end")

    chains.sort(key=lambda ids: min(ids))
    chain_of: dict[int, int] = {}
    for idx, ids in enumerate(chains):
        for cid in ids:
            chain_of[cid] = idx

    records: list[StrandRecord] = []
    for ids in chains:
        bits = "".join("1" if codons[cid].ctype == CodonType.TYPE1 else "0" for cid in ids)
        partners = [codons[cid].bond_vertical for cid in ids]
        records.append(StrandRecord(ids, bits, True, partners))

    for idx, rec in enumerate(records):
        present = [p for p in rec.partner_ids if p is not None]
        if not present:
            continue
        partner_chains = {chain_of[p] for p in present}
        if len(partner_chains) != 1:
            rec.complete = False
            continue
        other = records[next(iter(partner_chains))]
        rec.complete = (len(present) == len(rec.codon_ids)
                        and len(other.codon_ids) == len(rec.codon_ids))
    return records


def place_seed(world: World, bits: str, pose: Pose) -> World:
    """Create a pre-bonded straight strand encoding bits, centered on pose.

    Codons sit 2 * arm_length_horizontal apart along the pose heading, blue
    end first, red-blue bonds pre-linked and field sizes already consistent
    with the bonds. Raises BoundaryError if any middle would leave the
    container.
    """
    _check_bits(bits)
    if not bits:
        return world
    p = world.params
    spacing = 2.0 * p.arm_length_horizontal
    n = len(bits)
    cos_a = math.cos(pose.angle)
    sin_a = math.sin(pose.angle)
    start = -0.5 * spacing * (n - 1)
    created = []
    for i, ch in enumerate(bits):
        offset = start + spacing * i
        x = pose.x + offset * cos_a
        y = pose.y + offset * sin_a
        if not world.contains(x, y):
            raise BoundaryError(
                f"seed strand of {n} codons does not fit at ({pose.x}, {pose.y})")
        ctype = CodonType.TYPE1 if ch == "1" else CodonType.TYPE0
        created.append(world.add_codon(ctype, Pose(x, y, pose.angle)))
    for a, b in zip(created, created[1:]):
        a.bond_red = b.id
        b.bond_blue = a.id
        a.red_large = True
        b.blue_large = True
    for c in created:
        c.vertical_large = c.red_large or c.blue_large
    return world
