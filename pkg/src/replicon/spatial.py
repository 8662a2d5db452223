"""Uniform-grid neighbor index so field-intersection tests avoid full all-pairs scans.

The grid is rebuilt from scratch every step (codon counts are small and the
rebuild is linear); queries afterwards are exact in the no-false-negative
sense. Iteration order is deterministic: ids ascend within each cell and
query results are returned sorted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import FieldKind, SimParams, World


def _max_reach(params: SimParams) -> float:
    """Distance from a codon middle to the rim of its farthest possible field."""
    max_arm = max(params.arm_length_horizontal, params.arm_length_vertical)
    max_radius = max(params.radius_large_for(k) for k in FieldKind)
    return max_arm + max_radius


def min_cell_size(params: SimParams) -> float:
    """Smallest cell size for which interacting codons are in adjacent cells.

    Field centers sit at most one arm length from the middle and circles
    reach at most radius_large further, so two codons with intersecting
    fields have middles within 2*(max arm + max large radius).
    """
    return 2.0 * _max_reach(params)


@dataclass
class SpatialIndex:
    """Cell grid keyed by integer cell coordinates of each codon middle."""

    cell_size: float
    grid: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    reach: float = 0.0  # max distance from a middle to the rim of any of its fields

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        inv = 1.0 / self.cell_size
        return (math.floor(x * inv), math.floor(y * inv))


def build_index(world: World) -> SpatialIndex:
    """Create an index sized for the world's parameters and fill it."""
    index = SpatialIndex(cell_size=min_cell_size(world.params))
    return rebuild(index, world)


def rebuild(index: SpatialIndex, world: World) -> SpatialIndex:
    """Re-bucket every codon by its current middle position.

    Codons are visited in ascending id order, so each cell's list is sorted.
    """
    if index.reach == 0.0:
        # first rebuild validates the sizing; params are fixed for a run
        if index.cell_size < min_cell_size(world.params):
            raise ValueError(
                f"cell_size {index.cell_size} below safe minimum "
                f"{min_cell_size(world.params)}")
        index.reach = _max_reach(world.params)
    index.grid = {}
    grid = index.grid
    inv = 1.0 / index.cell_size
    floor = math.floor
    for codon in world.codons:
        key = (floor(codon.x * inv), floor(codon.y * inv))
        bucket = grid.get(key)
        if bucket is None:
            grid[key] = [codon.id]
        else:
            bucket.append(codon.id)
    return index


def candidates_near(index: SpatialIndex, center: tuple[float, float],
                    radius: float) -> list[int]:
    """Ids of every codon whose fields could intersect a circle at center.

    A superset is returned (cells are coarse); result is in ascending id
    order. The scan covers all cells overlapping the circle inflated by the
    index reach, so no potential interaction is missed.
    """
    span = radius + index.reach
    inv = 1.0 / index.cell_size
    cx0 = math.floor((center[0] - span) * inv)
    cx1 = math.floor((center[0] + span) * inv)
    cy0 = math.floor((center[1] - span) * inv)
    cy1 = math.floor((center[1] + span) * inv)
    grid = index.grid
    out: list[int] = []
    for cx in range(cx0, cx1 + 1):
        for cy in range(cy0, cy1 + 1):
            bucket = grid.get((cx, cy))
            if bucket:
                out.extend(bucket)
    out.sort()
    return out


def neighbor_pairs(index: SpatialIndex, world: World) -> list:
    """All unordered pairs (a, b, dist_sq), a.id < b.id, with middles within one cell size.

    With cell_size >= min_cell_size that covers every pair whose fields can
    intersect; each such pair appears exactly once. The squared middle
    distance rides along so callers can prefilter cheaply. Deterministic
    order: by cell, then id.
    """
    grid = index.grid
    codons = world.codons
    cutoff = index.cell_size * index.cell_size
    out = []
    append = out.append
    get = grid.get
    # forward half of the 3x3 neighborhood; same-cell pairs handled separately
    offsets = ((1, 0), (1, 1), (0, 1), (-1, 1))
    for key, bucket in grid.items():
        n = len(bucket)
        for i in range(n):
            ca = codons[bucket[i]]
            ax = ca.x
            ay = ca.y
            for j in range(i + 1, n):
                cb = codons[bucket[j]]
                dx = cb.x - ax
                dy = cb.y - ay
                d2 = dx * dx + dy * dy
                if d2 <= cutoff:
                    append((ca, cb, d2))
        kx, ky = key
        for ox, oy in offsets:
            other = get((kx + ox, ky + oy))
            if other:
                for a in bucket:
                    ca = codons[a]
                    ax = ca.x
                    ay = ca.y
                    for b in other:
                        cb = codons[b]
                        dx = cb.x - ax
                        dy = cb.y - ay
                        d2 = dx * dx + dy * dy
                        if d2 > cutoff:
                            continue
                        if a < b:
                            append((ca, cb, d2))
                        else:
                            append((cb, ca, d2))
    return out
