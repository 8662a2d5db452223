"""Domain types and rigid-body geometry for T-shaped automata ("codons").

A codon is a rigid T: two horizontal arms (red and blue, pointing in
opposite directions) and one vertical arm at a right angle, all meeting at
the middle, which is treated as the center of mass. Each arm tip carries a
circular interaction field that can be small or large. Codons carry one bit
of information in their type: type 0 codons have a purple vertical field,
type 1 codons have a green one.

Every codon's state is a 16-element vector: 3 pose floats, 3 velocity
floats, 5 binary field sizes, 3 bond slots (one per arm), and two
three-valued protocol variables. The discrete sub-vector (5 binary + 2
three-valued) spans 2^5 * 3^2 = 288 raw combinations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Optional

TWO_PI = 2.0 * math.pi


class CodonType(IntEnum):
    TYPE0 = 0  # purple vertical field, encodes bit 0
    TYPE1 = 1  # green vertical field, encodes bit 1


class Arm(Enum):
    RED = "red"
    BLUE = "blue"
    VERTICAL = "vertical"


class FieldKind(Enum):
    RED = "red"
    BLUE = "blue"
    GREEN = "green"
    PURPLE = "purple"
    YELLOW = "yellow"


class FieldSize(IntEnum):
    SMALL = 0
    LARGE = 1


# strand_location_state values: does this codon believe it sits at the end
# of a double strand?
LOC_INITIAL = 0   # not at an end
LOC_MAYBE_END = 1  # I might be at an end
LOC_CONFIRMED_END = 2  # my vertical neighbour agrees

# splitting_state values: the two-pass end-to-end handshake.
SPLIT_X = 0  # not ready
SPLIT_Y = 1  # ready to split
SPLIT_Z = 2  # splitting now

# Direction offsets of each arm relative to the codon heading. The heading
# is the red-arm direction; blue is opposite; vertical is +90 degrees.
ARM_OFFSET = {Arm.RED: 0.0, Arm.BLUE: math.pi, Arm.VERTICAL: 0.5 * math.pi}


class BoundaryError(ValueError):
    """Raised when a pose falls outside the container."""


def wrap_angle(a: float) -> float:
    """Normalize an angle to [0, 2*pi)."""
    a = a % TWO_PI
    # a % TWO_PI can return TWO_PI itself for tiny negative inputs
    return a if a < TWO_PI else 0.0


def signed_angle_diff(a: float, b: float) -> float:
    """Smallest signed difference a - b, wrapped into (-pi, pi]."""
    d = (a - b) % TWO_PI
    if d > math.pi:
        d -= TWO_PI
    return d


@dataclass
class Pose:
    """Position of the codon middle plus heading (red-arm direction)."""

    x: float
    y: float
    angle: float  # radians, [0, 2*pi)


@dataclass
class Velocity:
    vx: float
    vy: float
    omega: float  # angular velocity, radians per time unit


@dataclass
class SimParams:
    """Every physical and protocol constant of the simulation.

    Radii are per field kind; the flat fields keep config files and the hot
    loop simple. Viscosity, dampening and brownian scales are per-step
    quantities: changing timestep_duration requires re-calibrating them.
    """

    timestep_duration: float = 0.05
    arm_length_horizontal: float = 5.0
    arm_length_vertical: float = 5.0

    radius_small_red: float = 0.5
    radius_small_blue: float = 0.5
    radius_small_green: float = 0.5
    radius_small_purple: float = 0.5
    radius_small_yellow: float = 0.5
    radius_large_red: float = 2.5
    radius_large_blue: float = 2.5
    radius_large_green: float = 2.5
    radius_large_purple: float = 2.5
    radius_large_yellow: float = 2.5

    k_attract: float = 3.0
    k_repel: float = 3.0
    k_straighten: float = 2.0

    linear_viscosity: float = 0.95   # retained fraction of (vx, vy) per step
    angular_viscosity: float = 0.9   # retained fraction of omega per step
    linear_dampening: float = 0.9    # retained fraction of a bonded pair's relative linear velocity
    angular_dampening: float = 0.9   # retained fraction of a bonded codon's omega

    brownian_linear_sigma: float = 0.05
    brownian_angular_sigma: float = 0.02

    red_blue_angle: float = math.pi / 256   # alignment gate for red-blue bonding
    purple_green_angle: float = math.pi / 3  # alignment gate for vertical bonding
    split_timer: int = 150  # steps a yellow field stays large; also the z-state dwell

    mass: float = 1.0
    moment_of_inertia: float = 1.0

    def validate(self) -> None:
        if self.timestep_duration <= 0:
            raise ValueError("timestep_duration must be positive")
        for kind in FieldKind:
            small = self.radius_small_for(kind)
            large = self.radius_large_for(kind)
            if small <= 0 or large <= 0:
                raise ValueError(f"radii for {kind.value} field must be positive")
            if small >= large:
                raise ValueError(f"small radius must be below large radius for {kind.value} field")
        for name in ("linear_viscosity", "angular_viscosity", "linear_dampening", "angular_dampening"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1)")
        for name in ("red_blue_angle", "purple_green_angle"):
            v = getattr(self, name)
            if not 0.0 < v < math.pi:
                raise ValueError(f"{name} must lie in (0, pi)")
        if self.arm_length_horizontal <= 0 or self.arm_length_vertical <= 0:
            raise ValueError("arm lengths must be positive")
        if self.mass <= 0 or self.moment_of_inertia <= 0:
            raise ValueError("mass and moment_of_inertia must be positive")
        if self.split_timer <= 0:
            raise ValueError("split_timer must be positive")

    def radius_small_for(self, kind: FieldKind) -> float:
        return getattr(self, f"radius_small_{kind.value}")

    def radius_large_for(self, kind: FieldKind) -> float:
        return getattr(self, f"radius_large_{kind.value}")

    def arm_length(self, arm: Arm) -> float:
        return self.arm_length_vertical if arm is Arm.VERTICAL else self.arm_length_horizontal


def vertical_field_kind(ctype: CodonType) -> FieldKind:
    """The field carried at the vertical tip: purple for type 0, green for type 1."""
    return FieldKind.PURPLE if ctype == CodonType.TYPE0 else FieldKind.GREEN


class Codon:
    """One mobile automaton. Mutable; mutated in place by the step pipeline.

    Bond slots hold the id of the codon bonded at that arm, or None. Bond
    symmetry is maintained by the bonding operations: if A's red slot holds
    B then B's blue slot holds A, and vertical slots are mutual.
    """

    __slots__ = (
        "id", "ctype", "x", "y", "angle", "vx", "vy", "omega",
        "red_large", "blue_large", "green_large", "purple_large", "yellow_large",
        "bond_red", "bond_blue", "bond_vertical",
        "strand_location_state", "splitting_state",
        "yellow_timer", "z_timer",
    )

    def __init__(self, cid: int, ctype: CodonType, pose: Pose):
        self.id = cid
        self.ctype = CodonType(ctype)
        self.x = pose.x
        self.y = pose.y
        self.angle = wrap_angle(pose.angle)
        self.vx = 0.0
        self.vy = 0.0
        self.omega = 0.0
        self.red_large = False
        self.blue_large = False
        self.green_large = False
        self.purple_large = False
        self.yellow_large = False
        self.bond_red: Optional[int] = None
        self.bond_blue: Optional[int] = None
        self.bond_vertical: Optional[int] = None
        self.strand_location_state = LOC_INITIAL
        self.splitting_state = SPLIT_X
        self.yellow_timer = 0
        self.z_timer = 0

    # -- views -------------------------------------------------------------

    @property
    def pose(self) -> Pose:
        return Pose(self.x, self.y, self.angle)

    @property
    def vel(self) -> Velocity:
        return Velocity(self.vx, self.vy, self.omega)

    @property
    def field_sizes(self) -> dict[FieldKind, FieldSize]:
        return {
            FieldKind.RED: FieldSize(self.red_large),
            FieldKind.BLUE: FieldSize(self.blue_large),
            FieldKind.GREEN: FieldSize(self.green_large),
            FieldKind.PURPLE: FieldSize(self.purple_large),
            FieldKind.YELLOW: FieldSize(self.yellow_large),
        }

    @property
    def bonds(self) -> dict[Arm, Optional[int]]:
        return {Arm.RED: self.bond_red, Arm.BLUE: self.bond_blue, Arm.VERTICAL: self.bond_vertical}

    @property
    def vertical_large(self) -> bool:
        """Size of the field this codon actually carries at its vertical tip."""
        return self.purple_large if self.ctype == CodonType.TYPE0 else self.green_large

    @vertical_large.setter
    def vertical_large(self, value: bool) -> None:
        if self.ctype == CodonType.TYPE0:
            self.purple_large = value
        else:
            self.green_large = value

    def has_any_bond(self) -> bool:
        return self.bond_red is not None or self.bond_blue is not None or self.bond_vertical is not None

    def state_vector(self) -> tuple:
        """The full 16-element state vector."""
        return (
            self.x, self.y, self.angle,
            self.vx, self.vy, self.omega,
            int(self.blue_large), int(self.red_large),
            int(self.green_large), int(self.purple_large), int(self.yellow_large),
            self.bond_red, self.bond_blue, self.bond_vertical,
            self.strand_location_state, self.splitting_state,
        )

    def discrete_state(self) -> tuple:
        """The 7-element finite sub-vector (5 binary sizes + 2 ternary states)."""
        return (
            int(self.blue_large), int(self.red_large),
            int(self.green_large), int(self.purple_large), int(self.yellow_large),
            self.strand_location_state, self.splitting_state,
        )

    def __repr__(self) -> str:
        return (f"Codon(id={self.id}, type={int(self.ctype)}, "
                f"x={self.x:.2f}, y={self.y:.2f}, angle={self.angle:.3f})")


def enumerate_discrete_states() -> list[tuple]:
    """All raw combinations of the discrete sub-vector; exactly 288 entries.

    Only a subset is reachable under the bonding and splitting rules; the
    raw product is what bounds the per-codon finite state machine.
    """
    states = []
    for blue in (0, 1):
        for red in (0, 1):
            for green in (0, 1):
                for purple in (0, 1):
                    for yellow in (0, 1):
                        for loc in (0, 1, 2):
                            for split in (0, 1, 2):
                                states.append((blue, red, green, purple, yellow, loc, split))
    return states


@dataclass
class World:
    """The container, all codons, simulation parameters and RNG state.

    Codon ids equal their index in the list and are stable for the whole
    run; nothing is created or destroyed after initialization.
    """

    width: float
    height: float
    params: SimParams
    codons: list[Codon] = field(default_factory=list)
    rng: object = None  # numpy Generator; seeded by the harness
    step: int = 0

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.width and 0.0 <= y <= self.height

    def add_codon(self, ctype: CodonType, pose: Pose) -> Codon:
        codon = make_codon(ctype, pose, len(self.codons), self.params,
                           container=(self.width, self.height))
        self.codons.append(codon)
        return codon

    def normalized_time(self) -> float:
        return self.step * self.params.timestep_duration


def make_codon(ctype: CodonType, pose: Pose, cid: int, params: SimParams,
               container: Optional[tuple[float, float]] = None) -> Codon:
    """Create a free codon: all fields small, no bonds, initial protocol states.

    When container dimensions are given the pose is validated against them.
    """
    if container is not None:
        w, h = container
        if not (0.0 <= pose.x <= w and 0.0 <= pose.y <= h):
            raise BoundaryError(
                f"codon {cid} middle ({pose.x}, {pose.y}) outside container {w}x{h}")
    return Codon(cid, ctype, pose)


def arm_direction(codon: Codon, arm: Arm) -> float:
    """Absolute direction angle of an arm."""
    return wrap_angle(codon.angle + ARM_OFFSET[arm])


def tip_position(codon: Codon, arm: Arm, params: SimParams) -> tuple[float, float]:
    """Tip of an arm: middle + arm_length along the arm direction.

    Arms are rigid, so the tip is always exactly arm_length from the middle.
    """
    d = codon.angle + ARM_OFFSET[arm]
    length = params.arm_length(arm)
    return (codon.x + length * math.cos(d), codon.y + length * math.sin(d))


def fields_touch(center_a: tuple[float, float], radius_a: float,
                 center_b: tuple[float, float], radius_b: float) -> bool:
    """True iff two field circles intersect (center distance <= radius sum)."""
    dx = center_a[0] - center_b[0]
    dy = center_a[1] - center_b[1]
    r = radius_a + radius_b
    return dx * dx + dy * dy <= r * r


def alignment_error(codon_a: Codon, arm_a: Arm, codon_b: Codon, arm_b: Arm) -> float:
    """Angular deviation from perfect linear alignment of two arms, in [0, pi].

    Two arms are aligned linearly when their direction vectors are exactly
    anti-parallel (pointing toward each other along one line); the error is
    the angle between arm_a's direction and the negation of arm_b's.
    """
    da = codon_a.angle + ARM_OFFSET[arm_a]
    db = codon_b.angle + ARM_OFFSET[arm_b]
    return abs(signed_angle_diff(da, db + math.pi))
