"""Virtual physics: brownian kicks, viscosity, bond springs, repulsion, integration.

All forces are spring-like and act on arm tips or field centers rather than
on the center of mass, so they impart both linear force and torque. The
integrator is explicit Euler at a fixed timestep; viscosity and dampening
are per-step multiplicative decays, which is why changing the timestep
requires re-calibrating them. Codon middles are confined to the container by
clamping to the wall and reflecting the outward velocity component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import World
from .spatial import SpatialIndex


class NumericInstabilityError(RuntimeError):
    """A force or position became non-finite; the run cannot continue."""

    def __init__(self, step: int, codon_id: int):
        super().__init__(
            f"numeric instability at step {step}, codon {codon_id}; "
            f"reduce timestep_duration or force constants")
        self.step = step
        self.codon_id = codon_id


@dataclass
class ForceAccumulator:
    """Per-codon force and torque sums for one step's force phase."""

    fx: list[float] = field(default_factory=list)
    fy: list[float] = field(default_factory=list)
    torque: list[float] = field(default_factory=list)

    def reset(self, n: int) -> None:
        if len(self.fx) != n:
            self.fx = [0.0] * n
            self.fy = [0.0] * n
            self.torque = [0.0] * n
        else:
            for i in range(n):
                self.fx[i] = 0.0
                self.fy[i] = 0.0
                self.torque[i] = 0.0


def apply_brownian(world: World) -> World:
    """Add a random kick to every codon's linear and angular velocity.

    Kicks are independent Gaussians. One (n, 3) standard-normal block is
    drawn per step and consumed row-major, i.e. in codon-id order, which
    pins the RNG stream layout for reproducibility. Nothing is drawn when
    both kick scales are zero, so brownian-off runs leave the stream
    untouched.
    """
    p = world.params
    sl = p.brownian_linear_sigma
    sa = p.brownian_angular_sigma
    if sl == 0.0 and sa == 0.0:
        return world
    codons = world.codons
    draws = world.rng.standard_normal((len(codons), 3)).tolist()
    for c, (gx, gy, go) in zip(codons, draws):
        c.vx += sl * gx
        c.vy += sl * gy
        c.omega += sa * go
    return world


def apply_viscosity(world: World) -> World:
    """Decay every velocity toward zero by the per-step viscosity factors."""
    lv = world.params.linear_viscosity
    av = world.params.angular_viscosity
    for c in world.codons:
        c.vx *= lv
        c.vy *= lv
        c.omega *= av
    return world


def _bonded_pairs(world: World):
    """Yield (codon_a, codon_b, vertical?) once per bond.

    Red-blue bonds are owned by their red side; vertical bonds by the lower
    id. Iteration order is by owner id, so force summation is deterministic.
    """
    codons = world.codons
    for c in codons:
        b = c.bond_red
        if b is not None:
            yield c, codons[b], False
        b = c.bond_vertical
        if b is not None and c.id < b:
            yield c, codons[b], True


def apply_bond_springs(world: World, acc: ForceAccumulator) -> ForceAccumulator:
    """Attraction, straightening and dampening for every bonded pair.

    Attraction is a zero-rest-length spring between the two bonded tips
    (force k_attract times tip separation, applied at each tip). The
    straightening torque on each codon is -k_straighten times the signed
    angle between its bonded arm and the line toward the partner's middle.
    Dampening then pulls the pair's linear velocities toward their average
    and each angular velocity toward zero, keeping only the configured
    fraction of the deviation.
    """
    p = world.params
    k_attract = p.k_attract
    k_straighten = p.k_straighten
    f_lin = p.linear_dampening
    f_ang = p.angular_dampening
    arm_h = p.arm_length_horizontal
    arm_v = p.arm_length_vertical
    half_pi = 0.5 * math.pi
    fx = acc.fx
    fy = acc.fy
    tq = acc.torque

    for ca, cb, vertical in _bonded_pairs(world):
        if vertical:
            da = ca.angle + half_pi
            db = cb.angle + half_pi
            arm_a = arm_b = arm_v
        else:
            da = ca.angle            # red arm of the red-side owner
            db = cb.angle + math.pi  # blue arm of the partner
            arm_a = arm_b = arm_h
        rax = arm_a * math.cos(da)
        ray = arm_a * math.sin(da)
        rbx = arm_b * math.cos(db)
        rby = arm_b * math.sin(db)
        # tip separation; attraction force is k * separation along the join
        sep_x = (cb.x + rbx) - (ca.x + rax)
        sep_y = (cb.y + rby) - (ca.y + ray)
        fax = k_attract * sep_x
        fay = k_attract * sep_y
        i, j = ca.id, cb.id
        fx[i] += fax
        fy[i] += fay
        fx[j] -= fax
        fy[j] -= fay
        tq[i] += rax * fay - ray * fax
        tq[j] += rbx * (-fay) - rby * (-fax)

        # straightening: rotate each codon so its bonded arm lies along the
        # line joining the middles
        ux = cb.x - ca.x
        uy = cb.y - ca.y
        if ux * ux + uy * uy > 1e-24:
            phi_a = math.atan2(ux * math.sin(da) - uy * math.cos(da),
                               ux * math.cos(da) + uy * math.sin(da))
            tq[i] -= k_straighten * phi_a
            phi_b = math.atan2(-ux * math.sin(db) + uy * math.cos(db),
                               -ux * math.cos(db) - uy * math.sin(db))
            tq[j] -= k_straighten * phi_b
        # dampening: relative linear motion and each spin decay toward rest
        avg_x = 0.5 * (ca.vx + cb.vx)
        avg_y = 0.5 * (ca.vy + cb.vy)
        ca.vx = avg_x + (ca.vx - avg_x) * f_lin
        ca.vy = avg_y + (ca.vy - avg_y) * f_lin
        cb.vx = avg_x + (cb.vx - avg_x) * f_lin
        cb.vy = avg_y + (cb.vy - avg_y) * f_lin
        ca.omega *= f_ang
        cb.omega *= f_ang
    return acc


def apply_yellow_repulsion(world: World, index: SpatialIndex,
                           acc: ForceAccumulator) -> ForceAccumulator:
    """Pairwise repulsion between all intersecting large yellow fields.

    The force joins the yellow centers (the vertical tips), with magnitude
    k_repel times the circle overlap, so it is strongest for coincident
    centers and fades to zero at the touch distance. There is no pair
    bookkeeping: three or more overlapping fields all repel each other.
    """
    p = world.params
    codons = world.codons
    yellows = [c for c in codons if c.yellow_large]
    if len(yellows) < 2:
        return acc
    k_repel = p.k_repel
    arm_v = p.arm_length_vertical
    half_pi = 0.5 * math.pi
    fx = acc.fx
    fy = acc.fy
    tq = acc.torque

    centers = {}
    radii = {}
    for c in yellows:
        d = c.angle + half_pi
        centers[c.id] = (c.x + arm_v * math.cos(d), c.y + arm_v * math.sin(d),
                         arm_v * math.cos(d), arm_v * math.sin(d))
        radii[c.id] = p.radius_large_yellow

    n = len(yellows)
    for i in range(n):
        ca = yellows[i]
        ax, ay, rax, ray = centers[ca.id]
        ra = radii[ca.id]
        for j in range(i + 1, n):
            cb = yellows[j]
            bx, by, rbx, rby = centers[cb.id]
            reach = ra + radii[cb.id]
            dx = bx - ax
            dy = by - ay
            d = math.sqrt(dx * dx + dy * dy)
            if d > reach:
                continue
            mag = k_repel * (reach - d)
            if d > 1e-9:
                nx = dx / d
                ny = dy / d
            else:
                # coincident yellow centers: push along the middle-to-middle
                # line, which is well separated for bonded geometry
                mx = cb.x - ca.x
                my = cb.y - ca.y
                md = math.sqrt(mx * mx + my * my)
                if md > 1e-9:
                    nx = mx / md
                    ny = my / md
                else:
                    nx, ny = 1.0, 0.0
            fax = -mag * nx
            fay = -mag * ny
            ia, ib = ca.id, cb.id
            fx[ia] += fax
            fy[ia] += fay
            fx[ib] -= fax
            fy[ib] -= fay
            tq[ia] += rax * fay - ray * fax
            tq[ib] += rbx * (-fay) - rby * (-fax)
    return acc


def integrate(world: World, acc: ForceAccumulator) -> World:
    """Explicit Euler update plus container walls.

    Velocities absorb the accumulated forces, then positions absorb the
    velocities. A middle crossing a wall is clamped to it and its outward
    velocity component is reflected. Non-finite state aborts the run.
    """
    p = world.params
    dt = p.timestep_duration
    inv_m = dt / p.mass
    inv_i = dt / p.moment_of_inertia
    w = world.width
    h = world.height
    two_pi = 2.0 * math.pi
    fx = acc.fx
    fy = acc.fy
    tq = acc.torque
    isfinite = math.isfinite

    for c in world.codons:
        i = c.id
        c.vx += fx[i] * inv_m
        c.vy += fy[i] * inv_m
        c.omega += tq[i] * inv_i
        c.x += c.vx * dt
        c.y += c.vy * dt
        a = (c.angle + c.omega * dt) % two_pi
        c.angle = a if a < two_pi else 0.0
        if c.x < 0.0:
            c.x = 0.0
            if c.vx < 0.0:
                c.vx = -c.vx
        elif c.x > w:
            c.x = w
            if c.vx > 0.0:
                c.vx = -c.vx
        if c.y < 0.0:
            c.y = 0.0
            if c.vy < 0.0:
                c.vy = -c.vy
        elif c.y > h:
            c.y = h
            if c.vy > 0.0:
                c.vy = -c.vy
        if not isfinite(c.x + c.y + c.vx + c.vy + c.angle + c.omega):
            raise NumericInstabilityError(world.step, i)
    return world
