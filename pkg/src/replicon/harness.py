"""Scenario runner: the per-step pipeline, replication detection, calibration.

One step executes a fixed pipeline: neighbor index rebuild, bond breakage,
red-blue then vertical bond formation, field-size bookkeeping, the two
protocol passes, split release, yellow timers, then the force phase
(springs, repulsion, brownian, viscosity) and integration. State-machine
passes read synchronous snapshots, bond candidate geometry reads the poses
left by the previous integration, and the RNG is consumed in codon-id
order, so a (scenario, rng_seed) pair fully determines the run.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import bonding, dynamics, output, signals, spatial, strands
from .bonding import BondEvent, BondEventKind
from .dynamics import ForceAccumulator, NumericInstabilityError
from .model import CodonType, Pose, SimParams, World, SPLIT_Y, SPLIT_Z


@dataclass
class SplitEvent:
    """A codon entered the splitting state (its yellow field went large)."""

    step: int
    codon_id: int

    def as_dict(self) -> dict:
        return {"step": self.step, "event": "z_entered", "id": self.codon_id}


@dataclass
class ReplicationRecord:
    """A completed copy: two complete strands pushed apart by a split."""

    step: int
    parent_bits: str
    daughter_bits: str
    parent_ids: list[int]
    daughter_ids: list[int]

    def as_dict(self) -> dict:
        return {"step": self.step, "event": "replication",
                "parent_bits": self.parent_bits, "daughter_bits": self.daughter_bits,
                "parent_ids": self.parent_ids, "daughter_ids": self.daughter_ids}


@dataclass
class Scenario:
    """Everything needed to reproduce a run."""

    name: str = "run"
    seed_bits: Optional[str] = None
    free_codon_count: int = 0
    free_type_mix: float = 0.5  # fraction of free codons that are type 0
    container_width: float = 200.0
    container_height: float = 200.0
    params: SimParams = field(default_factory=SimParams)
    rng_seed: int = 0
    max_steps: int = 10_000
    snapshot_every: int = 0
    frame_every: int = 0
    seed_x: Optional[float] = None  # seed strand center; container center when unset
    seed_y: Optional[float] = None
    seed_angle: float = 0.0
    stop_after_replications: Optional[int] = None
    audit_invariants: bool = False

    def validate(self) -> None:
        self.params.validate()
        if self.free_codon_count < 0:
            raise ValueError("free_codon_count must be >= 0")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be > 0")
        if not 0.0 <= self.free_type_mix <= 1.0:
            raise ValueError("free_type_mix must lie in [0, 1]")
        if self.container_width <= 0 or self.container_height <= 0:
            raise ValueError("container dimensions must be positive")


@dataclass
class RunReport:
    """Outcome of one run; events carry the full ordered log."""

    scenario_name: str
    steps_executed: int = 0
    normalized_time: float = 0.0
    replication_events: list[ReplicationRecord] = field(default_factory=list)
    spontaneous_bonds: list[tuple[int, tuple[int, int]]] = field(default_factory=list)
    final_census: dict = field(default_factory=dict)
    wall_clock: float = 0.0
    events: list = field(default_factory=list)
    world_hashes: list[tuple[int, str]] = field(default_factory=list)
    aborted: str = ""

    @property
    def first_replication_step(self) -> Optional[int]:
        return self.replication_events[0].step if self.replication_events else None


def build_world(scenario: Scenario) -> World:
    """Initialize a world: optional seed strand first, then free codons.

    Free codon poses consume three uniform draws each (x, y, angle) in codon
    id order; the first round(count * mix) free codons are type 0.
    """
    scenario.validate()
    world = World(width=scenario.container_width, height=scenario.container_height,
                  params=scenario.params)
    world.rng = np.random.default_rng(scenario.rng_seed)
    if scenario.seed_bits:
        cx = scenario.seed_x if scenario.seed_x is not None else scenario.container_width / 2.0
        cy = scenario.seed_y if scenario.seed_y is not None else scenario.container_height / 2.0
        strands.place_seed(world, scenario.seed_bits, Pose(cx, cy, scenario.seed_angle))
    m = scenario.free_codon_count
    if m > 0:
        n_type0 = round(m * scenario.free_type_mix)
        draws = world.rng.random((m, 3))
        for i in range(m):
            ctype = CodonType.TYPE0 if i < n_type0 else CodonType.TYPE1
            pose = Pose(draws[i, 0] * world.width, draws[i, 1] * world.height,
                        draws[i, 2] * 2.0 * math.pi)
            world.add_codon(ctype, pose)
    return world


def step(world: World, index: Optional[spatial.SpatialIndex] = None,
         acc: Optional[ForceAccumulator] = None) -> tuple[World, list]:
    """Advance the world one step through the full pipeline."""
    if index is None:
        index = spatial.SpatialIndex(cell_size=spatial.min_cell_size(world.params))
    if acc is None:
        acc = ForceAccumulator()
    events: list = []

    spatial.rebuild(index, world)
    pairs = spatial.neighbor_pairs(index, world)
    _, broken = bonding.break_lost_contact_bonds(world)
    events.extend(broken)
    _, formed = bonding.try_form_red_blue_bonds(world, index, pairs)
    events.extend(formed)
    _, formed_v = bonding.try_form_vertical_bonds(world, index, pairs)
    events.extend(formed_v)
    bonding.update_field_sizes(world)

    signals.update_strand_location_states(world)
    signals.update_splitting_states(world)
    for c in world.codons:
        if c.splitting_state == SPLIT_Z and c.z_timer == 0:
            events.append(SplitEvent(world.step, c.id))
    _, released = signals.apply_split_release(world)
    events.extend(released)
    signals.tick_yellow_timers(world)

    acc.reset(len(world.codons))
    dynamics.apply_bond_springs(world, acc)
    dynamics.apply_yellow_repulsion(world, index, acc)
    dynamics.apply_brownian(world)
    dynamics.apply_viscosity(world)
    dynamics.integrate(world, acc)
    world.step += 1
    return world, events


def detect_replication(step_events: list, world: World) -> list[ReplicationRecord]:
    """Recognize completed copies from this step's split-release events.

    A record is emitted when the last vertical bond between two chains is
    released by the protocol, the chains have equal length, and every member
    of both is in the ready or splitting state. Each bond releases as soon as
    either endpoint starts splitting, so the final release lands mid-wave,
    while the trailing half of each strand is still in the ready state; the
    ready wave having reached both ends is what certifies that the double
    strand was complete and fully paired immediately before the split.
    """
    split_releases = [e for e in step_events
                      if isinstance(e, BondEvent)
                      and e.kind is BondEventKind.VERTICAL_BROKEN
                      and e.cause == "split"]
    if not split_releases:
        return []
    codons = world.codons
    chains = strands.extract_strands(world)
    chain_of: dict[int, int] = {}
    for idx, rec in enumerate(chains):
        for cid in rec.codon_ids:
            chain_of[cid] = idx

    records: list[ReplicationRecord] = []
    seen_pairs: set[frozenset[int]] = set()
    for ev in split_releases:
        ia = chain_of[ev.a]
        ib = chain_of[ev.b]
        if ia == ib:
            continue
        key = frozenset((ia, ib))
        if key in seen_pairs:
            continue
        seen_pairs.add(key)
        rec_a = chains[ia]
        rec_b = chains[ib]
        if len(rec_a) != len(rec_b) or len(rec_a) < 2:
            continue
        members_b = set(rec_b.codon_ids)
        linked = any(codons[cid].bond_vertical in members_b for cid in rec_a.codon_ids)
        if linked:
            continue  # still attached elsewhere; the split has not finished
        in_handshake = all(codons[cid].splitting_state in (SPLIT_Y, SPLIT_Z)
                           for cid in rec_a.codon_ids + rec_b.codon_ids)
        if not in_handshake:
            continue
        parent, daughter = ((rec_a, rec_b)
                            if min(rec_a.codon_ids) <= min(rec_b.codon_ids)
                            else (rec_b, rec_a))
        records.append(ReplicationRecord(world.step, parent.bits, daughter.bits,
                                         list(parent.codon_ids), list(daughter.codon_ids)))
    return records


def strand_census(world: World) -> dict:
    """Counts of strands by length and by encoded bits, plus bond totals."""
    recs = strands.extract_strands(world)
    by_length: dict[int, int] = {}
    by_bits: dict[str, int] = {}
    complete = 0
    for r in recs:
        by_length[len(r)] = by_length.get(len(r), 0) + 1
        by_bits[r.bits] = by_bits.get(r.bits, 0) + 1
        if r.complete:
            complete += 1
    return {
        "strands": len(recs),
        "complete": complete,
        "by_length": {str(k): by_length[k] for k in sorted(by_length)},
        "by_bits": {k: by_bits[k] for k in sorted(by_bits)},
    }


def audit_world(world: World, released_this_step: frozenset = frozenset()) -> None:
    """Assert the cross-module state invariants; raises AssertionError.

    released_this_step: codon ids whose vertical bond the splitting protocol
    cleared during this step. Their location state legitimately reads
    "confirmed end" for one step after losing the partner, because the
    pipeline updates location states before applying the release.
    """
    codons = world.codons
    for c in codons:
        assert (c.bond_red is not None) == c.red_large, \
            f"step {world.step}: codon {c.id} red size out of sync"
        assert (c.bond_blue is not None) == c.blue_large, \
            f"step {world.step}: codon {c.id} blue size out of sync"
        horizontally_bonded = c.bond_red is not None or c.bond_blue is not None
        assert c.vertical_large == horizontally_bonded, \
            f"step {world.step}: codon {c.id} vertical size out of sync"
        if c.bond_red is not None:
            assert codons[c.bond_red].bond_blue == c.id, \
                f"step {world.step}: red-blue bond asymmetry at codon {c.id}"
        if c.bond_vertical is not None:
            other = codons[c.bond_vertical]
            assert other.bond_vertical == c.id, \
                f"step {world.step}: vertical bond asymmetry at codon {c.id}"
            assert other.ctype != c.ctype, \
                f"step {world.step}: vertical bond joins two type {int(c.ctype)} codons"
        if c.strand_location_state == 2:
            exactly_one = (c.bond_red is None) != (c.bond_blue is None)
            assert exactly_one, \
                f"step {world.step}: codon {c.id} confirmed-end state off a strand end"
            assert c.bond_vertical is not None or c.id in released_this_step, \
                f"step {world.step}: codon {c.id} confirmed-end state without a partner"
        assert 0.0 <= c.x <= world.width and 0.0 <= c.y <= world.height, \
            f"step {world.step}: codon {c.id} escaped the container"


HASH_EVERY = 1000  # steps between world-hash/census log lines


def run_world(world: World, max_steps: int, *,
              name: str = "run",
              out_dir=None,
              snapshot_every: int = 0,
              frame_every: int = 0,
              stop_after_replications: Optional[int] = None,
              audit_invariants: bool = False) -> RunReport:
    """Drive an initialized world up to max_steps, recording everything.

    When out_dir is given, metrics.jsonl, periodic snapshots/frames and a
    final report.json are written there.
    """
    report = RunReport(scenario_name=name)
    start = time.perf_counter()
    writer = output.MetricsWriter(out_dir) if out_dir is not None else None
    index = spatial.SpatialIndex(cell_size=spatial.min_cell_size(world.params))
    acc = ForceAccumulator()
    n_codons = len(world.codons)
    target = world.step + max_steps

    def log_checkpoint():
        h = output.world_hash(world)
        report.world_hashes.append((world.step, h))
        if writer:
            writer.write({"step": world.step, "event": "world_hash", "hash": h})
            writer.write({"step": world.step, "event": "census",
                          **strand_census(world)})

    try:
        if world.step % HASH_EVERY == 0:
            log_checkpoint()
        while world.step < target:
            _, events = step(world, index, acc)
            assert len(world.codons) == n_codons
            if events:
                for ev in events:
                    report.events.append(ev)
                    if writer:
                        writer.write(ev.as_dict())
                    if (isinstance(ev, BondEvent)
                            and ev.kind is BondEventKind.RED_BLUE_FORMED
                            and ev.spontaneous):
                        report.spontaneous_bonds.append((ev.step, (ev.a, ev.b)))
                for rec in detect_replication(events, world):
                    report.replication_events.append(rec)
                    report.events.append(rec)
                    if writer:
                        writer.write(rec.as_dict())
            if audit_invariants:
                released = frozenset(
                    cid for ev in events
                    if isinstance(ev, BondEvent)
                    and ev.kind is BondEventKind.VERTICAL_BROKEN and ev.cause == "split"
                    for cid in (ev.a, ev.b))
                audit_world(world, released)
            if world.step % HASH_EVERY == 0:
                log_checkpoint()
            if snapshot_every and world.step % snapshot_every == 0 and out_dir is not None:
                output.save_snapshot(world, out_dir, name)
            if frame_every and world.step % frame_every == 0 and out_dir is not None:
                from . import frames
                frames.save_frame(world, out_dir)
            if (stop_after_replications is not None
                    and len(report.replication_events) >= stop_after_replications):
                break
    except NumericInstabilityError as exc:
        report.aborted = str(exc)
        if writer:
            writer.write({"step": world.step, "event": "aborted", "reason": str(exc)})
    finally:
        report.steps_executed = world.step
        report.normalized_time = world.step * world.params.timestep_duration
        report.final_census = strand_census(world)
        report.wall_clock = time.perf_counter() - start
        if writer:
            writer.close()
        if out_dir is not None:
            output.save_report(report, out_dir)
    return report


def run_scenario(scenario: Scenario, out_dir=None) -> RunReport:
    """Initialize a world from a scenario and run it."""
    world = build_world(scenario)
    return run_world(world, scenario.max_steps,
                     name=scenario.name,
                     out_dir=out_dir,
                     snapshot_every=scenario.snapshot_every,
                     frame_every=scenario.frame_every,
                     stop_after_replications=scenario.stop_after_replications,
                     audit_invariants=scenario.audit_invariants)


# ---------------------------------------------------------------------------
# calibration
# ---------------------------------------------------------------------------

@dataclass
class CalibrationResult:
    """Scores for one parameter candidate, averaged over its trials."""

    overrides: dict
    seed_intact: float = 0.0        # fraction of no-brownian trials with zero breakage
    replication_rate: float = 0.0   # fraction of seeded trials that replicated
    mean_first_replication: float = float("inf")
    spurious_bonds: float = 0.0     # spontaneous red-blue bonds per rarity trial

    @property
    def score(self) -> tuple:
        # rank: must keep the seed intact, then replicate often and early,
        # with as few spurious bonds as possible
        return (self.seed_intact, self.replication_rate,
                -self.spurious_bonds, -self.mean_first_replication)


def _candidate_params(base: SimParams, overrides: dict) -> SimParams:
    return replace(base, **overrides)


def calibrate(candidates: list[dict], trials: int = 3, *,
              base: Optional[SimParams] = None,
              seed_bits: str = "00011001",
              free_codons: int = 80,
              container: float = 150.0,
              intact_steps: int = 20_000,
              replication_budget: int = 120_000,
              rarity_steps: int = 20_000) -> list[CalibrationResult]:
    """Score parameter candidates and return them best first.

    Each candidate is a dict of SimParams overrides. Three probes per trial:
    (a) a lone seed strand must keep every bond for intact_steps under the
    candidate's own noise settings (a zero-brownian candidate passes this
    trivially, having no perturbation source); (b) the full seeded soup must
    replicate within the budget; (c) a seeded soup at the strict red-blue
    gate must produce no spontaneous red-blue bonds. The returned ranking is
    deterministic.
    """
    base = base or SimParams()
    results = []
    for overrides in candidates:
        params = _candidate_params(base, overrides)
        result = CalibrationResult(overrides=dict(overrides))
        intact = 0
        replicated = 0
        first_steps = []
        spurious = 0
        for trial in range(trials):
            s = Scenario(name="calibrate-intact", seed_bits=seed_bits,
                         free_codon_count=0, container_width=container,
                         container_height=container, params=params,
                         rng_seed=1000 + trial, max_steps=intact_steps)
            rep = run_scenario(s)
            broke = any(isinstance(e, BondEvent) and e.kind is BondEventKind.RED_BLUE_BROKEN
                        for e in rep.events)
            if not broke and not rep.aborted:
                intact += 1

            s = Scenario(name="calibrate-replicate", seed_bits=seed_bits,
                         free_codon_count=free_codons, container_width=container,
                         container_height=container, params=params,
                         rng_seed=2000 + trial, max_steps=replication_budget,
                         stop_after_replications=1)
            rep = run_scenario(s)
            if rep.replication_events:
                replicated += 1
                first_steps.append(rep.replication_events[0].step)

            s = Scenario(name="calibrate-rarity", seed_bits=seed_bits,
                         free_codon_count=free_codons, container_width=container,
                         container_height=container, params=params,
                         rng_seed=3000 + trial, max_steps=rarity_steps)
            rep = run_scenario(s)
            spurious += len(rep.spontaneous_bonds)
        result.seed_intact = intact / trials
        result.replication_rate = replicated / trials
        result.mean_first_replication = (sum(first_steps) / len(first_steps)
                                         if first_steps else float("inf"))
        result.spurious_bonds = spurious / trials
        results.append(result)
    results.sort(key=lambda r: r.score, reverse=True)
    return results
