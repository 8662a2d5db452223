"""Serialization: metrics stream, snapshots, world hashing, run reports.

Everything here is deterministic text. Metrics are JSON lines with a schema
stamp on line one and strictly non-decreasing step numbers. Snapshots carry
the complete per-codon state vector plus timers and the serialized RNG
state, so loading one and continuing reproduces the uninterrupted
trajectory bit for bit.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .model import Codon, CodonType, Pose, SimParams, World

METRICS_SCHEMA = {"schema": "replicon-metrics", "version": 1}
SNAPSHOT_SCHEMA = "replicon-snapshot"


def world_hash(world: World) -> str:
    """SHA-256 over the packed full state of every codon plus the step count."""
    h = hashlib.sha256()
    h.update(struct.pack("<q", world.step))
    pack = struct.pack
    for c in world.codons:
        h.update(pack("<6d", c.x, c.y, c.angle, c.vx, c.vy, c.omega))
        h.update(pack("<12q", c.id, int(c.ctype),
                      c.red_large, c.blue_large, c.green_large, c.purple_large,
                      c.yellow_large,
                      -1 if c.bond_red is None else c.bond_red,
                      -1 if c.bond_blue is None else c.bond_blue,
                      -1 if c.bond_vertical is None else c.bond_vertical,
                      c.strand_location_state * 3 + c.splitting_state,
                      c.yellow_timer * 100003 + c.z_timer))
    return h.hexdigest()


class MetricsWriter:
    """Streams one JSON object per line to metrics.jsonl in a run directory."""

    def __init__(self, out_dir):
        self.path = Path(out_dir)
        self.path.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path / "metrics.jsonl", "w", encoding="utf-8", newline="\n")
        self._fh.write(json.dumps(METRICS_SCHEMA, separators=(",", ":")) + "\n")

    def write(self, record: dict) -> None:
        self._fh.write(json.dumps(record, separators=(",", ":")) + "\n")

    def close(self) -> None:
        if self._fh:
            self._fh.close()
            self._fh = None


def read_metrics(path) -> list[dict]:
    """Load a metrics file; raises ValueError naming the offending line."""
    path = Path(path)
    if path.is_dir():
        path = path / "metrics.jsonl"
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: malformed metrics line: {exc}") from exc
    if not records or records[0].get("schema") != METRICS_SCHEMA["schema"]:
        raise ValueError(f"{path}: missing metrics schema stamp on line 1")
    return records


def _codon_dict(c: Codon) -> dict:
    return {
        "id": c.id,
        "type": int(c.ctype),
        "x": c.x, "y": c.y, "angle": c.angle,
        "vx": c.vx, "vy": c.vy, "omega": c.omega,
        "fields": [int(c.blue_large), int(c.red_large), int(c.green_large),
                   int(c.purple_large), int(c.yellow_large)],
        "bonds": [c.bond_red, c.bond_blue, c.bond_vertical],
        "location_state": c.strand_location_state,
        "splitting_state": c.splitting_state,
        "yellow_timer": c.yellow_timer,
        "z_timer": c.z_timer,
    }


def save_snapshot(world: World, out_dir, name: str = "run") -> Path:
    """Write snapshot_<step>.json; self-contained for exact resumption."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = {
        "schema": SNAPSHOT_SCHEMA,
        "version": 1,
        "name": name,
        "step": world.step,
        "normalized_time": world.normalized_time(),
        "container": [world.width, world.height],
        "params": asdict(world.params),
        "rng_state": world.rng.bit_generator.state if world.rng is not None else None,
        "codons": [_codon_dict(c) for c in world.codons],
    }
    path = out / f"snapshot_{world.step:09d}.json"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, separators=(",", ":"))
        fh.write("\n")
    return path


def load_snapshot(path) -> World:
    """Rebuild a world, including its RNG stream position, from a snapshot."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema") != SNAPSHOT_SCHEMA:
        raise ValueError(f"{path}: not a snapshot file")
    params = SimParams(**doc["params"])
    world = World(width=doc["container"][0], height=doc["container"][1], params=params)
    world.step = doc["step"]
    rng = np.random.default_rng(0)
    if doc["rng_state"] is not None:
        rng.bit_generator.state = doc["rng_state"]
    world.rng = rng
    for cd in doc["codons"]:
        c = Codon(cd["id"], CodonType(cd["type"]), Pose(cd["x"], cd["y"], cd["angle"]))
        c.vx = cd["vx"]
        c.vy = cd["vy"]
        c.omega = cd["omega"]
        c.blue_large, c.red_large, c.green_large, c.purple_large, c.yellow_large = \
            (bool(v) for v in cd["fields"])
        c.bond_red, c.bond_blue, c.bond_vertical = cd["bonds"]
        c.strand_location_state = cd["location_state"]
        c.splitting_state = cd["splitting_state"]
        c.yellow_timer = cd["yellow_timer"]
        c.z_timer = cd["z_timer"]
        if c.id != len(world.codons):
            raise ValueError(f"{path}: codon ids must be dense and ordered")
        world.codons.append(c)
    return world


def save_report(report, out_dir) -> Path:
    """Write report.json next to the metrics."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = {
        "scenario": report.scenario_name,
        "steps_executed": report.steps_executed,
        "normalized_time": report.normalized_time,
        "wall_clock": report.wall_clock,
        "aborted": report.aborted,
        "replications": [r.as_dict() for r in report.replication_events],
        "spontaneous_bonds": [{"step": s, "a": a, "b": b}
                              for s, (a, b) in report.spontaneous_bonds],
        "final_census": report.final_census,
    }
    path = out / "report.json"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return path
