"""Plain-text run configuration: one `key = value` per line.

Keys mirror the Scenario and SimParams fields, flattened into one
namespace. Blank lines and lines starting with # are ignored. Later lines
override earlier ones, so the broadcast radius keys (radius_small,
radius_large, applying to all five field kinds) can be refined by the
per-kind keys below them. Unknown keys are rejected by name. Every key is
optional; omitted keys keep their documented defaults.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import Callable

from .harness import Scenario
from .model import FieldKind, SimParams


class ConfigError(ValueError):
    pass


def _to_int(v: str) -> int:
    return int(v)


def _to_float(v: str) -> float:
    return float(v)


def _to_str(v: str) -> str:
    return v


def _to_bool(v: str) -> bool:
    low = v.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {v!r}")


def _optional(conv: Callable):
    def wrap(v: str):
        return None if v.lower() == "none" else conv(v)
    return wrap


_SCENARIO_FIELDS: dict[str, Callable] = {
    "name": _to_str,
    "seed_bits": _optional(_to_str),
    "free_codon_count": _to_int,
    "free_type_mix": _to_float,
    "container_width": _to_float,
    "container_height": _to_float,
    "rng_seed": _to_int,
    "max_steps": _to_int,
    "snapshot_every": _to_int,
    "frame_every": _to_int,
    "seed_x": _optional(_to_float),
    "seed_y": _optional(_to_float),
    "seed_angle": _to_float,
    "stop_after_replications": _optional(_to_int),
    "audit_invariants": _to_bool,
}

_PARAM_FIELDS: dict[str, Callable] = {
    f.name: (_to_int if f.type == "int" else _to_float)
    for f in dataclasses.fields(SimParams)
}

# convenience keys that set the radius of every field kind at once
_BROADCAST = {
    "radius_small": [f"radius_small_{k.value}" for k in FieldKind],
    "radius_large": [f"radius_large_{k.value}" for k in FieldKind],
}


def parse_config(text: str, source: str = "<config>") -> Scenario:
    scenario = Scenario()
    params = SimParams()
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in seen:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        seen.add(key)
        try:
            if key in _SCENARIO_FIELDS:
                setattr(scenario, key, _SCENARIO_FIELDS[key](value))
            elif key in _PARAM_FIELDS:
                setattr(params, key, _PARAM_FIELDS[key](value))
            elif key in _BROADCAST:
                v = _to_float(value)
                for target in _BROADCAST[key]:
                    setattr(params, target, v)
            else:
                raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from exc
    scenario.params = params
    return scenario


def load_config(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, source=str(path))


def _fmt_value(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def serialize_config(scenario: Scenario) -> str:
    """Canonical text form; parse(serialize(s)) reproduces s exactly."""
    lines = ["# replicon scenario"]
    for key in _SCENARIO_FIELDS:
        lines.append(f"{key} = {_fmt_value(getattr(scenario, key))}")
    lines.append("")
    lines.append("# physics and protocol constants")
    for key in _PARAM_FIELDS:
        lines.append(f"{key} = {_fmt_value(getattr(scenario.params, key))}")
    return "\n".join(lines) + "\n"


def save_config(scenario: Scenario, path) -> None:
    Path(path).write_text(serialize_config(scenario), encoding="utf-8")
