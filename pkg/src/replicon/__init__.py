"""replicon: self-replicating T-shaped automata in a 2D virtual liquid.

Mobile automata with discrete internal states drift in a container under
brownian motion, viscosity and spring-like bond forces. Chains of automata
encode bit strings; a seeded chain assembles free automata into a negated
mirror copy of itself and a local signalling protocol splits the finished
copy off. Runs are deterministic given a scenario and an RNG seed.
"""

from .bonding import BondEvent, BondEventKind
from .dynamics import ForceAccumulator, NumericInstabilityError
from .harness import (ReplicationRecord, RunReport, Scenario, SplitEvent,
                      build_world, calibrate, detect_replication, run_scenario,
                      run_world, step, strand_census)
from .model import (Arm, BoundaryError, Codon, CodonType, FieldKind, FieldSize,
                    Pose, SimParams, Velocity, World, alignment_error,
                    enumerate_discrete_states, fields_touch, make_codon,
                    tip_position)
from .output import load_snapshot, read_metrics, save_snapshot, world_hash
from .strands import (StrandRecord, StrandStructureError, extract_strands,
                      negate, place_seed, reverse, symmetrize)

__version__ = "0.1.0"

__all__ = [
    "Arm", "BondEvent", "BondEventKind", "BoundaryError", "Codon", "CodonType",
    "FieldKind", "FieldSize", "ForceAccumulator", "NumericInstabilityError",
    "Pose", "ReplicationRecord", "RunReport", "Scenario", "SimParams",
    "SplitEvent", "StrandRecord", "StrandStructureError", "Velocity", "World",
    "alignment_error", "build_world", "calibrate", "detect_replication",
    "enumerate_discrete_states", "extract_strands", "fields_touch",
    "load_snapshot", "make_codon", "negate", "place_seed", "read_metrics",
    "reverse", "run_scenario", "run_world", "save_snapshot", "step",
    "strand_census", "symmetrize", "tip_position", "world_hash",
    "__version__",
]
