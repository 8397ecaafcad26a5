"""swarmlink: deterministic simulator of a UAV relay swarm that keeps a
moving ground swarm wirelessly connected, one real-time GA per UAV."""

from .config import (
    GaParams,
    GroundMode,
    GroundWeights,
    ScenarioConfig,
    UavFormation,
    preset_cb,
    preset_rw,
)
from .core import EnvBounds, RngStream, Vec2
from .engine import init_state, run_scenario, run_sweep, step
from .ga import Genome
from .metrics import MetricsRecord, TimelineSummary, timeline_summaries

__all__ = [
    "EnvBounds",
    "GaParams",
    "Genome",
    "GroundMode",
    "GroundWeights",
    "MetricsRecord",
    "RngStream",
    "ScenarioConfig",
    "TimelineSummary",
    "UavFormation",
    "Vec2",
    "init_state",
    "preset_cb",
    "preset_rw",
    "run_scenario",
    "run_sweep",
    "step",
    "timeline_summaries",
]
