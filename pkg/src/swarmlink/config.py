"""Scenario configuration: one dataclass tree covering both swarms and the GA."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .core import EnvBounds


class GroundMode(str, Enum):
    CLASSIC_BOIDS = "classic_boids"
    RANDOM_WALK = "random_walk"


class UavFormation(str, Enum):
    SQUARE = "square"
    POLYGON = "polygon"


@dataclass(frozen=True)
class GroundWeights:
    """Fixed force weights of the ground swarm (cohesion, alignment, separation)."""

    cohesion: float = 0.01
    alignment: float = 0.125
    separation: float = 1.0


@dataclass(frozen=True)
class GaParams:
    population_size: int = 50
    window_steps: int = 20
    tournament_size: int = 3
    elite_count: int = 2
    crossover_prob: float = 0.9
    mutation_prob: float = 0.1


@dataclass(frozen=True)
class ScenarioConfig:
    env: EnvBounds = field(default_factory=EnvBounds)
    ground_count: int = 100
    uav_count: int = 4
    total_steps: int = 22000
    ground_mode: GroundMode = GroundMode.CLASSIC_BOIDS
    ground_weights: GroundWeights = field(default_factory=GroundWeights)
    vision_distance: float = 30.0
    vision_angle_deg: float = 360.0
    comm_range: float = 300.0
    ground_safe_distance: float = 5.0
    ground_max_speed: float = 1.0
    uav_safe_distance: float = 50.0
    uav_formation: UavFormation = UavFormation.SQUARE
    # side slightly under comm_range so the initial airborne net has edges
    # under the strict distance < R rule
    uav_square_side: float = 299.9
    ga: GaParams = field(default_factory=GaParams)
    ga_enabled: bool = True
    seed: int = 0


class ConfigError(ValueError):
    """Invalid scenario value; `key` names the offending field."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def _require(ok: bool, key: str, message: str) -> None:
    if not ok:
        raise ConfigError(key, message)


def validate_config(cfg: ScenarioConfig) -> ScenarioConfig:
    """Check every invariant; returns cfg unchanged on success."""
    _require(cfg.env.width > 0, "env.width", "must be positive")
    _require(cfg.env.height > 0, "env.height", "must be positive")
    _require(cfg.ground_count > 0, "ground_count", "must be positive")
    _require(cfg.uav_count > 0, "uav_count", "must be positive")
    _require(cfg.total_steps > 0, "total_steps", "must be positive")
    _require(cfg.vision_distance > 0, "vision_distance", "must be positive")
    _require(
        0 < cfg.vision_angle_deg <= 360,
        "vision_angle_deg",
        "must be in (0, 360]",
    )
    _require(cfg.comm_range > 0, "comm_range", "must be positive")
    _require(cfg.ground_safe_distance > 0, "ground_safe_distance", "must be positive")
    _require(cfg.ground_max_speed > 0, "ground_max_speed", "must be positive")
    _require(cfg.uav_safe_distance > 0, "uav_safe_distance", "must be positive")
    _require(cfg.uav_square_side > 0, "uav_square_side", "must be positive")
    _require(cfg.seed >= 0, "seed", "must be non-negative")
    for name in ("cohesion", "alignment", "separation"):
        w = getattr(cfg.ground_weights, name)
        _require(math.isfinite(w), f"ground_weights.{name}", "must be finite")
    ga = cfg.ga
    _require(ga.population_size >= 2, "ga.population_size", "must be at least 2")
    _require(ga.window_steps >= 1, "ga.window_steps", "must be at least 1")
    _require(
        1 <= ga.tournament_size <= ga.population_size,
        "ga.tournament_size",
        "must be in [1, population_size]",
    )
    _require(
        0 <= ga.elite_count < ga.population_size,
        "ga.elite_count",
        "must be in [0, population_size)",
    )
    _require(0 <= ga.crossover_prob <= 1, "ga.crossover_prob", "must be in [0, 1]")
    _require(0 <= ga.mutation_prob <= 1, "ga.mutation_prob", "must be in [0, 1]")
    if cfg.uav_formation is UavFormation.SQUARE:
        _require(
            cfg.uav_count == 4,
            "uav_count",
            "square formation needs exactly 4 UAVs (use polygon otherwise)",
        )
    return cfg


def preset_cb(seed: int = 0, **overrides) -> ScenarioConfig:
    """Classic-boids ground scenario with the default experiment setup."""
    return replace(ScenarioConfig(seed=seed), **overrides)


def preset_rw(seed: int = 0, **overrides) -> ScenarioConfig:
    """Random-walk ground scenario: separation only, no cohesion/alignment."""
    cfg = ScenarioConfig(
        seed=seed,
        ground_mode=GroundMode.RANDOM_WALK,
        ground_weights=GroundWeights(cohesion=0.0, alignment=0.0, separation=1.0),
    )
    return replace(cfg, **overrides)


PRESETS = {"cb": preset_cb, "rw": preset_rw}
