"""Simulation loop: ground step, UAV steps, shadow bookkeeping, GA windows,
and per-step metric recording.

Step order is fixed: (1) ground swarm advances, (2) each UAV advances under
its active genome, (3) shadows advance against the previous step's record,
(4) fresh local records are taken, (5) GA windows evolve on boundaries,
(6) the metrics record is appended. Phases (1)-(3) all read the previous
step's snapshot, so results cannot depend on per-agent execution order and
ground motion is identical with or without the UAVs.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .config import ScenarioConfig, UavFormation, validate_config
from .core import ROLE_GA, RngStream, derive_stream
from .ga import GaInstance, Genome, local_coverage_signal, make_observation, step_shadow_batch
from .ground import GroundState, init_ground, make_ground_streams, step_ground
from .metrics import MetricsRecord, TimelineSummary, record_metrics, timeline_summaries


@dataclass
class UavState:
    uav_id: int
    pos: np.ndarray
    vel: np.ndarray
    ga: GaInstance

    @property
    def active_genome(self) -> Genome:
        return self.ga.active_genome


@dataclass
class SimulationState:
    config: ScenarioConfig
    ground: GroundState
    uavs: list[UavState]
    ground_streams: list[RngStream]
    step_index: int = 0


def initial_uav_positions(cfg: ScenarioConfig) -> np.ndarray:
    """Corners of the centered square, or a centered regular polygon with the
    same circumradius for other UAV counts."""
    cx, cy = cfg.env.width / 2.0, cfg.env.height / 2.0
    radius = cfg.uav_square_side / math.sqrt(2.0)
    if cfg.uav_formation is UavFormation.SQUARE:
        count, start = 4, math.pi / 4.0
    else:
        count, start = cfg.uav_count, math.pi / 4.0
    angles = [start + 2.0 * math.pi * k / count for k in range(count)]
    return np.array(
        [[cx + radius * math.cos(a), cy + radius * math.sin(a)] for a in angles]
    )


def _uav_positions(state: SimulationState) -> np.ndarray:
    return np.array([u.pos for u in state.uavs])


def _observe(state: SimulationState, i: int):
    """Build UAV i's local record from the current world."""
    cfg = state.config
    me = state.uavs[i]
    gp, gv = state.ground.pos, state.ground.vel
    d_g = np.hypot(gp[:, 0] - me.pos[0], gp[:, 1] - me.pos[1])
    covered = d_g < cfg.comm_range
    nbr_pos, nbr_vel, nbr_cov = [], [], []
    for j, other in enumerate(state.uavs):
        if j == i:
            continue
        if math.hypot(other.pos[0] - me.pos[0], other.pos[1] - me.pos[1]) < cfg.comm_range:
            d_o = np.hypot(gp[:, 0] - other.pos[0], gp[:, 1] - other.pos[1])
            nbr_pos.append(other.pos.copy())
            nbr_vel.append(other.vel.copy())
            nbr_cov.append(int((d_o < cfg.comm_range).sum()))
    return make_observation(
        step=state.step_index,
        own_pos=me.pos,
        own_vel=me.vel,
        ground_pos=gp[covered],
        ground_vel=gv[covered],
        nbr_pos=np.array(nbr_pos, dtype=float).reshape(-1, 2),
        nbr_vel=np.array(nbr_vel, dtype=float).reshape(-1, 2),
        nbr_covered=nbr_cov,
    )


def init_state(config: ScenarioConfig) -> SimulationState:
    """Ground uniform at random; UAVs on the centered formation at rest, each
    with a freshly initialized GA; step-0 local records taken."""
    validate_config(config)
    ground = init_ground(config)
    uav_pos = initial_uav_positions(config)
    uavs = []
    for i in range(config.uav_count):
        ga = GaInstance(
            config.ga,
            derive_stream(config.seed, ROLE_GA, i),
            uav_pos[i],
            np.zeros(2),
        )
        uavs.append(UavState(i, uav_pos[i].copy(), np.zeros(2), ga))
    state = SimulationState(
        config=config,
        ground=ground,
        uavs=uavs,
        ground_streams=make_ground_streams(config.seed, config.ground_count),
    )
    for i, u in enumerate(state.uavs):
        u.ga.record(_observe(state, i), config.comm_range, track_shadows=config.ga_enabled)
    return state


def step(state: SimulationState) -> MetricsRecord:
    """Advance the whole simulation one step; returns the step's metrics."""
    cfg = state.config
    prev_obs = [u.ga.window_obs[-1] for u in state.uavs]
    state.ground = step_ground(state.ground, cfg, state.ground_streams)

    for u, obs in zip(state.uavs, prev_obs):
        genes = u.active_genome.as_array()[None, :]
        p, v = step_shadow_batch(
            genes, u.pos[None, :], u.vel[None, :], obs,
            cfg.comm_range, cfg.uav_safe_distance, cfg.env,
        )
        u.pos, u.vel = p[0], v[0]

    if cfg.ga_enabled:
        for u in state.uavs:
            u.ga.step_shadows(cfg.comm_range, cfg.uav_safe_distance, cfg.env)

    state.step_index += 1
    for i, u in enumerate(state.uavs):
        u.ga.record(_observe(state, i), cfg.comm_range, track_shadows=cfg.ga_enabled)

    if cfg.ga_enabled and state.step_index % cfg.ga.window_steps == 0:
        for u in state.uavs:
            u.ga.evolve(cfg.comm_range, cfg.uav_safe_distance, cfg.env)

    return record_metrics(
        state.step_index, state.ground.pos, _uav_positions(state), cfg.comm_range
    )


def run_scenario(config: ScenarioConfig) -> tuple[list[MetricsRecord], TimelineSummary]:
    """Run total_steps steps; returns the record stream and its summary."""
    state = init_state(config)
    records = [step(state) for _ in range(config.total_steps)]
    return records, timeline_summaries(records)


@dataclass(frozen=True)
class SweepResult:
    seeds: list[int]
    summaries: list[TimelineSummary]
    best_seed: int
    best_frac_count_one: float
    records: list[list[MetricsRecord]] | None = None


def _sweep_worker(args) -> tuple[TimelineSummary, list[MetricsRecord] | None]:
    config, keep_records = args
    records, summary = run_scenario(config)
    return summary, (records if keep_records else None)


def run_sweep(
    base_config: ScenarioConfig,
    seeds: list[int],
    workers: int = 1,
    keep_records: bool = False,
) -> SweepResult:
    """Run one scenario across seeds; identical results serial or parallel."""
    jobs = [(replace(base_config, seed=s), keep_records) for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_worker, jobs))
    else:
        results = [_sweep_worker(j) for j in jobs]
    summaries = [r[0] for r in results]
    best = max(range(len(seeds)), key=lambda i: (summaries[i].frac_count_one, -seeds[i]))
    return SweepResult(
        seeds=list(seeds),
        summaries=summaries,
        best_seed=seeds[best],
        best_frac_count_one=summaries[best].frac_count_one,
        records=[r[1] for r in results] if keep_records else None,
    )
