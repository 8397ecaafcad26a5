"""UAV relay kinematics: three boid forces among UAVs plus two ground-tracking
forces (cohesion and alignment toward covered ground agents; no air-ground
separation, since the two swarms can never collide).

`five_force_step` is the single arithmetic path for both real UAVs and the
GA's shadow rollouts, so a shadow fed the same inputs reproduces the real
trajectory bit for bit.
"""

from __future__ import annotations

import numpy as np

from .core import EnvBounds, Vec2, bounce_rows, clamp_rows

_EMPTY2 = np.empty((0, 2), dtype=float)


def uav_neighbor_indices(self_pos: np.ndarray, other_pos: np.ndarray, comm_range: float) -> np.ndarray:
    """Indices of other UAVs strictly within communication range."""
    if other_pos.shape[0] == 0:
        return np.empty(0, dtype=int)
    d = np.hypot(other_pos[:, 0] - self_pos[0], other_pos[:, 1] - self_pos[1])
    return np.flatnonzero(d < comm_range)


def covered_ground_indices(uav_pos: np.ndarray, ground_pos: np.ndarray, comm_range: float) -> np.ndarray:
    """Indices of ground agents strictly within the UAV's communication range."""
    if ground_pos.shape[0] == 0:
        return np.empty(0, dtype=int)
    d = np.hypot(ground_pos[:, 0] - uav_pos[0], ground_pos[:, 1] - uav_pos[1])
    return np.flatnonzero(d < comm_range)


def air_ground_cohesion(uav_pos: Vec2, covered_pos: list[Vec2]) -> Vec2:
    """Mean covered-ground position minus the UAV position; zero when empty."""
    if not covered_pos:
        return Vec2(0.0, 0.0)
    k = len(covered_pos)
    sx = sum(p.x for p in covered_pos)
    sy = sum(p.y for p in covered_pos)
    return Vec2(sx / k - uav_pos.x, sy / k - uav_pos.y)


def air_ground_alignment(uav_vel: Vec2, covered_vel: list[Vec2]) -> Vec2:
    """Mean covered-ground velocity minus the UAV velocity; zero when empty."""
    if not covered_vel:
        return Vec2(0.0, 0.0)
    k = len(covered_vel)
    sx = sum(v.x for v in covered_vel)
    sy = sum(v.y for v in covered_vel)
    return Vec2(sx / k - uav_vel.x, sy / k - uav_vel.y)


def _mean_offset(mask: np.ndarray, values: np.ndarray, base: np.ndarray) -> np.ndarray:
    # mask (B, K) over candidates; values (K, 2); base (B, 2)
    counts = mask.sum(axis=1)
    out = np.zeros_like(base)
    nz = counts > 0
    if np.any(nz):
        sums = (mask[:, :, None] * values[None, :, :]).sum(axis=1)
        out[nz] = sums[nz] / counts[nz, None] - base[nz]
    return out


def _separation(mask: np.ndarray, dist: np.ndarray, delta: np.ndarray, safe_distance: float) -> np.ndarray:
    # delta[b, k] = candidate_k - pos_b. Coincident UAVs (dist exactly 0) get a
    # fixed +x repulsion: the force path must stay RNG-free so shadow rollouts
    # replay the real trajectory exactly.
    viol = mask & (dist < safe_distance)
    out = np.zeros((mask.shape[0], 2), dtype=float)
    if not np.any(viol):
        return out
    positive = viol & (dist > 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        w = np.where(positive, (safe_distance - dist) / safe_distance, 0.0)
        ux = np.where(positive, -delta[:, :, 0] / dist, 0.0)
        uy = np.where(positive, -delta[:, :, 1] / dist, 0.0)
    out[:, 0] = (ux * w).sum(axis=1)
    out[:, 1] = (uy * w).sum(axis=1)
    coincident = viol & (dist == 0.0)
    if np.any(coincident):
        out[:, 0] += coincident.sum(axis=1)
    return out


def five_force_step(
    pos: np.ndarray,
    vel: np.ndarray,
    speed: np.ndarray,
    w_cohere_uav: np.ndarray,
    w_align_uav: np.ndarray,
    w_separate_uav: np.ndarray,
    w_cohere_ground: np.ndarray,
    w_align_ground: np.ndarray,
    cand_uav_pos: np.ndarray,
    cand_uav_vel: np.ndarray,
    cand_ground_pos: np.ndarray,
    cand_ground_vel: np.ndarray,
    comm_range: float,
    uav_safe_distance: float,
    env: EnvBounds,
) -> tuple[np.ndarray, np.ndarray]:
    """Batched velocity/position update for B agents sharing one world view.

    pos/vel are (B, 2); the five weights and speed are (B,). Candidate UAVs
    and ground agents are filtered here by strict distance < comm_range.
    Velocities are clamped to each row's speed gene, then positions advance
    with bounce-back walls.
    """
    B = pos.shape[0]
    cand_uav_pos = cand_uav_pos.reshape(-1, 2) if cand_uav_pos.size else _EMPTY2
    cand_ground_pos = cand_ground_pos.reshape(-1, 2) if cand_ground_pos.size else _EMPTY2

    if cand_uav_pos.shape[0]:
        delta_u = cand_uav_pos[None, :, :] - pos[:, None, :]
        dist_u = np.hypot(delta_u[:, :, 0], delta_u[:, :, 1])
        near_u = dist_u < comm_range
        coh_u = _mean_offset(near_u, cand_uav_pos, pos)
        ali_u = _mean_offset(near_u, cand_uav_vel.reshape(-1, 2), vel)
        sep_u = _separation(near_u, dist_u, delta_u, uav_safe_distance)
    else:
        coh_u = ali_u = sep_u = np.zeros((B, 2), dtype=float)

    if cand_ground_pos.shape[0]:
        delta_g = cand_ground_pos[None, :, :] - pos[:, None, :]
        dist_g = np.hypot(delta_g[:, :, 0], delta_g[:, :, 1])
        near_g = dist_g < comm_range
        coh_g = _mean_offset(near_g, cand_ground_pos, pos)
        ali_g = _mean_offset(near_g, cand_ground_vel.reshape(-1, 2), vel)
    else:
        coh_g = ali_g = np.zeros((B, 2), dtype=float)

    new_vel = (
        vel
        + w_cohere_uav[:, None] * coh_u
        + w_align_uav[:, None] * ali_u
        + w_separate_uav[:, None] * sep_u
        + w_cohere_ground[:, None] * coh_g
        + w_align_ground[:, None] * ali_g
    )
    new_vel = clamp_rows(new_vel, speed)
    return bounce_rows(pos, new_vel, env)


def step_uav(
    pos: np.ndarray,
    vel: np.ndarray,
    genome,
    other_uav_pos: np.ndarray,
    other_uav_vel: np.ndarray,
    ground_pos: np.ndarray,
    ground_vel: np.ndarray,
    comm_range: float,
    uav_safe_distance: float,
    env: EnvBounds,
) -> tuple[np.ndarray, np.ndarray]:
    """Single-UAV step under a genome's speed and five force weights."""
    one = lambda x: np.array([x], dtype=float)
    p, v = five_force_step(
        pos[None, :].astype(float),
        vel[None, :].astype(float),
        one(genome.speed),
        one(genome.w_cohere_uav),
        one(genome.w_align_uav),
        one(genome.w_separate_uav),
        one(genome.w_cohere_ground),
        one(genome.w_align_ground),
        np.asarray(other_uav_pos, dtype=float),
        np.asarray(other_uav_vel, dtype=float),
        np.asarray(ground_pos, dtype=float),
        np.asarray(ground_vel, dtype=float),
        comm_range,
        uav_safe_distance,
        env,
    )
    return p[0], v[0]
