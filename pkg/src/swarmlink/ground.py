"""Ground swarm: classic boids or random walkers on a bounded field.

The ground agents never react to the UAVs; their update is
V(t) = V(t-1) + Wc*C + Wa*A + Ws*S followed by P(t) = P(t-1) + V(t),
with speed clamping and bounce-back walls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import GroundMode, ScenarioConfig
from .core import (
    ROLE_GROUND_AGENT,
    ROLE_GROUND_INIT,
    RngStream,
    TWO_PI,
    Vec2,
    bounce_rows,
    clamp_rows,
    derive_stream,
    next_uniform,
)


@dataclass
class GroundAgent:
    """Scalar view of one ground agent (id, position, velocity, heading)."""

    agent_id: int
    pos: Vec2
    vel: Vec2
    heading: float = 0.0  # radians; kept from the last nonzero velocity


@dataclass
class GroundState:
    """Array-of-agents state: pos (N,2), vel (N,2), heading (N,)."""

    pos: np.ndarray
    vel: np.ndarray
    heading: np.ndarray

    @property
    def count(self) -> int:
        return self.pos.shape[0]

    def to_agents(self) -> list[GroundAgent]:
        return [
            GroundAgent(i, Vec2.of(self.pos[i]), Vec2.of(self.vel[i]), float(self.heading[i]))
            for i in range(self.count)
        ]

    @staticmethod
    def from_agents(agents: list[GroundAgent]) -> GroundState:
        pos = np.array([[a.pos.x, a.pos.y] for a in agents], dtype=float)
        vel = np.array([[a.vel.x, a.vel.y] for a in agents], dtype=float)
        heading = np.array([a.heading for a in agents], dtype=float)
        return GroundState(pos, vel, heading)


def make_ground_streams(seed: int, count: int) -> list[RngStream]:
    return [derive_stream(seed, ROLE_GROUND_AGENT, i) for i in range(count)]


def init_ground(cfg: ScenarioConfig) -> GroundState:
    """Uniform random positions; random headings at full ground speed."""
    rng = derive_stream(cfg.seed, ROLE_GROUND_INIT)
    n = cfg.ground_count
    pos = np.empty((n, 2), dtype=float)
    for i in range(n):
        pos[i, 0] = next_uniform(rng, 0.0, cfg.env.width)
        pos[i, 1] = next_uniform(rng, 0.0, cfg.env.height)
    heading = np.array([rng.angle() for _ in range(n)])
    vel = cfg.ground_max_speed * np.stack([np.cos(heading), np.sin(heading)], axis=1)
    return GroundState(pos, vel, heading)


def ground_neighbors(
    agent: GroundAgent,
    agents: list[GroundAgent],
    vision_distance: float,
    vision_angle_deg: float = 360.0,
) -> list[GroundAgent]:
    """Agents within vision distance and inside the vision cone.

    The cone has half-angle vision_angle_deg / 2 around the agent's heading;
    at 360 degrees the cone test is vacuous. Coincident agents are visible.
    """
    out = []
    cos_half = math.cos(math.radians(vision_angle_deg) / 2.0)
    for other in agents:
        if other is agent or other.agent_id == agent.agent_id:
            continue
        d = (other.pos - agent.pos).norm()
        if d >= vision_distance:
            continue
        if vision_angle_deg < 360.0 and d > 0.0:
            hx, hy = math.cos(agent.heading), math.sin(agent.heading)
            cos_ang = ((other.pos.x - agent.pos.x) * hx + (other.pos.y - agent.pos.y) * hy) / d
            if cos_ang < cos_half:
                continue
        out.append(other)
    return out


def cohesion_force(agent: GroundAgent, neighbors: list[GroundAgent]) -> Vec2:
    """Pull toward the neighbors' center of mass; zero with no neighbors."""
    if not neighbors:
        return Vec2(0.0, 0.0)
    k = len(neighbors)
    sx = sum(n.pos.x for n in neighbors)
    sy = sum(n.pos.y for n in neighbors)
    return Vec2(sx / k - agent.pos.x, sy / k - agent.pos.y)


def alignment_force(agent: GroundAgent, neighbors: list[GroundAgent]) -> Vec2:
    """Steer toward the neighbors' mean velocity; zero with no neighbors."""
    if not neighbors:
        return Vec2(0.0, 0.0)
    k = len(neighbors)
    sx = sum(n.vel.x for n in neighbors)
    sy = sum(n.vel.y for n in neighbors)
    return Vec2(sx / k - agent.vel.x, sy / k - agent.vel.y)


def separation_force(
    agent: GroundAgent,
    neighbors: list[GroundAgent],
    safe_distance: float,
    rng: RngStream | None = None,
) -> Vec2:
    """Repulsion from neighbors inside the safe distance.

    Each violator adds the unit vector from it toward the agent, weighted by
    (safe_distance - dist) / safe_distance. A coincident neighbor (dist = 0)
    contributes a unit vector with direction drawn from the agent's stream.
    """
    fx = fy = 0.0
    for other in neighbors:
        dx = agent.pos.x - other.pos.x
        dy = agent.pos.y - other.pos.y
        d = math.hypot(dx, dy)
        if d >= safe_distance:
            continue
        if d == 0.0:
            if rng is None:
                raise ValueError("coincident neighbor needs the agent's rng stream")
            theta = rng.angle()
            fx += math.cos(theta)
            fy += math.sin(theta)
        else:
            w = (safe_distance - d) / safe_distance
            fx += (dx / d) * w
            fy += (dy / d) * w
    return Vec2(fx, fy)


def _neighbor_mask(state: GroundState, vision_distance: float, vision_angle_deg: float):
    delta = state.pos[None, :, :] - state.pos[:, None, :]  # delta[i, j] = pos_j - pos_i
    dist = np.hypot(delta[:, :, 0], delta[:, :, 1])
    mask = dist < vision_distance
    np.fill_diagonal(mask, False)
    if vision_angle_deg < 360.0:
        cos_half = math.cos(math.radians(vision_angle_deg) / 2.0)
        hx = np.cos(state.heading)[:, None]
        hy = np.sin(state.heading)[:, None]
        with np.errstate(invalid="ignore", divide="ignore"):
            cos_ang = (delta[:, :, 0] * hx + delta[:, :, 1] * hy) / dist
        in_cone = (cos_ang >= cos_half) | (dist == 0.0)
        mask &= in_cone
    return mask, dist, delta


def _masked_mean_offset(mask: np.ndarray, values: np.ndarray, base: np.ndarray) -> np.ndarray:
    counts = mask.sum(axis=1)
    out = np.zeros_like(base)
    nz = counts > 0
    if np.any(nz):
        sums = (mask[:, :, None] * values[None, :, :]).sum(axis=1)
        out[nz] = sums[nz] / counts[nz, None] - base[nz]
    return out


def _separation_rows(
    mask: np.ndarray,
    dist: np.ndarray,
    delta: np.ndarray,
    safe_distance: float,
    streams: list[RngStream],
) -> np.ndarray:
    viol = mask & (dist < safe_distance)
    positive = viol & (dist > 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        w = np.where(positive, (safe_distance - dist) / safe_distance, 0.0)
        ux = np.where(positive, -delta[:, :, 0] / dist, 0.0)
        uy = np.where(positive, -delta[:, :, 1] / dist, 0.0)
    force = np.stack([(ux * w).sum(axis=1), (uy * w).sum(axis=1)], axis=1)
    coincident = viol & (dist == 0.0)
    if np.any(coincident):
        for i in np.flatnonzero(coincident.any(axis=1)):
            for _ in range(int(coincident[i].sum())):
                theta = streams[i].angle()
                force[i, 0] += math.cos(theta)
                force[i, 1] += math.sin(theta)
    return force


def step_ground(
    state: GroundState, cfg: ScenarioConfig, streams: list[RngStream]
) -> GroundState:
    """One synchronous step of the whole ground swarm.

    All forces are evaluated on the input snapshot. In random-walk mode the
    cohesion and alignment weights are never read; a unit vector at a uniform
    random heading (one draw per agent per step, from that agent's stream)
    drives the walk instead.
    """
    mask, dist, delta = _neighbor_mask(state, cfg.vision_distance, cfg.vision_angle_deg)
    sep = _separation_rows(mask, dist, delta, cfg.ground_safe_distance, streams)
    w = cfg.ground_weights
    if cfg.ground_mode is GroundMode.CLASSIC_BOIDS:
        coh = _masked_mean_offset(mask, state.pos, state.pos)
        ali = _masked_mean_offset(mask, state.vel, state.vel)
        vel = state.vel + w.cohesion * coh + w.alignment * ali + w.separation * sep
    else:
        angles = np.array([s.angle() for s in streams])
        drive = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        vel = state.vel + drive + w.separation * sep
    vel = clamp_rows(vel, cfg.ground_max_speed)
    pos, vel = bounce_rows(state.pos, vel, cfg.env)
    speed = np.hypot(vel[:, 0], vel[:, 1])
    heading = np.where(speed > 0.0, np.arctan2(vel[:, 1], vel[:, 0]), state.heading)
    return GroundState(pos, vel, heading)
