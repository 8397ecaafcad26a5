"""Geometry primitives, bounded-arena kinematics, and seeded random streams."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Stream roles. Every consumer of randomness owns a private stream derived
# from (scenario seed, role, index) so execution order cannot change results.
ROLE_GROUND_INIT = 0
ROLE_GROUND_AGENT = 1
ROLE_GA = 2

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Vec2:
    """2D position or velocity in arena units."""

    x: float
    y: float

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> Vec2:
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dot(self, other: Vec2) -> float:
        return self.x * other.x + self.y * other.y

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)

    @staticmethod
    def of(arr) -> Vec2:
        return Vec2(float(arr[0]), float(arr[1]))


@dataclass(frozen=True)
class EnvBounds:
    """Rectangular arena with corner origin (0, 0)."""

    width: float = 1000.0
    height: float = 1000.0

    def contains(self, p: Vec2) -> bool:
        return 0.0 <= p.x <= self.width and 0.0 <= p.y <= self.height

    def center(self) -> Vec2:
        return Vec2(self.width / 2.0, self.height / 2.0)


def stream_id(role: int, index: int = 0) -> int:
    """Pack a (role, index) pair into a single stream identifier."""
    return (role << 32) | index


class RngStream:
    """Deterministic random stream; (seed, stream_id) fixes the whole sequence.

    Backed by PCG64, which produces the same values on every platform.
    A stream must have exactly one owner: never share one across agents.
    """

    __slots__ = ("seed", "stream_id", "_gen")

    def __init__(self, seed: int, stream_id: int = 0):
        if seed < 0:
            raise ValueError("seed must be non-negative")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self._gen = np.random.Generator(np.random.PCG64(seq))

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return float(self._gen.random())

    def integers(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi)."""
        return int(self._gen.integers(lo, hi))

    def choice_indices(self, n: int, k: int) -> np.ndarray:
        """k distinct indices sampled uniformly from range(n)."""
        return self._gen.choice(n, size=k, replace=False)

    def angle(self) -> float:
        """Uniform heading in [0, 2*pi)."""
        return next_uniform(self, 0.0, TWO_PI)


def derive_stream(seed: int, role: int, index: int = 0) -> RngStream:
    return RngStream(seed, stream_id(role, index))


def next_uniform(rng: RngStream, lo: float, hi: float) -> float:
    """Uniform draw in [lo, hi); advances the stream deterministically."""
    if lo > hi:
        raise ValueError(f"empty range: lo={lo} > hi={hi}")
    return lo + (hi - lo) * rng.random()


def clamp_magnitude(v: Vec2, max_norm: float) -> Vec2:
    """Scale v down to magnitude max_norm if it is longer; direction kept."""
    if max_norm < 0:
        raise ValueError("max_norm must be non-negative")
    n = v.norm()
    if n <= max_norm:
        return v
    return v * (max_norm / n)


def clamp_rows(v: np.ndarray, max_norm) -> np.ndarray:
    """Row-wise twin of clamp_magnitude; max_norm is scalar or (B,)."""
    n = np.hypot(v[:, 0], v[:, 1])
    limit = np.broadcast_to(np.asarray(max_norm, dtype=float), n.shape)
    over = n > limit
    out = v.copy()
    if np.any(over):
        out[over] = v[over] * (limit[over] / n[over])[:, None]
    return out


def _reflect_axis(c: float, vc: float, limit: float) -> tuple[float, float]:
    while c < 0.0 or c > limit:
        if c < 0.0:
            c = -c
            vc = -vc
        else:
            c = 2.0 * limit - c
            vc = -vc
    return c, vc


def bounce_reflect(p: Vec2, v: Vec2, env: EnvBounds) -> tuple[Vec2, Vec2]:
    """Advance p by v, mirroring about any violated wall (bounce-back).

    The position is mirrored and the matching velocity component negated,
    repeatedly until in-bounds; corner exits reflect both components.
    """
    x, vx = _reflect_axis(p.x + v.x, v.x, env.width)
    y, vy = _reflect_axis(p.y + v.y, v.y, env.height)
    return Vec2(x, y), Vec2(vx, vy)


def _reflect_axis_rows(c: np.ndarray, vc: np.ndarray, limit: float) -> tuple[np.ndarray, np.ndarray]:
    while True:
        below = c < 0.0
        above = c > limit
        if not (np.any(below) or np.any(above)):
            return c, vc
        c = np.where(below, -c, c)
        vc = np.where(below, -vc, vc)
        above = c > limit
        c = np.where(above, 2.0 * limit - c, c)
        vc = np.where(above, -vc, vc)


def bounce_rows(p: np.ndarray, v: np.ndarray, env: EnvBounds) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise twin of bounce_reflect over (B, 2) arrays."""
    x, vx = _reflect_axis_rows(p[:, 0] + v[:, 0], v[:, 0].copy(), env.width)
    y, vy = _reflect_axis_rows(p[:, 1] + v[:, 1], v[:, 1].copy(), env.height)
    return np.stack([x, y], axis=1), np.stack([vx, vy], axis=1)


def reflect_rows(q: np.ndarray, env: EnvBounds) -> np.ndarray:
    """Mirror out-of-bounds points back into the arena (positions only)."""
    x, _ = _reflect_axis_rows(q[:, 0], np.zeros_like(q[:, 0]), env.width)
    y, _ = _reflect_axis_rows(q[:, 1], np.zeros_like(q[:, 1]), env.height)
    return np.stack([x, y], axis=1)
