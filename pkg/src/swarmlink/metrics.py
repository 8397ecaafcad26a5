"""Survivability metrics over the ground-UAV relay graph.

Edges exist iff distance < comm_range (strict): ground-UAV and UAV-UAV only,
never ground-ground. Connectivity counts connected components over ground
agents; an uncovered ground agent is its own singleton component, so the
ideal value is exactly 1 and degradation is monotone.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


@dataclass(frozen=True)
class CommGraph:
    """Relay graph: ground nodes, UAV nodes, and the two typed edge sets."""

    ground_count: int
    uav_count: int
    ground_uav_edges: np.ndarray  # (E, 2) of (ground index, uav index)
    uav_uav_edges: np.ndarray     # (F, 2) of (uav index, uav index)


@dataclass(frozen=True)
class MetricsRecord:
    step: int
    coverage: int
    component_count: int
    top_sizes: tuple[int, int, int]


def coverage(ground_pos: np.ndarray, uav_pos: np.ndarray, comm_range: float) -> int:
    """Ground agents within range of at least one UAV (each counted once)."""
    if uav_pos.shape[0] == 0 or ground_pos.shape[0] == 0:
        return 0
    d = np.hypot(
        ground_pos[None, :, 0] - uav_pos[:, None, 0],
        ground_pos[None, :, 1] - uav_pos[:, None, 1],
    )
    return int((d < comm_range).any(axis=0).sum())


def build_comm_graph(ground_pos: np.ndarray, uav_pos: np.ndarray, comm_range: float) -> CommGraph:
    n, u = ground_pos.shape[0], uav_pos.shape[0]
    if u and n:
        d = np.hypot(
            ground_pos[None, :, 0] - uav_pos[:, None, 0],
            ground_pos[None, :, 1] - uav_pos[:, None, 1],
        )
        gu = np.argwhere(d.T < comm_range)
    else:
        gu = np.empty((0, 2), dtype=int)
    if u > 1:
        du = np.hypot(
            uav_pos[None, :, 0] - uav_pos[:, None, 0],
            uav_pos[None, :, 1] - uav_pos[:, None, 1],
        )
        iu, ju = np.triu_indices(u, k=1)
        near = du[iu, ju] < comm_range
        uu = np.stack([iu[near], ju[near]], axis=1)
    else:
        uu = np.empty((0, 2), dtype=int)
    return CommGraph(n, u, gu, uu)


def connectivity(graph: CommGraph) -> tuple[int, list[int]]:
    """Component count over ground agents and descending component sizes.

    Components are found over the full relay graph; sizes count ground
    agents only and UAV-only components are discarded.
    """
    n, u = graph.ground_count, graph.uav_count
    uf = UnionFind(n + u)
    for g, a in graph.ground_uav_edges:
        uf.union(int(g), n + int(a))
    for a, b in graph.uav_uav_edges:
        uf.union(n + int(a), n + int(b))
    sizes = Counter(uf.find(i) for i in range(n))
    ordered = sorted(sizes.values(), reverse=True)
    return len(ordered), ordered


def top_k(sizes: list[int], k: int = 3) -> tuple[int, ...]:
    """Largest k sizes, descending, zero-padded."""
    head = sorted(sizes, reverse=True)[:k]
    return tuple(head + [0] * (k - len(head)))


def record_metrics(step: int, ground_pos: np.ndarray, uav_pos: np.ndarray, comm_range: float) -> MetricsRecord:
    graph = build_comm_graph(ground_pos, uav_pos, comm_range)
    count, sizes = connectivity(graph)
    return MetricsRecord(
        step=step,
        coverage=coverage(ground_pos, uav_pos, comm_range),
        component_count=count,
        top_sizes=top_k(sizes),
    )


@dataclass(frozen=True)
class TimelineSummary:
    """Time-fraction summaries over a run's metric records."""

    steps: int
    component_count_freq: dict[int, float]
    largest_size_freq: dict[int, float]
    frac_count_one: float
    frac_largest_at_least: dict[int, float]


def timeline_summaries(
    records: list[MetricsRecord], size_thresholds: tuple[int, ...] = (70, 90)
) -> TimelineSummary:
    """Fractions of steps at each component count / largest-component size."""
    if not records:
        raise ValueError("no records to summarize")
    total = len(records)
    count_freq = Counter(r.component_count for r in records)
    largest_freq = Counter(r.top_sizes[0] for r in records)
    frac_at_least = {
        t: sum(1 for r in records if r.top_sizes[0] >= t) / total
        for t in size_thresholds
    }
    return TimelineSummary(
        steps=total,
        component_count_freq={k: v / total for k, v in sorted(count_freq.items())},
        largest_size_freq={k: v / total for k, v in sorted(largest_freq.items())},
        frac_count_one=count_freq.get(1, 0) / total,
        frac_largest_at_least=frac_at_least,
    )
