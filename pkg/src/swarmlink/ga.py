"""Per-UAV real-time genetic algorithm.

Each UAV owns one instance: a population of genomes in which exactly one is
active (drives the real UAV) while the rest act as shadows, stepping virtual
positions against the UAV's recorded local world. Every `window_steps` steps
the instance evolves one generation, scoring each genome by the coverage its
shadow accumulated over the window plus a one-window-ahead prediction, and
the best genome becomes the new active one.

All inputs are local by construction: the recorded world holds only ground
agents within the UAV's own range and one-hop neighbor UAV broadcasts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import GaParams
from .core import EnvBounds, RngStream, next_uniform, reflect_rows
from .uav import five_force_step

# Gene order is fixed: crossover cut points index into this layout.
GENE_NAMES = (
    "speed",
    "w_align_ground",
    "w_cohere_ground",
    "w_align_uav",
    "w_cohere_uav",
    "w_separate_uav",
)
GENE_BOUNDS = (
    (0.0, 5.0),   # speed: 0 hovers, 5 is top speed
    (0.0, 0.5),   # ground alignment weight
    (0.0, 0.5),   # ground cohesion weight
    (0.0, 0.5),   # UAV alignment weight
    (0.0, 0.5),   # UAV cohesion weight
    (0.5, 2.0),   # UAV separation weight: kept high for safety
)
GENE_COUNT = 6


@dataclass(frozen=True)
class Genome:
    speed: float
    w_align_ground: float
    w_cohere_ground: float
    w_align_uav: float
    w_cohere_uav: float
    w_separate_uav: float

    def as_tuple(self) -> tuple[float, ...]:
        return (
            self.speed,
            self.w_align_ground,
            self.w_cohere_ground,
            self.w_align_uav,
            self.w_cohere_uav,
            self.w_separate_uav,
        )

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)

    @staticmethod
    def from_values(values) -> Genome:
        return Genome(*(float(v) for v in values))

    def in_bounds(self) -> bool:
        return all(
            lo <= g <= hi for g, (lo, hi) in zip(self.as_tuple(), GENE_BOUNDS)
        )


@dataclass(frozen=True)
class UavObservation:
    """One step of a UAV's local world record.

    ground_* hold the ground agents within the UAV's own communication range;
    nbr_* hold the one-hop neighbor UAVs (within range) and their broadcast
    covered counts. Arrays are frozen: records must never mutate.
    """

    step: int
    own_pos: np.ndarray
    own_vel: np.ndarray
    own_covered: int
    ground_pos: np.ndarray
    ground_vel: np.ndarray
    nbr_pos: np.ndarray
    nbr_vel: np.ndarray
    nbr_covered: np.ndarray

    def __post_init__(self):
        for name in ("own_pos", "own_vel", "ground_pos", "ground_vel", "nbr_pos", "nbr_vel", "nbr_covered"):
            getattr(self, name).flags.writeable = False


def make_observation(
    step: int,
    own_pos: np.ndarray,
    own_vel: np.ndarray,
    ground_pos: np.ndarray,
    ground_vel: np.ndarray,
    nbr_pos: np.ndarray,
    nbr_vel: np.ndarray,
    nbr_covered,
) -> UavObservation:
    return UavObservation(
        step=step,
        own_pos=np.array(own_pos, dtype=float),
        own_vel=np.array(own_vel, dtype=float),
        own_covered=int(np.asarray(ground_pos).reshape(-1, 2).shape[0]),
        ground_pos=np.array(ground_pos, dtype=float).reshape(-1, 2),
        ground_vel=np.array(ground_vel, dtype=float).reshape(-1, 2),
        nbr_pos=np.array(nbr_pos, dtype=float).reshape(-1, 2),
        nbr_vel=np.array(nbr_vel, dtype=float).reshape(-1, 2),
        nbr_covered=np.array(nbr_covered, dtype=int).reshape(-1),
    )


def local_coverage_signal(own_covered: int, neighbor_covered) -> int:
    """Own covered count plus one-hop neighbors' counts (plain sum; overlaps
    between UAVs are deliberately double-counted)."""
    return int(own_covered) + int(sum(neighbor_covered))


def window_fitness(coverage_history, predicted_coverage: float) -> float:
    """Sum of per-step coverage over the window plus the predicted term."""
    return float(sum(coverage_history)) + float(predicted_coverage)


def init_population(params: GaParams, rng: RngStream) -> list[Genome]:
    """Population drawn uniformly within the gene bounds."""
    pop = []
    for _ in range(params.population_size):
        genes = [next_uniform(rng, lo, hi) for lo, hi in GENE_BOUNDS]
        pop.append(Genome.from_values(genes))
    return pop


def tournament_select(
    population: list[Genome],
    fitnesses,
    params: GaParams,
    rng: RngStream,
) -> Genome:
    """Best of k distinct uniformly sampled genomes; ties go to the lower index."""
    idx = sorted(int(i) for i in rng.choice_indices(len(population), params.tournament_size))
    best = idx[0]
    for i in idx[1:]:
        if fitnesses[i] > fitnesses[best]:
            best = i
    return population[best]


def one_point_crossover(a: Genome, b: Genome, rng: RngStream) -> tuple[Genome, Genome]:
    """Swap gene suffixes at a cut drawn uniformly from {1..5}."""
    cut = rng.integers(1, GENE_COUNT)
    ta, tb = a.as_tuple(), b.as_tuple()
    return (
        Genome.from_values(ta[:cut] + tb[cut:]),
        Genome.from_values(tb[:cut] + ta[cut:]),
    )


def mutate(g: Genome, params: GaParams, rng: RngStream) -> Genome:
    """Resample each gene within its own bounds with the per-gene probability."""
    genes = list(g.as_tuple())
    changed = False
    for i, (lo, hi) in enumerate(GENE_BOUNDS):
        if rng.random() < params.mutation_prob:
            genes[i] = next_uniform(rng, lo, hi)
            changed = True
    return Genome.from_values(genes) if changed else g


def predict_ground(ground_pos: np.ndarray, ground_vel: np.ndarray, horizon: int, env: EnvBounds) -> np.ndarray:
    """Linear extrapolation pos + horizon * vel, mirrored back in-bounds."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    if ground_pos.shape[0] == 0:
        return ground_pos.copy()
    return reflect_rows(ground_pos + horizon * ground_vel, env)


def _gene_columns(genes: np.ndarray):
    return (
        genes[:, 0],  # speed
        genes[:, 4],  # w_cohere_uav
        genes[:, 3],  # w_align_uav
        genes[:, 5],  # w_separate_uav
        genes[:, 2],  # w_cohere_ground
        genes[:, 1],  # w_align_ground
    )


def step_shadow_batch(
    genes: np.ndarray,
    pos: np.ndarray,
    vel: np.ndarray,
    obs: UavObservation,
    comm_range: float,
    uav_safe_distance: float,
    env: EnvBounds,
) -> tuple[np.ndarray, np.ndarray]:
    """Advance B virtual UAVs one step against a recorded world."""
    speed, wcu, wau, wsu, wcg, wag = _gene_columns(genes)
    return five_force_step(
        pos, vel, speed, wcu, wau, wsu, wcg, wag,
        obs.nbr_pos, obs.nbr_vel, obs.ground_pos, obs.ground_vel,
        comm_range, uav_safe_distance, env,
    )


def shadow_step(
    genome: Genome,
    shadow_pos: np.ndarray,
    shadow_vel: np.ndarray,
    obs: UavObservation,
    comm_range: float,
    uav_safe_distance: float,
    env: EnvBounds,
) -> tuple[np.ndarray, np.ndarray]:
    """Single shadow update; never touches real simulation state."""
    p, v = step_shadow_batch(
        genome.as_array()[None, :],
        np.asarray(shadow_pos, dtype=float)[None, :],
        np.asarray(shadow_vel, dtype=float)[None, :],
        obs, comm_range, uav_safe_distance, env,
    )
    return p[0], v[0]


def shadow_coverage(shadow_pos: np.ndarray, obs: UavObservation, comm_range: float) -> np.ndarray:
    """Coverage signal each virtual position would report: recorded ground
    agents within range plus counts broadcast by recorded neighbors still
    within range of the virtual position."""
    B = shadow_pos.shape[0]
    own = np.zeros(B, dtype=float)
    if obs.ground_pos.shape[0]:
        dg = np.hypot(
            obs.ground_pos[None, :, 0] - shadow_pos[:, None, 0],
            obs.ground_pos[None, :, 1] - shadow_pos[:, None, 1],
        )
        own = (dg < comm_range).sum(axis=1).astype(float)
    nbr = np.zeros(B, dtype=float)
    if obs.nbr_pos.shape[0]:
        du = np.hypot(
            obs.nbr_pos[None, :, 0] - shadow_pos[:, None, 0],
            obs.nbr_pos[None, :, 1] - shadow_pos[:, None, 1],
        )
        nbr = ((du < comm_range) * obs.nbr_covered[None, :]).sum(axis=1).astype(float)
    return own + nbr


class GaInstance:
    """GA state owned by one UAV: population, active genome, shadow rollouts,
    and the window's local observation record."""

    def __init__(self, params: GaParams, rng: RngStream, start_pos, start_vel):
        self.params = params
        self.rng = rng
        self.population = init_population(params, rng)
        self.active_index = rng.integers(0, params.population_size)
        self._genes = np.array([g.as_tuple() for g in self.population])
        n = params.population_size
        self.shadow_pos = np.tile(np.asarray(start_pos, dtype=float), (n, 1))
        self.shadow_vel = np.tile(np.asarray(start_vel, dtype=float), (n, 1))
        self.cov_sum = np.zeros(n, dtype=float)
        self.window_obs: list[UavObservation] = []
        self.generation = 0
        self.last_fitness: np.ndarray | None = None

    @property
    def active_genome(self) -> Genome:
        return self.population[self.active_index]

    def step_shadows(self, comm_range: float, uav_safe_distance: float, env: EnvBounds) -> None:
        """Advance every shadow against the most recent recorded world."""
        obs = self.window_obs[-1]
        self.shadow_pos, self.shadow_vel = step_shadow_batch(
            self._genes, self.shadow_pos, self.shadow_vel,
            obs, comm_range, uav_safe_distance, env,
        )

    def record(self, obs: UavObservation, comm_range: float, track_shadows: bool = True) -> None:
        """Append this step's local record and credit each shadow's coverage."""
        if not track_shadows:
            self.window_obs = [obs]
            return
        self.window_obs.append(obs)
        self.cov_sum += shadow_coverage(self.shadow_pos, obs, comm_range)

    def predicted_coverage(self, comm_range: float, uav_safe_distance: float, env: EnvBounds) -> np.ndarray:
        """One-window-ahead coverage: ground extrapolated linearly, each
        shadow rolled forward under its genome against the frozen last
        record, neighbor counts held at their last broadcast values."""
        obs = self.window_obs[-1]
        horizon = self.params.window_steps
        future_ground = predict_ground(obs.ground_pos, obs.ground_vel, horizon, env)
        pos, vel = self.shadow_pos, self.shadow_vel
        for _ in range(horizon):
            pos, vel = step_shadow_batch(
                self._genes, pos, vel, obs, comm_range, uav_safe_distance, env
            )
        future_obs = UavObservation(
            step=obs.step + horizon,
            own_pos=obs.own_pos,
            own_vel=obs.own_vel,
            own_covered=obs.own_covered,
            ground_pos=future_ground,
            ground_vel=obs.ground_vel.copy(),
            nbr_pos=obs.nbr_pos.copy(),
            nbr_vel=obs.nbr_vel.copy(),
            nbr_covered=obs.nbr_covered.copy(),
        )
        return shadow_coverage(pos, future_obs, comm_range)

    def evolve(self, comm_range: float, uav_safe_distance: float, env: EnvBounds) -> np.ndarray:
        """One generation at a window boundary; returns the fitness vector.

        Elites survive unchanged; the rest come from tournament parents with
        one-point crossover (else copied) and per-gene mutation. Shadows then
        restart from the UAV's actual state and the best genome goes active.
        """
        params = self.params
        predicted = self.predicted_coverage(comm_range, uav_safe_distance, env)
        fitness = self.cov_sum + predicted
        order = sorted(range(len(self.population)), key=lambda i: (-fitness[i], i))
        elites = [self.population[i] for i in order[: params.elite_count]]

        new_pop = list(elites)
        while len(new_pop) < params.population_size:
            p1 = tournament_select(self.population, fitness, params, self.rng)
            p2 = tournament_select(self.population, fitness, params, self.rng)
            if self.rng.random() < params.crossover_prob:
                c1, c2 = one_point_crossover(p1, p2, self.rng)
            else:
                c1, c2 = p1, p2
            new_pop.append(mutate(c1, params, self.rng))
            if len(new_pop) < params.population_size:
                new_pop.append(mutate(c2, params, self.rng))

        obs = self.window_obs[-1]
        self.population = new_pop
        self._genes = np.array([g.as_tuple() for g in new_pop])
        self.active_index = 0
        n = params.population_size
        self.shadow_pos = np.tile(obs.own_pos, (n, 1))
        self.shadow_vel = np.tile(obs.own_vel, (n, 1))
        self.window_obs = [obs]
        self.cov_sum = np.full(
            n, float(local_coverage_signal(obs.own_covered, obs.nbr_covered))
        )
        self.generation += 1
        self.last_fitness = fitness
        return fitness
