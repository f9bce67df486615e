"""Hybrid red-fox / hummingbird optimizer.

Each iteration runs a global flight phase (movement toward the incumbent
best, with omnidirectional / axial / diagonal direction masks selected by a
scaling factor alpha) followed by per-member local strategies gated by a
uniform draw delta:

    delta <= 0.5          no local move
    0.5  < delta <= 0.75  stay-and-disguise (circling perturbation)
    0.75 < delta <= 0.85  territorial foraging (paired circular step)
    0.85 < delta <= 0.95  migration of the worst member (iteration-gated)
    0.95 < delta <= 1     reproduction replacing a share of the worst

Candidate moves in the global, stay and territorial phases are accepted
greedily (only if they do not worsen fitness); migration replaces the worst
member unconditionally. Elitism (on by default) reinjects the best-so-far
individual if an iteration loses it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Individual,
    Population,
    SearchSpace,
    clamp,
    evaluate,
    init_population,
    make_rng,
)

__all__ = [
    "HrahaConfig",
    "FlightKind",
    "LocalStrategy",
    "OptimizationResult",
    "compute_alpha",
    "select_flight",
    "flight_mask",
    "global_search_step",
    "draw_delta",
    "strategy_for_delta",
    "stay_and_disguise",
    "territorial_foraging",
    "migrate_worst",
    "habitat_center",
    "habitat_size",
    "crossover",
    "mutate",
    "move_closer_reproduce",
    "run",
]

OMNIDIRECTIONAL = "omnidirectional"
AXIAL = "axial"
DIAGONAL = "diagonal"
FLIGHT_KINDS = (OMNIDIRECTIONAL, AXIAL, DIAGONAL)

STRAT_NONE = "none"
STRAT_STAY = "stay_and_disguise"
STRAT_TERRITORIAL = "territorial_foraging"
STRAT_MIGRATION = "migration"
STRAT_MOVE_CLOSER = "move_closer"
LOCAL_STRATEGIES = (
    STRAT_NONE,
    STRAT_STAY,
    STRAT_TERRITORIAL,
    STRAT_MIGRATION,
    STRAT_MOVE_CLOSER,
)

FlightKind = str
LocalStrategy = str


@dataclass(frozen=True)
class HrahaConfig:
    omega: float = 0.5
    alpha_thresholds: tuple[float, float, float] = (1 / 3, 2 / 3, 1.0)
    scaling_a: float = 0.2
    worst_fraction: float = 0.05
    migration_coefficient: int | None = None  # default 2 * pop_size, set at run()
    nomad_probability: float = 0.5
    max_iters: int = 500
    target_fitness: float | None = None
    elitism: bool = True

    def __post_init__(self):
        a1, a2, a3 = self.alpha_thresholds
        if not (0 < a1 < a2 < a3 <= 1):
            raise ValueError(f"alpha thresholds must satisfy 0 < a1 < a2 < a3 <= 1, got {self.alpha_thresholds}")
        if not 0 <= self.omega <= 1:
            raise ValueError(f"omega must be in [0, 1], got {self.omega}")
        if not 0 <= self.scaling_a <= 0.2:
            raise ValueError(f"scaling_a must be in [0, 0.2], got {self.scaling_a}")
        if not 0 < self.worst_fraction <= 0.5:
            raise ValueError(f"worst_fraction must be in (0, 0.5], got {self.worst_fraction}")
        if not 0 <= self.nomad_probability <= 1:
            raise ValueError(f"nomad_probability must be in [0, 1], got {self.nomad_probability}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.migration_coefficient is not None and self.migration_coefficient < 1:
            raise ValueError("migration_coefficient must be a positive integer")


@dataclass
class OptimizationResult:
    best_position: np.ndarray
    best_fitness: float
    history: list[float]
    evaluations: int
    strategy_counts: dict[str, int] = field(default_factory=dict)


class _CountingObjective:
    """Wraps an objective to count evaluations."""

    def __init__(self, obj):
        self.obj = obj
        self.count = 0

    def __call__(self, x) -> float:
        self.count += 1
        return float(self.obj(x))


# ---------------------------------------------------------------------------
# Global flight phase
# ---------------------------------------------------------------------------

def compute_alpha(pop: Population, omega: float, t: int, T: int) -> float:
    """Scaling factor blending normalized fitness spread with an iteration
    schedule; clamped to [0, 1]."""
    fits = pop.fitnesses()
    f_best = fits.min()
    f_worst = fits.max()
    f_mean = fits.mean()
    spread = (f_mean - f_best) / (f_worst - f_best + 1e-12)
    alpha = omega * spread + (1 - omega) * (1 - t / T)
    return float(min(1.0, max(0.0, alpha)))


def select_flight(alpha: float, thresholds) -> FlightKind:
    a1, a2, a3 = thresholds
    if alpha <= a1:
        return OMNIDIRECTIONAL
    if alpha <= a2:
        return AXIAL
    return DIAGONAL  # a2 < alpha <= a3, and overflow clamps to last regime


def flight_mask(kind: FlightKind, dims: int, rng) -> np.ndarray:
    """0/1 direction mask: all axes, one axis, or a strict subset of axes."""
    if kind == OMNIDIRECTIONAL:
        return np.ones(dims)
    if kind == AXIAL:
        mask = np.zeros(dims)
        mask[rng.integers(0, dims)] = 1.0
        return mask
    if kind == DIAGONAL:
        if dims <= 2:
            return np.ones(dims)
        k = int(rng.integers(2, dims))  # subset size in 2..dims-1
        mask = np.zeros(dims)
        mask[rng.permutation(dims)[:k]] = 1.0
        return mask
    raise ValueError(f"unknown flight kind {kind!r}")


def global_search_step(pop: Population, best: Individual, alpha: float,
                       flight: FlightKind, rng, space: SearchSpace, obj) -> Population:
    """Move every member toward the best along the flight mask; greedy accept."""
    rng = make_rng(rng)
    n = len(pop)
    g = rng.standard_normal(n)
    best_pos = best.position.copy()
    for i, m in enumerate(pop.members):
        mask = flight_mask(flight, space.dims, rng)
        cand = clamp(m.position + alpha * g[i] * mask * (best_pos - m.position), space)
        f = float(obj(cand))
        if f <= m.fitness:
            m.position = cand
            m.fitness = f
    return pop


# ---------------------------------------------------------------------------
# Local strategies
# ---------------------------------------------------------------------------

def draw_delta(rng) -> float:
    return float(make_rng(rng).random())


def strategy_for_delta(delta: float) -> LocalStrategy:
    if delta <= 0.5:
        return STRAT_NONE
    if delta <= 0.75:
        return STRAT_STAY
    if delta <= 0.85:
        return STRAT_TERRITORIAL
    if delta <= 0.95:
        return STRAT_MIGRATION
    return STRAT_MOVE_CLOSER


def stay_and_disguise(position: np.ndarray, nr: float, phis: np.ndarray,
                      space: SearchSpace) -> np.ndarray:
    """Circling perturbation: chained sine offsets with one cosine cross-term
    per middle coordinate; clamped to the box."""
    d = space.dims
    if d < 1:
        raise ValueError("dims must be >= 1")
    position = np.asarray(position, dtype=float)
    phis = np.asarray(phis, dtype=float)
    out = position.copy()
    sines = np.sin(phis)
    out[0] = position[0] + nr * sines[0]
    if d >= 2:
        cum = np.cumsum(sines)
        for k in range(1, d - 1):
            out[k] = position[k] + nr * cum[k - 1] + nr * math.cos(phis[k])
        out[d - 1] = position[d - 1] + nr * cum[d - 2]
    return clamp(out, space)


def territorial_foraging(position: np.ndarray, lam: float, r, phi, phi0, theta,
                         space: SearchSpace) -> np.ndarray:
    """Paired circular step: coordinates are processed in consecutive (x, y)
    pairs; a trailing unpaired coordinate takes the x-update alone. The angle
    and radius parameters may be scalars or per-pair vectors."""
    position = np.asarray(position, dtype=float)
    d = position.shape[0]
    n_pairs = (d + 1) // 2
    r = np.broadcast_to(np.asarray(r, dtype=float), (n_pairs,))
    phi = np.broadcast_to(np.asarray(phi, dtype=float), (n_pairs,))
    phi0 = np.broadcast_to(np.asarray(phi0, dtype=float), (n_pairs,))
    theta = np.broadcast_to(np.asarray(theta, dtype=float), (n_pairs,))
    out = position.copy()
    radial = r * np.cos(phi) + theta * np.cos(phi0)
    for p in range(n_pairs):
        i = 2 * p
        out[i] = position[i] + lam * math.cos(phi[p]) * radial[p]
        if i + 1 < d:
            out[i + 1] = position[i + 1] + lam * math.sin(phi[p]) * radial[p]
    return clamp(out, space)


def migrate_worst(pop: Population, space: SearchSpace, rng, last_migration: int,
                  current_iter: int, M: int, obj):
    """Re-seed the worst member uniformly in the box if at least M iterations
    passed since the last migration. The new member is evaluated
    unconditionally (the old source is abandoned, no greedy test).

    Returns (migrated, r_draws); r_draws is the per-dimension uniform vector
    used by the re-seeding, or None when the gate was closed.
    """
    if current_iter - last_migration < M:
        return False, None
    rng = make_rng(rng)
    w = pop.worst_index
    r = rng.random(space.dims)
    pos = space.lower + r * (space.upper - space.lower)
    pop.members[w] = Individual(pos, float(obj(pos)))
    return True, r


def habitat_center(p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if p1.shape != p2.shape:
        raise ValueError("length mismatch")
    return 0.5 * (p1 + p2)


def habitat_size(p1: np.ndarray, p2: np.ndarray, C: np.ndarray) -> float:
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    C = np.asarray(C, dtype=float)
    if not (p1.shape == p2.shape == C.shape):
        raise ValueError("length mismatch")
    return float(np.sum((p1 - C) ** 2 + (p2 - C) ** 2))


def crossover(parent1: np.ndarray, parent2: np.ndarray, r1: float) -> np.ndarray:
    parent1 = np.asarray(parent1, dtype=float)
    parent2 = np.asarray(parent2, dtype=float)
    if parent1.shape != parent2.shape:
        raise ValueError("length mismatch")
    return r1 * (parent1 - parent2) + parent2


def mutate(child: np.ndarray, C: np.ndarray, r2: float) -> np.ndarray:
    child = np.asarray(child, dtype=float)
    C = np.asarray(C, dtype=float)
    if child.shape != C.shape:
        raise ValueError("length mismatch")
    return child + r2 * (C - child)


def move_closer_reproduce(pop: Population, cfg: HrahaConfig, rng,
                          space: SearchSpace, obj) -> Population:
    """Replace the worst share of the population with nomads spawned around
    the alpha couple's habitat or crossover/mutation offspring."""
    if len(pop) < 4:
        raise ValueError("population size must be >= 4")
    rng = make_rng(rng)
    fits = pop.fitnesses()
    order = np.argsort(fits, kind="stable")
    a1, a2 = int(order[0]), int(order[1])
    C = habitat_center(pop.members[a1].position, pop.members[a2].position)
    D = habitat_size(pop.members[a1].position, pop.members[a2].position, C)
    s = math.sqrt(D)
    lo = np.maximum(space.lower, C - s / 2)
    hi = np.minimum(space.upper, C + s / 2)
    k = max(1, int(math.floor(cfg.worst_fraction * len(pop))))
    worst = [int(i) for i in order[len(pop) - k:]]
    non_alpha = [i for i in range(len(pop)) if i not in (a1, a2)]
    for w in worst:
        if rng.random() < cfg.nomad_probability:
            pos = np.where(hi > lo, rng.uniform(lo, np.maximum(hi, lo + 1e-300)), lo)
        else:
            p, q = rng.choice(len(non_alpha), size=2, replace=False)
            r1 = float(rng.random())
            r2 = float(rng.random())
            child = crossover(pop.members[non_alpha[p]].position,
                              pop.members[non_alpha[q]].position, r1)
            pos = mutate(child, C, r2)
        pos = clamp(pos, space)
        pop.members[w] = Individual(pos, float(obj(pos)))
    return pop


# ---------------------------------------------------------------------------
# Main loop
# ---------------------------------------------------------------------------

def run(obj, space: SearchSpace, cfg: HrahaConfig, pop_size: int, rng) -> OptimizationResult:
    """Full optimization loop; deterministic for a fixed seed."""
    rng = make_rng(rng)
    counted = _CountingObjective(obj)
    M = cfg.migration_coefficient if cfg.migration_coefficient is not None else 2 * pop_size

    pop = init_population(space, pop_size, rng)
    evaluate(pop, counted)

    counts = {k: 0 for k in FLIGHT_KINDS + LOCAL_STRATEGIES}
    history: list[float] = []
    last_migration = 0
    incumbent = pop.best.copy()

    for t in range(cfg.max_iters):
        alpha = compute_alpha(pop, cfg.omega, t, cfg.max_iters)
        flight = select_flight(alpha, cfg.alpha_thresholds)
        counts[flight] += 1
        global_search_step(pop, pop.best.copy(), alpha, flight, rng, space, counted)

        deltas = rng.random(len(pop))
        for i, delta in enumerate(deltas):
            strat = strategy_for_delta(float(delta))
            counts[strat] += 1
            m = pop.members[i]
            if strat == STRAT_STAY:
                theta = rng.random()
                nr = cfg.scaling_a * theta
                phis = rng.uniform(0.0, 2 * math.pi, space.dims)
                cand = stay_and_disguise(m.position, nr, phis, space)
                f = counted(cand)
                if f <= m.fitness:
                    m.position = cand
                    m.fitness = f
            elif strat == STRAT_TERRITORIAL:
                n_pairs = (space.dims + 1) // 2
                # step scale tied to the box width so hops can cross basins
                lam = 0.3 * float(np.mean(space.upper - space.lower)) * rng.random()
                r = rng.random(n_pairs)
                phi = rng.uniform(0.0, 2 * math.pi, n_pairs)
                phi0 = rng.uniform(0.0, 2 * math.pi, n_pairs)
                theta = rng.random(n_pairs)
                cand = territorial_foraging(m.position, lam, r, phi, phi0, theta, space)
                f = counted(cand)
                if f <= m.fitness:
                    m.position = cand
                    m.fitness = f
            elif strat == STRAT_MIGRATION:
                migrated, _ = migrate_worst(pop, space, rng, last_migration, t, M, counted)
                if migrated:
                    last_migration = t
            elif strat == STRAT_MOVE_CLOSER:
                move_closer_reproduce(pop, cfg, rng, space, counted)

        if cfg.elitism:
            cur_best = pop.best
            if cur_best.fitness > incumbent.fitness:
                pop.members[pop.worst_index] = incumbent.copy()
            else:
                incumbent = cur_best.copy()
        else:
            if pop.best.fitness < incumbent.fitness:
                incumbent = pop.best.copy()

        history.append(incumbent.fitness)
        if cfg.target_fitness is not None and incumbent.fitness <= cfg.target_fitness:
            break

    return OptimizationResult(
        best_position=incumbent.position.copy(),
        best_fitness=float(incumbent.fitness),
        history=history,
        evaluations=counted.count,
        strategy_counts=counts,
    )
