"""Baseline optimizers: red-fox search, hummingbird search, and PSO.

All three return the same result shape as the hybrid optimizer so the
harness can put them in one comparison table. The fox baseline reuses the
hybrid's stay-and-disguise, territorial-foraging, and reproduction
operators; the hummingbird baseline reuses its flight masks and migration.
"""

from __future__ import annotations

import math

import numpy as np

from .core import Individual, Population, SearchSpace, clamp, evaluate, init_population, make_rng
from .hraha import (
    AXIAL,
    DIAGONAL,
    OMNIDIRECTIONAL,
    HrahaConfig,
    OptimizationResult,
    _CountingObjective,
    flight_mask,
    migrate_worst,
    move_closer_reproduce,
    stay_and_disguise,
    territorial_foraging,
)

__all__ = ["BASELINE_KINDS", "run_baseline", "run_rfo", "run_aha", "run_pso"]

BASELINE_KINDS = ("rfo", "aha", "pso")

# canonical constriction-style PSO constants
PSO_INERTIA = 0.729
PSO_COGNITIVE = 1.49445
PSO_SOCIAL = 1.49445


def _result(best: Individual, history, evals) -> OptimizationResult:
    return OptimizationResult(
        best_position=best.position.copy(),
        best_fitness=float(best.fitness),
        history=list(history),
        evaluations=evals,
        strategy_counts={},
    )


def run_rfo(obj, space: SearchSpace, pop_size: int, max_iters: int, rng,
            scaling_a: float = 0.2, worst_fraction: float = 0.05,
            nomad_probability: float = 0.5) -> OptimizationResult:
    """Red-fox search: greedy global move toward the best, a chance of a
    local circling move, then reproduction replacing the worst share."""
    rng = make_rng(rng)
    counted = _CountingObjective(obj)
    cfg = HrahaConfig(scaling_a=scaling_a, worst_fraction=worst_fraction,
                      nomad_probability=nomad_probability,
                      max_iters=max(1, max_iters))
    pop = init_population(space, pop_size, rng)
    evaluate(pop, counted)
    incumbent = pop.best.copy()
    history = []
    for _ in range(max_iters):
        best_pos = pop.best.position.copy()
        for m in pop.members:
            kappa = rng.random()
            cand = clamp(m.position + kappa * (best_pos - m.position), space)
            f = counted(cand)
            if f <= m.fitness:
                m.position = cand
                m.fitness = f
        for m in pop.members:
            mu = rng.random()
            if mu > 0.75:
                theta = rng.random()
                nr = scaling_a * theta
                phis = rng.uniform(0.0, 2 * math.pi, space.dims)
                cand = stay_and_disguise(m.position, nr, phis, space)
                f = counted(cand)
                if f <= m.fitness:
                    m.position = cand
                    m.fitness = f
        move_closer_reproduce(pop, cfg, rng, space, counted)
        if pop.best.fitness < incumbent.fitness:
            incumbent = pop.best.copy()
        history.append(incumbent.fitness)
    return _result(incumbent, history, counted.count)


def run_aha(obj, space: SearchSpace, pop_size: int, max_iters: int, rng,
            migration_coefficient: int | None = None) -> OptimizationResult:
    """Hummingbird search: flight-masked guided or territorial foraging with
    greedy acceptance, plus gated migration of the worst member."""
    rng = make_rng(rng)
    counted = _CountingObjective(obj)
    M = migration_coefficient if migration_coefficient is not None else 2 * pop_size
    pop = init_population(space, pop_size, rng)
    evaluate(pop, counted)
    incumbent = pop.best.copy()
    history = []
    last_migration = 0
    for t in range(max_iters):
        best_pos = pop.best.position.copy()
        for m in pop.members:
            u = rng.random()
            if u < 1 / 3:
                kind = OMNIDIRECTIONAL
            elif u < 2 / 3:
                kind = AXIAL
            else:
                kind = DIAGONAL
            mask = flight_mask(kind, space.dims, rng)
            b = rng.standard_normal()
            if rng.random() < 0.5:
                # guided foraging toward the best food source
                cand = clamp(best_pos + b * mask * (m.position - best_pos), space)
            else:
                # territorial foraging around the current source; the step is
                # relative to the guiding source, not the origin, to avoid
                # center-of-domain bias on symmetric benchmarks
                cand = clamp(m.position + b * mask * (m.position - best_pos), space)
            f = counted(cand)
            if f <= m.fitness:
                m.position = cand
                m.fitness = f
        migrated, _ = migrate_worst(pop, space, rng, last_migration, t, M, counted)
        if migrated:
            last_migration = t
        if pop.best.fitness < incumbent.fitness:
            incumbent = pop.best.copy()
        history.append(incumbent.fitness)
    return _result(incumbent, history, counted.count)


def run_pso(obj, space: SearchSpace, pop_size: int, max_iters: int, rng,
            inertia: float = PSO_INERTIA, c1: float = PSO_COGNITIVE,
            c2: float = PSO_SOCIAL) -> OptimizationResult:
    """Global-best PSO with the canonical constriction constants; the
    constriction factors make a separate velocity clamp unnecessary."""
    rng = make_rng(rng)
    counted = _CountingObjective(obj)
    pop = init_population(space, pop_size, rng)
    evaluate(pop, counted)
    X = pop.positions()
    F = pop.fitnesses()
    V = np.zeros_like(X)
    pbest_X = X.copy()
    pbest_F = F.copy()
    g = int(np.argmin(F))
    gbest_x = X[g].copy()
    gbest_f = float(F[g])
    history = []
    for _ in range(max_iters):
        r1 = rng.random(X.shape)
        r2 = rng.random(X.shape)
        V = inertia * V + c1 * r1 * (pbest_X - X) + c2 * r2 * (gbest_x - X)
        X = np.clip(X + V, space.lower, space.upper)
        for i in range(pop_size):
            f = counted(X[i])
            if f < pbest_F[i]:
                pbest_F[i] = f
                pbest_X[i] = X[i].copy()
                if f < gbest_f:
                    gbest_f = f
                    gbest_x = X[i].copy()
        history.append(gbest_f)
    return _result(Individual(gbest_x, gbest_f), history, counted.count)


def run_baseline(kind: str, obj, space: SearchSpace, pop_size: int,
                 max_iters: int, rng) -> OptimizationResult:
    kind = kind.lower()
    if kind == "rfo":
        return run_rfo(obj, space, pop_size, max_iters, rng)
    if kind == "aha":
        return run_aha(obj, space, pop_size, max_iters, rng)
    if kind == "pso":
        return run_pso(obj, space, pop_size, max_iters, rng)
    raise ValueError(f"unknown baseline {kind!r}; choose from {BASELINE_KINDS}")
