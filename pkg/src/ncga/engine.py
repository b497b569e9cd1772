"""Generational GA over link-state genotypes, plus the greedy sweep."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .feasibility import INFEASIBLE, Evaluator, Fitness
from .layout import BlockLayout, build_layout
from .netgraph import Network
from .operators import ENCODING_MODES, OperatorConfig, crossover_rows, init_population, mutate_rows

# Default settings that differ per encoding: (tournament size, mutation rate).
# MHD mutation is matched to block-wise mutation, so it shares the BTS values.
ENCODING_DEFAULTS = {"bls": (10, 0.006), "bts": (100, 0.012), "mhd": (100, 0.012)}


@dataclass(frozen=True)
class GaConfig:
    encoding: str = "bts"
    population_size: int = 150
    max_generations: int = 1000
    tournament_size: int = 100
    operators: OperatorConfig = field(default_factory=lambda: OperatorConfig("block_wise", 0.8, 0.8, 0.012))
    budget: int = 150_000
    seed: int = 0
    # Stop once best-so-far reaches this value (None: never stop early).
    stop_fitness: int | None = None

    def __post_init__(self):
        if self.encoding not in ENCODING_MODES:
            raise ValueError(f"unknown encoding {self.encoding!r}")
        if self.operators.mode != ENCODING_MODES[self.encoding]:
            raise ValueError(f"encoding {self.encoding} needs {ENCODING_MODES[self.encoding]} operators")
        if not 1 <= self.tournament_size <= self.population_size:
            raise ValueError("need 1 <= tournament_size <= population_size")
        if self.budget < self.population_size:
            raise ValueError("budget must cover at least one generation")
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")

    @classmethod
    def defaults(cls, encoding: str, seed: int = 0, **overrides) -> "GaConfig":
        """Published default parameters for ``encoding``; keyword overrides win.

        Operator fields may be overridden directly: ``mixing_ratio``,
        ``swap_prob``, ``mutation_rate``, ``mhd_scope``.
        """
        if encoding not in ENCODING_DEFAULTS:
            raise ValueError(f"unknown encoding {encoding!r}")
        tournament, alpha = ENCODING_DEFAULTS[encoding]
        op_fields = {k: overrides.pop(k) for k in ("mixing_ratio", "swap_prob", "mutation_rate", "mhd_scope")
                     if k in overrides}
        ops = OperatorConfig(ENCODING_MODES[encoding], 0.8, 0.8, alpha)
        ops = replace(ops, **op_fields)
        overrides.setdefault("tournament_size", tournament)
        return cls(encoding=encoding, operators=ops, seed=seed, **overrides)


@dataclass(eq=False)
class RunResult:
    best_genotype: np.ndarray
    best_fitness: Fitness
    swept_genotype: np.ndarray
    best_fitness_after_sweep: Fitness
    evaluations_used: int
    sweep_evaluations: int
    generations_completed: int
    seed: int
    wallclock: float
    degenerate: bool = False


def tournament_indices(fitness: np.ndarray, count: int, tournament_size: int, rng) -> np.ndarray:
    """``count`` winners of with-replacement tournaments over integer fitness values.

    Ties go to a uniformly random tied entrant.
    """
    n = fitness.shape[0]
    draws = rng.integers(0, n, size=(count, tournament_size))
    keys = fitness[draws] + rng.random(draws.shape)
    return draws[np.arange(count), np.argmin(keys, axis=1)]


def tournament_select(population, fitnesses, tournament_size: int, rng) -> int:
    """Index of one tournament winner (lowest fitness)."""
    if len(population) == 0:
        raise ValueError("empty population")
    ranked = sorted(set(fitnesses))
    rank = np.array([ranked.index(f) for f in fitnesses], dtype=np.float64)
    return int(tournament_indices(rank, 1, tournament_size, rng)[0])


def _sweep(evaluator: Evaluator, genotype, order=None) -> tuple[np.ndarray, int]:
    bits = np.array(genotype, dtype=np.uint8)
    evaluations = 0
    changed = True
    while changed:
        changed = False
        positions = np.arange(bits.size) if order is None else np.asarray(order)
        for i in positions:
            if not bits[i]:
                continue
            bits[i] = 0
            evaluations += 1
            if evaluator.is_feasible(bits):
                changed = True
            else:
                bits[i] = 1
    return bits, evaluations


def greedy_sweep(network: Network, layout: BlockLayout, genotype, order=None,
                 evaluator: Evaluator | None = None) -> np.ndarray:
    """Turn 1-bits off one at a time (in ``order``, default ascending) while feasibility holds.

    Passes repeat until one changes nothing, so the result is locally minimal.
    """
    evaluator = evaluator or Evaluator(network, layout)
    if not evaluator.is_feasible(genotype):
        raise ValueError("greedy sweep needs a feasible genotype")
    return _sweep(evaluator, genotype, order)[0]


def _as_fitness(value: int, evaluator: Evaluator) -> Fitness:
    return INFEASIBLE if value >= evaluator.infeasible_value else Fitness(int(value))


def run_ga(network: Network, config: GaConfig, evaluator: Evaluator | None = None) -> RunResult:
    start = time.perf_counter()
    layout = evaluator.layout if evaluator else build_layout(network)
    evaluator = evaluator or Evaluator(network, layout)
    rng = np.random.default_rng(config.seed)
    ops = config.operators
    P = config.population_size

    all_one = layout.all_ones()
    if not evaluator.is_feasible(all_one):
        return RunResult(all_one, INFEASIBLE, all_one, INFEASIBLE, 0, 0, 0, config.seed,
                         time.perf_counter() - start, degenerate=True)

    pop = init_population(layout, config.encoding, P, rng)
    used = 0
    generations = 0
    best_value = evaluator.infeasible_value
    best = all_one
    for gen in range(config.max_generations):
        n = min(P, config.budget - used)
        if n <= 0:
            break
        fit = evaluator.fitness_array(pop[:n])
        used += n
        i = int(np.argmin(fit))
        if fit[i] < best_value:
            best_value, best = int(fit[i]), pop[i].copy()
        if n < P:
            break
        generations += 1
        if gen == config.max_generations - 1:
            break
        if config.stop_fitness is not None and best_value <= config.stop_fitness:
            break
        parents = pop[tournament_indices(fit, P, config.tournament_size, rng)]
        half = P // 2
        a, b = crossover_rows(parents[0 : 2 * half : 2], parents[1 : 2 * half : 2], layout, ops, rng)
        children = np.empty_like(parents)
        children[0 : 2 * half : 2], children[1 : 2 * half : 2] = a, b
        if P % 2:
            children[-1] = parents[-1]
        pop = mutate_rows(children, layout, ops, rng)

    swept, sweep_evals = _sweep(evaluator, best)
    return RunResult(
        best_genotype=best,
        best_fitness=_as_fitness(best_value, evaluator),
        swept_genotype=swept,
        best_fitness_after_sweep=evaluator.fitness(swept),
        evaluations_used=used,
        sweep_evaluations=sweep_evals,
        generations_completed=generations,
        seed=config.seed,
        wallclock=time.perf_counter() - start,
    )
