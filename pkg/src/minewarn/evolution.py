"""Real-coded genetic search over flattened network parameters.

Selection is roulette-wheel on inverse error, crossover blends one gene
position arithmetically, and mutation anneals toward zero step size as the
generation counter approaches its cap. The best individual of each
generation is copied unchanged into the next one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .data import Sample
from .genome import chromosome_length, decode
from .network import NetworkShape, sse_loss
from .seeding import named_rng

FITNESS_EPS = 1e-12
CODING_SCHEME = "real"
SELECTION_METHOD = "roulette"


@dataclass
class GAConfig:
    """Genetic-search settings; the defaults are the engine's standard profile."""

    population_size: int = 60
    crossover_prob: float = 0.7
    mutation_prob: float = 0.05
    max_generations: int = 50
    gene_low: float = -1.0
    gene_high: float = 1.0
    selection_coeff: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if not (0.0 <= self.crossover_prob <= 1.0):
            raise ValueError("crossover_prob must lie in [0, 1]")
        if not (0.0 <= self.mutation_prob <= 1.0):
            raise ValueError("mutation_prob must lie in [0, 1]")
        if self.max_generations < 1:
            raise ValueError("max_generations must be at least 1")
        if not (self.gene_low < self.gene_high):
            raise ValueError("gene_low must be strictly below gene_high")
        if self.selection_coeff <= 0:
            raise ValueError("selection_coeff must be positive")


@dataclass(frozen=True)
class Individual:
    """A chromosome with its cached objective (summed squared error) and fitness."""

    genes: np.ndarray
    objective: float
    fitness: float

    @classmethod
    def evaluated(cls, genes: np.ndarray, data: Sequence[Sample],
                  shape: NetworkShape) -> "Individual":
        objective, fit = fitness(genes, data, shape)
        return cls(genes, objective, fit)


def fitness(genes: np.ndarray, data: Sequence[Sample],
            shape: NetworkShape) -> tuple[float, float]:
    """Objective (summed squared error) and fitness (its guarded reciprocal)."""
    objective = sse_loss(decode(genes, shape), data)
    return objective, 1.0 / (objective + FITNESS_EPS)


def selection_probabilities(objectives: Sequence[float],
                            selection_coeff: float = 1.0) -> np.ndarray:
    """Normalized selection weights, lower error meaning higher probability.

    Each weight is selection_coeff / (objective + eps); the coefficient
    cancels in the normalization, so it only exists for callers that want to
    inspect the unnormalized weights.
    """
    objectives = np.asarray(objectives, dtype=np.float64)
    if objectives.ndim != 1 or objectives.size == 0:
        raise ValueError("objectives must be a non-empty flat vector")
    if np.any(objectives < 0):
        raise ValueError("objectives must be non-negative")
    weights = selection_coeff / (objectives + FITNESS_EPS)
    return weights / weights.sum()


def roulette_select(probabilities: np.ndarray, rng: np.random.Generator,
                    size: int | None = None) -> int | np.ndarray:
    """Sample an index proportionally to ``probabilities``.

    Implemented as cumulative-sum inversion of a single uniform draw per
    selection. Pass ``size`` to draw a batch; the batch consumes the random
    stream exactly as the same number of single draws would.
    """
    p = np.asarray(probabilities, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("probabilities must be a non-empty flat vector")
    total = p.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities must sum to 1, got {total!r}")
    cumulative = np.cumsum(p)
    cumulative[-1] = 1.0
    if size is None:
        return int(np.searchsorted(cumulative, rng.random(), side="right"))
    draws = rng.random(size)
    return np.searchsorted(cumulative, draws, side="right").astype(int)


def crossover(parent_a: np.ndarray, parent_b: np.ndarray, position: int,
              blend: float) -> tuple[np.ndarray, np.ndarray]:
    """Arithmetic crossover at a single gene position.

    Both children are produced from the original parent genes at once:
    child_a gets a*(1-b) + b*other, child_b the mirror image. Every other
    position is copied verbatim. Rounding is clamped so the blended gene
    cannot leave the closed interval spanned by the two parent genes.
    """
    if parent_a.shape != parent_b.shape:
        raise ValueError("parents must have the same gene count")
    if not (0 <= position < parent_a.size):
        raise ValueError(f"position {position} outside chromosome of {parent_a.size}")
    if not (0.0 <= blend <= 1.0):
        raise ValueError("blend must lie in [0, 1]")
    a, b = float(parent_a[position]), float(parent_b[position])
    lo, hi = min(a, b), max(a, b)
    child_a = parent_a.copy()
    child_b = parent_b.copy()
    child_a[position] = min(max(a * (1.0 - blend) + b * blend, lo), hi)
    child_b[position] = min(max(b * (1.0 - blend) + a * blend, lo), hi)
    return child_a, child_b


def mutate(genes: np.ndarray, generation: int, cfg: GAConfig,
           rng: np.random.Generator) -> np.ndarray:
    """Non-uniform mutation with a step size that anneals over generations.

    Each gene mutates independently with probability ``mutation_prob``. A
    mutating gene draws r and r2 uniform on [0, 1); the step fraction is
    r2 * (1 - generation / max_generations)**2, applied toward the upper
    bound's mirror when r >= 0.5 and toward the lower bound otherwise, then
    clamped back into [gene_low, gene_high]. At generation == max_generations
    the step fraction is zero and the chromosome comes back unchanged.

    The random stream consumes one uniform vector for the per-gene mutation
    mask, then r and r2 for each mutating gene in ascending gene order.
    """
    if generation < 0 or generation > cfg.max_generations:
        raise ValueError(
            f"generation must lie in [0, {cfg.max_generations}], got {generation}"
        )
    out = genes.copy()
    hits = np.flatnonzero(rng.random(out.size) < cfg.mutation_prob)
    anneal = (1.0 - generation / cfg.max_generations) ** 2
    for idx in hits:
        r = rng.random()
        r2 = rng.random()
        step = r2 * anneal
        gene = out[idx]
        if r >= 0.5:
            value = (1.0 + step) * gene - step * cfg.gene_high
        else:
            value = (1.0 - step) * gene + step * cfg.gene_low
        out[idx] = min(max(value, cfg.gene_low), cfg.gene_high)
    return out


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_sse: float
    mean_sse: float
    best_genes: np.ndarray


@dataclass
class EvolutionTrace:
    generations: list[GenerationRecord]

    @property
    def best_sse_series(self) -> list[float]:
        return [rec.best_sse for rec in self.generations]


@dataclass
class EvolveResult:
    best_genes: np.ndarray
    best_sse: float
    trace: EvolutionTrace


def trace_to_csv(trace: EvolutionTrace) -> str:
    lines = ["generation,best_sse,mean_sse"]
    for rec in trace.generations:
        lines.append(f"{rec.generation},{rec.best_sse!r},{rec.mean_sse!r}")
    return "\n".join(lines) + "\n"


Observer = Callable[[int, list[np.ndarray], np.ndarray], None]


def evolve(data: Sequence[Sample], shape: NetworkShape, cfg: GAConfig,
           observer: Observer | None = None) -> EvolveResult:
    """Run the generational loop and return the best chromosome ever seen.

    The initial population is uniform on the gene bounds. Each generation is
    evaluated and recorded in the trace; the single best individual is copied
    unchanged into the next generation, and the remaining slots are filled by
    roulette-selected pairs that undergo crossover (with probability
    ``crossover_prob`` at one uniformly random position) and mutation.

    Population initialization and the operators draw from separate named
    substreams of ``cfg.seed``, so a run is fully reproducible.

    ``observer``, when given, is called once per generation with the
    generation number, the list of chromosomes, and their objectives; it
    exists for tests and instrumentation.
    """
    if not data:
        raise ValueError("cannot evolve against an empty sample list")
    n_genes = chromosome_length(shape)
    rng_init = named_rng(cfg.seed, "population-init")
    rng_ops = named_rng(cfg.seed, "operators")

    population = [rng_init.uniform(cfg.gene_low, cfg.gene_high, size=n_genes)
                  for _ in range(cfg.population_size)]

    records: list[GenerationRecord] = []
    best_genes: np.ndarray | None = None
    best_sse = np.inf
    for generation in range(cfg.max_generations):
        objectives = np.array([fitness(genes, data, shape)[0] for genes in population])
        best_idx = int(np.argmin(objectives))
        gen_best = float(objectives[best_idx])
        records.append(GenerationRecord(generation, gen_best,
                                        float(objectives.mean()),
                                        population[best_idx].copy()))
        if gen_best < best_sse:
            best_sse = gen_best
            best_genes = population[best_idx].copy()
        if observer is not None:
            observer(generation, population, objectives)
        if generation == cfg.max_generations - 1:
            break

        probabilities = selection_probabilities(objectives, cfg.selection_coeff)
        next_population = [population[best_idx].copy()]
        while len(next_population) < cfg.population_size:
            idx_a = roulette_select(probabilities, rng_ops)
            idx_b = roulette_select(probabilities, rng_ops)
            child_a = population[idx_a].copy()
            child_b = population[idx_b].copy()
            if rng_ops.random() < cfg.crossover_prob:
                position = int(rng_ops.integers(n_genes))
                blend = rng_ops.random()
                child_a, child_b = crossover(child_a, child_b, position, blend)
            child_a = mutate(child_a, generation + 1, cfg, rng_ops)
            child_b = mutate(child_b, generation + 1, cfg, rng_ops)
            next_population.append(child_a)
            if len(next_population) < cfg.population_size:
                next_population.append(child_b)
        population = next_population

    assert best_genes is not None
    return EvolveResult(best_genes, best_sse, EvolutionTrace(records))
