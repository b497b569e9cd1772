"""Genotype initialization and the three operator families.

* ``bit_wise``   - uniform crossover per bit, independent bit-flip mutation (BLS).
* ``block_wise`` - uniform crossover per block, mutation that moves a block to
  another of its ``k + 2`` transmission states (BTS).
* ``mhd``        - bit-wise crossover plus a mutation whose Hamming distances
  match block-wise mutation (one draw per mutated block) but whose flipped
  positions are spread uniformly over the genotype.

Populations are ``(rows, genotype_length)`` uint8 arrays; the single-genotype
functions below are thin wrappers over the row-wise ones used by the engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .layout import BlockLayout

MODES = ("bit_wise", "block_wise", "mhd")
ENCODING_MODES = {"bls": "bit_wise", "bts": "block_wise", "mhd": "mhd"}


@dataclass(frozen=True)
class OperatorConfig:
    mode: str = "bit_wise"
    mixing_ratio: float = 0.8
    swap_prob: float = 0.8
    mutation_rate: float = 0.006
    # Where MHD mutation places its flips: anywhere in the genotype, or
    # inside the mutated block only.
    mhd_scope: str = "genotype"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown operator mode {self.mode!r}; choose from {MODES}")
        if self.mhd_scope not in ("genotype", "block"):
            raise ValueError(f"unknown mhd_scope {self.mhd_scope!r}")
        for name in ("mixing_ratio", "swap_prob", "mutation_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


def bts_states(k: int) -> list[str]:
    """All-one, the k one-hot strings, then all-zero."""
    if k < 2:
        raise ValueError("blocks have length >= 2")
    return ["1" * k] + ["0" * i + "1" + "0" * (k - i - 1) for i in range(k)] + ["0" * k]


@lru_cache(maxsize=None)
def block_change_distribution(k: int) -> np.ndarray:
    """P(d bits change | a block-wise mutation event), d = 0..k.

    Assumes the current state is uniform over the k + 2 transmission states
    and the new state uniform over the other k + 1.
    """
    states = [np.array([int(c) for c in s]) for s in bts_states(k)]
    counts = np.zeros(k + 1)
    for i, a in enumerate(states):
        for j, b in enumerate(states):
            if i != j:
                counts[int(np.sum(a != b))] += 1
    return counts / counts.sum()


def _block_states(layout: BlockLayout, pop: np.ndarray):
    """Transmission-state index per block (0 all-one, 1..k one-hot, k+1 all-zero) and validity."""
    offsets, k = layout.block_offsets, layout.block_lengths
    ones = np.add.reduceat(pop, offsets, axis=1, dtype=np.int64)
    where = np.add.reduceat(pop * layout.position_of_bit, offsets, axis=1, dtype=np.int64)
    state = np.where(ones == k, 0, np.where(ones == 0, k + 1, 1 + where))
    valid = (ones == k) | (ones <= 1)
    return state, valid


def _state_bits(layout: BlockLayout, states: np.ndarray) -> np.ndarray:
    s = states[:, layout.block_of_bit]
    return ((s == 0) | (s - 1 == layout.position_of_bit)).astype(np.uint8)


def is_bts_valid(layout: BlockLayout, genotype) -> bool:
    pop = np.atleast_2d(np.asarray(genotype, dtype=np.uint8))
    if layout.block_count == 0:
        return True
    return bool(_block_states(layout, pop)[1].all())


def init_population(layout: BlockLayout, encoding: str, size: int, rng) -> np.ndarray:
    """``size - 1`` uniform random genotypes plus the all-one genotype in row 0."""
    if size < 1:
        raise ValueError("population size must be >= 1")
    m, w = layout.genotype_length, layout.block_count
    if encoding == "bts":
        u = rng.random((size - 1, w))
        states = np.floor(u * (layout.block_lengths + 2)).astype(np.int64)
        rest = _state_bits(layout, states)
    elif encoding in ("bls", "mhd"):
        rest = (rng.random((size - 1, m)) < 0.5).astype(np.uint8)
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
    return np.vstack([np.ones((1, m), dtype=np.uint8), rest])


# ---------------------------------------------------------------------------
# crossover


def crossover_rows(first: np.ndarray, second: np.ndarray, layout: BlockLayout,
                   config: OperatorConfig, rng) -> tuple[np.ndarray, np.ndarray]:
    """Row ``i`` of ``first`` is paired with row ``i`` of ``second``."""
    if first.shape != second.shape:
        raise ValueError(f"parent shapes differ: {first.shape} vs {second.shape}")
    pairs = first.shape[0]
    crossed = rng.random(pairs) < config.mixing_ratio
    if config.mode == "block_wise":
        swap = (rng.random((pairs, layout.block_count)) < config.swap_prob)[:, layout.block_of_bit]
    else:
        swap = rng.random(first.shape) < config.swap_prob
    swap &= crossed[:, None]
    return np.where(swap, second, first), np.where(swap, first, second)


def crossover(parents, layout: BlockLayout, config: OperatorConfig, rng):
    a, b = (np.asarray(p, dtype=np.uint8) for p in parents)
    if a.shape != b.shape:
        raise ValueError(f"parent lengths differ: {a.size} vs {b.size}")
    c, d = crossover_rows(a[None, :], b[None, :], layout, config, rng)
    return c[0], d[0]


# ---------------------------------------------------------------------------
# mutation


@lru_cache(maxsize=64)
def _distance_cdf_table(lengths: tuple[int, ...]) -> np.ndarray:
    kmax = max(lengths)
    table = np.ones((len(lengths), kmax))
    for b, k in enumerate(lengths):
        table[b, :k] = np.cumsum(block_change_distribution(k)[1:])
        table[b, k - 1 :] = 1.0
    return table


def mutate_rows(pop: np.ndarray, layout: BlockLayout, config: OperatorConfig, rng) -> np.ndarray:
    alpha = config.mutation_rate
    if config.mode == "bit_wise":
        flips = rng.random(pop.shape) < alpha
        return pop ^ flips.astype(np.uint8)
    if layout.block_count == 0:
        return pop.copy()
    events = rng.random((pop.shape[0], layout.block_count)) < alpha
    out = pop.copy()
    if not events.any():
        return out
    rows = np.flatnonzero(events.any(axis=1))
    sub, ev = pop[rows], events[rows]
    k = layout.block_lengths
    if config.mode == "block_wise":
        state, valid = _block_states(layout, sub)
        if not valid.all():
            raise ValueError("block-wise mutation needs BTS-valid genotypes")
        step = 1 + np.floor(rng.random(ev.shape) * (k + 1)).astype(np.int64)
        new = np.where(ev, (state + step) % (k + 2), state)
        out[rows] = np.where(ev[:, layout.block_of_bit], _state_bits(layout, new), sub)
        return out
    # mhd: distances per event as in block-wise mutation, positions uniform
    cdf = _distance_cdf_table(tuple(int(x) for x in k))
    u = rng.random(ev.shape)
    dist = np.where(ev, 1 + (u[:, :, None] > cdf[None, :, :]).sum(axis=2), 0)
    if config.mhd_scope == "block":
        keys = rng.random(sub.shape) + layout.block_of_bit
        order = np.argsort(keys, axis=1)
        rank = np.empty_like(order)
        np.put_along_axis(rank, order, np.broadcast_to(layout.position_of_bit, order.shape), axis=1)
        flips = rank < dist[:, layout.block_of_bit]
    else:
        rank = np.argsort(np.argsort(rng.random(sub.shape), axis=1), axis=1)
        flips = rank < dist.sum(axis=1, keepdims=True)
    out[rows] = sub ^ flips.astype(np.uint8)
    return out


def mutate(genotype, layout: BlockLayout, config: OperatorConfig, rng) -> np.ndarray:
    return mutate_rows(np.asarray(genotype, dtype=np.uint8)[None, :], layout, config, rng)[0]
