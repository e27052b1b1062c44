"""True-price path generation: a multiplicative Gaussian random walk.

Each step applies p_{t+1} = p_t * (1 + e_t) with e_t ~ N(0, sigma), sigma
given in basis points per step. Increments are relative so prices stay
positive; draws with |e| >= 1 (never seen at realistic sigmas) are
resampled.

Determinism: paths are generated with numpy's PCG64 generator. The world
seed is derived as SeedSequence([master_seed, world_index]) and depends on
the world index only, so every fee parameterization sees the same price
path for a given world -- frontier comparisons are paired by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PricePath:
    p0: float
    steps: int
    sigma_bps: float
    seed: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.values) != self.steps + 1:
            raise ValueError("values must have steps+1 entries")


def world_seed(master_seed: int, world_index: int) -> int:
    """Derived 64-bit seed for one world's price path."""
    ss = np.random.SeedSequence([int(master_seed), int(world_index)])
    return int(ss.generate_state(1, np.uint64)[0])


def generate_path(p0: float, steps: int, sigma_bps: float, seed: int) -> PricePath:
    if p0 <= 0.0:
        raise ValueError(f"p0 must be positive, got {p0}")
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if sigma_bps < 0.0:
        raise ValueError(f"sigma_bps must be >= 0, got {sigma_bps}")
    sigma = sigma_bps * 1e-4
    rng = np.random.default_rng(seed)
    if sigma == 0.0:
        increments = np.zeros(steps)
    else:
        increments = rng.normal(0.0, sigma, steps)
        bad = np.abs(increments) >= 1.0
        while bad.any():
            increments[bad] = rng.normal(0.0, sigma, int(bad.sum()))
            bad = np.abs(increments) >= 1.0
    values = np.empty(steps + 1)
    values[0] = p0
    np.cumprod(1.0 + increments, out=values[1:])
    values[1:] *= p0
    values.setflags(write=False)
    return PricePath(p0=p0, steps=steps, sigma_bps=sigma_bps, seed=int(seed), values=values)
