"""Counterfactual noise-trader probes: impact-sized trades and their slippage.

A probe asks: if a trader placed the swap that moves the implied price by a
given number of basis points, what all-in execution quality would they get,
measured against the true external price? Probes never mutate pool state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .fees import FeeParams, total_fee
from .pool import PoolState, implied_price, quote_dy, size_for_target_price

BUY = "buy"
SELL = "sell"


@dataclass(frozen=True)
class ImpactQuantileTable:
    """Price-impact quantiles (probability, impact in bps) calibrating probes."""

    entries: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        qs = [q for q, _ in self.entries]
        imps = [i for _, i in self.entries]
        if any(not (0.0 <= q <= 1.0) for q in qs):
            raise ValueError("quantiles must lie in [0, 1]")
        if any(q2 <= q1 for q1, q2 in zip(qs, qs[1:])):
            raise ValueError("quantiles must be strictly increasing")
        if any(i < 0.0 for i in imps):
            raise ValueError("impacts must be nonnegative")
        if any(i2 < i1 for i1, i2 in zip(imps, imps[1:])):
            raise ValueError("impacts must be nondecreasing")

    def impact_for(self, quantile: float) -> float:
        for q, impact in self.entries:
            if q == quantile:
                return impact
        raise KeyError(f"quantile {quantile} not in table")


# Empirical price-impact distribution of router-mediated swaps in a deep
# USDC/ETH pool (Q1 2023), used as the default probe calibration.
DEFAULT_IMPACT_QUANTILES = ImpactQuantileTable(
    entries=(
        (0.05, 0.0069),
        (0.25, 0.1021),
        (0.50, 3.7774),
        (0.75, 9.9981),
        (0.95, 10.7545),
        (0.99, 17.3149),
        (0.999, 69.2415),
        (0.9999, 212.1279),
    )
)


@dataclass(frozen=True)
class SlippageSample:
    direction: str
    impact_bps: float
    slippage: float


def probe_size(pool: PoolState, impact_bps: float, direction: str) -> float:
    """Signed trade size that moves the implied price by impact_bps."""
    if impact_bps < 0.0:
        raise ValueError(f"impact must be >= 0, got {impact_bps}")
    if direction not in (BUY, SELL):
        raise ValueError(f"direction must be '{BUY}' or '{SELL}', got {direction!r}")
    sign = 1.0 if direction == BUY else -1.0
    target = implied_price(pool) * (1.0 + sign * impact_bps * 1e-4)
    return size_for_target_price(pool, target)


def probe_slippage(
    pool: PoolState,
    params: FeeParams,
    true_price: float,
    impact_bps: float,
    direction: str,
) -> float:
    """All-in slippage of the impact-sized probe vs the true price.

    Buy side: (dy + fee)/dx is the effective unit price paid; slippage is
    its relative excess over the true price. Sell side: (-dy - fee)/(-dx)
    is the effective unit proceeds; slippage is the relative shortfall.
    Positive always means worse than trading at the true price.
    """
    dx = probe_size(pool, impact_bps, direction)
    if dx == 0.0:
        raise ValueError("zero-size probe has no defined slippage; exclude it")
    dy = quote_dy(pool, dx)
    fee = total_fee(pool, params, dx)
    if direction == BUY:
        effective = (dy + fee) / dx
        return effective / true_price - 1.0
    effective = (-dy - fee) / (-dx)
    return 1.0 - effective / true_price


def rms_slippage(samples: Sequence[SlippageSample] | Iterable[SlippageSample]) -> float:
    """Root-mean-square slippage over a sample set (both directions pooled)."""
    values = [s.slippage for s in samples]
    if not values:
        raise ValueError("rms_slippage needs at least one sample")
    return math.sqrt(math.fsum(v * v for v in values) / len(values))
