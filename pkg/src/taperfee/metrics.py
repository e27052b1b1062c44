"""Per-world accounting: rebalancing loss, fee revenue, price tracking.

The loss metric compares LP P&L against a portfolio that starts with the
pool's holdings and replicates every holdings change at the contemporaneous
true price. Per trade, that benchmark gap grows by dx*p_true - dy (value
extracted from the pool before fees); summing per-trade increments is
exactly equivalent because both portfolios hold identical quantities
between trades. The reported loss nets out fee revenue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .fees import FeeParams
from .pool import PoolState, TradeReceipt


@dataclass
class WorldResult:
    """Metrics of one simulated world for one fee parameterization."""

    loss: float
    lvr_gross: float
    fee_revenue: float
    rms_deviation_bps: float
    n_trades: int
    rms_slippage_by_quantile: dict[float, float]
    seed: int
    params: FeeParams
    slippage_samples: list = field(default_factory=list, repr=False)


def lvr_increment(receipt: TradeReceipt, true_price: float) -> float:
    """Value extracted from the pool by one trade, at the true price, before fees."""
    return receipt.dx * true_price - receipt.dy


def portfolio_value(pool: PoolState, true_price: float) -> float:
    return pool.x * true_price + pool.y


def world_loss(
    receipts: Sequence[TradeReceipt],
    true_prices: Sequence[float],
    fee_revenue: float,
) -> float:
    """Gross rebalancing shortfall minus fees captured, over one world."""
    if len(receipts) != len(true_prices):
        raise ValueError(
            f"{len(receipts)} receipts vs {len(true_prices)} prices; inputs must align"
        )
    gross = math.fsum(lvr_increment(r, p) for r, p in zip(receipts, true_prices))
    return gross - fee_revenue


def rms_deviation(amm_prices: Sequence[float], true_prices: Sequence[float]) -> float:
    """Root-mean-square relative gap between pool and true prices, in bps."""
    if len(amm_prices) != len(true_prices):
        raise ValueError("price sequences must have equal length")
    if len(amm_prices) == 0:
        raise ValueError("rms_deviation needs at least one sample")
    total = math.fsum(((a - t) / t) ** 2 for a, t in zip(amm_prices, true_prices))
    return math.sqrt(total / len(amm_prices)) * 1e4
