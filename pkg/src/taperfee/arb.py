"""Profit-maximizing arbitrageur against the pool's fee schedule.

Profit for a swap of size dx, valued at the external (true) price:

    profit(dx) = p_true*dx - quote_dy(dx) - total_fee(dx) - gas

The marginal profit on the buy side is p_true - P(dx) - rate(dx) with
P(dx) the post-trade price, so each closed-form piece of the fee schedule
contributes at most one stationary point. For m <= -1 the declining-region
piece is not concave (marginal profit is flat at m = -1 and increasing for
m < -1), so the optimizer enumerates all piece boundaries and per-piece
stationary points and takes the argmax rather than hill-climbing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fees import FeeParams, thresholds, total_fee, total_fee_array
from .pool import PoolState, implied_price, quote_dy, size_for_target_price

# |1+m| below this is treated as exactly -1 (flat marginal profit in the
# declining region); between this and GOLDEN_THRESHOLD the closed-form
# stationary point is ill-conditioned and golden-section search is used.
_M_FLAT_TOL = 1e-9
_GOLDEN_THRESHOLD = 1e-6


@dataclass(frozen=True)
class ArbContext:
    """External market state seen by the arbitrageur."""

    true_price: float
    gas: float = 0.0

    def __post_init__(self) -> None:
        if self.true_price <= 0.0:
            raise ValueError(f"true price must be positive, got {self.true_price}")
        if self.gas < 0.0:
            raise ValueError(f"gas must be >= 0, got {self.gas}")


@dataclass(frozen=True)
class ArbDecision:
    """Outcome of optimal_trade: trade is None when abstaining."""

    trade: float | None
    expected_profit: float


def arb_profit(pool: PoolState, params: FeeParams, ctx: ArbContext, dx: float) -> float:
    """Net profit of swapping dx, in Y. Zero trades pay no gas."""
    if dx == 0.0:
        return 0.0
    return ctx.true_price * dx - quote_dy(pool, dx) - total_fee(pool, params, dx) - ctx.gas


def _golden_max(fn, lo: float, hi: float, iters: int = 120) -> float:
    """Argmax of a unimodal fn on [lo, hi] by golden-section search."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fn(d)
    return (a + b) / 2.0


def _candidate_sizes(
    pool: PoolState,
    params: FeeParams,
    ctx: ArbContext,
    golden_threshold: float = _GOLDEN_THRESHOLD,
) -> list[float]:
    """All trade sizes at which the global profit maximum can sit."""
    p0 = implied_price(pool)
    pstar = ctx.true_price
    f, b, m = params.f, params.b, params.m
    out: list[float] = [0.0]

    if params.is_constant:
        # flat rate f on both sides; stationary where p* - P = +/- f
        if pstar - f > 0.0:
            out.append(size_for_target_price(pool, pstar - f))
        out.append(size_for_target_price(pool, pstar + f))
        return out

    th = thresholds(pool, params)
    eps = (b - f) / m  # price move at which the floor binds
    out.append(th.dx_u)
    if math.isfinite(th.dx_l):
        out.append(th.dx_l)

    one_m = 1.0 + m
    if one_m > golden_threshold:
        # concave declining pieces: interior stationary points
        p_buy = (pstar - f + m * p0) / one_m
        if p0 < p_buy < p0 + eps:
            out.append(size_for_target_price(pool, p_buy))
        p_sell = (pstar + f + m * p0) / one_m
        if max(p0 - eps, 0.0) < p_sell < p0:
            out.append(size_for_target_price(pool, p_sell))
    elif abs(one_m) > _M_FLAT_TOL:
        # ill-conditioned closed form: bounded numeric search on each piece
        def profit(dx: float) -> float:
            return arb_profit(pool, params, ctx, dx)

        out.append(_golden_max(profit, 0.0, th.dx_u))
        if math.isfinite(th.dx_l):
            out.append(_golden_max(profit, th.dx_l, 0.0))
    # m <= -1 (within tolerance): marginal profit is flat or increasing in
    # the declining region, so its piece maxima sit on the boundaries.

    # floor pieces (always concave): stationary where p* - P = +/- b
    p_buy_floor = pstar - b
    if p_buy_floor > p0 + eps:
        out.append(size_for_target_price(pool, p_buy_floor))
    if math.isfinite(th.dx_l) and pstar + b < p0 - eps:
        out.append(size_for_target_price(pool, pstar + b))
    return out


def optimal_trade(
    pool: PoolState,
    params: FeeParams,
    ctx: ArbContext,
    golden_threshold: float = _GOLDEN_THRESHOLD,
) -> ArbDecision:
    """Profit-maximizing swap, or abstention when no strict profit exists.

    golden_threshold widens the |1+m| band in which the bounded numeric
    fallback replaces the ill-conditioned closed-form stationary point.
    """
    best_dx = 0.0
    best_profit = 0.0
    for dx in _candidate_sizes(pool, params, ctx, golden_threshold):
        if dx >= pool.x:
            continue
        p = arb_profit(pool, params, ctx, dx)
        if p > best_profit:
            best_dx, best_profit = dx, p
    if best_profit > 0.0 and best_dx != 0.0:
        return ArbDecision(trade=best_dx, expected_profit=best_profit)
    return ArbDecision(trade=None, expected_profit=0.0)


def grid_search_oracle(
    pool: PoolState, params: FeeParams, ctx: ArbContext, n_points: int = 100_000
) -> float:
    """Brute-force profit scan; returns the grid argmax trade size.

    The grid mixes linear spacing with log spacing near zero and spans both
    directions out to a price move of 10x the larger of the current
    deviation and f*p0, which always contains the analytic stopping points.
    """
    x = pool.x
    p0 = implied_price(pool)
    span = 10.0 * max(abs(ctx.true_price - p0), params.f * p0)
    if span == 0.0:
        span = 1e-6 * p0
    lo_target = max(p0 - span, 0.01 * p0)
    hi_target = p0 + span
    dx_lo = size_for_target_price(pool, lo_target)
    dx_hi = size_for_target_price(pool, hi_target)

    n_lin = n_points // 2
    n_log = max(n_points - n_lin, 16) // 2
    lin = np.linspace(dx_lo, dx_hi, n_lin)
    mag_hi = max(abs(dx_lo), abs(dx_hi))
    mags = np.geomspace(1e-9 * x, mag_hi, n_log)
    grid = np.concatenate([lin, -mags, mags, [0.0]])
    grid = grid[(grid >= dx_lo) & (grid <= dx_hi)]

    profits = (
        ctx.true_price * grid
        - pool.y * grid / (x - grid)
        - total_fee_array(pool, params, grid)
        - np.where(grid != 0.0, ctx.gas, 0.0)
    )
    return float(grid[int(np.argmax(profits))])
