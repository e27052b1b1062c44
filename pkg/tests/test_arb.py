"""Arbitrageur: profit function, optimizer vs brute force, stopping points."""

import numpy as np
import pytest

from taperfee import (
    ArbContext,
    FeeParams,
    PoolState,
    apply_trade,
    arb_profit,
    grid_search_oracle,
    implied_price,
    optimal_trade,
    size_for_target_price,
)

PARITY = PoolState(1e6, 1e6)


def test_context_validation():
    with pytest.raises(ValueError):
        ArbContext(0.0)
    with pytest.raises(ValueError):
        ArbContext(1.0, gas=-0.1)


def test_profit_zero_trade():
    params = FeeParams.from_bps(20, 2, -1.0)
    assert arb_profit(PARITY, params, ArbContext(1.003, gas=5.0), 0.0) == 0.0


def test_profit_negative_without_deviation():
    # p* at the pool price and positive fees: any trade loses
    rng = np.random.default_rng(5)
    params = FeeParams.from_bps(20, 20, 0.0)
    ctx = ArbContext(1.0, gas=0.0)
    for _ in range(100):
        dx = float(rng.uniform(-3e5, 3e5))
        if dx == 0.0:
            continue
        assert arb_profit(PARITY, params, ctx, dx) < 0.0


def test_zero_fee_optimum_repegs_exactly():
    params = FeeParams(0.0, 0.0, 0.0)
    ctx = ArbContext(1.003, gas=0.0)
    dx_star = size_for_target_price(PARITY, ctx.true_price)
    best = grid_search_oracle(PARITY, params, ctx, n_points=100_000)
    # grid argmax lands within one grid step of the analytic optimum
    span = 10.0 * abs(ctx.true_price - 1.0)
    step = 2 * size_for_target_price(PARITY, 1.0 + span) / (100_000 // 2)
    assert abs(best - dx_star) <= 2 * step
    assert arb_profit(PARITY, params, ctx, dx_star) >= arb_profit(
        PARITY, params, ctx, best
    ) - 1e-9


def test_optimal_trade_abstains_below_initial_fee():
    # for m >= -1 no profitable trade exists while the deviation is under f
    rng = np.random.default_rng(13)
    for m in (0.0, -0.8, -1.0):
        for _ in range(50):
            f = float(rng.uniform(5, 50)) * 1e-4
            b = f if m == 0.0 else float(rng.uniform(0, f))
            params = FeeParams(f, b, m)
            d = float(rng.uniform(-0.99, 0.99)) * f
            decision = optimal_trade(PARITY, params, ArbContext(1.0 + d, gas=0.0))
            assert decision.trade is None


def test_steep_slope_recovers_trades_below_initial_fee():
    # m < -1: fees shed faster than marginal profit falls, so a trade
    # through the initial loss region can be profitable at deviation < f;
    # the grid oracle confirms the optimizer is right to take it.
    params = FeeParams(0.002, 0.0, -1.2)
    ctx = ArbContext(1.0019, gas=0.0)
    decision = optimal_trade(PARITY, params, ctx)
    assert decision.trade is not None
    best = grid_search_oracle(PARITY, params, ctx, n_points=200_000)
    assert decision.expected_profit >= arb_profit(PARITY, params, ctx, best) - 1e-9


def test_stopping_point_examples():
    ctx = ArbContext(1.0030, gas=0.0)
    # declining to zero: post-trade price hits p* exactly
    params = FeeParams.from_bps(20, 0, -1.0)
    decision = optimal_trade(PARITY, params, ctx)
    assert decision.trade == pytest.approx(1496.6334154111748, rel=1e-10)
    pool2, _ = apply_trade(PARITY, decision.trade, params)
    assert implied_price(pool2) == pytest.approx(1.0030, abs=1e-8)
    # constant fee: deviation parks at the fee boundary
    const = FeeParams.from_bps(20, 20, -1.0)
    decision = optimal_trade(PARITY, const, ctx)
    assert decision.trade == pytest.approx(499.6253122266925, rel=1e-10)
    pool2, _ = apply_trade(PARITY, decision.trade, const)
    assert implied_price(pool2) == pytest.approx(1.0030 - 0.0020, abs=1e-8)
    # positive floor: deviation parks at b
    floored = FeeParams.from_bps(20, 5, -1.0)
    decision = optimal_trade(PARITY, floored, ctx)
    pool2, _ = apply_trade(PARITY, decision.trade, floored)
    assert ctx.true_price - implied_price(pool2) == pytest.approx(0.0005, rel=1e-8)


def test_direction_correctness():
    rng = np.random.default_rng(17)
    for _ in range(100):
        params = FeeParams.from_bps(
            float(rng.uniform(2, 50)), 2.0, float(rng.choice([-0.8, -1.0, -1.2]))
        )
        d = float(rng.uniform(-80, 80)) * 1e-4
        decision = optimal_trade(PARITY, params, ArbContext(1.0 + d, gas=0.0))
        if decision.trade is not None:
            assert (decision.trade > 0) == (d > 0)


def test_never_trades_at_a_loss_and_gas_reduces_frequency():
    rng = np.random.default_rng(19)
    params = FeeParams.from_bps(20, 2, -1.0)
    devs = rng.uniform(-50, 50, 300) * 1e-4
    trades_by_gas = []
    for gas in (0.0, 0.05, 5.0):
        count = 0
        for d in devs:
            decision = optimal_trade(PARITY, params, ArbContext(1.0 + float(d), gas))
            if decision.trade is not None:
                count += 1
                assert decision.expected_profit > 0.0
        trades_by_gas.append(count)
    assert trades_by_gas[0] >= trades_by_gas[1] >= trades_by_gas[2]


def test_optimizer_matches_grid_oracle_randomized():
    rng = np.random.default_rng(101)
    for _ in range(60):
        x = float(rng.uniform(1e4, 1e7))
        pool = PoolState(x, x * float(rng.uniform(0.8, 1.25)))
        m = float(rng.choice([0.0, -0.8, -1.0, -1.2]))
        f_bps = float(rng.uniform(2, 50))
        b_bps = f_bps if m == 0.0 else float(rng.uniform(0, f_bps))
        params = FeeParams.from_bps(f_bps, b_bps, m)
        p0 = implied_price(pool)
        ctx = ArbContext(
            p0 * (1.0 + float(rng.uniform(-8, 8)) * f_bps * 1e-4),
            gas=float(rng.choice([0.0, 0.01, 1.0])),
        )
        decision = optimal_trade(pool, params, ctx)
        mine = decision.expected_profit if decision.trade is not None else 0.0
        best = grid_search_oracle(pool, params, ctx, n_points=100_000)
        oracle = max(arb_profit(pool, params, ctx, best), 0.0)
        assert mine >= oracle - 1e-6 * max(1.0, abs(oracle))


def test_near_flat_slope_uses_bounded_search():
    # |1+m| small but nonzero: the closed-form stationary point divides by
    # ~0, so the optimizer falls back to golden-section on the piece
    params = FeeParams(0.002, 0.0005, -1.0 + 1e-7)
    ctx = ArbContext(1.0035, gas=0.0)
    decision = optimal_trade(PARITY, params, ctx)
    assert decision.trade is not None
    best = grid_search_oracle(PARITY, params, ctx, n_points=200_000)
    oracle = arb_profit(PARITY, params, ctx, best)
    assert decision.expected_profit >= oracle - 1e-6 * max(1.0, abs(oracle))
