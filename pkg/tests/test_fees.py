"""Fee schedule: thresholds, marginal rate, closed form vs quadrature."""

import math

import numpy as np
import pytest

from taperfee import (
    DegenerateScheduleError,
    FeeParams,
    PoolDrainError,
    PoolState,
    implied_price,
    marginal_fee,
    quadrature_fee,
    size_for_target_price,
    thresholds,
    total_fee,
)
from taperfee.fees import classify_branch, fee_branch_value, total_fee_array

PARITY = PoolState(1e6, 1e6)


def random_schedule(rng, m_choices=(-0.8, -1.0, -1.2)):
    f_bps = rng.uniform(2, 50)
    b_bps = rng.uniform(0, f_bps)
    return FeeParams.from_bps(f_bps, b_bps, float(rng.choice(m_choices)))


def test_fee_params_validation():
    with pytest.raises(ValueError):
        FeeParams(0.001, 0.002, -1.0)  # b > f
    with pytest.raises(ValueError):
        FeeParams(0.001, -0.0001, -1.0)  # b < 0
    with pytest.raises(ValueError):
        FeeParams(0.001, 0.0, 0.5)  # m > 0
    assert FeeParams(0.002, 0.002, -1.0).is_constant
    assert FeeParams(0.002, 0.001, 0.0).is_constant
    assert not FeeParams(0.002, 0.001, -1.0).is_constant


def test_thresholds_examples():
    # b = f collapses both thresholds to the origin
    th = thresholds(PARITY, FeeParams(0.002, 0.002, -1.0))
    assert th.k_u == 1.0 and th.k_l == 1.0
    assert th.dx_u == 0.0 and th.dx_l == 0.0

    th = thresholds(PARITY, FeeParams(0.001, 0.0, -1.0))
    assert th.k_u == pytest.approx(math.sqrt(1 / 1.001), rel=1e-15)
    assert th.k_l == pytest.approx(math.sqrt(1 / 0.999), rel=1e-15)
    assert th.k_u == pytest.approx(0.9995003746877733, rel=1e-12)
    assert th.k_l == pytest.approx(1.0005003753127737, rel=1e-12)

    th = thresholds(PARITY, FeeParams(0.005, 0.001, -0.8))
    assert th.k_u == pytest.approx(math.sqrt(1 / 1.005), rel=1e-15)
    assert th.k_u == pytest.approx(0.997509, abs=1e-6)


def test_thresholds_rejects_flat_slope():
    with pytest.raises(DegenerateScheduleError):
        thresholds(PARITY, FeeParams(0.002, 0.001, 0.0))


def test_marginal_fee_equals_base_at_thresholds():
    rng = np.random.default_rng(23)
    for _ in range(200):
        params = random_schedule(rng)
        x = float(rng.uniform(100, 1e7))
        pool = PoolState(x, x * float(rng.uniform(0.5, 2.0)))
        th = thresholds(pool, params)
        assert th.k_u <= 1.0 <= th.k_l
        assert marginal_fee(pool, params, th.dx_u) == pytest.approx(params.b, abs=1e-9)
        assert marginal_fee(pool, params, th.dx_l) == pytest.approx(params.b, abs=1e-9)


def test_marginal_fee_examples():
    assert marginal_fee(PARITY, FeeParams(0.002, 0.0, -1.0), 0.0) == 0.002
    # at the point where the price has moved 10 bps, the rate has shed 10 bps
    params = FeeParams(0.002, 0.0, -1.0)
    w = size_for_target_price(PARITY, 1.001)
    assert marginal_fee(PARITY, params, w) == pytest.approx(0.001, abs=1e-9)
    w_sell = size_for_target_price(PARITY, 0.999)
    assert marginal_fee(PARITY, params, w_sell) == pytest.approx(0.001, abs=1e-9)
    # floored at b once the move exceeds (f-b)/|m|
    floored = FeeParams(0.002, 0.0005, -1.0)
    w = size_for_target_price(PARITY, 1.003)
    assert marginal_fee(PARITY, floored, w) == pytest.approx(0.0005, abs=1e-12)
    with pytest.raises(PoolDrainError):
        marginal_fee(PARITY, params, PARITY.x)


def test_slope_semantics_one_for_one():
    # m = -1 at parity: rate at price-move delta equals max(b, f - delta)
    rng = np.random.default_rng(29)
    params = FeeParams.from_bps(20, 2, -1.0)
    for _ in range(100):
        delta = float(rng.uniform(0, 40)) * 1e-4
        w = size_for_target_price(PARITY, 1.0 + delta)
        want = max(params.b, params.f - delta)
        assert marginal_fee(PARITY, params, w) == pytest.approx(want, abs=1e-9)


def test_total_fee_trivial_cases():
    params = FeeParams(0.002, 0.0005, -1.0)
    assert total_fee(PARITY, params, 0.0) == 0.0
    # b = f reduces to the constant fee in both directions
    const = FeeParams(0.003, 0.003, -1.0)
    assert total_fee(PARITY, const, 1000.0) == pytest.approx(3.0, rel=1e-12)
    assert total_fee(PARITY, const, -1000.0) == pytest.approx(3.0, rel=1e-12)
    # m = 0 falls back to f*|dx| even when b < f
    flat = FeeParams(0.003, 0.001, 0.0)
    assert total_fee(PARITY, flat, -1000.0) == pytest.approx(3.0, rel=1e-12)
    with pytest.raises(PoolDrainError):
        total_fee(PARITY, params, PARITY.x + 1)


def test_total_fee_frozen_oracle_values():
    # frozen from quadrature_fee(n=1e5)
    fee = total_fee(PARITY, FeeParams.from_bps(20, 0, -1.0), 500.0)
    assert fee == pytest.approx(0.7498749374687376, rel=1e-6)
    small = PoolState(100, 100)
    fee2 = total_fee(small, FeeParams(0.001, 0.0, -1.0), 1.0)
    assert fee2 == pytest.approx(2.4987507742993357e-05, rel=1e-6)
    # sanity: the whole declining wedge is exhausted within dx here
    th = thresholds(small, FeeParams(0.001, 0.0, -1.0))
    assert fee2 == pytest.approx(0.5 * 0.001 * th.dx_u, rel=1e-3)


def test_total_fee_matches_textbook_branch_expressions():
    # literal (cancellation-prone) forms of the four branches, as an
    # independent check of the stable rearrangements, on a small pool
    pool = PoolState(250.0, 300.0)
    rng = np.random.default_rng(31)
    for _ in range(200):
        params = random_schedule(rng)
        x, y, f, b, m = pool.x, pool.y, params.f, params.b, params.m
        th = thresholds(pool, params)
        dx = float(rng.uniform(-1.5, 1.5)) * max(th.dx_u, 1e-3 * x)
        if dx >= x:
            continue
        ku, kl = th.k_u, th.k_l
        if dx > th.dx_u:
            want = (
                f * x * (1 - ku) + m * (y / ku) - m * y * (2 - ku)
                + b * (dx - x * (1 - ku))
            )
        elif dx >= 0:
            want = f * dx + m * (x * y / (x - dx)) - m * (y / x) * dx - m * y
        elif dx >= th.dx_l:
            want = -f * dx + m * (x * y / (x - dx)) - m * (y / x) * dx - m * y
        else:
            want = (
                -f * x * (1 - kl) + m * (y / kl) - m * y * (2 - kl)
                - b * (dx - x * (1 - kl))
            )
        assert total_fee(pool, params, dx) == pytest.approx(want, rel=1e-8, abs=1e-12)


def test_branch_continuity_at_thresholds():
    rng = np.random.default_rng(37)
    for _ in range(50):
        params = random_schedule(rng)
        x = float(rng.uniform(100, 1e7))
        pool = PoolState(x, x * float(rng.uniform(0.5, 2.0)))
        th = thresholds(pool, params)
        up1 = fee_branch_value(pool, params, 1, th.dx_u)
        up2 = fee_branch_value(pool, params, 2, th.dx_u)
        assert up1 == pytest.approx(up2, rel=1e-9)
        dn3 = fee_branch_value(pool, params, 3, th.dx_l)
        dn4 = fee_branch_value(pool, params, 4, th.dx_l)
        assert dn3 == pytest.approx(dn4, rel=1e-9)


def test_classify_branch():
    params = FeeParams.from_bps(20, 5, -1.0)
    th = thresholds(PARITY, params)
    assert classify_branch(PARITY, params, th.dx_u * 2) == "case 1 (buy, floor active)"
    assert classify_branch(PARITY, params, th.dx_u / 2) == "case 2 (buy, declining)"
    assert classify_branch(PARITY, params, th.dx_l / 2) == "case 3 (sell, declining)"
    assert classify_branch(PARITY, params, th.dx_l * 2) == "case 4 (sell, floor active)"
    assert "constant" in classify_branch(PARITY, FeeParams(0.002, 0.002, -1.0), 100.0)


def test_total_fee_monotone_and_nonnegative():
    rng = np.random.default_rng(41)
    for _ in range(50):
        params = random_schedule(rng)
        x = float(rng.uniform(1e3, 1e7))
        pool = PoolState(x, x)
        sizes = np.sort(rng.uniform(0, 0.2 * x, 50))
        fees_up = [total_fee(pool, params, float(s)) for s in sizes]
        fees_dn = [total_fee(pool, params, -float(s)) for s in sizes]
        assert all(v >= 0.0 for v in fees_up + fees_dn)
        tol = 1e-12 * max(fees_up[-1], 1.0)
        assert all(b2 >= a - tol for a, b2 in zip(fees_up, fees_up[1:]))
        assert all(b2 >= a - tol for a, b2 in zip(fees_dn, fees_dn[1:]))
        if params.b > 0:
            assert all(b2 > a for a, b2 in zip(fees_up, fees_up[1:]))


def test_quadrature_basics():
    params = FeeParams(0.002, 0.0005, -1.0)
    assert quadrature_fee(PARITY, params, 0.0) == 0.0
    const = FeeParams(0.003, 0.003, -1.0)
    assert quadrature_fee(PARITY, const, 750.0) == pytest.approx(
        0.003 * 750.0, rel=1e-10
    )
    assert quadrature_fee(PARITY, const, -750.0) == pytest.approx(
        0.003 * 750.0, rel=1e-10
    )
    with pytest.raises(ValueError):
        quadrature_fee(PARITY, params, 100.0, n_steps=0)


def test_closed_form_tracks_quadrature_across_branches():
    rng = np.random.default_rng(43)
    for _ in range(60):
        params = random_schedule(rng)
        x = float(rng.uniform(100, 1e7))
        pool = PoolState(x, x * float(rng.uniform(0.5, 2.0)))
        th = thresholds(pool, params)
        scale = float(rng.uniform(0.05, 3.0))
        sign = 1.0 if rng.random() < 0.5 else -1.0
        dx = sign * scale * th.dx_u if sign > 0 else sign * scale * abs(th.dx_l)
        cf = total_fee(pool, params, dx)
        q = quadrature_fee(pool, params, dx, n_steps=100_000)
        assert abs(cf - q) / max(abs(cf), 1e-12) <= 1e-6


def test_total_fee_array_matches_scalar():
    rng = np.random.default_rng(47)
    pool = PoolState(5e5, 8e5)
    params = FeeParams.from_bps(30, 6, -1.2)
    dxs = rng.uniform(-0.4, 0.4, 500) * pool.x
    vec = total_fee_array(pool, params, dxs)
    for dx, v in zip(dxs, vec):
        assert v == pytest.approx(total_fee(pool, params, float(dx)), rel=1e-14)
    const = FeeParams(0.002, 0.002, 0.0)
    vec_c = total_fee_array(pool, const, dxs)
    assert np.allclose(vec_c, 0.002 * np.abs(dxs), rtol=1e-15)
