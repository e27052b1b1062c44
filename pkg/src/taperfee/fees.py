"""Tapered fee schedule: marginal fee, binding thresholds, closed-form total.

The marginal fee starts at the initial rate f and declines linearly, at
slope m <= 0, with the *absolute* movement of the pool's implied price
caused by the trade so far, and is floored at the base rate b:

    rate(w) = max(b,  f + m * |dp(w)|),    dp(w) = xy/(x-w)^2 - y/x

where w is the X already traded along the path. The total fee for a trade
of size dx is the integral of rate(w) over the traded path, which has a
four-piece closed form split at the points where the floor starts to bind:

    dx_u = x*(1 - k_u)   on the buy side  (dx > 0, price rises)
    dx_l = x*(1 - k_l)   on the sell side (dx < 0, price falls)

    k_u = sqrt( (y/x) / (y/x + (b-f)/m) )
    k_l = sqrt( (y/x) / (y/x - (b-f)/m) )

Setting b = f (or m = 0) collapses the schedule to a constant fee f. Fees
are denominated in Y. The closed-form pieces below are algebraically
identical to the textbook expressions but arranged to avoid catastrophic
cancellation on deep pools (see _fee_declining / fee_branch_value).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pool import PoolDrainError, PoolState


class DegenerateScheduleError(ValueError):
    """Thresholds are undefined for m = 0; use the constant-fee path."""


@dataclass(frozen=True)
class FeeParams:
    """Fee schedule parameters, all dimensionless fractions.

    f: initial marginal rate; b: floor rate, 0 <= b <= f; m: slope of the
    marginal rate per unit of absolute implied-price movement, m <= 0.
    """

    f: float
    b: float
    m: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.b <= self.f):
            raise ValueError(f"need 0 <= b <= f, got b={self.b}, f={self.f}")
        if self.m > 0.0:
            raise ValueError(f"slope must be <= 0, got m={self.m}")

    @property
    def is_constant(self) -> bool:
        """True when the schedule never declines (flat rate f)."""
        return self.m == 0.0 or self.b == self.f

    @classmethod
    def from_bps(cls, f_bps: float, b_bps: float, m: float) -> "FeeParams":
        return cls(f_bps * 1e-4, b_bps * 1e-4, m)


@dataclass(frozen=True)
class FeeThresholds:
    """Where the floor starts to bind, in relative (k) and X-size terms.

    k_u <= 1 <= k_l with equality iff b = f. dx_l is -inf when the price
    cannot fall far enough for the floor to bind (|dp| < (f-b)/|m| for all
    sell sizes; only possible on pools far from parity).
    """

    k_u: float
    k_l: float
    dx_u: float
    dx_l: float


def price_move(pool: PoolState, w: float) -> float:
    """Absolute implied-price change after trading w of X.

    Equals xy/(x-w)^2 - y/x, computed as y*w*(2x-w)/(x*(x-w)^2) so that
    small moves on deep pools do not cancel.
    """
    if w >= pool.x:
        raise PoolDrainError(f"w={w} would drain the pool (x={pool.x})")
    x, y = pool.x, pool.y
    return y * w * (2.0 * x - w) / (x * (x - w) * (x - w))


def thresholds(pool: PoolState, params: FeeParams) -> FeeThresholds:
    """Floor-binding points of the schedule for the current pool.

    Requires m < 0 strictly; with m = 0 the schedule has no declining
    region and callers must use the constant-fee path.
    """
    if params.m == 0.0:
        raise DegenerateScheduleError("thresholds undefined for m = 0")
    p0 = pool.y / pool.x
    eps = abs((params.b - params.f) / params.m)  # price move at which the floor binds
    k_u = math.sqrt(p0 / (p0 + eps))
    dx_u = pool.x * (eps / (p0 + eps)) / (1.0 + k_u)
    if eps < p0:
        k_l = math.sqrt(p0 / (p0 - eps))
        dx_l = -pool.x * (eps / (p0 - eps)) / (1.0 + k_l)
    else:
        # price can fall by at most p0, so the floor never binds selling
        k_l = math.inf
        dx_l = -math.inf
    return FeeThresholds(k_u=k_u, k_l=k_l, dx_u=dx_u, dx_l=dx_l)


def marginal_fee(pool: PoolState, params: FeeParams, w: float) -> float:
    """Marginal fee rate at point w along the trade path."""
    if w >= pool.x:
        raise PoolDrainError(f"w={w} would drain the pool (x={pool.x})")
    if params.is_constant:
        return params.f
    return max(params.b, params.f + params.m * abs(price_move(pool, w)))


def _fee_declining(pool: PoolState, params: FeeParams, dx: float) -> float:
    """Closed form over the declining region (cases 2 and 3).

    f*|dx| + m * y*dx^2 / (x*(x-dx)); the m-term is the stable rearrangement
    of m*(xy/(x-dx)) - m*(y/x)*dx - m*y.
    """
    x, y = pool.x, pool.y
    return params.f * abs(dx) + params.m * y * dx * dx / (x * (x - dx))


def fee_branch_value(pool: PoolState, params: FeeParams, case: int, dx: float) -> float:
    """Evaluate one closed-form branch without range checks.

    case 1: buy past dx_u (floor active); case 2: buy within the declining
    region; case 3: sell within the declining region; case 4: sell past
    dx_l. Used for boundary-continuity checks and the CLI breakdown; prefer
    total_fee for actual fees.
    """
    if case in (2, 3):
        return _fee_declining(pool, params, dx)
    th = thresholds(pool, params)
    y = pool.y
    if case == 1:
        ku = th.k_u
        head = params.f * th.dx_u + params.m * y * (1.0 - ku) * (1.0 - ku) / ku
        return head + params.b * (dx - th.dx_u)
    if case == 4:
        kl = th.k_l
        head = -params.f * th.dx_l + params.m * y * (kl - 1.0) * (kl - 1.0) / kl
        return head + params.b * (th.dx_l - dx)
    raise ValueError(f"unknown branch {case}")


def classify_branch(pool: PoolState, params: FeeParams, dx: float) -> str:
    """Human-readable name of the branch total_fee would use."""
    if params.is_constant:
        return "constant (b=f)" if params.b == params.f else "constant (m=0)"
    th = thresholds(pool, params)
    if dx > th.dx_u:
        return "case 1 (buy, floor active)"
    if dx >= 0.0:
        return "case 2 (buy, declining)"
    if dx >= th.dx_l:
        return "case 3 (sell, declining)"
    return "case 4 (sell, floor active)"


def total_fee(pool: PoolState, params: FeeParams, dx: float) -> float:
    """Total Y-denominated fee for a trade of size dx.

    Piecewise closed form of the integral of marginal_fee over [0, dx]
    (path-signed, always >= 0 for b >= 0). Exact boundary points resolve to
    the declining-region expression; continuity makes the choice moot.
    """
    if dx >= pool.x:
        raise PoolDrainError(f"dx={dx} would drain the pool (x={pool.x})")
    if params.is_constant:
        return params.f * abs(dx)
    th = thresholds(pool, params)
    if th.dx_l <= dx <= th.dx_u:
        return _fee_declining(pool, params, dx)
    if dx > th.dx_u:
        return fee_branch_value(pool, params, 1, dx)
    return fee_branch_value(pool, params, 4, dx)


def marginal_fee_array(pool: PoolState, params: FeeParams, w: np.ndarray) -> np.ndarray:
    """Vectorized marginal_fee (w strictly below x)."""
    x, y = pool.x, pool.y
    if params.is_constant:
        return np.full_like(w, params.f, dtype=float)
    dp = y * w * (2.0 * x - w) / (x * (x - w) * (x - w))
    return np.maximum(params.b, params.f + params.m * np.abs(dp))


def total_fee_array(pool: PoolState, params: FeeParams, dx: np.ndarray) -> np.ndarray:
    """Vectorized total_fee over an array of trade sizes."""
    x, y = pool.x, pool.y
    dx = np.asarray(dx, dtype=float)
    if np.any(dx >= x):
        raise PoolDrainError("dx array contains pool-draining sizes")
    if params.is_constant:
        return params.f * np.abs(dx)
    th = thresholds(pool, params)
    f, b, m = params.f, params.b, params.m
    declining = f * np.abs(dx) + m * y * dx * dx / (x * (x - dx))
    ku = th.k_u
    head_u = f * th.dx_u + m * y * (1.0 - ku) * (1.0 - ku) / ku
    out = np.where(dx > th.dx_u, head_u + b * (dx - th.dx_u), declining)
    if math.isfinite(th.dx_l):
        kl = th.k_l
        head_l = -f * th.dx_l + m * y * (kl - 1.0) * (kl - 1.0) / kl
        out = np.where(dx < th.dx_l, head_l + b * (th.dx_l - dx), out)
    return out


def quadrature_fee(pool: PoolState, params: FeeParams, dx: float, n_steps: int = 100_000) -> float:
    """Composite-midpoint integral of marginal_fee over the trade path.

    Independent numerical check of total_fee; converges to it as n_steps
    grows (1e-6 relative at n_steps = 1e5 for non-degenerate inputs).
    """
    if dx >= pool.x:
        raise PoolDrainError(f"dx={dx} would drain the pool (x={pool.x})")
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if dx == 0.0:
        return 0.0
    lo, hi = (0.0, dx) if dx > 0.0 else (dx, 0.0)
    h = (hi - lo) / n_steps
    w = lo + (np.arange(n_steps, dtype=float) + 0.5) * h
    return float(np.sum(marginal_fee_array(pool, params, w)) * h)
