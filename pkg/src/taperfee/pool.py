"""Constant-product pool state, quoting, and trade application.

The pool holds reserves (x, y) with y the numeraire. Swaps preserve the
reserve product exactly: fees are charged on top of the quoted amounts and
routed to an external account, never into the reserves. All quantities are
real-valued; the implied price is y/x (Y per X).
"""

from __future__ import annotations

from dataclasses import dataclass


class PoolDrainError(ValueError):
    """Requested trade would withdraw the entire X reserve (dx >= x)."""


@dataclass(frozen=True)
class PoolState:
    """Reserves of a constant-product pool. Both must stay positive."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (self.x > 0.0 and self.y > 0.0):
            raise ValueError(f"reserves must be positive, got x={self.x}, y={self.y}")


@dataclass(frozen=True)
class TradeReceipt:
    """Executed swap record.

    dx is the X withdrawn by the trader (signed), dy the Y deposited
    (signed, same sign as dx). fee is Y-denominated, paid by the trader to
    an external fee account; it never touches the reserves.
    """

    dx: float
    dy: float
    fee: float
    price_before: float
    price_after: float


def implied_price(pool: PoolState) -> float:
    """Price of X in Y implied by the reserve ratio."""
    return pool.y / pool.x


def _check_dx(pool: PoolState, dx: float) -> None:
    if dx >= pool.x:
        raise PoolDrainError(f"dx={dx} would drain the pool (x={pool.x})")


def quote_dy(pool: PoolState, dx: float) -> float:
    """Y the trader must deposit to withdraw dx of X.

    From (x - dx)(y + dy) = xy:  dy = y*dx/(x - dx). Negative dx means the
    trader deposits X and receives Y (dy < 0). Written in the cancellation-
    free form rather than xy/(x-dx) - y.
    """
    _check_dx(pool, dx)
    return pool.y * dx / (pool.x - dx)


def price_after(pool: PoolState, dx: float) -> float:
    """Implied price after a swap of size dx: xy/(x - dx)^2."""
    _check_dx(pool, dx)
    return pool.x * pool.y / ((pool.x - dx) * (pool.x - dx))


def size_for_target_price(pool: PoolState, target: float) -> float:
    """Trade size that moves the implied price exactly to `target`.

    Inverse of price_after: dx = x*(1 - sqrt(p0/target)).
    """
    if target <= 0.0:
        raise ValueError(f"target price must be positive, got {target}")
    p0 = pool.y / pool.x
    return pool.x * (1.0 - (p0 / target) ** 0.5)


def apply_trade(pool: PoolState, dx: float, params) -> tuple[PoolState, TradeReceipt]:
    """Execute a swap under the given fee schedule.

    Returns the post-trade pool and a receipt. The fee (fees.total_fee) is
    debited from the trader and credited to whoever holds the receipt; the
    reserves follow the pure constant-product update, so x*y is preserved.
    """
    from .fees import total_fee

    _check_dx(pool, dx)
    p_before = implied_price(pool)
    if dx == 0.0:
        return pool, TradeReceipt(0.0, 0.0, 0.0, p_before, p_before)
    dy = quote_dy(pool, dx)
    fee = total_fee(pool, params, dx)
    new_pool = PoolState(pool.x - dx, pool.y + dy)
    return new_pool, TradeReceipt(dx, dy, fee, p_before, implied_price(new_pool))
