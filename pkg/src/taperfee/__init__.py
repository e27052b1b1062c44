"""Constant-product AMM simulator with tapered (declining-marginal) fees."""

from .arb import ArbContext, ArbDecision, arb_profit, grid_search_oracle, optimal_trade
from .fees import (
    DegenerateScheduleError,
    FeeParams,
    FeeThresholds,
    marginal_fee,
    quadrature_fee,
    thresholds,
    total_fee,
)
from .metrics import WorldResult, lvr_increment, portfolio_value, rms_deviation, world_loss
from .pool import (
    PoolDrainError,
    PoolState,
    TradeReceipt,
    apply_trade,
    implied_price,
    price_after,
    quote_dy,
    size_for_target_price,
)
from .prices import PricePath, generate_path, world_seed
from .probes import (
    BUY,
    DEFAULT_IMPACT_QUANTILES,
    SELL,
    ImpactQuantileTable,
    SlippageSample,
    probe_size,
    probe_slippage,
    rms_slippage,
)
from .sweep import (
    AggregateRow,
    CellSpec,
    PRESETS,
    SweepConfig,
    WorldConfig,
    enumerate_cells,
    pareto_extract,
    run_sweep,
    run_world,
)

__all__ = [
    "ArbContext",
    "ArbDecision",
    "AggregateRow",
    "BUY",
    "CellSpec",
    "DEFAULT_IMPACT_QUANTILES",
    "DegenerateScheduleError",
    "FeeParams",
    "FeeThresholds",
    "ImpactQuantileTable",
    "PRESETS",
    "PoolDrainError",
    "PoolState",
    "PricePath",
    "SELL",
    "SlippageSample",
    "SweepConfig",
    "TradeReceipt",
    "WorldConfig",
    "WorldResult",
    "apply_trade",
    "arb_profit",
    "enumerate_cells",
    "generate_path",
    "grid_search_oracle",
    "implied_price",
    "lvr_increment",
    "marginal_fee",
    "optimal_trade",
    "pareto_extract",
    "portfolio_value",
    "price_after",
    "probe_size",
    "probe_slippage",
    "quadrature_fee",
    "quote_dy",
    "rms_deviation",
    "rms_slippage",
    "run_sweep",
    "run_world",
    "size_for_target_price",
    "thresholds",
    "total_fee",
    "world_loss",
    "world_seed",
]
