"""Experiment grid orchestration: worlds, cells, aggregation, frontier.

A cell is one (initial fee, base fee, slope) triple; each cell is simulated
over `worlds` independent price paths. World seeds depend only on the world
index, so all cells are paired on identical paths. Output ordering is fixed
(cells in grid order, worlds ascending) regardless of parallelism, which
makes the emitted CSVs byte-stable.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .arb import ArbContext, optimal_trade
from .fees import FeeParams
from .metrics import WorldResult, lvr_increment, rms_deviation
from .pool import PoolState, apply_trade, implied_price
from .prices import generate_path, world_seed
from .probes import BUY, SELL, SlippageSample, probe_slippage


@dataclass(frozen=True)
class WorldConfig:
    """Everything one world needs besides its fee params and seed."""

    x0: float = 1e6
    y0: float = 1e6
    steps: int = 2000
    sigma_bps: float = 3.0
    gas: float = 0.01
    probe_quantiles_bps: tuple[float, ...] = (3.7774,)


@dataclass(frozen=True)
class SweepConfig:
    x0: float
    y0: float
    initial_fee_grid_bps: tuple[float, ...]
    base_fee_rule: tuple[float, ...] | str
    slopes: tuple[float, ...]
    worlds: int
    steps: int
    sigma_bps: float
    gas: float
    master_seed: int
    probe_quantiles_bps: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.initial_fee_grid_bps:
            raise ValueError("initial fee grid must be nonempty")
        if not self.slopes:
            raise ValueError("slopes must be nonempty")
        if self.worlds < 1 or self.steps < 1:
            raise ValueError("worlds and steps must be >= 1")
        if any(q <= 0.0 for q in self.probe_quantiles_bps):
            raise ValueError("probe quantiles must be positive impacts")

    def world_config(self) -> WorldConfig:
        return WorldConfig(
            x0=self.x0,
            y0=self.y0,
            steps=self.steps,
            sigma_bps=self.sigma_bps,
            gas=self.gas,
            probe_quantiles_bps=self.probe_quantiles_bps,
        )


@dataclass(frozen=True)
class CellSpec:
    f_bps: float
    b_bps: float
    m: float

    def params(self) -> FeeParams:
        return FeeParams.from_bps(self.f_bps, self.b_bps, self.m)


@dataclass
class AggregateRow:
    """Across-world means for one cell."""

    f_bps: float
    b_bps: float
    m: float
    mean_loss: float
    mean_lvr_gross: float
    mean_fee_revenue: float
    mean_rms_deviation_bps: float
    mean_n_trades: float
    mean_rms_slippage: dict[float, float]
    worlds: int

    def metric(self, name: str) -> float:
        """Look up a metric by CSV column name (for frontier extraction)."""
        plain = {
            "mean_loss": self.mean_loss,
            "mean_lvr_gross": self.mean_lvr_gross,
            "mean_fee_revenue": self.mean_fee_revenue,
            "mean_rms_deviation_bps": self.mean_rms_deviation_bps,
            "mean_n_trades": self.mean_n_trades,
        }
        if name in plain:
            return plain[name]
        prefix = "mean_rms_slippage_q"
        if name.startswith(prefix):
            for q, v in self.mean_rms_slippage.items():
                if format(q, ".12g") == name[len(prefix):]:
                    return v
        raise KeyError(f"unknown metric {name!r}")


def base_fee_grid(f_bps: float, rule: tuple[float, ...] | str) -> list[float]:
    """Base-fee values for one initial fee.

    A string "range:START:STEP" expands to START, START+STEP, ... up to
    f_bps; an explicit list is filtered to values <= f_bps. The constant
    cell b = f is always included.
    """
    if isinstance(rule, str):
        parts = rule.split(":")
        if len(parts) != 3 or parts[0] != "range":
            raise ValueError(f"bad base_fee_rule {rule!r}; expected 'range:START:STEP'")
        start, step = float(parts[1]), float(parts[2])
        if step <= 0.0:
            raise ValueError("base fee step must be positive")
        values = []
        v = start
        while v < f_bps - 1e-12:
            values.append(v)
            v += step
    else:
        values = sorted(v for v in rule if v < f_bps)
    values.append(f_bps)
    return values


def enumerate_cells(config: SweepConfig) -> list[CellSpec]:
    """Grid order: slope-major, then initial fee, then base fee ascending."""
    cells = []
    for m in config.slopes:
        for f_bps in config.initial_fee_grid_bps:
            for b_bps in base_fee_grid(f_bps, config.base_fee_rule):
                cells.append(CellSpec(f_bps=f_bps, b_bps=b_bps, m=m))
    return cells


def run_world(
    params: FeeParams,
    world_config: WorldConfig,
    seed: int,
    trace: list | None = None,
    keep_samples: bool = False,
) -> WorldResult:
    """Simulate one world: one arbitrage opportunity per step, then probes.

    Per step: advance the true price, let the arbitrageur place at most one
    trade, record the post-trade deviation, then evaluate the counterfactual
    probes in both directions for each configured impact quantile. Numeric
    domain errors propagate and abort the world.
    """
    pool = PoolState(world_config.x0, world_config.y0)
    path = generate_path(
        implied_price(pool), world_config.steps, world_config.sigma_bps, seed
    )
    gas = world_config.gas
    quantiles = world_config.probe_quantiles_bps

    fee_revenue = 0.0
    lvr_gross = 0.0
    n_trades = 0
    amm_prices: list[float] = []
    true_prices: list[float] = []
    slip_sq = {q: 0.0 for q in quantiles}
    samples: list[SlippageSample] = []

    for t in range(1, world_config.steps + 1):
        p_true = float(path.values[t])
        decision = optimal_trade(pool, params, ArbContext(p_true, gas))
        trade_dx = 0.0
        trade_fee = 0.0
        if decision.trade is not None:
            pool, receipt = apply_trade(pool, decision.trade, params)
            fee_revenue += receipt.fee
            lvr_gross += lvr_increment(receipt, p_true)
            n_trades += 1
            trade_dx = receipt.dx
            trade_fee = receipt.fee
        p_amm = implied_price(pool)
        amm_prices.append(p_amm)
        true_prices.append(p_true)
        for q in quantiles:
            for direction in (BUY, SELL):
                s = probe_slippage(pool, params, p_true, q, direction)
                slip_sq[q] += s * s
                if keep_samples:
                    samples.append(SlippageSample(direction, q, s))
        if trace is not None:
            trace.append(
                (t, p_true, p_amm, trade_dx, trade_fee, (p_amm - p_true) / p_true * 1e4)
            )

    n_slip = 2 * world_config.steps
    return WorldResult(
        loss=lvr_gross - fee_revenue,
        lvr_gross=lvr_gross,
        fee_revenue=fee_revenue,
        rms_deviation_bps=rms_deviation(amm_prices, true_prices),
        n_trades=n_trades,
        rms_slippage_by_quantile={q: math.sqrt(s / n_slip) for q, s in slip_sq.items()},
        seed=seed,
        params=params,
        slippage_samples=samples,
    )


def _run_task(args: tuple[CellSpec, WorldConfig, int, int]) -> WorldResult:
    cell, wc, world_index, seed = args
    try:
        return run_world(cell.params(), wc, seed)
    except Exception as exc:
        raise RuntimeError(
            f"world {world_index} of cell (f={cell.f_bps}bps, b={cell.b_bps}bps, "
            f"m={cell.m}) failed: {exc}"
        ) from exc


def run_sweep(
    config: SweepConfig, parallelism: int = 1
) -> tuple[list[AggregateRow], list[tuple[CellSpec, int, WorldResult]]]:
    """Run the full grid; returns aggregate rows and per-world rows.

    Results are reduced in (cell, world) order whatever the parallelism, so
    repeated runs of one config are identical byte for byte.
    """
    cells = enumerate_cells(config)
    wc = config.world_config()
    seeds = [world_seed(config.master_seed, w) for w in range(config.worlds)]
    tasks = [(cell, wc, w, seeds[w]) for cell in cells for w in range(config.worlds)]

    if parallelism <= 1:
        results = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            chunk = max(1, len(tasks) // (parallelism * 4))
            results = list(pool.map(_run_task, tasks, chunksize=chunk))

    world_rows: list[tuple[CellSpec, int, WorldResult]] = []
    aggregates: list[AggregateRow] = []
    for i, cell in enumerate(cells):
        cell_results = results[i * config.worlds : (i + 1) * config.worlds]
        for w, res in enumerate(cell_results):
            world_rows.append((cell, w, res))
        n = config.worlds
        aggregates.append(
            AggregateRow(
                f_bps=cell.f_bps,
                b_bps=cell.b_bps,
                m=cell.m,
                mean_loss=math.fsum(r.loss for r in cell_results) / n,
                mean_lvr_gross=math.fsum(r.lvr_gross for r in cell_results) / n,
                mean_fee_revenue=math.fsum(r.fee_revenue for r in cell_results) / n,
                mean_rms_deviation_bps=math.fsum(
                    r.rms_deviation_bps for r in cell_results
                )
                / n,
                mean_n_trades=math.fsum(r.n_trades for r in cell_results) / n,
                mean_rms_slippage={
                    q: math.fsum(r.rms_slippage_by_quantile[q] for r in cell_results) / n
                    for q in config.probe_quantiles_bps
                },
                worlds=n,
            )
        )
    return aggregates, world_rows


def pareto_extract(
    rows: Sequence[AggregateRow], x_metric: str, y_metric: str
) -> list[tuple[AggregateRow, bool]]:
    """Mark each row dominated iff some other row is strictly better on both."""
    points = [(row.metric(x_metric), row.metric(y_metric)) for row in rows]
    out = []
    for i, row in enumerate(rows):
        xi, yi = points[i]
        dominated = any(
            xj < xi and yj < yi for j, (xj, yj) in enumerate(points) if j != i
        )
        out.append((row, dominated))
    return out


PRESETS: dict[str, SweepConfig] = {
    # Small grid for acceptance-speed runs: slope -1 only, median probe.
    "desk": SweepConfig(
        x0=1e6,
        y0=1e6,
        initial_fee_grid_bps=(10.0, 20.0, 30.0, 40.0, 50.0),
        base_fee_rule="range:2:4",
        slopes=(-1.0,),
        worlds=10,
        steps=2000,
        sigma_bps=3.0,
        gas=0.01,
        master_seed=42,
        probe_quantiles_bps=(3.7774,),
    ),
    # Desk-scale grid with a second slope and the large-trade probe, used
    # to produce the committed plotting fixtures.
    "deskplot": SweepConfig(
        x0=1e6,
        y0=1e6,
        initial_fee_grid_bps=(10.0, 20.0, 30.0, 40.0, 50.0),
        base_fee_rule="range:2:4",
        slopes=(-1.0, -0.8),
        worlds=10,
        steps=2000,
        sigma_bps=3.0,
        gas=0.01,
        master_seed=42,
        probe_quantiles_bps=(3.7774, 10.7545),
    ),
    # Full replication grid (hours of CPU): 2..50 bps fees, three slopes,
    # fifty worlds of twenty thousand steps.
    "paper": SweepConfig(
        x0=1e6,
        y0=1e6,
        initial_fee_grid_bps=tuple(float(v) for v in range(2, 51, 4)),
        base_fee_rule="range:2:4",
        slopes=(-1.0, -0.8, -1.2),
        worlds=50,
        steps=20000,
        sigma_bps=3.0,
        gas=0.01,
        master_seed=20230101,
        probe_quantiles_bps=(3.7774, 10.7545),
    ),
}
