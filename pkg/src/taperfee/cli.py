"""Command-line entry point and the on-disk formats.

Subcommands: fee (spot-check one fee), world (single simulation), sweep
(full grid -> worlds.csv + aggregate.csv + manifest.json), quantiles
(print the embedded impact table). Floats are serialized with 17
significant digits so CSVs round-trip bit-exactly. Exit codes: 0 success,
1 usage/config error, 2 runtime simulation failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from .fees import FeeParams, classify_branch, quadrature_fee, thresholds, total_fee
from .pool import PoolState
from .prices import world_seed
from .probes import DEFAULT_IMPACT_QUANTILES
from .sweep import (
    AggregateRow,
    CellSpec,
    PRESETS,
    SweepConfig,
    WorldResult,
    pareto_extract,
    run_sweep,
    run_world,
)

SCHEMA_VERSION = 1

_CONFIG_KEYS = {
    "schema_version": int,
    "pool_x": (int, float),
    "pool_y": (int, float),
    "initial_fee_grid_bps": list,
    "base_fee_rule": (list, str),
    "slopes": list,
    "worlds": int,
    "steps": int,
    "sigma_bps": (int, float),
    "gas": (int, float),
    "master_seed": int,
    "probe_quantiles_bps": list,
}


class ConfigError(ValueError):
    pass


def f17(v: float) -> str:
    return format(float(v), ".17g")


def load_config(path: str | Path) -> SweepConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(raw)


def parse_config(raw: dict) -> SweepConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - set(_CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    missing = set(_CONFIG_KEYS) - set(raw)
    if missing:
        raise ConfigError(f"missing config keys: {sorted(missing)}")
    for key, types in _CONFIG_KEYS.items():
        if not isinstance(raw[key], types) or isinstance(raw[key], bool):
            raise ConfigError(f"config key {key!r} has wrong type")
    if raw["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {raw['schema_version']}")
    rule = raw["base_fee_rule"]
    try:
        return SweepConfig(
            x0=float(raw["pool_x"]),
            y0=float(raw["pool_y"]),
            initial_fee_grid_bps=tuple(float(v) for v in raw["initial_fee_grid_bps"]),
            base_fee_rule=rule if isinstance(rule, str) else tuple(float(v) for v in rule),
            slopes=tuple(float(v) for v in raw["slopes"]),
            worlds=raw["worlds"],
            steps=raw["steps"],
            sigma_bps=float(raw["sigma_bps"]),
            gas=float(raw["gas"]),
            master_seed=raw["master_seed"],
            probe_quantiles_bps=tuple(float(v) for v in raw["probe_quantiles_bps"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def config_to_dict(config: SweepConfig) -> dict:
    rule = config.base_fee_rule
    return {
        "schema_version": SCHEMA_VERSION,
        "pool_x": config.x0,
        "pool_y": config.y0,
        "initial_fee_grid_bps": list(config.initial_fee_grid_bps),
        "base_fee_rule": rule if isinstance(rule, str) else list(rule),
        "slopes": list(config.slopes),
        "worlds": config.worlds,
        "steps": config.steps,
        "sigma_bps": config.sigma_bps,
        "gas": config.gas,
        "master_seed": config.master_seed,
        "probe_quantiles_bps": list(config.probe_quantiles_bps),
    }


def _slip_columns(quantiles: tuple[float, ...], prefix: str = "") -> list[str]:
    return [f"{prefix}rms_slippage_q{format(q, '.12g')}" for q in quantiles]


def worlds_csv_lines(
    rows: list[tuple[CellSpec, int, WorldResult]], quantiles: tuple[float, ...]
) -> list[str]:
    header = [
        "f_bps", "b_bps", "m", "world_index", "seed",
        "loss", "lvr_gross", "fee_revenue", "rms_deviation_bps", "n_trades",
    ] + _slip_columns(quantiles)
    lines = [",".join(header)]
    for cell, w, res in rows:
        fields = [
            f17(cell.f_bps), f17(cell.b_bps), f17(cell.m), str(w), str(res.seed),
            f17(res.loss), f17(res.lvr_gross), f17(res.fee_revenue),
            f17(res.rms_deviation_bps), str(res.n_trades),
        ] + [f17(res.rms_slippage_by_quantile[q]) for q in quantiles]
        lines.append(",".join(fields))
    return lines


def aggregate_csv_lines(rows: list[AggregateRow], quantiles: tuple[float, ...]) -> list[str]:
    header = [
        "f_bps", "b_bps", "m",
        "mean_loss", "mean_lvr_gross", "mean_fee_revenue",
        "mean_rms_deviation_bps", "mean_n_trades",
    ] + _slip_columns(quantiles, prefix="mean_") + ["worlds"]
    lines = [",".join(header)]
    for row in rows:
        fields = [
            f17(row.f_bps), f17(row.b_bps), f17(row.m),
            f17(row.mean_loss), f17(row.mean_lvr_gross), f17(row.mean_fee_revenue),
            f17(row.mean_rms_deviation_bps), f17(row.mean_n_trades),
        ] + [f17(row.mean_rms_slippage[q]) for q in quantiles] + [str(row.worlds)]
        lines.append(",".join(fields))
    return lines


def write_manifest(out_dir: Path, config: SweepConfig) -> None:
    config_dict = config_to_dict(config)
    canonical = json.dumps(config_dict, sort_keys=True, separators=(",", ":"))
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "master_seed": config.master_seed,
        "config_sha256": hashlib.sha256(canonical.encode()).hexdigest(),
        "config": config_dict,
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _config_from_args(args) -> SweepConfig:
    if args.config is not None:
        return load_config(args.config)
    if args.preset is not None:
        if args.preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {args.preset!r}; have {sorted(PRESETS)}"
            )
        return PRESETS[args.preset]
    raise ConfigError("one of --config or --preset is required")


def cmd_fee(args) -> int:
    pool = PoolState(args.x, args.y)
    params = FeeParams.from_bps(args.f_bps, args.b_bps, args.m)
    fee = total_fee(pool, params, args.dx)
    print(f"total fee: {f17(fee)} Y")
    print(f"branch: {classify_branch(pool, params, args.dx)}")
    if not params.is_constant:
        th = thresholds(pool, params)
        print(f"k_u={f17(th.k_u)} k_l={f17(th.k_l)}")
        print(f"dx_u={f17(th.dx_u)} dx_l={f17(th.dx_l)}")
    if args.verify:
        q = quadrature_fee(pool, params, args.dx, n_steps=args.verify_steps)
        rel = abs(fee - q) / max(abs(q), 1e-12)
        print(f"quadrature (n={args.verify_steps}): {f17(q)}  rel diff: {rel:.3e}")
    return 0


def cmd_world(args) -> int:
    config = _config_from_args(args)
    params = FeeParams.from_bps(args.f_bps, args.b_bps, args.m)
    seed = args.seed if args.seed is not None else world_seed(config.master_seed, 0)
    trace: list | None = [] if args.trace else None
    result = run_world(params, config.world_config(), seed, trace=trace)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cell = CellSpec(f_bps=args.f_bps, b_bps=args.b_bps, m=args.m)
    lines = worlds_csv_lines([(cell, 0, result)], config.probe_quantiles_bps)
    (out_dir / "world.csv").write_text("\n".join(lines) + "\n")
    if trace is not None:
        tlines = ["step,true_price,amm_price,trade_dx,fee,deviation_bps"]
        for step, p_true, p_amm, dx, fee, dev in trace:
            tlines.append(
                f"{step},{f17(p_true)},{f17(p_amm)},{f17(dx)},{f17(fee)},{f17(dev)}"
            )
        (out_dir / "trace.csv").write_text("\n".join(tlines) + "\n")
    print(
        f"world seed={seed} trades={result.n_trades} loss={f17(result.loss)} "
        f"fee_revenue={f17(result.fee_revenue)} "
        f"rms_deviation_bps={f17(result.rms_deviation_bps)}"
    )
    return 0


def cmd_sweep(args) -> int:
    config = _config_from_args(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    artifacts = [out_dir / "worlds.csv", out_dir / "aggregate.csv", out_dir / "manifest.json"]
    try:
        aggregates, world_rows = run_sweep(config, parallelism=args.threads)
        (out_dir / "worlds.csv").write_text(
            "\n".join(worlds_csv_lines(world_rows, config.probe_quantiles_bps)) + "\n"
        )
        (out_dir / "aggregate.csv").write_text(
            "\n".join(aggregate_csv_lines(aggregates, config.probe_quantiles_bps)) + "\n"
        )
        write_manifest(out_dir, config)
    except Exception as exc:
        for path in artifacts:
            path.unlink(missing_ok=True)
        print(f"sweep failed: {exc}", file=sys.stderr)
        return 2

    flagged = pareto_extract(aggregates, "mean_rms_deviation_bps", "mean_loss")
    frontier = [row for row, dominated in flagged if not dominated]
    print(f"cells: {len(aggregates)}  worlds per cell: {config.worlds}")
    print(f"frontier (loss vs deviation): {len(frontier)} of {len(aggregates)} rows")
    for row in frontier:
        print(
            f"  f={row.f_bps:g}bps b={row.b_bps:g}bps m={row.m:g} "
            f"loss={row.mean_loss:.4f} rms_dev={row.mean_rms_deviation_bps:.4f}bps"
        )
    return 0


def cmd_quantiles(args) -> int:
    print("quantile,impact_bps")
    for q, impact in DEFAULT_IMPACT_QUANTILES.entries:
        print(f"{format(q, '.12g')},{format(impact, '.12g')}")
    return 0


class _Parser(argparse.ArgumentParser):
    # spec'd exit codes: usage errors are 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="taperfee", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_fee = sub.add_parser("fee", help="price one trade's fee")
    p_fee.add_argument("--x", type=float, required=True)
    p_fee.add_argument("--y", type=float, required=True)
    p_fee.add_argument("--f-bps", type=float, required=True)
    p_fee.add_argument("--b-bps", type=float, required=True)
    p_fee.add_argument("--m", type=float, required=True)
    p_fee.add_argument("--dx", type=float, required=True)
    p_fee.add_argument("--verify", action="store_true", help="print quadrature cross-check")
    p_fee.add_argument("--verify-steps", type=int, default=100_000)
    p_fee.set_defaults(func=cmd_fee)

    p_world = sub.add_parser("world", help="simulate one world")
    p_world.add_argument("--config", default=None)
    p_world.add_argument("--preset", default=None)
    p_world.add_argument("--f-bps", type=float, required=True)
    p_world.add_argument("--b-bps", type=float, required=True)
    p_world.add_argument("--m", type=float, required=True)
    p_world.add_argument("--seed", type=int, default=None)
    p_world.add_argument("--out", default=".")
    p_world.add_argument("--trace", action="store_true", help="write per-step trace.csv")
    p_world.set_defaults(func=cmd_world)

    p_sweep = sub.add_parser("sweep", help="run the full experiment grid")
    p_sweep.add_argument("--config", default=None)
    p_sweep.add_argument("--preset", default=None)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--threads", type=int, default=1)
    p_sweep.set_defaults(func=cmd_sweep)

    p_quant = sub.add_parser("quantiles", help="print the embedded impact quantile table")
    p_quant.set_defaults(func=cmd_quantiles)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # simulation/runtime failure
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
