"""Command-line front end: run, sweep, report, and validate subcommands."""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import engine, stats
from .config import (ConfigError, ScenarioConfig, PRESETS, SWEEP_AXES,
                     campaign_label, expand_preset, parse_config_file,
                     serialize_config, _coerce)

OUT_DIR_ENV = "UDNSIM_OUT"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="udnsim",
        description="Deterministic downlink simulator for ultra-dense "
                    "small-cell networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one campaign and write reports")
    _add_config_args(run_p)
    _add_out_arg(run_p)
    run_p.add_argument("--workers", type=int, default=1,
                       help="worker processes for drops (output is "
                            "identical for any count)")
    run_p.add_argument("--trace", action="store_true",
                       help="dump per-subframe allocations of drop 0")
    run_p.add_argument("--dump-layout", action="store_true",
                       help="dump BS positions and height")
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep", help="run a preset or one-axis sweep")
    _add_config_args(sweep_p)
    _add_out_arg(sweep_p)
    sweep_p.add_argument("--workers", type=int, default=1)
    group = sweep_p.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=sorted(PRESETS),
                       help="named experiment preset")
    group.add_argument("--axis", choices=sorted(SWEEP_AXES),
                       help="config axis to sweep")
    sweep_p.add_argument("--values",
                         help="comma-separated values for --axis")
    sweep_p.set_defaults(func=cmd_sweep)

    report_p = sub.add_parser("report",
                              help="recompute summary/CDFs from a stored "
                                   "campaign.csv")
    report_p.add_argument("--campaign", required=True,
                          help="path to a campaign.csv")
    _add_out_arg(report_p)
    report_p.set_defaults(func=cmd_report)

    validate_p = sub.add_parser("validate",
                                help="check a config and echo the resolved "
                                     "values without running")
    _add_config_args(validate_p)
    validate_p.set_defaults(func=cmd_validate)
    return parser


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--isd", type=float, help="inter-site distance in meters")
    p.add_argument("--n-ue", type=int, help="UEs in the serving cell")
    p.add_argument("--n-tiers", type=int, help="interfering tiers")
    p.add_argument("--scheduler", choices=("pf", "rr1", "rr2", "rr3", "rr4"))
    p.add_argument("--fading-model", choices=("rician", "rayleigh"))
    p.add_argument("--n-drops", type=int, help="Monte-Carlo drops")
    p.add_argument("--subframes", type=int, help="subframes per drop")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override any other config field")


def _add_out_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out",
                   default=os.environ.get(OUT_DIR_ENV, "out"),
                   help=f"output directory (default $${OUT_DIR_ENV} or ./out)")


_FLAG_FIELDS = (("isd", "isd_m"), ("n_ue", "n_ue"), ("n_tiers", "n_tiers"),
                ("scheduler", "scheduler"), ("fading_model", "fading_model"),
                ("n_drops", "n_drops"), ("subframes", "n_subframes"),
                ("seed", "master_seed"))


def resolve_config(args) -> ScenarioConfig:
    """Defaults, then config file, then typed flags, then --set overrides."""
    cfg = ScenarioConfig()
    if args.config:
        cfg = parse_config_file(args.config, base=cfg)
    overrides = {}
    for arg_name, field_name in _FLAG_FIELDS:
        value = getattr(args, arg_name, None)
        if value is not None:
            overrides[field_name] = value
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        if key not in {f.name for f in
                       __import__("dataclasses").fields(ScenarioConfig)}:
            raise ConfigError(f"--set: unknown key {key!r}")
        overrides[key] = _coerce(key, value)
    return cfg.replace(**overrides)


def _write_campaign_outputs(out_dir: str, campaign) -> None:
    os.makedirs(out_dir, exist_ok=True)
    stats.write_campaign_csv(os.path.join(out_dir, "campaign.csv"), [campaign])
    stats.write_summary_csv(os.path.join(out_dir, "summary.csv"), [campaign])
    stats.write_cdf_csv(os.path.join(out_dir, "cdf_ue_tput_bps.csv"),
                        stats.build_cdf(campaign.ue_tput_samples))
    stats.write_cdf_csv(os.path.join(out_dir, "cdf_ue_sinr_db.csv"),
                        stats.build_cdf(campaign.ue_sinr_db_samples))


def cmd_run(args) -> int:
    cfg = resolve_config(args)
    campaign = engine.run_campaign(cfg, n_workers=args.workers)
    _write_campaign_outputs(args.out, campaign)
    if args.dump_layout:
        _dump_layout(os.path.join(args.out, "layout.csv"), cfg)
    if args.trace:
        _dump_trace(os.path.join(args.out, "trace.csv"), cfg)
    print(f"wrote campaign reports to {args.out}")
    return 0


def _dump_layout(path: str, cfg: ScenarioConfig) -> None:
    from . import geometry
    layout = geometry.build_hex_grid(cfg.isd_m, cfg.n_tiers,
                                     alpha_deg=cfg.alpha_deg,
                                     h_ue_m=cfg.h_ue_m)
    rows = [(i, float(x), float(y), layout.bs_height_m,
             int(i == layout.serving_index))
            for i, (x, y) in enumerate(layout.bs_positions)]
    stats._write_rows(path, ("bs_id", "x_m", "y_m", "height_m", "is_serving"),
                      rows)


def _dump_trace(path: str, cfg: ScenarioConfig) -> None:
    drop = engine.run_drop(cfg, 0, collect_trace=True)
    rows = []
    for t, rb_to_ue in enumerate(drop.trace.allocations):
        for rb, ue in enumerate(rb_to_ue):
            rows.append((t, rb, int(ue),
                         float(drop.trace.sinr[t, ue, rb]) if ue >= 0 else 0.0))
    stats._write_rows(path, ("subframe", "rb", "ue_id", "sinr_linear"), rows)


def cmd_sweep(args) -> int:
    base = resolve_config(args)
    if args.preset:
        labeled = expand_preset(args.preset, base)
        gain_spec = PRESETS[args.preset].gain
    else:
        if not args.values:
            raise ConfigError("--axis requires --values")
        values = _parse_axis_values(args.axis, args.values)
        field_name = SWEEP_AXES[args.axis]
        labeled = [(campaign_label(base.replace(**{field_name: v})),
                    base.replace(**{field_name: v})) for v in values]
        gain_spec = None

    campaigns = []
    os.makedirs(args.out, exist_ok=True)
    for label, cfg in labeled:
        campaign = engine.run_campaign(cfg, n_workers=args.workers)
        campaigns.append(campaign)
        _write_campaign_outputs(os.path.join(args.out, label), campaign)
    stats.write_campaign_csv(os.path.join(args.out, "campaign.csv"), campaigns)
    stats.write_summary_csv(os.path.join(args.out, "summary.csv"), campaigns)
    if gain_spec is not None:
        rows = stats.pair_gain_rows(campaigns, gain_spec.axis,
                                    gain_spec.baseline, gain_spec.comparison,
                                    gain_spec.metric)
        stats.write_gain_table_csv(os.path.join(args.out, "gain_table.csv"),
                                   rows)
    print(f"wrote {len(campaigns)} campaigns to {args.out}")
    return 0


def _parse_axis_values(axis: str, raw: str) -> list:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ConfigError("--values: no values given")
    if axis in ("scheduler", "fading_model"):
        return parts
    if axis in ("n_ue", "n_tiers"):
        return [int(p) for p in parts]
    return [float(p) for p in parts]


def cmd_report(args) -> int:
    stored = stats.read_campaign_csv(args.campaign)
    stats.write_report(args.out, stored)
    print(f"wrote report to {args.out}")
    return 0


def cmd_validate(args) -> int:
    cfg = resolve_config(args)
    sys.stdout.write(serialize_config(cfg))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
