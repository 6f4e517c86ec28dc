"""Command-line interface for the experiment harness.

Subcommands map one-to-one onto the harness runners::

    coopbeam alpha-sweep --trials 100000 --seed 7 --out fig_alpha.csv
    coopbeam snr-sweep --alpha 0.3 --alpha 0.4 --snr-db-range 2:12:1
    coopbeam corr-sweep --corr 0 --corr 0.25 --corr 0.5 --corr 0.75
    coopbeam point --alpha 0.4 --snr-db 4

Flags override entries of an optional key=value config file (--config);
COOPBEAM_OUTDIR supplies the default output directory only.  Exit status is
0 on success, 1 on an infeasible single point, 2 on invalid configuration.
"""

from __future__ import annotations

import argparse
import os
import sys

from .harness import (
    ExperimentConfig,
    format_report,
    report_timing,
    run_alpha_sweep,
    run_corr_sweep,
    run_single_point,
    run_snr_sweep,
)

_RUNNERS = {
    "alpha_sweep": run_alpha_sweep,
    "snr_sweep": run_snr_sweep,
    "corr_sweep": run_corr_sweep,
}

OUTDIR_ENV = "COOPBEAM_OUTDIR"


def parse_range(text: str) -> list[float]:
    """Parse an inclusive lo:hi:step grid specification."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected lo:hi:step, got {text!r}"
        )
    lo, hi, step = (float(p) for p in parts)
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    values = []
    v = lo
    while v <= hi + step * 1e-9:
        values.append(round(v, 10))
        v += step
    return values


def load_config_file(path: str) -> dict:
    """Read a key=value config file; '#' starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=int, default=None,
                        help="receive antennas at the fusion center")
    parser.add_argument("--ratio-ptotal-ps", type=float, default=None,
                        help="P_total / P_s budget ratio (K = alpha * ratio)")
    parser.add_argument("--rtr", type=float, default=None,
                        help="transmission rate R_tr (bits/s/Hz)")
    parser.add_argument("--rbr", type=float, default=None,
                        help="broadcast rate R_br (bits/s/Hz)")
    parser.add_argument("--p-total", type=float, default=None,
                        help="total power budget (broadcast-noise units)")
    parser.add_argument("--sigma-nbr2", type=float, default=None,
                        help="broadcast-channel noise variance")
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--gain-mode", choices=("frobenius", "vector"),
                        default=None)
    parser.add_argument("--bound-variant",
                        choices=("printed", "complex_convention"),
                        default=None)
    parser.add_argument("--workers", type=int, default=None,
                        help="Monte Carlo worker threads (results identical "
                             "for any count)")
    parser.add_argument("--config", default=None,
                        help="key=value config file; flags take precedence")
    parser.add_argument("--out", default=None, help="output CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coopbeam",
        description="Monte Carlo outage experiments for two-phase "
                    "cooperative cluster transmission",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_alpha = sub.add_parser("alpha-sweep",
                             help="outage vs power split alpha, per SNR")
    p_snr = sub.add_parser("snr-sweep",
                           help="outage vs SNR per allocation + MIMO baseline")
    p_corr = sub.add_parser("corr-sweep",
                            help="outage vs receive correlation level")
    p_point = sub.add_parser("point", help="one (alpha, SNR) point report")

    for p in (p_alpha, p_snr, p_corr, p_point):
        _add_common(p)
        group = p.add_mutually_exclusive_group()
        group.add_argument("--alpha", type=float, action="append",
                           default=None, help="explicit alpha (repeatable)")
        group.add_argument("--alpha-range", type=parse_range, default=None,
                           metavar="LO:HI:STEP")
        sgroup = p.add_mutually_exclusive_group()
        sgroup.add_argument("--snr-db", type=float, action="append",
                            default=None, help="explicit SNR in dB "
                            "(repeatable)")
        sgroup.add_argument("--snr-db-range", type=parse_range, default=None,
                            metavar="LO:HI:STEP")

    p_corr.add_argument("--corr", type=float, action="append", default=None,
                        help="exponential-model r value (repeatable)")
    p_snr.add_argument("--no-baseline", action="store_true", default=None,
                       help="omit the MIMO baseline series")
    return parser


_CONFIG_KEYS = {
    "m": int, "ratio_ptotal_ps": float, "rtr": float, "rbr": float,
    "p_total": float, "sigma_nbr2": float, "trials": int, "seed": int,
    "gain_mode": str, "bound_variant": str, "workers": int, "out": str,
    "alpha": lambda s: [float(v) for v in s.split(",")],
    "alpha_range": parse_range,
    "snr_db": lambda s: [float(v) for v in s.split(",")],
    "snr_db_range": parse_range,
    "corr": lambda s: [float(v) for v in s.split(",")],
    "no_baseline": lambda s: s.lower() in ("1", "true", "yes"),
}


def _merge(args: argparse.Namespace) -> dict:
    """File values first, then any flag that was actually given."""
    merged: dict = {}
    if args.config:
        for key, raw in load_config_file(args.config).items():
            if key not in _CONFIG_KEYS:
                raise ValueError(f"unknown config key {key!r}")
            merged[key] = _CONFIG_KEYS[key](raw)
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    return merged


def _default_out(experiment: str) -> str:
    outdir = os.environ.get(OUTDIR_ENV, "")
    name = experiment.replace("_", "-") + ".csv"
    return os.path.join(outdir, name) if outdir else name


def _to_experiment_config(experiment: str, merged: dict) -> ExperimentConfig:
    alpha_grid = merged.get("alpha") or merged.get("alpha_range")
    snr_grid = merged.get("snr_db") or merged.get("snr_db_range")
    kwargs = dict(
        experiment=experiment,
        alpha_grid=alpha_grid,
        snr_db_grid=snr_grid,
        corr_r_grid=merged.get("corr"),
    )
    for key, field in (("m", "m"), ("ratio_ptotal_ps", "ratio_ptotal_ps"),
                       ("rtr", "r_tr"), ("rbr", "r_br"),
                       ("p_total", "p_total"), ("sigma_nbr2", "sigma_nbr2"),
                       ("trials", "trials"), ("seed", "seed"),
                       ("gain_mode", "gain_mode"),
                       ("bound_variant", "bound_variant")):
        if key in merged:
            kwargs[field] = merged[key]
    if merged.get("no_baseline"):
        kwargs["include_baseline"] = False
    if experiment == "single_point":
        kwargs["output_path"] = merged.get("out")
    else:
        kwargs["output_path"] = merged.get("out") or _default_out(experiment)
    return ExperimentConfig(**kwargs)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    experiment = args.command.replace("-", "_")
    if experiment == "point":
        experiment = "single_point"
    try:
        merged = _merge(args)
        if experiment == "single_point":
            if "alpha" not in merged and "alpha_range" not in merged:
                raise ValueError("point requires --alpha")
            if "snr_db" not in merged and "snr_db_range" not in merged:
                raise ValueError("point requires --snr-db")
        cfg = _to_experiment_config(experiment, merged)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    workers = merged.get("workers", 1)

    if experiment == "single_point":
        report = run_single_point(cfg, workers=workers)
        text = format_report(report)
        if cfg.output_path:
            with open(cfg.output_path, "w") as fh:
                fh.write(text)
        print(text, end="")
        report_timing(report["manifest"])
        if not report["feasible"]:
            print("infeasible: broadcast power bound unmet", file=sys.stderr)
            return 1
        return 0

    result = _RUNNERS[experiment](cfg, workers=workers)
    report_timing(result.manifest)
    print(f"wrote {cfg.output_path} ({result.manifest.row_count} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
