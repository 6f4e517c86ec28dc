"""Experiment harness: seeded sweeps, CSV emission, and run manifests.

Conventions used by every experiment
------------------------------------
* The x-axis "overall SNR" is P_total / sigma_n^2 in dB.  The total budget
  P_total is held fixed (default 60, in units of the broadcast noise
  variance) and the fusion-center noise variance is derived per grid point
  as sigma_n2 = P_total / 10^(snr_db/10).  Outage depends only on the
  ratio, so results are invariant to the absolute budget; broadcast
  feasibility (which needs an absolute scale) is checked against the
  per-node broadcast power P_s = P_total / ratio_ptotal_ps.
* Grid point i, block b draws from numpy default_rng([seed, i, b]) with
  8192-trial blocks; the outage reduction is an integer count, so output
  bytes do not depend on the worker count.
* CSV files carry a '#'-prefixed manifest header.  Wall-clock time is
  deliberately NOT written to the file (it would break byte-for-byte
  reproducibility); runners report it separately.
"""

from __future__ import annotations

import math
import sys
import time
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ._blocks import BLOCK_SIZE
from ._version import __version__
from .baseline import MimoConfig, mimo_outage
from .beamform import GAIN_MODES
from .channel import exponential_correlation
from .outage import (
    BOUND_VARIANTS,
    OutageConfig,
    analytical_outage,
    monte_carlo_outage,
)
from .powerplan import (
    BroadcastSpec,
    InfeasibleAllocationError,
    broadcast_feasible,
    broadcast_power_bound,
    cluster_size,
    split,
)

EXPERIMENTS = ("alpha_sweep", "snr_sweep", "corr_sweep", "single_point")

_DEFAULT_ALPHA_GRID = tuple(round(0.2 + 0.05 * i, 2) for i in range(13))
_DEFAULT_SNR_GRID = tuple(float(s) for s in range(2, 13))
_DEFAULT_CORR_GRID = (0.0, 0.25, 0.5, 0.75)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full parameterization of one experiment run.

    Grids left as None take the experiment's defaults: the alpha sweep scans
    alpha 0.2..0.8 step 0.05 over SNR 2..12 dB; the SNR sweep compares the
    alpha = 0.3 and 0.4 allocations (plus the MIMO baseline); the
    correlation sweep holds alpha = 0.3 and scans r in {0, 0.25, 0.5, 0.75}.
    """

    experiment: str
    m: int = 3
    ratio_ptotal_ps: float = 15.0
    r_br: float = 2.0
    r_tr: float = 3.0
    alpha_grid: Optional[Sequence[float]] = None
    snr_db_grid: Optional[Sequence[float]] = None
    corr_r_grid: Optional[Sequence[float]] = None
    trials: int = 100_000
    seed: int = 1234
    gain_mode: str = "frobenius"
    bound_variant: str = "printed"
    output_path: Optional[str] = None
    p_total: float = 60.0
    sigma_nbr2: float = 1.0
    include_baseline: bool = True

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.ratio_ptotal_ps <= 0 or self.p_total <= 0 or self.sigma_nbr2 <= 0:
            raise ValueError("powers and ratios must be positive")
        if self.r_br <= 0:
            raise ValueError("r_br must be positive")
        if self.r_tr < 0:
            raise ValueError("r_tr must be nonnegative")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.gain_mode not in GAIN_MODES:
            raise ValueError(f"unknown gain mode {self.gain_mode!r}")
        if self.bound_variant not in BOUND_VARIANTS:
            raise ValueError(f"unknown bound variant {self.bound_variant!r}")
        object.__setattr__(self, "alpha_grid",
                           self._grid(self.alpha_grid, self._default_alphas()))
        object.__setattr__(self, "snr_db_grid",
                           self._grid(self.snr_db_grid, _DEFAULT_SNR_GRID))
        object.__setattr__(self, "corr_r_grid",
                           self._grid(self.corr_r_grid, _DEFAULT_CORR_GRID))
        if self.experiment == "single_point":
            if len(self.alpha_grid) != 1 or len(self.snr_db_grid) != 1:
                raise ValueError(
                    "single_point needs exactly one alpha and one snr_db"
                )
        for alpha in self.alpha_grid:
            if not 0.0 < alpha < 1.0:
                raise ValueError(f"alpha {alpha} outside (0, 1)")
        for r in self.corr_r_grid:
            if not 0.0 <= r < 1.0:
                raise ValueError(f"corr r {r} outside [0, 1)")

    def _default_alphas(self):
        if self.experiment == "alpha_sweep":
            return _DEFAULT_ALPHA_GRID
        if self.experiment == "snr_sweep":
            return (0.3, 0.4)
        return (0.3,)

    @staticmethod
    def _grid(value, default):
        if value is None:
            return tuple(default)
        grid = tuple(float(v) for v in value)
        if not grid:
            raise ValueError("grids must be nonempty")
        return grid

    @property
    def p_s(self) -> float:
        return self.p_total / self.ratio_ptotal_ps

    @property
    def broadcast_spec(self) -> BroadcastSpec:
        return BroadcastSpec(r_br=self.r_br, sigma_nbr2=self.sigma_nbr2,
                             p_s=self.p_s)

    def sigma_n2_at(self, snr_db: float) -> float:
        return self.p_total / (10.0 ** (snr_db / 10.0))


@dataclass
class RunManifest:
    """Everything needed to reproduce a run byte-exactly, plus timing.

    ``header_lines`` renders the deterministic subset for the CSV header;
    wall_clock_s is kept out of the file on purpose.
    """

    config: dict
    version: str
    master_seed: int
    subseed_rule: str
    row_count: int
    wall_clock_s: float = 0.0
    extra: dict = field(default_factory=dict)

    def header_lines(self) -> list[str]:
        lines = [f"# coopbeam {self.version}"]
        for key, value in self.config.items():
            lines.append(f"# {key} = {value}")
        lines.append(f"# master_seed = {self.master_seed}")
        lines.append(f"# subseed_rule = {self.subseed_rule}")
        lines.append(f"# rows = {self.row_count}")
        for key, value in self.extra.items():
            lines.append(f"# {key} = {value}")
        return lines


@dataclass
class SweepResult:
    columns: tuple
    rows: list
    summary: dict
    manifest: RunManifest
    csv_text: str


_SUBSEED_RULE = (f"point i, block b -> default_rng([seed, i, b]), "
                 f"block_size={BLOCK_SIZE}")


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _config_echo(cfg: ExperimentConfig) -> dict:
    echo = {
        "experiment": cfg.experiment,
        "m": cfg.m,
        "ratio_ptotal_ps": _fmt(cfg.ratio_ptotal_ps),
        "r_br": _fmt(cfg.r_br),
        "r_tr": _fmt(cfg.r_tr),
        "p_total": _fmt(cfg.p_total),
        "sigma_nbr2": _fmt(cfg.sigma_nbr2),
        "trials": cfg.trials,
        "gain_mode": cfg.gain_mode,
        "bound_variant": cfg.bound_variant,
        "alpha_grid": ",".join(_fmt(a) for a in cfg.alpha_grid),
        "snr_db_grid": ",".join(_fmt(s) for s in cfg.snr_db_grid),
        "overall_snr_definition": "p_total / sigma_n2, in dB",
    }
    if cfg.experiment == "corr_sweep":
        echo["corr_r_grid"] = ",".join(_fmt(r) for r in cfg.corr_r_grid)
    if cfg.experiment == "snr_sweep":
        echo["include_baseline"] = int(cfg.include_baseline)
    return echo


def _render_csv(manifest: RunManifest, columns, rows) -> str:
    lines = manifest.header_lines()
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _write_output(cfg: ExperimentConfig, text: str) -> None:
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)


def _point(cfg: ExperimentConfig, alpha: float, snr_db: float, index: int,
           correlation=None):
    """Evaluate one (alpha, snr) grid point; returns the full record."""
    sigma_n2 = cfg.sigma_n2_at(snr_db)
    alloc = split(cfg.p_total, alpha)
    try:
        k = cluster_size(alpha, cfg.p_total, cfg.p_s)
    except InfeasibleAllocationError:
        return {"snr_db": snr_db, "alpha": alpha, "k": 0, "feasible": False,
                "analytical": math.nan, "alloc": alloc, "sigma_n2": sigma_n2}
    feasible = broadcast_feasible(alloc.p1, k, cfg.broadcast_spec)
    mc_cfg = OutageConfig(r_tr=cfg.r_tr, p2=alloc.p2, sigma_n2=sigma_n2,
                          m=cfg.m, k=k, trials=cfg.trials,
                          seed=(cfg.seed, index), gain_mode=cfg.gain_mode,
                          correlation=correlation)
    analytical = analytical_outage(cfg.m, k, cfg.r_tr, alloc.p2, sigma_n2,
                                   variant=cfg.bound_variant)
    return {"snr_db": snr_db, "alpha": alpha, "k": k, "feasible": feasible,
            "mc_cfg": mc_cfg, "analytical": analytical, "alloc": alloc,
            "sigma_n2": sigma_n2}


def run_alpha_sweep(cfg: ExperimentConfig, workers: int = 1) -> SweepResult:
    """Outage vs power split over an (alpha x SNR) grid, with the bound.

    Rows: (snr_db, alpha, k, feasible, p_out_mc, std_err, p_out_analytical).
    Infeasible allocations are flagged (feasible = 0), never dropped, and do
    not participate in the per-SNR alpha* summary.
    """
    start = time.perf_counter()
    columns = ("snr_db", "alpha", "k", "feasible", "p_out_mc", "std_err",
               "p_out_analytical")
    snrs = sorted(cfg.snr_db_grid)
    alphas = sorted(cfg.alpha_grid)
    rows = []
    best: dict[float, tuple] = {}
    index = 0
    for snr_db in snrs:
        for alpha in alphas:
            rec = _point(cfg, alpha, snr_db, index)
            index += 1
            if "mc_cfg" not in rec:
                rows.append((snr_db, alpha, 0, 0, math.nan, math.nan,
                             math.nan))
                continue
            est = monte_carlo_outage(rec["mc_cfg"], workers=workers)
            rows.append((snr_db, alpha, rec["k"], int(rec["feasible"]),
                         est.probability, est.std_error, rec["analytical"]))
            if rec["feasible"]:
                key = (est.probability, alpha)
                if snr_db not in best or key < best[snr_db][:2]:
                    best[snr_db] = (est.probability, alpha, rec["k"])
    summary = {snr: {"alpha_star": b[1], "k_star": b[2], "p_out_star": b[0]}
               for snr, b in best.items()}
    extra = {}
    for snr_db in snrs:
        if snr_db in summary:
            s = summary[snr_db]
            extra[f"alpha_star[snr_db={_fmt(snr_db)}]"] = (
                f"{_fmt(s['alpha_star'])} (k={s['k_star']}, "
                f"p_out_mc={_fmt(s['p_out_star'])})"
            )
    _check_summary(rows, summary)
    manifest = RunManifest(config=_config_echo(cfg), version=__version__,
                           master_seed=cfg.seed, subseed_rule=_SUBSEED_RULE,
                           row_count=len(rows), extra=extra)
    manifest.wall_clock_s = time.perf_counter() - start
    text = _render_csv(manifest, columns, rows)
    _write_output(cfg, text)
    return SweepResult(columns, rows, summary, manifest, text)


def _check_summary(rows, summary) -> None:
    # cross-check at write time: alpha* must be its SNR group's feasible minimum
    for snr, s in summary.items():
        group = [r for r in rows if r[0] == snr and r[3] == 1]
        assert s["p_out_star"] <= min(r[4] for r in group)


def _crossovers(snrs, series_a, series_b) -> list[float]:
    """Interpolated SNRs where series_a - series_b changes sign."""
    found = []
    diffs = [a - b for a, b in zip(series_a, series_b)]
    for i in range(len(diffs) - 1):
        d0, d1 = diffs[i], diffs[i + 1]
        if d0 == 0.0:
            found.append(snrs[i])
        elif (d0 < 0) != (d1 < 0) and d1 != 0.0:
            frac = d0 / (d0 - d1)
            found.append(snrs[i] + frac * (snrs[i + 1] - snrs[i]))
    if diffs and diffs[-1] == 0.0:
        found.append(snrs[-1])
    return found


def run_snr_sweep(cfg: ExperimentConfig, workers: int = 1) -> SweepResult:
    """Outage vs SNR for each alpha allocation plus the MIMO baseline.

    Rows: (snr_db, series_id, p_out, std_err) with one series per alpha and
    one ``mimo{m}x{m}`` series (unless include_baseline is off).  Measured
    series crossovers are recorded in the manifest.
    """
    start = time.perf_counter()
    columns = ("snr_db", "series_id", "p_out", "std_err")
    snrs = sorted(cfg.snr_db_grid)
    alphas = sorted(cfg.alpha_grid)
    series_ids = [f"alpha={_fmt(a)}" for a in alphas]
    mimo_id = f"mimo{cfg.m}x{cfg.m}"
    if cfg.include_baseline:
        series_ids.append(mimo_id)
    rows = []
    series: dict[str, list[float]] = {sid: [] for sid in series_ids}
    index = 0
    for snr_db in snrs:
        sigma_n2 = cfg.sigma_n2_at(snr_db)
        for alpha in alphas:
            rec = _point(cfg, alpha, snr_db, index)
            index += 1
            est = monte_carlo_outage(rec["mc_cfg"], workers=workers)
            sid = f"alpha={_fmt(alpha)}"
            rows.append((snr_db, sid, est.probability, est.std_error))
            series[sid].append(est.probability)
        if cfg.include_baseline:
            mimo_cfg = MimoConfig(n_tx=cfg.m, n_rx=cfg.m, p_mimo=cfg.p_total,
                                  sigma_n2=sigma_n2, r_tr=cfg.r_tr,
                                  trials=cfg.trials, seed=(cfg.seed, index))
            index += 1
            est = mimo_outage(mimo_cfg, workers=workers)
            rows.append((snr_db, mimo_id, est.probability, est.std_error))
            series[mimo_id].append(est.probability)
    extra = {}
    for i in range(len(alphas)):
        for j in range(i + 1, len(alphas)):
            a, b = series_ids[i], series_ids[j]
            xs = _crossovers(snrs, series[b], series[a])
            extra[f"crossover[{b} vs {a}]"] = (
                ",".join(_fmt(x) for x in xs) if xs else "none"
            )
    if cfg.include_baseline:
        for sid in series_ids[:-1]:
            xs = _crossovers(snrs, series[sid], series[mimo_id])
            extra[f"crossover[{sid} vs {mimo_id}]"] = (
                ",".join(_fmt(x) for x in xs) if xs else "none"
            )
    summary = {"series": series_ids, "crossovers": extra}
    manifest = RunManifest(config=_config_echo(cfg), version=__version__,
                           master_seed=cfg.seed, subseed_rule=_SUBSEED_RULE,
                           row_count=len(rows), extra=extra)
    manifest.wall_clock_s = time.perf_counter() - start
    text = _render_csv(manifest, columns, rows)
    _write_output(cfg, text)
    return SweepResult(columns, rows, summary, manifest, text)


def run_corr_sweep(cfg: ExperimentConfig, workers: int = 1) -> SweepResult:
    """Outage vs receive-correlation level at fixed power split.

    Rows: (snr_db, corr_r, rho_level, p_out, std_err); rho_level is the
    off-diagonal Frobenius ratio of the exponential-model C actually applied
    (as the literal product C @ H) at that point.
    """
    start = time.perf_counter()
    columns = ("snr_db", "corr_r", "rho_level", "p_out", "std_err")
    alpha = sorted(cfg.alpha_grid)[0]
    snrs = sorted(cfg.snr_db_grid)
    rs = sorted(cfg.corr_r_grid)
    rows = []
    index = 0
    for snr_db in snrs:
        for r in rs:
            C = exponential_correlation(cfg.m, r)
            rec = _point(cfg, alpha, snr_db, index, correlation=C)
            index += 1
            est = monte_carlo_outage(rec["mc_cfg"], workers=workers)
            rows.append((snr_db, r, C.level, est.probability, est.std_error))
    summary = {"alpha": alpha}
    manifest = RunManifest(config=_config_echo(cfg), version=__version__,
                           master_seed=cfg.seed, subseed_rule=_SUBSEED_RULE,
                           row_count=len(rows), extra={"alpha": _fmt(alpha)})
    manifest.wall_clock_s = time.perf_counter() - start
    text = _render_csv(manifest, columns, rows)
    _write_output(cfg, text)
    return SweepResult(columns, rows, summary, manifest, text)


def run_single_point(cfg: ExperimentConfig, workers: int = 1) -> dict:
    """Evaluate one (alpha, SNR) point and report every derived quantity.

    The report carries the allocation (P1, P2, K), broadcast feasibility,
    the Monte Carlo estimate with its standard error, both analytical bound
    variants, and the run manifest.  trials = 1 is legal but degenerate
    (probability 0 or 1 with zero standard error) and draws a warning.
    """
    start = time.perf_counter()
    alpha = cfg.alpha_grid[0]
    snr_db = cfg.snr_db_grid[0]
    if cfg.trials == 1:
        warnings.warn("trials=1 gives a degenerate estimate (p in {0,1}, "
                      "std_err 0)")
    rec = _point(cfg, alpha, snr_db, 0)
    alloc = rec["alloc"]
    k = rec["k"]
    bound = (broadcast_power_bound(k, cfg.broadcast_spec) if k >= 1
             else math.inf)
    report = {
        "alpha": alpha,
        "snr_db": snr_db,
        "p_total": cfg.p_total,
        "p1": alloc.p1,
        "p2": alloc.p2,
        "k": k,
        "sigma_n2": rec["sigma_n2"],
        "broadcast_bound": bound,
        "feasible": bool(rec["feasible"]),
    }
    if k >= 1:
        est = monte_carlo_outage(rec["mc_cfg"], workers=workers)
        report["p_out_mc"] = est.probability
        report["std_err"] = est.std_error
        report["threshold"] = est.threshold
        report["p_out_analytical_printed"] = analytical_outage(
            cfg.m, k, cfg.r_tr, alloc.p2, rec["sigma_n2"], variant="printed")
        report["p_out_analytical_complex_convention"] = analytical_outage(
            cfg.m, k, cfg.r_tr, alloc.p2, rec["sigma_n2"],
            variant="complex_convention")
    manifest = RunManifest(config=_config_echo(cfg), version=__version__,
                           master_seed=cfg.seed, subseed_rule=_SUBSEED_RULE,
                           row_count=1)
    manifest.wall_clock_s = time.perf_counter() - start
    report["manifest"] = manifest
    return report


def format_report(report: dict) -> str:
    """Human-readable single-point report (manifest lines included)."""
    lines = []
    for key in ("alpha", "snr_db", "p_total", "p1", "p2", "k", "sigma_n2",
                "broadcast_bound", "feasible", "threshold", "p_out_mc",
                "std_err", "p_out_analytical_printed",
                "p_out_analytical_complex_convention"):
        if key in report:
            lines.append(f"{key} = {_fmt(report[key])}")
    lines.extend(report["manifest"].header_lines())
    return "\n".join(lines) + "\n"


def report_timing(manifest: RunManifest, stream=None) -> None:
    """Print wall-clock to stderr (kept out of the CSV for reproducibility)."""
    stream = stream if stream is not None else sys.stderr
    print(f"wall_clock_s = {manifest.wall_clock_s:.3f}", file=stream)
