"""Command-line interface: analytic curves, simulation, sweeps and benchmark.

Every command reads a key/value config file (missing keys fall back to the
canonical defaults), writes delimited result tables into an output directory
and drops a manifest.json describing how to reproduce the run.  Exit codes:
0 success, 2 configuration problem, 3 numerical failure, 4 not enough
samples.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .analytic import link_report
from .config import (
    RunConfig,
    default_config_text,
    is_interference_limited,
    load_config,
    parse_grid,
    scenario_hash,
)
from .errors import ConfigError, NonConvergence, NonFiniteIntegrand, TooFewSamples
from .experiments import DEFAULT_RHO_GRID, SweepPlan, run_benchmark, run_sweep
from .model import PowerConfig, linear_to_db
from .simulation import SimWindow, empirical_distribution, run_drops

OUTPUT_ROOT_ENV = "MIXCELL_OUTPUT_ROOT"

_EXIT_CONFIG = 2
_EXIT_NUMERICAL = 3
_EXIT_SAMPLES = 4


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility record written next to every result set."""

    command: str
    argv: tuple
    version: str
    scenario_hash: str
    seed: int | None
    created_utc: str
    outputs: tuple
    config: dict


def _write_manifest(out_dir: str, manifest: RunManifest) -> str:
    path = os.path.join(out_dir, "manifest.json")
    payload = json.dumps(dataclasses.asdict(manifest), indent=2, sort_keys=True)
    fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=".manifest-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path


def _write_csv(path: str, header: list[str], rows, comments: list[str] | None = None) -> str:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in comments or []:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _out_dir(args, command: str, digest: str) -> str:
    if args.out:
        out = args.out
    else:
        root = os.environ.get(OUTPUT_ROOT_ENV, "runs")
        seed = getattr(args, "seed", None)
        name = f"{command}-{digest}" + (f"-s{seed}" if seed is not None else "")
        out = os.path.join(root, name)
    os.makedirs(out, exist_ok=True)
    return out


def _load(args, allowed_extra_prefixes=()) -> RunConfig:
    if args.config is None:
        from .config import build_run_config

        return build_run_config({})
    return load_config(args.config, allowed_extra_prefixes)


def cmd_analytic(args) -> int:
    cfg = _load(args)
    scn = cfg.scenario
    grid = np.asarray(parse_grid(args.grid)) if args.grid else np.asarray(cfg.grid_db)
    report = link_report(scn, args.direction, args.cell, grid, cfg.outage_threshold_db)
    digest = scenario_hash(scn)
    out = _out_dir(args, "analytic", digest)
    curve = report.ccdf
    ccdf_path = _write_csv(
        os.path.join(out, "ccdf.csv"),
        ["threshold_db", "ccdf"],
        zip(map(_fmt, curve.thresholds_db), map(_fmt, curve.probabilities)),
        comments=[f"scenario_hash={digest}", f"direction={args.direction}", f"cell={args.cell}"],
    )
    metrics_path = _write_csv(
        os.path.join(out, "metrics.csv"),
        ["metric", "value"],
        [
            ("mean_rate_bps_hz", _fmt(report.mean_rate)),
            ("coverage", _fmt(report.coverage)),
            ("outage_threshold_db", _fmt(cfg.outage_threshold_db)),
        ],
    )
    _write_manifest(
        out,
        RunManifest(
            command="analytic",
            argv=tuple(sys.argv[1:]),
            version=__version__,
            scenario_hash=digest,
            seed=None,
            created_utc=_utc_now(),
            outputs=(ccdf_path, metrics_path),
            config=cfg.values,
        ),
    )
    print(f"analytic: wrote {ccdf_path} and {metrics_path}")
    return 0


def _utc_now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def cmd_simulate(args) -> int:
    cfg = _load(args)
    scn = cfg.scenario
    if args.drops < 1:
        raise TooFewSamples(f"--drops must be >= 1, got {args.drops}")
    window = SimWindow(
        half_width=args.half_width, master_seed=args.seed, num_drops=args.drops
    )
    result = run_drops(scn, window, cells_per_drop=args.cells_per_drop)
    digest = scenario_hash(scn)
    out = _out_dir(args, "simulate", digest)
    grid = np.asarray(cfg.grid_db)
    header_comments = [
        f"scenario_hash={digest}",
        f"seed={args.seed}",
        f"half_width_m={args.half_width}",
        f"grid_db={grid[0]}:{grid[-1]}:{grid[1] - grid[0]}",
    ]
    sample_rows = []
    for name, arr in (
        ("fd_dl", result.sinr_fd_dl),
        ("hd_dl", result.sinr_hd_dl),
        ("fd_ul", result.sinr_fd_ul),
        ("hd_ul", result.sinr_hd_ul),
    ):
        mode, _, direction = name.partition("_")
        for v in arr:
            sample_rows.append((mode, direction, _fmt(float(linear_to_db(v)))))
    outputs = [
        _write_csv(
            os.path.join(out, "samples.csv"),
            ["cell_mode", "direction", "sinr_db"],
            sample_rows,
            comments=header_comments,
        )
    ]
    for direction, samples in (("dl", result.downlink), ("ul", result.uplink)):
        if samples.size >= 1000:
            emp = empirical_distribution(samples, grid)
            outputs.append(
                _write_csv(
                    os.path.join(out, f"ccdf_{direction}.csv"),
                    ["threshold_db", "ccdf"],
                    zip(map(_fmt, emp.curve.thresholds_db), map(_fmt, emp.curve.probabilities)),
                    comments=header_comments + [f"n={emp.n_samples}", f"dkw_95={emp.dkw_95!r}"],
                )
            )
    outputs.append(
        _write_csv(
            os.path.join(out, "stats.csv"),
            ["stat", "value"],
            [
                ("num_drops", result.num_drops),
                ("cells_seen", result.cells_seen),
                ("cells_skipped", result.cells_skipped),
                ("skip_rate", _fmt(result.skip_rate)),
                ("tagged_skipped", result.tagged_skipped),
                ("censored", result.censored),
                ("resampled", result.resampled),
            ],
        )
    )
    _write_manifest(
        out,
        RunManifest(
            command="simulate",
            argv=tuple(sys.argv[1:]),
            version=__version__,
            scenario_hash=digest,
            seed=args.seed,
            created_utc=_utc_now(),
            outputs=tuple(outputs),
            config=cfg.values,
        ),
    )
    print(f"simulate: {result.num_drops} drops, skip_rate={result.skip_rate:.4f}, wrote {len(outputs)} files to {out}")
    return 0


def _parse_float_list(text: str) -> tuple:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _parse_power_pairs(text: str) -> tuple:
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 2:
            raise ConfigError(f"power pair must be 'p_bs_dbm:p_ue_dbm', got {chunk!r}")
        pairs.append((float(parts[0]), float(parts[1])))
    return tuple(pairs)


_SWEEP_KEYS = {
    "sweep.rho_fd_grid",
    "sweep.sic_db_values",
    "sweep.power_pairs_dbm",
    "sweep.engine",
    "sweep.include_thd",
    "sweep.metrics",
    "sweep.drops",
    "sweep.half_width",
    "sweep.seed",
    "sweep.cells_per_drop",
}


def _sweep_plan_from_config(cfg: RunConfig, args) -> SweepPlan:
    v = cfg.values
    unknown = sorted(k for k in v if k.startswith("sweep.") and k not in _SWEEP_KEYS)
    if unknown:
        raise ConfigError(f"unknown sweep key(s): {', '.join(unknown)}")
    rho_grid = tuple(parse_grid(v["sweep.rho_fd_grid"])) if "sweep.rho_fd_grid" in v else DEFAULT_RHO_GRID
    rho_grid = tuple(round(r, 10) for r in rho_grid)
    sic = _parse_float_list(v["sweep.sic_db_values"]) if "sweep.sic_db_values" in v else None
    pairs = _parse_power_pairs(v["sweep.power_pairs_dbm"]) if "sweep.power_pairs_dbm" in v else None
    engine = v.get("sweep.engine", "analytic")
    include_thd = v.get("sweep.include_thd", "true").lower() in ("true", "yes", "1")
    metrics = tuple(m.strip() for m in v.get("sweep.metrics", "ase_dl,ase_ul,cov_dl,cov_ul").split(","))
    window = None
    if engine in ("montecarlo", "both"):
        window = SimWindow(
            half_width=float(v.get("sweep.half_width", "500")),
            master_seed=int(v.get("sweep.seed", str(args.seed))),
            num_drops=int(v.get("sweep.drops", "200")),
        )
    try:
        return SweepPlan(
            base=cfg.scenario,
            rho_fd_grid=rho_grid,
            sic_db_values=sic,
            power_pairs_dbm=pairs,
            engine=engine,
            metrics=metrics,
            include_thd=include_thd,
            threshold_db=cfg.outage_threshold_db,
            thd_time_share=cfg.thd_time_share,
            mc_window=window,
            mc_cells_per_drop=int(v.get("sweep.cells_per_drop", "1")),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_sweep(args) -> int:
    cfg = _load(args, allowed_extra_prefixes=("sweep.",))
    plan = _sweep_plan_from_config(cfg, args)
    rows = run_sweep(plan)
    digest = scenario_hash(plan.base)
    out = _out_dir(args, "sweep", digest)
    path = _write_csv(
        os.path.join(out, "sweep.csv"),
        ["rho_fd", "sic_db", "p_bs_dbm", "p_ue_dbm", "metric", "value", "engine", "scenario_hash", "seed"],
        (
            (
                _fmt(r.rho_fd),
                _fmt(r.sic_db),
                _fmt(r.p_bs_dbm),
                _fmt(r.p_ue_dbm),
                r.metric,
                _fmt(r.value),
                r.engine,
                r.scenario_hash,
                _fmt(r.seed),
            )
            for r in rows
        ),
        comments=[f"base_scenario_hash={digest}"],
    )
    _write_manifest(
        out,
        RunManifest(
            command="sweep",
            argv=tuple(sys.argv[1:]),
            version=__version__,
            scenario_hash=digest,
            seed=getattr(args, "seed", None),
            created_utc=_utc_now(),
            outputs=(path,),
            config=cfg.values,
        ),
    )
    print(f"sweep: {len(rows)} rows -> {path}")
    return 0


def cmd_benchmark(args) -> int:
    cfg = _load(args)
    scn = cfg.scenario
    # the benchmark procedure compares the interference-limited system with
    # equal transmit powers and no power control
    env = replace(scn.env, noise_dl=0.0, noise_ul=0.0)
    power = PowerConfig(
        p_bs=scn.power.p_bs, p_ue=scn.power.p_bs, power_control_eps=0.0, sic_db=math.inf
    )
    scn = replace(scn, env=env, power=power)
    if args.drops < 1:
        raise TooFewSamples(f"--drops must be >= 1, got {args.drops}")
    window = SimWindow(half_width=args.half_width, master_seed=args.seed, num_drops=args.drops)
    digest = scenario_hash(scn)
    out = _out_dir(args, "benchmark", digest)

    progress = None
    if args.progress:
        def progress(done, total):
            print(f"  drops {done}/{total}", file=sys.stderr, flush=True)

    verdict = run_benchmark(
        scn,
        window,
        nu_values=_parse_float_list(args.nu_values),
        budget=args.budget,
        cells_per_drop=args.cells_per_drop,
        progress=progress,
    )
    report = verdict.report
    rows = [
        (
            row.direction,
            _fmt(row.nu),
            _fmt(row.max_deviation),
            _fmt(row.mean_deviation),
            _fmt(verdict.budget),
            "pass" if row.max_deviation <= verdict.budget else "fail",
        )
        for row in report.rows
    ]
    outputs = [
        _write_csv(
            os.path.join(out, "benchmark.csv"),
            ["direction", "nu", "max_abs_dev", "mean_abs_dev", "budget", "verdict"],
            rows,
            comments=[f"scenario_hash={digest}", f"seed={args.seed}", f"drops={args.drops}"],
        )
    ]
    curve_rows = []
    grid = report.thresholds_db
    emp = {"dl": report.empirical_dl, "ul": report.empirical_ul}
    for direction in ("dl", "ul"):
        e = np.asarray(emp[direction].curve.probabilities)
        for i, thr in enumerate(grid):
            row = [direction, _fmt(thr), _fmt(float(e[i]))]
            for nu in sorted({r.nu for r in report.rows}):
                row.append(_fmt(float(report.analytic[(direction, nu)][i])))
            curve_rows.append(row)
    nu_cols = [f"analytic_nu_{nu:g}" for nu in sorted({r.nu for r in report.rows})]
    outputs.append(
        _write_csv(
            os.path.join(out, "benchmark_curves.csv"),
            ["direction", "threshold_db", "empirical"] + nu_cols,
            curve_rows,
            comments=[f"scenario_hash={digest}", f"seed={args.seed}"],
        )
    )
    _write_manifest(
        out,
        RunManifest(
            command="benchmark",
            argv=tuple(sys.argv[1:]),
            version=__version__,
            scenario_hash=digest,
            seed=args.seed,
            created_utc=_utc_now(),
            outputs=tuple(outputs),
            config=cfg.values,
        ),
    )
    for line in verdict.lines():
        print(line)
    return 0


def cmd_defaults(args) -> int:
    sys.stdout.write(default_config_text())
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixcell",
        description="Mixed full-/half-duplex small-cell network evaluation",
    )
    parser.add_argument("--version", action="version", version=f"mixcell {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed_default=None):
        p.add_argument("--config", help="key/value config file (defaults used when omitted)")
        p.add_argument("--out", help=f"output directory (default: ${OUTPUT_ROOT_ENV} or ./runs)")
        if seed_default is not None:
            p.add_argument("--seed", type=int, default=seed_default, help="master seed")

    p = sub.add_parser("analytic", help="tabulate an analytic SINR CCDF with rate and coverage")
    common(p)
    p.add_argument("--direction", choices=("dl", "ul"), required=True)
    p.add_argument("--cell", choices=("fd", "hd"), required=True)
    p.add_argument("--grid", help="threshold grid 'start:stop:step' in dB (overrides config)")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="run the point-process simulator")
    common(p, seed_default=1)
    p.add_argument("--drops", type=int, required=True, help="number of drops")
    p.add_argument("--half-width", type=float, default=1000.0, help="window half-width in m")
    p.add_argument("--cells-per-drop", type=int, default=1, help="tagged cells sampled per drop")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a sweep plan (sweep.* keys in the config file)")
    common(p, seed_default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("benchmark", help="analytic-vs-simulation benchmark report")
    common(p, seed_default=1)
    p.add_argument("--drops", type=int, default=10_000)
    p.add_argument("--half-width", type=float, default=1000.0)
    p.add_argument("--cells-per-drop", type=int, default=4, help="tagged cells sampled per drop")
    p.add_argument("--nu-values", default="1.0,1.25", help="comma-separated correction factors")
    p.add_argument("--budget", type=float, default=0.03, help="max CCDF deviation budget")
    p.add_argument("--progress", action="store_true", help="print drop progress to stderr")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("defaults", help="print the canonical default config")
    p.set_defaults(func=cmd_defaults)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except (NonConvergence, NonFiniteIntegrand) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return _EXIT_NUMERICAL
    except TooFewSamples as exc:
        print(f"not enough samples: {exc}", file=sys.stderr)
        return _EXIT_SAMPLES


if __name__ == "__main__":
    sys.exit(main())
