"""Sweep orchestration and the analytic-vs-simulation benchmark harness.

A sweep walks the cartesian grid of (full-duplex fraction, cancellation
level, power pair), evaluates the requested metrics with the analytic engine
and/or the simulator, and emits tidy rows with a deterministic order.  The
synchronised half-duplex baseline is appended per cancellation/power combo
(it does not depend on the full-duplex fraction).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .analytic import Scenario, metrics_report, thd_baseline
from .config import scenario_hash
from .errors import TooFewSamples
from .model import DuplexMix, PowerConfig, dbm_to_watt, watt_to_dbm
from .simulation import BenchmarkReport, SimWindow, benchmark_report, simulate_metrics

__all__ = [
    "SweepPlan",
    "SweepRow",
    "run_sweep",
    "BenchmarkVerdict",
    "run_benchmark",
    "DEFAULT_RHO_GRID",
    "DEFAULT_SIC_VALUES_DB",
    "DEFAULT_POWER_PAIRS_DBM",
]

DEFAULT_RHO_GRID = tuple(round(0.05 * i, 2) for i in range(21))
DEFAULT_SIC_VALUES_DB = (70.0, 85.0, 100.0, 110.0)
DEFAULT_POWER_PAIRS_DBM = ((24.0, 23.0), (24.0, 10.0), (10.0, 23.0))

_METRICS = ("ase_dl", "ase_ul", "cov_dl", "cov_ul")
_THD_METRICS = (
    "thd_ase_dl",
    "thd_ase_ul",
    "thd_ase_dl_unshared",
    "thd_ase_ul_unshared",
    "thd_cov_dl",
    "thd_cov_ul",
)


@dataclass(frozen=True)
class SweepPlan:
    """Cartesian sweep description around a base scenario.

    When `sic_db_values` or `power_pairs_dbm` is None the base scenario's
    value is the only point on that axis.  The non-full-duplex cells are
    split evenly between downlink and uplink unless `split_rule` is False,
    in which case the base mix's ratio between them is preserved.
    """

    base: Scenario
    rho_fd_grid: tuple = DEFAULT_RHO_GRID
    sic_db_values: tuple | None = None
    power_pairs_dbm: tuple | None = None
    engine: str = "analytic"
    metrics: tuple = _METRICS
    include_thd: bool = True
    threshold_db: float = -8.0
    thd_time_share: float = 0.5
    split_rule: bool = True
    mc_window: SimWindow | None = None
    mc_cells_per_drop: int = 1

    def __post_init__(self):
        if not self.rho_fd_grid:
            raise ValueError("rho_fd_grid must not be empty")
        if self.mc_cells_per_drop < 1:
            raise ValueError("mc_cells_per_drop must be >= 1")
        for rho in self.rho_fd_grid:
            if not 0.0 <= rho <= 1.0:
                raise ValueError(f"rho_fd grid values must lie in [0, 1], got {rho}")
        if self.engine not in ("analytic", "montecarlo", "both"):
            raise ValueError(f"unknown engine '{self.engine}'")
        unknown = set(self.metrics) - set(_METRICS)
        if unknown:
            raise ValueError(f"unknown metrics requested: {sorted(unknown)}")
        if self.engine in ("montecarlo", "both") and self.mc_window is None:
            raise ValueError("montecarlo engine requires mc_window")


@dataclass(frozen=True)
class SweepRow:
    """One (axis point, metric, engine) result; rho_fd is None on baseline rows."""

    rho_fd: float | None
    sic_db: float
    p_bs_dbm: float
    p_ue_dbm: float
    metric: str
    value: float
    engine: str
    scenario_hash: str
    seed: int | None


def _mix_for(plan: SweepPlan, rho_fd: float) -> DuplexMix:
    if plan.split_rule:
        return DuplexMix.from_fd_fraction(rho_fd)
    rest = plan.base.mix.rho_dl + plan.base.mix.rho_ul
    if rest <= 0.0:
        return DuplexMix.from_fd_fraction(rho_fd)
    frac_dl = plan.base.mix.rho_dl / rest
    return DuplexMix(rho_fd, (1.0 - rho_fd) * frac_dl, (1.0 - rho_fd) * (1.0 - frac_dl))


def _point_window(plan: SweepPlan, point_index: int) -> SimWindow:
    seed = int(
        np.random.SeedSequence(
            entropy=plan.mc_window.master_seed, spawn_key=(point_index,)
        ).generate_state(1)[0]
    )
    return replace(plan.mc_window, master_seed=seed)


def _metric_values(report, metrics):
    lookup = {
        "ase_dl": report.ase_dl,
        "ase_ul": report.ase_ul,
        "cov_dl": report.coverage_dl,
        "cov_ul": report.coverage_ul,
    }
    return [(m, lookup[m]) for m in metrics]


def run_sweep(plan: SweepPlan) -> list[SweepRow]:
    """Evaluate the plan; row order is deterministic for a fixed plan."""
    engines = ("analytic", "montecarlo") if plan.engine == "both" else (plan.engine,)
    rows: list[SweepRow] = []
    sic_values = plan.sic_db_values or (plan.base.power.sic_db,)
    power_pairs = plan.power_pairs_dbm or (
        (watt_to_dbm(plan.base.power.p_bs), watt_to_dbm(plan.base.power.p_ue)),
    )
    point_index = 0
    for sic_db in sic_values:
        for p_bs_dbm, p_ue_dbm in power_pairs:
            power = PowerConfig(
                p_bs=dbm_to_watt(p_bs_dbm),
                p_ue=dbm_to_watt(p_ue_dbm),
                power_control_eps=plan.base.power.power_control_eps,
                sic_db=sic_db,
            )
            scn_axis = replace(plan.base, power=power)
            for rho_fd in plan.rho_fd_grid:
                scn = replace(scn_axis, mix=_mix_for(plan, rho_fd))
                digest = scenario_hash(scn)
                for engine in engines:
                    if engine == "analytic":
                        report = metrics_report(scn, plan.threshold_db)
                        seed = None
                    else:
                        window = _point_window(plan, point_index)
                        report = simulate_metrics(
                            scn, window, plan.threshold_db, cells_per_drop=plan.mc_cells_per_drop
                        )
                        seed = window.master_seed
                    for metric, value in _metric_values(report, plan.metrics):
                        rows.append(
                            SweepRow(rho_fd, sic_db, p_bs_dbm, p_ue_dbm, metric, value, engine, digest, seed)
                        )
                point_index += 1
            if plan.include_thd:
                digest = scenario_hash(scn_axis)
                for engine in engines:
                    rows.extend(
                        _thd_rows(plan, scn_axis, sic_db, p_bs_dbm, p_ue_dbm, engine, point_index)
                    )
                point_index += 1
    return rows


def _thd_rows(plan, scn_axis, sic_db, p_bs_dbm, p_ue_dbm, engine, point_index):
    digest = scenario_hash(scn_axis)
    if engine == "analytic":
        thd = thd_baseline(scn_axis, time_share=plan.thd_time_share, threshold_db=plan.threshold_db)
        values = {
            "thd_ase_dl": thd.ase_dl,
            "thd_ase_ul": thd.ase_ul,
            "thd_ase_dl_unshared": scn_axis.env.bs_density * thd.rate_dl,
            "thd_ase_ul_unshared": scn_axis.env.bs_density * thd.rate_ul,
            "thd_cov_dl": thd.coverage_dl,
            "thd_cov_ul": thd.coverage_ul,
        }
        seed = None
    else:
        window = _point_window(plan, point_index)
        seed = window.master_seed
        lam = scn_axis.env.bs_density
        dl = simulate_metrics(
            replace(scn_axis, mix=DuplexMix(0.0, 1.0, 0.0)),
            window,
            plan.threshold_db,
            cells_per_drop=plan.mc_cells_per_drop,
        )
        ul = simulate_metrics(
            replace(scn_axis, mix=DuplexMix(0.0, 0.0, 1.0)),
            replace(window, master_seed=seed + 1),
            plan.threshold_db,
            cells_per_drop=plan.mc_cells_per_drop,
        )
        values = {
            "thd_ase_dl": plan.thd_time_share * lam * dl.rate_hd_dl,
            "thd_ase_ul": plan.thd_time_share * lam * ul.rate_hd_ul,
            "thd_ase_dl_unshared": lam * dl.rate_hd_dl,
            "thd_ase_ul_unshared": lam * ul.rate_hd_ul,
            "thd_cov_dl": dl.coverage_dl,
            "thd_cov_ul": ul.coverage_ul,
        }
    return [
        SweepRow(None, sic_db, p_bs_dbm, p_ue_dbm, metric, values[metric], engine, digest, seed)
        for metric in _THD_METRICS
    ]


@dataclass(frozen=True)
class BenchmarkVerdict:
    """Benchmark report graded against a maximum-deviation budget."""

    report: BenchmarkReport
    budget: float

    def passed(self, direction: str, nu: float) -> bool:
        return self.max_deviation(direction, nu) <= self.budget

    def max_deviation(self, direction: str, nu: float) -> float:
        for row in self.report.rows:
            if row.direction == direction and row.nu == nu:
                return row.max_deviation
        raise KeyError(f"no benchmark row for ({direction}, {nu})")

    def lines(self) -> list[str]:
        out = []
        for row in self.report.rows:
            tag = "PASS" if row.max_deviation <= self.budget else "FAIL"
            out.append(
                f"{tag} {row.direction} nu={row.nu:.2f} "
                f"max_dev={row.max_deviation:.4f} mean_dev={row.mean_deviation:.4f} "
                f"budget={self.budget:.3f}"
            )
        return out


def run_benchmark(
    scn: Scenario,
    window: SimWindow,
    thresholds_db=None,
    nu_values=(1.0, 1.25),
    budget: float = 0.03,
    cells_per_drop: int = 1,
    progress=None,
) -> BenchmarkVerdict:
    """Analytic-vs-simulation comparison graded against a deviation budget."""
    if window.num_drops < 1:
        raise TooFewSamples("benchmark requires at least one drop")
    report = benchmark_report(
        scn,
        window,
        thresholds_db=thresholds_db,
        nu_values=nu_values,
        cells_per_drop=cells_per_drop,
        progress=progress,
    )
    return BenchmarkVerdict(report=report, budget=budget)
