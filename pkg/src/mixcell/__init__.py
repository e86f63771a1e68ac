"""Mixed full-/half-duplex small-cell network evaluation toolkit.

Analytic coverage/rate/ASE engine backed by adaptive quadrature, a
point-process Monte Carlo simulator for ground truth, sweep orchestration
and a command-line interface.
"""

from .errors import (
    ConfigError,
    DegenerateMix,
    MixcellError,
    NonConvergence,
    NonFiniteIntegrand,
    NonPositiveDistance,
    TooFewSamples,
)
from .model import (
    DistributionCurve,
    DuplexMix,
    LinkClass,
    PowerConfig,
    RadioEnvironment,
    db_to_linear,
    dbm_to_watt,
    linear_to_db,
    nearest_distance_cdf,
    nearest_distance_pdf,
    noise_power,
    path_loss,
    residual_self_interference,
    watt_to_dbm,
)
from .quadrature import QuadratureSpec, integrate, integrate_many, truncation_radius
from .config import (
    RunConfig,
    build_run_config,
    default_run_config,
    default_scenario,
    load_config,
    scenario_hash,
)
from .experiments import SweepPlan, SweepRow, run_benchmark, run_sweep
from .simulation import (
    BenchmarkReport,
    DistanceFit,
    DropRealization,
    EmpiricalDistribution,
    SimulationResult,
    SimWindow,
    benchmark_report,
    empirical_distribution,
    fit_distance_correction,
    generate_drop,
    measure_distance_pdf,
    run_drops,
    sample_sinr_downlink,
    sample_sinr_uplink,
    simulate_metrics,
    tagged_cell,
    tagged_cells,
)
from .analytic import (
    LinkDirectionReport,
    MetricsReport,
    Scenario,
    ThdBaseline,
    ase,
    ccdf_downlink_fd,
    ccdf_downlink_hd,
    ccdf_thd_downlink,
    ccdf_thd_uplink,
    ccdf_uplink_fd,
    ccdf_uplink_hd,
    cell_rate,
    coverage,
    laplace_dl_from_bs,
    laplace_dl_from_ues,
    laplace_ul_from_bs,
    laplace_ul_from_ues,
    link_report,
    mean_rate,
    metrics_report,
    mixed_rates,
    sinr_curve,
    thd_baseline,
)

__version__ = "0.1.0"
