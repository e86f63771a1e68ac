"""Ground-truth Monte Carlo simulator of the mixed-duplex cell network.

Each drop realises the station and terminal point processes on a square
window with wrap-around (torus) distances, thins stations into duplex modes,
associates every terminal with its nearest station and schedules one terminal
per active direction per cell.  SINR samples are read at the tagged cell -- a
uniformly chosen cell with a full schedule, which under stationarity is the
typical cell -- with fresh exponential fades per drop.

Determinism: drop `i` draws from a generator seeded by counter-based
splitting of (master_seed, i), and fades come from an independent split, so
results are bit-identical for a fixed seed regardless of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.spatial import cKDTree

try:
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False

from .analytic import (
    MetricsReport,
    Scenario,
    ccdf_downlink_fd,
    ccdf_downlink_hd,
    ccdf_uplink_fd,
    ccdf_uplink_hd,
    default_threshold_grid_db,
)
from .errors import TooFewSamples
from .model import (
    DistributionCurve,
    db_to_linear,
    linear_to_db,
    nearest_distance_cdf,
    residual_self_interference,
)

__all__ = [
    "MODE_FD",
    "MODE_HD_DL",
    "MODE_HD_UL",
    "CENSOR_SINR_DB",
    "SimWindow",
    "DropRealization",
    "SimulationResult",
    "EmpiricalDistribution",
    "DistanceFit",
    "BenchmarkRow",
    "BenchmarkReport",
    "torus_distance",
    "nearest_station",
    "generate_drop",
    "tagged_cell",
    "tagged_cells",
    "sample_sinr_downlink",
    "sample_sinr_uplink",
    "run_drops",
    "empirical_distribution",
    "fit_distance_correction",
    "measure_distance_pdf",
    "benchmark_report",
    "simulate_metrics",
]

MODE_FD = 0
MODE_HD_DL = 1
MODE_HD_UL = 2

# zero-interference zero-noise samples cannot occur analytically but can in a
# sparse window; they are capped here and counted as censored
CENSOR_SINR_DB = 60.0

_MIN_EXPECTED_BS = 100.0


@dataclass(frozen=True)
class SimWindow:
    """Square torus-wrapped observation window and replication plan."""

    half_width: float  # m; the window is [0, 2 * half_width)^2
    master_seed: int
    num_drops: int
    min_bs_per_drop: int = 1

    def __post_init__(self):
        if not self.half_width > 0.0:
            raise ValueError(f"half_width must be > 0, got {self.half_width}")
        if self.num_drops < 1:
            raise ValueError(f"num_drops must be >= 1, got {self.num_drops}")
        if self.min_bs_per_drop < 1:
            raise ValueError("min_bs_per_drop must be >= 1")

    @property
    def side(self) -> float:
        return 2.0 * self.half_width

    @property
    def area(self) -> float:
        return self.side * self.side


@dataclass
class DropRealization:
    """One realisation of the network with per-cell schedules.

    dl_ue / ul_ue hold the scheduled terminal index per cell, -1 when the
    cell schedules none.  Cells without enough member terminals to fill their
    schedule are marked skipped and stay silent.  `resampled` counts station
    draws redone because fewer than `min_bs_per_drop` stations appeared.
    """

    side: float
    bs_xy: np.ndarray
    bs_modes: np.ndarray
    ue_xy: np.ndarray
    serving_bs: np.ndarray
    serving_dist: np.ndarray
    dl_ue: np.ndarray
    ul_ue: np.ndarray
    skipped: np.ndarray
    resampled: int

    @property
    def n_cells(self) -> int:
        return self.bs_xy.shape[0]


def torus_distance(points, ref, side: float):
    """Wrap-around Euclidean distance between points (n, 2) and ref (2,)."""
    d = np.abs(points - ref)
    d = np.minimum(d, side - d)
    return np.hypot(d[..., 0], d[..., 1])


if _HAVE_NUMBA:

    @_njit(cache=True)
    def _grid_nearest_kernel(qx, qy, sx, sy, start, m, pitch, side):
        """Exact nearest neighbour on a torus via bucket rings.

        Stations are presorted by bucket (sx/sy with CSR offsets `start`).
        Rings of buckets are scanned outward; any point in a bucket at
        Chebyshev bucket-distance r is at least (r-1)*pitch away, so the scan
        stops once the best hit beats that bound.
        """
        n = qx.size
        half = side / 2.0
        out_d = np.empty(n)
        out_j = np.empty(n, np.int64)
        ring_max = m // 2
        for k in range(n):
            x = qx[k]
            y = qy[k]
            bx = int(x / pitch)
            by = int(y / pitch)
            if bx >= m:
                bx = m - 1
            if by >= m:
                by = m - 1
            best2 = 1e300
            bestj = -1
            ring = 0
            while ring <= ring_max:
                if ring >= 1:
                    reach = (ring - 1.0) * pitch
                    if best2 <= reach * reach:
                        break
                for dx in range(-ring, ring + 1):
                    if dx == -ring or dx == ring:
                        dy_lo, dy_hi, dy_step = -ring, ring, 1
                    else:
                        dy_lo, dy_hi, dy_step = -ring, ring, max(2 * ring, 1)
                    for dy in range(dy_lo, dy_hi + 1, dy_step):
                        b = ((bx + dx) % m) * m + ((by + dy) % m)
                        for j in range(start[b], start[b + 1]):
                            ddx = abs(x - sx[j])
                            if ddx > half:
                                ddx = side - ddx
                            ddy = abs(y - sy[j])
                            if ddy > half:
                                ddy = side - ddy
                            d2 = ddx * ddx + ddy * ddy
                            if d2 < best2:
                                best2 = d2
                                bestj = j
                ring += 1
            out_d[k] = math.sqrt(best2)
            out_j[k] = bestj
        return out_d, out_j


def nearest_station(bs_xy: np.ndarray, ue_xy: np.ndarray, side: float):
    """(distance, station index) of each terminal's nearest station on the torus.

    Uses a bucket-grid scan when numba is available and the station count
    justifies it, otherwise a periodic k-d tree; both are exact.
    """
    n_bs = bs_xy.shape[0]
    if _HAVE_NUMBA and n_bs >= 64:
        m = int(math.sqrt(n_bs))
        pitch = side / m
        bx = np.minimum((bs_xy[:, 0] / pitch).astype(np.int64), m - 1)
        by = np.minimum((bs_xy[:, 1] / pitch).astype(np.int64), m - 1)
        bucket = bx * m + by
        order = np.argsort(bucket, kind="stable")
        counts = np.bincount(bucket, minlength=m * m)
        start = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        sx = np.ascontiguousarray(bs_xy[order, 0])
        sy = np.ascontiguousarray(bs_xy[order, 1])
        dist, j = _grid_nearest_kernel(
            np.ascontiguousarray(ue_xy[:, 0]),
            np.ascontiguousarray(ue_xy[:, 1]),
            sx,
            sy,
            start,
            m,
            pitch,
            side,
        )
        return dist, order[j]
    tree = cKDTree(bs_xy, boxsize=side, leafsize=8)
    dist, idx = tree.query(ue_xy)
    return dist, idx


def _drop_rng(window: SimWindow, drop_index: int, stream: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=window.master_seed, spawn_key=(drop_index, stream))
    return np.random.default_rng(seq)


def generate_drop(env, mix, window: SimWindow, drop_index: int) -> DropRealization:
    """Realise stations, modes, terminals, association and per-cell schedules.

    Empty station draws are redone (and counted) so every drop has at least
    `min_bs_per_drop` stations; with desk-scale windows this never triggers.
    """
    if env.bs_density * window.area < _MIN_EXPECTED_BS:
        raise ValueError(
            f"expected station count {env.bs_density * window.area:.1f} < "
            f"{_MIN_EXPECTED_BS:.0f}; enlarge the window to control edge effects"
        )
    rng = _drop_rng(window, drop_index, 0)
    side = window.side

    resampled = 0
    n_bs = int(rng.poisson(env.bs_density * window.area))
    while n_bs < window.min_bs_per_drop:
        resampled += 1
        n_bs = int(rng.poisson(env.bs_density * window.area))
    bs_xy = rng.uniform(0.0, side, size=(n_bs, 2))

    u = rng.random(n_bs)
    modes = np.full(n_bs, MODE_HD_UL, dtype=np.int8)
    modes[u < mix.rho_fd + mix.rho_dl] = MODE_HD_DL
    modes[u < mix.rho_fd] = MODE_FD

    n_ue = int(rng.poisson(env.ue_density * window.area))
    ue_xy = rng.uniform(0.0, side, size=(n_ue, 2))
    serving_dist, serving_bs = nearest_station(bs_xy, ue_xy, side)

    # uniform scheduling without replacement: random priority per terminal,
    # then the first (and second) member of each cell in priority order
    counts = np.bincount(serving_bs, minlength=n_bs)
    order = np.argsort(serving_bs + rng.random(n_ue), kind="stable")
    starts = np.searchsorted(serving_bs[order], np.arange(n_bs))
    safe = np.minimum(starts, max(n_ue - 1, 0))
    first = np.where(counts >= 1, order[safe], -1)
    safe2 = np.minimum(starts + 1, max(n_ue - 1, 0))
    second = np.where(counts >= 2, order[safe2], -1)

    dl_ue = np.full(n_bs, -1, dtype=np.int64)
    ul_ue = np.full(n_bs, -1, dtype=np.int64)
    skipped = np.zeros(n_bs, dtype=bool)

    fd = modes == MODE_FD
    skipped[fd & (counts < 2)] = True
    ok_fd = fd & ~skipped
    ul_ue[ok_fd] = first[ok_fd]
    dl_ue[ok_fd] = second[ok_fd]

    hd_dl = modes == MODE_HD_DL
    skipped[hd_dl & (counts < 1)] = True
    ok_dl = hd_dl & ~skipped
    dl_ue[ok_dl] = first[ok_dl]

    hd_ul = modes == MODE_HD_UL
    skipped[hd_ul & (counts < 1)] = True
    ok_ul = hd_ul & ~skipped
    ul_ue[ok_ul] = first[ok_ul]

    return DropRealization(
        side=side,
        bs_xy=bs_xy,
        bs_modes=modes,
        ue_xy=ue_xy,
        serving_bs=serving_bs,
        serving_dist=serving_dist,
        dl_ue=dl_ue,
        ul_ue=ul_ue,
        skipped=skipped,
        resampled=resampled,
    )


def tagged_cell(drop: DropRealization, rng) -> int:
    """Uniformly chosen cell with a full schedule; -1 when none qualifies.

    A uniform pick over cells realises the typical cell of the stationary
    tessellation; picking the cell covering a fixed location would instead
    over-represent large cells and bias the scheduled serving-distance law.
    """
    cells = tagged_cells(drop, rng, 1)
    return int(cells[0]) if cells.size else -1


def tagged_cells(drop: DropRealization, rng, count: int) -> np.ndarray:
    """Up to `count` distinct tagged cells drawn uniformly; see `tagged_cell`."""
    eligible = np.flatnonzero(~drop.skipped)
    if eligible.size == 0:
        return eligible
    return eligible[rng.permutation(eligible.size)[:count]]


def _downlink_components(drop: DropRealization, scn: Scenario, cell: int, rng):
    """(signal, denominator) at the tagged cell's downlink terminal."""
    env, power = scn.env, scn.power
    mu = env.fading_rate
    k1, a1 = env.link_bs_ue.attenuation, env.link_bs_ue.exponent
    k2, a2 = env.link_ue_ue.attenuation, env.link_ue_ue.exponent
    eps = power.power_control_eps

    ue = int(drop.dl_ue[cell])
    if ue < 0:
        raise ValueError("tagged cell schedules no downlink terminal")
    rx = drop.ue_xy[ue]
    signal = power.p_bs * rng.exponential(1.0 / mu) * k1 * drop.serving_dist[ue] ** -a1

    active_dl = ((drop.bs_modes == MODE_FD) | (drop.bs_modes == MODE_HD_DL)) & ~drop.skipped
    active_dl[cell] = False
    d_bs = torus_distance(drop.bs_xy[active_dl], rx, drop.side)
    i_d = power.p_bs * k1 * float(np.sum(rng.exponential(1.0 / mu, d_bs.size) * d_bs**-a1))

    # every scheduled uplink terminal interferes, including the tagged cell's
    # own when it is full duplex
    ul_idx = drop.ul_ue[drop.ul_ue >= 0]
    z = drop.serving_dist[ul_idx]
    d_ue = torus_distance(drop.ue_xy[ul_idx], rx, drop.side)
    tx = power.p_ue * k1 ** (-eps) * z ** (eps * a1)
    i_u = k2 * float(np.sum(tx * rng.exponential(1.0 / mu, ul_idx.size) * d_ue**-a2))

    return signal, env.noise_dl + i_d + i_u


def _uplink_components(drop: DropRealization, scn: Scenario, cell: int, rng):
    """(signal, denominator) at the tagged cell's station receiver."""
    env, power = scn.env, scn.power
    mu = env.fading_rate
    k1, a1 = env.link_bs_ue.attenuation, env.link_bs_ue.exponent
    k3, a3 = env.link_bs_bs.attenuation, env.link_bs_bs.exponent
    eps = power.power_control_eps

    ue = int(drop.ul_ue[cell])
    if ue < 0:
        raise ValueError("tagged cell schedules no uplink terminal")
    rx = drop.bs_xy[cell]
    r = drop.serving_dist[ue]
    signal = power.p_ue * rng.exponential(1.0 / mu) * k1 ** (1.0 - eps) * r ** (a1 * (eps - 1.0))

    active_dl = ((drop.bs_modes == MODE_FD) | (drop.bs_modes == MODE_HD_DL)) & ~drop.skipped
    active_dl[cell] = False
    d_bs = torus_distance(drop.bs_xy[active_dl], rx, drop.side)
    i_d = power.p_bs * k3 * float(np.sum(rng.exponential(1.0 / mu, d_bs.size) * d_bs**-a3))

    # scheduled uplink terminals of the other cells; nearest-station
    # association already guarantees they are farther from this station than
    # from their own
    ul_mask = drop.ul_ue >= 0
    ul_mask[cell] = False
    ul_idx = drop.ul_ue[ul_mask]
    z = drop.serving_dist[ul_idx]
    x = torus_distance(drop.ue_xy[ul_idx], rx, drop.side)
    i_u = k1 ** (1.0 - eps) * power.p_ue * float(
        np.sum(rng.exponential(1.0 / mu, ul_idx.size) * z ** (eps * a1) * x**-a1)
    )

    si = residual_self_interference(power) if drop.bs_modes[cell] == MODE_FD else 0.0
    return signal, env.noise_ul + i_d + i_u + si


def _guarded_sinr(signal: float, denom: float) -> float:
    if denom <= 0.0:
        return db_to_linear(CENSOR_SINR_DB)
    return signal / denom


def sample_sinr_downlink(drop: DropRealization, scn: Scenario, cell: int, rng) -> float:
    """Linear SINR at the given cell's downlink terminal with fresh fades."""
    return _guarded_sinr(*_downlink_components(drop, scn, cell, rng))


def sample_sinr_uplink(drop: DropRealization, scn: Scenario, cell: int, rng) -> float:
    """Linear SINR at the given cell's station receiver with fresh fades."""
    return _guarded_sinr(*_uplink_components(drop, scn, cell, rng))


@dataclass
class SimulationResult:
    """Tagged-cell SINR samples and bookkeeping for one simulation run."""

    sinr_fd_dl: np.ndarray
    sinr_hd_dl: np.ndarray
    sinr_fd_ul: np.ndarray
    sinr_hd_ul: np.ndarray
    num_drops: int
    cells_seen: int
    cells_skipped: int
    tagged_skipped: int
    censored: int
    resampled: int

    @property
    def skip_rate(self) -> float:
        return self.cells_skipped / self.cells_seen if self.cells_seen else 0.0

    @property
    def downlink(self) -> np.ndarray:
        """Pooled downlink samples in tagged-mode order of occurrence."""
        return np.concatenate([self.sinr_fd_dl, self.sinr_hd_dl])

    @property
    def uplink(self) -> np.ndarray:
        return np.concatenate([self.sinr_fd_ul, self.sinr_hd_ul])


def run_drops(
    scn: Scenario, window: SimWindow, cells_per_drop: int = 1, progress=None
) -> SimulationResult:
    """Simulate `window.num_drops` drops, reading SINR at tagged cells.

    `cells_per_drop` tagged cells are drawn per drop without replacement;
    within-drop samples share the realisation but remain unbiased, so raising
    it trades a little correlation for cheaper samples.  `progress`, when
    given, is called with (drops_done, num_drops) every few hundred drops.
    """
    if cells_per_drop < 1:
        raise ValueError("cells_per_drop must be >= 1")
    fd_dl, hd_dl, fd_ul, hd_ul = [], [], [], []
    cells_seen = cells_skipped = tagged_skipped = censored = resampled = 0
    for i in range(window.num_drops):
        drop = generate_drop(scn.env, scn.mix, window, i)
        cells_seen += drop.n_cells
        cells_skipped += int(drop.skipped.sum())
        resampled += drop.resampled
        fades = _drop_rng(window, i, 1)
        cells = tagged_cells(drop, fades, cells_per_drop)
        if cells.size == 0:
            tagged_skipped += 1
            continue
        for cell in cells:
            cell = int(cell)
            mode = drop.bs_modes[cell]
            if mode == MODE_FD or mode == MODE_HD_DL:
                signal, denom = _downlink_components(drop, scn, cell, fades)
                if denom <= 0.0:
                    censored += 1
                (fd_dl if mode == MODE_FD else hd_dl).append(_guarded_sinr(signal, denom))
            if mode == MODE_FD or mode == MODE_HD_UL:
                signal, denom = _uplink_components(drop, scn, cell, fades)
                if denom <= 0.0:
                    censored += 1
                (fd_ul if mode == MODE_FD else hd_ul).append(_guarded_sinr(signal, denom))
        if progress is not None and (i + 1) % 250 == 0:
            progress(i + 1, window.num_drops)
    return SimulationResult(
        sinr_fd_dl=np.asarray(fd_dl),
        sinr_hd_dl=np.asarray(hd_dl),
        sinr_fd_ul=np.asarray(fd_ul),
        sinr_hd_ul=np.asarray(hd_ul),
        num_drops=window.num_drops,
        cells_seen=cells_seen,
        cells_skipped=cells_skipped,
        tagged_skipped=tagged_skipped,
        censored=censored,
        resampled=resampled,
    )


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Empirical CCDF with its 95% Dvoretzky-Kiefer-Wolfowitz band half-width."""

    curve: DistributionCurve
    n_samples: int
    dkw_95: float


def empirical_distribution(samples, thresholds_db=None) -> EmpiricalDistribution:
    """Empirical CCDF of linear SINR samples on a dB threshold grid."""
    samples = np.asarray(samples, dtype=float)
    if samples.size < 1000:
        raise TooFewSamples(f"need >= 1000 samples for an empirical CCDF, got {samples.size}")
    if thresholds_db is None:
        thresholds_db = default_threshold_grid_db()
    grid = np.asarray(thresholds_db, dtype=float)
    sorted_db = np.sort(linear_to_db(samples))
    ccdf = 1.0 - np.searchsorted(sorted_db, grid, side="right") / samples.size
    band = math.sqrt(math.log(2.0 / 0.05) / (2.0 * samples.size))
    return EmpiricalDistribution(
        curve=DistributionCurve(tuple(grid), tuple(ccdf)),
        n_samples=int(samples.size),
        dkw_95=band,
    )


def fit_distance_correction(distances, density: float) -> float:
    """Least-squares fit of the density-correction factor in the nearest-
    transmitter distance law against an empirical CDF."""
    r = np.sort(np.asarray(distances, dtype=float))
    if r.size == 0:
        raise TooFewSamples("no distance samples to fit")
    ecdf = (np.arange(r.size) + 0.5) / r.size

    def loss(nu):
        return float(np.mean(np.square(ecdf - nearest_distance_cdf(r, density, nu))))

    res = minimize_scalar(loss, bounds=(0.5, 2.5), method="bounded", options={"xatol": 1e-6})
    return float(res.x)


@dataclass(frozen=True)
class DistanceFit:
    """Serving-distance statistics of the scheduled terminals."""

    nu_dl: float
    nu_ul: float
    n_dl: int
    n_ul: int
    hist_dl: tuple
    hist_ul: tuple


def measure_distance_pdf(drops, density: float, bins: int = 60) -> DistanceFit:
    """Histogram and correction-factor fit of scheduled serving distances.

    Downlink and uplink schedules are fitted separately; each needs at least
    10^4 samples for a stable fit.
    """
    dl, ul = [], []
    for drop in drops:
        dl.append(drop.serving_dist[drop.dl_ue[drop.dl_ue >= 0]])
        ul.append(drop.serving_dist[drop.ul_ue[drop.ul_ue >= 0]])
    r_dl = np.concatenate(dl) if dl else np.empty(0)
    r_ul = np.concatenate(ul) if ul else np.empty(0)
    if r_dl.size < 10_000 or r_ul.size < 10_000:
        raise TooFewSamples(
            f"need >= 10^4 scheduled serving distances per direction, "
            f"got dl={r_dl.size} ul={r_ul.size}"
        )
    top = float(max(r_dl.max(), r_ul.max()))
    return DistanceFit(
        nu_dl=fit_distance_correction(r_dl, density),
        nu_ul=fit_distance_correction(r_ul, density),
        n_dl=int(r_dl.size),
        n_ul=int(r_ul.size),
        hist_dl=np.histogram(r_dl, bins=bins, range=(0.0, top), density=True),
        hist_ul=np.histogram(r_ul, bins=bins, range=(0.0, top), density=True),
    )


@dataclass(frozen=True)
class BenchmarkRow:
    direction: str  # "dl" | "ul"
    nu: float
    max_deviation: float
    mean_deviation: float


@dataclass(frozen=True)
class BenchmarkReport:
    """Analytic-vs-simulation CCDF comparison per direction and nu value."""

    rows: tuple
    empirical_dl: EmpiricalDistribution
    empirical_ul: EmpiricalDistribution
    analytic: dict
    result: SimulationResult
    thresholds_db: tuple


def _mixture_curve_dl(scn: Scenario, grid_db) -> np.ndarray:
    m = scn.mix
    y = db_to_linear(np.asarray(grid_db, dtype=float))
    num = np.zeros(y.shape)
    if m.rho_fd > 0.0:
        num += m.rho_fd * ccdf_downlink_fd(y, scn)
    if m.rho_dl > 0.0:
        num += m.rho_dl * ccdf_downlink_hd(y, scn)
    return num / (m.rho_fd + m.rho_dl)


def _mixture_curve_ul(scn: Scenario, grid_db) -> np.ndarray:
    m = scn.mix
    y = db_to_linear(np.asarray(grid_db, dtype=float))
    num = np.zeros(y.shape)
    if m.rho_fd > 0.0:
        num += m.rho_fd * ccdf_uplink_fd(y, scn)
    if m.rho_ul > 0.0:
        num += m.rho_ul * ccdf_uplink_hd(y, scn)
    return num / (m.rho_fd + m.rho_ul)


def benchmark_report(
    scn: Scenario,
    window: SimWindow,
    thresholds_db=None,
    nu_values=(1.0, 1.25),
    cells_per_drop: int = 1,
    progress=None,
) -> BenchmarkReport:
    """Compare analytic CCDFs against simulation for candidate nu values.

    The analytic curve for each direction is the duplex-mix mixture of its
    cell-type CCDFs, evaluated with the direction's nu overridden by each
    candidate; deviations are maximum and mean absolute CCDF differences.
    """
    if thresholds_db is None:
        thresholds_db = default_threshold_grid_db(-10.0, 30.0, 0.5)
    grid = np.asarray(thresholds_db, dtype=float)
    result = run_drops(scn, window, cells_per_drop=cells_per_drop, progress=progress)
    emp_dl = empirical_distribution(result.downlink, grid)
    emp_ul = empirical_distribution(result.uplink, grid)
    rows = []
    analytic = {}
    for nu in nu_values:
        scn_dl = replace(scn, env=replace(scn.env, nu_dl=nu))
        scn_ul = replace(scn, env=replace(scn.env, nu_ul=nu))
        a_dl = _mixture_curve_dl(scn_dl, grid)
        a_ul = _mixture_curve_ul(scn_ul, grid)
        analytic[("dl", nu)] = a_dl
        analytic[("ul", nu)] = a_ul
        e_dl = np.asarray(emp_dl.curve.probabilities)
        e_ul = np.asarray(emp_ul.curve.probabilities)
        rows.append(
            BenchmarkRow("dl", nu, float(np.max(np.abs(a_dl - e_dl))), float(np.mean(np.abs(a_dl - e_dl))))
        )
        rows.append(
            BenchmarkRow("ul", nu, float(np.max(np.abs(a_ul - e_ul))), float(np.mean(np.abs(a_ul - e_ul))))
        )
    return BenchmarkReport(
        rows=tuple(rows),
        empirical_dl=emp_dl,
        empirical_ul=emp_ul,
        analytic=analytic,
        result=result,
        thresholds_db=tuple(grid),
    )


def simulate_metrics(
    scn: Scenario, window: SimWindow, threshold_db: float = -8.0, cells_per_drop: int = 1
) -> MetricsReport:
    """Monte Carlo estimate of the same metrics the analytic engine reports."""
    res = run_drops(scn, window, cells_per_drop=cells_per_drop)
    y = db_to_linear(threshold_db)

    def rate(samples):
        return float(np.mean(np.log2(1.0 + samples))) if samples.size else 0.0

    def frac_above(samples):
        return float(np.mean(samples > y)) if samples.size else 0.0

    m = scn.mix
    r_fd_dl, r_hd_dl = rate(res.sinr_fd_dl), rate(res.sinr_hd_dl)
    r_fd_ul, r_hd_ul = rate(res.sinr_fd_ul), rate(res.sinr_hd_ul)
    lam = scn.env.bs_density
    cov_dl = frac_above(res.downlink)
    cov_ul = frac_above(res.uplink)
    return MetricsReport(
        ase_dl=lam * (m.rho_fd * r_fd_dl + m.rho_dl * r_hd_dl),
        ase_ul=lam * (m.rho_fd * r_fd_ul + m.rho_ul * r_hd_ul),
        coverage_dl=cov_dl,
        coverage_ul=cov_ul,
        rate_fd_dl=r_fd_dl,
        rate_hd_dl=r_hd_dl,
        rate_fd_ul=r_fd_ul,
        rate_hd_ul=r_hd_ul,
    )
