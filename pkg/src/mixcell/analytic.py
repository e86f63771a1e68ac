"""SINR distributions, rates and area spectral efficiency of the mixed network.

Every metric reduces to a radial coverage integral: the nearest-station
distance law integrated against Laplace transforms of the aggregate
interference seen by the tagged receiver under exponential fading.  Exact
rescalings of the integration variable reduce each Laplace exponent to one of
two one-dimensional kernels,

    tail kernel      T_a(l) = int_l^inf  t / (1 + t**a) dt
    weighted kernel  W_a(c) = int_0^inf  t * (1 - exp(-c t**2)) / (1 + t**a) dt

evaluated numerically by the quadrature module (no closed forms are used).
Nonzero uplink power control couples the interferer's own serving distance
into the exponent and is handled by nested double quadrature instead.

Sign conventions: thresholds y are linear SINR ratios, rates are bit/s/Hz,
area spectral efficiency is bit/s/Hz/m^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import DegenerateMix
from .model import (
    DistributionCurve,
    DuplexMix,
    PowerConfig,
    RadioEnvironment,
    db_to_linear,
    nearest_distance_cdf,
    nearest_distance_pdf,
    residual_self_interference,
)
from .quadrature import QuadratureSpec, integrate, integrate_many, truncation_radius

__all__ = [
    "Scenario",
    "LinkDirectionReport",
    "MetricsReport",
    "ThdBaseline",
    "laplace_dl_from_bs",
    "laplace_dl_from_ues",
    "laplace_ul_from_bs",
    "laplace_ul_from_ues",
    "ccdf_downlink_fd",
    "ccdf_downlink_hd",
    "ccdf_uplink_fd",
    "ccdf_uplink_hd",
    "ccdf_thd_downlink",
    "ccdf_thd_uplink",
    "sinr_curve",
    "link_report",
    "mean_rate",
    "cell_rate",
    "mixed_rates",
    "ase",
    "coverage",
    "thd_baseline",
    "metrics_report",
    "default_threshold_grid_db",
]

_RATE_U_CAP = 64.0  # bit/s/Hz; spectral efficiencies beyond this are tail mass


@dataclass(frozen=True)
class Scenario:
    """Immutable bundle of everything the engine needs for one evaluation."""

    env: RadioEnvironment
    mix: DuplexMix
    power: PowerConfig
    quad: QuadratureSpec = QuadratureSpec()


@dataclass(frozen=True)
class LinkDirectionReport:
    """Tabulated CCDF plus summary metrics for one direction of one cell type."""

    ccdf: DistributionCurve
    mean_rate: float
    coverage: float


@dataclass(frozen=True)
class MetricsReport:
    """Network-level metrics for a scenario at one outage threshold."""

    ase_dl: float
    ase_ul: float
    coverage_dl: float
    coverage_ul: float
    rate_fd_dl: float
    rate_hd_dl: float
    rate_fd_ul: float
    rate_hd_ul: float


@dataclass(frozen=True)
class ThdBaseline:
    """Synchronised time-division half-duplex reference system.

    All cells share one direction per slot and slots are divided between the
    directions by `time_share`; `rate_dl` / `rate_ul` are per-slot spectral
    efficiencies, the ASE values include the time share.
    """

    ase_dl: float
    ase_ul: float
    coverage_dl: float
    coverage_ul: float
    rate_dl: float
    rate_ul: float
    time_share: float


def default_threshold_grid_db(start: float = -20.0, stop: float = 40.0, step: float = 0.25):
    """Default SINR threshold grid in dB."""
    n = int(round((stop - start) / step))
    return start + step * np.arange(n + 1)


# ---------------------------------------------------------------------------
# interference kernels
# ---------------------------------------------------------------------------


def _tail_kernel(alpha: float, lower, spec: QuadratureSpec) -> np.ndarray:
    """T_a(l) for an array of lower limits, deduplicated and batch-integrated."""
    low = np.asarray(lower, dtype=float)
    uniq, inverse = np.unique(low.ravel(), return_inverse=True)

    def fn(t):
        u = 1.0 - t
        x = uniq[None, :] + (t / u)[:, None]
        with np.errstate(over="ignore", under="ignore"):
            return x / (1.0 + x**alpha) / np.square(u)[:, None]

    vals = integrate_many(fn, 0.0, 1.0, spec, label="interference tail kernel")
    return vals[inverse].reshape(low.shape)


@lru_cache(maxsize=None)
def _tail_kernel_at_zero(alpha: float, spec: QuadratureSpec) -> float:
    return float(_tail_kernel(alpha, np.zeros(1), spec)[0])


def _weighted_tail_kernel(alpha: float, c, spec: QuadratureSpec) -> np.ndarray:
    """W_a(c) for an array of weights c >= 0 in the 1 - exp(-c t^2) factor."""
    cc = np.asarray(c, dtype=float)
    uniq, inverse = np.unique(cc.ravel(), return_inverse=True)

    def fn(t):
        u = 1.0 - t
        x = (t / u)[:, None]
        with np.errstate(over="ignore", under="ignore"):
            grow = -np.expm1(-uniq[None, :] * np.square(x))
            return x * grow / (1.0 + x**alpha) / np.square(u)[:, None]

    vals = integrate_many(fn, 0.0, 1.0, spec, label="conditioned interference kernel")
    return vals[inverse].reshape(cc.shape)


def _scaled_tail_exponent(s, link, tx_power, lower, scn: Scenario) -> np.ndarray:
    """2 pi lam int_lower^inf (sKP v^-a) / (sKP v^-a + mu) v dv, without mode weight.

    Rescaling v = (sKP/mu)**(1/a) t turns the integral into scale^2 T_a(l/scale).
    """
    env = scn.env
    s_arr, low = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(lower, dtype=float))
    out = np.zeros(s_arr.shape)
    pos = s_arr > 0.0
    if not pos.any():
        return out
    q = s_arr[pos] * link.attenuation * tx_power / env.fading_rate
    scale_sq = q ** (2.0 / link.exponent)
    ratio = low[pos] * q ** (-1.0 / link.exponent)
    if np.all(ratio == 0.0):
        tails = _tail_kernel_at_zero(link.exponent, scn.quad)
    else:
        tails = _tail_kernel(link.exponent, ratio, scn.quad)
    out[pos] = 2.0 * math.pi * env.bs_density * scale_sq * tails
    return out


def _conditioned_ue_exponent(s, scn: Scenario) -> np.ndarray:
    """Uplink terminal-interference exponent for constant transmit power.

    Interfering terminals are counted only when farther from the victim
    station than from their own, which weights the kernel by the serving
    distance CDF; rescaling gives scale^2 W_a(pi nu lam scale^2).
    """
    env = scn.env
    link = env.link_bs_ue
    s_arr = np.asarray(s, dtype=float)
    out = np.zeros(s_arr.shape)
    pos = s_arr > 0.0
    if not pos.any():
        return out
    scale_sq = (s_arr[pos] * scn.power.p_ue * link.attenuation / env.fading_rate) ** (
        2.0 / link.exponent
    )
    c = math.pi * env.nu_ul * env.bs_density * scale_sq
    vals = _weighted_tail_kernel(link.exponent, c, scn.quad)
    out[pos] = 2.0 * math.pi * env.bs_density * scale_sq * vals
    return out


# ---------------------------------------------------------------------------
# nested forms for nonzero power control
# ---------------------------------------------------------------------------


def _ue_dl_exponent_nested(s: float, scn: Scenario, lower: float) -> float:
    """Terminal interference at a downlink terminal with power control.

    The interferer's transmit power depends on its own serving distance, so
    the expectation over that distance stays inside the outer integral.
    """
    env, p = scn.env, scn.power
    mu = env.fading_rate
    a1 = env.link_bs_ue.exponent
    k2, a2 = env.link_ue_ue.attenuation, env.link_ue_ue.exponent
    eps = p.power_control_eps
    b = s * k2 * p.p_ue * env.link_bs_ue.attenuation ** (-eps) / mu
    spec_in = scn.quad.inner()
    lam, nu = env.bs_density, env.nu_ul

    def outer(v):
        def inner(z):
            zz = z[:, None]
            with np.errstate(over="ignore", under="ignore"):
                num = b * zz ** (eps * a1) * v[None, :] ** (-a2)
                return num / (num + 1.0) * nearest_distance_pdf(zz, lam, nu)

        vals = integrate_many(inner, 0.0, math.inf, spec_in, label="power-controlled interferer expectation")
        return vals * v

    exponent = integrate(outer, lower, math.inf, scn.quad, label="terminal interference exponent (downlink)")
    return 2.0 * math.pi * lam * exponent


def _ue_ul_exponent_nested(s: float, scn: Scenario) -> float:
    """Conditioned terminal interference at a station, any power control.

    Direct double integral over the interferer distance v and its serving
    distance z < v (mapped to z = v u, u in (0, 1) so panels are shared).
    """
    env, p = scn.env, scn.power
    mu = env.fading_rate
    k1, a1 = env.link_bs_ue.attenuation, env.link_bs_ue.exponent
    eps = p.power_control_eps
    a_coeff = mu / (s * p.p_ue)
    k1e = k1 ** (eps - 1.0)
    spec_in = scn.quad.inner()
    lam, nu = env.bs_density, env.nu_ul

    def outer(v):
        def inner(u):
            zz = v[None, :] * u[:, None]
            with np.errstate(over="ignore", under="ignore"):
                den = a_coeff * k1e * zz ** (-(eps * a1)) * v[None, :] ** a1 + 1.0
                return nearest_distance_pdf(zz, lam, nu) / den * v[None, :]

        vals = integrate_many(inner, 0.0, 1.0, spec_in, label="conditioned interferer expectation")
        return vals * v

    exponent = integrate(outer, 0.0, math.inf, scn.quad, label="terminal interference exponent (uplink)")
    return 2.0 * math.pi * lam * exponent


def _ue_ul_exponent_by_parts(s: float, scn: Scenario) -> float:
    """Integration-by-parts form of `_ue_ul_exponent_nested`.

    Boundary term against the serving-distance CDF minus a CDF-weighted
    double integral; the split is only termwise convergent while
    alpha1 * (1 - eps) > 2, and serves as a cross-check of the direct forms.
    """
    env, p = scn.env, scn.power
    mu = env.fading_rate
    k1, a1 = env.link_bs_ue.attenuation, env.link_bs_ue.exponent
    eps = p.power_control_eps
    if a1 * (1.0 - eps) <= 2.0:
        raise ValueError(
            "integration-by-parts split diverges termwise for "
            f"alpha1*(1-eps) = {a1 * (1.0 - eps):.3f} <= 2"
        )
    a_coeff = mu / (s * p.p_ue)
    k1e = k1 ** (eps - 1.0)
    spec_in = scn.quad.inner()
    lam, nu = env.bs_density, env.nu_ul

    def boundary(v):
        den = a_coeff * k1e * v ** (a1 * (1.0 - eps)) + 1.0
        return v * nearest_distance_cdf(v, lam, nu) / den

    term1 = integrate(boundary, 0.0, math.inf, scn.quad, label="boundary term of conditioned exponent")
    term2 = 0.0
    if eps > 0.0:

        def outer(v):
            def inner(u):
                zz = v[None, :] * u[:, None]
                with np.errstate(over="ignore", under="ignore"):
                    q = a_coeff * k1e * zz ** (-(eps * a1)) * v[None, :] ** a1
                    grad = q * (eps * a1) / zz / np.square(q + 1.0)
                    return grad * nearest_distance_cdf(zz, lam, nu) * v[None, :]

            vals = integrate_many(inner, 0.0, 1.0, spec_in, label="parts correction inner integral")
            return vals * v

        term2 = integrate(outer, 0.0, math.inf, scn.quad, label="parts correction of conditioned exponent")
    return 2.0 * math.pi * lam * (term1 - term2)


# ---------------------------------------------------------------------------
# Laplace factors of the aggregate interference
# ---------------------------------------------------------------------------


def _as_output(values: np.ndarray, *inputs):
    if all(np.ndim(x) == 0 for x in inputs):
        return float(values)
    return values


def laplace_dl_from_bs(s, serving_distance, scn: Scenario):
    """Laplace factor of station interference at a downlink terminal.

    Stations transmitting downlink all lie beyond the serving distance, so the
    exponent integrates outward from that radius.  Accepts broadcastable
    arrays for s (1/W gain units) and the serving distance (m).
    """
    weight = scn.mix.rho_fd + scn.mix.rho_dl
    if weight == 0.0:
        return _as_output(np.ones(np.broadcast(np.asarray(s), np.asarray(serving_distance)).shape), s, serving_distance)
    expo = weight * _scaled_tail_exponent(s, scn.env.link_bs_ue, scn.power.p_bs, serving_distance, scn)
    return _as_output(np.exp(-expo), s, serving_distance)


def laplace_dl_from_ues(s, scn: Scenario, lower_limit=0.0):
    """Laplace factor of uplink-terminal interference at a downlink terminal.

    lower_limit = 0 admits the interferer inside the tagged cell (full-duplex
    cell); lower_limit = serving distance excludes it (half-duplex cell).
    """
    weight = scn.mix.rho_fd + scn.mix.rho_ul
    shape = np.broadcast(np.asarray(s), np.asarray(lower_limit)).shape
    if weight == 0.0:
        return _as_output(np.ones(shape), s, lower_limit)
    if scn.power.power_control_eps == 0.0:
        expo = _scaled_tail_exponent(s, scn.env.link_ue_ue, scn.power.p_ue, lower_limit, scn)
    else:
        s_b, low_b = np.broadcast_arrays(
            np.asarray(s, dtype=float), np.asarray(lower_limit, dtype=float)
        )
        expo = np.zeros(s_b.shape)
        flat_s, flat_l, flat_e = s_b.ravel(), low_b.ravel(), expo.ravel()
        for i in range(flat_s.size):
            if flat_s[i] > 0.0:
                flat_e[i] = _ue_dl_exponent_nested(float(flat_s[i]), scn, float(flat_l[i]))
        expo = flat_e.reshape(s_b.shape)
    return _as_output(np.exp(-weight * expo), s, lower_limit)


def laplace_ul_from_bs(s, scn: Scenario):
    """Laplace factor of station-to-station interference at an uplink receiver.

    The nearest downlink-transmitting station can be arbitrarily close, so the
    exponent integrates from zero.
    """
    weight = scn.mix.rho_fd + scn.mix.rho_dl
    if weight == 0.0:
        return _as_output(np.ones(np.shape(s)), s)
    expo = weight * _scaled_tail_exponent(s, scn.env.link_bs_bs, scn.power.p_bs, 0.0, scn)
    return _as_output(np.exp(-expo), s)


def laplace_ul_from_ues(s, scn: Scenario, method: str = "auto"):
    """Laplace factor of other-cell uplink terminal interference at a station.

    Each interfering terminal is closer to its own station than to the victim,
    which conditions the exponent on its serving-distance law.  `method`
    selects the evaluation route: "auto" uses the rescaled kernel for eps = 0
    and nested quadrature otherwise; "nested" forces the direct double
    integral; "parts" forces the integration-by-parts split (cross-check).
    """
    weight = scn.mix.rho_fd + scn.mix.rho_ul
    if weight == 0.0:
        return _as_output(np.ones(np.shape(s)), s)
    if method == "auto" and scn.power.power_control_eps == 0.0:
        expo = _conditioned_ue_exponent(s, scn)
    else:
        fn = {"auto": _ue_ul_exponent_nested, "nested": _ue_ul_exponent_nested, "parts": _ue_ul_exponent_by_parts}[method]
        s_arr = np.asarray(s, dtype=float)
        expo = np.zeros(s_arr.shape)
        flat_s, flat_e = s_arr.ravel(), expo.ravel()
        for i in range(flat_s.size):
            if flat_s[i] > 0.0:
                flat_e[i] = fn(float(flat_s[i]), scn)
        expo = flat_e.reshape(s_arr.shape)
    return _as_output(np.exp(-weight * expo), s)


# ---------------------------------------------------------------------------
# SINR CCDFs
# ---------------------------------------------------------------------------


def _check_thresholds(y_arr):
    if np.any(y_arr <= 0.0) or not np.isfinite(y_arr).all():
        raise ValueError("SINR thresholds must be positive finite linear ratios")


def _ccdf_downlink(y, scn: Scenario, exclude_own_cell_ue: bool):
    env, power = scn.env, scn.power
    mu = env.fading_rate
    k1, a1 = env.link_bs_ue.attenuation, env.link_bs_ue.exponent
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    _check_thresholds(y_arr)
    rmax = truncation_radius(env.bs_density, env.nu_dl, scn.quad)

    def integrand(r):
        rr = r[:, None]
        s = (mu / (power.p_bs * k1)) * y_arr[None, :] * rr**a1
        vals = np.exp(-s * env.noise_dl)
        vals = vals * laplace_dl_from_bs(s, rr, scn)
        vals = vals * laplace_dl_from_ues(s, scn, rr if exclude_own_cell_ue else 0.0)
        return vals * nearest_distance_pdf(rr, env.bs_density, env.nu_dl)

    out = integrate_many(integrand, 0.0, rmax, scn.quad, label="downlink coverage radial integral")
    out = np.clip(out, 0.0, 1.0)
    return out if np.ndim(y) else float(out[0])


def _ccdf_uplink(y, scn: Scenario, include_self_interference: bool):
    env, power = scn.env, scn.power
    mu = env.fading_rate
    k1, a1 = env.link_bs_ue.attenuation, env.link_bs_ue.exponent
    eps = power.power_control_eps
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    _check_thresholds(y_arr)
    rmax = truncation_radius(env.bs_density, env.nu_ul, scn.quad)
    si = residual_self_interference(power) if include_self_interference else 0.0

    def integrand(r):
        rr = r[:, None]
        s = (mu / power.p_ue) * k1 ** (eps - 1.0) * y_arr[None, :] * rr ** (a1 * (1.0 - eps))
        vals = np.exp(-s * (env.noise_ul + si))
        vals = vals * laplace_ul_from_bs(s, scn)
        vals = vals * laplace_ul_from_ues(s, scn)
        return vals * nearest_distance_pdf(rr, env.bs_density, env.nu_ul)

    out = integrate_many(integrand, 0.0, rmax, scn.quad, label="uplink coverage radial integral")
    out = np.clip(out, 0.0, 1.0)
    return out if np.ndim(y) else float(out[0])


def ccdf_downlink_fd(y, scn: Scenario):
    """P[SINR > y] for the downlink terminal of a full-duplex cell."""
    return _ccdf_downlink(y, scn, exclude_own_cell_ue=False)


def ccdf_downlink_hd(y, scn: Scenario):
    """P[SINR > y] for the downlink terminal of a downlink-only cell.

    The cell hosts no uplink transmission, so interfering terminals are taken
    to lie beyond the serving distance.
    """
    return _ccdf_downlink(y, scn, exclude_own_cell_ue=True)


def ccdf_uplink_fd(y, scn: Scenario):
    """P[SINR > y] at the station of a full-duplex cell (residual SI included)."""
    return _ccdf_uplink(y, scn, include_self_interference=True)


def ccdf_uplink_hd(y, scn: Scenario):
    """P[SINR > y] at the station of an uplink-only cell (no self-interference)."""
    return _ccdf_uplink(y, scn, include_self_interference=False)


def _thd_reference(scn: Scenario, mix: DuplexMix) -> Scenario:
    # the reference system is a conventional cellular deployment and is
    # evaluated with the uncorrected nearest-station law; the correction
    # factors exist to patch the mixed system's scheduling correlation
    return replace(scn, mix=mix, env=replace(scn.env, nu_dl=1.0, nu_ul=1.0))


def ccdf_thd_downlink(y, scn: Scenario):
    """Downlink CCDF when every cell transmits downlink in the slot."""
    return ccdf_downlink_hd(y, _thd_reference(scn, DuplexMix(0.0, 1.0, 0.0)))


def ccdf_thd_uplink(y, scn: Scenario):
    """Uplink CCDF when every cell receives uplink in the slot."""
    return ccdf_uplink_hd(y, _thd_reference(scn, DuplexMix(0.0, 0.0, 1.0)))


_CCDF_BY_KIND = {
    ("dl", "fd"): ccdf_downlink_fd,
    ("dl", "hd"): ccdf_downlink_hd,
    ("ul", "fd"): ccdf_uplink_fd,
    ("ul", "hd"): ccdf_uplink_hd,
}


def sinr_curve(scn: Scenario, direction: str, cell: str, thresholds_db=None) -> DistributionCurve:
    """Tabulated CCDF for one direction ("dl"/"ul") and cell type ("fd"/"hd")."""
    if thresholds_db is None:
        thresholds_db = default_threshold_grid_db()
    fn = _CCDF_BY_KIND[(direction, cell)]
    grid = np.asarray(thresholds_db, dtype=float)
    probs = fn(db_to_linear(grid), scn)
    # quadrature jitter can break monotonicity at the 1e-9 level; tidy it
    probs = np.minimum.accumulate(np.clip(probs, 0.0, 1.0))
    return DistributionCurve(tuple(grid), tuple(probs))


# ---------------------------------------------------------------------------
# rates, ASE, coverage
# ---------------------------------------------------------------------------


def mean_rate(ccdf, scn: Scenario) -> float:
    """Average spectral efficiency int_0^inf P[log2(1 + SINR) > u] du (bit/s/Hz).

    `ccdf` maps linear SINR thresholds (scalar or array) to probabilities.
    The integral is truncated once the CCDF falls below the tail cutoff.
    """
    cutoff = scn.quad.tail_mass_cutoff
    u_hi = 1.0
    while u_hi < _RATE_U_CAP and float(np.max(np.atleast_1d(ccdf(2.0**u_hi - 1.0)))) > cutoff:
        u_hi *= 2.0

    def integrand(u):
        return ccdf(np.exp2(u) - 1.0)

    val = integrate(integrand, 0.0, u_hi, scn.quad, label="mean rate integral")
    return max(val, 0.0)


def cell_rate(scn: Scenario, direction: str, cell: str) -> float:
    """Mean spectral efficiency of one direction in one cell type."""
    fn = _CCDF_BY_KIND[(direction, cell)]
    return mean_rate(lambda y: fn(y, scn), scn)


def mixed_rates(scn: Scenario) -> tuple[float, float]:
    """Network average (downlink, uplink) rates weighted by the duplex mix."""
    m = scn.mix
    r_fd_dl = cell_rate(scn, "dl", "fd") if m.rho_fd > 0.0 else 0.0
    r_hd_dl = cell_rate(scn, "dl", "hd") if m.rho_dl > 0.0 else 0.0
    r_fd_ul = cell_rate(scn, "ul", "fd") if m.rho_fd > 0.0 else 0.0
    r_hd_ul = cell_rate(scn, "ul", "hd") if m.rho_ul > 0.0 else 0.0
    return (
        m.rho_fd * r_fd_dl + m.rho_dl * r_hd_dl,
        m.rho_fd * r_fd_ul + m.rho_ul * r_hd_ul,
    )


def ase(scn: Scenario) -> tuple[float, float]:
    """(downlink, uplink) area spectral efficiency in bit/s/Hz/m^2."""
    rate_dl, rate_ul = mixed_rates(scn)
    lam = scn.env.bs_density
    return lam * rate_dl, lam * rate_ul


def coverage(scn: Scenario, threshold_db: float = -8.0) -> tuple[float, float]:
    """Fraction of receivers above the outage threshold, per direction.

    Mode CCDFs are mixed in proportion to the cell probabilities active in
    each direction.
    """
    m = scn.mix
    y = db_to_linear(threshold_db)
    if m.rho_fd + m.rho_dl <= 0.0:
        raise DegenerateMix("no cell transmits downlink in this mix")
    if m.rho_fd + m.rho_ul <= 0.0:
        raise DegenerateMix("no cell receives uplink in this mix")
    cov_fd_dl = ccdf_downlink_fd(y, scn) if m.rho_fd > 0.0 else 0.0
    cov_hd_dl = ccdf_downlink_hd(y, scn) if m.rho_dl > 0.0 else 0.0
    cov_fd_ul = ccdf_uplink_fd(y, scn) if m.rho_fd > 0.0 else 0.0
    cov_hd_ul = ccdf_uplink_hd(y, scn) if m.rho_ul > 0.0 else 0.0
    cov_dl = (m.rho_fd * cov_fd_dl + m.rho_dl * cov_hd_dl) / (m.rho_fd + m.rho_dl)
    cov_ul = (m.rho_fd * cov_fd_ul + m.rho_ul * cov_hd_ul) / (m.rho_fd + m.rho_ul)
    return cov_dl, cov_ul


def thd_baseline(scn: Scenario, time_share: float = 0.5, threshold_db: float = -8.0) -> ThdBaseline:
    """Synchronised half-duplex reference: per-direction rates, ASE, coverage.

    The downlink slot sees station interference only; the uplink slot sees
    other-cell terminal interference only and no self-interference.  ASE
    carries the slot `time_share` (long-run fraction given to each direction).
    """
    if not 0.0 < time_share <= 1.0:
        raise ValueError(f"time_share must lie in (0, 1], got {time_share}")
    rate_dl = mean_rate(lambda y: ccdf_thd_downlink(y, scn), scn)
    rate_ul = mean_rate(lambda y: ccdf_thd_uplink(y, scn), scn)
    y = db_to_linear(threshold_db)
    lam = scn.env.bs_density
    return ThdBaseline(
        ase_dl=time_share * lam * rate_dl,
        ase_ul=time_share * lam * rate_ul,
        coverage_dl=float(ccdf_thd_downlink(y, scn)),
        coverage_ul=float(ccdf_thd_uplink(y, scn)),
        rate_dl=rate_dl,
        rate_ul=rate_ul,
        time_share=time_share,
    )


def link_report(
    scn: Scenario,
    direction: str,
    cell: str,
    thresholds_db=None,
    outage_db: float = -8.0,
) -> LinkDirectionReport:
    """Curve, mean rate and coverage for one direction of one cell type."""
    curve = sinr_curve(scn, direction, cell, thresholds_db)
    rate = cell_rate(scn, direction, cell)
    fn = _CCDF_BY_KIND[(direction, cell)]
    cov = float(fn(db_to_linear(outage_db), scn))
    return LinkDirectionReport(ccdf=curve, mean_rate=rate, coverage=cov)


def metrics_report(scn: Scenario, threshold_db: float = -8.0) -> MetricsReport:
    """Per-mode rates plus mixed ASE and coverage in one bundle."""
    m = scn.mix
    r_fd_dl = cell_rate(scn, "dl", "fd") if m.rho_fd > 0.0 else 0.0
    r_hd_dl = cell_rate(scn, "dl", "hd") if m.rho_dl > 0.0 else 0.0
    r_fd_ul = cell_rate(scn, "ul", "fd") if m.rho_fd > 0.0 else 0.0
    r_hd_ul = cell_rate(scn, "ul", "hd") if m.rho_ul > 0.0 else 0.0
    lam = scn.env.bs_density
    cov_dl, cov_ul = coverage(scn, threshold_db)
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
