import math
from dataclasses import replace

import numpy as np
import pytest

import mixcell.analytic as an
from mixcell.analytic import (
    Scenario,
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
from mixcell.errors import DegenerateMix
from mixcell.model import (
    DuplexMix,
    LinkClass,
    PowerConfig,
    RadioEnvironment,
    db_to_linear,
    dbm_to_watt,
    noise_power,
)
from mixcell.quadrature import QuadratureSpec

LINK = LinkClass.from_db(-30.6, 3.67)


def table_env(**kw):
    defaults = dict(
        bs_density=1e-3,
        ue_density=1e-2,
        link_bs_ue=LINK,
        link_ue_ue=LINK,
        link_bs_bs=LINK,
        noise_dl=noise_power(-174.0, 10e6, 9.0),
        noise_ul=noise_power(-174.0, 10e6, 8.0),
    )
    defaults.update(kw)
    return RadioEnvironment(**defaults)


def table_scenario(rho_fd=0.5, sic_db=110.0, p_bs_dbm=24.0, p_ue_dbm=23.0, eps=0.0, **env_kw):
    return Scenario(
        env=table_env(**env_kw),
        mix=DuplexMix.from_fd_fraction(rho_fd),
        power=PowerConfig(
            p_bs=dbm_to_watt(p_bs_dbm),
            p_ue=dbm_to_watt(p_ue_dbm),
            power_control_eps=eps,
            sic_db=sic_db,
        ),
    )


def il_scenario(rho_fd=1.0, eps=0.0):
    """Interference-limited, equal link classes and powers."""
    return Scenario(
        env=table_env(noise_dl=0.0, noise_ul=0.0),
        mix=DuplexMix.from_fd_fraction(rho_fd),
        power=PowerConfig(
            p_bs=dbm_to_watt(24.0),
            p_ue=dbm_to_watt(24.0),
            power_control_eps=eps,
            sic_db=math.inf,
        ),
    )


GRID_DB = np.arange(-20.0, 40.5, 1.0)
Y_GRID = db_to_linear(GRID_DB)


class TestLaplaceFactors:
    def test_zero_argument_is_unity(self):
        scn = table_scenario()
        assert laplace_dl_from_bs(0.0, 10.0, scn) == 1.0
        assert laplace_dl_from_ues(0.0, scn, 0.0) == 1.0
        assert laplace_ul_from_bs(0.0, scn) == 1.0
        assert laplace_ul_from_ues(0.0, scn) == 1.0

    def test_zero_weight_is_unity(self):
        ul_only = replace(table_scenario(), mix=DuplexMix(0.0, 0.0, 1.0))
        assert laplace_dl_from_bs(1e10, 10.0, ul_only) == 1.0
        assert laplace_ul_from_bs(1e10, ul_only) == 1.0
        dl_only = replace(table_scenario(), mix=DuplexMix(0.0, 1.0, 0.0))
        assert laplace_dl_from_ues(1e10, dl_only, 0.0) == 1.0
        assert laplace_ul_from_ues(1e10, dl_only) == 1.0

    def test_values_in_unit_interval(self):
        scn = table_scenario()
        s = np.geomspace(1e6, 1e12, 7)
        for fn in (
            lambda: laplace_dl_from_bs(s, 15.0, scn),
            lambda: laplace_dl_from_ues(s, scn, 0.0),
            lambda: laplace_ul_from_bs(s, scn),
            lambda: laplace_ul_from_ues(s, scn),
        ):
            vals = fn()
            assert np.all(vals > 0.0) and np.all(vals <= 1.0)
            assert np.all(np.diff(vals) < 0.0)  # strictly decreasing in s

    def test_excluding_own_cell_raises_factor(self):
        # shrinking the integration domain from (0,inf) to (R,inf) removes
        # interference, so the half-duplex variant dominates pointwise
        scn = table_scenario()
        s = np.geomspace(1e7, 1e13, 7)
        for r in (5.0, 15.0, 40.0):
            fd = laplace_dl_from_ues(s, scn, 0.0)
            hd = laplace_dl_from_ues(s, scn, r)
            assert np.all(hd >= fd)
            assert np.all(hd[s > 1e8] > fd[s > 1e8])

    def test_station_factor_from_zero_dominated(self):
        # identical link classes: integrating from 0 counts strictly more
        # interference than integrating from R > 0
        scn = table_scenario()
        s = np.geomspace(1e7, 1e13, 7)
        for r in (5.0, 15.0, 40.0):
            hx = laplace_ul_from_bs(s, scn)
            lx = laplace_dl_from_bs(s, r, scn)
            assert np.all(hx <= lx)

    def test_dl_station_factor_against_point_process_oracle(self):
        # brute-force: average exp(-s * I) over Poisson draws of stations
        # beyond the serving distance, with unit-mean exponential fades
        scn = table_scenario(rho_fd=0.5)
        env, power = scn.env, scn.power
        r_serve = 13.0
        y0 = 1.0
        s = env.fading_rate * y0 * r_serve**LINK.exponent / (power.p_bs * LINK.attenuation)
        analytic = laplace_dl_from_bs(s, r_serve, scn)

        lam_eff = (scn.mix.rho_fd + scn.mix.rho_dl) * env.bs_density
        r_out = 300.0
        # truncation bias must sit far below the comparison tolerance
        alpha = LINK.exponent
        tail = (
            2.0
            * math.pi
            * lam_eff
            * (s * LINK.attenuation * power.p_bs / env.fading_rate)
            * r_out ** (2.0 - alpha)
            / (alpha - 2.0)
        )
        assert tail < 5e-3

        rng = np.random.default_rng(1234)
        n_draws = 100_000
        area = math.pi * (r_out**2 - r_serve**2)
        mean_pts = lam_eff * area
        total = np.zeros(n_draws)
        chunk = 10_000
        for lo in range(0, n_draws, chunk):
            n = min(chunk, n_draws - lo)
            counts = rng.poisson(mean_pts, n)
            m = int(counts.sum())
            u = rng.random(m)
            radii = np.sqrt(r_serve**2 + u * (r_out**2 - r_serve**2))
            fades = rng.exponential(1.0, m)
            terms = s * power.p_bs * LINK.attenuation * fades * radii**-alpha
            ids = np.repeat(np.arange(n), counts)
            sums = np.bincount(ids, weights=terms, minlength=n)
            total[lo : lo + n] = np.exp(-sums)
        oracle = float(np.mean(total))
        assert analytic == pytest.approx(oracle, rel=0.01)

    def test_eps_zero_routes_agree(self):
        # rescaled-kernel, nested double integral and integration-by-parts
        # evaluations of the conditioned uplink exponent coincide
        scn = il_scenario()
        weight = scn.mix.rho_fd + scn.mix.rho_ul
        for s in (1e7, 1e9, 1e11, 1e13):
            fast = float(an._conditioned_ue_exponent(np.asarray(s), scn))
            nested = an._ue_ul_exponent_nested(s, scn)
            parts = an._ue_ul_exponent_by_parts(s, scn)
            assert nested == pytest.approx(fast, rel=1e-6)
            assert parts == pytest.approx(fast, rel=1e-6)
            assert laplace_ul_from_ues(s, scn, method="parts") == pytest.approx(
                math.exp(-weight * fast), rel=1e-5
            )

    def test_dl_ue_factor_eps_zero_nested_matches_fast(self):
        scn = table_scenario()
        for s, lower in ((1e8, 0.0), (1e10, 12.0)):
            fast = laplace_dl_from_ues(s, scn, lower)
            nested = math.exp(
                -(scn.mix.rho_fd + scn.mix.rho_ul) * an._ue_dl_exponent_nested(s, scn, lower)
            )
            assert nested == pytest.approx(fast, rel=1e-6)

    def test_power_control_routes_agree(self):
        # the by-parts split converges termwise only for small exponents;
        # cancellation there limits the attainable agreement
        scn = replace(
            il_scenario(),
            power=PowerConfig(dbm_to_watt(24.0), dbm_to_watt(24.0), power_control_eps=0.3, sic_db=math.inf),
        )
        for s in (1e8, 1e10):
            nested = an._ue_ul_exponent_nested(s, scn)
            parts = an._ue_ul_exponent_by_parts(s, scn)
            assert parts == pytest.approx(nested, rel=1e-2)

    def test_dl_ue_factor_array_matches_scalar_under_power_control(self):
        scn = replace(
            table_scenario(),
            power=PowerConfig(dbm_to_watt(24.0), dbm_to_watt(23.0), power_control_eps=0.3),
        )
        s = np.array([1e8, 1e10])
        lower = np.array([0.0, 12.0])
        batched = laplace_dl_from_ues(s, scn, lower)
        single = [laplace_dl_from_ues(float(si), scn, float(li)) for si, li in zip(s, lower)]
        assert np.allclose(batched, single, rtol=1e-12)

    def test_by_parts_rejects_divergent_split(self):
        scn = replace(
            il_scenario(),
            power=PowerConfig(dbm_to_watt(24.0), dbm_to_watt(24.0), power_control_eps=0.9, sic_db=math.inf),
        )
        with pytest.raises(ValueError):
            an._ue_ul_exponent_by_parts(1e9, scn)


class TestCcdfProperties:
    @pytest.mark.parametrize("fn", [ccdf_downlink_fd, ccdf_downlink_hd, ccdf_uplink_fd, ccdf_uplink_hd])
    def test_limit_at_vanishing_threshold(self, fn):
        # terminals interfere from arbitrarily small distances, so the CCDF
        # approaches 1 only algebraically (like y**(2/alpha)) as y -> 0
        scn = table_scenario()
        near = fn(1e-8, scn)
        nearer = fn(1e-10, scn)
        assert near == pytest.approx(1.0, abs=2e-4)
        assert 1.0 >= nearer >= near - 1e-12

    @pytest.mark.parametrize("fn", [ccdf_downlink_fd, ccdf_downlink_hd, ccdf_uplink_fd, ccdf_uplink_hd])
    def test_monotone_and_in_range(self, fn):
        scn = table_scenario()
        vals = fn(Y_GRID, scn)
        assert np.all(vals >= 0.0) and np.all(vals <= 1.0)
        assert np.all(np.diff(vals) <= 1e-9)

    def test_half_duplex_dominates_full_duplex(self):
        scn = table_scenario()
        assert np.all(ccdf_downlink_hd(Y_GRID, scn) >= ccdf_downlink_fd(Y_GRID, scn) - 1e-9)
        assert np.all(ccdf_uplink_hd(Y_GRID, scn) >= ccdf_uplink_fd(Y_GRID, scn) - 1e-9)

    def test_hd_downlink_coverage_at_outage_threshold(self):
        scn = table_scenario(rho_fd=0.5)
        y = db_to_linear(-8.0)
        assert ccdf_downlink_hd(y, scn) >= ccdf_downlink_fd(y, scn)

    def test_downlink_ignores_cancellation_bit_exact(self):
        curves = [
            ccdf_downlink_fd(Y_GRID, table_scenario(sic_db=sic)) for sic in (70.0, 85.0, 100.0, 110.0)
        ]
        for other in curves[1:]:
            assert np.array_equal(curves[0], other)

    def test_uplink_hd_equals_fd_with_perfect_cancellation(self):
        scn = table_scenario(sic_db=math.inf)
        fd = ccdf_uplink_fd(Y_GRID, scn)
        hd = ccdf_uplink_hd(Y_GRID, scn)
        assert np.allclose(fd, hd, rtol=0, atol=1e-12)

    def test_uplink_hd_dominates_fd_with_finite_cancellation(self):
        scn = table_scenario(sic_db=70.0)
        assert np.all(ccdf_uplink_hd(Y_GRID, scn) >= ccdf_uplink_fd(Y_GRID, scn) - 1e-12)

    def test_common_power_scaling_invariance(self):
        base = il_scenario(rho_fd=0.5)
        scaled = replace(
            base,
            power=PowerConfig(base.power.p_bs * 13.7, base.power.p_ue * 13.7, sic_db=math.inf),
        )
        y = db_to_linear(np.array([-10.0, 0.0, 10.0, 25.0]))
        for fn in (ccdf_downlink_fd, ccdf_downlink_hd, ccdf_uplink_fd, ccdf_uplink_hd):
            assert np.max(np.abs(fn(y, base) - fn(y, scaled))) < 1e-9

    def test_rejects_nonpositive_threshold(self):
        scn = table_scenario()
        with pytest.raises(ValueError):
            ccdf_downlink_fd(0.0, scn)
        with pytest.raises(ValueError):
            ccdf_uplink_fd(np.array([1.0, -2.0]), scn)

    def test_power_control_shifts_uplink_curve(self):
        base = il_scenario(eps=0.0)
        pc = il_scenario(eps=0.5)
        y = db_to_linear(np.array([0.0]))
        a = ccdf_uplink_fd(y, base)[0]
        b = ccdf_uplink_fd(y, pc)[0]
        assert 0.0 < b < 1.0
        assert abs(a - b) > 1e-3  # power control visibly changes the law


class TestCurves:
    def test_grid_and_monotone(self):
        scn = table_scenario()
        curve = sinr_curve(scn, "dl", "fd", GRID_DB)
        assert curve.thresholds_db == tuple(GRID_DB)
        probs = np.asarray(curve.probabilities)
        assert np.all(np.diff(probs) <= 0.0)

    def test_link_report_coverage_consistent_with_curve(self):
        scn = table_scenario()
        rep = link_report(scn, "dl", "fd", GRID_DB, outage_db=-8.0)
        assert rep.coverage == pytest.approx(rep.ccdf.value_at(-8.0), abs=1e-9)
        assert rep.mean_rate > 0.0


class TestRates:
    def test_zero_ccdf_gives_zero_rate(self):
        scn = table_scenario()
        assert mean_rate(lambda y: np.zeros_like(np.asarray(y, dtype=float)), scn) == 0.0

    def test_step_ccdf_gives_log2(self):
        scn = table_scenario()
        gamma0 = 4.0

        def step(y):
            return (np.asarray(y, dtype=float) < gamma0).astype(float)

        assert mean_rate(step, scn) == pytest.approx(math.log2(1.0 + gamma0), rel=1e-5)

    def test_rate_monotone_in_ccdf(self):
        scn = table_scenario()
        rate_fd = cell_rate(scn, "dl", "fd")
        rate_hd = cell_rate(scn, "dl", "hd")
        assert rate_hd >= rate_fd > 0.0

    def test_mixed_rates_weighting(self):
        scn = table_scenario(rho_fd=0.5)
        r_dl, r_ul = mixed_rates(scn)
        want_dl = 0.5 * cell_rate(scn, "dl", "fd") + 0.25 * cell_rate(scn, "dl", "hd")
        want_ul = 0.5 * cell_rate(scn, "ul", "fd") + 0.25 * cell_rate(scn, "ul", "hd")
        assert r_dl == pytest.approx(want_dl, rel=1e-12)
        assert r_ul == pytest.approx(want_ul, rel=1e-12)

    def test_all_fd_mix(self):
        scn = table_scenario(rho_fd=1.0)
        r_dl, r_ul = mixed_rates(scn)
        assert r_dl == pytest.approx(cell_rate(scn, "dl", "fd"), rel=1e-12)
        assert r_ul == pytest.approx(cell_rate(scn, "ul", "fd"), rel=1e-12)

    def test_no_fd_mix(self):
        scn = table_scenario(rho_fd=0.0)
        r_dl, r_ul = mixed_rates(scn)
        assert r_dl == pytest.approx(0.5 * cell_rate(scn, "dl", "hd"), rel=1e-12)
        assert r_ul == pytest.approx(0.5 * cell_rate(scn, "ul", "hd"), rel=1e-12)


class TestAseCoverage:
    def test_ase_is_density_times_rate(self):
        scn = table_scenario(rho_fd=0.5)
        a_dl, a_ul = ase(scn)
        r_dl, r_ul = mixed_rates(scn)
        assert a_dl == pytest.approx(scn.env.bs_density * r_dl, rel=1e-12)
        assert a_ul == pytest.approx(scn.env.bs_density * r_ul, rel=1e-12)

    def test_coverage_all_fd(self):
        scn = table_scenario(rho_fd=1.0)
        cov_dl, cov_ul = coverage(scn, -8.0)
        y = db_to_linear(-8.0)
        assert cov_dl == pytest.approx(float(ccdf_downlink_fd(y, scn)), rel=1e-12)
        assert cov_ul == pytest.approx(float(ccdf_uplink_fd(y, scn)), rel=1e-12)

    def test_coverage_tends_to_one(self):
        scn = table_scenario()
        cov_dl, cov_ul = coverage(scn, -200.0)
        assert cov_dl == pytest.approx(1.0, abs=1e-5)
        assert cov_ul == pytest.approx(1.0, abs=1e-5)

    def test_degenerate_mix_raises(self):
        dl_only = replace(table_scenario(), mix=DuplexMix(0.0, 1.0, 0.0))
        with pytest.raises(DegenerateMix):
            coverage(dl_only, -8.0)
        ul_only = replace(table_scenario(), mix=DuplexMix(0.0, 0.0, 1.0))
        with pytest.raises(DegenerateMix):
            coverage(ul_only, -8.0)

    def test_metrics_report_wiring(self):
        scn = table_scenario(rho_fd=0.5)
        rep = metrics_report(scn, -8.0)
        lam = scn.env.bs_density
        assert rep.ase_dl == pytest.approx(lam * (0.5 * rep.rate_fd_dl + 0.25 * rep.rate_hd_dl), rel=1e-12)
        assert rep.ase_ul == pytest.approx(lam * (0.5 * rep.rate_fd_ul + 0.25 * rep.rate_hd_ul), rel=1e-12)
        assert 0.0 <= rep.coverage_dl <= 1.0
        assert 0.0 <= rep.coverage_ul <= 1.0


class TestThdBaseline:
    def test_independent_of_fd_fraction(self):
        a = thd_baseline(table_scenario(rho_fd=0.1))
        b = thd_baseline(table_scenario(rho_fd=0.9))
        assert a == b

    def test_downlink_independent_of_station_power_without_noise(self):
        lo = thd_baseline(replace(il_scenario(), power=PowerConfig(dbm_to_watt(10.0), dbm_to_watt(24.0), sic_db=math.inf)))
        hi = thd_baseline(replace(il_scenario(), power=PowerConfig(dbm_to_watt(30.0), dbm_to_watt(24.0), sic_db=math.inf)))
        assert lo.rate_dl == pytest.approx(hi.rate_dl, rel=1e-9)
        assert lo.coverage_dl == pytest.approx(hi.coverage_dl, rel=1e-9)

    def test_time_share_scales_ase_only(self):
        half = thd_baseline(table_scenario(), time_share=0.5)
        full = thd_baseline(table_scenario(), time_share=1.0)
        assert full.ase_dl == pytest.approx(2.0 * half.ase_dl, rel=1e-12)
        assert full.rate_dl == pytest.approx(half.rate_dl, rel=1e-12)
        assert full.coverage_dl == pytest.approx(half.coverage_dl, rel=1e-12)

    def test_matches_single_direction_mixes(self):
        # the baseline equals the single-direction mixes evaluated with the
        # uncorrected nearest-station law
        scn = table_scenario()
        thd = thd_baseline(scn, time_share=1.0)
        y = db_to_linear(np.array([0.0]))
        ref_env = replace(scn.env, nu_dl=1.0, nu_ul=1.0)
        dl_mix = replace(scn, env=ref_env, mix=DuplexMix(0.0, 1.0, 0.0))
        ul_mix = replace(scn, env=ref_env, mix=DuplexMix(0.0, 0.0, 1.0))
        assert ccdf_thd_downlink(y, scn)[0] == ccdf_downlink_hd(y, dl_mix)[0]
        assert ccdf_thd_uplink(y, scn)[0] == ccdf_uplink_hd(y, ul_mix)[0]
        assert thd.ase_dl == pytest.approx(scn.env.bs_density * cell_rate(dl_mix, "dl", "hd"), rel=1e-9)

    def test_reference_law_is_insensitive_to_mixed_corrections(self):
        scn = table_scenario()
        bumped = replace(scn, env=replace(scn.env, nu_ul=1.5, nu_dl=1.25))
        assert thd_baseline(scn) == thd_baseline(bumped)
