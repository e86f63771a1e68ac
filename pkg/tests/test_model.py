import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixcell.errors import NonPositiveDistance
from mixcell.model import (
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
from mixcell.quadrature import QuadratureSpec, integrate


def table_link():
    # 140.7 + 36.7 log10(R_km) dB path loss, R in metres
    return LinkClass.from_db(-30.6, 3.67)


class TestConversions:
    def test_zero_db_is_unity(self):
        assert db_to_linear(0.0) == 1.0

    def test_24_dbm(self):
        assert dbm_to_watt(24.0) == pytest.approx(10 ** (-0.6), rel=1e-12)
        assert dbm_to_watt(24.0) == pytest.approx(0.251188643, rel=1e-8)

    def test_110_db(self):
        assert db_to_linear(110.0) == pytest.approx(1e11, rel=1e-12)

    @given(st.floats(min_value=-200.0, max_value=200.0))
    def test_db_roundtrip(self, x_db):
        assert linear_to_db(db_to_linear(x_db)) == pytest.approx(x_db, abs=1e-9)

    @given(st.floats(min_value=-120.0, max_value=80.0))
    def test_dbm_roundtrip(self, x_dbm):
        assert watt_to_dbm(dbm_to_watt(x_dbm)) == pytest.approx(x_dbm, abs=1e-9)


class TestPathLoss:
    def test_table_value_at_1km(self):
        gain = path_loss(table_link(), 1000.0)
        assert linear_to_db(gain) == pytest.approx(-140.7, abs=1e-9)

    def test_table_value_at_100m(self):
        gain = path_loss(table_link(), 100.0)
        assert linear_to_db(gain) == pytest.approx(-104.0, abs=1e-9)

    def test_unit_distance_returns_attenuation(self):
        link = LinkClass(0.123, 3.5)
        assert path_loss(link, 1.0) == pytest.approx(0.123, rel=1e-15)

    def test_rejects_nonpositive_distance(self):
        with pytest.raises(NonPositiveDistance):
            path_loss(table_link(), 0.0)
        with pytest.raises(NonPositiveDistance):
            path_loss(table_link(), np.array([1.0, -2.0]))

    @given(
        st.floats(min_value=0.1, max_value=1e4),
        st.floats(min_value=1.1, max_value=50.0),
    )
    def test_strictly_decreasing(self, d, factor):
        link = table_link()
        assert path_loss(link, d * factor) < path_loss(link, d)

    def test_loglog_slope_is_minus_alpha(self):
        link = table_link()
        d = np.array([3.0, 30.0, 300.0, 3000.0])
        slope = np.diff(np.log10(path_loss(link, d))) / np.diff(np.log10(d))
        assert np.allclose(slope, -3.67, atol=1e-12)

    def test_invariants(self):
        with pytest.raises(ValueError):
            LinkClass(0.0, 3.67)
        with pytest.raises(ValueError):
            LinkClass(1.0, 2.0)


class TestNoisePower:
    def test_terminal_figure(self):
        assert watt_to_dbm(noise_power(-174.0, 10e6, 9.0)) == pytest.approx(-95.0, abs=1e-9)

    def test_station_figure(self):
        assert watt_to_dbm(noise_power(-174.0, 10e6, 8.0)) == pytest.approx(-96.0, abs=1e-9)

    def test_identity_case(self):
        assert watt_to_dbm(noise_power(-174.0, 1.0, 0.0)) == pytest.approx(-174.0, abs=1e-9)

    def test_rejects_zero_bandwidth(self):
        with pytest.raises(ValueError):
            noise_power(-174.0, 0.0, 9.0)


class TestNearestDistanceLaw:
    def test_pdf_zero_at_origin(self):
        assert nearest_distance_pdf(0.0, 1e-3, 1.25) == 0.0

    def test_pdf_normalises_with_correction(self):
        total = integrate(lambda r: nearest_distance_pdf(r, 1e-3, 1.25), 0.0, math.inf)
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_median_with_correction(self):
        lam, nu = 1e-3, 1.25
        median = math.sqrt(math.log(2.0) / (math.pi * nu * lam))
        assert median == pytest.approx(13.29, abs=0.01)
        assert nearest_distance_cdf(median, lam, nu) == pytest.approx(0.5, rel=1e-12)

    def test_cdf_limits(self):
        assert nearest_distance_cdf(0.0, 1e-3, 1.0) == 0.0
        assert nearest_distance_cdf(1e6, 1e-3, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_cdf_one_over_sqrt_pi_lambda(self):
        lam = 1e-3
        r = 1.0 / math.sqrt(math.pi * lam)
        assert r == pytest.approx(17.84, abs=0.01)
        assert nearest_distance_cdf(r, lam, 1.0) == pytest.approx(1.0 - math.exp(-1.0), rel=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(
        st.floats(min_value=1e-5, max_value=1e-2),
        st.floats(min_value=1.0, max_value=2.0),
    )
    def test_cdf_is_integral_of_pdf(self, lam, nu):
        r_probe = 0.7 / math.sqrt(math.pi * nu * lam)
        got = integrate(lambda r: nearest_distance_pdf(r, lam, nu), 0.0, r_probe)
        assert got == pytest.approx(nearest_distance_cdf(r_probe, lam, nu), abs=1e-8)

    @given(st.floats(min_value=0.0, max_value=100.0), st.floats(min_value=0.0, max_value=100.0))
    def test_cdf_monotone(self, a, b):
        lo, hi = min(a, b), max(a, b)
        assert nearest_distance_cdf(lo, 1e-3, 1.25) <= nearest_distance_cdf(hi, 1e-3, 1.25)


class TestSelfInterference:
    def test_table_levels(self):
        p = PowerConfig(p_bs=dbm_to_watt(24.0), p_ue=dbm_to_watt(23.0), sic_db=110.0)
        assert watt_to_dbm(residual_self_interference(p)) == pytest.approx(-86.0, abs=1e-9)

    def test_zero_cancellation_is_identity(self):
        p = PowerConfig(p_bs=0.25, p_ue=0.2, sic_db=0.0)
        assert residual_self_interference(p) == pytest.approx(0.25, rel=1e-15)

    def test_70_db(self):
        p = PowerConfig(p_bs=dbm_to_watt(24.0), p_ue=dbm_to_watt(23.0), sic_db=70.0)
        assert watt_to_dbm(residual_self_interference(p)) == pytest.approx(-46.0, abs=1e-9)

    def test_perfect_cancellation(self):
        p = PowerConfig(p_bs=0.25, p_ue=0.2, sic_db=math.inf)
        assert residual_self_interference(p) == 0.0


class TestDuplexMix:
    @given(st.floats(min_value=0.0, max_value=1.0))
    def test_even_split_always_sums_to_one(self, rho_fd):
        mix = DuplexMix.from_fd_fraction(rho_fd)
        assert abs(mix.rho_fd + mix.rho_dl + mix.rho_ul - 1.0) <= 1e-12
        assert mix.rho_dl == mix.rho_ul

    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError):
            DuplexMix(0.5, 0.5, 0.5)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            DuplexMix(1.2, -0.1, -0.1)


class TestRadioEnvironment:
    def test_warns_on_sparse_terminals(self):
        link = table_link()
        with pytest.warns(UserWarning):
            RadioEnvironment(
                bs_density=1e-3,
                ue_density=5e-3,
                link_bs_ue=link,
                link_ue_ue=link,
                link_bs_bs=link,
            )

    def test_rejects_fewer_terminals_than_stations(self):
        link = table_link()
        with pytest.raises(ValueError):
            RadioEnvironment(
                bs_density=1e-3,
                ue_density=5e-4,
                link_bs_ue=link,
                link_ue_ue=link,
                link_bs_bs=link,
            )

    def test_rejects_out_of_range_correction(self):
        link = table_link()
        for bad in (0.9, 2.1):
            with pytest.raises(ValueError):
                RadioEnvironment(
                    bs_density=1e-3,
                    ue_density=1e-2,
                    link_bs_ue=link,
                    link_ue_ue=link,
                    link_bs_bs=link,
                    nu_dl=bad,
                )


class TestDistributionCurve:
    def test_round_trip_and_interp(self):
        curve = DistributionCurve((-10.0, 0.0, 10.0), (0.9, 0.5, 0.1))
        assert curve.value_at(0.0) == 0.5
        assert curve.value_at(5.0) == pytest.approx(0.3)

    def test_rejects_increasing_ccdf(self):
        with pytest.raises(ValueError):
            DistributionCurve((-10.0, 0.0), (0.4, 0.5))

    def test_rejects_unsorted_thresholds(self):
        with pytest.raises(ValueError):
            DistributionCurve((0.0, -10.0), (0.5, 0.9))

    def test_deviation_requires_same_grid(self):
        a = DistributionCurve((0.0, 1.0), (0.5, 0.4))
        b = DistributionCurve((0.0, 2.0), (0.5, 0.4))
        with pytest.raises(ValueError):
            a.max_abs_deviation(b)

    def test_max_deviation(self):
        a = DistributionCurve((0.0, 1.0), (0.5, 0.4))
        b = DistributionCurve((0.0, 1.0), (0.45, 0.42))
        assert a.max_abs_deviation(b) == pytest.approx(0.05)

    def test_self_comparison_is_zero(self):
        a = DistributionCurve((0.0, 1.0, 2.0), (0.5, 0.4, 0.1))
        assert a.max_abs_deviation(a) == 0.0
        assert a.mean_abs_deviation(a) == 0.0
