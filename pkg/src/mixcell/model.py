"""Domain types, unit conversions and nearest-transmitter distance law.

All internal computation uses SI linear units (watts, metres); dB and dBm
appear only at I/O boundaries.  Every type is immutable after construction
and safe to share across concurrent evaluations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveDistance

__all__ = [
    "LinkClass",
    "RadioEnvironment",
    "DuplexMix",
    "PowerConfig",
    "DistributionCurve",
    "db_to_linear",
    "linear_to_db",
    "dbm_to_watt",
    "watt_to_dbm",
    "path_loss",
    "noise_power",
    "nearest_distance_pdf",
    "nearest_distance_cdf",
    "residual_self_interference",
]


def db_to_linear(x_db):
    """dB -> linear power ratio."""
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x):
    """Linear power ratio -> dB."""
    return 10.0 * np.log10(x)


def dbm_to_watt(x_dbm):
    """dBm -> watts."""
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def watt_to_dbm(p_watt):
    """Watts -> dBm."""
    return 10.0 * np.log10(p_watt) + 30.0


@dataclass(frozen=True)
class LinkClass:
    """Power-law channel gain: gain(d) = attenuation * d**-exponent, d in metres.

    `attenuation` is the linear power gain at 1 m.  `exponent` must exceed 2,
    otherwise the semi-infinite interference integrals do not converge.
    """

    attenuation: float
    exponent: float

    def __post_init__(self):
        if not self.attenuation > 0.0:
            raise ValueError(f"attenuation must be > 0, got {self.attenuation}")
        if not self.exponent > 2.0:
            raise ValueError(f"path-loss exponent must be > 2, got {self.exponent}")

    @classmethod
    def from_db(cls, attenuation_db: float, exponent: float) -> "LinkClass":
        """Build from the 1 m gain in dB (negative values mean loss)."""
        return cls(db_to_linear(attenuation_db), exponent)


def path_loss(link: LinkClass, d):
    """Linear power gain of `link` at distance d metres (scalar or array, d > 0)."""
    if np.any(np.asarray(d) <= 0.0):
        raise NonPositiveDistance("path loss requested at distance <= 0 m")
    return link.attenuation * d ** -link.exponent


def noise_power(density_dbm_hz: float, bandwidth_hz: float, noise_figure_db: float) -> float:
    """Receiver noise power in watts from spectral density, bandwidth and noise figure."""
    if not bandwidth_hz > 0.0:
        raise ValueError(f"bandwidth must be > 0 Hz, got {bandwidth_hz}")
    return dbm_to_watt(density_dbm_hz + 10.0 * math.log10(bandwidth_hz) + noise_figure_db)


def nearest_distance_pdf(r, density: float, nu: float = 1.0):
    """PDF (1/m) of the distance from a receiver to its nearest transmitter.

    Base case (nu = 1) is the nearest-point distance of a planar Poisson
    process of the given density.  `nu` rescales the effective density to
    compensate the correlation between scheduled terminals and the station
    process.  Defined as the exact derivative of `nearest_distance_cdf`, so
    it integrates to one for every nu.

    r must be >= 0 (scalar or array).
    """
    if not density > 0.0:
        raise ValueError(f"density must be > 0, got {density}")
    x = math.pi * nu * density
    return np.exp(-x * np.square(r)) * (2.0 * x) * r


def nearest_distance_cdf(r, density: float, nu: float = 1.0):
    """P[nearest transmitter within r metres]; see `nearest_distance_pdf`."""
    if not density > 0.0:
        raise ValueError(f"density must be > 0, got {density}")
    x = math.pi * nu * density
    return -np.expm1(-x * np.square(r))


@dataclass(frozen=True)
class RadioEnvironment:
    """Deployment densities, channel classes and receiver noise levels.

    ue_density is simulation bookkeeping: the analytic engine only relies on
    one scheduled terminal per direction per cell.  nu_dl / nu_ul are the
    distance-law correction factors applied to downlink and uplink serving
    distances (and to the uplink interferers' serving-distance law).
    """

    bs_density: float
    ue_density: float
    link_bs_ue: LinkClass
    link_ue_ue: LinkClass
    link_bs_bs: LinkClass
    fading_rate: float = 1.0  # exponential fading parameter mu; mean fade power 1/mu
    noise_dl: float = 0.0  # thermal noise power at the terminal receiver, W
    noise_ul: float = 0.0  # thermal noise power at the station receiver, W
    bandwidth: float = 10e6  # Hz
    nu_dl: float = 1.0
    nu_ul: float = 1.25

    def __post_init__(self):
        if not self.bs_density > 0.0:
            raise ValueError(f"bs_density must be > 0, got {self.bs_density}")
        if self.ue_density < self.bs_density:
            raise ValueError(
                f"ue_density ({self.ue_density}) must be >= bs_density ({self.bs_density})"
            )
        if self.ue_density < 10.0 * self.bs_density:
            warnings.warn(
                "ue_density below 10x bs_density: cells frequently lack enough "
                "terminals to fill their schedule",
                stacklevel=2,
            )
        if not self.fading_rate > 0.0:
            raise ValueError(f"fading_rate must be > 0, got {self.fading_rate}")
        if self.noise_dl < 0.0 or self.noise_ul < 0.0:
            raise ValueError("noise powers must be >= 0 W")
        if not self.bandwidth > 0.0:
            raise ValueError(f"bandwidth must be > 0, got {self.bandwidth}")
        for name in ("nu_dl", "nu_ul"):
            nu = getattr(self, name)
            if not 1.0 <= nu <= 2.0:
                raise ValueError(f"{name} must lie in [1, 2], got {nu}")


@dataclass(frozen=True)
class DuplexMix:
    """Probabilities of a cell being full-duplex, downlink-only or uplink-only."""

    rho_fd: float
    rho_dl: float
    rho_ul: float

    def __post_init__(self):
        for name in ("rho_fd", "rho_dl", "rho_ul"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        total = self.rho_fd + self.rho_dl + self.rho_ul
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"mode probabilities must sum to 1, got {total!r}")

    @classmethod
    def from_fd_fraction(cls, rho_fd: float) -> "DuplexMix":
        """Split the non-full-duplex cells evenly between downlink and uplink."""
        half = (1.0 - rho_fd) / 2.0
        return cls(rho_fd, half, half)


@dataclass(frozen=True)
class PowerConfig:
    """Transmit powers, uplink power control and self-interference cancellation.

    With power control exponent eps, a terminal at serving distance R
    transmits p_ue * K1**-eps * R**(eps*alpha1) watts: eps = 0 is constant
    power, eps = 1 fully inverts the serving path loss.  sic_db is the
    cancellation applied by a full-duplex station to its own transmission
    (math.inf means perfect cancellation).
    """

    p_bs: float  # W
    p_ue: float  # W
    power_control_eps: float = 0.0
    sic_db: float = 110.0

    def __post_init__(self):
        if not self.p_bs > 0.0:
            raise ValueError(f"p_bs must be > 0 W, got {self.p_bs}")
        if not self.p_ue > 0.0:
            raise ValueError(f"p_ue must be > 0 W, got {self.p_ue}")
        if not 0.0 <= self.power_control_eps <= 1.0:
            raise ValueError(f"power_control_eps must lie in [0, 1], got {self.power_control_eps}")
        if not self.sic_db >= 0.0:
            raise ValueError(f"sic_db must be >= 0, got {self.sic_db}")


def residual_self_interference(power: PowerConfig) -> float:
    """Residual self-interference power (W) at a full-duplex station receiver."""
    return power.p_bs * 10.0 ** (-power.sic_db / 10.0)


@dataclass(frozen=True)
class DistributionCurve:
    """A CCDF tabulated over an increasing grid of thresholds in dB."""

    thresholds_db: tuple
    probabilities: tuple

    def __post_init__(self):
        thr = tuple(float(t) for t in self.thresholds_db)
        prob = tuple(float(p) for p in self.probabilities)
        object.__setattr__(self, "thresholds_db", thr)
        object.__setattr__(self, "probabilities", prob)
        if len(thr) != len(prob):
            raise ValueError("thresholds and probabilities must have the same length")
        if len(thr) == 0:
            raise ValueError("a distribution curve needs at least one point")
        t = np.asarray(thr)
        p = np.asarray(prob)
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("thresholds must be strictly increasing")
        if np.any(p < -1e-9) or np.any(p > 1.0 + 1e-9):
            raise ValueError("probabilities must lie in [0, 1]")
        # tolerate quadrature-level jitter, reject genuine non-monotonicity
        if np.any(np.diff(p) > 1e-6):
            raise ValueError("CCDF values must be non-increasing over the threshold grid")

    def as_arrays(self):
        return np.asarray(self.thresholds_db), np.asarray(self.probabilities)

    def value_at(self, threshold_db: float) -> float:
        """CCDF at a threshold, linearly interpolated between grid points."""
        return float(np.interp(threshold_db, self.thresholds_db, self.probabilities))

    def max_abs_deviation(self, other: "DistributionCurve") -> float:
        """Largest pointwise CCDF difference; grids must coincide."""
        if self.thresholds_db != other.thresholds_db:
            raise ValueError("curves are tabulated on different grids")
        return float(
            np.max(np.abs(np.asarray(self.probabilities) - np.asarray(other.probabilities)))
        )

    def mean_abs_deviation(self, other: "DistributionCurve") -> float:
        if self.thresholds_db != other.thresholds_db:
            raise ValueError("curves are tabulated on different grids")
        return float(
            np.mean(np.abs(np.asarray(self.probabilities) - np.asarray(other.probabilities)))
        )
