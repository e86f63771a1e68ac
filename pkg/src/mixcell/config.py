"""Flat key/value run configuration mapped onto scenario objects.

The format is one `section.key = value` pair per line with `#` comments.
Unknown keys are rejected by name.  Defaults reproduce the dense small-cell
setting used throughout: 10 MHz bandwidth, 1e-3 stations/m^2, -174 dBm/Hz
noise density with 9 dB (terminal) / 8 dB (station) noise figures, the
`140.7 + 36.7 log10(R_km)` dB path loss on every link, 24/23 dBm transmit
powers, 110 dB self-interference cancellation and a -8 dB outage threshold.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .analytic import Scenario
from .errors import ConfigError
from .model import (
    DuplexMix,
    LinkClass,
    PowerConfig,
    RadioEnvironment,
    dbm_to_watt,
    noise_power,
)
from .quadrature import QuadratureSpec

__all__ = [
    "DEFAULTS",
    "RunConfig",
    "parse_config_text",
    "parse_grid",
    "build_run_config",
    "load_config",
    "default_run_config",
    "default_scenario",
    "default_config_text",
    "scenario_hash",
]

DEFAULTS: dict[str, str] = {
    "environment.bs_density": "1e-3",
    "environment.ue_density": "1e-2",
    "environment.fading_rate": "1.0",
    "environment.bandwidth_hz": "1e7",
    "environment.noise_density_dbm_hz": "-174.0",
    "environment.noise_figure_ue_db": "9.0",
    "environment.noise_figure_bs_db": "8.0",
    "environment.include_noise": "true",
    "environment.nu_dl": "1.0",
    "environment.nu_ul": "1.25",
    "links.bs_ue.attenuation_db": "-30.6",
    "links.bs_ue.exponent": "3.67",
    "links.ue_ue.attenuation_db": "-30.6",
    "links.ue_ue.exponent": "3.67",
    "links.bs_bs.attenuation_db": "-30.6",
    "links.bs_bs.exponent": "3.67",
    "powers.p_bs_dbm": "24.0",
    "powers.p_ue_dbm": "23.0",
    "powers.power_control_eps": "0.0",
    "powers.sic_db": "110.0",
    "mix.rho_fd": "0.5",
    "numerics.rel_tol": "1e-6",
    "numerics.abs_tol": "1e-12",
    "numerics.max_subdivisions": "2000",
    "numerics.tail_mass_cutoff": "1e-9",
    "numerics.grid_db": "-20:40:0.25",
    "numerics.outage_threshold_db": "-8.0",
    "numerics.thd_time_share": "0.5",
}

_OPTIONAL_KEYS = {"mix.rho_dl", "mix.rho_ul"}


@dataclass(frozen=True)
class RunConfig:
    """A scenario plus the run-level settings that sit outside it."""

    scenario: Scenario
    grid_db: tuple
    outage_threshold_db: float
    thd_time_share: float
    values: dict


def parse_config_text(text: str, allowed_extra_prefixes: tuple = ()) -> dict[str, str]:
    """Parse `key = value` lines; reject unknown keys by name."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        known = key in DEFAULTS or key in _OPTIONAL_KEYS
        extra = any(key.startswith(p) for p in allowed_extra_prefixes)
        if not (known or extra):
            raise ConfigError(f"line {lineno}: unknown config key '{key}'")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for key '{key}'")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        values[key] = value
    return values


def _get_float(values: dict[str, str], key: str) -> float:
    try:
        return float(values[key])
    except ValueError as exc:
        raise ConfigError(f"key '{key}': cannot parse {values[key]!r} as a number") from exc


def _get_int(values: dict[str, str], key: str) -> int:
    try:
        return int(values[key])
    except ValueError as exc:
        raise ConfigError(f"key '{key}': cannot parse {values[key]!r} as an integer") from exc


def _get_bool(values: dict[str, str], key: str) -> bool:
    v = values[key].lower()
    if v in ("true", "yes", "1"):
        return True
    if v in ("false", "no", "0"):
        return False
    raise ConfigError(f"key '{key}': cannot parse {values[key]!r} as a boolean")


def parse_grid(spec: str) -> np.ndarray:
    """Parse 'start:stop:step' (inclusive of both ends) into a dB grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be 'start:stop:step', got {spec!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"grid {spec!r} has non-numeric parts") from exc
    if step <= 0 or stop <= start:
        raise ConfigError(f"grid {spec!r} must have stop > start and step > 0")
    n = int(round((stop - start) / step))
    return start + step * np.arange(n + 1)


def build_run_config(overrides: dict[str, str] | None = None) -> RunConfig:
    """Assemble a RunConfig from defaults plus overrides; validate everything."""
    values = dict(DEFAULTS)
    values.update(overrides or {})

    link_of = lambda name: LinkClass.from_db(
        _get_float(values, f"links.{name}.attenuation_db"),
        _get_float(values, f"links.{name}.exponent"),
    )
    bandwidth = _get_float(values, "environment.bandwidth_hz")
    if _get_bool(values, "environment.include_noise"):
        n_dl = noise_power(
            _get_float(values, "environment.noise_density_dbm_hz"),
            bandwidth,
            _get_float(values, "environment.noise_figure_ue_db"),
        )
        n_ul = noise_power(
            _get_float(values, "environment.noise_density_dbm_hz"),
            bandwidth,
            _get_float(values, "environment.noise_figure_bs_db"),
        )
    else:
        n_dl = n_ul = 0.0

    try:
        env = RadioEnvironment(
            bs_density=_get_float(values, "environment.bs_density"),
            ue_density=_get_float(values, "environment.ue_density"),
            link_bs_ue=link_of("bs_ue"),
            link_ue_ue=link_of("ue_ue"),
            link_bs_bs=link_of("bs_bs"),
            fading_rate=_get_float(values, "environment.fading_rate"),
            noise_dl=n_dl,
            noise_ul=n_ul,
            bandwidth=bandwidth,
            nu_dl=_get_float(values, "environment.nu_dl"),
            nu_ul=_get_float(values, "environment.nu_ul"),
        )
        has_dl = "mix.rho_dl" in values
        has_ul = "mix.rho_ul" in values
        if has_dl != has_ul:
            raise ConfigError("mix.rho_dl and mix.rho_ul must be given together")
        if has_dl:
            mix = DuplexMix(
                _get_float(values, "mix.rho_fd"),
                _get_float(values, "mix.rho_dl"),
                _get_float(values, "mix.rho_ul"),
            )
        else:
            mix = DuplexMix.from_fd_fraction(_get_float(values, "mix.rho_fd"))
        power = PowerConfig(
            p_bs=dbm_to_watt(_get_float(values, "powers.p_bs_dbm")),
            p_ue=dbm_to_watt(_get_float(values, "powers.p_ue_dbm")),
            power_control_eps=_get_float(values, "powers.power_control_eps"),
            sic_db=_get_float(values, "powers.sic_db"),
        )
        quad = QuadratureSpec(
            rel_tol=_get_float(values, "numerics.rel_tol"),
            abs_tol=_get_float(values, "numerics.abs_tol"),
            max_subdivisions=_get_int(values, "numerics.max_subdivisions"),
            tail_mass_cutoff=_get_float(values, "numerics.tail_mass_cutoff"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    grid = parse_grid(values["numerics.grid_db"])
    time_share = _get_float(values, "numerics.thd_time_share")
    if not 0.0 < time_share <= 1.0:
        raise ConfigError(f"numerics.thd_time_share must lie in (0, 1], got {time_share}")
    return RunConfig(
        scenario=Scenario(env=env, mix=mix, power=power, quad=quad),
        grid_db=tuple(grid),
        outage_threshold_db=_get_float(values, "numerics.outage_threshold_db"),
        thd_time_share=time_share,
        values=values,
    )


def load_config(path, allowed_extra_prefixes: tuple = ()) -> RunConfig:
    """Read and build a run configuration from a file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return build_run_config(parse_config_text(text, allowed_extra_prefixes))


def default_run_config() -> RunConfig:
    return build_run_config({})


def default_scenario() -> Scenario:
    return default_run_config().scenario


def default_config_text() -> str:
    """Canonical defaults in config-file form."""
    return "\n".join(f"{k} = {v}" for k, v in DEFAULTS.items()) + "\n"


def scenario_hash(scn: Scenario) -> str:
    """Short stable digest of every scenario parameter."""
    return hashlib.sha256(repr(scn).encode("utf-8")).hexdigest()[:12]


def is_interference_limited(scn: Scenario) -> bool:
    return (
        scn.env.noise_dl == 0.0
        and scn.env.noise_ul == 0.0
        and math.isinf(scn.power.sic_db)
    )
