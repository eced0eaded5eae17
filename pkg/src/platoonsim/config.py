"""Configuration: the key/value file format, defaults, and validation.

File format
-----------
Plain text, one ``section.key = value`` assignment per line.  Blank
lines and lines starting with ``#`` are ignored (comments are
whole-line only).  Every key has a default, so an empty file is a valid
complete configuration.  Unknown keys, malformed lines, duplicate keys
and out-of-range values are rejected with the file name, line number
and offending key in the message.

Value syntax by key type: integers as decimal literals, floats as
anything ``float()`` accepts (``1e-4``, ``-inf``; never ``nan``),
booleans as ``true``/``false``, strings bare (no quotes).

Canonical form and digest
-------------------------
``canonical_lines`` renders the *effective* configuration (defaults
merged with the file and any overrides) as sorted ``key = value``
lines, excluding ``run.seed`` so that the digest identifies a scenario,
not an individual replication.  The 16-hex-digit FNV-1a digest of that
rendering is embedded in event logs and result CSVs as provenance.
"""

from __future__ import annotations

import math

from .cv2x import Cv2xParams
from .engine import ARCHITECTURES, ConfigError, EngineConfig
from .lifi import LifiParams
from .metrics import config_digest
from .scenario import ScenarioLayout
from .sps import SpsParams

DEFAULTS: dict[str, object] = {
    # Road geometry and platoon arrangement.
    "scenario.num_platoons": 3,
    "scenario.platoon_size": 10,
    "scenario.vehicle_length_m": 10.0,
    "scenario.inter_vehicle_gap_m": 10.0,
    "scenario.lane_offset_m": 4.0,
    "scenario.longitudinal_stagger_m": 0.0,
    "scenario.target_platoon": -1,  # -1 -> middle platoon
    # Radio PHY and resource grid.
    "cv2x.carrier_frequency_hz": 5.9e9,
    "cv2x.tx_power_dbm": 23.0,
    "cv2x.noise_power_dbm": -114.0,
    "cv2x.pathloss_intercept_db": 11.82,
    "cv2x.pathloss_slope_db": 40.0,
    "cv2x.pathloss_distance_unit": "m",  # "m" or "km"
    "cv2x.sinr_threshold_db": 5.0,  # -inf -> ideal channel
    "cv2x.shadowing_sigma_db": 0.0,
    "cv2x.num_subchannels": 4,
    "cv2x.ttis_per_period": 100,
    "cv2x.rri_ms": 100.0,
    "cv2x.sensing_window_ms": 1000.0,
    "cv2x.selection_window_min_ttis": 1,
    "cv2x.selection_window_max_ttis": 20,
    "cv2x.keep_probability": 0.4,
    "cv2x.counter_min": 5,
    "cv2x.counter_max": 15,
    "cv2x.packet_size_bytes": 300,
    "cv2x.packets_per_rri": 10,
    # Scheduler knobs beyond the PHY.
    "sps.rsrp_exclude_threshold_dbm": -110.0,
    "sps.rsrp_escalation_step_db": 3.0,
    "sps.candidate_keep_fraction": 0.2,
    "sps.multi_grant": False,  # true -> one short-period grant per packet
    # Optical link.
    "lifi.wavelength_nm": 905.0,
    "lifi.optical_power_w": 0.45,
    "lifi.modulation_bandwidth_hz": 2.5e9,
    "lifi.receiver_bandwidth_hz": 1.4e9,
    "lifi.detector_area_m2": 1e-4,
    "lifi.responsivity_a_per_w": 0.5,
    "lifi.beam_divergence_deg": 5.0,
    "lifi.receiver_fov_deg": 30.0,
    "lifi.angles_are_full": True,  # full cone angles; halved internally
    "lifi.noise_current_a": 1e-8,
    "lifi.ambient_light_current_a": 1e-7,
    "lifi.atmospheric_loss_db_per_km": 0.1,
    "lifi.alignment_max_loss_db": 20.0,
    "lifi.angular_deviation_deg": 0.0,
    "lifi.processing_delay_s": 0.0,
    # Run control.
    "run.architecture": "hybrid",
    "run.duration_s": 60.0,
    "run.warmup_s": 1.0,
    "run.seed": 1,
    "run.plf_leader_links": False,
}

# Float keys allowed to be infinite (thresholds); all others must be
# finite, and no float may be NaN.
_INFINITY_OK = {"cv2x.sinr_threshold_db", "sps.rsrp_exclude_threshold_dbm"}


def _coerce(key: str, text: str, where: str):
    default = DEFAULTS[key]
    if isinstance(default, bool):
        if text == "true":
            return True
        if text == "false":
            return False
        raise ConfigError(f"{where}: {key} must be 'true' or 'false', got {text!r}")
    if isinstance(default, int):
        try:
            return int(text, 10)
        except ValueError:
            raise ConfigError(
                f"{where}: {key} must be an integer, got {text!r}"
            ) from None
    if isinstance(default, float):
        try:
            value = float(text)
        except ValueError:
            raise ConfigError(
                f"{where}: {key} must be a number, got {text!r}"
            ) from None
        if math.isnan(value):
            raise ConfigError(f"{where}: {key} must not be NaN")
        if not math.isfinite(value) and key not in _INFINITY_OK:
            raise ConfigError(f"{where}: {key} must be finite, got {text!r}")
        return value
    return text


def parse_config_text(text: str, source: str = "<config>") -> dict[str, object]:
    """Parse configuration text into a complete value map (defaults
    filled in).

    Raises:
        ConfigError: Naming ``source``, the line number and the problem.
    """
    values = dict(DEFAULTS)
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{source}:{lineno}"
        key, sep, value_text = line.partition("=")
        if not sep:
            raise ConfigError(f"{where}: expected 'key = value', got {raw!r}")
        key = key.strip()
        value_text = value_text.strip()
        if key not in DEFAULTS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        seen.add(key)
        values[key] = _coerce(key, value_text, where)
    return values


def _require(condition: bool, key: str, rule: str, value) -> None:
    if not condition:
        raise ConfigError(f"{key} must be {rule}, got {value}")


def validate_values(values: dict[str, object]) -> None:
    """Range and cross-key checks; errors name the offending key."""
    v = values
    _require(v["scenario.num_platoons"] >= 1, "scenario.num_platoons", ">= 1", v["scenario.num_platoons"])
    _require(v["scenario.platoon_size"] >= 2, "scenario.platoon_size", ">= 2", v["scenario.platoon_size"])
    _require(v["scenario.vehicle_length_m"] > 0, "scenario.vehicle_length_m", "> 0", v["scenario.vehicle_length_m"])
    _require(v["scenario.inter_vehicle_gap_m"] > 0, "scenario.inter_vehicle_gap_m", "> 0", v["scenario.inter_vehicle_gap_m"])
    _require(v["scenario.lane_offset_m"] > 0, "scenario.lane_offset_m", "> 0", v["scenario.lane_offset_m"])
    tp = v["scenario.target_platoon"]
    _require(
        tp == -1 or 0 <= tp < v["scenario.num_platoons"],
        "scenario.target_platoon",
        f"-1 or in [0, {v['scenario.num_platoons']})",
        tp,
    )
    _require(v["cv2x.carrier_frequency_hz"] > 0, "cv2x.carrier_frequency_hz", "> 0", v["cv2x.carrier_frequency_hz"])
    _require(
        v["cv2x.tx_power_dbm"] > v["cv2x.noise_power_dbm"],
        "cv2x.tx_power_dbm",
        f"> cv2x.noise_power_dbm ({v['cv2x.noise_power_dbm']})",
        v["cv2x.tx_power_dbm"],
    )
    _require(v["cv2x.pathloss_slope_db"] > 0, "cv2x.pathloss_slope_db", "> 0", v["cv2x.pathloss_slope_db"])
    _require(
        v["cv2x.pathloss_distance_unit"] in ("m", "km"),
        "cv2x.pathloss_distance_unit",
        "'m' or 'km'",
        v["cv2x.pathloss_distance_unit"],
    )
    _require(v["cv2x.shadowing_sigma_db"] >= 0, "cv2x.shadowing_sigma_db", ">= 0", v["cv2x.shadowing_sigma_db"])
    _require(v["cv2x.num_subchannels"] >= 1, "cv2x.num_subchannels", ">= 1", v["cv2x.num_subchannels"])
    _require(v["cv2x.ttis_per_period"] >= 1, "cv2x.ttis_per_period", ">= 1", v["cv2x.ttis_per_period"])
    _require(v["cv2x.rri_ms"] > 0, "cv2x.rri_ms", "> 0", v["cv2x.rri_ms"])
    _require(v["cv2x.sensing_window_ms"] > 0, "cv2x.sensing_window_ms", "> 0", v["cv2x.sensing_window_ms"])
    _require(
        v["cv2x.selection_window_min_ttis"] >= 1,
        "cv2x.selection_window_min_ttis",
        ">= 1",
        v["cv2x.selection_window_min_ttis"],
    )
    _require(
        v["cv2x.selection_window_max_ttis"] >= v["cv2x.selection_window_min_ttis"],
        "cv2x.selection_window_max_ttis",
        ">= cv2x.selection_window_min_ttis",
        v["cv2x.selection_window_max_ttis"],
    )
    _require(
        0.0 <= v["cv2x.keep_probability"] <= 1.0,
        "cv2x.keep_probability",
        "in [0, 1]",
        v["cv2x.keep_probability"],
    )
    _require(v["cv2x.counter_min"] >= 1, "cv2x.counter_min", ">= 1", v["cv2x.counter_min"])
    _require(
        v["cv2x.counter_max"] >= v["cv2x.counter_min"],
        "cv2x.counter_max",
        ">= cv2x.counter_min",
        v["cv2x.counter_max"],
    )
    _require(v["cv2x.packet_size_bytes"] >= 1, "cv2x.packet_size_bytes", ">= 1", v["cv2x.packet_size_bytes"])
    _require(v["cv2x.packets_per_rri"] >= 1, "cv2x.packets_per_rri", ">= 1", v["cv2x.packets_per_rri"])
    _require(
        v["cv2x.ttis_per_period"] % v["cv2x.packets_per_rri"] == 0,
        "cv2x.packets_per_rri",
        f"a divisor of cv2x.ttis_per_period ({v['cv2x.ttis_per_period']})",
        v["cv2x.packets_per_rri"],
    )
    _require(v["sps.rsrp_escalation_step_db"] > 0, "sps.rsrp_escalation_step_db", "> 0", v["sps.rsrp_escalation_step_db"])
    _require(
        0.0 < v["sps.candidate_keep_fraction"] <= 1.0,
        "sps.candidate_keep_fraction",
        "in (0, 1]",
        v["sps.candidate_keep_fraction"],
    )
    for key in (
        "lifi.wavelength_nm",
        "lifi.optical_power_w",
        "lifi.modulation_bandwidth_hz",
        "lifi.receiver_bandwidth_hz",
        "lifi.detector_area_m2",
        "lifi.responsivity_a_per_w",
        "lifi.beam_divergence_deg",
        "lifi.receiver_fov_deg",
        "lifi.noise_current_a",
    ):
        _require(v[key] > 0, key, "> 0", v[key])
    for key in (
        "lifi.ambient_light_current_a",
        "lifi.atmospheric_loss_db_per_km",
        "lifi.alignment_max_loss_db",
        "lifi.angular_deviation_deg",
        "lifi.processing_delay_s",
        "run.duration_s",
        "run.warmup_s",
    ):
        _require(v[key] >= 0, key, ">= 0", v[key])
    half = 0.5 if v["lifi.angles_are_full"] else 1.0
    _require(
        half * v["lifi.beam_divergence_deg"] < half * v["lifi.receiver_fov_deg"],
        "lifi.beam_divergence_deg",
        f"< lifi.receiver_fov_deg ({v['lifi.receiver_fov_deg']})",
        v["lifi.beam_divergence_deg"],
    )
    _require(
        v["run.architecture"] in ARCHITECTURES,
        "run.architecture",
        f"one of {ARCHITECTURES}",
        v["run.architecture"],
    )
    tti_ms = v["cv2x.rri_ms"] / v["cv2x.ttis_per_period"]
    _require(
        round(v["cv2x.sensing_window_ms"] / tti_ms) >= 1,
        "cv2x.sensing_window_ms",
        f">= one TTI ({tti_ms} ms)",
        v["cv2x.sensing_window_ms"],
    )


def _canonical_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def canonical_lines(values: dict[str, object]) -> tuple[str, ...]:
    """Sorted ``key = value`` rendering of the effective configuration,
    excluding ``run.seed`` (the digest identifies the scenario)."""
    return tuple(
        f"{key} = {_canonical_value(values[key])}"
        for key in sorted(values)
        if key != "run.seed"
    )


def build_engine_config(values: dict[str, object]) -> EngineConfig:
    """Validate a complete value map and assemble the run configuration."""
    validate_values(values)
    v = values
    layout = ScenarioLayout(
        num_platoons=v["scenario.num_platoons"],
        platoon_size=v["scenario.platoon_size"],
        vehicle_length_m=v["scenario.vehicle_length_m"],
        inter_vehicle_gap_m=v["scenario.inter_vehicle_gap_m"],
        lane_offset_m=v["scenario.lane_offset_m"],
        longitudinal_stagger_m=v["scenario.longitudinal_stagger_m"],
        target_platoon=v["scenario.target_platoon"],
    )
    radio = Cv2xParams(
        tx_power_dbm=v["cv2x.tx_power_dbm"],
        noise_power_dbm=v["cv2x.noise_power_dbm"],
        carrier_frequency_hz=v["cv2x.carrier_frequency_hz"],
        pathloss_intercept_db=v["cv2x.pathloss_intercept_db"],
        pathloss_slope_db=v["cv2x.pathloss_slope_db"],
        sinr_threshold_db=v["cv2x.sinr_threshold_db"],
        pathloss_distance_unit=v["cv2x.pathloss_distance_unit"],
        shadowing_sigma_db=v["cv2x.shadowing_sigma_db"],
    )
    optical = LifiParams(
        wavelength_m=v["lifi.wavelength_nm"] * 1e-9,
        optical_power_w=v["lifi.optical_power_w"],
        modulation_bandwidth_hz=v["lifi.modulation_bandwidth_hz"],
        receiver_bandwidth_hz=v["lifi.receiver_bandwidth_hz"],
        detector_area_m2=v["lifi.detector_area_m2"],
        responsivity_a_per_w=v["lifi.responsivity_a_per_w"],
        beam_divergence_deg=v["lifi.beam_divergence_deg"],
        receiver_fov_deg=v["lifi.receiver_fov_deg"],
        angles_are_full=v["lifi.angles_are_full"],
        noise_current_a=v["lifi.noise_current_a"],
        ambient_light_current_a=v["lifi.ambient_light_current_a"],
        atmospheric_loss_db_per_km=v["lifi.atmospheric_loss_db_per_km"],
        alignment_max_loss_db=v["lifi.alignment_max_loss_db"],
        processing_delay_s=v["lifi.processing_delay_s"],
    )
    tti_ms = v["cv2x.rri_ms"] / v["cv2x.ttis_per_period"]
    rri_ttis = (
        v["cv2x.ttis_per_period"] // v["cv2x.packets_per_rri"]
        if v["sps.multi_grant"]
        else v["cv2x.ttis_per_period"]
    )
    scheduler = SpsParams(
        num_subchannels=v["cv2x.num_subchannels"],
        ttis_per_period=v["cv2x.ttis_per_period"],
        rri_ttis=rri_ttis,
        sensing_window_ttis=round(v["cv2x.sensing_window_ms"] / tti_ms),
        selection_window_min_ttis=v["cv2x.selection_window_min_ttis"],
        selection_window_max_ttis=v["cv2x.selection_window_max_ttis"],
        keep_probability=v["cv2x.keep_probability"],
        counter_min=v["cv2x.counter_min"],
        counter_max=v["cv2x.counter_max"],
        rsrp_exclude_threshold_dbm=v["sps.rsrp_exclude_threshold_dbm"],
        rsrp_escalation_step_db=v["sps.rsrp_escalation_step_db"],
        candidate_keep_fraction=v["sps.candidate_keep_fraction"],
    )
    lines = canonical_lines(values)
    return EngineConfig(
        layout=layout,
        cv2x=radio,
        lifi=optical,
        sps=scheduler,
        architecture=v["run.architecture"],
        duration_s=v["run.duration_s"],
        warmup_s=v["run.warmup_s"],
        seed=v["run.seed"],
        tti_ms=tti_ms,
        packet_size_bytes=v["cv2x.packet_size_bytes"],
        packets_per_rri=v["cv2x.packets_per_rri"],
        plf_leader_links=v["run.plf_leader_links"],
        lifi_deviation_deg=v["lifi.angular_deviation_deg"],
        config_lines=lines,
        config_hash=config_digest("\n".join(lines) + "\n"),
    )


def load_values(path) -> dict[str, object]:
    """Read and parse a configuration file into a complete value map."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_config_text(text, source=str(path))


def load_config(path) -> EngineConfig:
    """Read, parse, validate and assemble a run configuration."""
    return build_engine_config(load_values(path))


def with_overrides(
    values: dict[str, object],
    architecture: str | None = None,
    seed: int | None = None,
) -> EngineConfig:
    """Rebuild a configuration with the architecture and/or seed
    replaced.  The architecture override participates in the digest;
    the seed never does."""
    merged = dict(values)
    if architecture is not None:
        merged["run.architecture"] = architecture
    if seed is not None:
        merged["run.seed"] = seed
    return build_engine_config(merged)


def make_config(**overrides) -> EngineConfig:
    """Programmatic configuration builder for tests and scripting.

    Dotted keys are passed via dict unpacking::

        make_config(**{"run.architecture": "plf", "run.seed": 7})
    """
    values = dict(DEFAULTS)
    for key, value in overrides.items():
        if key not in DEFAULTS:
            raise ConfigError(f"unknown key {key!r}")
        default = DEFAULTS[key]
        if isinstance(default, bool):
            if not isinstance(value, bool):
                raise ConfigError(f"{key} must be a bool, got {value!r}")
        elif isinstance(default, int):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{key} must be an int, got {value!r}")
        elif isinstance(default, float):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{key} must be a number, got {value!r}")
            value = float(value)
            if math.isnan(value):
                raise ConfigError(f"{key} must not be NaN")
            if not math.isfinite(value) and key not in _INFINITY_OK:
                raise ConfigError(f"{key} must be finite, got {value!r}")
        elif not isinstance(value, str):
            raise ConfigError(f"{key} must be a string, got {value!r}")
        values[key] = value
    return build_engine_config(values)
