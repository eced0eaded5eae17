"""Configuration: parsing, validation, canonical digest, assembly."""

import math

import pytest

from platoonsim.config import (
    DEFAULTS,
    canonical_lines,
    build_engine_config,
    load_config,
    make_config,
    parse_config_text,
    with_overrides,
)
from platoonsim.engine import ConfigError


# -- parsing ----------------------------------------------------------


def test_defaults_alone_build_a_runnable_config():
    cfg = make_config()
    assert cfg.architecture == "hybrid"
    assert cfg.seed == 1
    assert cfg.tti_ms == 1.0  # 100 ms RRI / 100 TTIs
    assert cfg.sps.rri_ttis == 100
    assert cfg.sps.sensing_window_ttis == 1000
    assert cfg.packets_per_rri == 10
    assert len(cfg.config_hash) == 16


def test_parse_overrides_and_comments():
    values = parse_config_text(
        """
        # a comment
        run.architecture = plf

        cv2x.tx_power_dbm = 20.0
        sps.multi_grant = true
        scenario.platoon_size = 8
        """
    )
    assert values["run.architecture"] == "plf"
    assert values["cv2x.tx_power_dbm"] == 20.0
    assert values["sps.multi_grant"] is True
    assert values["scenario.platoon_size"] == 8
    # untouched keys keep their defaults
    assert values["cv2x.rri_ms"] == DEFAULTS["cv2x.rri_ms"]


@pytest.mark.parametrize(
    "line,fragment",
    [
        ("nonsense", "expected 'key = value'"),
        ("bogus.key = 1", "unknown key"),
        ("run.seed = 1\nrun.seed = 2", "duplicate key"),
        ("run.seed = 1.5", "must be an integer"),
        ("sps.multi_grant = yes", "must be 'true' or 'false'"),
        ("cv2x.tx_power_dbm = nan", "must not be NaN"),
        ("cv2x.tx_power_dbm = inf", "must be finite"),
        ("cv2x.tx_power_dbm = soon", "must be a number"),
    ],
)
def test_parse_errors_name_source_and_line(line, fragment):
    with pytest.raises(ConfigError, match=fragment) as err:
        parse_config_text(line, source="cfg.ini")
    assert "cfg.ini:" in str(err.value)


def test_threshold_keys_accept_minus_infinity():
    values = parse_config_text("cv2x.sinr_threshold_db = -inf")
    assert values["cv2x.sinr_threshold_db"] == -math.inf
    cfg = build_engine_config(values)
    assert cfg.cv2x.sinr_threshold_db == -math.inf


def test_load_config_round_trips_file(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("run.architecture = bdl\nrun.seed = 42\n")
    cfg = load_config(path)
    assert cfg.architecture == "bdl"
    assert cfg.seed == 42


# -- validation -------------------------------------------------------


@pytest.mark.parametrize(
    "key,value",
    [
        ("scenario.num_platoons", 0),
        ("scenario.platoon_size", 1),
        ("cv2x.num_subchannels", 0),
        ("cv2x.ttis_per_period", 0),
        ("cv2x.rri_ms", 0.0),
        ("cv2x.keep_probability", 1.5),
        ("cv2x.counter_min", 0),
        ("cv2x.packets_per_rri", 3),  # does not divide 100 TTIs
        ("cv2x.selection_window_min_ttis", 0),
        ("sps.candidate_keep_fraction", 0.0),
        ("lifi.beam_divergence_deg", -1.0),
        ("lifi.angular_deviation_deg", -1.0),
        ("run.architecture", "mesh"),
        ("run.duration_s", -1.0),
        ("run.warmup_s", -0.5),
    ],
)
def test_validation_rejects_and_names_the_key(key, value):
    with pytest.raises(ConfigError, match=key.replace(".", r"\.")):
        make_config(**{key: value})


def test_counter_range_must_be_ordered():
    with pytest.raises(ConfigError):
        make_config(**{"cv2x.counter_min": 10, "cv2x.counter_max": 5})


def test_make_config_type_checks():
    with pytest.raises(ConfigError, match="unknown key"):
        make_config(**{"run.bogus": 1})
    with pytest.raises(ConfigError, match="must be an int"):
        make_config(**{"run.seed": 1.5})
    with pytest.raises(ConfigError, match="must be an int"):
        make_config(**{"run.seed": True})
    with pytest.raises(ConfigError, match="must be a bool"):
        make_config(**{"sps.multi_grant": 1})
    with pytest.raises(ConfigError, match="must be a number"):
        make_config(**{"cv2x.tx_power_dbm": "loud"})
    with pytest.raises(ConfigError, match="must not be NaN"):
        make_config(**{"cv2x.tx_power_dbm": math.nan})
    with pytest.raises(ConfigError, match="must be a string"):
        make_config(**{"run.architecture": 3})


# -- canonical rendering and digest -----------------------------------


def test_canonical_lines_sorted_and_seedless():
    lines = canonical_lines(dict(DEFAULTS))
    assert list(lines) == sorted(lines)
    assert len(lines) == len(DEFAULTS) - 1
    assert not any(line.startswith("run.seed") for line in lines)
    assert "sps.multi_grant = false" in lines
    assert "run.duration_s = 60.0" in lines


def test_digest_ignores_seed_but_tracks_everything_else():
    base = make_config()
    assert make_config(**{"run.seed": 99}).config_hash == base.config_hash
    assert (
        make_config(**{"run.architecture": "plf"}).config_hash
        != base.config_hash
    )
    assert (
        make_config(**{"cv2x.tx_power_dbm": 22.0}).config_hash
        != base.config_hash
    )


def test_with_overrides_replaces_arch_and_seed():
    values = dict(DEFAULTS)
    cfg = with_overrides(values, architecture="plf", seed=7)
    assert cfg.architecture == "plf" and cfg.seed == 7
    # original map untouched
    assert values["run.architecture"] == "hybrid"


# -- derived engine fields --------------------------------------------


def test_multi_grant_shortens_the_grant_period():
    cfg = make_config(**{"sps.multi_grant": True})
    assert cfg.sps.rri_ttis == 10  # 100 TTIs / 10 packets
    assert cfg.sps.ttis_per_period == 100


def test_unit_conversions():
    cfg = make_config(
        **{
            "cv2x.rri_ms": 50.0,
            "cv2x.ttis_per_period": 100,
            "cv2x.sensing_window_ms": 500.0,
            "lifi.wavelength_nm": 905.0,
        }
    )
    assert cfg.tti_ms == 0.5
    assert cfg.sps.sensing_window_ttis == 1000
    assert cfg.lifi.wavelength_m == pytest.approx(905e-9)
