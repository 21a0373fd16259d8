"""SimulationConfig validation and the key=value config parser."""

import math

import pytest

from cfiama.config import SimulationConfig, dbm_to_watt, parse_config


def test_defaults_are_the_reference_setup():
    config = SimulationConfig()
    assert config.L == 50 and config.K == 50 and config.N == 4
    assert config.tau_p == 5 and config.tau_c == 200
    assert config.rho_p == 0.1 and config.rho_dl == 1.0
    assert config.kappa == 10.0 and config.mu == 1.8 and config.nu == 0.5
    assert math.isclose(config.noise_power, dbm_to_watt(-94.0))


def test_dbm_to_watt():
    assert math.isclose(dbm_to_watt(0.0), 1e-3)
    assert math.isclose(dbm_to_watt(30.0), 1.0)
    assert math.isclose(dbm_to_watt(-94.0), 10 ** (-9.4) * 1e-3)


def test_prelog():
    assert SimulationConfig().prelog == 0.975


@pytest.mark.parametrize("field,value,fragment", [
    ("tau_p", 300, "tau_p < tau_c"),
    ("K", 1000, "K <= L * tau_p"),
    ("mu", 2.5, "1 <= mu <= 2"),
    ("kappa", 0.5, "kappa >= 1"),
    ("n_channel_reals", 1, "n_channel_reals >= 2"),
    ("area_side", -1.0, "area_side > 0"),
])
def test_validation_names_key_and_constraint(field, value, fragment):
    with pytest.raises(ValueError) as err:
        SimulationConfig(**{field: value})
    assert field in str(err.value)
    assert fragment in str(err.value)


def test_parse_config_roundtrip(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("# defaults with a denser crowd\nK = 100\nseed = 42\nmu = 1.9\n")
    config = parse_config(path)
    assert config.K == 100 and config.seed == 42 and config.mu == 1.9
    assert config.L == 50  # untouched default


@pytest.mark.parametrize("text,fragment", [
    ("K = 100\nK = 50\n", "duplicate"),
    ("bandwidth = 20\n", "unknown config key"),
    ("K 100\n", "expected 'key = value'"),
    ("K = many\n", "bad value"),
])
def test_parse_config_diagnostics(tmp_path, text, fragment):
    path = tmp_path / "bad.conf"
    path.write_text(text)
    with pytest.raises(ValueError) as err:
        parse_config(path)
    assert fragment in str(err.value)


def test_parse_config_rejects_infeasible_combination(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("K = 100\nL = 10\ntau_p = 5\n")
    with pytest.raises(ValueError) as err:
        parse_config(path)
    assert "K <= L * tau_p" in str(err.value)
