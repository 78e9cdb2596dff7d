"""
Tests for configuration loading and validation.

Tests the JSON configuration surface including:
- Flux parsing in radians and units of pi
- Unit conversion of the circuit block
- Rejection of unknown keys and inconsistent values
- File-level errors (missing file, invalid JSON)
"""

import json
import math
from pathlib import Path

import pytest
from pydantic import ValidationError

from xmoncoupler.config import config_from_dict, load_config, parse_flux, parse_flux_arg
from xmoncoupler.errors import EXIT_CONFIG, ConfigError, ErrorType
from xmoncoupler.schemas import PHI0, CircuitConfig, GridSpec, SweepConfig

REPO_CONFIG = Path(__file__).resolve().parents[1] / "configs" / "reference_device.json"


class TestParseFlux:
    """Flux values from text."""

    @pytest.mark.parametrize("text, expected", [
        ("0.598pi", 0.598 * math.pi),
        ("0.598π", 0.598 * math.pi),
        ("pi", math.pi),
        ("2pi", 2 * math.pi),
        ("-0.5pi", -0.5 * math.pi),
        ("-pi", -math.pi),
        ("1.5 * pi", 1.5 * math.pi),
        (".25pi", 0.25 * math.pi),
        ("1.2", 1.2),
        ("-3e-1", -0.3),
        (0.7, 0.7),
        (2, 2.0),
    ])
    def test_accepted_forms(self, text, expected):
        assert parse_flux(text) == pytest.approx(expected)

    @pytest.mark.parametrize("text", ["", "pie", "0.5pipi", "half", True, None])
    def test_rejected_forms(self, text):
        with pytest.raises(ValueError):
            parse_flux(text)

    def test_argument_errors_are_config_errors(self):
        with pytest.raises(ConfigError) as excinfo:
            parse_flux_arg("abc")
        assert excinfo.value.exit_code == EXIT_CONFIG
        assert excinfo.value.context == {"argument": "abc"}


class TestSchemas:
    """Pydantic models."""

    def test_circuit_units(self):
        params = CircuitConfig(C1_fF=91, C2_fF=91, Lj1_nH=8.6, Lj2_nH=8.6,
                               L01_pH=200, L02_pH=200, LT_nH=1.3).to_params()
        assert params.C1 == pytest.approx(91e-15)
        assert params.Lj1 == pytest.approx(8.6e-9)
        assert params.L01 == pytest.approx(200e-12)
        assert params.LT == pytest.approx(1.3e-9)
        assert params.Phi0 == PHI0
        assert params.screening_ratio == pytest.approx(0.4 / 1.3)

    def test_constant_overrides(self, config_data):
        config_data["circuit"]["Phi0_Wb"] = 2.0e-15
        assert config_from_dict(config_data).circuit_params.Phi0 == 2.0e-15

    def test_params_are_frozen(self, table_params):
        with pytest.raises(ValidationError):
            table_params.C1 = 1e-15

    def test_swapped_params(self, asymmetric_params):
        swapped = asymmetric_params.swapped()
        assert swapped.Lj1 == asymmetric_params.Lj2
        assert swapped.C2 == asymmetric_params.C1
        assert swapped.swapped() == asymmetric_params
        assert not asymmetric_params.is_symmetric()

    def test_grid_points_are_antisymmetric(self):
        grid = GridSpec(n_points=61, span="pi")
        points = grid.points
        assert points[30] == 0.0
        assert points[0] == pytest.approx(-math.pi)
        assert (points == -points[::-1]).all()
        assert grid.dimension == 61 * 61

    def test_grid_rejects_even_size(self):
        with pytest.raises(ValidationError):
            GridSpec(n_points=60)

    def test_defaults(self, config_data):
        config = config_from_dict(config_data)
        assert config.n_flux == 241
        assert config.paths == ["weak", "linear", "perturbative", "exact"]
        assert config.grid.n_points == 61
        assert config.grid.kinetic == "fourier"
        assert config.eta_grid.kinetic == "tight_binding"
        assert config.eta_grid.n_points == 801
        assert config.omega_q_weak_GHz == 5.62
        assert config.flux_values[-1] == pytest.approx(2 * math.pi)

    def test_paths_are_ordered(self, config_data):
        config_data["paths"] = ["exact", "weak"]
        assert config_from_dict(config_data).paths == ["weak", "exact"]


class TestConfigErrors:
    """Invalid configurations."""

    def test_unknown_top_level_key(self, config_data):
        config_data["n_fluxx"] = 11
        with pytest.raises(ConfigError) as excinfo:
            config_from_dict(config_data)
        assert "n_fluxx" in str(excinfo.value)
        assert excinfo.value.error_type is ErrorType.CONFIG

    def test_unknown_circuit_key(self, config_data):
        config_data["circuit"]["LJ1_nH"] = 8.6
        with pytest.raises(ConfigError):
            config_from_dict(config_data)

    def test_missing_circuit_value(self, config_data):
        del config_data["circuit"]["LT_nH"]
        with pytest.raises(ConfigError) as excinfo:
            config_from_dict(config_data)
        assert "circuit.LT_nH" in str(excinfo.value)

    @pytest.mark.parametrize("overrides", [
        {"paths": []},
        {"paths": ["weak", "weak"]},
        {"paths": ["numerical"]},
        {"n_flux": 1},
        {"flux_start": "pi", "flux_stop": "0.5pi"},
        {"grid": {"n_points": 21}},
        {"eta_override_MHz": -5.0},
        {"eta_bias": "shorted"},
        {"n_eigen": 4},
    ])
    def test_invalid_values(self, config_data, overrides):
        config_data.update(overrides)
        with pytest.raises(ConfigError):
            config_from_dict(config_data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError) as excinfo:
            load_config(tmp_path / "absent.json")
        assert "cannot read configuration" in str(excinfo.value)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{circuit: }")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_non_object_root(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text(json.dumps([1, 2]))
        with pytest.raises(ConfigError):
            load_config(path)


class TestBundledConfig:
    """The configuration shipped in configs/."""

    def test_loads(self):
        config = load_config(REPO_CONFIG)
        assert isinstance(config, SweepConfig)
        params = config.circuit_params
        assert params.is_symmetric()
        assert params.C1 == pytest.approx(91e-15)
        assert params.Lj1 == pytest.approx(8.6e-9)
        assert params.L01 == pytest.approx(200e-12)
        assert params.LT == pytest.approx(1.3e-9)
        assert config.flux_stop == pytest.approx(2 * math.pi)
        assert config.grid.kinetic == "fourier"
        assert config.eta_grid.kinetic == "tight_binding"
