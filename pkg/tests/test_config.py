"""Tests for gencurv.config module."""

import math

import pytest

from gencurv import config
from gencurv.config import (
    DEFAULT_DISC_TOL,
    DEFAULT_TOL,
    get_disc_tolerance,
    get_tolerance,
    reset_tolerance,
    set_tolerance,
    tolerance,
)
from gencurv.exceptions import InvalidInputError


class TestConstants:
    """Test configuration constants."""

    @pytest.mark.unit
    def test_default_tolerances(self):
        """Test the default zero-test and discriminant tolerances."""
        assert DEFAULT_TOL == 1e-9
        assert DEFAULT_DISC_TOL == 1e-7
        assert config.ORACLE_TOL == 1e-8

    @pytest.mark.unit
    def test_coarse_grid_is_subset(self):
        """Test that the coarse grid is drawn from the full grid."""
        assert set(config.COARSE_GRID) <= set(config.PARAMETER_GRID)

    @pytest.mark.unit
    def test_parameter_grid_values(self):
        """Test the full parameter grid."""
        assert config.PARAMETER_GRID == (0.5, 1.0, 2.0, math.sqrt(2.0), math.pi / 3.0)

    @pytest.mark.unit
    def test_exit_codes_distinct(self):
        """Test that exit codes are distinct."""
        codes = [
            config.EXIT_OK,
            config.EXIT_VERIFICATION_FAILED,
            config.EXIT_INVALID_INPUT,
            config.EXIT_UNSUPPORTED,
        ]
        assert codes == [0, 1, 2, 3]


class TestTolerance:
    """Test the active tolerance accessors."""

    @pytest.mark.unit
    def test_defaults_active(self):
        """Test that defaults are active without an override."""
        assert get_tolerance() == DEFAULT_TOL
        assert get_disc_tolerance() == DEFAULT_DISC_TOL

    @pytest.mark.unit
    def test_set_and_reset(self):
        """Test setting and resetting the tolerances."""
        set_tolerance(1e-6, disc_tol=1e-4)
        assert get_tolerance() == 1e-6
        assert get_disc_tolerance() == 1e-4
        reset_tolerance()
        assert get_tolerance() == DEFAULT_TOL
        assert get_disc_tolerance() == DEFAULT_DISC_TOL

    @pytest.mark.unit
    def test_set_none_keeps_value(self):
        """Test that None leaves a tolerance unchanged."""
        set_tolerance(1e-5)
        set_tolerance(None, disc_tol=1e-3)
        assert get_tolerance() == 1e-5

    @pytest.mark.unit
    @pytest.mark.parametrize("value", [0.0, -1e-9, float("nan"), float("inf")])
    def test_set_invalid_raises(self, value):
        """Test that non-positive or non-finite tolerances are rejected."""
        with pytest.raises(InvalidInputError):
            set_tolerance(value)

    @pytest.mark.unit
    def test_context_manager_restores(self):
        """Test that the context manager restores the previous tolerance."""
        with tolerance(1e-12):
            assert get_tolerance() == 1e-12
        assert get_tolerance() == DEFAULT_TOL

    @pytest.mark.unit
    def test_context_manager_restores_on_error(self):
        """Test restoration when the body raises."""
        with pytest.raises(RuntimeError):
            with tolerance(1e-3):
                raise RuntimeError("boom")
        assert get_tolerance() == DEFAULT_TOL

    @pytest.mark.unit
    def test_context_manager_none(self):
        """Test that tolerance(None) changes nothing."""
        with tolerance(None):
            assert get_tolerance() == DEFAULT_TOL


class TestEnvironmentOverride:
    """Test the GENCURV_TOL environment variable."""

    @pytest.mark.unit
    def test_valid_value(self, monkeypatch):
        """Test that a valid value becomes the default."""
        monkeypatch.setenv("GENCURV_TOL", "1e-6")
        reset_tolerance()
        assert get_tolerance() == 1e-6
        monkeypatch.delenv("GENCURV_TOL")

    @pytest.mark.unit
    def test_blank_value_ignored(self, monkeypatch):
        """Test that a blank value falls back to the default silently."""
        monkeypatch.setenv("GENCURV_TOL", "  ")
        reset_tolerance()
        assert get_tolerance() == DEFAULT_TOL
        monkeypatch.delenv("GENCURV_TOL")

    @pytest.mark.unit
    @pytest.mark.parametrize("raw", ["abc", "-1", "0", "nan"])
    def test_invalid_value_warns(self, monkeypatch, raw):
        """Test that invalid values warn and fall back to the default."""
        monkeypatch.setenv("GENCURV_TOL", raw)
        with pytest.warns(RuntimeWarning, match="GENCURV_TOL"):
            reset_tolerance()
        assert get_tolerance() == DEFAULT_TOL
        monkeypatch.delenv("GENCURV_TOL")
