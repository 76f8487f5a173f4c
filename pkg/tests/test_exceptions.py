"""Tests for gencurv.exceptions module."""

import pytest

from gencurv.exceptions import (
    DimensionError,
    GencurvError,
    InvalidInputError,
    SingularityError,
    UnsupportedError,
)


class TestHierarchy:
    """Test the exception hierarchy."""

    @pytest.mark.unit
    @pytest.mark.parametrize(
        "error", [DimensionError, SingularityError, InvalidInputError, UnsupportedError]
    )
    def test_subclasses(self, error):
        """Test that every error derives from GencurvError and ValueError."""
        assert issubclass(error, GencurvError)
        assert issubclass(error, ValueError)

    @pytest.mark.unit
    def test_catch_as_value_error(self):
        """Test that callers can catch ValueError."""
        with pytest.raises(ValueError):
            raise UnsupportedError("n = 2")


class TestInvalidInputError:
    """Test InvalidInputError locations."""

    @pytest.mark.unit
    def test_without_location(self):
        """Test message without a location."""
        exc = InvalidInputError("bad value")
        assert str(exc) == "bad value"
        assert exc.location is None

    @pytest.mark.unit
    def test_with_location(self):
        """Test that the location prefixes the message."""
        exc = InvalidInputError("bad value", "file.json:4")
        assert str(exc) == "file.json:4: bad value"
        assert exc.location == "file.json:4"
