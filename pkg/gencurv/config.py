"""Numerical tolerances and run-time configuration for gencurv.

This module holds every constant that controls zero tests, classification
thresholds and the verification grids, plus the accessors used to change the
active tolerances at run time.

Naming convention:
    - Constants are uppercase
    - Tolerances prefixed with DEFAULT_ are the values restored by reset_tolerance()
    - Exit codes prefixed with EXIT_

Examples:
    >>> from gencurv import config
    >>> config.get_tolerance()
    1e-09
    >>>
    >>> with config.tolerance(1e-12):
    ...     config.get_tolerance()
    1e-12
"""

import math
import os
import warnings
from contextlib import contextmanager
from typing import Iterator, Optional, Tuple

from gencurv.exceptions import InvalidInputError

# =============================================================================
# Tolerances
# =============================================================================

DEFAULT_TOL: float = 1e-9
"""Zero test and equality tolerance for every residual"""

DEFAULT_DISC_TOL: float = 1e-7
"""Discriminant tolerance separating repeated from close eigenvalues"""

ORACLE_TOL: float = 1e-8
"""Agreement tolerance between the closed-form Ricci and the curvature trace"""

TOL_ENV_VAR: str = "GENCURV_TOL"
"""Environment variable overriding DEFAULT_TOL"""


# =============================================================================
# Verification grids
# =============================================================================

PARAMETER_GRID: Tuple[float, ...] = (0.5, 1.0, 2.0, math.sqrt(2.0), math.pi / 3.0)
"""Values taken by every free parameter in a full table run"""

COARSE_GRID: Tuple[float, ...] = (1.0, math.sqrt(2.0))
"""Subset of PARAMETER_GRID used by --grid coarse"""

PERTURBATION: float = 0.05
"""Relative size of the constraint-violating perturbation"""

PERTURBATION_REPORT_FLOOR: float = 1e-2
"""Smallest residual a perturbed instance must reach to count as failing"""


# =============================================================================
# Output
# =============================================================================

SIGNIFICANT_DIGITS: int = 12
"""Significant digits of every printed float"""

EXIT_OK: int = 0
EXIT_VERIFICATION_FAILED: int = 1
EXIT_INVALID_INPUT: int = 2
EXIT_UNSUPPORTED: int = 3


# =============================================================================
# Active tolerances
# =============================================================================


def _tolerance_from_env() -> float:
    raw = os.environ.get(TOL_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL
    try:
        value = float(raw)
    except ValueError:
        value = float("nan")
    if not math.isfinite(value) or value <= 0:
        warnings.warn(
            f"Ignoring {TOL_ENV_VAR}={raw!r}: expected a positive number. "
            f"Using {DEFAULT_TOL}.",
            RuntimeWarning,
        )
        return DEFAULT_TOL
    return value


_state = {"tol": _tolerance_from_env(), "disc_tol": DEFAULT_DISC_TOL}


def get_tolerance() -> float:
    """Return the active zero-test tolerance TOL."""
    return _state["tol"]


def get_disc_tolerance() -> float:
    """Return the active discriminant tolerance DISC_TOL."""
    return _state["disc_tol"]


def set_tolerance(tol: Optional[float] = None, disc_tol: Optional[float] = None) -> None:
    """Set the active tolerances.

    Args:
        tol: New zero-test tolerance (unchanged if None)
        disc_tol: New discriminant tolerance (unchanged if None)

    Raises:
        InvalidInputError: If a value is not a positive finite number
    """
    for name, value in (("tol", tol), ("disc_tol", disc_tol)):
        if value is None:
            continue
        if not math.isfinite(value) or value <= 0:
            raise InvalidInputError(f"Tolerance {name} must be positive, got {value}")
    if tol is not None:
        _state["tol"] = float(tol)
    if disc_tol is not None:
        _state["disc_tol"] = float(disc_tol)


def reset_tolerance() -> None:
    """Restore the default tolerances, honouring GENCURV_TOL."""
    _state["tol"] = _tolerance_from_env()
    _state["disc_tol"] = DEFAULT_DISC_TOL


@contextmanager
def tolerance(tol: Optional[float] = None, disc_tol: Optional[float] = None) -> Iterator[None]:
    """Temporarily override the active tolerances.

    Examples:
        >>> with tolerance(1e-20):
        ...     pass
    """
    saved = dict(_state)
    set_tolerance(tol, disc_tol)
    try:
        yield
    finally:
        _state.update(saved)


__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_DISC_TOL",
    "ORACLE_TOL",
    "TOL_ENV_VAR",
    "PARAMETER_GRID",
    "COARSE_GRID",
    "PERTURBATION",
    "PERTURBATION_REPORT_FLOOR",
    "SIGNIFICANT_DIGITS",
    "EXIT_OK",
    "EXIT_VERIFICATION_FAILED",
    "EXIT_INVALID_INPUT",
    "EXIT_UNSUPPORTED",
    "get_tolerance",
    "get_disc_tolerance",
    "set_tolerance",
    "reset_tolerance",
    "tolerance",
]
