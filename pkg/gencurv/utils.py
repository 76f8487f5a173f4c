"""Utility functions for gencurv.

This module contains helper functions used throughout the package.

Functions:
    primed: Map an index of E = g + g* to the index of g it projects to
    block_signs: Signs s_A = +1 on E+ and -1 on E-
    format_scalar: Format a float with 12 significant digits
    format_matrix: Format a 2D array as aligned text rows
    max_abs: Largest absolute entry of an array (0 for empty arrays)
    entries_to_tensor: Build a dense tensor from 1-based [a, b, c, value] rows
    tensor_to_entries: Inverse of entries_to_tensor for nonzero entries
    digest: Stable SHA-256 digest of JSON-serialisable input

Examples:
    >>> from gencurv.utils import primed, format_scalar
    >>>
    >>> primed(4, 3)
    1
    >>> format_scalar(1 / 3)
    '0.333333333333'
"""

import hashlib
import json
from typing import Any, Iterable, List, Sequence

import numpy as np

from gencurv.config import SIGNIFICANT_DIGITS
from gencurv.exceptions import InvalidInputError


def primed(index: int, n: int) -> int:
    """Return i' = i - n for indices of E-, and the index itself on E+.

    Indices are 0-based, so E+ is 0..n-1 and E- is n..2n-1.

    Args:
        index: Index into the adapted basis of E
        n: Dimension of the Lie algebra

    Returns:
        Index into the frame of the Lie algebra

    Raises:
        InvalidInputError: If index is outside 0..2n-1

    Examples:
        >>> primed(1, 3)
        1
        >>> primed(5, 3)
        2
    """
    if not 0 <= index < 2 * n:
        raise InvalidInputError(f"Index {index} outside 0..{2 * n - 1}")
    return index - n if index >= n else index


def primed_indices(n: int) -> np.ndarray:
    """Vector of primed indices for every basis element of E."""
    return np.concatenate([np.arange(n), np.arange(n)])


def block_signs(n: int) -> np.ndarray:
    """Signs s_A: +1 for A in E+ and -1 for A in E-."""
    return np.concatenate([np.ones(n), -np.ones(n)])


def format_scalar(value: float) -> str:
    """Format a float with the package-wide number of significant digits.

    Negative zero prints as zero.

    Examples:
        >>> format_scalar(2.0)
        '2'
        >>> format_scalar(-0.0)
        '0'
    """
    value = float(value)
    if value == 0.0:
        value = 0.0
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def format_matrix(matrix: np.ndarray) -> List[str]:
    """Format a 2D array as right-aligned text rows."""
    cells = [[format_scalar(x) for x in row] for row in np.atleast_2d(matrix)]
    width = max((len(c) for row in cells for c in row), default=0)
    return ["  ".join(c.rjust(width) for c in row) for row in cells]


def max_abs(array: Any) -> float:
    """Largest absolute entry of an array, 0.0 for empty input."""
    arr = np.asarray(array, dtype=float)
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(arr)))


def entries_to_tensor(
    entries: Iterable[Sequence[float]], n: int, rank: int = 3, name: str = "tensor"
) -> np.ndarray:
    """Build a dense tensor from rows of 1-based indices followed by a value.

    Args:
        entries: Rows like [a, b, c, value] with 1 <= a, b, c <= n
        n: Dimension of every axis
        rank: Number of indices per row
        name: Used in error messages

    Returns:
        Dense array of shape (n,) * rank

    Raises:
        InvalidInputError: If a row has the wrong length or an index out of range

    Examples:
        >>> entries_to_tensor([[1, 2, 3, 1.0]], 3)[0, 1, 2]
        1.0
    """
    tensor = np.zeros((n,) * rank)
    for row_number, row in enumerate(entries, start=1):
        row = list(row)
        if len(row) != rank + 1:
            raise InvalidInputError(
                f"{name} entry {row_number} must have {rank} indices and a value, got {row}"
            )
        indices = row[:rank]
        for index in indices:
            if int(index) != index or not 1 <= int(index) <= n:
                raise InvalidInputError(
                    f"{name} entry {row_number} has index {index} outside 1..{n}"
                )
        tensor[tuple(int(i) - 1 for i in indices)] = float(row[rank])
    return tensor


def tensor_to_entries(tensor: np.ndarray, tol: float = 0.0) -> List[List[float]]:
    """List the entries of a tensor with |value| > tol as 1-based rows."""
    rows = []
    for index in zip(*np.nonzero(np.abs(tensor) > tol)):
        rows.append([int(i) + 1 for i in index] + [float(tensor[index])])
    return rows


def digest(payload: Any) -> str:
    """Stable SHA-256 hex digest of JSON-serialisable data (sorted keys)."""
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=float)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


__all__ = [
    "primed",
    "primed_indices",
    "block_signs",
    "format_scalar",
    "format_matrix",
    "max_abs",
    "entries_to_tensor",
    "tensor_to_entries",
    "digest",
]
