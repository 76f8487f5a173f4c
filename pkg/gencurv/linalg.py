"""Dense multilinear algebra in small fixed dimensions.

Tensors are plain numpy arrays. This module adds the few operations the
geometry needs on top of numpy: contraction along index pairs, full
antisymmetrization, signature-aware raising and lowering, and a validated
symmetric bilinear form.

Functions:
    as_tensor: Convert input to a finite float array
    contract: Contract two tensors along pairs of axes
    antisymmetrize: Full alternation with 1/k! normalisation
    is_alternating: Check that a tensor is totally antisymmetric
    levi_civita: Permutation-sign symbol in n dimensions
    raise_index / lower_index: Index gymnastics with a BilinearForm
    null_space: Orthonormal basis of the kernel of a matrix
    numerical_rank: Rank with the active tolerance

Examples:
    >>> import numpy as np
    >>> from gencurv.linalg import BilinearForm, raise_index
    >>>
    >>> form = BilinearForm(np.diag([1.0, 1.0, -1.0]))
    >>> raise_index(np.array([0.0, 0.0, 1.0]), form, 0)
    array([ 0.,  0., -1.])
"""

import itertools
import logging
import math
from typing import Sequence, Tuple

import numpy as np

from gencurv.config import get_tolerance
from gencurv.exceptions import DimensionError, InvalidInputError, SingularityError

logger = logging.getLogger(__name__)


def as_tensor(data, name: str = "tensor") -> np.ndarray:
    """Return data as a float array, rejecting NaN and infinite entries."""
    arr = np.array(data, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return arr


def contract(t: np.ndarray, u: np.ndarray, axes: Sequence[Tuple[int, int]]) -> np.ndarray:
    """Contract t and u along the given (axis of t, axis of u) pairs.

    The result carries the uncontracted axes of t followed by those of u.

    Args:
        t: First tensor
        u: Second tensor
        axes: Index pairs to contract

    Returns:
        Contracted tensor

    Raises:
        DimensionError: If a paired axis does not exist or dimensions differ

    Examples:
        >>> contract(np.eye(3), np.array([1.0, 2.0, 3.0]), [(1, 0)])
        array([1., 2., 3.])
    """
    t = np.asarray(t, dtype=float)
    u = np.asarray(u, dtype=float)
    left, right = [], []
    for a, b in axes:
        if not (0 <= a < t.ndim and 0 <= b < u.ndim):
            raise DimensionError(f"Axis pair {(a, b)} out of range for shapes {t.shape}, {u.shape}")
        if t.shape[a] != u.shape[b]:
            raise DimensionError(
                f"Cannot contract axis {a} (dim {t.shape[a]}) with axis {b} (dim {u.shape[b]})"
            )
        left.append(a)
        right.append(b)
    return np.tensordot(t, u, axes=(left, right))


def _permutation_sign(perm: Sequence[int]) -> int:
    inversions = sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


def _check_cubical(t: np.ndarray) -> None:
    if t.ndim > 0 and len(set(t.shape)) != 1:
        raise DimensionError(f"Expected all axes of equal dimension, got shape {t.shape}")


def antisymmetrize(t: np.ndarray) -> np.ndarray:
    """Full alternation of a cubical tensor, normalised by 1/k!.

    Raises:
        DimensionError: If the axes do not all have the same dimension
    """
    t = np.asarray(t, dtype=float)
    _check_cubical(t)
    k = t.ndim
    if k < 2:
        return t.copy()
    result = np.zeros_like(t)
    for perm in itertools.permutations(range(k)):
        result += _permutation_sign(perm) * np.transpose(t, perm)
    return result / math.factorial(k)


def symmetrize(t: np.ndarray) -> np.ndarray:
    """Full symmetrization of a cubical tensor, normalised by 1/k!."""
    t = np.asarray(t, dtype=float)
    _check_cubical(t)
    k = t.ndim
    if k < 2:
        return t.copy()
    result = np.zeros_like(t)
    for perm in itertools.permutations(range(k)):
        result += np.transpose(t, perm)
    return result / math.factorial(k)


def is_alternating(t: np.ndarray, tol: float = None) -> bool:
    """True if t equals its own alternation within tolerance."""
    tol = get_tolerance() if tol is None else tol
    t = np.asarray(t, dtype=float)
    try:
        return bool(np.max(np.abs(antisymmetrize(t) - t), initial=0.0) <= tol)
    except DimensionError:
        return False


def levi_civita(n: int) -> np.ndarray:
    """Levi-Civita symbol with n indices, epsilon_{0..n-1} = +1."""
    eps = np.zeros((n,) * n)
    for perm in itertools.permutations(range(n)):
        eps[perm] = _permutation_sign(perm)
    return eps


def wedge(*covectors: np.ndarray) -> np.ndarray:
    """Wedge product of covectors as an alternating tensor without 1/k! factor.

    With this convention (a ^ b)(x, y) = a(x) b(y) - a(y) b(x).
    """
    t = covectors[0]
    for c in covectors[1:]:
        t = np.multiply.outer(t, c)
    return math.factorial(len(covectors)) * antisymmetrize(t)


class BilinearForm:
    """Symmetric bilinear form on a real vector space of dimension dim.

    The matrix is symmetrised exactly on construction so that the stored
    matrix is symmetric entrywise.
    """

    def __init__(self, matrix, require_nondegenerate: bool = False, name: str = "form"):
        """Create a bilinear form.

        Args:
            matrix: Square symmetric matrix (within tolerance)
            require_nondegenerate: Raise if |det| <= TOL
            name: Used in error messages

        Raises:
            DimensionError: If the matrix is not square
            InvalidInputError: If the matrix is not symmetric or not finite
            SingularityError: If nondegeneracy is required and fails
        """
        self.name = name
        self.matrix = as_tensor(matrix, name)
        self._validate(require_nondegenerate)
        self.matrix = 0.5 * (self.matrix + self.matrix.T)
        self.matrix.setflags(write=False)

    def _validate(self, require_nondegenerate: bool) -> None:
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise DimensionError(f"{self.name} must be a square matrix, got shape {m.shape}")
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.T)) > get_tolerance() * scale:
            raise InvalidInputError(f"{self.name} is not symmetric")
        if require_nondegenerate and not self.is_nondegenerate():
            raise SingularityError(f"{self.name} is degenerate (|det| <= {get_tolerance()})")

    @classmethod
    def from_signs(cls, signs: Sequence[float]) -> "BilinearForm":
        """Diagonal form diag(signs)."""
        return cls(np.diag(np.asarray(signs, dtype=float)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    def is_nondegenerate(self) -> bool:
        return abs(self.det) > get_tolerance()

    @property
    def inverse(self) -> np.ndarray:
        """Inverse matrix.

        Raises:
            SingularityError: If the form is degenerate
        """
        if not self.is_nondegenerate():
            raise SingularityError(f"{self.name} is degenerate and cannot be inverted")
        return np.linalg.inv(self.matrix)

    @property
    def signature(self) -> Tuple[int, int]:
        """Numbers (p, q) of positive and negative eigenvalues."""
        eigenvalues = np.linalg.eigvalsh(self.matrix)
        tol = get_tolerance()
        return int(np.sum(eigenvalues > tol)), int(np.sum(eigenvalues < -tol))

    def __call__(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(np.asarray(x) @ self.matrix @ np.asarray(y))

    def __repr__(self) -> str:
        return f"BilinearForm(name='{self.name}', dim={self.dim}, signature={self.signature})"


def _apply_on_axis(t: np.ndarray, matrix: np.ndarray, axis: int) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if not 0 <= axis < t.ndim:
        raise DimensionError(f"Axis {axis} out of range for shape {t.shape}")
    if t.shape[axis] != matrix.shape[0]:
        raise DimensionError(
            f"Axis {axis} has dimension {t.shape[axis]}, form has dimension {matrix.shape[0]}"
        )
    return np.moveaxis(np.tensordot(t, matrix, axes=([axis], [0])), -1, axis)


def raise_index(t: np.ndarray, form: BilinearForm, axis: int) -> np.ndarray:
    """Contract the given axis with the inverse matrix of form.

    Raises:
        SingularityError: If the form is degenerate
        DimensionError: If the axis does not match the form dimension
    """
    return _apply_on_axis(t, form.inverse, axis)


def lower_index(t: np.ndarray, form: BilinearForm, axis: int) -> np.ndarray:
    """Contract the given axis with the matrix of form."""
    return _apply_on_axis(t, form.matrix, axis)


def null_space(matrix: np.ndarray, tol: float = None) -> np.ndarray:
    """Orthonormal basis (columns) of the kernel of a matrix.

    Singular values below tol * max(1, largest singular value) count as zero.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    tol = get_tolerance() if tol is None else tol
    _, s, vh = np.linalg.svd(matrix)
    scale = max(1.0, float(s[0])) if s.size else 1.0
    rank = int(np.sum(s > tol * scale))
    return vh[rank:].T.copy()


def numerical_rank(matrix: np.ndarray, tol: float = None) -> int:
    """Rank counting singular values above tol * max(1, largest singular value)."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.size == 0:
        return 0
    tol = get_tolerance() if tol is None else tol
    s = np.linalg.svd(matrix, compute_uv=False)
    scale = max(1.0, float(s[0])) if s.size else 1.0
    return int(np.sum(s > tol * scale))


__all__ = [
    "as_tensor",
    "contract",
    "antisymmetrize",
    "symmetrize",
    "is_alternating",
    "levi_civita",
    "wedge",
    "BilinearForm",
    "raise_index",
    "lower_index",
    "null_space",
    "numerical_rank",
]
