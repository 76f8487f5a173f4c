"""The H-twisted Dorfman bracket on E = g + g* for left-invariant sections.

All quantities are expressed in the frame of an AdaptedBasis: vector parts
in the basis (v_a) and covector parts in the dual basis (v^a).

Examples:
    >>> from gencurv.courant import dorfman_tensor, check_courant_axioms
    >>>
    >>> B = dorfman_tensor(basis)
    >>> check_courant_axioms(B).ok
    True
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from gencurv.config import get_tolerance
from gencurv.exceptions import DimensionError, InvalidInputError
from gencurv.lie import AdaptedBasis, LieAlgebraData, ThreeFormData
from gencurv.linalg import as_tensor
from gencurv.utils import block_signs, max_abs, primed_indices

logger = logging.getLogger(__name__)

DORFMAN_METHODS = ("closed", "direct")


class GeneralizedVector:
    """Left-invariant section X + xi of E."""

    def __init__(self, x, xi):
        self.x = as_tensor(x, "vector part")
        self.xi = as_tensor(xi, "covector part")
        self._validate()

    def _validate(self) -> None:
        if self.x.ndim != 1 or self.x.shape != self.xi.shape:
            raise DimensionError(
                f"Vector and covector parts must be 1D of equal length, "
                f"got {self.x.shape} and {self.xi.shape}"
            )

    @classmethod
    def from_basis(cls, basis: AdaptedBasis, index: int) -> "GeneralizedVector":
        """The adapted basis element e_index (0-based)."""
        n = basis.n
        if not 0 <= index < 2 * n:
            raise InvalidInputError(f"Basis index {index} outside 0..{2 * n - 1}")
        a = index % n
        sign = 1.0 if index < n else -1.0
        x = np.zeros(n)
        xi = np.zeros(n)
        x[a] = 1.0
        xi[a] = sign * basis.eps[a]
        return cls(x, xi)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def __add__(self, other: "GeneralizedVector") -> "GeneralizedVector":
        return GeneralizedVector(self.x + other.x, self.xi + other.xi)

    def __mul__(self, scalar: float) -> "GeneralizedVector":
        return GeneralizedVector(scalar * self.x, scalar * self.xi)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"GeneralizedVector(x={self.x.tolist()}, xi={self.xi.tolist()})"


def _three_form_array(H: Union[ThreeFormData, np.ndarray, None], n: int) -> np.ndarray:
    if H is None:
        return np.zeros((n, n, n))
    if isinstance(H, ThreeFormData):
        return H.H
    return np.asarray(H, dtype=float)


def dorfman_bracket(
    u: GeneralizedVector,
    v: GeneralizedVector,
    alg: LieAlgebraData,
    H: Union[ThreeFormData, np.ndarray, None] = None,
) -> GeneralizedVector:
    """[X + xi, Y + eta]_H = [X, Y] + L_X eta - i_Y d xi + H(X, Y, .).

    For left-invariant sections the covector part at v_c reads
    -X^a kappa_{ac}^d eta_d + Y^b kappa_{bc}^d xi_d + X^a Y^b H_{abc}.

    Raises:
        DimensionError: If u, v and the algebra have different dimensions
    """
    n = alg.n
    if u.n != n or v.n != n:
        raise DimensionError(f"Sections of dimension {u.n}, {v.n} on an algebra of dim {n}")
    H = _three_form_array(H, n)
    k = alg.kappa
    x = alg.bracket(u.x, v.x)
    xi = (
        -np.einsum("a,acd,d->c", u.x, k, v.xi)
        + np.einsum("b,bcd,d->c", v.x, k, u.xi)
        + np.einsum("a,b,abc->c", u.x, v.x, H)
    )
    return GeneralizedVector(x, xi)


def scalar_product(u: GeneralizedVector, v: GeneralizedVector) -> float:
    """<X + xi, Y + eta> = (xi(Y) + eta(X)) / 2."""
    if u.n != v.n:
        raise DimensionError(f"Sections of dimension {u.n} and {v.n}")
    return 0.5 * float(u.xi @ v.x + v.xi @ u.x)


class DorfmanTensor:
    """Coefficients B_{ABC} = <[e_A, e_B]_H, e_C> over an adapted basis.

    Attributes:
        B: Array of shape (2n, 2n, 2n)
        eta: Diagonal of the pairing in the adapted basis
    """

    def __init__(self, B, eta):
        self.B = as_tensor(B, "Dorfman tensor")
        self.eta = np.asarray(eta, dtype=float)
        self._validate()
        self.B.setflags(write=False)

    def _validate(self) -> None:
        m = self.eta.shape[0]
        if m % 2 or self.B.shape != (m, m, m):
            raise DimensionError(
                f"Dorfman tensor must have shape (2n, 2n, 2n) matching eta, got {self.B.shape}"
            )

    @property
    def n(self) -> int:
        return self.eta.shape[0] // 2

    @property
    def raised(self) -> np.ndarray:
        """B_{AB}^C = B_{ABC} eta^{CC}."""
        return self.B * self.eta[None, None, :]

    def skewness(self) -> float:
        """Largest deviation from total antisymmetry."""
        B = self.B
        return max(
            max_abs(B + np.transpose(B, (1, 0, 2))),
            max_abs(B + np.transpose(B, (0, 2, 1))),
        )

    def jacobi(self) -> np.ndarray:
        """J[A, B, C, F] = sum over cyclic (A, B, C) of B_{AD}^F B_{BC}^D."""
        Bup = self.raised
        return (
            np.einsum("adf,bcd->abcf", Bup, Bup)
            + np.einsum("bdf,cad->abcf", Bup, Bup)
            + np.einsum("cdf,abd->abcf", Bup, Bup)
        )

    def leibniz(self) -> np.ndarray:
        """[u, [v, w]] - [[u, v], w] - [v, [u, w]] on basis elements, component F."""
        Bup = self.raised
        return (
            np.einsum("bcd,adf->abcf", Bup, Bup)
            - np.einsum("abd,dcf->abcf", Bup, Bup)
            - np.einsum("acd,bdf->abcf", Bup, Bup)
        )

    def block(self, *signs: str) -> np.ndarray:
        """Sub-tensor on the blocks named by '+' or '-' for each slot."""
        n = self.n
        ranges = {"+": slice(0, n), "-": slice(n, 2 * n)}
        return self.B[tuple(ranges[s] for s in signs)]

    def __repr__(self) -> str:
        return f"DorfmanTensor(n={self.n})"


def _closed_form(basis: AdaptedBasis) -> np.ndarray:
    """B_{ABC} = (H_{A'B'C'} + s_C k_{A'B'C'} + s_A k_{B'C'A'} + s_B k_{C'A'B'}) / 2."""
    n = basis.n
    p = primed_indices(n)
    s = block_signs(n)
    K = basis.kappa_lower[np.ix_(p, p, p)]
    H = basis.H[np.ix_(p, p, p)]
    return 0.5 * (
        H
        + s[None, None, :] * K
        + s[:, None, None] * np.einsum("bca->abc", K)
        + s[None, :, None] * np.einsum("cab->abc", K)
    )


def _direct(basis: AdaptedBasis) -> np.ndarray:
    n = basis.n
    elements = [GeneralizedVector.from_basis(basis, A) for A in range(2 * n)]
    B = np.zeros((2 * n,) * 3)
    for A, u in enumerate(elements):
        for C, v in enumerate(elements):
            bracket = dorfman_bracket(u, v, basis.frame_algebra, basis.H)
            for D, w in enumerate(elements):
                B[A, C, D] = scalar_product(bracket, w)
    return B


def dorfman_tensor(basis: AdaptedBasis, method: str = "closed") -> DorfmanTensor:
    """Dorfman coefficients of an adapted basis.

    Args:
        basis: Adapted basis carrying the frame structure constants and H
        method: 'closed' for the component formulas, 'direct' for pairing brackets of basis elements

    Raises:
        InvalidInputError: If method is unknown
    """
    if method == "closed":
        B = _closed_form(basis)
    elif method == "direct":
        B = _direct(basis)
    else:
        raise InvalidInputError(f"Unknown method '{method}', expected one of {DORFMAN_METHODS}")
    logger.debug("Dorfman tensor (%s) for %r", method, basis)
    return DorfmanTensor(B, np.diag(basis.eta.matrix))


@dataclass(frozen=True)
class CourantReport:
    """Maximal violations of the Courant algebroid axioms on basis sections."""

    skewness: float
    leibniz: float
    jacobi: float
    tol: float

    @property
    def max_violation(self) -> float:
        return max(self.skewness, self.leibniz, self.jacobi)

    @property
    def ok(self) -> bool:
        return self.max_violation <= self.tol


def check_courant_axioms(B: DorfmanTensor) -> CourantReport:
    """Check the Leibniz identity and the reduced pairing axioms.

    The pairing of left-invariant sections is constant, so the two axioms
    involving the pairing reduce to total antisymmetry of B.
    """
    scale = max(1.0, max_abs(B.B)) ** 2
    return CourantReport(
        skewness=B.skewness(),
        leibniz=max_abs(B.leibniz()),
        jacobi=max_abs(B.jacobi()),
        tol=get_tolerance() * scale,
    )


__all__ = [
    "DORFMAN_METHODS",
    "GeneralizedVector",
    "dorfman_bracket",
    "scalar_product",
    "DorfmanTensor",
    "dorfman_tensor",
    "CourantReport",
    "check_courant_axioms",
]
