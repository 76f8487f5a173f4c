"""Left-invariant generalized connections on E = g + g*.

Coefficients are stored as omega[A, B, C] = <D_{e_A} e_B, e_C> over an
adapted basis. The canonical Levi-Civita connection D0 is torsion free,
metric for the generalized metric and divergence free; adding an element
of the kernel of the prolongation map prescribes any divergence.

Functions:
    canonical_connection: D0 from the Dorfman tensor
    torsion: T = d_omega - B
    divergence: delta(e_B) = sum_A eta^AA omega_{ABA}
    alt_map: alt(sigma)_{ABC} = sigma_{ABC} - sigma_{ACB}
    partial_matrix / alt_matrix: The same maps acting on flattened tensors
    prolongation_dimension: dim of the kernel of d on one block
    prescribed_divergence_connection: D0 + S with a given divergence
    riemannian_divergence: delta_A = -tr ad_{pi e_A}
    christoffel: Levi-Civita coefficients of g in the frame
"""

import itertools
import logging

import numpy as np

from gencurv.config import get_tolerance
from gencurv.courant import DorfmanTensor
from gencurv.exceptions import DimensionError, InvalidInputError, UnsupportedError
from gencurv.lie import AdaptedBasis
from gencurv.linalg import as_tensor, numerical_rank
from gencurv.utils import max_abs, primed_indices

logger = logging.getLogger(__name__)


# =============================================================================
# Types
# =============================================================================


def _check_skew_last_two(t: np.ndarray, name: str) -> None:
    scale = max(1.0, max_abs(t))
    if max_abs(t + np.transpose(t, (0, 2, 1))) > get_tolerance() * scale:
        raise InvalidInputError(f"{name} is not skew in its last two slots")


class ConnectionCoefficients:
    """Coefficients omega_{ABC} of a generalized connection metric for <.,.>."""

    def __init__(self, omega, eta):
        self.omega = as_tensor(omega, "connection")
        self.eta = np.asarray(eta, dtype=float)
        m = self.eta.shape[0]
        if m % 2 or self.omega.shape != (m, m, m):
            raise DimensionError(f"Connection must have shape (2n, 2n, 2n), got {self.omega.shape}")
        _check_skew_last_two(self.omega, "Connection")
        self.omega.setflags(write=False)

    @property
    def n(self) -> int:
        return self.eta.shape[0] // 2

    def operators(self) -> np.ndarray:
        """Matrices of D_{e_A}: result[A][F, C] = omega_{AC}^F."""
        return np.transpose(self.omega * self.eta[None, None, :], (0, 2, 1))

    def mixed_block_norm(self) -> float:
        """Largest omega_{ABC} with B and C in different eigenbundles."""
        n = self.n
        return max(max_abs(self.omega[:, :n, n:]), max_abs(self.omega[:, n:, :n]))

    def is_metric(self, tol: float = None) -> bool:
        """True if D preserves E+ and E-, i.e. D is metric for the generalized metric."""
        tol = get_tolerance() if tol is None else tol
        return self.mixed_block_norm() <= tol

    def __add__(self, other: "ProlongationElement") -> "ConnectionCoefficients":
        return ConnectionCoefficients(self.omega + other.S, self.eta)

    def __repr__(self) -> str:
        return f"ConnectionCoefficients(n={self.n})"


class ProlongationElement:
    """Element S of E* x so(E) with S_{ABC} = <S_{e_A} e_B, e_C>."""

    def __init__(self, S, eta):
        self.S = as_tensor(S, "prolongation element")
        self.eta = np.asarray(eta, dtype=float)
        m = self.eta.shape[0]
        if self.S.shape != (m, m, m):
            raise DimensionError(f"Element must have shape (2n, 2n, 2n), got {self.S.shape}")
        _check_skew_last_two(self.S, "Prolongation element")

    @property
    def n(self) -> int:
        return self.eta.shape[0] // 2

    def is_block_preserving(self, tol: float = None) -> bool:
        tol = get_tolerance() if tol is None else tol
        n = self.n
        return max(max_abs(self.S[:, :n, n:]), max_abs(self.S[:, n:, :n])) <= tol

    def partial_residual(self) -> float:
        """Largest entry of d S."""
        return max_abs(cyclic_sum(self.S))

    def __repr__(self) -> str:
        return f"ProlongationElement(n={self.n}, max={max_abs(self.S):.3g})"


class DivergenceForm:
    """Divergence delta in E*, stored as delta[A] = delta(e_A)."""

    def __init__(self, delta):
        self.delta = as_tensor(delta, "divergence")
        if self.delta.ndim != 1 or self.delta.shape[0] % 2 or self.delta.shape[0] == 0:
            raise DimensionError(f"Divergence must have even length 2n, got {self.delta.shape}")
        self.delta.setflags(write=False)

    @classmethod
    def zero(cls, n: int) -> "DivergenceForm":
        return cls(np.zeros(2 * n))

    @property
    def n(self) -> int:
        return self.delta.shape[0] // 2

    @property
    def plus(self) -> np.ndarray:
        return self.delta[: self.n]

    @property
    def minus(self) -> np.ndarray:
        return self.delta[self.n :]

    def is_zero(self, tol: float = None) -> bool:
        tol = get_tolerance() if tol is None else tol
        return max_abs(self.delta) <= tol

    def __repr__(self) -> str:
        return f"DivergenceForm({self.delta.tolist()})"


class ChristoffelCoefficients:
    """Levi-Civita coefficients Gamma_{abc} = g(nabla_{v_a} v_b, v_c) in an orthonormal frame."""

    def __init__(self, Gamma, eps):
        self.Gamma = as_tensor(Gamma, "Christoffel symbols")
        self.eps = np.asarray(eps, dtype=float)
        n = self.eps.shape[0]
        if self.Gamma.shape != (n, n, n):
            raise DimensionError(f"Christoffel symbols must have shape (n, n, n), got {self.Gamma.shape}")
        _check_skew_last_two(self.Gamma, "Christoffel symbols")

    @property
    def raised(self) -> np.ndarray:
        """Gamma_{ab}^d = Gamma_{abd} eps_d."""
        return self.Gamma * self.eps[None, None, :]

    def contract(self, form: np.ndarray) -> np.ndarray:
        """Gamma_{ab}^d xi_d."""
        return np.einsum("abd,d->ab", self.raised, form)

    def covariant_derivative(self, form: np.ndarray) -> np.ndarray:
        """(nabla_{v_a} xi)(v_b) = -Gamma_{ab}^d xi_d for a left-invariant one-form xi."""
        return -self.contract(form)

    def trace(self) -> np.ndarray:
        """tr(nabla v_b) = sum_a eps_a Gamma_{aba}."""
        return np.einsum("a,aba->b", self.eps, self.Gamma)


# =============================================================================
# Prolongation maps
# =============================================================================


def cyclic_sum(t: np.ndarray) -> np.ndarray:
    """(d t)_{ABC} = t_{ABC} + t_{BCA} + t_{CAB}."""
    t = np.asarray(t, dtype=float)
    return t + np.einsum("bca->abc", t) + np.einsum("cab->abc", t)


def _alt(t: np.ndarray) -> np.ndarray:
    return t - np.transpose(t, (0, 2, 1))


def alt_map(sigma, n: int) -> ProlongationElement:
    """alt(sigma)_{ABC} = sigma_{ABC} - sigma_{ACB} for sigma supported on one block.

    Args:
        sigma: Array of shape (2n, 2n, 2n), symmetric in its first two slots
        n: Dimension of the Lie algebra

    Raises:
        InvalidInputError: If sigma is not symmetric in its first two slots
            or has entries outside E+* x E+* x E+* or E-* x E-* x E-*
    """
    sigma = as_tensor(sigma, "sigma")
    if sigma.shape != (2 * n,) * 3:
        raise DimensionError(f"sigma must have shape {(2 * n,) * 3}, got {sigma.shape}")
    scale = max(1.0, max_abs(sigma))
    tol = get_tolerance() * scale
    if max_abs(sigma - np.transpose(sigma, (1, 0, 2))) > tol:
        raise InvalidInputError("sigma is not symmetric in its first two slots")
    plus = np.zeros_like(sigma)
    plus[:n, :n, :n] = sigma[:n, :n, :n]
    minus = np.zeros_like(sigma)
    minus[n:, n:, n:] = sigma[n:, n:, n:]
    if max_abs(sigma - plus - minus) > tol:
        raise InvalidInputError("sigma has entries mixing E+ and E-")
    if max_abs(plus) > tol and max_abs(minus) > tol:
        raise InvalidInputError("sigma must be supported on a single eigenbundle")
    eta = np.concatenate([np.ones(n), -np.ones(n)])
    return ProlongationElement(_alt(sigma), eta)


def _permutation_matrix(m: int, axes) -> np.ndarray:
    """Matrix of t -> u with u[i0, i1, i2] = t[i_axes0, i_axes1, i_axes2] on flattened tensors."""
    size = m ** 3
    P = np.zeros((size, size))
    for index in itertools.product(range(m), repeat=3):
        target = np.ravel_multi_index(index, (m, m, m))
        source = np.ravel_multi_index(tuple(index[k] for k in axes), (m, m, m))
        P[target, source] = 1.0
    return P


def partial_matrix(m: int) -> np.ndarray:
    """Matrix of the cyclic sum d on flattened tensors of shape (m, m, m)."""
    return np.eye(m ** 3) + _permutation_matrix(m, (1, 2, 0)) + _permutation_matrix(m, (2, 0, 1))


def alt_matrix(m: int) -> np.ndarray:
    """Matrix of alt on flattened tensors of shape (m, m, m)."""
    return np.eye(m ** 3) - _permutation_matrix(m, (0, 2, 1))


def _skew_last_two_basis(m: int) -> np.ndarray:
    columns = []
    for a in range(m):
        for b in range(m):
            for c in range(b + 1, m):
                t = np.zeros((m, m, m))
                t[a, b, c] = 1.0
                t[a, c, b] = -1.0
                columns.append(t.ravel())
    return np.column_stack(columns) if columns else np.zeros((m ** 3, 0))


def _sym_first_two_basis(m: int) -> np.ndarray:
    columns = []
    for a in range(m):
        for b in range(a, m):
            for c in range(m):
                t = np.zeros((m, m, m))
                t[a, b, c] = 1.0
                t[b, a, c] = 1.0
                columns.append(t.ravel())
    return np.column_stack(columns)


def prolongation_dimension(n: int) -> int:
    """Dimension of the kernel of d on the one-block space E+* x so(E+)."""
    Q = _skew_last_two_basis(n)
    if Q.shape[1] == 0:
        return 0
    return Q.shape[1] - numerical_rank(partial_matrix(n) @ Q)


def alt_image_dimension(n: int) -> int:
    """Rank of alt on Sym^2 E+* x E+*."""
    return numerical_rank(alt_matrix(n) @ _sym_first_two_basis(n))


# =============================================================================
# Connections
# =============================================================================


def canonical_connection(B: DorfmanTensor) -> ConnectionCoefficients:
    """Canonical divergence-free Levi-Civita connection D0.

    omega_{abc} = B_{abc}/3, omega_{ijk} = B_{ijk}/3, omega_{ibc} = B_{ibc},
    omega_{ajk} = B_{ajk}; every other block vanishes.
    """
    n = B.n
    P, M = slice(0, n), slice(n, 2 * n)
    omega = np.zeros_like(B.B)
    omega[P, P, P] = B.B[P, P, P] / 3.0
    omega[M, M, M] = B.B[M, M, M] / 3.0
    omega[M, P, P] = B.B[M, P, P]
    omega[P, M, M] = B.B[P, M, M]
    return ConnectionCoefficients(omega, B.eta)


def torsion(omega: ConnectionCoefficients, B: DorfmanTensor) -> np.ndarray:
    """Generalized torsion T = d omega - B."""
    if omega.omega.shape != B.B.shape:
        raise DimensionError("Connection and Dorfman tensor have different shapes")
    return cyclic_sum(omega.omega) - B.B


def divergence(omega: ConnectionCoefficients) -> DivergenceForm:
    """delta(e_B) = tr(D e_B) = sum_A eta^AA omega_{ABA}."""
    return DivergenceForm(np.einsum("A,ABA->B", omega.eta, omega.omega))


def _pivot(q: int, n: int) -> int:
    start = 0 if q < n else n
    return start + 1 if q == start else start


def divergence_correction(delta: DivergenceForm, eta: np.ndarray) -> ProlongationElement:
    """S in the kernel of d with divergence delta.

    S = -sum_q delta_q eta_pp alt(e^p e^p e^q), where the pivot p is the
    first basis index of the block of q (the second one when q is first).

    Raises:
        UnsupportedError: If n = 1
    """
    n = delta.n
    if n < 2:
        raise UnsupportedError("A nonzero divergence needs dim g >= 2")
    eta = np.asarray(eta, dtype=float)
    sigma = np.zeros((2 * n,) * 3)
    for q, value in enumerate(delta.delta):
        if value == 0.0:
            continue
        p = _pivot(q, n)
        sigma[p, p, q] -= value * eta[p]
    return ProlongationElement(_alt(sigma), eta)


def prescribed_divergence_connection(B: DorfmanTensor, delta: DivergenceForm) -> ConnectionCoefficients:
    """Torsion-free generalized connection D0 + S metric for the generalized metric with divergence delta.

    Raises:
        DimensionError: If delta does not match the Dorfman tensor
        UnsupportedError: If n = 1
    """
    if delta.n != B.n:
        raise DimensionError(f"Divergence of dimension {delta.n} for a Dorfman tensor of dim {B.n}")
    if B.n < 2:
        raise UnsupportedError("Prescribed divergence needs dim g >= 2")
    return canonical_connection(B) + divergence_correction(delta, B.eta)


def riemannian_divergence(basis: AdaptedBasis) -> DivergenceForm:
    """Divergence of the Riemannian volume: delta_A = -tr ad_{pi e_A}."""
    tau = basis.frame_algebra.trace_form()
    return DivergenceForm(-tau[primed_indices(basis.n)])


def christoffel(basis: AdaptedBasis) -> ChristoffelCoefficients:
    """Gamma_{abc} = (kappa_{abc} - kappa_{bca} + kappa_{cab}) / 2."""
    K = basis.kappa_lower
    Gamma = 0.5 * (K - np.einsum("bca->abc", K) + np.einsum("cab->abc", K))
    return ChristoffelCoefficients(Gamma, basis.eps)


def expected_prolongation_dimension(n: int) -> int:
    """n^2 (n + 1) / 2 - n (n + 1) (n + 2) / 6, the kernel dimension from the exact sequence."""
    return n * n * (n + 1) // 2 - n * (n + 1) * (n + 2) // 6


__all__ = [
    "ConnectionCoefficients",
    "ProlongationElement",
    "DivergenceForm",
    "ChristoffelCoefficients",
    "cyclic_sum",
    "alt_map",
    "partial_matrix",
    "alt_matrix",
    "prolongation_dimension",
    "alt_image_dimension",
    "expected_prolongation_dimension",
    "canonical_connection",
    "torsion",
    "divergence",
    "divergence_correction",
    "prescribed_divergence_connection",
    "riemannian_divergence",
    "christoffel",
]
