"""Lie algebras with a left-invariant metric and three-form.

This module provides the algebraic input of every computation: structure
constants, a metric, a three-form, the adapted basis of E = g + g*, the
Chevalley-Eilenberg differential and the B-field normal form of a
generalized metric.

Conventions:
    - kappa[a, b, c] is the structure constant kappa_{ab}^c, [v_a, v_b] = kappa_{ab}^c v_c
    - Lowered constants kappa_{abc} = kappa_{ab}^c eps_c live in an orthonormal frame
    - (d xi)(x, y) = -xi([x, y]) for left-invariant one-forms
    - Alternating tensors carry no 1/k! factor: (a ^ b)(x, y) = a(x) b(y) - a(y) b(x)

Examples:
    >>> import numpy as np
    >>> from gencurv.lie import LieAlgebraData, MetricData, adapted_basis
    >>> from gencurv.linalg import levi_civita
    >>>
    >>> so3 = LieAlgebraData(levi_civita(3))
    >>> basis = adapted_basis(so3, MetricData(np.eye(3)))
    >>> basis.eps
    array([1., 1., 1.])
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from gencurv.config import get_tolerance
from gencurv.exceptions import DimensionError, InvalidInputError, SingularityError
from gencurv.linalg import BilinearForm, as_tensor, is_alternating, levi_civita, numerical_rank
from gencurv.utils import max_abs

logger = logging.getLogger(__name__)


# =============================================================================
# Structure constants
# =============================================================================


class LieAlgebraData:
    """Real Lie algebra of dimension n given by structure constants.

    The constructor only checks shapes. Antisymmetry and the Jacobi identity
    are checked by validate_lie_algebra() so that invalid input can be
    reported instead of raised.
    """

    def __init__(self, kappa, require_valid: bool = False):
        """Create a Lie algebra from kappa[a, b, c] = kappa_{ab}^c.

        Args:
            kappa: Array of shape (n, n, n)
            require_valid: Raise InvalidInputError unless antisymmetry and Jacobi hold

        Raises:
            DimensionError: If kappa is not of shape (n, n, n)
            InvalidInputError: If require_valid is set and validation fails
        """
        self.kappa = as_tensor(kappa, "kappa")
        if self.kappa.ndim != 3 or len(set(self.kappa.shape)) != 1:
            raise DimensionError(f"kappa must have shape (n, n, n), got {self.kappa.shape}")
        if self.n == 0:
            raise DimensionError("Lie algebra dimension must be positive")
        self.kappa.setflags(write=False)
        if require_valid:
            report = validate_lie_algebra(self)
            if not report.ok:
                raise InvalidInputError(
                    f"Not a Lie algebra: antisymmetry violation {report.antisymmetry:.3g}, "
                    f"Jacobi violation {report.jacobi:.3g}"
                )

    @property
    def n(self) -> int:
        return self.kappa.shape[0]

    @classmethod
    def abelian(cls, n: int) -> "LieAlgebraData":
        return cls(np.zeros((n, n, n)))

    @classmethod
    def from_lowered(cls, kappa_lower, eps) -> "LieAlgebraData":
        """Build from kappa_{abc} = kappa_{ab}^c eps_c in an orthonormal frame."""
        eps = np.asarray(eps, dtype=float)
        return cls(np.asarray(kappa_lower, dtype=float) * eps[None, None, :])

    def change_basis(self, T: np.ndarray) -> "LieAlgebraData":
        """Structure constants in the basis w_a = T[:, a] (columns in the old basis)."""
        T = np.asarray(T, dtype=float)
        T_inv = np.linalg.inv(T)
        return LieAlgebraData(np.einsum("ijk,ia,jb,ck->abc", self.kappa, T, T, T_inv))

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Lie bracket of two vectors in coordinates."""
        return np.einsum("a,b,abc->c", x, y, self.kappa)

    def ad(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ad_x, columns indexed by the argument."""
        return np.einsum("a,abc->cb", x, self.kappa)

    def ad_matrices(self) -> np.ndarray:
        """ad_{v_a} for every basis vector, shape (n, n, n) with [a] the matrix."""
        return np.transpose(self.kappa, (0, 2, 1))

    def trace_form(self) -> np.ndarray:
        """tau_a = tr ad_{v_a} = kappa_{ab}^b."""
        return np.einsum("abb->a", self.kappa)

    def is_unimodular(self, tol: float = None) -> bool:
        tol = get_tolerance() if tol is None else tol
        return max_abs(self.trace_form()) <= tol

    def killing_form(self) -> np.ndarray:
        """K_ab = tr(ad_a ad_b)."""
        ads = self.ad_matrices()
        return np.einsum("aij,bji->ab", ads, ads)

    def derived_dimension(self, tol: float = None) -> int:
        """Dimension of [g, g]."""
        return numerical_rank(self.kappa.reshape(self.n * self.n, self.n), tol)

    def __repr__(self) -> str:
        return f"LieAlgebraData(n={self.n})"


@dataclass(frozen=True)
class LieAlgebraReport:
    """Maximal violations of antisymmetry and of the Jacobi identity."""

    antisymmetry: float
    jacobi: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.antisymmetry <= self.tol and self.jacobi <= self.tol


def jacobiator(alg: LieAlgebraData) -> np.ndarray:
    """J[a, b, c, e]: e-component of the cyclic sum of [[v_a, v_b], v_c]."""
    k = alg.kappa
    return (
        np.einsum("abd,dce->abce", k, k)
        + np.einsum("bcd,dae->abce", k, k)
        + np.einsum("cad,dbe->abce", k, k)
    )


def validate_lie_algebra(alg: LieAlgebraData) -> LieAlgebraReport:
    """Report antisymmetry and Jacobi violations of the structure constants."""
    antisym = max_abs(alg.kappa + np.transpose(alg.kappa, (1, 0, 2)))
    jacobi = max_abs(jacobiator(alg))
    return LieAlgebraReport(antisymmetry=antisym, jacobi=jacobi, tol=get_tolerance())


# =============================================================================
# Metric and three-form
# =============================================================================


class MetricData:
    """Nondegenerate left-invariant metric g on the Lie algebra."""

    def __init__(self, g, signature: Optional[Tuple[int, int]] = None):
        """Create a metric.

        Args:
            g: Symmetric nondegenerate n x n matrix
            signature: Expected (p, q); checked when given

        Raises:
            SingularityError: If g is degenerate
            InvalidInputError: If the signature does not match
        """
        self.form = BilinearForm(g, require_nondegenerate=True, name="g")
        computed = self.form.signature
        if signature is not None and tuple(signature) != computed:
            raise InvalidInputError(f"Metric has signature {computed}, expected {tuple(signature)}")
        self.signature = computed

    @property
    def g(self) -> np.ndarray:
        return self.form.matrix

    @property
    def n(self) -> int:
        return self.form.dim

    def is_definite(self) -> bool:
        return 0 in self.signature

    def __repr__(self) -> str:
        return f"MetricData(n={self.n}, signature={self.signature})"


class ThreeFormData:
    """Alternating three-form H on the Lie algebra."""

    def __init__(self, H, n: Optional[int] = None):
        """Create a three-form.

        Args:
            H: Array of shape (n, n, n); None or empty means zero
            n: Dimension, required when H is None

        Raises:
            InvalidInputError: If H is not totally antisymmetric
        """
        if H is None:
            if n is None:
                raise InvalidInputError("Dimension required for a zero three-form")
            H = np.zeros((n, n, n))
        self.H = as_tensor(H, "H")
        if self.H.ndim != 3 or len(set(self.H.shape)) != 1:
            raise DimensionError(f"H must have shape (n, n, n), got {self.H.shape}")
        scale = max(1.0, max_abs(self.H))
        if not is_alternating(self.H, get_tolerance() * scale):
            raise InvalidInputError("H is not totally antisymmetric")
        self.H.setflags(write=False)

    @classmethod
    def zero(cls, n: int) -> "ThreeFormData":
        return cls(None, n)

    @classmethod
    def volume(cls, h: float, n: int = 3) -> "ThreeFormData":
        """h times the Levi-Civita symbol (h vol_g in an oriented orthonormal frame)."""
        return cls(h * levi_civita(n))

    @property
    def n(self) -> int:
        return self.H.shape[0]

    def closedness(self, alg: LieAlgebraData) -> float:
        """Max entry of dH."""
        return max_abs(ce_differential(self.H, alg))

    def is_closed(self, alg: LieAlgebraData, tol: float = None) -> bool:
        tol = get_tolerance() if tol is None else tol
        return self.closedness(alg) <= tol

    def __repr__(self) -> str:
        return f"ThreeFormData(n={self.n}, max={max_abs(self.H):.3g})"


def ce_differential(form: np.ndarray, alg: LieAlgebraData) -> np.ndarray:
    """Chevalley-Eilenberg differential of a left-invariant k-form.

    (d w)(x_0..x_k) = sum_{i<j} (-1)^(i+j) w([x_i, x_j], x_0..^i..^j..x_k)

    Args:
        form: Alternating array with k axes of dimension n (k = 0 allowed)
        alg: Lie algebra supplying the bracket

    Returns:
        Alternating array with k + 1 axes

    Raises:
        DimensionError: If the form dimension does not match the algebra
    """
    form = np.asarray(form, dtype=float)
    n = alg.n
    k = form.ndim
    if any(d != n for d in form.shape):
        raise DimensionError(f"Form of shape {form.shape} does not live on an algebra of dim {n}")
    if k == 0:
        return np.zeros(n)
    result = np.zeros((n,) * (k + 1))
    # T[x_i, x_j, rest...] = w([x_i, x_j], rest...)
    T = np.tensordot(alg.kappa, form, axes=([2], [0]))
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            result += (-1) ** (i + j) * np.moveaxis(T, [0, 1], [i, j])
    return result


# =============================================================================
# Adapted basis of E = g + g*
# =============================================================================


class AdaptedBasis:
    """g-orthonormal frame (v_a) and the induced basis (e_A) of E.

    e_a = v_a + g v_a and e_{n+a} = v_a - g v_a, so that <e_A, e_B> = eta_AB
    with eta = diag(eps, -eps).

    Attributes:
        v: Columns are the frame vectors in the original coordinates
        eps: Signs g(v_a, v_a)
        eta: Pairing on E in the adapted basis
        kappa: Structure constants kappa_{ab}^c in the frame
        kappa_lower: kappa_{abc} = kappa_{ab}^c eps_c
        H: Components H(v_a, v_b, v_c)
        alg, metric, three_form: The data the frame was built from
    """

    def __init__(
        self,
        alg: LieAlgebraData,
        metric: MetricData,
        three_form: ThreeFormData,
        v: np.ndarray,
    ):
        """Build the adapted basis from an explicit frame.

        Raises:
            DimensionError: If dimensions disagree
            InvalidInputError: If v is not g-orthonormal
        """
        n = alg.n
        if metric.n != n or three_form.n != n:
            raise DimensionError("Lie algebra, metric and three-form dimensions differ")
        self.alg = alg
        self.metric = metric
        self.three_form = three_form
        self.v = as_tensor(v, "frame")
        if self.v.shape != (n, n):
            raise DimensionError(f"Frame must be {n}x{n}, got {self.v.shape}")

        gram = self.v.T @ metric.g @ self.v
        self.eps = np.sign(np.diag(gram))
        scale = max(1.0, max_abs(metric.g))
        if np.any(self.eps == 0) or max_abs(gram - np.diag(self.eps)) > get_tolerance() * scale * n:
            raise InvalidInputError("Frame is not g-orthonormal")
        if abs(np.linalg.det(self.v)) <= get_tolerance():
            raise SingularityError("Frame vectors are linearly dependent")

        self.eta = BilinearForm.from_signs(np.concatenate([self.eps, -self.eps]))
        frame_alg = alg.change_basis(self.v)
        self.kappa = frame_alg.kappa
        self.kappa_lower = self.kappa * self.eps[None, None, :]
        self.H = np.einsum("ijk,ia,jb,kc->abc", three_form.H, self.v, self.v, self.v)
        self.frame_algebra = frame_alg

    @classmethod
    def from_frame(
        cls,
        alg: LieAlgebraData,
        metric: MetricData,
        three_form: Optional[ThreeFormData],
        v: np.ndarray,
    ) -> "AdaptedBasis":
        if three_form is None:
            three_form = ThreeFormData.zero(alg.n)
        return cls(alg, metric, three_form, v)

    @property
    def n(self) -> int:
        return self.alg.n

    def vectors(self) -> np.ndarray:
        """Frame coordinates of e_A: array (2n, 2, n) of (vector, covector) parts."""
        n = self.n
        out = np.zeros((2 * n, 2, n))
        for a in range(n):
            out[a, 0, a] = 1.0
            out[a, 1, a] = self.eps[a]
            out[n + a, 0, a] = 1.0
            out[n + a, 1, a] = -self.eps[a]
        return out

    def __repr__(self) -> str:
        signs = "".join("+" if e > 0 else "-" for e in self.eps)
        return f"AdaptedBasis(n={self.n}, eps=({signs}))"


def orthonormal_frame(metric: MetricData) -> Tuple[np.ndarray, np.ndarray]:
    """Deterministic g-orthonormal frame.

    Positive signs come first, ties broken by eigenvalue magnitude (largest
    first) and then by index. For n = 3 with signature (1, 2) the negative
    vectors come first so that eps_1 = eps_2 = -eps_3. Each vector has its
    largest component positive; the last vector is flipped when needed to
    make the frame positively oriented.

    Returns:
        (v, eps) with the frame vectors as the columns of v
    """
    g = metric.g
    n = metric.n
    if max_abs(g - np.diag(np.diag(g))) == 0.0:
        eigenvalues = np.diag(g).copy()
        vectors = np.eye(n)
    else:
        eigenvalues, vectors = np.linalg.eigh(g)

    signs = np.sign(eigenvalues)
    leading = 1.0
    if n == 3 and int(np.sum(signs > 0)) == 1:
        leading = -1.0
    order = sorted(
        range(n),
        key=lambda i: (0 if signs[i] == leading else 1, -abs(eigenvalues[i]), i),
    )
    v = np.zeros((n, n))
    for column, i in enumerate(order):
        vec = vectors[:, i] / np.sqrt(abs(eigenvalues[i]))
        if vec[np.argmax(np.abs(vec))] < 0:
            vec = -vec
        v[:, column] = vec
    if np.linalg.det(v) < 0:
        v[:, -1] = -v[:, -1]
    eps = signs[order]
    logger.debug("Orthonormal frame with signs %s", eps)
    return v, eps


def orthonormalize(
    metric: MetricData,
    alg: Optional[LieAlgebraData] = None,
    three_form: Optional[ThreeFormData] = None,
) -> AdaptedBasis:
    """Adapted basis built on the deterministic orthonormal frame of metric.

    Without an algebra the abelian algebra of the same dimension is used.

    Raises:
        SingularityError: If |det g| <= TOL
    """
    if alg is None:
        alg = LieAlgebraData.abelian(metric.n)
    v, _ = orthonormal_frame(metric)
    return AdaptedBasis.from_frame(alg, metric, three_form, v)


def adapted_basis(
    alg: LieAlgebraData,
    metric: MetricData,
    three_form: Optional[ThreeFormData] = None,
) -> AdaptedBasis:
    """Shorthand for orthonormalize(metric, alg, three_form)."""
    return orthonormalize(metric, alg, three_form)


# =============================================================================
# Generalized metrics and B-field normal form
# =============================================================================


def pairing_matrix(n: int) -> np.ndarray:
    """Matrix of <X + xi, Y + eta> = (xi(Y) + eta(X)) / 2 in (X, xi) coordinates."""
    P = np.zeros((2 * n, 2 * n))
    P[:n, n:] = 0.5 * np.eye(n)
    P[n:, :n] = 0.5 * np.eye(n)
    return P


def b_transform(beta: np.ndarray) -> np.ndarray:
    """Matrix of X + xi -> X + xi - beta X in (X, xi) coordinates."""
    beta = np.asarray(beta, dtype=float)
    n = beta.shape[0]
    phi = np.eye(2 * n)
    phi[n:, :n] = -beta
    return phi


def generalized_metric(g: np.ndarray, beta: Optional[np.ndarray] = None) -> np.ndarray:
    """Matrix of G(u, v) = G_g(phi u, phi v) with G_g = (g + g^{-1}) / 2 block diagonal."""
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    G_g = np.zeros((2 * n, 2 * n))
    G_g[:n, :n] = 0.5 * g
    G_g[n:, n:] = 0.5 * np.linalg.inv(g)
    if beta is None:
        return G_g
    phi = b_transform(beta)
    return phi.T @ G_g @ phi


def generalized_metric_endomorphism(G: np.ndarray) -> np.ndarray:
    """Endomorphism E with G(u, v) = <E u, v>."""
    G = np.asarray(G, dtype=float)
    n = G.shape[0] // 2
    return np.linalg.inv(pairing_matrix(n)) @ G


class GeneralizedMetricBlocks:
    """Blocks of 2G = [[h, A^T], [A, gamma]] with g = gamma^{-1} and A = -g^{-1} beta."""

    def __init__(self, h: np.ndarray, A: np.ndarray, gamma: np.ndarray):
        self.h = np.asarray(h, dtype=float)
        self.A = np.asarray(A, dtype=float)
        self.gamma = np.asarray(gamma, dtype=float)
        if abs(np.linalg.det(self.gamma)) <= get_tolerance():
            raise SingularityError("Block of G on g* x g* is degenerate")
        self.g = np.linalg.inv(self.gamma)
        self.g = 0.5 * (self.g + self.g.T)
        self.beta = -self.g @ self.A

    def residuals(self) -> dict:
        """Violations of A^2 + g^{-1} h = 1 and of the skewness of A for g and h."""
        n = self.A.shape[0]
        identity = self.A @ self.A + np.linalg.inv(self.g) @ self.h - np.eye(n)
        g_skew = self.g @ self.A + (self.g @ self.A).T
        h_skew = self.h @ self.A + (self.h @ self.A).T
        return {
            "involution": max_abs(identity),
            "g_skew": max_abs(g_skew),
            "h_skew": max_abs(h_skew),
        }


@dataclass(frozen=True)
class BFieldNormalForm:
    """Result of b_field_normal_form."""

    metric: MetricData
    beta: np.ndarray
    transform: np.ndarray
    blocks: GeneralizedMetricBlocks
    shift: Optional[ThreeFormData]
    trace: float


def b_field_normal_form(G: np.ndarray, alg: Optional[LieAlgebraData] = None) -> BFieldNormalForm:
    """Split a generalized metric into a metric g and a B-field beta.

    Args:
        G: Symmetric 2n x 2n matrix in (X, xi) coordinates whose endomorphism is an involution
        alg: When given, the three-form shift d beta is computed

    Returns:
        BFieldNormalForm with phi = exp(-B): X + xi -> X + xi - beta X and G = phi^T G_g phi

    Raises:
        InvalidInputError: If G is not symmetric or its endomorphism is not an involution
        SingularityError: If the block of G on g* x g* is degenerate
    """
    G = as_tensor(G, "G")
    if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] % 2:
        raise DimensionError(f"G must be a 2n x 2n matrix, got {G.shape}")
    BilinearForm(G, name="G")
    n = G.shape[0] // 2
    E = generalized_metric_endomorphism(G)
    scale = max(1.0, max_abs(E))
    if max_abs(E @ E - np.eye(2 * n)) > get_tolerance() * scale * scale:
        raise InvalidInputError("Endomorphism of G is not an involution")

    blocks = GeneralizedMetricBlocks(h=2 * G[:n, :n], A=2 * G[n:, :n], gamma=2 * G[n:, n:])
    beta = 0.5 * (blocks.beta - blocks.beta.T)
    metric = MetricData(blocks.g)
    shift = None
    if alg is not None:
        shift = ThreeFormData(ce_differential(beta, alg))
    logger.debug("B-field normal form with |beta| = %.3g", max_abs(beta))
    return BFieldNormalForm(
        metric=metric,
        beta=beta,
        transform=b_transform(beta),
        blocks=blocks,
        shift=shift,
        trace=float(np.trace(E)),
    )


__all__ = [
    "LieAlgebraData",
    "LieAlgebraReport",
    "jacobiator",
    "validate_lie_algebra",
    "MetricData",
    "ThreeFormData",
    "ce_differential",
    "AdaptedBasis",
    "orthonormal_frame",
    "orthonormalize",
    "adapted_basis",
    "pairing_matrix",
    "b_transform",
    "generalized_metric",
    "generalized_metric_endomorphism",
    "GeneralizedMetricBlocks",
    "BFieldNormalForm",
    "b_field_normal_form",
]
