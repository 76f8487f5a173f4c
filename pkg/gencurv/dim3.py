"""Three-dimensional Lie algebras with a metric.

In an oriented orthonormal frame (v_1, v_2, v_3) of a three-dimensional
metric Lie algebra the bracket is packaged by an endomorphism L with
[u, v] = L(u x v). L is self-adjoint for g exactly when the algebra is
unimodular. This module converts between brackets and L, brings
self-adjoint endomorphisms to normal form, computes the unimodular kernel
of non-unimodular algebras and names the isomorphism class.

Normal forms (eps_1 = eps_2 = -eps_3 for L2..L5, s = 1/sqrt(2)):

    L1(a, b, c) = diag(a, b, c)
    L2(a, b, c) = [[c, 0, 0], [0, a, -b], [0, b, a]]
    L3(a, b)    = [[b, 0, 0], [0, 1/2 + a, 1/2], [0, -1/2, -1/2 + a]]
    L4(a, b)    = [[b, 0, 0], [0, -1/2 + a, -1/2], [0, 1/2, 1/2 + a]]
    L5(a)       = [[a, s, 0], [s, a, s], [0, -s, a]]

and M1..M4, the 2 x 2 analogues acting on the unimodular kernel.

Examples:
    >>> import numpy as np
    >>> from gencurv.dim3 import bracket_from_l, identify_bianchi
    >>>
    >>> identify_bianchi(bracket_from_l(np.eye(3), [1, 1, 1])).label
    'so(3)'
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from gencurv.config import get_disc_tolerance, get_tolerance
from gencurv.exceptions import DimensionError, InvalidInputError, UnsupportedError
from gencurv.lie import AdaptedBasis, LieAlgebraData, MetricData
from gencurv.linalg import levi_civita, null_space, numerical_rank
from gencurv.utils import max_abs

logger = logging.getLogger(__name__)

SQRT_HALF = 1.0 / math.sqrt(2.0)

L_FAMILIES = ("L1", "L2", "L3", "L4", "L5")
M_FAMILIES = ("M1", "M2", "M3", "M4")

BIANCHI_LABELS = (
    "abelian",
    "so(3)",
    "so(2,1)",
    "e(2)",
    "e(1,1)",
    "heis",
    "r2+R",
    "r3",
    "r3,lambda",
    "r3,1",
    "r'3,lambda",
    "r'3,1",
)


def _signs(eps: Sequence[float]) -> np.ndarray:
    eps = np.asarray(eps, dtype=float)
    if eps.shape != (3,) or not np.all(np.abs(eps) == 1.0):
        raise InvalidInputError(f"Frame signs must be three values +1 or -1, got {list(eps)}")
    return eps


# =============================================================================
# Cross product and L-encoding
# =============================================================================


def cross_product(u: np.ndarray, v: np.ndarray, eps: Sequence[float]) -> np.ndarray:
    """u x v defined by g(u x v, w) = vol_g(u, v, w), so that v_1 x v_2 = eps_3 v_3."""
    eps = _signs(eps)
    return eps * np.einsum("abc,a,b->c", levi_civita(3), u, v)


class LEncoding:
    """Endomorphism L with [u, v] = L(u x v), as a matrix L[c, d] = L^c_d."""

    def __init__(self, L, eps: Sequence[float]):
        self.L = np.array(L, dtype=float)
        if self.L.shape != (3, 3):
            raise DimensionError(f"L must be a 3x3 matrix, got {self.L.shape}")
        self.eps = _signs(eps)

    def to_algebra(self) -> LieAlgebraData:
        return bracket_from_l(self.L, self.eps)

    def symmetry_defect(self) -> float:
        """max |gL - (gL)^T|, zero exactly for unimodular brackets."""
        gL = self.eps[:, None] * self.L
        return max_abs(gL - gL.T)

    def is_symmetric(self, tol: float = None) -> bool:
        tol = get_tolerance() if tol is None else tol
        return self.symmetry_defect() <= tol * max(1.0, max_abs(self.L))

    def __repr__(self) -> str:
        return f"LEncoding(L={self.L.tolist()}, eps={self.eps.tolist()})"


def bracket_from_l(L, eps: Sequence[float]) -> LieAlgebraData:
    """Structure constants kappa_{ab}^c = eps_{abd} L^c_d eps_d in the frame."""
    eps = _signs(eps)
    L = np.asarray(L, dtype=float)
    return LieAlgebraData(np.einsum("abd,cd,d->abc", levi_civita(3), L, eps))


def l_from_bracket(alg: LieAlgebraData, eps: Sequence[float]) -> LEncoding:
    """Inverse of bracket_from_l for an algebra given in an oriented orthonormal frame.

    Raises:
        UnsupportedError: If the algebra is not three-dimensional
    """
    if alg.n != 3:
        raise UnsupportedError(f"The L-encoding needs dim g = 3, got {alg.n}")
    eps = _signs(eps)
    L = 0.5 * np.einsum("abd,abc->cd", levi_civita(3), alg.kappa) * eps[None, :]
    return LEncoding(L, eps)


def l_encoding(basis: AdaptedBasis) -> LEncoding:
    """L in the frame of an adapted basis."""
    return l_from_bracket(basis.frame_algebra, basis.eps)


# =============================================================================
# Normal forms
# =============================================================================


def normal_form_matrix(family: str, **params: float) -> np.ndarray:
    """Matrix of a normal form with the given parameters.

    Raises:
        InvalidInputError: If the family is unknown
    """
    a = params.get("alpha", 0.0)
    b = params.get("beta", 0.0)
    c = params.get("gamma", 0.0)
    t = params.get("theta", 0.0)
    e = params.get("eta", 0.0)
    s = SQRT_HALF
    forms = {
        "L1": lambda: np.diag([a, b, c]),
        "L2": lambda: np.array([[c, 0, 0], [0, a, -b], [0, b, a]]),
        "L3": lambda: np.array([[b, 0, 0], [0, 0.5 + a, 0.5], [0, -0.5, -0.5 + a]]),
        "L4": lambda: np.array([[b, 0, 0], [0, -0.5 + a, -0.5], [0, 0.5, 0.5 + a]]),
        "L5": lambda: np.array([[a, s, 0], [s, a, s], [0, -s, a]]),
        "M1": lambda: np.diag([t, e]),
        "M2": lambda: np.array([[t, -e], [e, t]]),
        "M3": lambda: np.array([[0.5 + t, 0.5], [-0.5, -0.5 + t]]),
        "M4": lambda: np.array([[-0.5 + t, -0.5], [0.5, 0.5 + t]]),
    }
    if family not in forms:
        raise InvalidInputError(
            f"Unknown normal form '{family}'. Available: {', '.join(forms)}"
        )
    return np.asarray(forms[family](), dtype=float)


@dataclass(frozen=True)
class NormalForm:
    """Normal form of a self-adjoint endomorphism.

    Attributes:
        family: One of L1..L5 or M1..M4
        params: alpha, beta, gamma for L forms; theta, eta for M forms
        frame: Columns are the new orthonormal frame in the input coordinates
        eps: Signs of the new frame
    """

    family: str
    params: Dict[str, float]
    frame: np.ndarray
    eps: np.ndarray
    matrix: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", normal_form_matrix(self.family, **self.params))

    def residual(self, L: np.ndarray) -> float:
        """max |T^-1 L T - normal form matrix|."""
        return max_abs(np.linalg.solve(self.frame, L @ self.frame) - self.matrix)


def _g(x: np.ndarray, y: np.ndarray, G: np.ndarray) -> float:
    return float(x @ G @ y)


def _normalize(x: np.ndarray, G: np.ndarray) -> np.ndarray:
    return x / math.sqrt(abs(_g(x, x, G)))


def _canonical_sign(x: np.ndarray) -> np.ndarray:
    return -x if x[np.argmax(np.abs(x))] < 0 else x


def _check_self_adjoint(L: np.ndarray, G: np.ndarray) -> None:
    GL = G @ L
    if max_abs(GL - GL.T) > get_tolerance() * max(1.0, max_abs(L)):
        raise InvalidInputError("Endomorphism is not self-adjoint for the metric")


def _orthonormal_eigenbasis(L: np.ndarray, G: np.ndarray, eigenvalues: Sequence[float]):
    """Orthonormal eigenvectors of a diagonalizable self-adjoint L for distinct eigenvalues."""
    vectors, values = [], []
    scale = max(1.0, max_abs(L))
    for lam in eigenvalues:
        space = null_space(L - lam * np.eye(L.shape[0]), get_disc_tolerance() * scale)
        if space.shape[1] == 0:
            continue
        gram = space.T @ G @ space
        w, Q = np.linalg.eigh(0.5 * (gram + gram.T))
        for k in range(Q.shape[1]):
            vec = space @ Q[:, k] / math.sqrt(abs(w[k]))
            vectors.append(_canonical_sign(vec))
            values.append(float(lam))
    return vectors, values


def _distinct(values: Sequence[float], tol: float) -> list:
    out = []
    for v in sorted(values):
        if not out or abs(v - out[-1]) > tol:
            out.append(v)
    return out


def _diagonal_form(L, G, first_sign, family, names):
    """Orthonormal eigenframe: vectors of sign first_sign sorted by eigenvalue, the rest after."""
    n = L.shape[0]
    real = np.real(np.linalg.eigvals(L))
    scale = max(1.0, max_abs(L))
    vectors, values = _orthonormal_eigenbasis(L, G, _distinct(real, get_disc_tolerance() * scale))
    if len(vectors) != n:
        raise InvalidInputError("Endomorphism is not diagonalizable by an orthonormal frame")
    signs = [math.copysign(1.0, _g(v, v, G)) for v in vectors]
    order = sorted(range(n), key=lambda k: (signs[k] != first_sign, values[k]))
    T = np.column_stack([vectors[k] for k in order])
    if n == 3 and np.linalg.det(T) < 0:
        T[:, -1] = -T[:, -1]
    params = {name: values[k] for name, k in zip(names, order)}
    return NormalForm(family, params, T, np.array([signs[k] for k in order]))


def _rotation_frame(L, G, P, first_sign):
    """Orthonormal (x, y) of an invariant Lorentzian plane P on which L has complex eigenvalues."""
    restricted = np.linalg.lstsq(P, L @ P, rcond=None)[0]
    w, V = np.linalg.eig(restricted)
    k = int(np.argmax(np.imag(w)))
    vec = P @ V[:, k]
    p, q = np.real(vec), np.imag(vec)
    gpp, gqq, gpq = _g(p, p, G), _g(q, q, G), _g(p, q, G)
    phi = 0.5 * math.atan2(-2.0 * gpq, gpp - gqq)
    c, s = math.cos(phi), math.sin(phi)
    p, q = c * p - s * q, s * p + c * q
    if math.copysign(1.0, _g(p, p, G)) != first_sign:
        p, q = q, p
    x, y = _normalize(p, G), _normalize(q, G)
    coeffs = np.linalg.lstsq(np.column_stack([x, y]), L @ x, rcond=None)[0]
    if coeffs[1] < 0:
        y = -y
    return x, y


def _null_frame(N, G, P, first_sign):
    """Orthonormal (x, y) of a Lorentzian plane P with N(P) = span(x - y), N^2 = 0 on P.

    Returns the frame boosted so that N x = a (x - y) with |a| = 1/2, and a.
    """
    images = N @ P
    k = int(np.argmax(np.linalg.norm(images, axis=0)))
    n = images[:, k]
    pairings = np.array([_g(P[:, j], n, G) for j in range(P.shape[1])])
    x0 = P[:, int(np.argmax(np.abs(pairings)))]
    m = x0 - _g(x0, x0, G) / (2.0 * _g(x0, n, G)) * n
    m = m * (2.0 * first_sign / _g(m, n, G))
    c = _g(N @ m, m, G) / _g(n, m, G)
    k_boost = math.sqrt(abs(c))
    n, m = k_boost * n, m / k_boost
    x, y = 0.5 * (m + n), 0.5 * (m - n)
    a = _g(N @ x, m, G) / (2.0 * first_sign)
    return x, y, a


def normal_form_of_symmetric_l(L, eps: Sequence[float]) -> NormalForm:
    """Normal form L1..L5 of a g-self-adjoint endomorphism of a three-dimensional space.

    Args:
        L: 3 x 3 matrix in an orthonormal frame with signs eps
        eps: Frame signs (any order)

    Returns:
        NormalForm whose frame is positively oriented and g-orthonormal with
        eps_1 = eps_2 = -eps_3 in the indefinite case

    Raises:
        InvalidInputError: If L is not self-adjoint
    """
    L = np.asarray(L, dtype=float)
    if L.shape != (3, 3):
        raise DimensionError(f"L must be a 3x3 matrix, got {L.shape}")
    eps = _signs(eps)
    G = np.diag(eps)
    _check_self_adjoint(L, G)

    disc_tol = get_disc_tolerance()
    if abs(eps.sum()) == 3:
        return _diagonal_form(L, G, eps[0], "L1", ("alpha", "beta", "gamma"))

    major = 1.0 if eps.sum() > 0 else -1.0
    scale = max(1.0, max_abs(L))
    _, b, c, d = np.poly(L)
    # spectral radius, unlike the entries of L, is unchanged by boosts
    size = max(1.0, float(np.max(np.abs(np.roots([1.0, b, c, d])))))
    disc = 18 * b * c * d - 4 * b ** 3 * d + b ** 2 * c ** 2 - 4 * c ** 3 - 27 * d ** 2
    disc_scaled = disc / size ** 6
    logger.debug("Classifying L with discriminant %.3g", disc)

    if disc_scaled < -disc_tol:
        w, V = np.linalg.eig(L)
        k = int(np.argmin(np.abs(np.imag(w))))
        v1 = _canonical_sign(_normalize(np.real(V[:, k]), G))
        P = null_space((G @ v1)[None, :])
        x, y = _rotation_frame(L, G, P, major)
        T = np.column_stack([v1, x, y])
        if np.linalg.det(T) < 0:
            T[:, 0] = -T[:, 0]
        block = np.linalg.solve(T, L @ T)
        params = {"alpha": block[1, 1], "beta": block[2, 1], "gamma": block[0, 0]}
        return NormalForm("L2", params, T, np.array([major, major, -major]))

    if disc_scaled > disc_tol:
        return _diagonal_form(L, G, major, "L1", ("alpha", "beta", "gamma"))

    trace = float(np.trace(L))
    p = b * b - 3 * c
    if p <= disc_tol * size ** 2:
        alpha = beta = trace / 3.0
    else:
        gap = math.sqrt(p)
        candidates = [(trace + sign * gap) / 3.0 for sign in (1.0, -1.0)]
        # both candidates are critical points; the double root is where the polynomial vanishes
        alpha = min(candidates, key=lambda x: abs(np.polyval([1.0, b, c, d], x)))
        beta = trace - 2.0 * alpha

    N = L - alpha * np.eye(3)
    rank = numerical_rank(N, disc_tol * scale)
    triple = abs(alpha - beta) <= math.sqrt(disc_tol) * size
    if rank == 0 or (not triple and rank == 1):
        return _diagonal_form(L, G, major, "L1", ("alpha", "beta", "gamma"))

    if triple and rank == 2:
        return _l5_form(N, G, alpha, major)

    if triple:
        kernel = null_space(N, disc_tol * scale)
        norms = [abs(_g(kernel[:, j], kernel[:, j], G)) for j in range(kernel.shape[1])]
        v1 = kernel[:, int(np.argmax(norms))]
    else:
        # right singular vector of the smallest singular value
        v1 = np.linalg.svd(L - beta * np.eye(3))[2][-1]
    v1 = _canonical_sign(_normalize(v1, G))
    P = null_space((G @ v1)[None, :])
    x, y, a = _null_frame(N, G, P, major)
    T = np.column_stack([v1, x, y])
    if np.linalg.det(T) < 0:
        T[:, 0] = -T[:, 0]
    family = "L3" if a > 0 else "L4"
    return NormalForm(family, {"alpha": alpha, "beta": beta}, T, np.array([major, major, -major]))


def _l5_form(N: np.ndarray, G: np.ndarray, alpha: float, major: float) -> NormalForm:
    s = SQRT_HALF
    kernel = null_space(N @ N, get_disc_tolerance() * max(1.0, max_abs(N)))
    norms = [abs(_g(kernel[:, j], kernel[:, j], G)) for j in range(kernel.shape[1])]
    v2 = _normalize(kernel[:, int(np.argmax(norms))], G)
    n = N @ v2 / s
    m0 = np.linalg.lstsq(N, 2 * s * v2, rcond=None)[0]
    v2 = v2 - _g(m0, v2, G) / (4.0 * major) * n
    n = N @ v2 / s
    m0 = np.linalg.lstsq(N, 2 * s * v2, rcond=None)[0]
    m = m0 - _g(m0, m0, G) / (4.0 * major) * n
    T = np.column_stack([0.5 * (m + n), v2, 0.5 * (m - n)])
    if np.linalg.det(T) < 0:
        T = -T
    return NormalForm("L5", {"alpha": alpha}, T, np.array([major, major, -major]))


def normal_form_of_symmetric_m(M, eps: Sequence[float]) -> NormalForm:
    """Normal form M1..M4 of a self-adjoint endomorphism of a two-dimensional space.

    In the Lorentzian case the first frame vector is spacelike.

    Raises:
        InvalidInputError: If M is not self-adjoint
    """
    M = np.asarray(M, dtype=float)
    if M.shape != (2, 2):
        raise DimensionError(f"M must be a 2x2 matrix, got {M.shape}")
    eps = np.asarray(eps, dtype=float)
    G = np.diag(eps)
    _check_self_adjoint(M, G)
    if eps[0] == eps[1]:
        return _diagonal_form(M, G, eps[0], "M1", ("theta", "eta"))

    disc_tol = get_disc_tolerance()
    scale = max(1.0, max_abs(M))
    theta = 0.5 * float(np.trace(M))
    size = max(1.0, float(np.max(np.abs(np.linalg.eigvals(M)))))
    disc = (np.trace(M) ** 2 - 4.0 * np.linalg.det(M)) / size ** 2
    signs = np.array([1.0, -1.0])
    if disc > disc_tol:
        return _diagonal_form(M, G, 1.0, "M1", ("theta", "eta"))
    if disc < -disc_tol:
        x, y = _rotation_frame(M, G, np.eye(2), 1.0)
        T = np.column_stack([x, y])
        block = np.linalg.solve(T, M @ T)
        return NormalForm("M2", {"theta": block[0, 0], "eta": block[1, 0]}, T, signs)
    N = M - theta * np.eye(2)
    if numerical_rank(N, disc_tol * scale) == 0:
        frame = np.eye(2) if eps[0] > 0 else np.array([[0.0, 1.0], [1.0, 0.0]])
        return NormalForm("M1", {"theta": theta, "eta": theta}, frame, signs)
    x, y, a = _null_frame(N, G, np.eye(2), 1.0)
    family = "M3" if a > 0 else "M4"
    return NormalForm(family, {"theta": theta}, np.column_stack([x, y]), signs)


# =============================================================================
# Unimodular kernel and isomorphism classes
# =============================================================================


@dataclass(frozen=True)
class UnimodularKernel:
    """Kernel u of the trace form of a non-unimodular three-dimensional algebra.

    Attributes:
        basis: 3 x 2 matrix whose columns span u
        transversal: Index of a frame vector outside u (largest |tr ad|)
        action: Matrix of ad_transversal restricted to u in the given basis
        degenerate: True if the metric restricted to u is degenerate
        ideal_defect: Largest violation of [g, u] in u and [u, u] = 0
    """

    basis: np.ndarray
    transversal: int
    action: np.ndarray
    degenerate: bool
    ideal_defect: float


def _kernel_action(alg: LieAlgebraData) -> Tuple[np.ndarray, int, np.ndarray]:
    tau = alg.trace_form()
    U = null_space(tau[None, :])
    k = int(np.argmax(np.abs(tau)))
    x = np.zeros(alg.n)
    x[k] = 1.0
    A = np.linalg.lstsq(U, alg.ad(x) @ U, rcond=None)[0]
    return U, k, A


def unimodular_kernel(alg: LieAlgebraData, metric: Optional[MetricData] = None) -> UnimodularKernel:
    """Unimodular kernel u = ker tau, a two-dimensional abelian ideal containing [g, g].

    Args:
        alg: Non-unimodular three-dimensional Lie algebra
        metric: When given, the degeneracy of g on u is reported

    Raises:
        UnsupportedError: If dim g != 3
        InvalidInputError: If the algebra is unimodular
    """
    if alg.n != 3:
        raise UnsupportedError(f"The unimodular kernel is computed for dim g = 3, got {alg.n}")
    if alg.is_unimodular():
        raise InvalidInputError("Algebra is unimodular: its unimodular kernel is the whole algebra")
    U, k, A = _kernel_action(alg)

    # [v_a, u] must stay in u and [u, u] must vanish
    projector = np.eye(3) - U @ U.T
    defect = 0.0
    for a in range(3):
        defect = max(defect, max_abs(projector @ alg.ad(np.eye(3)[a]) @ U))
    defect = max(defect, max_abs(alg.bracket(U[:, 0], U[:, 1])))

    degenerate = False
    if metric is not None:
        gram = U.T @ metric.g @ U
        degenerate = abs(np.linalg.det(gram)) <= get_tolerance() * max(1.0, max_abs(gram)) ** 2
    return UnimodularKernel(U, k, A, degenerate, defect)


@dataclass(frozen=True)
class BianchiLabel:
    """Isomorphism class of a three-dimensional real Lie algebra.

    parameter carries lambda for 'r3,lambda' and 'r'3,lambda', None otherwise.
    """

    label: str
    parameter: Optional[float] = None

    def __str__(self) -> str:
        if self.parameter is None:
            return self.label
        return f"{self.label}({self.parameter:.6g})"


def identify_bianchi(alg: LieAlgebraData) -> BianchiLabel:
    """Name the isomorphism class of a three-dimensional Lie algebra.

    Unimodular algebras are told apart by dim [g, g] and the Killing form.
    Non-unimodular ones are semidirect products R x_A R^2 with A the action
    on the unimodular kernel, normalised to trace 2.

    Raises:
        UnsupportedError: If dim g != 3
    """
    if alg.n != 3:
        raise UnsupportedError(f"Bianchi classification needs dim g = 3, got {alg.n}")
    tol = get_tolerance()
    disc_tol = get_disc_tolerance()
    scale = max(1.0, max_abs(alg.kappa))
    if max_abs(alg.kappa) <= tol:
        return BianchiLabel("abelian")

    derived = alg.derived_dimension(disc_tol)
    if alg.is_unimodular(tol * scale):
        killing = np.linalg.eigvalsh(alg.killing_form())
        killing_tol = disc_tol * scale ** 2
        if derived == 3:
            return BianchiLabel("so(3)" if np.all(killing < -killing_tol) else "so(2,1)")
        if derived == 1:
            return BianchiLabel("heis")
        nonzero = killing[np.abs(killing) > killing_tol]
        if nonzero.size and nonzero[0] < 0:
            return BianchiLabel("e(2)")
        return BianchiLabel("e(1,1)")

    _, _, A = _kernel_action(alg)
    A = 2.0 * A / np.trace(A)
    det = float(np.linalg.det(A))
    disc = 4.0 - 4.0 * det
    if disc > disc_tol:
        if abs(det) <= disc_tol:
            return BianchiLabel("r2+R")
        root = math.sqrt(1.0 - det)
        return BianchiLabel("r3,lambda", (1.0 - root) / (1.0 + root))
    if disc >= -disc_tol:
        if max_abs(A - np.eye(2)) <= math.sqrt(disc_tol):
            return BianchiLabel("r3,1")
        return BianchiLabel("r3")
    gamma = 1.0 / math.sqrt(det - 1.0)
    if abs(gamma - 1.0) <= math.sqrt(disc_tol):
        return BianchiLabel("r'3,1")
    return BianchiLabel("r'3,lambda", gamma)


__all__ = [
    "SQRT_HALF",
    "L_FAMILIES",
    "M_FAMILIES",
    "BIANCHI_LABELS",
    "cross_product",
    "LEncoding",
    "bracket_from_l",
    "l_from_bracket",
    "l_encoding",
    "normal_form_matrix",
    "NormalForm",
    "normal_form_of_symmetric_l",
    "normal_form_of_symmetric_m",
    "UnimodularKernel",
    "unimodular_kernel",
    "BianchiLabel",
    "identify_bianchi",
]
