"""Curvature, generalized Ricci tensor and classical Ricci quantities.

The generalized Ricci tensor of a left-invariant generalized metric is
computed in two ways: by closed formulas in the Dorfman coefficients, and
by tracing the curvature operator of a Levi-Civita connection with the
requested divergence. Both are stored as two n x n blocks:

    Rplus[i, a]  = Ric(e_{n+i}, e_a)   (E- x E+)
    Rminus[a, i] = Ric(e_a, e_{n+i})   (E+ x E-)

Examples:
    >>> from gencurv.curvature import generalized_ricci, is_generalized_einstein
    >>>
    >>> ric = generalized_ricci(B)
    >>> is_generalized_einstein(ric)
    (True, 0.0)
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from gencurv.config import get_tolerance
from gencurv.connections import (
    ConnectionCoefficients,
    DivergenceForm,
    christoffel,
    divergence,
    prescribed_divergence_connection,
)
from gencurv.courant import DorfmanTensor
from gencurv.exceptions import DimensionError, InvalidInputError
from gencurv.lie import AdaptedBasis, MetricData, ThreeFormData
from gencurv.linalg import null_space
from gencurv.utils import max_abs

logger = logging.getLogger(__name__)


# =============================================================================
# Types
# =============================================================================


class CurvatureComponents:
    """R[A, B, C, D] = <R(e_A, e_B) e_C, e_D>.

    Only the blocks E+ x E- x E+ x E+ and E- x E+ x E- x E- (and their
    partners with the first two slots exchanged) are filled.
    """

    def __init__(self, R, n: int):
        self.R = np.asarray(R, dtype=float)
        if self.R.shape != (2 * n,) * 4:
            raise DimensionError(f"Curvature must have shape {(2 * n,) * 4}, got {self.R.shape}")
        self.n = n

    def skewness(self) -> float:
        """Largest deviation from skew symmetry in the last two slots."""
        return max_abs(self.R + np.transpose(self.R, (0, 1, 3, 2)))

    def trace_ricci(self, eta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(Rplus, Rminus) by tracing over the first slot."""
        n = self.n
        P, M = slice(0, n), slice(n, 2 * n)
        eta = np.asarray(eta, dtype=float)
        Rplus = np.einsum("c,ciac->ia", eta[P], self.R[P, M, P, P])
        Rminus = np.einsum("k,kaik->ai", eta[M], self.R[M, P, M, M])
        return Rplus, Rminus

    def __repr__(self) -> str:
        return f"CurvatureComponents(n={self.n})"


class GeneralizedRicci:
    """The two blocks of the generalized Ricci tensor for a divergence delta."""

    def __init__(self, Rplus, Rminus, delta: DivergenceForm):
        self.Rplus = np.asarray(Rplus, dtype=float)
        self.Rminus = np.asarray(Rminus, dtype=float)
        self.delta = delta
        n = delta.n
        if self.Rplus.shape != (n, n) or self.Rminus.shape != (n, n):
            raise DimensionError(f"Ricci blocks must be {n}x{n}")

    @property
    def n(self) -> int:
        return self.delta.n

    @property
    def residual(self) -> float:
        return max(max_abs(self.Rplus), max_abs(self.Rminus))

    def symmetry_defect(self) -> float:
        """max |Rplus - Rminus^T|."""
        return max_abs(self.Rplus - self.Rminus.T)

    def skew_defect(self) -> float:
        """max |Rplus + Rminus^T|."""
        return max_abs(self.Rplus + self.Rminus.T)

    def __repr__(self) -> str:
        return f"GeneralizedRicci(n={self.n}, residual={self.residual:.3g})"


@dataclass(frozen=True)
class ClassicalRicci:
    """Ricci tensor of g, the trace form tau and the trace term nabla tau, all in the frame.

    nabla_tau is Gamma_{ab}^d tau_d, the sign for which Ric + nabla_tau is the
    divergence-free generalized Ricci tensor when H = 0.
    """

    Ric: np.ndarray
    tau: np.ndarray
    nabla_tau: np.ndarray

    @property
    def soliton_residual(self) -> np.ndarray:
        return self.Ric + self.nabla_tau

    def is_flat(self, tol: float = None) -> bool:
        tol = get_tolerance() if tol is None else tol
        return max_abs(self.Ric) <= tol


@dataclass(frozen=True)
class DivergenceSpace:
    """Affine space of divergences delta = particular + directions @ t.

    particular is None when no divergence satisfies the constraint.
    """

    particular: Optional[DivergenceForm]
    directions: np.ndarray

    @property
    def is_empty(self) -> bool:
        return self.particular is None

    @property
    def dimension(self) -> int:
        return -1 if self.is_empty else self.directions.shape[1]


# =============================================================================
# Curvature of connections
# =============================================================================


def curvature_d0(B: DorfmanTensor) -> CurvatureComponents:
    """Curvature of the canonical connection D0 on the mixed blocks.

    R_{ajcd} = 2/3 B_{aj}^l B_{cld} + 1/3 B_{jc}^l B_{lad} + 1/3 B_{ca}^l B_{ljd}
    with l summed over E-, and the same expression with the roles of E+ and
    E- exchanged for R_{ibkl}.
    """
    n = B.n
    Bup = B.raised
    R = np.zeros((2 * n,) * 4)
    for inner, outer in ((slice(n, 2 * n), slice(0, n)), (slice(0, n), slice(n, 2 * n))):
        Bo_o_i = Bup[outer, outer, inner]
        Bo_i_o = B.B[outer, inner, outer]
        Bi_o_o = B.B[inner, outer, outer]
        Bo_j = Bup[outer, inner, inner]
        Bj_o = Bup[inner, outer, inner]
        Bij = B.B[inner, inner, outer]
        block = (
            (2.0 / 3.0) * np.einsum("ajl,cld->ajcd", Bo_j, Bo_i_o)
            + (1.0 / 3.0) * np.einsum("jcl,lad->ajcd", Bj_o, Bi_o_o)
            + (1.0 / 3.0) * np.einsum("cal,ljd->ajcd", Bo_o_i, Bij)
        )
        R[outer, inner, outer, outer] = block
        R[inner, outer, outer, outer] = -np.transpose(block, (1, 0, 2, 3))
    return CurvatureComponents(R, n)


def curvature_operators(omega: ConnectionCoefficients, B: DorfmanTensor) -> np.ndarray:
    """Matrices R(e_A, e_B) = [D_A, D_B] - B_{AB}^D D_D, shape (2n, 2n, 2n, 2n).

    result[A, B][F, C] is the e_F component of R(e_A, e_B) e_C.
    """
    Omega = omega.operators()
    comp = np.einsum("afg,bgc->abfc", Omega, Omega)
    return comp - np.transpose(comp, (1, 0, 2, 3)) - np.einsum("abd,dfc->abfc", B.raised, Omega)


def curvature_trace_ricci(omega: ConnectionCoefficients, B: DorfmanTensor) -> GeneralizedRicci:
    """Generalized Ricci tensor by tracing the curvature operator of omega.

    Rplus[i, a] = sum_{c in E+} (R(e_c, e_{n+i}) e_a)^c and
    Rminus[a, i] = sum_{k in E-} (R(e_k, e_a) e_{n+i})^k.
    """
    n = B.n
    R = curvature_operators(omega, B)
    P, M = slice(0, n), slice(n, 2 * n)
    Rplus = np.einsum("cica->ia", R[P, M, P, P])
    Rminus = np.einsum("kaki->ai", R[M, P, M, M])
    return GeneralizedRicci(Rplus, Rminus, divergence(omega))


def curvature_tensor(omega: ConnectionCoefficients, B: DorfmanTensor) -> CurvatureComponents:
    """All components <R(e_A, e_B) e_C, e_D> of the curvature of omega."""
    R = curvature_operators(omega, B)
    return CurvatureComponents(np.einsum("abdc,d->abcd", R, B.eta), B.n)


def ricci_via_curvature(B: DorfmanTensor, delta: Optional[DivergenceForm] = None) -> GeneralizedRicci:
    """Trace of the curvature of D0 + S where S prescribes the divergence delta."""
    if delta is None:
        delta = DivergenceForm.zero(B.n)
    ric = curvature_trace_ricci(prescribed_divergence_connection(B, delta), B)
    return GeneralizedRicci(ric.Rplus, ric.Rminus, delta)


# =============================================================================
# Closed-form generalized Ricci
# =============================================================================


def _ricci_parts(B: DorfmanTensor) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """F[i, a] = B_{bi}^j B_{aj}^b, and the linear maps delta -> B_{ia}^c delta_c, B_{ai}^j delta_j."""
    n = B.n
    Bup = B.raised
    P, M = slice(0, n), slice(n, 2 * n)
    F = np.einsum("bij,ajb->ia", Bup[P, M, M], Bup[P, M, P])
    plus_map = np.zeros((n, n, 2 * n))
    plus_map[:, :, :n] = Bup[M, P, P]
    minus_map = np.zeros((n, n, 2 * n))
    minus_map[:, :, n:] = np.transpose(Bup[P, M, M], (1, 0, 2))
    return F, plus_map, minus_map


def generalized_ricci(B: DorfmanTensor, delta: Optional[DivergenceForm] = None) -> GeneralizedRicci:
    """Generalized Ricci tensor from the Dorfman coefficients.

    R_{ia} = B_{bi}^j B_{aj}^b + B_{ia}^c delta_c
    R_{ai} = B_{bi}^j B_{aj}^b + B_{ai}^j delta_j

    Args:
        B: Dorfman tensor
        delta: Divergence; zero when omitted

    Raises:
        DimensionError: If delta does not match B
    """
    if delta is None:
        delta = DivergenceForm.zero(B.n)
    if delta.n != B.n:
        raise DimensionError(f"Divergence of dimension {delta.n} for a Dorfman tensor of dim {B.n}")
    F, plus_map, minus_map = _ricci_parts(B)
    Rplus = F + plus_map @ delta.delta
    Rminus = (F + minus_map @ delta.delta).T
    return GeneralizedRicci(Rplus, Rminus, delta)


def is_generalized_einstein(ric: GeneralizedRicci, tol: float = None) -> Tuple[bool, float]:
    """(max |entry| <= tol, max |entry|)."""
    tol = get_tolerance() if tol is None else tol
    residual = ric.residual
    return residual <= tol, residual


def ricci_symmetry_defect(B: DorfmanTensor, delta: DivergenceForm) -> float:
    """max |B_{ia}^c delta_c - B_{ai}^j delta_j|; zero exactly when Ric_delta is symmetric."""
    _, plus_map, minus_map = _ricci_parts(B)
    return max_abs((plus_map - minus_map) @ delta.delta)


def _affine_solution(matrix: np.ndarray, rhs: np.ndarray, n: int) -> DivergenceSpace:
    tol = get_tolerance()
    directions = null_space(matrix, tol)
    if matrix.size == 0:
        return DivergenceSpace(DivergenceForm.zero(n), directions)
    solution, *_ = np.linalg.lstsq(matrix, rhs, rcond=None)
    scale = max(1.0, max_abs(matrix), max_abs(rhs))
    if max_abs(matrix @ solution - rhs) > tol * scale * 10:
        return DivergenceSpace(None, directions)
    if directions.shape[1]:
        solution = solution - directions @ (directions.T @ solution)
    solution[np.abs(solution) <= tol] = 0.0
    return DivergenceSpace(DivergenceForm(solution), directions)


def skew_divergence_space(B: DorfmanTensor) -> DivergenceSpace:
    """Divergences with B_{ia}^c delta_c = -B_{ai}^j delta_j (a linear subspace)."""
    n = B.n
    _, plus_map, minus_map = _ricci_parts(B)
    matrix = (plus_map + minus_map).reshape(n * n, 2 * n)
    return _affine_solution(matrix, np.zeros(n * n), n)


def einstein_divergence_space(B: DorfmanTensor) -> DivergenceSpace:
    """Divergences delta for which the generalized Ricci tensor vanishes."""
    n = B.n
    F, plus_map, minus_map = _ricci_parts(B)
    matrix = np.vstack([plus_map.reshape(n * n, 2 * n), minus_map.reshape(n * n, 2 * n)])
    rhs = -np.concatenate([F.ravel(), F.ravel()])
    return _affine_solution(matrix, rhs, n)


# =============================================================================
# Classical Ricci and solitons
# =============================================================================


def classical_ricci(basis: AdaptedBasis) -> ClassicalRicci:
    """Ricci tensor of g, tau and nabla tau in the orthonormal frame.

    Ric_{ab} = Gamma_{ab}^d Gamma_{fd}^f - Gamma_{fb}^d Gamma_{ad}^f - kappa_{fa}^d Gamma_{db}^f
    """
    Gamma = christoffel(basis)
    Gu = Gamma.raised
    kappa = basis.kappa
    Ric = (
        np.einsum("abd,fdf->ab", Gu, Gu)
        - np.einsum("fbd,adf->ab", Gu, Gu)
        - np.einsum("fad,dbf->ab", kappa, Gu)
    )
    tau = basis.frame_algebra.trace_form()
    return ClassicalRicci(Ric=Ric, tau=tau, nabla_tau=Gamma.contract(tau))


def tau_closedness(basis: AdaptedBasis) -> float:
    """max |tau([v_a, v_b])|."""
    tau = basis.frame_algebra.trace_form()
    return max_abs(np.einsum("abc,c->ab", basis.kappa, tau))


def soliton_residual(basis: AdaptedBasis) -> np.ndarray:
    """Ric^g + nabla tau, zero iff (G, H = 0, g, delta = 0) is generalized Einstein."""
    return classical_ricci(basis).soliton_residual


def nonflatness_witness(basis: AdaptedBasis) -> float:
    """g(nabla_{v_1} v_2, v_1).

    By the Koszul formula this is g([v_1, v_2], v_1), which is -theta eps_1 on r'3,1.
    """
    if basis.n < 2:
        raise InvalidInputError("Nonflatness witness needs dim g >= 2")
    return float(christoffel(basis).Gamma[0, 1, 0])


# =============================================================================
# Rescaling
# =============================================================================


@dataclass(frozen=True)
class RescaledData:
    """g' = eps mu^-2 g, H' = eps mu^-2 H and delta' = mu delta."""

    metric: MetricData
    three_form: ThreeFormData
    delta: DivergenceForm


def rescale(
    metric: MetricData,
    three_form: ThreeFormData,
    delta: DivergenceForm,
    eps: int,
    mu: float,
) -> RescaledData:
    """Rescale a generalized metric, its three-form and the divergence.

    Raises:
        InvalidInputError: If mu <= 0 or eps is not +1 or -1
    """
    if not mu > 0:
        raise InvalidInputError(f"Rescaling factor must be positive, got {mu}")
    if eps not in (1, -1):
        raise InvalidInputError(f"Rescaling sign must be +1 or -1, got {eps}")
    factor = eps / mu ** 2
    return RescaledData(
        metric=MetricData(factor * metric.g),
        three_form=ThreeFormData(factor * three_form.H),
        delta=DivergenceForm(mu * delta.delta),
    )


def rescale_basis(
    basis: AdaptedBasis, delta: DivergenceForm, eps: int, mu: float
) -> Tuple[AdaptedBasis, DivergenceForm]:
    """Rescaled data in the frame v' = mu v, orthonormal for g' with signs eps * eps_a."""
    rescaled = rescale(basis.metric, basis.three_form, delta, eps, mu)
    new_basis = AdaptedBasis.from_frame(basis.alg, rescaled.metric, rescaled.three_form, mu * basis.v)
    return new_basis, rescaled.delta


def is_ricci_skew(B: DorfmanTensor, delta: DivergenceForm, tol: float = None) -> bool:
    """True if Rplus = -Rminus^T for the divergence delta."""
    tol = get_tolerance() if tol is None else tol
    return generalized_ricci(B, delta).skew_defect() <= tol


__all__ = [
    "CurvatureComponents",
    "GeneralizedRicci",
    "ClassicalRicci",
    "DivergenceSpace",
    "RescaledData",
    "curvature_d0",
    "curvature_operators",
    "curvature_trace_ricci",
    "curvature_tensor",
    "ricci_via_curvature",
    "generalized_ricci",
    "is_generalized_einstein",
    "ricci_symmetry_defect",
    "skew_divergence_space",
    "einstein_divergence_space",
    "is_ricci_skew",
    "classical_ricci",
    "tau_closedness",
    "soliton_residual",
    "nonflatness_witness",
    "rescale",
    "rescale_basis",
]
