"""Registry of generalized Einstein solution families in dimension three.

Every family is a parametrised construction of (kappa, g, H, delta) in an
oriented orthonormal frame (v_1, v_2, v_3), together with the qualifiers the
verification tables assert about it: isomorphism class, vanishing of H, the
type of g, diagonalizability of L, degeneracy of g on the unimodular kernel
and the pattern of the divergence.

Functions:
    solution_family: Build an instance of a family
    perturbed_instance: Build a nearby instance that violates the family constraints
    iter_parameters: Parameter sets of a verification run
    list_families: List registered families
    normalize_family_name: Resolve aliases to canonical identifiers
    get_family_info: Qualifiers and parameters of a family
    validate_family: Check whether a family name is known

Examples:
    >>> from gencurv.families import solution_family
    >>>
    >>> solution_family("so(3)", a=1.0, sign=1).is_einstein()
    True
    >>> inst = solution_family("heis-with-divergence", p=0.7, q=-0.3)
    >>> inst.delta.delta.tolist()
    [0.0, 0.7, 0.7, 0.0, -0.3, -0.3]
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from gencurv.config import COARSE_GRID, PARAMETER_GRID, PERTURBATION, get_tolerance
from gencurv.connections import DivergenceForm, riemannian_divergence
from gencurv.courant import DorfmanTensor, dorfman_tensor
from gencurv.curvature import (
    GeneralizedRicci,
    einstein_divergence_space,
    generalized_ricci,
    is_generalized_einstein,
)
from gencurv.dim3 import SQRT_HALF, bracket_from_l, normal_form_matrix
from gencurv.exceptions import InvalidInputError
from gencurv.lie import AdaptedBasis, LieAlgebraData, MetricData, ThreeFormData

logger = logging.getLogger(__name__)

DEFINITE = (1.0, 1.0, 1.0)
LORENTZIAN = (1.0, 1.0, -1.0)
SIDES = ("plus", "minus")

Realization = Tuple[LieAlgebraData, MetricData, ThreeFormData, DivergenceForm]


# =============================================================================
# Instances
# =============================================================================


@dataclass(frozen=True)
class SolutionFamilyInstance:
    """One member of a solution family, realised in the frame v_a = standard basis.

    Attributes:
        family_id: Canonical family identifier
        parameters: Parameters the instance was built from
        alg: Structure constants in the frame
        metric: diag(eps)
        three_form: H in the frame
        delta: Divergence in the adapted basis of E
        perturbed: True for instances built by perturbed_instance
    """

    family_id: str
    parameters: Dict[str, Any]
    alg: LieAlgebraData
    metric: MetricData
    three_form: ThreeFormData
    delta: DivergenceForm
    perturbed: bool = False

    def basis(self) -> AdaptedBasis:
        return AdaptedBasis.from_frame(self.alg, self.metric, self.three_form, np.eye(self.alg.n))

    def dorfman(self) -> DorfmanTensor:
        return dorfman_tensor(self.basis())

    def ricci(self) -> GeneralizedRicci:
        return generalized_ricci(self.dorfman(), self.delta)

    def residual(self) -> float:
        return self.ricci().residual

    def is_einstein(self, tol: float = None) -> bool:
        return is_generalized_einstein(self.ricci(), tol)[0]

    @property
    def eps(self) -> np.ndarray:
        return np.diag(self.metric.g).copy()

    def __repr__(self) -> str:
        tag = ", perturbed" if self.perturbed else ""
        return f"SolutionFamilyInstance({self.family_id!r}, {self.parameters}{tag})"


# =============================================================================
# Building blocks
# =============================================================================


def _lowered(entries: Dict[Tuple[int, int, int], float]) -> np.ndarray:
    """kappa_{abc} from 1-based entries, antisymmetric in the first two slots."""
    K = np.zeros((3, 3, 3))
    for (a, b, c), value in entries.items():
        K[a - 1, b - 1, c - 1] = value
        K[b - 1, a - 1, c - 1] = -value
    return K


def _realize(
    alg: LieAlgebraData,
    eps: Sequence[float],
    h: float = 0.0,
    delta: Optional[Sequence[float]] = None,
) -> Realization:
    delta = DivergenceForm.zero(3) if delta is None else DivergenceForm(np.asarray(delta, dtype=float))
    return alg, MetricData(np.diag(eps)), ThreeFormData.volume(h), delta


def _with_delta(realization: Realization, delta: np.ndarray) -> Realization:
    alg, metric, three_form, _ = realization
    return alg, metric, three_form, DivergenceForm(delta)


def _scaled_component(realization: Realization, index: int, factor: float) -> Realization:
    delta = realization[3].delta.copy()
    delta[index] *= factor
    return _with_delta(realization, delta)


def _shifted_component(realization: Realization, index: int) -> Realization:
    delta = realization[3].delta.copy()
    delta[index] += PERTURBATION * max(1.0, abs(delta[index]))
    return _with_delta(realization, delta)


def _steepest_shift(realization: Realization, scale: float) -> Realization:
    """delta_c += step * sign(B_{ia}^c) on E+ at the entry (i, a) with the largest sum_c |B_{ia}^c|.

    Ric+ is affine in delta, so the residual of an Einstein realization grows
    to step * sum_c |B_{ia}^c|, with step = PERTURBATION * max(1, scale).
    """
    alg, metric, three_form, divergence = realization
    n = alg.n
    basis = AdaptedBasis.from_frame(alg, metric, three_form, np.eye(n))
    coupling = dorfman_tensor(basis).raised[n:, :n, :n]
    weight = np.abs(coupling).sum(axis=2)
    i, a = np.unravel_index(int(np.argmax(weight)), weight.shape)
    delta = divergence.delta.copy()
    delta[:n] += PERTURBATION * max(1.0, abs(scale)) * np.sign(coupling[i, a])
    return _with_delta(realization, delta)


def _nonzero(params: Dict[str, Any], name: str) -> float:
    value = float(params[name])
    if abs(value) <= get_tolerance():
        raise InvalidInputError(f"Parameter '{name}' must be nonzero, got {value}")
    return value


def _positive(params: Dict[str, Any], name: str) -> float:
    value = float(params[name])
    if not value > get_tolerance():
        raise InvalidInputError(f"Parameter '{name}' must be positive, got {value}")
    return value


def _deltas(params: Dict[str, Any], names: Sequence[str]) -> List[float]:
    return [float(params.get(name, 0.0)) for name in names]


def _is_zero(values) -> bool:
    return bool(np.all(np.abs(np.asarray(values)) <= get_tolerance()))


def _nondegenerate_kernel(lam: float, mu: float, nu: float, rho: float) -> LieAlgebraData:
    """[v2, v1] = eps_1 lam v1 + eps_3 mu v3 and [v2, v3] = eps_1 nu v1 + eps_3 rho v3, u = span(v1, v3)."""
    K = _lowered({(2, 1, 1): lam, (2, 1, 3): mu, (2, 3, 1): nu, (2, 3, 3): rho})
    return LieAlgebraData.from_lowered(K, LORENTZIAN)


def _degenerate_kernel(lam: float, mu: float, rho: float, nu: float = 0.0) -> LieAlgebraData:
    """[v1, v2] = [v3, v1] = lam v1 + mu (v2 + v3) and [v2, v3] = nu v1 + rho (v2 + v3), u = span(v1, v2 + v3)."""
    K = _lowered(
        {
            (1, 2, 1): lam, (1, 2, 2): mu, (1, 2, 3): -mu,
            (2, 3, 1): nu, (2, 3, 2): rho, (2, 3, 3): -rho,
            (3, 1, 1): lam, (3, 1, 2): mu, (3, 1, 3): -mu,
        }
    )
    return LieAlgebraData.from_lowered(K, LORENTZIAN)


# =============================================================================
# Unimodular constructions
# =============================================================================


def _build_abelian(p: Dict[str, Any]) -> Realization:
    eps = DEFINITE if p["signature"] == "definite" else LORENTZIAN
    return _realize(LieAlgebraData.abelian(3), eps, 0.0, _deltas(p, ("d1", "d2", "d3", "d4", "d5", "d6")))


def _perturb_abelian(p: Dict[str, Any]) -> Realization:
    """H = h vol with h^2 / 2 = PERTURBATION; Ric is quadratic at the flat point, -h^2 / 2 on the diagonal."""
    alg, metric, _, delta = _build_abelian(p)
    return alg, metric, ThreeFormData.volume(math.sqrt(2.0 * PERTURBATION)), delta


def _simple_realization(a: float, h: float, eps, delta=None) -> Realization:
    return _realize(bracket_from_l(a * np.eye(3), eps), eps, h, delta)


def _so_builder(eps: Sequence[float], h_factor: float = 1.0) -> Callable[[Dict[str, Any]], Realization]:
    """alpha_1 = alpha_2 = alpha_3 = a and h = +-a."""

    def build(p: Dict[str, Any]) -> Realization:
        a = _nonzero(p, "a")
        return _simple_realization(a, h_factor * int(p["sign"]) * a, eps)

    return build


def _so_div_builder(eps: Sequence[float], h_factor: float = 1.0) -> Callable[[Dict[str, Any]], Realization]:
    """alpha = h kills delta on E+, alpha = -h kills it on E-."""

    def build(p: Dict[str, Any]) -> Realization:
        a = _nonzero(p, "a")
        free = _deltas(p, ("d1", "d2", "d3"))
        if p["side"] == "plus":
            return _simple_realization(a, h_factor * a, eps, [0.0, 0.0, 0.0] + free)
        return _simple_realization(a, -h_factor * a, eps, free + [0.0, 0.0, 0.0])

    return build


def _e2_builder(first_factor: float = 1.0) -> Callable[[Dict[str, Any]], Realization]:
    """alpha = (a, a, 0), [g, g] = span(v1, v2) with eps_1 = eps_2."""

    def build(p: Dict[str, Any]) -> Realization:
        a = _nonzero(p, "a")
        eps = (1.0, 1.0, float(p["eps3"]))
        alg = bracket_from_l(np.diag([first_factor * a, a, 0.0]), eps)
        pp, q = _deltas(p, ("p", "q"))
        return _realize(alg, eps, 0.0, [0.0, 0.0, pp, 0.0, 0.0, q])

    return build


def _e11_builder(first_factor: float = 1.0) -> Callable[[Dict[str, Any]], Realization]:
    """alpha = (0, a, a), [g, g] = span(v2, v3) with eps_2 = -eps_3."""

    def build(p: Dict[str, Any]) -> Realization:
        a = _nonzero(p, "a")
        alg = bracket_from_l(np.diag([0.0, first_factor * a, a]), LORENTZIAN)
        pp, q = _deltas(p, ("p", "q"))
        return _realize(alg, LORENTZIAN, 0.0, [pp, 0.0, 0.0, q, 0.0, 0.0])

    return build


def _heis_builder(alpha: float = 0.0) -> Callable[[Dict[str, Any]], Realization]:
    """L = scale * L3(alpha, 0); alpha = 0 is the Heisenberg algebra."""

    def build(p: Dict[str, Any]) -> Realization:
        c = _positive(p, "scale")
        alg = bracket_from_l(c * normal_form_matrix("L3", alpha=alpha), LORENTZIAN)
        pp, q = _deltas(p, ("p", "q"))
        return _realize(alg, LORENTZIAN, 0.0, [0.0, pp, pp, 0.0, q, q])

    return build


def _build_jordan(p: Dict[str, Any]) -> Realization:
    """L3(alpha, 0) with -eps_1 delta_1 / 2 = -eps_1 delta_4 / 2 = alpha."""
    alpha = _nonzero(p, "alpha")
    alg = bracket_from_l(normal_form_matrix("L3", alpha=alpha), LORENTZIAN)
    d = -2.0 * alpha * LORENTZIAN[0]
    return _realize(alg, LORENTZIAN, 0.0, [d, 0.0, 0.0, d, 0.0, 0.0])


def _build_l5(p: Dict[str, Any]) -> Realization:
    """scale * L5(0) with eps_1 delta_1 = -eps_3 delta_3 = eps_1 delta_4 = -eps_3 delta_6 = -sqrt(2) scale."""
    c = _positive(p, "scale")
    e1, _, e3 = LORENTZIAN
    alg = bracket_from_l(c * normal_form_matrix("L5", alpha=0.0), LORENTZIAN)
    d = -math.sqrt(2.0) * c
    return _realize(alg, LORENTZIAN, 0.0, [e1 * d, 0.0, -e3 * d, e1 * d, 0.0, -e3 * d])


# =============================================================================
# Non-unimodular constructions
# =============================================================================


def _r31prime(theta: float, rho_factor: float = 1.0) -> Realization:
    """[v2, v1] = theta v1 - theta v3, [v2, v3] = theta v1 + theta v3."""
    alg = _nondegenerate_kernel(theta, theta, theta, -rho_factor * theta)
    return _realize(alg, LORENTZIAN)


def _build_r31prime(p: Dict[str, Any]) -> Realization:
    return _r31prime(_positive(p, "theta"))


def _build_r31prime_div(p: Dict[str, Any]) -> Realization:
    """Divergences taken from the affine space of Einstein divergences, weighted by w1, w2."""
    realization = _build_r31prime(p)
    alg, metric, three_form, _ = realization
    basis = AdaptedBasis.from_frame(alg, metric, three_form, np.eye(3))
    space = einstein_divergence_space(dorfman_tensor(basis))
    if space.is_empty:
        raise InvalidInputError(f"No Einstein divergence for theta={p['theta']}")
    weights = np.array(_deltas(p, ("w1", "w2")))[: space.dimension]
    delta = space.particular.delta + space.directions[:, : weights.size] @ weights
    logger.debug("r'3,1 Einstein divergences form a space of dimension %d", space.dimension)
    return _with_delta(realization, delta)


def _perturb_r31prime_div(p: Dict[str, Any]) -> Realization:
    delta = _build_r31prime_div(p)[3].delta
    return _with_delta(_r31prime(_positive(p, "theta"), 1.0 + PERTURBATION), delta)


def _nondegenerate_div(lam: float, mu: float, sign: int, h_factor: float = 1.0) -> Realization:
    """rho = -lam, nu = -mu, h = +-2 lam, delta_2 = delta_5 = -tr ad_{v2} = -2 lam."""
    alg = _nondegenerate_kernel(lam, mu, -mu, -lam)
    d = -2.0 * lam
    return _realize(alg, LORENTZIAN, 2.0 * h_factor * sign * lam, [0.0, d, 0.0, 0.0, d, 0.0])


def _nondegenerate_builder(kind: str, h_factor: float = 1.0) -> Callable[[Dict[str, Any]], Realization]:
    def build(p: Dict[str, Any]) -> Realization:
        lam = _nonzero(p, "lam")
        if kind == "r2+R":
            mu = lam
        elif kind == "r3,1":
            mu = 0.0
        else:
            ratio = _nonzero(p, "ratio")
            if abs(abs(ratio) - 1.0) <= get_tolerance():
                raise InvalidInputError(f"Parameter 'ratio' must differ from +-1, got {ratio}")
            mu = ratio * lam
        return _nondegenerate_div(lam, mu, int(p["sign"]), h_factor)

    return build


def _degenerate_div(lam: float, mu: float, rho: float, d1: float = 0.0, d4: float = 0.0) -> Realization:
    """H = 0, nu = 0; rho delta_2 = mu delta_1 - lam^2 - rho^2, delta_3 = -delta_2 (same for 4, 5, 6)."""
    if abs(rho) <= get_tolerance():
        raise InvalidInputError("Parameter 'rho' must be nonzero")
    if abs(lam) > get_tolerance() and not _is_zero([d1, d4]):
        raise InvalidInputError("delta_1 and delta_4 must vanish when lam != 0")
    d2 = (mu * d1 - lam ** 2 - rho ** 2) / rho
    d5 = (mu * d4 - lam ** 2 - rho ** 2) / rho
    return _realize(_degenerate_kernel(lam, mu, rho), LORENTZIAN, 0.0, [d1, d2, -d2, d4, d5, -d5])


def _build_r2r_deg(p: Dict[str, Any]) -> Realization:
    d1, d4 = _deltas(p, ("d1", "d4"))
    return _degenerate_div(0.0, float(p["mu"]), _nonzero(p, "rho"), d1, d4)


def _build_r3_deg(p: Dict[str, Any]) -> Realization:
    rho = _nonzero(p, "rho")
    return _degenerate_div(-rho, _nonzero(p, "mu"), rho)


def _build_r3l_deg(p: Dict[str, Any]) -> Realization:
    lam = _positive(p, "lam")
    rho = _positive(p, "rho")
    if abs(lam - rho) <= get_tolerance():
        raise InvalidInputError(f"Parameters 'lam' and 'rho' must differ, got {lam} and {rho}")
    return _degenerate_div(lam, float(p["mu"]), rho)


def _build_riemannian(p: Dict[str, Any]) -> Realization:
    """Action diag(1, s) on u (up to automorphism) with delta the Riemannian divergence."""
    c = _positive(p, "scale")
    s = float(p["s"])
    if p["degenerate"]:
        if abs(s) > get_tolerance():
            raise InvalidInputError(f"Parameter 's' must be 0 on a degenerate kernel, got {s}")
        realization = _realize(_degenerate_kernel(0.0, float(p["mu"]), c), LORENTZIAN)
    else:
        if not -1.0 < s <= 1.0:
            raise InvalidInputError(f"Parameter 's' must lie in (-1, 1], got {s}")
        lam, mu = 0.5 * (1.0 + s) * c, 0.5 * (1.0 - s) * c
        realization = _realize(
            _nondegenerate_kernel(lam, mu, -mu, -lam), LORENTZIAN, 2.0 * int(p["sign"]) * lam
        )
    alg, metric, three_form, _ = realization
    basis = AdaptedBasis.from_frame(alg, metric, three_form, np.eye(3))
    return alg, metric, three_form, riemannian_divergence(basis)


def _riemannian_label(p: Dict[str, Any]) -> str:
    s = float(p["s"])
    if p["degenerate"] or abs(s) <= get_tolerance():
        return "r2+R"
    if abs(s - 1.0) <= get_tolerance():
        return "r3,1"
    return "r3,lambda"


# =============================================================================
# Divergence patterns
# =============================================================================


def _zero_delta(inst: SolutionFamilyInstance) -> bool:
    return inst.delta.is_zero()


def _any_delta(inst: SolutionFamilyInstance) -> bool:
    return True


def _half_zero(inst: SolutionFamilyInstance) -> bool:
    return inst.delta.is_zero() or _is_zero(inst.delta.plus) or _is_zero(inst.delta.minus)


def _zero_at(*indices: int) -> Callable[[SolutionFamilyInstance], bool]:
    def check(inst: SolutionFamilyInstance) -> bool:
        return _is_zero(inst.delta.delta[list(indices)])

    return check


def _heis_pattern(inst: SolutionFamilyInstance) -> bool:
    d = inst.delta.delta
    return _is_zero([d[0], d[3], d[1] - d[2], d[4] - d[5]])


def _jordan_pattern(inst: SolutionFamilyInstance) -> bool:
    d = inst.delta.delta
    return abs(d[0]) > get_tolerance() and _is_zero([d[0] - d[3], d[1], d[2], d[4], d[5]])


def _l5_pattern(inst: SolutionFamilyInstance) -> bool:
    d = inst.delta.delta
    e1, _, e3 = inst.eps
    values = [e1 * d[0], -e3 * d[2], e1 * d[3], -e3 * d[5]]
    return values[0] < 0 and _is_zero(np.diff(values)) and _is_zero([d[1], d[4]])


def _primed_equal(d: np.ndarray) -> bool:
    return _is_zero(d[:3] - d[3:])


def _r31prime_pattern(inst: SolutionFamilyInstance) -> bool:
    d = inst.delta.delta
    return _primed_equal(d) and _is_zero([d[1], d[4]])


def _trace_pattern(inst: SolutionFamilyInstance) -> bool:
    """delta_i = delta_i' and delta_2 = delta_5 = -tr ad_{v2} != 0."""
    d = inst.delta.delta
    trace = inst.alg.trace_form()[1]
    return _primed_equal(d) and abs(trace) > get_tolerance() and _is_zero([d[1] + trace])


def _r31_pattern(inst: SolutionFamilyInstance) -> bool:
    return _trace_pattern(inst) and _is_zero(inst.delta.delta[[0, 2, 3, 5]])


# =============================================================================
# Registry
# =============================================================================


@dataclass(frozen=True)
class FamilySpec:
    """Construction and table qualifiers of one solution family.

    Attributes:
        family_id: Canonical identifier
        title: Isomorphism class as printed in the tables
        table: 1 (divergence free), 2 (arbitrary divergence) or 0 (not a table row)
        row: Row number within its table
        bianchi: Expected label, or a function of the parameters returning it
        build: Parameters -> realization
        perturb: Parameters -> realization violating the family constraints
        defaults: Accepted parameters and their default values
        grid: Parameters running over the verification grid
        grid_values: Per-parameter values replacing the verification grid
        choices: Discrete parameters and their values
        free: Parameters drawn at random in verification runs
        samples: Random draws per grid point
        h_zero: Whether H vanishes; None when not asserted
        metric: 'definite', 'indefinite' or None
        derived_metric: Type of g on [g, g], or None
        l_diagonalizable: Whether L is diagonalizable (unimodular rows)
        kernel_degenerate: Whether g is degenerate on the unimodular kernel
        flat: Whether g is flat
        soliton: Whether g is a non-flat Ricci soliton
        delta_pattern: Predicate on an instance asserting the divergence column
        h_text, g_text, delta_text, l_text: Table columns
    """

    family_id: str
    title: str
    table: int
    row: int
    bianchi: Union[str, Callable[[Dict[str, Any]], str]]
    build: Callable[[Dict[str, Any]], Realization]
    perturb: Callable[[Dict[str, Any]], Realization]
    defaults: Dict[str, Any] = field(default_factory=dict)
    grid: Tuple[str, ...] = ()
    grid_values: Dict[str, Tuple[float, ...]] = field(default_factory=dict)
    choices: Dict[str, Tuple[Any, ...]] = field(default_factory=dict)
    free: Tuple[str, ...] = ()
    samples: int = 1
    h_zero: Optional[bool] = None
    metric: Optional[str] = None
    derived_metric: Optional[str] = None
    l_diagonalizable: Optional[bool] = None
    kernel_degenerate: Optional[bool] = None
    flat: Optional[bool] = None
    soliton: bool = False
    delta_pattern: Callable[[SolutionFamilyInstance], bool] = _zero_delta
    h_text: str = ""
    g_text: str = ""
    delta_text: str = "0"
    l_text: str = ""

    def expected_label(self, params: Dict[str, Any]) -> str:
        return self.bianchi(params) if callable(self.bianchi) else self.bianchi


_D6 = {f"d{k}": 0.0 for k in range(1, 7)}
_D3 = {"d1": 0.0, "d2": 0.0, "d3": 0.0}
_PQ = {"p": 0.0, "q": 0.0}

_SPECS = (
    # Divergence-free solutions
    FamilySpec(
        "abelian", "R^3", 1, 1, "abelian", _build_abelian, _perturb_abelian,
        defaults={"signature": "definite"},
        choices={"signature": ("definite", "indefinite")},
        h_zero=True, flat=True, l_diagonalizable=True,
        h_text="=0", g_text="flat", l_text="L D",
    ),
    FamilySpec(
        "so3", "so(3)", 1, 2, "so(3)", _so_builder(DEFINITE), _so_builder(DEFINITE, 1.0 + PERTURBATION),
        defaults={"a": 1.0, "sign": 1}, grid=("a",), choices={"sign": (1, -1)},
        h_zero=False, metric="definite", l_diagonalizable=True,
        h_text="!=0", g_text="def", l_text="L D",
    ),
    FamilySpec(
        "so21", "so(2,1)", 1, 3, "so(2,1)", _so_builder(LORENTZIAN), _so_builder(LORENTZIAN, 1.0 + PERTURBATION),
        defaults={"a": 1.0, "sign": 1}, grid=("a",), choices={"sign": (1, -1)},
        h_zero=False, metric="indefinite", l_diagonalizable=True,
        h_text="!=0", g_text="indef", l_text="L D",
    ),
    FamilySpec(
        "e2", "e(2)", 1, 4, "e(2)", _e2_builder(), _e2_builder(1.0 + PERTURBATION),
        defaults={"a": 1.0, "eps3": 1}, grid=("a",), choices={"eps3": (1, -1)},
        h_zero=True, flat=True, derived_metric="definite", l_diagonalizable=True,
        h_text="=0", g_text="flat, def on [g,g]", l_text="L D",
    ),
    FamilySpec(
        "e11", "e(1,1)", 1, 5, "e(1,1)", _e11_builder(), _e11_builder(1.0 + PERTURBATION),
        defaults={"a": 1.0}, grid=("a",),
        h_zero=True, flat=True, derived_metric="indefinite", l_diagonalizable=True,
        h_text="=0", g_text="flat, indef on [g,g]", l_text="L D",
    ),
    FamilySpec(
        "heis", "heis", 1, 6, "heis", _heis_builder(), _heis_builder(PERTURBATION),
        defaults={"scale": 1.0}, grid=("scale",),
        h_zero=True, flat=True, metric="indefinite", l_diagonalizable=False,
        h_text="=0", g_text="flat, indef", l_text="L not D",
    ),
    FamilySpec(
        "r31prime", "r'3,1", 1, 7, "r'3,1", _build_r31prime,
        lambda p: _r31prime(_positive(p, "theta"), 1.0 + PERTURBATION),
        defaults={"theta": 1.0}, grid=("theta",),
        h_zero=True, metric="indefinite", kernel_degenerate=False, soliton=True,
        h_text="=0", g_text="indef", l_text="g|u non-deg",
    ),
    # Solutions with arbitrary divergence
    FamilySpec(
        "abelian_div", "R^3", 2, 1, "abelian", _build_abelian, _perturb_abelian,
        defaults={"signature": "definite", **_D6},
        choices={"signature": ("definite", "indefinite")}, free=tuple(_D6), samples=20,
        h_zero=True, l_diagonalizable=True, delta_pattern=_any_delta,
        h_text="=0", delta_text="arbitrary", l_text="L D",
    ),
    FamilySpec(
        "so3_div", "so(3)", 2, 2, "so(3)", _so_div_builder(DEFINITE),
        _so_div_builder(DEFINITE, 1.0 + PERTURBATION),
        defaults={"a": 1.0, "side": "plus", **_D3}, grid=("a",), choices={"side": SIDES},
        free=tuple(_D3), samples=2,
        h_zero=False, metric="definite", l_diagonalizable=True, delta_pattern=_half_zero,
        h_text="!=0", g_text="def", delta_text="delta|E+ = 0 or delta|E- = 0", l_text="L D",
    ),
    FamilySpec(
        "so21_div", "so(2,1)", 2, 3, "so(2,1)", _so_div_builder(LORENTZIAN),
        _so_div_builder(LORENTZIAN, 1.0 + PERTURBATION),
        defaults={"a": 1.0, "side": "plus", **_D3}, grid=("a",), choices={"side": SIDES},
        free=tuple(_D3), samples=2,
        h_zero=False, metric="indefinite", l_diagonalizable=True, delta_pattern=_half_zero,
        h_text="!=0", g_text="indef", delta_text="delta|E+ = 0 or delta|E- = 0", l_text="L D",
    ),
    FamilySpec(
        "e2_div", "e(2)", 2, 4, "e(2)", _e2_builder(), _e2_builder(1.0 + PERTURBATION),
        defaults={"a": 1.0, "eps3": 1, **_PQ}, grid=("a",), choices={"eps3": (1, -1)},
        free=tuple(_PQ), samples=2,
        h_zero=True, derived_metric="definite", l_diagonalizable=True, delta_pattern=_zero_at(0, 1, 3, 4),
        h_text="=0", g_text="def on [g,g]", delta_text="d_s1 = d_s2 = d_s1+3 = d_s2+3 = 0", l_text="L D",
    ),
    FamilySpec(
        "e11_div", "e(1,1)", 2, 5, "e(1,1)", _e11_builder(), _e11_builder(1.0 + PERTURBATION),
        defaults={"a": 1.0, **_PQ}, grid=("a",), free=tuple(_PQ), samples=2,
        h_zero=True, derived_metric="indefinite", l_diagonalizable=True, delta_pattern=_zero_at(1, 2, 4, 5),
        h_text="=0", g_text="indef on [g,g]", delta_text="d_s1 = d_s2 = d_s1+3 = d_s2+3 = 0", l_text="L D",
    ),
    FamilySpec(
        "heis_div", "heis", 2, 6, "heis", _heis_builder(),
        lambda p: _shifted_component(_heis_builder()(p), 2),
        defaults={"scale": 1.0, **_PQ}, grid=("scale",), free=tuple(_PQ), samples=2,
        h_zero=True, metric="indefinite", l_diagonalizable=False, delta_pattern=_heis_pattern,
        h_text="=0", g_text="indef", delta_text="d1 = d4 = 0, d2 = d3, d5 = d6", l_text="L not D",
    ),
    FamilySpec(
        "e11_jordan_div", "e(1,1)", 2, 7, "e(1,1)", _build_jordan,
        lambda p: _scaled_component(_build_jordan(p), 0, 1.0 + PERTURBATION),
        defaults={"alpha": 1.0}, grid=("alpha",),
        h_zero=True, metric="indefinite", l_diagonalizable=False, delta_pattern=_jordan_pattern,
        h_text="=0", g_text="indef", delta_text="d1 = d4 != 0, d2 = d3 = d5 = d6 = 0", l_text="L not D",
    ),
    FamilySpec(
        "e11_l5_div", "e(1,1)", 2, 7, "e(1,1)", _build_l5,
        lambda p: _scaled_component(_build_l5(p), 0, 1.0 + PERTURBATION),
        defaults={"scale": 1.0}, grid=("scale",),
        h_zero=True, metric="indefinite", l_diagonalizable=False, delta_pattern=_l5_pattern,
        h_text="=0", g_text="indef",
        delta_text="e1 d1 = -e3 d3 = e1 d4 = -e3 d6 = -sqrt2 scale, d2 = d5 = 0", l_text="L not D",
    ),
    FamilySpec(
        "r31prime_div", "r'3,1", 2, 8, "r'3,1", _build_r31prime_div, _perturb_r31prime_div,
        defaults={"theta": 1.0, "w1": 0.0, "w2": 0.0}, grid=("theta",), free=("w1", "w2"),
        h_zero=True, metric="indefinite", kernel_degenerate=False, delta_pattern=_r31prime_pattern,
        h_text="=0", g_text="indef", delta_text="d_i = d_i', d2 = d5 = 0", l_text="g|u non-deg",
    ),
    FamilySpec(
        "r2r_nondeg_div", "r2+R", 2, 9, "r2+R", _nondegenerate_builder("r2+R"),
        _nondegenerate_builder("r2+R", 1.0 + PERTURBATION),
        defaults={"lam": 1.0, "sign": 1}, grid=("lam",), choices={"sign": (1, -1)},
        h_zero=False, metric="indefinite", kernel_degenerate=False, delta_pattern=_trace_pattern,
        h_text="!=0", g_text="indef", delta_text="d_i = d_i', d2 = d5 = -tr ad_v2 != 0", l_text="g|u non-deg",
    ),
    FamilySpec(
        "r3l_nondeg_div", "r3,lambda (lambda != 1)", 2, 10, "r3,lambda", _nondegenerate_builder("r3,lambda"),
        _nondegenerate_builder("r3,lambda", 1.0 + PERTURBATION),
        defaults={"lam": 1.0, "ratio": 0.5, "sign": 1}, grid=("lam", "ratio"), choices={"sign": (1, -1)},
        h_zero=False, metric="indefinite", kernel_degenerate=False, delta_pattern=_trace_pattern,
        h_text="!=0", g_text="indef", delta_text="d_i = d_i', d2 = d5 = -tr ad_v2 != 0", l_text="g|u non-deg",
    ),
    FamilySpec(
        "r31_nondeg_div", "r3,1", 2, 11, "r3,1", _nondegenerate_builder("r3,1"),
        _nondegenerate_builder("r3,1", 1.0 + PERTURBATION),
        defaults={"lam": 1.0, "sign": 1}, grid=("lam",), choices={"sign": (1, -1)},
        h_zero=False, metric="indefinite", kernel_degenerate=False, delta_pattern=_r31_pattern,
        h_text="!=0", g_text="indef", delta_text="d_A = 0 (A = 1,3,4,6), d2 = d5 = -tr ad_v2 != 0",
        l_text="g|u non-deg",
    ),
    FamilySpec(
        "r2r_deg_div", "r2+R", 2, 12, "r2+R", _build_r2r_deg,
        lambda p: _steepest_shift(_build_r2r_deg(p), float(p["rho"])),
        defaults={"rho": 1.0, "mu": 1.0, "d1": 0.0, "d4": 0.0}, grid=("rho", "mu"), free=("d1", "d4"),
        h_zero=True, metric="indefinite", kernel_degenerate=True, delta_pattern=_any_delta,
        h_text="=0", g_text="indef", delta_text="", l_text="g|u deg",
    ),
    FamilySpec(
        "r3_deg_div", "r3", 2, 13, "r3", _build_r3_deg,
        lambda p: _scaled_component(_build_r3_deg(p), 1, 1.0 + PERTURBATION),
        defaults={"rho": 1.0, "mu": 1.0}, grid=("rho", "mu"),
        h_zero=True, metric="indefinite", kernel_degenerate=True, delta_pattern=_any_delta,
        h_text="=0", g_text="indef", delta_text="", l_text="g|u deg",
    ),
    FamilySpec(
        "r3l_deg_div", "r3,lambda", 2, 14, "r3,lambda", _build_r3l_deg,
        lambda p: _scaled_component(_build_r3l_deg(p), 1, 1.0 + PERTURBATION),
        defaults={"lam": 1.0, "rho": 2.0, "mu": 0.5}, grid=("lam", "rho"),
        h_zero=True, metric="indefinite", kernel_degenerate=True, delta_pattern=_any_delta,
        h_text="=0", g_text="indef", delta_text="", l_text="g|u deg",
    ),
    # Riemannian divergence, action diag(1, s) on the unimodular kernel
    FamilySpec(
        "riemannian_div", "R x_A R^2, A = diag(1, s)", 0, 1, _riemannian_label, _build_riemannian,
        lambda p: _steepest_shift(_build_riemannian(p), float(p["scale"])),
        defaults={"s": 1.0, "scale": 1.0, "degenerate": False, "sign": 1, "mu": 0.0},
        grid=("s", "scale"), grid_values={"s": (-0.5, 0.0, 0.5, SQRT_HALF, 1.0)},
        choices={"degenerate": (False, True), "sign": (1, -1)},
        metric="indefinite", delta_pattern=_any_delta,
        g_text="indef", delta_text="Riemannian divergence", l_text="A = diag(1, s), s in (-1, 1]",
    ),
)

FAMILIES: Dict[str, FamilySpec] = {spec.family_id: spec for spec in _SPECS}

# Family name aliases for flexible input
FAMILY_ALIASES = {
    # Abelian
    "r^3": "abelian",
    "abelian": "abelian",
    "r^3-div": "abelian_div",
    "abelian-with-divergence": "abelian_div",

    # Simple
    "so(3)": "so3",
    "so(3)-type": "so3",
    "so(2,1)": "so21",
    "so(2,1)-type": "so21",
    "so(3)-div": "so3_div",
    "so(2,1)-div": "so21_div",

    # Metabelian unimodular
    "e(2)": "e2",
    "e(1,1)": "e11",
    "e(2)-div": "e2_div",
    "e(1,1)-div": "e11_div",
    "heisenberg": "heis",
    "heis-with-divergence": "heis_div",
    "l3-divergence": "e11_jordan_div",
    "l5-divergence": "e11_l5_div",

    # Non-unimodular
    "r'3,1": "r31prime",
    "nonunimod-divfree": "r31prime",
    "r'3,1-div": "r31prime_div",
    "r2+r-nondeg": "r2r_nondeg_div",
    "r3,lambda-nondeg": "r3l_nondeg_div",
    "r3,1-nondeg": "r31_nondeg_div",
    "r2+r-deg": "r2r_deg_div",
    "r3-deg": "r3_deg_div",
    "r3,lambda-deg": "r3l_deg_div",
    "riemannian-divergence": "riemannian_div",
}


def list_families(table: Optional[int] = None) -> List[str]:
    """List canonical family identifiers in registry order.

    Args:
        table: Restrict to families of table 1, 2 (or 0 for the extra families)

    Examples:
        >>> list_families(1)
        ['abelian', 'so3', 'so21', 'e2', 'e11', 'heis', 'r31prime']
    """
    return [spec.family_id for spec in _SPECS if table is None or spec.table == table]


def normalize_family_name(name: str) -> str:
    """Normalize a family name or alias to its canonical identifier.

    Raises:
        InvalidInputError: If the name is not recognized

    Examples:
        >>> normalize_family_name("so(3)")
        'so3'
        >>> normalize_family_name("L5-divergence")
        'e11_l5_div'
    """
    if name in FAMILIES:
        return name
    name_lower = name.strip().lower()
    if name_lower in FAMILY_ALIASES:
        return FAMILY_ALIASES[name_lower]
    if name_lower.replace("-", "_") in FAMILIES:
        return name_lower.replace("-", "_")
    raise InvalidInputError(
        f"Family '{name}' not recognized. Available families: {', '.join(list_families())}"
    )


def get_family(name: str) -> FamilySpec:
    return FAMILIES[normalize_family_name(name)]


def get_family_info(name: str) -> Dict[str, Any]:
    """Table position, qualifiers and parameters of a family.

    Examples:
        >>> get_family_info("heis")["bianchi"]
        'heis'
    """
    spec = get_family(name)
    return {
        "family_id": spec.family_id,
        "title": spec.title,
        "table": spec.table,
        "row": spec.row,
        "bianchi": spec.bianchi if isinstance(spec.bianchi, str) else "depends on parameters",
        "H": spec.h_text,
        "g": spec.g_text,
        "delta": spec.delta_text,
        "L": spec.l_text,
        "parameters": dict(spec.defaults),
        "aliases": sorted(alias for alias, target in FAMILY_ALIASES.items() if target == spec.family_id),
    }


def validate_family(name: str) -> bool:
    """Check if a family name is valid.

    Examples:
        >>> validate_family("heis-with-divergence")
        True
        >>> validate_family("so(4)")
        False
    """
    try:
        normalize_family_name(name)
        return True
    except InvalidInputError:
        return False


def _resolve_parameters(spec: FamilySpec, parameters: Dict[str, Any]) -> Dict[str, Any]:
    unknown = sorted(set(parameters) - set(spec.defaults))
    if unknown:
        accepted = ", ".join(spec.defaults) or "none"
        raise InvalidInputError(
            f"Unknown parameter(s) {', '.join(unknown)} for family '{spec.family_id}'. "
            f"Accepted parameters: {accepted}"
        )
    params = {**spec.defaults, **parameters}
    for name, values in spec.choices.items():
        if params[name] not in values:
            raise InvalidInputError(
                f"Parameter '{name}' of family '{spec.family_id}' must be one of {list(values)}, "
                f"got {params[name]!r}"
            )
    return params


def solution_family(family_id: str, **parameters: Any) -> SolutionFamilyInstance:
    """Build an instance of a solution family.

    Args:
        family_id: Canonical identifier or alias
        **parameters: Family parameters; omitted ones take their defaults

    Returns:
        SolutionFamilyInstance realised in the standard frame

    Raises:
        InvalidInputError: If the family is unknown or a parameter is out of range

    Examples:
        >>> inst = solution_family("nonunimod-divfree", theta=1.0)
        >>> inst.is_einstein()
        True
    """
    spec = get_family(family_id)
    params = _resolve_parameters(spec, parameters)
    alg, metric, three_form, delta = spec.build(params)
    logger.debug("Built family %s with %s", spec.family_id, params)
    return SolutionFamilyInstance(spec.family_id, params, alg, metric, three_form, delta)


def perturbed_instance(family_id: str, **parameters: Any) -> SolutionFamilyInstance:
    """Instance moved off the family by a relative PERTURBATION in a constrained quantity.

    Raises:
        InvalidInputError: If the family is unknown or a parameter is out of range
    """
    spec = get_family(family_id)
    params = _resolve_parameters(spec, parameters)
    alg, metric, three_form, delta = spec.perturb(params)
    return SolutionFamilyInstance(spec.family_id, params, alg, metric, three_form, delta, perturbed=True)


def riemannian_divergence_family(
    s: float = 1.0, scale: float = 1.0, degenerate: bool = False, **parameters: Any
) -> SolutionFamilyInstance:
    """Non-unimodular Lorentzian solution whose divergence is the Riemannian divergence.

    The action on the unimodular kernel is diag(1, s) up to scale; s must be 0
    when the kernel is degenerate.

    Raises:
        InvalidInputError: If s is out of range
    """
    return solution_family("riemannian_div", s=s, scale=scale, degenerate=degenerate, **parameters)


def iter_parameters(family_id: str, coarse: bool = False, seed: int = 0) -> Iterator[Dict[str, Any]]:
    """Parameter sets of a verification run.

    Grid parameters run over PARAMETER_GRID (or COARSE_GRID), discrete
    parameters over all their values, and free parameters are drawn from a
    standard normal distribution seeded by the family position. Sets may
    still be out of range; solution_family rejects those.
    """
    spec = get_family(family_id)
    base = COARSE_GRID if coarse else PARAMETER_GRID
    axes = []
    for name in spec.grid:
        values = spec.grid_values.get(name, base)
        if coarse and name in spec.grid_values:
            values = values[::2]
        axes.append([(name, v) for v in values])
    for name, values in spec.choices.items():
        axes.append([(name, v) for v in values])
    rng = np.random.default_rng([seed, list(FAMILIES).index(spec.family_id)])
    for combo in itertools.product(*axes):
        for _ in range(spec.samples if spec.free else 1):
            params = dict(combo)
            params.update({name: float(rng.standard_normal()) for name in spec.free})
            yield params


__all__ = [
    "SolutionFamilyInstance",
    "FamilySpec",
    "FAMILIES",
    "FAMILY_ALIASES",
    "solution_family",
    "perturbed_instance",
    "riemannian_divergence_family",
    "iter_parameters",
    "list_families",
    "normalize_family_name",
    "get_family",
    "get_family_info",
    "validate_family",
]
