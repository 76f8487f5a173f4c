"""Seeded random instances (kappa, g, H, delta) for property checks.

Lie algebras are drawn so that the Jacobi identity holds by construction:
in dimension three from a random L-encoding, otherwise as a semidirect
product R x_A R^(n-1) with a random matrix A. A random change of basis is
applied on top, so the frame is never adapted to the structure.

Examples:
    >>> import numpy as np
    >>> from gencurv.samples import random_instance
    >>>
    >>> inst = random_instance(np.random.default_rng(42), n=3)
    >>> inst.basis().n
    3
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from gencurv.connections import DivergenceForm
from gencurv.dim3 import bracket_from_l
from gencurv.exceptions import InvalidInputError
from gencurv.lie import AdaptedBasis, LieAlgebraData, MetricData, ThreeFormData, adapted_basis, ce_differential
from gencurv.linalg import antisymmetrize, levi_civita

logger = logging.getLogger(__name__)

MIN_SINGULAR_VALUE = 0.3


@dataclass(frozen=True)
class RandomInstance:
    """Random valid input of the Ricci computation."""

    alg: LieAlgebraData
    metric: MetricData
    three_form: ThreeFormData
    delta: DivergenceForm

    def basis(self) -> AdaptedBasis:
        return adapted_basis(self.alg, self.metric, self.three_form)

    @property
    def n(self) -> int:
        return self.alg.n


def random_basis_change(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random invertible matrix with singular values in [MIN_SINGULAR_VALUE, 1 + MIN_SINGULAR_VALUE]."""
    U, _, Vt = np.linalg.svd(rng.standard_normal((n, n)))
    s = MIN_SINGULAR_VALUE + rng.random(n)
    return U @ np.diag(s) @ Vt


def random_lie_algebra(
    rng: np.random.Generator,
    n: int = 3,
    unimodular: Optional[bool] = None,
    change_basis: bool = True,
) -> LieAlgebraData:
    """Random Lie algebra of dimension n.

    Args:
        rng: Random generator
        n: Dimension (>= 1)
        unimodular: Force (True) or exclude (False) unimodularity; None for either.
            Only honoured for n = 3.
        change_basis: Apply a random change of basis

    Raises:
        InvalidInputError: If n < 1
    """
    if n < 1:
        raise InvalidInputError(f"Dimension must be at least 1, got {n}")
    if n == 3:
        # L = N + (a x .) is a Lie bracket iff N a = 0
        N = rng.standard_normal((3, 3))
        N = 0.5 * (N + N.T)
        if unimodular is None:
            unimodular = bool(rng.random() < 0.5)
        a = np.zeros(3) if unimodular else rng.standard_normal(3)
        if not unimodular:
            P = np.eye(3) - np.outer(a, a) / (a @ a)
            N = P @ N @ P
        A = np.einsum("abc,b->ac", levi_civita(3), a)
        alg = bracket_from_l(N + A, (1.0, 1.0, 1.0))
    else:
        kappa = np.zeros((n, n, n))
        if n > 1:
            A = rng.standard_normal((n - 1, n - 1))
            # [v_0, v_i] = A_{ji} v_j on the abelian ideal spanned by v_1..v_{n-1}
            kappa[0, 1:, 1:] = A.T
            kappa[1:, 0, 1:] = -A.T
        alg = LieAlgebraData(kappa)
    if change_basis:
        alg = alg.change_basis(random_basis_change(rng, n))
    return alg


def random_metric(rng: np.random.Generator, n: int, signature: Optional[Tuple[int, int]] = None) -> MetricData:
    """Random metric of the given signature (random signature when None)."""
    if signature is None:
        p = int(rng.integers(0, n + 1))
        signature = (p, n - p)
    p, q = signature
    if p + q != n:
        raise InvalidInputError(f"Signature {signature} does not match dimension {n}")
    T = random_basis_change(rng, n)
    g = T.T @ np.diag([1.0] * p + [-1.0] * q) @ T
    return MetricData(0.5 * (g + g.T), signature=signature)


def random_closed_three_form(rng: np.random.Generator, alg: LieAlgebraData) -> ThreeFormData:
    """Closed three-form: any three-form when n = 3, otherwise d of a random two-form."""
    n = alg.n
    if n < 3:
        return ThreeFormData.zero(n)
    if n == 3:
        return ThreeFormData.volume(float(rng.standard_normal()))
    beta = antisymmetrize(rng.standard_normal((n, n)))
    return ThreeFormData(ce_differential(beta, alg))


def random_divergence(rng: np.random.Generator, n: int) -> DivergenceForm:
    return DivergenceForm(rng.standard_normal(2 * n))


def random_instance(
    rng: np.random.Generator,
    n: int = 3,
    with_delta: bool = True,
    with_h: bool = True,
    signature: Optional[Tuple[int, int]] = None,
    unimodular: Optional[bool] = None,
) -> RandomInstance:
    """Random (kappa, g, H, delta), valid by construction."""
    alg = random_lie_algebra(rng, n, unimodular=unimodular)
    metric = random_metric(rng, n, signature)
    three_form = random_closed_three_form(rng, alg) if with_h else ThreeFormData.zero(n)
    delta = random_divergence(rng, n) if with_delta else DivergenceForm.zero(n)
    logger.debug("Random instance n=%d signature=%s", n, metric.signature)
    return RandomInstance(alg, metric, three_form, delta)


__all__ = [
    "RandomInstance",
    "random_basis_change",
    "random_lie_algebra",
    "random_metric",
    "random_closed_three_form",
    "random_divergence",
    "random_instance",
]
