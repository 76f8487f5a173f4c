"""Tests for gencurv.dim3 module."""

import numpy as np
import pytest

from gencurv.dim3 import (
    BIANCHI_LABELS,
    L_FAMILIES,
    BianchiLabel,
    bracket_from_l,
    cross_product,
    identify_bianchi,
    l_encoding,
    l_from_bracket,
    normal_form_matrix,
    normal_form_of_symmetric_l,
    normal_form_of_symmetric_m,
    unimodular_kernel,
)
from gencurv.exceptions import DimensionError, InvalidInputError, UnsupportedError
from gencurv.lie import LieAlgebraData

from .conftest import EUCLIDEAN, LORENTZIAN


def solvable(first, second):
    """R x_A R^2 with A = diag(first, second) acting on span(v2, v3)."""
    K = np.zeros((3, 3, 3))
    K[0, 1, 1] = first
    K[0, 2, 2] = second
    K[1, 0, 1] = -first
    K[2, 0, 2] = -second
    return LieAlgebraData(K)


class TestLEncoding:
    """Test the bracket <-> L conversion."""

    @pytest.mark.unit
    def test_cross_product_signs(self):
        """Test v1 x v2 = eps_3 v3."""
        e1, e2 = np.eye(3)[0], np.eye(3)[1]
        np.testing.assert_allclose(cross_product(e1, e2, EUCLIDEAN), [0, 0, 1])
        np.testing.assert_allclose(cross_product(e1, e2, LORENTZIAN), [0, 0, -1])

    @pytest.mark.unit
    def test_identity_gives_so3(self, so3):
        """Test that L = I on a Euclidean frame is so(3)."""
        np.testing.assert_allclose(bracket_from_l(np.eye(3), EUCLIDEAN).kappa, so3.kappa)

    @pytest.mark.unit
    def test_inverse(self, rng):
        """Test l_from_bracket(bracket_from_l(L)) = L."""
        L = rng.standard_normal((3, 3))
        enc = l_from_bracket(bracket_from_l(L, LORENTZIAN), LORENTZIAN)
        np.testing.assert_allclose(enc.L, L, atol=1e-12)

    @pytest.mark.unit
    def test_symmetric_iff_unimodular(self, so3, r31prime):
        """Test that gL is symmetric for unimodular algebras only."""
        assert l_from_bracket(so3, EUCLIDEAN).is_symmetric()
        assert not l_from_bracket(r31prime, LORENTZIAN).is_symmetric()

    @pytest.mark.unit
    def test_from_adapted_basis(self, so3_basis):
        """Test the L of bi-invariant so(3)."""
        np.testing.assert_allclose(l_encoding(so3_basis).L, np.eye(3), atol=1e-12)

    @pytest.mark.unit
    def test_wrong_dimension(self):
        """Test that dim g != 3 is unsupported."""
        with pytest.raises(UnsupportedError):
            l_from_bracket(LieAlgebraData.abelian(2), EUCLIDEAN)

    @pytest.mark.unit
    def test_bad_signs(self):
        """Test that frame signs must be +-1."""
        with pytest.raises(InvalidInputError):
            bracket_from_l(np.eye(3), (1.0, 0.5, 1.0))


class TestNormalForms:
    """Test normal_form_of_symmetric_l() and normal_form_of_symmetric_m()."""

    @pytest.mark.unit
    def test_families_listed(self):
        """Test the names of the L families."""
        assert L_FAMILIES == ("L1", "L2", "L3", "L4", "L5")

    @pytest.mark.unit
    def test_unknown_family(self):
        """Test that an unknown normal form raises."""
        with pytest.raises(InvalidInputError, match="Unknown normal form"):
            normal_form_matrix("L6")

    @pytest.mark.unit
    def test_euclidean_diagonal(self):
        """Test that diag(1, 2, 3) is L1 with ordered eigenvalues."""
        L = np.diag([1.0, 2.0, 3.0])
        form = normal_form_of_symmetric_l(L, EUCLIDEAN)
        assert form.family == "L1"
        assert form.params["alpha"] == pytest.approx(1.0)
        assert form.params["beta"] == pytest.approx(2.0)
        assert form.params["gamma"] == pytest.approx(3.0)
        assert form.residual(L) < 1e-9

    @pytest.mark.unit
    def test_complex_eigenvalues(self):
        """Test that an L2 matrix is recognised on a Lorentzian frame."""
        L = normal_form_matrix("L2", alpha=1.0, beta=2.0, gamma=0.5)
        form = normal_form_of_symmetric_l(L, LORENTZIAN)
        assert form.family == "L2"
        assert form.residual(L) < 1e-8
        assert form.params["gamma"] == pytest.approx(0.5)

    @pytest.mark.unit
    def test_null_direction(self):
        """Test that an L3 matrix is recognised as L3 or L4."""
        L = normal_form_matrix("L3", alpha=0.2, beta=1.0)
        form = normal_form_of_symmetric_l(L, LORENTZIAN)
        assert form.family in ("L3", "L4")
        assert form.residual(L) < 1e-6

    @pytest.mark.unit
    def test_triple_root(self):
        """Test that an L5 matrix is recognised as L5."""
        L = normal_form_matrix("L5", alpha=0.3)
        form = normal_form_of_symmetric_l(L, LORENTZIAN)
        assert form.family == "L5"
        assert form.params["alpha"] == pytest.approx(0.3, abs=1e-6)
        assert form.residual(L) < 1e-6

    @pytest.mark.unit
    def test_frame_is_orthonormal(self):
        """Test T^T G T = diag(eps) for the returned frame."""
        L = normal_form_matrix("L2", alpha=1.0, beta=2.0, gamma=0.5)
        form = normal_form_of_symmetric_l(L, LORENTZIAN)
        gram = form.frame.T @ np.diag(LORENTZIAN) @ form.frame
        np.testing.assert_allclose(gram, np.diag(form.eps), atol=1e-9)

    @pytest.mark.unit
    def test_not_self_adjoint(self):
        """Test that a non self-adjoint L raises."""
        L = np.zeros((3, 3))
        L[0, 1] = 1.0
        with pytest.raises(InvalidInputError, match="self-adjoint"):
            normal_form_of_symmetric_l(L, EUCLIDEAN)

    @pytest.mark.unit
    def test_wrong_shape(self):
        """Test that L must be 3 x 3."""
        with pytest.raises(DimensionError):
            normal_form_of_symmetric_l(np.eye(2), EUCLIDEAN)

    @pytest.mark.unit
    def test_two_dimensional_forms(self):
        """Test M1 on a definite plane and M2 on a Lorentzian one."""
        M = np.diag([2.0, 1.0])
        form = normal_form_of_symmetric_m(M, (1.0, 1.0))
        assert form.family == "M1"
        assert form.residual(M) < 1e-9
        M = normal_form_matrix("M2", theta=0.5, eta=1.0)
        form = normal_form_of_symmetric_m(M, (1.0, -1.0))
        assert form.family == "M2"
        assert form.params["theta"] == pytest.approx(0.5)
        assert form.residual(M) < 1e-8

    @pytest.mark.unit
    @pytest.mark.parametrize("eps", [EUCLIDEAN, LORENTZIAN, (-1.0, -1.0, 1.0)])
    @pytest.mark.parametrize("a", [-2.0, -0.5, 0.3, 1.0, 3.0])
    def test_double_eigenvalue(self, eps, a):
        """Test diagonal matrices with a repeated eigenvalue are L1."""
        for values in ([a, a, 0.0], [a, a, 2.5], [0.7, a, a]):
            L = np.diag(values)
            form = normal_form_of_symmetric_l(L, eps)
            assert form.family == "L1"
            assert form.residual(L) < 1e-9
            found = sorted(form.params[name] for name in ("alpha", "beta", "gamma"))
            np.testing.assert_allclose(found, sorted(values), atol=1e-9)


def random_isometry(rng, eps):
    """Cayley transform of a random element of so(G), close enough to the identity."""
    G = np.diag(np.asarray(eps, dtype=float))
    n = G.shape[0]
    S = 0.5 * rng.standard_normal((n, n))
    A = G @ (S - S.T)
    rho = float(np.max(np.abs(np.linalg.eigvals(A))))
    if rho > 0.6:
        A *= 0.6 / rho
    return np.linalg.solve(np.eye(n) - A, np.eye(n) + A)


def separated_values(rng, count):
    """Values in random order with pairwise gaps of at least 0.5."""
    start = rng.uniform(-2.0, 0.0)
    return rng.permutation(start + np.cumsum(rng.uniform(0.5, 1.0, count)))


def sample_l_form(rng, family, eps):
    """Normal form matrix in the frame with signs eps and the parameters it must be found with."""
    if family == "L1":
        values = separated_values(rng, 3)
        eps = np.asarray(eps)
        if abs(eps.sum()) == 3:
            expected = dict(zip(("alpha", "beta", "gamma"), sorted(values)))
        else:
            major = np.sign(eps.sum())
            alpha, beta = sorted(values[eps == major])
            expected = {"alpha": alpha, "beta": beta, "gamma": values[eps != major][0]}
        return np.diag(values), expected
    if family == "L2":
        expected = {
            "alpha": rng.uniform(-2.0, 2.0),
            "beta": rng.uniform(0.5, 2.0),
            "gamma": rng.uniform(-2.0, 2.0),
        }
    elif family in ("L3", "L4"):
        alpha = rng.uniform(-2.0, 2.0)
        beta = alpha + rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 1.5)
        expected = {"alpha": alpha, "beta": beta}
    else:
        expected = {"alpha": rng.uniform(-2.0, 2.0)}
    return normal_form_matrix(family, **expected), expected


def sample_m_form(rng, family, eps):
    if family == "M1":
        values = separated_values(rng, 2)
        if eps[0] == eps[1]:
            values = np.sort(values)
        expected = {"theta": values[0], "eta": values[1]}
    elif family == "M2":
        expected = {"theta": rng.uniform(-2.0, 2.0), "eta": rng.uniform(0.5, 2.0)}
    else:
        expected = {"theta": rng.uniform(-2.0, 2.0)}
    return normal_form_matrix(family, **expected), expected


L_CASES = [(EUCLIDEAN, "L1")] + [
    (eps, family) for eps in (LORENTZIAN, (-1.0, -1.0, 1.0)) for family in L_FAMILIES
]
M_CASES = [((1.0, 1.0), "M1"), ((-1.0, -1.0), "M1")] + [
    ((1.0, -1.0), family) for family in ("M1", "M2", "M3", "M4")
]


class TestNormalFormInvariance:
    """Test that normal forms are recovered from isometric conjugates."""

    SAMPLES = 100

    @pytest.mark.unit
    @pytest.mark.parametrize("eps,family", L_CASES)
    def test_l_conjugates(self, rng, eps, family):
        """Test family, parameters and frame for conjugates of L1..L5."""
        G = np.diag(eps)
        for _ in range(self.SAMPLES):
            L0, expected = sample_l_form(rng, family, eps)
            Q = random_isometry(rng, eps)
            np.testing.assert_allclose(Q.T @ G @ Q, G, atol=1e-10)
            L = Q @ L0 @ np.linalg.inv(Q)
            form = normal_form_of_symmetric_l(L, eps)
            assert form.family == family
            assert form.residual(L) < 1e-6
            np.testing.assert_allclose(form.frame.T @ G @ form.frame, np.diag(form.eps), atol=1e-6)
            for name, value in expected.items():
                assert form.params[name] == pytest.approx(value, abs=1e-6)

    @pytest.mark.unit
    @pytest.mark.parametrize("eps,family", M_CASES)
    def test_m_conjugates(self, rng, eps, family):
        """Test family, parameters and frame for conjugates of M1..M4."""
        G = np.diag(eps)
        for _ in range(self.SAMPLES):
            M0, expected = sample_m_form(rng, family, eps)
            Q = random_isometry(rng, eps)
            M = Q @ M0 @ np.linalg.inv(Q)
            form = normal_form_of_symmetric_m(M, eps)
            assert form.family == family
            assert form.residual(M) < 1e-6
            np.testing.assert_allclose(form.frame.T @ G @ form.frame, np.diag(form.eps), atol=1e-6)
            for name, value in expected.items():
                assert form.params[name] == pytest.approx(value, abs=1e-6)


class TestUnimodularKernel:
    """Test unimodular_kernel() function."""

    @pytest.mark.unit
    def test_r31prime(self, r31prime, lorentzian3):
        """Test the kernel span(v1, v3) of r'3,1."""
        kernel = unimodular_kernel(r31prime, lorentzian3)
        assert kernel.transversal == 1
        np.testing.assert_allclose(kernel.basis[1], 0.0, atol=1e-12)
        assert not kernel.degenerate
        assert kernel.ideal_defect < 1e-12
        assert np.trace(kernel.action) == pytest.approx(2.0)

    @pytest.mark.unit
    def test_unimodular_raises(self, so3):
        """Test that unimodular algebras have no proper unimodular kernel."""
        with pytest.raises(InvalidInputError, match="unimodular"):
            unimodular_kernel(so3)

    @pytest.mark.unit
    def test_wrong_dimension(self):
        """Test that dim g != 3 is unsupported."""
        with pytest.raises(UnsupportedError):
            unimodular_kernel(LieAlgebraData.abelian(4))


class TestBianchi:
    """Test identify_bianchi() function."""

    @pytest.mark.unit
    def test_unimodular_classes(self, abelian3, so3, heis):
        """Test the unimodular isomorphism classes."""
        assert identify_bianchi(abelian3).label == "abelian"
        assert identify_bianchi(so3).label == "so(3)"
        assert identify_bianchi(bracket_from_l(np.eye(3), LORENTZIAN)).label == "so(2,1)"
        assert identify_bianchi(heis).label == "heis"
        assert identify_bianchi(bracket_from_l(np.diag([1.0, 1.0, 0.0]), EUCLIDEAN)).label == "e(2)"
        assert identify_bianchi(bracket_from_l(np.diag([1.0, -1.0, 0.0]), EUCLIDEAN)).label == "e(1,1)"

    @pytest.mark.unit
    def test_r31prime(self, r31prime):
        """Test the label of r'3,1."""
        assert identify_bianchi(r31prime).label == "r'3,1"

    @pytest.mark.unit
    def test_solvable_classes(self):
        """Test r3,1, r3,lambda and r2+R."""
        assert identify_bianchi(solvable(1.0, 1.0)).label == "r3,1"
        label = identify_bianchi(solvable(1.0, 0.5))
        assert label.label == "r3,lambda"
        assert label.parameter == pytest.approx(0.5)
        assert str(label) == "r3,lambda(0.5)"
        assert identify_bianchi(solvable(1.0, 0.0)).label == "r2+R"

    @pytest.mark.unit
    def test_basis_independent(self, r31prime, rng):
        """Test that a change of basis keeps the label."""
        T = rng.standard_normal((3, 3)) + 3.0 * np.eye(3)
        assert identify_bianchi(r31prime.change_basis(T)).label == "r'3,1"

    @pytest.mark.unit
    def test_labels_known(self, so3, heis, r31prime):
        """Test that returned labels are among BIANCHI_LABELS."""
        for alg in (so3, heis, r31prime):
            assert identify_bianchi(alg).label in BIANCHI_LABELS

    @pytest.mark.unit
    def test_str_without_parameter(self):
        """Test BianchiLabel string form."""
        assert str(BianchiLabel("heis")) == "heis"

    @pytest.mark.unit
    def test_wrong_dimension(self):
        """Test that dim g != 3 is unsupported."""
        with pytest.raises(UnsupportedError):
            identify_bianchi(LieAlgebraData.abelian(2))
