"""Tests for gencurv.connections module."""

import numpy as np
import pytest

from gencurv.connections import (
    ConnectionCoefficients,
    DivergenceForm,
    ProlongationElement,
    alt_image_dimension,
    alt_map,
    alt_matrix,
    canonical_connection,
    christoffel,
    cyclic_sum,
    divergence,
    divergence_correction,
    expected_prolongation_dimension,
    partial_matrix,
    prescribed_divergence_connection,
    prolongation_dimension,
    riemannian_divergence,
    torsion,
)
from gencurv.courant import dorfman_tensor
from gencurv.exceptions import DimensionError, InvalidInputError, UnsupportedError
from gencurv.lie import AdaptedBasis
from gencurv.samples import random_instance

ETA3 = np.array([1.0, 1.0, 1.0, -1.0, -1.0, -1.0])


class TestDivergenceForm:
    """Test DivergenceForm class."""

    @pytest.mark.unit
    def test_blocks(self):
        """Test the E+ and E- parts."""
        delta = DivergenceForm([1.0, 2.0, 3.0, 4.0])
        assert delta.n == 2
        np.testing.assert_array_equal(delta.plus, [1.0, 2.0])
        np.testing.assert_array_equal(delta.minus, [3.0, 4.0])

    @pytest.mark.unit
    def test_zero(self):
        """Test the zero divergence."""
        assert DivergenceForm.zero(3).is_zero()
        assert not DivergenceForm([0.0, 1e-3]).is_zero()

    @pytest.mark.unit
    @pytest.mark.parametrize("values", [[1.0, 2.0, 3.0], [], [[1.0, 2.0]]])
    def test_bad_length(self, values):
        """Test that odd, empty or 2D input raises."""
        with pytest.raises(DimensionError):
            DivergenceForm(values)


class TestProlongation:
    """Test the prolongation maps alt and d."""

    @pytest.mark.unit
    def test_alt_divergence_example(self):
        """Test div alt(e^1 e^1 e^2) = -e^2."""
        sigma = np.zeros((6, 6, 6))
        sigma[0, 0, 1] = 1.0
        S = alt_map(sigma, 3)
        delta = divergence(ConnectionCoefficients(S.S, S.eta))
        np.testing.assert_allclose(delta.delta, [0.0, -1.0, 0.0, 0.0, 0.0, 0.0])

    @pytest.mark.unit
    def test_alt_lands_in_kernel(self, rng):
        """Test that alt(sigma) is annihilated by d and preserves both blocks."""
        sigma = np.zeros((6, 6, 6))
        block = rng.standard_normal((3, 3, 3))
        sigma[3:, 3:, 3:] = block + np.transpose(block, (1, 0, 2))
        S = alt_map(sigma, 3)
        assert S.partial_residual() < 1e-12
        assert S.is_block_preserving()

    @pytest.mark.unit
    def test_alt_not_symmetric(self):
        """Test that sigma must be symmetric in its first two slots."""
        sigma = np.zeros((6, 6, 6))
        sigma[0, 1, 2] = 1.0
        with pytest.raises(InvalidInputError, match="symmetric"):
            alt_map(sigma, 3)

    @pytest.mark.unit
    def test_alt_mixed_blocks(self):
        """Test that entries mixing E+ and E- raise."""
        sigma = np.zeros((6, 6, 6))
        sigma[0, 0, 3] = 1.0
        with pytest.raises(InvalidInputError, match="mixing"):
            alt_map(sigma, 3)

    @pytest.mark.unit
    def test_alt_two_blocks(self):
        """Test that sigma supported on both eigenbundles raises."""
        sigma = np.zeros((6, 6, 6))
        sigma[0, 0, 0] = 1.0
        sigma[3, 3, 3] = 1.0
        with pytest.raises(InvalidInputError, match="single eigenbundle"):
            alt_map(sigma, 3)

    @pytest.mark.unit
    def test_matrices_match_tensor_maps(self, rng):
        """Test the flattened matrices against the tensor operations."""
        t = rng.standard_normal((2, 2, 2))
        np.testing.assert_allclose(partial_matrix(2) @ t.ravel(), cyclic_sum(t).ravel(), atol=1e-12)
        alt = t - np.transpose(t, (0, 2, 1))
        np.testing.assert_allclose(alt_matrix(2) @ t.ravel(), alt.ravel(), atol=1e-12)

    @pytest.mark.unit
    @pytest.mark.parametrize("n,expected", [(2, 2), (3, 8)])
    def test_prolongation_dimension(self, n, expected):
        """Test the kernel dimension of d on one block."""
        assert expected_prolongation_dimension(n) == expected
        assert prolongation_dimension(n) == expected

    @pytest.mark.unit
    def test_alt_image_fills_kernel(self):
        """Test that alt maps onto the kernel of d for n = 3."""
        assert alt_image_dimension(3) == prolongation_dimension(3) == 8

    @pytest.mark.unit
    def test_prolongation_element_not_skew(self):
        """Test that S must be skew in its last two slots."""
        S = np.zeros((6, 6, 6))
        S[0, 1, 1] = 1.0
        with pytest.raises(InvalidInputError):
            ProlongationElement(S, ETA3)


class TestCanonicalConnection:
    """Test the canonical divergence-free connection."""

    @pytest.mark.unit
    def test_torsion_free_and_divergence_free(self, rng):
        """Test T = 0 and div = 0 on random instances."""
        for n in (3, 4):
            B = dorfman_tensor(random_instance(rng, n).basis())
            D0 = canonical_connection(B)
            np.testing.assert_allclose(torsion(D0, B), 0.0, atol=1e-10)
            assert divergence(D0).is_zero(1e-10)

    @pytest.mark.unit
    def test_metric_for_generalized_metric(self, so3_basis):
        """Test that D0 preserves E+ and E-."""
        D0 = canonical_connection(dorfman_tensor(so3_basis))
        assert D0.is_metric()
        assert D0.mixed_block_norm() == 0.0

    @pytest.mark.unit
    def test_operators_skew(self, so3_basis):
        """Test that each D_{e_A} is skew for eta."""
        D0 = canonical_connection(dorfman_tensor(so3_basis))
        eta = np.diag(ETA3)
        for op in D0.operators():
            np.testing.assert_allclose(eta @ op + (eta @ op).T, 0.0, atol=1e-12)

    @pytest.mark.unit
    def test_not_skew(self):
        """Test that coefficients not skew in the last two slots raise."""
        omega = np.zeros((6, 6, 6))
        omega[0, 2, 2] = 1.0
        with pytest.raises(InvalidInputError):
            ConnectionCoefficients(omega, ETA3)


class TestPrescribedDivergence:
    """Test prescribed_divergence_connection()."""

    @pytest.mark.unit
    def test_divergence_matches(self, rng):
        """Test that the connection has exactly the requested divergence."""
        inst = random_instance(rng, 3)
        B = dorfman_tensor(inst.basis())
        D = prescribed_divergence_connection(B, inst.delta)
        np.testing.assert_allclose(divergence(D).delta, inst.delta.delta, atol=1e-10)
        np.testing.assert_allclose(torsion(D, B), 0.0, atol=1e-10)
        assert D.is_metric()

    @pytest.mark.unit
    def test_pivot_on_first_index(self):
        """Test components on the first index of each block."""
        delta = DivergenceForm([1.5, 0.0, -2.0, 0.0])
        S = divergence_correction(delta, [1.0, -1.0, -1.0, 1.0])
        result = divergence(ConnectionCoefficients(S.S, S.eta))
        np.testing.assert_allclose(result.delta, delta.delta, atol=1e-12)

    @pytest.mark.unit
    def test_dimension_one_unsupported(self):
        """Test that n = 1 is rejected."""
        with pytest.raises(UnsupportedError):
            divergence_correction(DivergenceForm([1.0, 0.0]), [1.0, -1.0])

    @pytest.mark.unit
    def test_dimension_mismatch(self, so3_basis):
        """Test that a divergence of the wrong dimension raises."""
        B = dorfman_tensor(so3_basis)
        with pytest.raises(DimensionError):
            prescribed_divergence_connection(B, DivergenceForm.zero(2))


class TestRiemannianDivergence:
    """Test riemannian_divergence()."""

    @pytest.mark.unit
    def test_unimodular_zero(self, so3_basis):
        """Test that unimodular algebras have zero Riemannian divergence."""
        assert riemannian_divergence(so3_basis).is_zero()

    @pytest.mark.unit
    def test_r31prime(self, r31prime, lorentzian3):
        """Test delta_A = -tr ad_{pi e_A} for r'3,1."""
        basis = AdaptedBasis.from_frame(r31prime, lorentzian3, None, np.eye(3))
        np.testing.assert_allclose(riemannian_divergence(basis).delta, [0, -2, 0, 0, -2, 0])


class TestChristoffel:
    """Test christoffel()."""

    @pytest.mark.unit
    def test_bi_invariant_so3(self, so3_basis):
        """Test Gamma = epsilon / 2 for the bi-invariant metric."""
        Gamma = christoffel(so3_basis)
        np.testing.assert_allclose(Gamma.Gamma, 0.5 * so3_basis.kappa_lower)
        np.testing.assert_allclose(Gamma.trace(), 0.0)

    @pytest.mark.unit
    def test_torsion_free(self, rng):
        """Test nabla_x y - nabla_y x = [x, y] in the frame."""
        basis = random_instance(rng, 3).basis()
        Gu = christoffel(basis).raised
        np.testing.assert_allclose(Gu - np.transpose(Gu, (1, 0, 2)), basis.kappa, atol=1e-10)

    @pytest.mark.unit
    def test_covariant_derivative(self, so3_basis):
        """Test (nabla_{v1} v^3)(v2) = -Gamma_{12}^3."""
        Gamma = christoffel(so3_basis)
        nabla = Gamma.covariant_derivative(np.array([0.0, 0.0, 1.0]))
        assert nabla[0, 1] == pytest.approx(-0.5)
