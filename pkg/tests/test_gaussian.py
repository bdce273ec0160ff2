import numpy as np
import pytest
from hypothesis import given, strategies as st

from pciclone.canonical import pcia_transform, to_symplectic
from pciclone.errors import DomainError
from pciclone.gaussian import (
    GaussianState,
    SymplecticMap,
    apply_map,
    coherent_state,
    fidelity_with_coherent,
    marginal,
    quadrature_variance,
    symplectic_form,
    vacuum_state,
)

amplitudes = st.complex_numbers(
    max_magnitude=10.0, allow_nan=False, allow_infinity=False
)


def test_symplectic_form_structure():
    omega = symplectic_form(3)
    assert omega.shape == (6, 6)
    np.testing.assert_array_equal(omega @ omega, -np.eye(6))
    np.testing.assert_array_equal(omega[:2, :2], [[0, 1], [-1, 0]])


class TestVacuumState:
    def test_single_mode(self):
        s = vacuum_state(1)
        np.testing.assert_array_equal(s.mean, [0.0, 0.0])
        np.testing.assert_array_equal(s.covariance, 0.5 * np.eye(2))

    def test_three_modes(self):
        s = vacuum_state(3)
        np.testing.assert_array_equal(s.mean, np.zeros(6))
        np.testing.assert_array_equal(s.covariance, 0.5 * np.eye(6))

    def test_zero_modes_rejected(self):
        with pytest.raises(DomainError):
            vacuum_state(0)


class TestCoherentState:
    def test_zero_amplitude_is_vacuum(self):
        s = coherent_state([0])
        v = vacuum_state(1)
        np.testing.assert_array_equal(s.mean, v.mean)
        np.testing.assert_array_equal(s.covariance, v.covariance)

    def test_unit_amplitude(self):
        s = coherent_state([1 + 0j])
        np.testing.assert_allclose(s.mean, [np.sqrt(2), 0.0], atol=1e-15)

    def test_conjugate_pair(self):
        s = coherent_state([1j, -1j])
        np.testing.assert_allclose(
            s.mean, [0.0, np.sqrt(2), 0.0, -np.sqrt(2)], atol=1e-15
        )

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            coherent_state([])

    @given(st.lists(amplitudes, min_size=1, max_size=4))
    def test_always_vacuum_noise_and_unit_self_fidelity(self, amps):
        s = coherent_state(amps)
        for mode, amp in enumerate(amps):
            assert quadrature_variance(s, mode) == (0.5, 0.5)
            assert fidelity_with_coherent(s, mode, amp) == pytest.approx(
                1.0, abs=1e-12
            )


class TestApplyMap:
    def test_identity_map(self):
        s = coherent_state([0.3 - 0.8j, 1.2])
        out = apply_map(s, SymplecticMap(np.eye(4)))
        np.testing.assert_array_equal(out.mean, s.mean)
        np.testing.assert_array_equal(out.covariance, s.covariance)

    def test_amplifier_variance(self):
        out = apply_map(vacuum_state(2), to_symplectic(pcia_transform(2.0)))
        # 0.5*G + 0.5*(G-1) with G=2
        assert quadrature_variance(out, 0) == pytest.approx((1.5, 1.5), abs=1e-12)

    def test_amplifier_mean(self):
        psi = 0.6 + 0.4j
        s = coherent_state([psi, np.conj(psi)])
        out = apply_map(s, to_symplectic(pcia_transform(2.0)))
        expect = (np.sqrt(2) + 1.0) * psi
        np.testing.assert_allclose(
            out.mean[:2],
            [np.sqrt(2) * expect.real, np.sqrt(2) * expect.imag],
            atol=1e-12,
        )

    def test_purity_preserved(self):
        s = vacuum_state(2)
        out = apply_map(s, to_symplectic(pcia_transform(3.7)))
        assert np.linalg.det(out.covariance) == pytest.approx(
            np.linalg.det(s.covariance), rel=1e-12
        )
        out.validate()

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            apply_map(vacuum_state(2), SymplecticMap(np.eye(2)))


class TestMarginal:
    def test_full_selection(self):
        s = coherent_state([1j, 2.0, -0.5])
        out = marginal(s, [0, 1, 2])
        np.testing.assert_array_equal(out.mean, s.mean)
        np.testing.assert_array_equal(out.covariance, s.covariance)

    def test_vacuum_factorizes(self):
        out = marginal(vacuum_state(3), [1])
        np.testing.assert_array_equal(out.mean, vacuum_state(1).mean)
        np.testing.assert_array_equal(out.covariance, vacuum_state(1).covariance)

    def test_variance_commutes_with_marginal(self):
        s = apply_map(vacuum_state(2), to_symplectic(pcia_transform(2.5)))
        assert quadrature_variance(marginal(s, [1]), 0) == quadrature_variance(s, 1)

    def test_bad_indices(self):
        s = vacuum_state(2)
        with pytest.raises(DomainError):
            marginal(s, [0, 0])
        with pytest.raises(DomainError):
            marginal(s, [2])
        with pytest.raises(DomainError):
            marginal(s, [])


class TestQuadratureVariance:
    def test_vacuum(self):
        assert quadrature_variance(vacuum_state(1), 0) == (0.5, 0.5)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            quadrature_variance(vacuum_state(1), 1)


class TestFidelityWithCoherent:
    def test_self_fidelity(self):
        assert fidelity_with_coherent(vacuum_state(1), 0, 0j) == pytest.approx(
            1.0, abs=1e-15
        )

    @pytest.mark.parametrize("n", [0.0, 1e-3, 1 / 16, 1 / 9, 1.0, 10.0])
    def test_symmetric_added_noise(self, n):
        s = GaussianState(1, np.zeros(2), (0.5 + n) * np.eye(2))
        assert fidelity_with_coherent(s, 0, 0j) == pytest.approx(
            1.0 / (1.0 + n), abs=1e-12
        )

    @given(amplitudes, amplitudes)
    def test_displaced_coherent_overlap(self, psi, target):
        # Overlap of two coherent states is exp(-|psi - target|^2).
        f = fidelity_with_coherent(coherent_state([psi]), 0, target)
        assert f == pytest.approx(np.exp(-abs(psi - target) ** 2), rel=1e-9)

    def test_singular_covariance_rejected(self):
        s = GaussianState(1, np.zeros(2), -0.5 * np.eye(2))
        with pytest.raises(DomainError):
            fidelity_with_coherent(s, 0, 0j)


class TestValidation:
    def test_asymmetric_covariance_rejected(self):
        s = GaussianState(1, np.zeros(2), np.array([[0.5, 0.2], [0.0, 0.5]]))
        with pytest.raises(DomainError):
            s.validate()

    def test_uncertainty_violation_rejected(self):
        s = GaussianState(1, np.zeros(2), 0.1 * np.eye(2))
        with pytest.raises(DomainError):
            s.validate()

    def test_shape_mismatch_rejected(self):
        with pytest.raises(DomainError):
            GaussianState(2, np.zeros(2), 0.5 * np.eye(4))

    def test_non_symplectic_map_rejected(self):
        with pytest.raises(DomainError):
            SymplecticMap(2.0 * np.eye(2)).validate()

    def test_states_are_immutable(self):
        s = vacuum_state(1)
        with pytest.raises(ValueError):
            s.mean[0] = 1.0
        with pytest.raises(ValueError):
            s.covariance[0, 0] = 9.0
