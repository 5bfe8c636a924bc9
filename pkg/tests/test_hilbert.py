import numpy as np
import pytest

from bohmlab import hilbert
from bohmlab.hilbert import (
    commutator_norm,
    hermitian_eigenvalues,
    identity,
    pauli,
    spin_rotation,
    tensor,
)

SQRT2 = np.sqrt(2.0)


class TestPauli:
    def test_definitions(self):
        assert np.array_equal(pauli("z"), np.diag([1, -1]).astype(complex))
        assert np.array_equal(pauli("x"), np.array([[0, 1], [1, 0]], dtype=complex))
        assert np.array_equal(pauli("y"), np.array([[0, -1j], [1j, 0]]))

    @pytest.mark.parametrize("axis", ["x", "y", "z"])
    def test_hermitian_traceless_unit_spectrum(self, axis):
        s = pauli(axis)
        assert hilbert.is_hermitian(s)
        assert abs(np.trace(s)) < 1e-15
        assert np.allclose(hermitian_eigenvalues(s), [-1.0, 1.0], atol=1e-12)

    def test_unknown_axis(self):
        with pytest.raises(ValueError):
            pauli("w")


class TestTensor:
    def test_identity_product(self):
        assert np.array_equal(tensor(identity(2), identity(2)), identity(4))

    def test_diagonal_product(self):
        zz = tensor(pauli("z"), pauli("z"))
        assert np.array_equal(zz, np.diag([1, -1, -1, 1]).astype(complex))

    def test_xy_spectrum(self):
        # (sx (x) sy)^2 = I and trace 0, so the spectrum is {+1,+1,-1,-1}
        op = tensor(pauli("x"), pauli("y"))
        assert np.allclose(op @ op, identity(4), atol=1e-15)
        assert abs(np.trace(op)) < 1e-15
        assert np.allclose(hermitian_eigenvalues(op), [-1, -1, 1, 1], atol=1e-10)

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            tensor(identity(8), identity(4))

    def test_associative_on_pauli_family(self):
        # entries are in {0, +-1, +-i}: products are exact, so associativity
        # holds to the bit
        ops = [pauli("x"), pauli("y"), pauli("z"), identity(2)]
        for a in ops:
            for b in ops:
                for c in ops:
                    left = np.kron(np.kron(a, b), c)
                    right = np.kron(a, np.kron(b, c))
                    assert np.array_equal(left, right)


class TestCommutator:
    def test_self_commutes(self):
        assert commutator_norm(pauli("x"), pauli("x")) == 0.0

    def test_xy_commutator_norm(self):
        # [sx, sy] = 2i sz, whose Frobenius norm is 2*sqrt(2)
        assert abs(commutator_norm(pauli("x"), pauli("y")) - 2 * SQRT2) < 1e-12

    def test_tensor_pairs_commute(self):
        a = tensor(pauli("x"), pauli("x"))
        b = tensor(pauli("y"), pauli("y"))
        # oracle: explicit elementwise 4x4 products
        ab = np.zeros((4, 4), dtype=complex)
        ba = np.zeros((4, 4), dtype=complex)
        for i in range(4):
            for j in range(4):
                ab[i, j] = sum(a[i, k] * b[k, j] for k in range(4))
                ba[i, j] = sum(b[i, k] * a[k, j] for k in range(4))
        assert np.max(np.abs(ab - ba)) == 0.0
        assert commutator_norm(a, b) < 1e-12

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            commutator_norm(pauli("x"), identity(4))


class TestEigenvalues:
    def test_diagonal(self):
        assert np.allclose(hermitian_eigenvalues(pauli("z")), [-1, 1], atol=1e-15)

    def test_sum_of_x_and_z(self):
        # characteristic polynomial of sx + sz is lambda^2 - 2
        eigs = hermitian_eigenvalues(pauli("x") + pauli("z"))
        assert np.allclose(eigs, [-SQRT2, SQRT2], atol=1e-12)

    def test_zz_tensor(self):
        eigs = hermitian_eigenvalues(tensor(pauli("z"), pauli("z")))
        assert np.allclose(eigs, [-1, -1, 1, 1], atol=1e-15)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            hermitian_eigenvalues(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_invariant_under_random_unitaries(self):
        # spectra are basis independent; random unitaries from QR
        gen = np.random.default_rng(20240817)
        for dim in (2, 4):
            for _ in range(100):
                a = gen.normal(size=(dim, dim)) + 1j * gen.normal(size=(dim, dim))
                h = a + a.conj().T
                q, r = np.linalg.qr(gen.normal(size=(dim, dim))
                                    + 1j * gen.normal(size=(dim, dim)))
                q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
                assert np.allclose(hermitian_eigenvalues(q @ h @ q.conj().T),
                                   hermitian_eigenvalues(h), atol=1e-9)


class TestSpinRotation:
    def test_z_axis_is_identity(self):
        assert np.array_equal(spin_rotation([0.0, 0.0, 1.0]), identity(2))

    def test_x_axis_entries(self):
        u = spin_rotation([1.0, 0.0, 0.0])
        assert np.allclose(np.abs(u), np.full((2, 2), 1 / SQRT2), atol=1e-12)

    def test_antiparallel_case(self):
        u = spin_rotation([0.0, 0.0, -1.0])
        assert np.allclose(u @ (-pauli("z")) @ u.conj().T, pauli("z"), atol=1e-12)

    def test_unitary_and_diagonalizing_random_axes(self):
        gen = np.random.default_rng(7)
        for _ in range(100):
            v = gen.normal(size=3)
            v = v / np.linalg.norm(v)
            u = spin_rotation(v)
            assert np.allclose(u @ u.conj().T, identity(2), atol=1e-12)
            n_sigma = v[0] * pauli("x") + v[1] * pauli("y") + v[2] * pauli("z")
            assert np.allclose(u @ n_sigma @ u.conj().T, pauli("z"), atol=1e-12)

    def test_rejects_non_unit_axis(self):
        with pytest.raises(ValueError):
            spin_rotation([0.0, 0.0, 2.0])
        with pytest.raises(ValueError):
            spin_rotation([0.0, 0.0, 0.0])
