import numpy as np
import pytest

from freespec.errors import DimensionError, ParameterError
from freespec.fixtures import free_extreme_level4
from freespec.linalg import (HermitianTuple, direct_sum, hermitian_eigen,
                             random_hermitian_tuple, random_unitary)
from freespec.pencil import (Pencil, boundary_scale, level1_bounded_heuristic,
                             linear_part, membership, pencil_value)
from freespec.spin import pauli_tuple, random_spin_member, spin_tuple

from _oracles import charpoly_coefficients

SQRT3 = np.sqrt(3.0)


def test_linear_part_zero_point():
    F = spin_tuple(3)
    X = HermitianTuple(np.zeros((3, 2, 2)))
    assert np.abs(linear_part(F, X)).max() == 0.0


def test_linear_part_spin_pair_on_itself():
    # Frozen: the g=2 self-pairing has characteristic polynomial
    # t^4 - 4 t^2 = t^2 (t-2)(t+2), eigenvalues {-2, 0, 0, 2}.
    F = spin_tuple(2)
    M = linear_part(F, F)
    coeffs = charpoly_coefficients(M)
    assert np.allclose(coeffs.real, [1.0, 0.0, -4.0, 0.0, 0.0], atol=1e-12)
    w, _ = hermitian_eigen(M)
    assert np.allclose(w, [-2.0, 0.0, 0.0, 2.0], atol=1e-12)


def test_linear_part_pauli_on_itself_top_eigenvalue():
    P = pauli_tuple()
    w, _ = hermitian_eigen(linear_part(P, P))
    assert abs(w[-1] - 1.0) < 1e-12
    assert abs(w[0] + 3.0) < 1e-12


def test_linear_part_length_mismatch():
    with pytest.raises(DimensionError):
        linear_part(spin_tuple(3), spin_tuple(2))


def test_pencil_value_zero_point_is_identity():
    F = spin_tuple(2)
    X = HermitianTuple(np.zeros((2, 3, 3)))
    assert np.abs(pencil_value(F, X) - np.eye(6)).max() == 0.0


def test_pencil_value_at_level4_point_is_psd_with_kernel():
    L = pencil_value(spin_tuple(3), free_extreme_level4())
    w, _ = hermitian_eigen(L)
    assert w[0] > -1e-12
    assert np.sum(np.abs(w) < 1e-9) == 6


def test_pencil_value_at_conjugate_triple_has_negative_eigenvalue():
    P = pauli_tuple()
    w, _ = hermitian_eigen(pencil_value(P, P.conj()))
    assert abs(w[0] + 2.0) < 1e-12  # frozen from the eigensolve oracle


def test_membership_interior_at_zero():
    verdict = membership(spin_tuple(3), HermitianTuple(np.zeros((3, 1, 1))))
    assert verdict.member and not verdict.boundary
    assert abs(verdict.min_eigenvalue - 1.0) < 1e-15
    assert verdict.kernel_dim is None


def test_membership_scaled_spin_tuple_refuted():
    F = spin_tuple(3)
    verdict = membership(F, HermitianTuple(F.mats / SQRT3))
    assert not verdict.member
    assert abs(verdict.min_eigenvalue - (1.0 - SQRT3)) < 1e-12


def test_membership_negated_triple_refuted():
    P = pauli_tuple()
    verdict = membership(P, HermitianTuple(-P.mats))
    assert not verdict.member
    assert verdict.min_eigenvalue < -0.2


def test_membership_boundary_kernel_dim():
    verdict = membership(spin_tuple(3), free_extreme_level4())
    assert verdict.member and verdict.boundary
    assert verdict.kernel_dim == 6


def test_membership_scaling_monotone():
    rng = np.random.default_rng(4)
    F = spin_tuple(2)
    for _ in range(20):
        X = random_spin_member(rng, 2, 2)
        for s in (0.0, 0.25, 0.5, 0.9, 1.0):
            assert membership(F, HermitianTuple(X.mats * s)).member


def test_membership_unitary_invariance():
    rng = np.random.default_rng(5)
    F = spin_tuple(3)
    for _ in range(20):
        X = random_spin_member(rng, 3, 3, scale=float(rng.choice([0.7, 1.0, 1.2])))
        U = random_unitary(rng, 3)
        rotated = HermitianTuple(np.array([U.conj().T @ M @ U for M in X.mats]))
        a = membership(F, X)
        b = membership(F, rotated)
        assert a.member == b.member
        assert abs(a.min_eigenvalue - b.min_eigenvalue) < 1e-10


def test_membership_direct_sums():
    rng = np.random.default_rng(6)
    F = spin_tuple(2)
    for _ in range(20):
        X = random_spin_member(rng, 2, 2, scale=float(rng.choice([0.8, 1.1])))
        Y = random_spin_member(rng, 2, 3, scale=float(rng.choice([0.8, 1.1])))
        both = membership(F, X).member and membership(F, Y).member
        assert membership(F, direct_sum([X, Y])).member == both


def test_boundary_scale_matches_membership():
    rng = np.random.default_rng(7)
    F = spin_tuple(2)
    X = random_hermitian_tuple(rng, 2, 2)
    s = boundary_scale(F, X)
    assert membership(F, HermitianTuple(X.mats * s)).boundary


def test_bounded_heuristic_spin_pair():
    report = level1_bounded_heuristic(spin_tuple(2), directions=16, seed=0)
    assert report.bounded and report.heuristic
    finite = np.isfinite(report.supports)
    assert finite.all()
    # Coordinate directions have support exactly 1 for unitary coefficients.
    assert np.allclose(report.supports[:4], 1.0, atol=1e-12)


def test_bounded_heuristic_simplex_pencil():
    A = HermitianTuple(np.array([np.diag([1.0, 0.0, -1.0]).astype(complex),
                                 np.diag([0.0, 1.0, -1.0]).astype(complex)]))
    assert level1_bounded_heuristic(A, directions=16, seed=0).bounded


def test_bounded_heuristic_unbounded_direction():
    E11 = np.zeros((2, 2), complex)
    E11[0, 0] = 1.0
    report = level1_bounded_heuristic(HermitianTuple([E11]), directions=4, seed=0)
    assert not report.bounded
    assert report.witness_direction is not None
    # The certified ray has a negative-semidefinite linear part.
    c = report.witness_direction
    assert float(c[0]) < 0.0


def test_bounded_heuristic_direction_count_precondition():
    with pytest.raises(ParameterError):
        level1_bounded_heuristic(spin_tuple(3), directions=2)


def test_pencil_wrapper_roundtrip():
    pencil = Pencil(pauli_tuple())
    assert pencil.d == 2 and pencil.g == 3 and pencil.bounded is None
    again = Pencil(pencil)
    assert again.coefficients is pencil.coefficients
