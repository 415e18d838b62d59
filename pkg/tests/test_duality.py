import numpy as np
import pytest

from freespec.duality import (FullSpanBasis, choi_matrix, choi_membership,
                              dual_pencil, gell_mann_tuple, non_selfdual_check,
                              polar_refute)
from freespec.errors import (ConstructionError, DimensionError, ParameterError,
                             PreconditionError)
from freespec.linalg import HermitianTuple, hermitian_eigen, random_hermitian_tuple
from freespec.pencil import boundary_scale, membership
from freespec.spin import pauli_conj_tuple, pauli_tuple, random_spin_member, spin_tuple

SQRT3 = np.sqrt(3.0)


def test_full_span_basis_pauli_blocks():
    basis = FullSpanBasis(pauli_tuple())
    P = pauli_tuple().mats
    assert np.abs(basis.G[0] - 0.5 * np.eye(2)).max() < 1e-12
    assert np.abs(basis.G[1] - 0.5 * P[0]).max() < 1e-12
    assert np.abs(basis.G[2] - 0.5 * P[1]).max() < 1e-12
    assert np.abs(basis.G[3] + 0.5 * P[2]).max() < 1e-12
    assert basis.reconstruction_residual() <= 1e-10


def test_full_span_basis_length_validation():
    with pytest.raises(DimensionError):
        FullSpanBasis(spin_tuple(3))  # length 3 != 16 - 1


def test_full_span_basis_rejects_dependent_tuple():
    P = pauli_tuple().mats
    dependent = HermitianTuple(np.array([P[0], P[1], P[0]]))
    with pytest.raises(ConstructionError):
        FullSpanBasis(dependent)


def test_choi_matrix_block_structure():
    basis = FullSpanBasis(pauli_tuple())
    rng = np.random.default_rng(16)
    X = random_hermitian_tuple(rng, 2, 3)
    M = choi_matrix(basis, X).matrix
    Xm = X.mats
    expected = 0.5 * np.block(
        [[np.eye(2) + Xm[0], Xm[1] - 1j * Xm[2]],
         [Xm[1] + 1j * Xm[2], np.eye(2) - Xm[0]]])
    assert np.abs(M - expected).max() < 1e-12


def test_choi_membership_identity_point_rank_one():
    basis = FullSpanBasis(pauli_tuple())
    verdict = choi_membership(basis, pauli_tuple())
    assert verdict.member and verdict.boundary
    w, _ = hermitian_eigen(choi_matrix(basis, pauli_tuple()).matrix)
    assert np.allclose(w, [0.0, 0.0, 0.0, 2.0], atol=1e-12)  # rank one


def test_choi_membership_conjugate_point_refuted():
    # The block matrix at the conjugate triple is the transpose map's Choi
    # matrix; at this normalization its minimum eigenvalue is -1 (twice the
    # -1/2 of the trace-normalized convention).
    basis = FullSpanBasis(pauli_tuple())
    verdict = choi_membership(basis, pauli_conj_tuple())
    assert not verdict.member
    assert abs(verdict.min_eigenvalue + 1.0) < 1e-12


def test_choi_membership_zero_point():
    basis = FullSpanBasis(pauli_tuple())
    verdict = choi_membership(basis, HermitianTuple(np.zeros((3, 2, 2))))
    assert verdict.member


def test_choi_linearity():
    basis = FullSpanBasis(pauli_tuple())
    rng = np.random.default_rng(17)
    X = random_hermitian_tuple(rng, 3, 3)
    Y = random_hermitian_tuple(rng, 3, 3)
    for a in (0.0, 0.3, 0.7, 1.0):
        blend = HermitianTuple(a * X.mats + (1 - a) * Y.mats)
        lhs = choi_matrix(basis, blend).matrix
        rhs = a * choi_matrix(basis, X).matrix + (1 - a) * choi_matrix(basis, Y).matrix
        assert np.abs(lhs - rhs).max() < 1e-12


def test_dual_pencil_of_pauli_is_conjugation_of_itself():
    basis = FullSpanBasis(pauli_tuple())
    B = dual_pencil(basis)
    P = pauli_tuple().mats
    assert np.abs(B.mats[0] + P[0]).max() < 1e-12
    assert np.abs(B.mats[1] + P[1]).max() < 1e-12
    assert np.abs(B.mats[2] - P[2]).max() < 1e-12


def test_dual_pencil_of_conjugate_triple():
    # The dual of the conjugate basis is the negated triple, whose set is
    # the negation of the primal one, matching the conjugate set.
    basis = FullSpanBasis(pauli_conj_tuple())
    B = dual_pencil(basis)
    P = pauli_tuple().mats
    assert np.abs(B.mats + P).max() < 1e-12
    rng = np.random.default_rng(30)
    for _ in range(100):
        X = random_hermitian_tuple(rng, 2, 3)
        s = boundary_scale(pauli_conj_tuple(), X)
        if np.isfinite(s):
            X = X.scaled(s * float(rng.choice([0.8, 1.1])))
        a = membership(B, X)
        b = membership(pauli_conj_tuple(), X)
        if abs(a.min_eigenvalue) > 1e-8:
            assert a.member == b.member


def test_dual_pencil_membership_agrees_with_choi():
    rng = np.random.default_rng(18)
    basis = FullSpanBasis(pauli_tuple())
    B = dual_pencil(basis)
    for _ in range(200):
        n = int(rng.integers(1, 4))
        X = random_hermitian_tuple(rng, n, 3)
        s = boundary_scale(pauli_tuple(), X)
        if np.isfinite(s):
            X = X.scaled(s * float(rng.choice([0.7, 0.999, 1.01, 1.4])))
        member_choi = choi_membership(basis, X).member
        member_pencil = membership(B, X).member
        margin = membership(B, X).min_eigenvalue
        if abs(margin) > 1e-8:
            assert member_choi == member_pencil


def test_dual_pencil_requires_positive_identity_block():
    P = pauli_tuple().mats
    shifted = HermitianTuple(np.array([P[0], P[1], P[2] + 1.5 * np.eye(2)]))
    basis = FullSpanBasis(shifted)
    with pytest.raises(ConstructionError):
        dual_pencil(basis)


def test_random_full_span_dual_agreement_d3():
    rng = np.random.default_rng(19)
    A = gell_mann_tuple(3)
    basis = FullSpanBasis(A)
    B = dual_pencil(basis)
    for _ in range(100):
        n = int(rng.integers(1, 3))
        X = random_hermitian_tuple(rng, n, 8)
        s = boundary_scale(A, X)
        if np.isfinite(s):
            X = X.scaled(s * float(rng.choice([0.5, 0.95, 1.1])))
        verdict = membership(B, X)
        if abs(verdict.min_eigenvalue) > 1e-8:
            assert choi_membership(basis, X).member == verdict.member


def test_polar_refute_pauli_self_membership():
    rng = np.random.default_rng(20)
    samples = [random_spin_member(rng, 3, 2, scale=0.999) for _ in range(50)]
    # Members of the 2x2 triple's set never refute the triple itself.
    P = pauli_tuple()
    ok = [s for s in samples if membership(P, s).member]
    assert polar_refute(ok, P) is None


def test_polar_refute_scaled_spin_witness():
    F = spin_tuple(3)
    X = HermitianTuple(F.mats / SQRT3)
    witness = polar_refute([F], X)
    assert witness is not None
    assert abs(witness.max_eigenvalue - SQRT3) < 1e-12


def test_polar_refute_zero_never():
    F = spin_tuple(3)
    X = HermitianTuple(np.zeros((3, 4, 4)))
    assert polar_refute([F], X) is None


def test_refuted_points_are_choi_nonmembers():
    # One-sided consistency: refutation against members of the self-dual
    # set implies Choi non-membership.
    rng = np.random.default_rng(21)
    basis = FullSpanBasis(pauli_tuple())
    P = pauli_tuple()
    samples = [random_spin_member(rng, 3, 2, scale=0.999) for _ in range(100)]
    samples = [s for s in samples if membership(P, s).member]
    hits = 0
    for _ in range(50):
        X = random_spin_member(rng, 3, 2, scale=1.3)
        witness = polar_refute(samples, X)
        if witness is not None:
            hits += 1
            assert not choi_membership(basis, X).member
    assert hits > 0


def test_non_selfdual_check_gell_mann_witness():
    report = non_selfdual_check(gell_mann_tuple(3), seed=0)
    assert report.conclusive
    x = HermitianTuple(report.witness.reshape(8, 1, 1).astype(complex))
    A = gell_mann_tuple(3)
    B = dual_pencil(FullSpanBasis(A))
    in_primal = membership(A, x).member
    in_dual = membership(B, x).member
    assert in_primal != in_dual
    if report.kind == "in_primal_not_dual":
        assert in_primal and not in_dual
    else:
        assert in_dual and not in_primal


def test_non_selfdual_check_parameter_validation():
    with pytest.raises(ParameterError):
        non_selfdual_check(pauli_tuple())  # d = 2 < 3
    short = HermitianTuple(gell_mann_tuple(3).mats[:6])  # g = 6 < d*d - d + 2
    with pytest.raises(ParameterError):
        non_selfdual_check(short)


def test_non_selfdual_check_requires_bounded_pencil():
    GM = gell_mann_tuple(3).mats.copy()
    GM[7] = GM[7] - 3.0 * np.eye(3)  # unbounded coordinate ray
    with pytest.raises(PreconditionError):
        non_selfdual_check(HermitianTuple(GM))


def test_non_selfdual_check_partial_span_pair_route():
    # Drop one basis element at d=4: length 14 is inside the covered range
    # [14, 15] but short of full span, so only the pairing route runs.
    A = HermitianTuple(gell_mann_tuple(4).mats[:14])
    report = non_selfdual_check(A, seed=0, directions=256)
    if report.conclusive:
        assert report.kind == "in_primal_not_dual"
        x = report.witness
        y = report.certificate["partner"]
        assert float(np.dot(x, y)) > 1.0
    else:
        assert "best_pair_value" in report.certificate
