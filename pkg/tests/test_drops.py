import numpy as np
import pytest

from freespec.drops import (DropDescriptor, FreeSimplex, projection_extreme_harness,
                            level1_hull_membership, project_membership_special,
                            segment_generator, simplex_membership,
                            witness_search)
from freespec.errors import (ConstructionError, ParameterError,
                             UnsupportedCaseError)
from freespec.fixtures import (triangle_edge_generators,
                               triangle_cover_generators,
                               triangle_example_pencil, triangle_example_point)
from freespec.linalg import HermitianTuple, random_hermitian_tuple
from freespec.pencil import Pencil, membership
from freespec.spin import pauli_tuple, random_spin_member, spin_tuple

SQRT3 = np.sqrt(3.0)


def test_special_case_pauli_projection():
    drop = DropDescriptor(Pencil(pauli_tuple()), 2)
    X = HermitianTuple(pauli_tuple().mats[:2])
    verdict = project_membership_special(drop, X, grid=32)
    assert verdict.member
    assert abs(verdict.min_eigenvalue) <= 1e-9  # boundary of the disk set


def test_special_case_spin_projection_level4_point():
    from freespec.fixtures import free_extreme_level4

    drop = DropDescriptor(Pencil(spin_tuple(4)), 3)
    verdict = project_membership_special(drop, free_extreme_level4())
    assert verdict.member and verdict.boundary


def test_special_case_interval_refutation():
    drop = DropDescriptor(Pencil(spin_tuple(3)), 1)
    X = HermitianTuple(np.array([[[1.5]]], dtype=complex))
    verdict = project_membership_special(drop, X)
    assert not verdict.member


def test_special_case_unregistered():
    drop = DropDescriptor(Pencil(triangle_example_pencil()), 1)
    with pytest.raises(UnsupportedCaseError):
        project_membership_special(drop, HermitianTuple(np.array([[[0.5]]], complex)))


def test_witness_search_zero_padding_succeeds():
    rng = np.random.default_rng(24)
    drop = DropDescriptor(Pencil(spin_tuple(4)), 3)
    X = random_spin_member(rng, 3, 2, scale=0.9)
    result = witness_search(drop, X, restarts=2, seed=0)
    assert result.found
    assert result.verdict.member
    padded = np.concatenate([X.mats, result.witness.mats], axis=0)
    assert membership(spin_tuple(4), HermitianTuple(padded)).member


def test_witness_search_nonmember_inconclusive():
    drop = DropDescriptor(Pencil(spin_tuple(4)), 3)
    F = spin_tuple(3)
    X = HermitianTuple(F.mats / SQRT3)
    result = witness_search(drop, X, restarts=3, iters=40, seed=0)
    assert not result.found
    assert result.best_infeasibility > 0.0


def test_witness_search_zero_point_immediate():
    drop = DropDescriptor(Pencil(spin_tuple(4)), 3)
    X = HermitianTuple(np.zeros((3, 2, 2)))
    result = witness_search(drop, X, restarts=1, seed=0)
    assert result.found and result.restarts_used == 1
    assert np.abs(result.witness.mats).max() == 0.0


def test_free_simplex_construction_validation():
    with pytest.raises(ConstructionError):
        FreeSimplex(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]))  # collinear
    with pytest.raises(ConstructionError):
        FreeSimplex(np.array([[1.0, 0.0], [2.0, 0.5], [1.0, 1.0]]))  # 0 outside


def test_free_simplex_pencil_matches_triangle():
    # Same facet functionals as the reference diagonal pencil, up to the
    # order of the diagonal slots.
    simplex = FreeSimplex(np.array([[-2.0, 1.0], [1.0, 1.0], [1.0, -2.0]]))
    mine = np.sort(np.stack([np.real(np.diagonal(M))
                             for M in simplex.pencil.coefficients.mats], axis=1), axis=0)
    reference = np.sort(np.stack([np.real(np.diagonal(M))
                                  for M in triangle_example_pencil().mats], axis=1), axis=0)
    assert np.abs(mine - reference).max() < 1e-12


def test_simplex_membership_remark_point_boundary():
    simplex = FreeSimplex(np.array([[-2.0, 1.0], [1.0, 1.0], [1.0, -2.0]]))
    result = simplex_membership(simplex, triangle_example_point())
    assert result.member and result.boundary
    # Barycentric operator coefficients reconstruct the point and sum to I.
    Q = result.coefficients
    assert np.abs(Q.sum(axis=0) - np.eye(2)).max() < 1e-10
    rebuilt = np.einsum("ij,iab->jab", simplex.vertices, Q)
    assert np.abs(rebuilt - triangle_example_point().mats).max() < 1e-10


def test_simplex_membership_level1_points():
    simplex = FreeSimplex(np.array([[-2.0, 1.0], [1.0, 1.0], [1.0, -2.0]]))
    inside = HermitianTuple(np.array([[[0.0]], [[-2.0 / 3.0]]], dtype=complex))
    assert simplex_membership(simplex, inside).member
    outside = HermitianTuple(np.array([[[2.0]], [[2.0]]], dtype=complex))
    assert not simplex_membership(simplex, outside).member


def test_simplex_membership_agrees_with_brute_force_on_scalars():
    # Independent scalar oracle: plain barycentric coordinates from the
    # vertex system, compared over 1000 random points.
    rng = np.random.default_rng(25)
    vertices = np.array([[-2.0, 1.0], [1.0, 1.0], [1.0, -2.0]])
    simplex = FreeSimplex(vertices)
    W = np.vstack([vertices.T, np.ones(3)])
    disagreements = 0
    for _ in range(1000):
        x = rng.uniform(-3.0, 2.0, size=2)
        bary = np.linalg.solve(W, np.concatenate([x, [1.0]]))
        expected = bool(bary.min() >= -1e-9)
        point = HermitianTuple(x.reshape(2, 1, 1).astype(complex))
        result = simplex_membership(simplex, point)
        if abs(result.margin) > 1e-10 and result.member != expected:
            disagreements += 1
    assert disagreements == 0


def test_simplex_membership_matrix_level_agrees_with_pencil():
    rng = np.random.default_rng(26)
    simplex = FreeSimplex(np.array([[-2.0, 1.0], [1.0, 1.0], [1.0, -2.0]]))
    for _ in range(50):
        X = random_hermitian_tuple(rng, 2, 2, scale=0.8)
        a = simplex_membership(simplex, X)
        b = membership(simplex.pencil, X)
        if abs(b.min_eigenvalue) > 1e-10:
            assert a.member == b.member


def test_projected_combinations_stay_in_projected_simplex():
    # Matrix convex combinations of vertex scalars, projected to the first
    # coordinate, must pass the projected-interval membership exactly.
    rng = np.random.default_rng(27)
    vertices = np.array([[-2.0, 1.0], [1.0, 1.0], [1.0, -2.0]])
    interval = FreeSimplex(np.array([[-2.0], [1.0]]))
    for _ in range(50):
        n = int(rng.integers(1, 4))
        Vs = [rng.normal(size=(1, n)) + 1j * rng.normal(size=(1, n)) for _ in range(3)]
        gram = sum(V.conj().T @ V for V in Vs)
        w, U = np.linalg.eigh(gram)
        half_inv = U @ np.diag(1.0 / np.sqrt(w)) @ U.conj().T
        Vs = [V @ half_inv for V in Vs]
        X = np.zeros((2, n, n), dtype=complex)
        for vertex, V in zip(vertices, Vs):
            X += vertex[:, None, None] * (V.conj().T @ V)[None]
        projected = HermitianTuple(X[:1])
        assert simplex_membership(interval, projected).member


def test_hull_membership_remark_point():
    y = np.array([0.0, -2.0 / 3.0])
    hull = level1_hull_membership(triangle_edge_generators(), y, grid=360, seed=0)
    assert hull.member
    for gen in triangle_edge_generators():
        single = level1_hull_membership([gen], y, grid=360, seed=0)
        assert not single.member
        assert single.separating_direction is not None


def test_hull_membership_vertex_and_outside():
    gens = triangle_edge_generators()
    assert level1_hull_membership(gens, np.array([1.0, 1.0]), seed=0).member
    verdict = level1_hull_membership(gens, np.array([2.0, 2.0]), seed=0)
    assert not verdict.member
    c = verdict.separating_direction
    assert np.abs(c - np.array([1.0, 1.0]) / np.sqrt(2.0)).max() < 1e-3


def test_hull_membership_triangle_generators_cover_simplex():
    # The three small triangles also generate the full simplex; the point
    # (0, -2/3) lies in their union's hull (in fact inside the third one).
    y = np.array([0.0, -2.0 / 3.0])
    hull = level1_hull_membership(triangle_cover_generators(), y, grid=360, seed=0)
    assert hull.member


def test_each_small_triangle_misses_part_of_the_example_tuple():
    # The example tuple belongs to none of the three small triangles'
    # matrix convex hulls: each one excludes a first-level compression of
    # it ((0, -2/3) sits outside the first two, (1, 1/2) outside the third).
    witnesses = (np.array([0.0, -2.0 / 3.0]), np.array([1.0, 0.5]))
    for gen in triangle_cover_generators():
        excluded = [w for w in witnesses
                    if not level1_hull_membership([gen], w, grid=360, seed=0).member]
        assert excluded


def test_hull_membership_dimension_cap():
    with pytest.raises(UnsupportedCaseError):
        level1_hull_membership([spin_tuple(4)], np.zeros(4))


def test_hull_membership_interval():
    gen = segment_generator([[-1.0], [2.0]])
    assert level1_hull_membership([gen], np.array([1.5]), seed=0).member
    assert not level1_hull_membership([gen], np.array([2.5]), seed=0).member


def test_projection_witness_compression_monotone():
    # If (X, Y) certifies projection membership then compressions (V*XV,
    # V*YV) are certified by the compressed witness.
    rng = np.random.default_rng(28)
    drop = DropDescriptor(Pencil(spin_tuple(4)), 3)
    X = random_spin_member(rng, 3, 3, scale=0.9)
    result = witness_search(drop, X, restarts=2, seed=0)
    assert result.found
    full = np.concatenate([X.mats, result.witness.mats], axis=0)
    for _ in range(10):
        raw = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
        Q, _ = np.linalg.qr(raw)
        compressed = np.einsum("pa,iab,bq->ipq", Q.conj().T, full, Q)
        assert membership(spin_tuple(4), HermitianTuple(compressed)).member


def test_projection_extreme_harness_spin_cases():
    report = projection_extreme_harness(Pencil(spin_tuple(3)), 2, samples=12, seed=0)
    assert report.oracle == "spin" and report.all_free
    report = projection_extreme_harness(Pencil(spin_tuple(4)), 3, samples=8, seed=0)
    assert report.all_free


def test_projection_extreme_harness_simplex_interval():
    report = projection_extreme_harness(Pencil(triangle_example_pencil()), 1, seed=0)
    assert report.oracle == "interval" and report.all_free
    endpoints = sorted(float(s.point[0]) for s in report.samples)
    assert abs(endpoints[0] + 2.0) < 1e-9 and abs(endpoints[1] - 1.0) < 1e-9


def test_projection_extreme_harness_unregistered():
    with pytest.raises(UnsupportedCaseError):
        projection_extreme_harness(Pencil(pauli_tuple()), 2)


def test_drop_descriptor_validation():
    with pytest.raises(ParameterError):
        DropDescriptor(Pencil(spin_tuple(3)), 0)
    with pytest.raises(ParameterError):
        DropDescriptor(Pencil(spin_tuple(3)), 4)
