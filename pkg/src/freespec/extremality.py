"""Extreme-point certification for free spectrahedra.

A boundary point is classified by solving two homogeneous linear systems
built from a kernel basis K of the pencil value:

* the Hermitian direction system, whose nonzero solutions are Hermitian
  perturbation directions that stay inside the set in both signs; an empty
  solution space certifies a Euclidean (classical) extreme point;
* the one-column dilation system, whose nonzero solutions are column
  tuples that extend the point by one row and column without leaving the
  set; an empty solution space certifies an Arveson extreme point.

A point is a free extreme point exactly when it passes the Arveson test
and is irreducible (commutant dimension one).
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DimensionError, NumericalError, PreconditionError
from .linalg import (DEFAULT_TOL, HermitianTuple, KernelBasis, hermitian_basis,
                     min_eigenvalue, nullspace, real_nullspace, realify)
from .pencil import (Pencil, coefficient_mats, ensure_bounded_flag, membership,
                     pencil_value, point_mats)


class Verdict(str, Enum):
    NON_MEMBER = "non-member"
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EUCLIDEAN = "euclidean"
    ARVESON = "arveson"
    FREE = "free"


_STRENGTH = {Verdict.NON_MEMBER: -1, Verdict.INTERIOR: 0, Verdict.BOUNDARY: 1,
             Verdict.EUCLIDEAN: 2, Verdict.ARVESON: 3, Verdict.FREE: 4}


def verdict_at_least(verdict, floor):
    return _STRENGTH[verdict] >= _STRENGTH[floor]


@dataclass(frozen=True)
class Witness:
    """Evidence for why the next-stronger verdict fails.

    ``kind`` is ``"hermitian"`` for a two-sided perturbation direction
    (tuple of n x n Hermitian matrices; the point stays inside the set when
    moved by ``+/- alpha`` times it), ``"column"`` for a one-column
    dilation direction (g column vectors stacked as a (g, n) array), or
    ``"commutant"`` for a non-scalar Hermitian matrix commuting with every
    coordinate (exhibiting reducibility of an Arveson extreme point).
    """

    kind: str
    direction: np.ndarray
    alpha: float | None = None

    def __post_init__(self):
        self.direction.setflags(write=False)


@dataclass(frozen=True)
class SystemReport:
    """Nullity of a certification system plus audit data.

    ``basis`` stacks the solutions along the first axis, ordered with the
    numerically most-null direction first.
    """

    nullity: int
    smallest_retained: float
    basis: np.ndarray


@dataclass(frozen=True)
class ExtremeCertificate:
    verdict: Verdict
    min_eigenvalue: float
    kernel_dim: int | None
    commutant_dim: int
    beta_nullity_column: int | None
    beta_nullity_hermitian: int | None
    smallest_nonzero_singular: float | None
    witness: Witness | None
    bounded_flag: bool | None
    residuals: dict = field(default_factory=dict)
    caveats: tuple = ()


def _commutant_basis(X, tol):
    """Complex basis of {C : C X_i = X_i C}, as an (n, n, dim) stack."""
    Xm = point_mats(X)
    g, n, _ = Xm.shape
    eye = np.eye(n)
    # Column-major vectorization: vec(C Xi - Xi C) = (Xi^T kron I - I kron Xi) vec(C).
    rows = [np.kron(Xm[i].T, eye) - np.kron(eye, Xm[i]) for i in range(g)]
    system = np.vstack(rows)
    basis, _ = real_nullspace(realify(system), tol)
    dim = basis.shape[1] // 2
    mats = np.zeros((n, n, dim), dtype=complex)
    for k in range(dim):
        vec = basis[:n * n, k] + 1j * basis[n * n:, k]
        mats[:, :, k] = vec.reshape(n, n, order="F")
    return mats


def commutant_dimension(X, tol=DEFAULT_TOL):
    """Complex dimension of {C : C X_i = X_i C for every i}.

    The tuple is irreducible exactly when the result is 1 (only multiples
    of the identity commute with every entry).
    """
    return _commutant_basis(X, tol).shape[2]


def nonscalar_commutant_element(X, tol=DEFAULT_TOL):
    """A unit-norm Hermitian commutant element orthogonal to the identity,
    or None when the tuple is irreducible.  Such an element exhibits a
    reducing decomposition."""
    mats = _commutant_basis(X, tol)
    n = mats.shape[0]
    best = None
    best_norm = 0.0
    for k in range(mats.shape[2]):
        C = mats[:, :, k]
        C = C - (np.trace(C) / n) * np.eye(n)
        for part in (0.5 * (C + C.conj().T), 0.5j * (C - C.conj().T)):
            norm = float(np.linalg.norm(part))
            if norm > best_norm:
                best, best_norm = part / norm, norm
    if best is None or best_norm < 1e-8:
        return None
    return best


def _column_system_matrix(Am, Xm, K):
    """Matrix of the one-column dilation system.

    Unknowns are the conjugated entries of the column tuple beta, ordered
    (coordinate, vector index); equations are indexed by (kernel column,
    block row of the coefficient space).
    """
    d = Am.shape[1]
    n = Xm.shape[1]
    g = Am.shape[0]
    k = K.shape[1]
    M = np.zeros((d * k, n * g), dtype=complex)
    for c in range(k):
        kappa = K[:, c].reshape(d, n)
        for i in range(g):
            M[c * d:(c + 1) * d, i * n:(i + 1) * n] = Am[i] @ kappa
    return M


def column_dilation_system(A, X, K, tol=DEFAULT_TOL):
    """Solve the one-column dilation system at a boundary point.

    Nullity zero certifies an Arveson extreme point (given membership and a
    bounded pencil).  The returned basis stacks solutions as (g, n) column
    tuples; the smallest retained singular value of the realified system
    makes borderline rank calls auditable.
    """
    Am = coefficient_mats(A)
    Xm = point_mats(X)
    Km = K.matrix if isinstance(K, KernelBasis) else np.asarray(K)
    if Km.shape[1] == 0:
        raise PreconditionError("interior point: the pencil value has no kernel")
    if Km.shape[0] != Am.shape[1] * Xm.shape[1]:
        raise DimensionError("kernel basis size does not match the pencil value")
    M = _column_system_matrix(Am, Xm, Km)
    basis_real, smallest = real_nullspace(realify(M), tol)
    nullity = basis_real.shape[1] // 2
    n, g = Xm.shape[1], Am.shape[0]
    columns = []
    # real_nullspace orders basis columns by decreasing singular value;
    # reverse so the most-null direction comes first.
    for idx in reversed(range(basis_real.shape[1])):
        if len(columns) == nullity:
            break
        vec = basis_real[:n * g, idx] + 1j * basis_real[n * g:, idx]
        beta = vec.conj().reshape(g, n)  # unknowns were the conjugated entries
        norm = np.linalg.norm(beta)
        if norm < 1e-14:
            continue
        columns.append(beta / norm)
    basis = np.array(columns) if columns else np.zeros((0, g, n), complex)
    return SystemReport(nullity, smallest, basis)


def hermitian_direction_system(A, X, K, tol=DEFAULT_TOL):
    """Solve for Hermitian tuples whose linear part kills the pencil kernel.

    Nullity zero certifies a Euclidean extreme point.  Solutions are
    two-sided perturbation directions; the nullity is a real dimension
    (the Hermitian constraint is only real-linear).
    """
    Am = coefficient_mats(A)
    Xm = point_mats(X)
    Km = K.matrix if isinstance(K, KernelBasis) else np.asarray(K)
    if Km.shape[1] == 0:
        raise PreconditionError("interior point: the pencil value has no kernel")
    g = Am.shape[0]
    n = Xm.shape[1]
    HB = hermitian_basis(n)
    # Column (i, s): vec of (A_i kron H_s) K split into real and imaginary parts.
    cols = np.empty((2 * Km.size, g * len(HB)))
    idx = 0
    for i in range(g):
        for H in HB:
            v = (np.kron(Am[i], H) @ Km).ravel()
            cols[:Km.size, idx] = v.real
            cols[Km.size:, idx] = v.imag
            idx += 1
    basis_real, smallest = real_nullspace(cols, tol)
    nullity = basis_real.shape[1]
    solutions = []
    for j in reversed(range(nullity)):
        coeffs = basis_real[:, j].reshape(g, len(HB))
        beta = np.einsum("is,sab->iab", coeffs, HB)
        beta = 0.5 * (beta + beta.conj().transpose(0, 2, 1))
        solutions.append(beta / np.linalg.norm(beta))
    basis = np.array(solutions) if solutions else np.zeros((0, g, n, n), complex)
    return SystemReport(nullity, smallest, basis)


def perturbation_range(A, X, beta, tol=DEFAULT_TOL, cap=1e6):
    """Largest alpha with both ``X + alpha beta`` and ``X - alpha beta``
    members, found by doubling plus bisection."""
    Xm = point_mats(X)
    beta = np.asarray(beta, dtype=complex)

    def feasible(alpha):
        for sign in (+1.0, -1.0):
            shifted = HermitianTuple(Xm + sign * alpha * beta)
            if not membership(A, shifted, tol).member:
                return False
        return True

    lo, hi = 0.0, 1e-3
    while feasible(hi) and hi < cap:
        lo, hi = hi, 2.0 * hi
    if hi >= cap:
        return cap
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def classify(A, X, tol=DEFAULT_TOL):
    """Full extreme-point certificate for a point of a free spectrahedron.

    Runs membership, kernel extraction, the Hermitian direction system, the
    one-column dilation system, and the commutant computation, and reports
    the strongest verdict that holds along with every residual.  Verdicts
    are cumulative: free implies Arveson implies Euclidean implies
    boundary.
    """
    pencil = A if isinstance(A, Pencil) else Pencil(A)
    verdict = membership(pencil, X, tol)
    commutant = commutant_dimension(X, tol)
    bounded = pencil.bounded
    caveats = ()
    if not verdict.member:
        return ExtremeCertificate(Verdict.NON_MEMBER, verdict.min_eigenvalue, None,
                                  commutant, None, None, None, None, bounded)
    if not verdict.boundary:
        return ExtremeCertificate(Verdict.INTERIOR, verdict.min_eigenvalue, None,
                                  commutant, None, None, None, None, bounded)
    L = pencil_value(pencil, X)
    K = nullspace(L, tol)
    if K.dim == 0:
        # psd_tol flagged the boundary band but rank_tol saw no kernel.
        return ExtremeCertificate(Verdict.INTERIOR, verdict.min_eigenvalue, 0,
                                  commutant, None, None, None, None, bounded,
                                  caveats=("boundary band hit but kernel empty at rank_tol",))
    residuals = {"kernel_residual": float(np.abs(L @ K.matrix).max())}
    herm = hermitian_direction_system(pencil, X, K, tol)
    col = column_dilation_system(pencil, X, K, tol)
    residuals["hermitian_smallest_retained"] = herm.smallest_retained
    residuals["column_smallest_retained"] = col.smallest_retained
    if bounded is None:
        caveats += ("pencil boundedness flag unset: Arveson/free verdicts rely on "
                    "a bounded free spectrahedron",)
    elif bounded is False:
        caveats += ("pencil flagged unbounded: Arveson/free verdicts unreliable",)
    if herm.nullity > 0:
        beta = herm.basis[0]
        alpha = perturbation_range(pencil, X, beta, tol)
        witness = Witness("hermitian", beta, alpha)
        return ExtremeCertificate(Verdict.BOUNDARY, verdict.min_eigenvalue, K.dim,
                                  commutant, col.nullity, herm.nullity,
                                  col.smallest_retained, witness, bounded,
                                  residuals, caveats)
    if col.nullity > 0:
        witness = Witness("column", col.basis[0])
        return ExtremeCertificate(Verdict.EUCLIDEAN, verdict.min_eigenvalue, K.dim,
                                  commutant, col.nullity, herm.nullity,
                                  col.smallest_retained, witness, bounded,
                                  residuals, caveats)
    if commutant == 1:
        return ExtremeCertificate(Verdict.FREE, verdict.min_eigenvalue, K.dim,
                                  commutant, col.nullity, herm.nullity,
                                  col.smallest_retained, None, bounded,
                                  residuals, caveats)
    # Arveson but reducible: ship a non-scalar commutant element as the
    # witness that the point fails irreducibility.
    reducer = nonscalar_commutant_element(X, tol)
    witness = None if reducer is None else Witness("commutant", reducer)
    return ExtremeCertificate(Verdict.ARVESON, verdict.min_eigenvalue, K.dim,
                              commutant, col.nullity, herm.nullity,
                              col.smallest_retained, witness, bounded,
                              residuals, caveats)


@dataclass(frozen=True)
class DilationStep:
    alpha: float
    kernel_before: int
    kernel_after: int


@dataclass(frozen=True)
class DilationResult:
    success: bool
    point: HermitianTuple
    steps: tuple
    failure_step: int | None = None
    failure_reason: str | None = None

    @property
    def size(self):
        return self.point.n


def _dilated(Xm, beta, alpha):
    g, n = beta.shape
    out = np.zeros((g, n + 1, n + 1), dtype=complex)
    for i in range(g):
        out[i, :n, :n] = Xm[i]
        out[i, :n, n] = alpha * beta[i]
        out[i, n, :n] = alpha * beta[i].conj()
    return out


def arveson_dilate(A, X, max_steps=64, tol=DEFAULT_TOL):
    """Greedily dilate a member up to an Arveson extreme point.

    Each step appends one row and column: the direction is a column tuple
    solving the dilation system (the most-null singular direction, ties
    broken by first index), the new diagonal entries are zero, and the
    scale is maximized by bisection subject to membership, which forces
    the pencil kernel to grow at every accepted step.  The input point is
    the leading corner of the output exactly, by construction.
    """
    pencil = A if isinstance(A, Pencil) else Pencil(A)
    if not membership(pencil, X, tol).member:
        raise PreconditionError("dilation requires a member of the free spectrahedron")
    if pencil.bounded is None:
        ensure_bounded_flag(pencil, tol)
    if pencil.bounded is False:
        raise PreconditionError("pencil failed the level-1 boundedness heuristic")
    Am = coefficient_mats(pencil)
    g = Am.shape[0]
    Xm = point_mats(X).copy()
    steps = []
    for step in range(max_steps):
        n = Xm.shape[1]
        L = pencil_value(pencil, HermitianTuple(Xm))
        K = nullspace(L, tol)
        if K.dim == 0:
            candidates = np.zeros((1, g, n), dtype=complex)
            candidates[0, 0, 0] = 1.0  # interior point: any column works
        else:
            report = column_dilation_system(pencil, Xm, K, tol)
            if report.nullity == 0:
                return DilationResult(True, HermitianTuple(Xm), tuple(steps))
            candidates = report.basis
        accepted = False
        for beta in candidates:
            alpha = _max_dilation_scale(pencil, Xm, beta, tol)
            if alpha <= 1e-10:
                continue
            Xn = _dilated(Xm, beta, alpha)
            Kn = nullspace(pencil_value(pencil, HermitianTuple(Xn)), tol)
            if Kn.dim <= K.dim:
                continue
            steps.append(DilationStep(alpha, K.dim, Kn.dim))
            Xm = Xn
            accepted = True
            break
        if not accepted:
            return DilationResult(False, HermitianTuple(Xm), tuple(steps), step,
                                  "no admissible one-column dilation found")
    # Step cap exhausted: succeed only if the endpoint already certifies.
    L = pencil_value(pencil, HermitianTuple(Xm))
    K = nullspace(L, tol)
    if K.dim > 0 and column_dilation_system(pencil, Xm, K, tol).nullity == 0:
        return DilationResult(True, HermitianTuple(Xm), tuple(steps))
    return DilationResult(False, HermitianTuple(Xm), tuple(steps), max_steps,
                          "step cap reached before the dilation system closed")


def _max_dilation_scale(pencil, Xm, beta, tol, cap=1e6):
    def feasible(alpha):
        value = pencil_value(pencil, HermitianTuple(_dilated(Xm, beta, alpha)))
        return min_eigenvalue(value, tol) >= -tol.psd_tol

    lo, hi = 0.0, 1.0
    while feasible(hi) and hi < cap:
        lo, hi = hi, 2.0 * hi
    if hi >= cap:
        raise NumericalError("dilation scale grew without bound; pencil looks unbounded")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo
