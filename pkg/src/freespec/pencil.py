"""Monic linear pencils, their evaluation, and free spectrahedron membership.

A coefficient tuple ``A`` of Hermitian d x d matrices determines the pencil
value ``I - sum_i A_i (x) X_i`` at a Hermitian tuple ``X`` (``(x)`` denotes
the Kronecker product).  The free spectrahedron is the set of tuples, of
every matrix size, at which the pencil value is positive semidefinite.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .linalg import (DEFAULT_TOL, HermitianTuple, batched_max_eigenvalues,
                     hermitian_eigen, nullspace)
from .sphere import ascend_on_sphere, unit_sphere_grid


class Pencil:
    """A coefficient tuple interpreted as a monic linear pencil.

    ``bounded`` caches the outcome of the level-1 boundedness heuristic;
    it starts unset and is only ever set from an actual heuristic run,
    never assumed.
    """

    __slots__ = ("coefficients", "bounded")

    def __init__(self, coefficients, hermitian_tol=DEFAULT_TOL.hermitian_tol):
        if isinstance(coefficients, Pencil):
            self.coefficients = coefficients.coefficients
            self.bounded = coefficients.bounded
            return
        if not isinstance(coefficients, HermitianTuple):
            coefficients = HermitianTuple(coefficients, hermitian_tol)
        self.coefficients = coefficients
        self.bounded = None

    @property
    def d(self):
        return self.coefficients.n

    @property
    def g(self):
        return self.coefficients.g

    def __repr__(self):
        return f"Pencil(d={self.d}, g={self.g}, bounded={self.bounded})"


@dataclass(frozen=True)
class MembershipVerdict:
    """Outcome of a pencil membership test.

    ``member`` iff the minimum eigenvalue of the pencil value is at least
    ``-psd_tol``; ``boundary`` additionally requires it to be at most
    ``psd_tol`` (so boundary implies member).  ``kernel_dim`` is computed
    only for boundary points.
    """

    member: bool
    min_eigenvalue: float
    boundary: bool
    kernel_dim: int | None = None


@dataclass(frozen=True)
class BoundednessReport:
    """Outcome of the level-1 boundedness heuristic.

    A ``False`` verdict is certified by ``witness_direction`` (a ray that
    stays inside the first level).  A ``True`` verdict only means that all
    sampled and coordinate directions had finite support and is recorded
    as heuristic.
    """

    bounded: bool
    supports: np.ndarray
    directions: np.ndarray
    witness_direction: np.ndarray | None
    heuristic: bool = True


def coefficient_mats(A):
    """(g, d, d) array from a Pencil, HermitianTuple, or array-like."""
    if isinstance(A, Pencil):
        return A.coefficients.mats
    if isinstance(A, HermitianTuple):
        return A.mats
    return HermitianTuple(A).mats


def point_mats(X):
    if isinstance(X, HermitianTuple):
        return X.mats
    return HermitianTuple(X).mats


def linear_part(A, X):
    """Strictly linear part ``sum_i A_i (x) X_i`` of the pencil at X."""
    Am = coefficient_mats(A)
    Xm = point_mats(X)
    if Am.shape[0] != Xm.shape[0]:
        raise DimensionError(
            f"coefficient tuple has length {Am.shape[0]} but point has length {Xm.shape[0]}")
    d, n = Am.shape[1], Xm.shape[1]
    out = np.einsum("iab,icd->acbd", Am, Xm).reshape(d * n, d * n)
    return out


def pencil_value(A, X):
    """Monic pencil value ``I - sum_i A_i (x) X_i``."""
    lam = linear_part(A, X)
    return np.eye(lam.shape[0]) - lam


def batched_linear_part(Am, Xb):
    """Linear part for a stack of points: (N, g, n, n) -> (N, d*n, d*n)."""
    N, _, n, _ = Xb.shape
    d = Am.shape[1]
    return np.einsum("iab,Nicd->Nacbd", Am, Xb).reshape(N, d * n, d * n)


def membership(A, X, tol=DEFAULT_TOL):
    """Free spectrahedron membership of X with boundary detection.

    The kernel dimension of the pencil value is reported for boundary
    points only.
    """
    L = pencil_value(A, X)
    w, _ = hermitian_eigen(L, tol)
    min_eig = float(w[0])
    member = min_eig >= -tol.psd_tol
    boundary = member and min_eig <= tol.psd_tol
    kernel_dim = None
    if boundary:
        kernel_dim = nullspace(L, tol).dim
    return MembershipVerdict(member, min_eig, boundary, kernel_dim)


def boundary_scale(A, X, tol=DEFAULT_TOL):
    """Largest s >= 0 with ``s X`` in the free spectrahedron of A.

    Returns ``inf`` when the ray never leaves the set (the direction has no
    positive part in the pencil).
    """
    lam = linear_part(A, X)
    w, _ = hermitian_eigen(lam, tol)
    top = float(w[-1])
    if top <= tol.psd_tol:
        return np.inf
    return 1.0 / top


def level1_bounded_heuristic(A, directions=None, seed=0, tol=DEFAULT_TOL,
                             refine_steps=20):
    """Search for unbounded rays of the first level of the free spectrahedron.

    Samples unit directions (all +/- coordinate axes plus antipodally
    paired Gaussian draws) and additionally runs a descent on the largest
    eigenvalue of the linear part to hunt for a certified unbounded
    direction, i.e. one whose linear part is negative semidefinite up to
    ``psd_tol``.  Finding such a direction certifies unboundedness; not
    finding one is only heuristic evidence of boundedness.
    """
    Am = coefficient_mats(A)
    g = Am.shape[0]
    if directions is None:
        directions = max(4 * g, 2 * g)
    if directions < 2 * g:
        raise ParameterError(f"need at least {2 * g} directions, got {directions}")
    rng = np.random.default_rng(seed)
    dirs = unit_sphere_grid(rng, g, directions)
    lams = batched_max_eigenvalues(np.einsum("ki,iab->kab", dirs, Am))
    supports = np.where(lams > tol.psd_tol, 1.0 / np.maximum(lams, tol.psd_tol), np.inf)
    worst = int(np.argmin(lams))
    if lams[worst] <= tol.psd_tol:
        return BoundednessReport(False, supports, dirs, dirs[worst])

    def neg_top_eig(c):
        lam = np.einsum("i,iab->ab", c, Am)
        w, V = np.linalg.eigh(lam)
        top = w[-1]
        mult = np.sum(w >= top - 1e-8 * max(abs(top), 1.0))
        vecs = V[:, -mult:]
        grad = np.array([np.mean([np.real(v.conj() @ Am[i] @ v) for v in vecs.T])
                         for i in range(g)])
        return -top, -grad

    value, c = ascend_on_sphere(neg_top_eig, dirs[worst], refine_steps)
    if -value <= tol.psd_tol:
        return BoundednessReport(False, supports, dirs, c)
    return BoundednessReport(True, supports, dirs, None)


def ensure_bounded_flag(pencil, tol=DEFAULT_TOL, seed=0):
    """Run the boundedness heuristic once and cache the outcome on the pencil."""
    if not isinstance(pencil, Pencil):
        pencil = Pencil(pencil)
    if pencil.bounded is None:
        report = level1_bounded_heuristic(pencil, seed=seed, tol=tol)
        pencil.bounded = report.bounded
    return pencil.bounded
