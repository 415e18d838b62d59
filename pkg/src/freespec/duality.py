"""Free polar duality for full-span coefficient tuples via Choi matrices.

When a Hermitian d x d tuple A has length d*d - 1 and, together with the
identity, spans the full matrix algebra, the unital linear map sending A to
a candidate tuple X is unique, and complete positivity of that map (hence
membership of X in the matrix range of A) is decided by positive
semidefiniteness of one block matrix.  Normalizing that block matrix yields
an explicit coefficient tuple B whose free spectrahedron is the free polar
dual of the one cut out by A.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConstructionError, DimensionError, ParameterError, PreconditionError
from .linalg import (DEFAULT_TOL, HermitianTuple, hermitian_eigen, nullspace,
                     realify)
from .pencil import (Pencil, batched_linear_part, coefficient_mats,
                     ensure_bounded_flag, linear_part, membership, point_mats)


class FullSpanBasis:
    """A Hermitian tuple that, with the identity, spans the matrix algebra.

    Stores the expansion tensor of the matrix units in the basis
    ``{I, A_1, ..., A_{d*d-1}}`` as the stack ``G`` of coefficient matrices:
    ``G[k][i, j]`` is the coefficient of the k-th basis element in the
    expansion of the (i, j) matrix unit, so the block matrix of the unique
    unital map sending A to X is ``G[0] (x) I + sum_k G[k] (x) X_k``.
    """

    __slots__ = ("tuple", "G")

    def __init__(self, A, tol=DEFAULT_TOL):
        A = A if isinstance(A, HermitianTuple) else HermitianTuple(A)
        d = A.n
        if A.g != d * d - 1:
            raise DimensionError(
                f"full span needs length {d * d - 1} for size {d}, got {A.g}")
        basis = np.concatenate([np.eye(d, dtype=complex)[None], A.mats], axis=0)
        B = basis.reshape(d * d, d * d).T  # columns = vectorized basis elements
        Breal = realify(B)
        rank = np.linalg.matrix_rank(Breal, tol=tol.rank_tol * np.linalg.norm(Breal, 2))
        if rank < 2 * d * d:
            raise ConstructionError(
                "identity plus tuple is linearly dependent over the reals; "
                "the expansion of the matrix units is not unique")
        # One realified solve per matrix unit, batched as a single lstsq.
        targets = np.eye(d * d, dtype=complex)  # column (i*d + j) = vec of E_ij
        rhs = np.vstack([targets.real, targets.imag])
        coef_real, *_ = np.linalg.lstsq(Breal, rhs, rcond=None)
        coef = coef_real[:d * d] + 1j * coef_real[d * d:]  # (d*d, d*d)
        G = np.zeros((d * d, d, d), dtype=complex)
        for k in range(d * d):
            G[k] = coef[k].reshape(d, d)
        self.tuple = A
        G.setflags(write=False)
        self.G = G
        worst = self.reconstruction_residual()
        if worst > 1e-10:
            raise ConstructionError(
                f"matrix-unit reconstruction residual {worst:.3e} exceeds 1e-10")

    @property
    def d(self):
        return self.tuple.n

    @property
    def g(self):
        return self.tuple.g

    def reconstruction_residual(self):
        """Largest entrywise error when the expansion tensor rebuilds the
        matrix units from ``{I, A_k}``."""
        d = self.d
        basis = np.concatenate([np.eye(d, dtype=complex)[None], self.tuple.mats], axis=0)
        worst = 0.0
        for i in range(d):
            for j in range(d):
                unit = np.zeros((d, d), dtype=complex)
                unit[i, j] = 1.0
                built = np.einsum("k,kab->ab", self.G[:, i, j], basis)
                worst = max(worst, float(np.abs(unit - built).max()))
        return worst


@dataclass(frozen=True)
class ChoiMatrix:
    """Block matrix of the unique unital map sending a full-span tuple to X."""

    matrix: np.ndarray
    point: HermitianTuple

    def __post_init__(self):
        self.matrix.setflags(write=False)


def choi_matrix(basis, X):
    """Assemble ``G0 (x) I + sum_k Gk (x) X_k`` for the point X."""
    Xm = point_mats(X)
    d = basis.d
    if Xm.shape[0] != basis.g:
        raise DimensionError(
            f"point has length {Xm.shape[0]}, full-span basis needs {basis.g}")
    n = Xm.shape[1]
    M = np.kron(basis.G[0], np.eye(n, dtype=complex))
    M = M + np.einsum("kab,kcd->acbd", basis.G[1:], Xm).reshape(d * n, d * n)
    M = 0.5 * (M + M.conj().T)
    return ChoiMatrix(M, X if isinstance(X, HermitianTuple) else HermitianTuple(Xm))


def batched_choi_min_eigenvalues(basis, Xb):
    """Minimum Choi eigenvalue for a stack of points of shape (N, g, n, n)."""
    N, _, n, _ = Xb.shape
    d = basis.d
    M = batched_linear_part(basis.G[1:], Xb)
    M = M + np.kron(basis.G[0], np.eye(n, dtype=complex))[None]
    return np.linalg.eigvalsh(M)[:, 0]


def choi_membership(basis, X, tol=DEFAULT_TOL):
    """Membership of X in the matrix range of the full-span tuple.

    The unique unital map sending the basis tuple to X is completely
    positive exactly when the Choi block matrix is positive semidefinite.
    """
    from .pencil import MembershipVerdict

    M = choi_matrix(basis, X).matrix
    w, _ = hermitian_eigen(M, tol)
    min_eig = float(w[0])
    member = min_eig >= -tol.psd_tol
    boundary = member and min_eig <= tol.psd_tol
    kernel_dim = nullspace(M, tol).dim if boundary else None
    return MembershipVerdict(member, min_eig, boundary, kernel_dim)


def dual_pencil(basis, tol=DEFAULT_TOL):
    """Coefficient tuple B with the free spectrahedron of B equal to the
    free polar dual of the one cut out by the basis tuple.

    Requires the identity-coefficient block G0 to be strictly positive
    definite; then ``B_k = -G0^(-1/2) Gk G0^(-1/2)`` turns positivity of
    the Choi block matrix into the monic pencil inequality for B.
    """
    w, V = hermitian_eigen(basis.G[0], tol)
    if w[0] <= tol.psd_tol:
        raise ConstructionError(
            f"identity block of the expansion is not positive definite "
            f"(min eigenvalue {w[0]:.3e})")
    inv_half = V @ np.diag(1.0 / np.sqrt(w)) @ V.conj().T
    B = np.array([-inv_half @ Gk @ inv_half for Gk in basis.G[1:]])
    return HermitianTuple(0.5 * (B + B.conj().transpose(0, 2, 1)))


@dataclass(frozen=True)
class RefutationWitness:
    """A set element whose pairing with the candidate point exceeds one."""

    sample_index: int
    sample: HermitianTuple
    max_eigenvalue: float


def polar_refute(samples, X, tol=DEFAULT_TOL):
    """One-sided refutation of polar-dual membership.

    Returns the first sample Y with the largest eigenvalue of
    ``sum_i Y_i (x) X_i`` exceeding ``1 + psd_tol``, or None.  A None
    result is evidence only, never a membership proof.
    """
    Xm = point_mats(X)
    for idx, Y in enumerate(samples):
        Ym = point_mats(Y)
        if Ym.shape[0] != Xm.shape[0]:
            raise DimensionError(
                f"sample {idx} has length {Ym.shape[0]}, point has {Xm.shape[0]}")
        pairing = linear_part(HermitianTuple(Ym), HermitianTuple(Xm))
        w, _ = hermitian_eigen(pairing, tol)
        if w[-1] > 1.0 + tol.psd_tol:
            return RefutationWitness(idx, HermitianTuple(Ym), float(w[-1]))
    return None


@dataclass(frozen=True)
class SelfDualityReport:
    """Outcome of the level-1 self-duality refutation search.

    ``witness`` is a level-1 point lying in exactly one of the primal set
    and its polar; ``kind`` records which side, and ``certificate`` the
    numbers backing both claims.  When the tuple is full-span both claims
    are exact (via the dual pencil); otherwise only the pairing witness
    route is available and failure is reported as inconclusive.
    """

    conclusive: bool
    witness: np.ndarray | None
    kind: str | None
    certificate: dict


def non_selfdual_check(A, tol=DEFAULT_TOL, directions=512, seed=0):
    """Search for a level-1 witness that a free spectrahedron is not self-dual.

    Preconditions pin the regime where the refutation is guaranteed to
    exist: coefficient size d >= 3 and tuple length between d*d - d + 2
    and d*d - 1, with the level-1 boundedness heuristic passing.
    """
    pencil = A if isinstance(A, Pencil) else Pencil(A)
    d = pencil.d
    g = pencil.g
    if d < 3:
        raise ParameterError(f"self-duality refutation needs size d >= 3, got {d}")
    if not (d * d - d + 2 <= g <= d * d - 1):
        raise ParameterError(
            f"tuple length {g} outside the covered range "
            f"[{d * d - d + 2}, {d * d - 1}] for size {d}")
    if pencil.bounded is None:
        ensure_bounded_flag(pencil, tol, seed=seed)
    if not pencil.bounded:
        raise PreconditionError("pencil failed the level-1 boundedness heuristic")
    rng = np.random.default_rng(seed)
    Am = coefficient_mats(pencil)

    if g == d * d - 1:
        basis = FullSpanBasis(pencil.coefficients, tol)
        Bm = dual_pencil(basis, tol).mats
        for trial in range(directions):
            c = rng.normal(size=g)
            c /= np.linalg.norm(c)
            top_a = float(np.linalg.eigvalsh(np.einsum("i,iab->ab", c, Am))[-1])
            top_b = float(np.linalg.eigvalsh(np.einsum("i,iab->ab", c, Bm))[-1])
            if top_a <= tol.psd_tol or top_b <= tol.psd_tol:
                continue
            r_primal, r_dual = 1.0 / top_a, 1.0 / top_b
            gap = abs(r_primal - r_dual)
            if gap > 1e-6 * (r_primal + r_dual):
                x = c * 0.5 * (r_primal + r_dual)
                kind = ("in_primal_not_dual" if r_primal > r_dual
                        else "in_dual_not_primal")
                cert = {"direction": c, "radius_primal": r_primal,
                        "radius_dual": r_dual, "trial": trial}
                return SelfDualityReport(True, x, kind, cert)
        return SelfDualityReport(False, None, None, {"trials": directions})

    # Without full span the polar has no exact oracle; look for a pair of
    # level-1 members whose pairing exceeds one, which certifies that the
    # first level is not contained in its own polar.
    boundary = []
    for _ in range(directions):
        c = rng.normal(size=g)
        c /= np.linalg.norm(c)
        top = float(np.linalg.eigvalsh(np.einsum("i,iab->ab", c, Am))[-1])
        if top > tol.psd_tol:
            boundary.append(c / top)
    best = None
    for i, x in enumerate(boundary):
        for y in boundary[i:]:
            val = float(np.dot(x, y))
            if best is None or val > best[0]:
                best = (val, x, y)
    if best is not None and best[0] > 1.0 + tol.psd_tol:
        cert = {"pair_value": best[0], "partner": best[2]}
        return SelfDualityReport(True, best[1], "in_primal_not_dual", cert)
    return SelfDualityReport(False, None, None,
                             {"trials": directions,
                              "best_pair_value": best[0] if best else None})


def gell_mann_tuple(d):
    """Standard traceless Hermitian basis of the d x d matrices
    (a full-span tuple of length d*d - 1)."""
    if d < 2:
        raise ParameterError(f"need size d >= 2, got {d}")
    mats = []
    for i in range(d):
        for j in range(i + 1, d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            E[j, i] = 1.0
            mats.append(E)
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = -1.0j
            E[j, i] = 1.0j
            mats.append(E)
    for k in range(1, d):
        E = np.zeros((d, d), dtype=complex)
        for i in range(k):
            E[i, i] = 1.0
        E[k, k] = -float(k)
        mats.append(E * np.sqrt(2.0 / (k * (k + 1))))
    return HermitianTuple(np.array(mats))
