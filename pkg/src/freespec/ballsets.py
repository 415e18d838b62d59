"""Matrix convex sets over the Euclidean ball.

Four families are covered:

* the matrix ball (sum of squares bounded by the identity), with an exact
  Arveson extreme-point criterion;
* the self-dual ball (norm of ``sum X_i (x) conj(X_i)`` at most one);
* the largest matrix convex set over the ball, decided one-sidedly by
  estimating the supremum of the top eigenvalue of real unit combinations;
* the non-self-adjoint analogue, decided one-sidedly through the largest
  singular value of complex unit combinations.

The one-sided estimators certify refutations (the exhibited direction is a
proof) while acceptances remain heuristic and are flagged as such.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, PreconditionError
from .linalg import (DEFAULT_TOL, HermitianTuple, as_matrix_tuple,
                     hermitian_eigen, random_hermitian_tuple,
                     realify, real_nullspace)
from .pencil import point_mats
from .sphere import sup_over_sphere

MATRIX_BALL = "matrix-ball"
SELFDUAL_BALL = "selfdual-ball"
WMAX_BALL = "wmax-ball"
QD_SET = "qd"


@dataclass(frozen=True)
class BallVerdict:
    """Membership verdict for one of the ball-family sets.

    ``margin`` is set-specific (one minus the relevant norm/eigenvalue
    estimate); membership means margin >= -psd_tol.  ``heuristic`` marks
    verdicts whose acceptance side rests on sampling; ``certificate``
    carries the witness data (refuting direction, dilation, ...).
    """

    set_id: str
    member: bool
    margin: float
    heuristic: bool = False
    certificate: object = None


@dataclass(frozen=True)
class BallExtremeCertificate:
    """Arveson extremality report for a matrix-ball member."""

    arveson_extreme: bool
    flat_branch: bool
    nullity: int
    smallest_retained: float
    dilation: np.ndarray | None
    dilation_margin: float | None


def squares_sum(Xm):
    return np.einsum("iab,ibc->ac", Xm, Xm)


def matrix_ball_membership(X, tol=DEFAULT_TOL):
    """Membership in the matrix ball: sum of squares at most the identity."""
    Xm = point_mats(X)
    S = squares_sum(Xm)
    w, _ = hermitian_eigen(S, tol)
    margin = 1.0 - float(w[-1])
    return BallVerdict(MATRIX_BALL, margin >= -tol.psd_tol, margin)


def matrix_ball_arveson(X, tol=DEFAULT_TOL):
    """Exact Arveson extreme-point test inside the matrix ball.

    With S the sum of squares and V the eigenspace where S acts as the
    identity: if V is everything the point is Arveson extreme; otherwise it
    is Arveson extreme exactly when no nonzero tuple of vectors from the
    complement W solves ``P_V(sum_j X_j w_j) = 0``.  A nonzero solution is
    converted into a verified one-row member dilation.
    """
    Xm = point_mats(X)
    verdict = matrix_ball_membership(Xm, tol)
    if not verdict.member:
        raise PreconditionError("Arveson test requires a matrix-ball member")
    g, n, _ = Xm.shape
    S = squares_sum(Xm)
    w_all, vecs = hermitian_eigen(S, tol)
    # One eigendecomposition fixes both V (where S acts as the identity)
    # and its orthogonal complement W, with a single rank cutoff.
    gap = 1.0 - w_all
    cutoff = tol.rank_tol * max(float(np.abs(gap).max()), 1.0)
    flat = gap <= cutoff
    dimV = int(np.sum(flat))
    if dimV == n:
        cert = BallExtremeCertificate(True, True, 0, np.inf, None, None)
        return BallVerdict(MATRIX_BALL, True, verdict.margin, False, cert)
    V = vecs[:, flat]
    W = vecs[:, ~flat]
    m = W.shape[1]
    if dimV == 0:
        coords = np.zeros((g, m), dtype=complex)
        coords[0, 0] = 1.0
        nullity, smallest = g * m, np.inf
    else:
        # Rows: projection of sum_j X_j w_j onto V; unknowns: W-coordinates of the w_j.
        blocks = [V.conj().T @ Xm[j] @ W for j in range(g)]
        system = np.hstack(blocks)
        basis_real, smallest = real_nullspace(realify(system), tol)
        nullity = basis_real.shape[1] // 2
        if nullity == 0:
            cert = BallExtremeCertificate(True, False, 0, smallest, None, None)
            return BallVerdict(MATRIX_BALL, True, verdict.margin, False, cert)
        vec = basis_real[:g * m, -1] + 1j * basis_real[g * m:, -1]
        coords = vec.reshape(g, m)
    w_cols = np.einsum("ns,is->in", W, coords)  # w_j in the ambient space
    w_cols = w_cols / np.linalg.norm(w_cols)
    dilation, margin = _shrink_to_member(Xm, w_cols, tol)
    cert = BallExtremeCertificate(False, False, nullity, smallest, dilation, margin)
    return BallVerdict(MATRIX_BALL, True, verdict.margin, False, cert)


def _shrink_to_member(Xm, w_cols, tol):
    """One-row dilation with rows eps * w_j and zero corner, with eps halved
    until the dilation is a matrix-ball member."""
    g, n = w_cols.shape
    eps = 1.0
    for _ in range(80):
        Y = np.zeros((g, n + 1, n + 1), dtype=complex)
        for j in range(g):
            Y[j, :n, :n] = Xm[j]
            Y[j, :n, n] = eps * w_cols[j]
            Y[j, n, :n] = eps * w_cols[j].conj()
        verdict = matrix_ball_membership(Y, tol)
        if verdict.member:
            return Y, verdict.margin
        eps *= 0.5
    raise PreconditionError("could not scale the dilation into the matrix ball")


def selfdual_ball_membership(X, tol=DEFAULT_TOL):
    """Membership in the self-dual ball: operator norm of
    ``sum_i X_i (x) conj(X_i)`` at most one (the sum is Hermitian because
    the conjugate of a Hermitian matrix is its transpose)."""
    Xm = point_mats(X)
    g, n, _ = Xm.shape
    M = np.einsum("iab,icd->acbd", Xm, Xm.conj()).reshape(n * n, n * n)
    w, _ = hermitian_eigen(M, tol)
    margin = 1.0 - float(max(abs(w[0]), abs(w[-1])))
    return BallVerdict(SELFDUAL_BALL, margin >= -tol.psd_tol, margin)


def wmax_ball_membership(X, grid=64, refine_steps=25, seed=0, tol=DEFAULT_TOL):
    """One-sided membership in the largest matrix convex set over the ball.

    Estimates ``m(X)``, the supremum over real unit directions c of the top
    eigenvalue of ``sum c_i X_i``, by sphere sampling plus projected
    gradient ascent (the gradient at c is the Rayleigh derivative of the
    top eigenvector, averaged over the top eigenspace when it is
    degenerate).  ``m > 1`` refutes membership with the exhibited c; an
    acceptance is heuristic.
    """
    Xm = point_mats(X)
    g = Xm.shape[0]
    if grid < 2 * g:
        raise ParameterError(f"need a grid of at least {2 * g} directions, got {grid}")
    rng = np.random.default_rng(seed)

    def top_eig(c):
        M = np.einsum("i,iab->ab", c, Xm)
        w, V = np.linalg.eigh(M)
        top = w[-1]
        mult = int(np.sum(w >= top - 1e-8 * max(abs(top), 1.0)))
        vecs = V[:, -mult:]
        grad = np.array([np.mean(np.real(np.einsum("as,ab,bs->s", vecs.conj(), Xm[i], vecs)))
                         for i in range(g)])
        return top, grad

    estimate, direction = sup_over_sphere(top_eig, rng, g, grid, refine_steps)
    margin = 1.0 - estimate
    member = margin >= -tol.psd_tol
    return BallVerdict(WMAX_BALL, member, margin, heuristic=member,
                       certificate=None if member else direction)


def qd_membership(T, grid=64, refine_steps=25, seed=0, tol=DEFAULT_TOL):
    """One-sided membership for tuples of general square matrices.

    Estimates the supremum over complex unit vectors lambda of the largest
    singular value of ``sum lambda_i T_i``; the same one-sided semantics as
    the ball estimator apply.
    """
    Tm = as_matrix_tuple(T)
    g = Tm.shape[0]
    if grid < 2 * g:
        raise ParameterError(f"need a grid of at least {2 * g} directions, got {grid}")
    rng = np.random.default_rng(seed)

    def top_singular(lam):
        M = np.einsum("i,iab->ab", lam, Tm)
        U, s, Vh = np.linalg.svd(M)
        top = s[0]
        mult = int(np.sum(s >= top - 1e-8 * max(top, 1.0)))
        grad = np.zeros(g, dtype=complex)
        for r in range(mult):
            u, v = U[:, r], Vh[r].conj()
            grad += np.array([np.vdot(u, Tm[i] @ v) for i in range(g)])
        # Ascent direction for Re(conj(lambda_i) z): move lambda toward conj pattern.
        return top, grad.conj() / mult

    estimate, direction = sup_over_sphere(top_singular, rng, g, grid, refine_steps,
                                          complex_sphere=True)
    margin = 1.0 - estimate
    member = margin >= -tol.psd_tol
    return BallVerdict(QD_SET, member, margin, heuristic=member,
                       certificate=None if member else direction)


def wmin_ball_element(rng, g, n, points=6):
    """Random element of the smallest matrix convex set over the unit ball:
    a matrix convex combination of level-1 ball points.

    Membership in that set has no oracle here; this generator only produces
    elements guaranteed to lie in it, for inclusion testing against the
    larger sets of the chain.
    """
    scalars = rng.normal(size=(points, g))
    norms = np.linalg.norm(scalars, axis=1)
    scalars = scalars / np.maximum(norms, 1.0)[:, None] \
        * rng.uniform(0.2, 1.0, size=points)[:, None]
    Vs = [rng.normal(size=(1, n)) + 1j * rng.normal(size=(1, n))
          for _ in range(points)]
    gram = sum(V.conj().T @ V for V in Vs)
    w, U = np.linalg.eigh(gram)
    half_inv = U @ np.diag(1.0 / np.sqrt(np.maximum(w, 1e-12))) @ U.conj().T
    X = np.zeros((g, n, n), dtype=complex)
    for x, V in zip(scalars, Vs):
        Vn = V @ half_inv
        X += x[:, None, None] * (Vn.conj().T @ Vn)[None]
    return HermitianTuple(0.5 * (X + X.conj().transpose(0, 2, 1)))


@dataclass(frozen=True)
class ChainReport:
    """Tabulated membership sweep along the containment chain."""

    g: int
    samples: int
    violations: tuple
    witness_in_matrix_ball: bool
    witness_pencil_top_eigenvalue: float
    notes: tuple


def containment_chain_experiment(g, samples=200, seed=0, tol=DEFAULT_TOL):
    """Sample-based check of the containment chain over the ball.

    Generated elements of the smallest matrix convex set over the ball must
    pass every membership along the chain; boundary-rich members of the
    spin free spectrahedron must lie in the matrix ball and the self-dual
    ball; matrix-ball members must lie in the self-dual ball; self-dual
    members must never be refuted (pairing above one) against sampled
    members of the matrix ball or of the spin set.  The scaled spin tuple
    itself witnesses that the first containment is proper.  Membership in
    the smallest set has no oracle here (only the generator above), which
    is recorded as a note.
    """
    from .duality import polar_refute
    from .pencil import linear_part, membership
    from .spin import random_spin_member, spin_tuple

    if g < 2:
        raise ParameterError(f"chain experiment needs g >= 2, got {g}")
    rng = np.random.default_rng(seed)
    F = spin_tuple(g)
    violations = []
    sizes = [1, 2, 3]
    spin_samples = []
    ball_samples = []
    for s in range(min(samples, 60)):
        X = wmin_ball_element(rng, g, sizes[s % len(sizes)])
        if not membership(spin_tuple(g), X, tol).member:
            violations.append(("wmin-not-in-spin", s))
        if not matrix_ball_membership(X, tol).member:
            violations.append(("wmin-not-in-matrix-ball", s))
        if not selfdual_ball_membership(X, tol).member:
            violations.append(("wmin-not-in-selfdual-ball", s))
    for s in range(samples):
        n = sizes[s % len(sizes)]
        scale = (0.3, 0.7, 1.0)[(s // len(sizes)) % 3]
        X = random_spin_member(rng, g, n, scale=scale, tol=tol)
        spin_samples.append(X)
        if not matrix_ball_membership(X, tol).member:
            violations.append(("spin-not-in-matrix-ball", s))
        if not selfdual_ball_membership(X, tol).member:
            violations.append(("spin-not-in-selfdual-ball", s))
        # A boundary-scaled matrix-ball member from the same draw family.
        Y = random_hermitian_tuple(rng, n, g)
        top = float(hermitian_eigen(squares_sum(Y.mats), tol)[0][-1])
        Y = Y.scaled(scale / np.sqrt(top))
        ball_samples.append(Y)
        if not selfdual_ball_membership(Y, tol).member:
            violations.append(("matrix-ball-not-in-selfdual-ball", s))
    # Self-dual members should never pair above one with matrix-ball members.
    for s in range(min(samples, 50)):
        n = sizes[s % len(sizes)]
        Z = random_hermitian_tuple(rng, n, g)
        Mz = np.einsum("iab,icd->acbd", Z.mats, Z.mats.conj()).reshape(n * n, n * n)
        wz, _ = hermitian_eigen(Mz, tol)
        Z = Z.scaled(0.99 / np.sqrt(max(abs(wz[0]), abs(wz[-1]))))
        witness = polar_refute(ball_samples[:40], Z, tol)
        if witness is not None:
            violations.append(("selfdual-refuted-against-matrix-ball", s))
        witness = polar_refute(spin_samples[:40], Z, tol)
        if witness is not None:
            violations.append(("selfdual-refuted-against-spin", s))
    # The scaled spin tuple separates the spin set from the matrix ball.
    W = HermitianTuple(F.mats / np.sqrt(g))
    wit_ball = matrix_ball_membership(W, tol)
    top_eig = float(hermitian_eigen(linear_part(F, W), tol)[0][-1])
    notes = ("membership in the smallest matrix convex set over the ball is not "
             "implemented; that end of the chain is exercised only through "
             "generated matrix convex combinations of level-1 points",)
    return ChainReport(g, samples, tuple(violations), wit_ball.member
                       and abs(wit_ball.margin) <= 1e-10, top_eig, notes)
