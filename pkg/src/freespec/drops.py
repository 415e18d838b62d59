"""Coordinate projections of free spectrahedra, free simplices, and hulls.

General projection membership is one-sided: a verified witness for the
hidden coordinates proves membership, while failure of the search proves
nothing.  A small registry of exact special cases (spin pencils project to
smaller spin pencils; the anticommuting 2x2 triple projects onto the
largest matrix convex set over the disk) covers the identities that hold
exactly.  Free simplices get an exact membership test through their unique
barycentric operator coefficients.
"""

from dataclasses import dataclass

import numpy as np

from .ballsets import wmax_ball_membership
from .errors import (ConstructionError, DimensionError, ParameterError,
                     PreconditionError, UnsupportedCaseError)
from .extremality import Verdict, classify
from .linalg import DEFAULT_TOL, HermitianTuple, min_eigenvalue
from .pencil import (MembershipVerdict, Pencil, coefficient_mats,
                     ensure_bounded_flag, membership, pencil_value, point_mats)
from .spin import pauli_conj_tuple, pauli_tuple, spin_membership, spin_tuple
from .sphere import ascend_on_sphere, unit_sphere_grid


@dataclass(frozen=True)
class DropDescriptor:
    """A pencil in h variables together with the number of kept coordinates."""

    pencil: Pencil
    keep: int

    def __post_init__(self):
        if not isinstance(self.pencil, Pencil):
            object.__setattr__(self, "pencil", Pencil(self.pencil))
        if not 1 <= self.keep <= self.pencil.g:
            raise ParameterError(
                f"kept coordinates {self.keep} outside 1..{self.pencil.g}")


def _matches(mats, reference):
    ref = reference.mats
    return mats.shape == ref.shape and bool(np.abs(mats - ref).max() <= 1e-12)


def project_membership_special(drop, X, tol=DEFAULT_TOL, grid=128, refine_steps=30,
                               seed=0):
    """Exact membership for registered coordinate projections.

    Registered cases: the 2x2 anticommuting triple (or its conjugate)
    projected to its first two coordinates, which equals the largest matrix
    convex set over the disk; and spin pencils projected to any shorter
    length, which equal the shorter spin free spectrahedron.  Anything else
    raises, pointing the caller at the witness search.
    """
    Am = coefficient_mats(drop.pencil)
    Xm = point_mats(X)
    if Xm.shape[0] != drop.keep:
        raise DimensionError(f"point has length {Xm.shape[0]}, drop keeps {drop.keep}")
    if drop.keep == 2 and (_matches(Am, pauli_tuple()) or _matches(Am, pauli_conj_tuple())):
        verdict = wmax_ball_membership(X, grid=grid, refine_steps=refine_steps,
                                       seed=seed, tol=tol)
        boundary = verdict.member and verdict.margin <= tol.psd_tol
        return MembershipVerdict(verdict.member, verdict.margin, boundary, None)
    h = drop.pencil.g
    if drop.keep < h and Am.shape[1] == 2 ** (h - 1) and _matches(Am, spin_tuple(h)):
        if drop.keep == 1:
            # The one-coordinate projection degenerates to the matrix
            # interval -I <= X <= I.
            interval = HermitianTuple(np.array([np.diag([1.0, -1.0]).astype(complex)]))
            return membership(interval, X, tol)
        return spin_membership(drop.keep, X, tol)
    raise UnsupportedCaseError(
        "no registered exact identity for this drop; use witness_search")


@dataclass(frozen=True)
class WitnessSearchResult:
    """Outcome of the hidden-coordinate search for drop membership."""

    found: bool
    witness: HermitianTuple | None
    verdict: MembershipVerdict | None
    best_infeasibility: float
    restarts_used: int


def witness_search(drop, X, restarts=8, iters=60, seed=0, tol=DEFAULT_TOL):
    """Search for hidden coordinates Y with (X, Y) in the free spectrahedron.

    Alternating ascent on the minimum eigenvalue of the pencil value: the
    gradient with respect to each hidden Hermitian coordinate is the
    compression of the corresponding coefficient by the bottom eigenvector
    (averaged over the bottom eigenspace when degenerate).  The zero tuple
    is always tried first.  Success is certified by a membership check;
    failure is inconclusive and reports the best infeasibility reached.
    """
    Am = coefficient_mats(drop.pencil)
    Xm = point_mats(X)
    g = drop.keep
    h = Am.shape[0]
    if Xm.shape[0] != g:
        raise DimensionError(f"point has length {Xm.shape[0]}, drop keeps {g}")
    n = Xm.shape[1]
    rng = np.random.default_rng(seed)
    d = Am.shape[1]

    def full_point(Ym):
        return HermitianTuple(np.concatenate([Xm, Ym], axis=0))

    def bottom_eig_and_grad(Ym):
        L = pencil_value(drop.pencil, full_point(Ym))
        w, V = np.linalg.eigh(L)
        bottom = w[0]
        mult = int(np.sum(w <= bottom + 1e-10 * max(abs(bottom), 1.0)))
        grads = np.zeros((h - g, n, n), dtype=complex)
        for r in range(mult):
            Vm = V[:, r].reshape(d, n)
            for j in range(h - g):
                # Rayleigh derivative of the bottom eigenvalue with respect
                # to the hidden Hermitian coordinate.
                grads[j] -= (Vm.conj().T @ Am[g + j] @ Vm).conj() / mult
        grads = 0.5 * (grads + grads.conj().transpose(0, 2, 1))
        return bottom, grads

    best = -np.inf
    used = 0
    for restart in range(max(restarts, 1)):
        used = restart + 1
        if restart == 0:
            Ym = np.zeros((h - g, n, n), dtype=complex)
        else:
            scale = 0.5 * restart / max(restarts - 1, 1)
            Ym = np.array([_random_hermitian(rng, n, scale) for _ in range(h - g)])
        value, grads = bottom_eig_and_grad(Ym)
        best = max(best, value)
        step = 0.5
        for _ in range(iters):
            if value >= -tol.psd_tol:
                break
            improved = False
            trial_step = step
            for _ in range(30):
                Yt = Ym + trial_step * grads
                cand, cand_grads = bottom_eig_and_grad(Yt)
                if cand > value:
                    Ym, value, grads = Yt, cand, cand_grads
                    improved = True
                    break
                trial_step *= 0.5
            best = max(best, value)
            if not improved:
                break
        if value >= -tol.psd_tol:
            witness = HermitianTuple(Ym)
            verdict = membership(drop.pencil, full_point(Ym), tol)
            if verdict.member:
                return WitnessSearchResult(True, witness, verdict, 0.0, used)
    return WitnessSearchResult(False, None, None, float(-best), used)


def _random_hermitian(rng, n, scale):
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (G + G.conj().T)


class FreeSimplex:
    """A full-dimensional simplex with 0 strictly inside, as a diagonal pencil.

    Vertices are the rows of a (g+1) x g array.  The facet description
    yields the diagonal coefficient tuple whose free spectrahedron has the
    simplex as its first level; the barycentric system gives the unique
    Hermitian operator coefficients of any candidate point.
    """

    __slots__ = ("vertices", "pencil", "_inverse")

    def __init__(self, vertices):
        V = np.asarray(vertices, dtype=float)
        g = V.shape[1] if V.ndim == 2 else 0
        if V.ndim != 2 or V.shape[0] != g + 1:
            raise ConstructionError(
                f"a simplex in {g} variables needs {g + 1} vertex rows, got {V.shape}")
        W = np.vstack([V.T, np.ones(g + 1)])  # columns: [v_i; 1]
        if abs(np.linalg.det(W)) < 1e-12:
            raise ConstructionError("vertices are affinely dependent")
        bary0 = np.linalg.solve(W, np.concatenate([np.zeros(g), [1.0]]))
        if bary0.min() <= 1e-12:
            raise ConstructionError("0 is not strictly inside the simplex")
        self.vertices = V
        self._inverse = np.linalg.inv(W)
        # Facet k omits vertex k; normalize the facet functional to value 1.
        coeffs = np.zeros((g, g + 1))
        for k in range(g + 1):
            others = np.delete(V, k, axis=0)
            a = np.linalg.solve(others, np.ones(g))
            coeffs[:, k] = a
        self.pencil = Pencil(HermitianTuple(
            np.array([np.diag(coeffs[j]).astype(complex) for j in range(g)])))

    @property
    def g(self):
        return self.vertices.shape[1]


@dataclass(frozen=True)
class SimplexMembership:
    member: bool
    margin: float
    boundary: bool
    coefficients: np.ndarray  # (g+1, n, n) Hermitian operator coefficients

    def __post_init__(self):
        self.coefficients.setflags(write=False)


def simplex_membership(simplex, X, tol=DEFAULT_TOL):
    """Exact free-simplex membership via barycentric operator coefficients.

    Affine independence of the vertices makes the Hermitian solution of
    ``X_j = sum_i v_i(j) Q_i``, ``sum_i Q_i = I`` unique; membership holds
    exactly when every coefficient is positive semidefinite (within
    psd_tol).
    """
    Xm = point_mats(X)
    g = simplex.g
    if Xm.shape[0] != g:
        raise DimensionError(f"point has length {Xm.shape[0]}, simplex lives in {g}")
    n = Xm.shape[1]
    stacked = np.concatenate([Xm, np.eye(n, dtype=complex)[None]], axis=0)
    Q = np.einsum("ij,jab->iab", simplex._inverse, stacked)
    Q = 0.5 * (Q + Q.conj().transpose(0, 2, 1))
    margins = [min_eigenvalue(Q[i], tol) for i in range(g + 1)]
    margin = float(min(margins))
    member = margin >= -tol.psd_tol
    boundary = member and margin <= tol.psd_tol
    return SimplexMembership(member, margin, boundary, Q)


@dataclass(frozen=True)
class HullVerdict:
    """Support-function verdict for level-1 hull membership."""

    member: bool
    margin: float
    separating_direction: np.ndarray | None


def level1_hull_membership(generators, y, grid=720, refine_steps=30, seed=0,
                           tol=DEFAULT_TOL):
    """Decide whether a real vector lies in the convex hull of the first
    levels generated by the given tuples.

    The point is a member exactly when, for every unit direction c, the
    pairing with c stays below the largest top eigenvalue of
    ``sum_i c_i X_i`` over the generators.  Directions are scanned on a
    grid and refined by ascent; a positive violation ships the separating
    direction.  Only lengths up to 3 are supported by the direction scan.
    """
    y = np.asarray(y, dtype=float)
    g = y.size
    if g > 3:
        raise UnsupportedCaseError("direction scan only covers up to 3 variables")
    gens = [point_mats(G) for G in generators]
    if not gens:
        raise ParameterError("need at least one generator tuple")
    for G in gens:
        if G.shape[0] != g:
            raise DimensionError(f"generator length {G.shape[0]} != point length {g}")

    def violation(c):
        support = max(float(np.linalg.eigvalsh(np.einsum("i,iab->ab", c, G))[-1])
                      for G in gens)
        active = [G for G in gens
                  if float(np.linalg.eigvalsh(np.einsum("i,iab->ab", c, G))[-1])
                  >= support - 1e-12]
        G = active[0]
        M = np.einsum("i,iab->ab", c, G)
        w, V = np.linalg.eigh(M)
        top = w[-1]
        mult = int(np.sum(w >= top - 1e-8 * max(abs(top), 1.0)))
        vecs = V[:, -mult:]
        grad_support = np.array(
            [np.mean(np.real(np.einsum("as,ab,bs->s", vecs.conj(), G[i], vecs)))
             for i in range(g)])
        return float(np.dot(c, y)) - support, y - grad_support

    rng = np.random.default_rng(seed)
    if g == 1:
        dirs = np.array([[1.0], [-1.0]])
    elif g == 2:
        angles = np.linspace(0.0, 2.0 * np.pi, max(grid, 8), endpoint=False)
        dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    else:
        dirs = unit_sphere_grid(rng, g, max(grid, 12))
    values = np.array([violation(c)[0] for c in dirs])
    order = np.argsort(values)[::-1]
    best_value, best_dir = values[order[0]], dirs[order[0]]
    for idx in order[:4]:
        value, c = ascend_on_sphere(violation, dirs[idx], refine_steps)
        if value > best_value:
            best_value, best_dir = value, c
    if best_value > tol.psd_tol:
        return HullVerdict(False, float(-best_value), best_dir)
    return HullVerdict(True, float(-best_value), None)


def segment_generator(points):
    """Diagonal tuple whose matrix convex hull has first level equal to the
    convex hull of the given scalar points."""
    P = np.asarray(points, dtype=float)
    if P.ndim != 2:
        raise ParameterError("expected an array of scalar points (rows)")
    return HermitianTuple(np.array([np.diag(P[:, j]).astype(complex)
                                    for j in range(P.shape[1])]))


@dataclass(frozen=True)
class HarnessSample:
    point: np.ndarray
    verdict: Verdict


@dataclass(frozen=True)
class HarnessReport:
    """Per-sample certification results for the projection harness."""

    samples: tuple
    all_free: bool
    oracle: str


def projection_extreme_harness(A, keep, samples=20, seed=0, tol=DEFAULT_TOL):
    """Certify sampled level-1 Euclidean extreme points of a projection as
    free extreme points of the projected set.

    Works for the registered oracles only: spin pencils (the projection is
    the shorter spin free spectrahedron; the level-1 set is the Euclidean
    ball whose extreme points are sampled as unit support directions) and
    diagonal simplex pencils projected to one coordinate (the projection is
    the matrix interval; its extreme points are the endpoints).  Support
    points whose maximizer is not unique within 1e-8 are filtered out.
    """
    pencil = A if isinstance(A, Pencil) else Pencil(A)
    Am = coefficient_mats(pencil)
    h = pencil.g
    rng = np.random.default_rng(seed)
    if Am.shape[1] == 2 ** (h - 1) and _matches(Am, spin_tuple(h)) and 2 <= keep < h:
        oracle = Pencil(spin_tuple(keep))
        ensure_bounded_flag(oracle, tol)
        out = []
        for _ in range(samples):
            c = rng.normal(size=keep)
            c /= np.linalg.norm(c)
            point = HermitianTuple(c.reshape(keep, 1, 1).astype(complex))
            cert = classify(oracle, point, tol)
            out.append(HarnessSample(c, cert.verdict))
        return HarnessReport(tuple(out), all(s.verdict == Verdict.FREE for s in out),
                             "spin")
    diag = all(np.abs(Am[i] - np.diag(np.diagonal(Am[i]))).max() < 1e-12
               for i in range(h))
    if diag and keep == 1:
        # Level-1 projection of the polyhedron onto the first coordinate:
        # the extrema over the vertex set (projection, not axis slice).
        vertices = _polyhedron_vertices(Am, tol)
        if vertices.size == 0:
            raise UnsupportedCaseError("could not enumerate polyhedron vertices")
        left = float(vertices[:, 0].min())
        right = float(vertices[:, 0].max())
        if not left < 0 < right:
            raise UnsupportedCaseError("projected interval must contain 0 inside")
        interval = Pencil(HermitianTuple(np.array(
            [np.diag([1.0 / right, 1.0 / left]).astype(complex)])))
        ensure_bounded_flag(interval, tol)
        out = []
        for endpoint in (left, right):
            point = HermitianTuple(np.array([[[endpoint]]], dtype=complex))
            cert = classify(interval, point, tol)
            out.append(HarnessSample(np.array([endpoint]), cert.verdict))
        return HarnessReport(tuple(out), all(s.verdict == Verdict.FREE for s in out),
                             "interval")
    raise UnsupportedCaseError("no registered projection oracle for this pencil")


def _polyhedron_vertices(Am, tol):
    """Vertices of the bounded level-1 polyhedron of a diagonal pencil.

    Diagonal coefficients turn the pencil inequality into facet rows
    ``<row_k, x> <= 1``; vertices are the feasible intersections of
    h-subsets of facets.  Exponential in principle; fine for the small
    polyhedra this package handles.
    """
    from itertools import combinations

    h = Am.shape[0]
    rows = np.array([np.real(np.diagonal(Am[i])) for i in range(h)]).T
    out = []
    for subset in combinations(range(rows.shape[0]), h):
        sub = rows[list(subset)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x = np.linalg.solve(sub, np.ones(h))
        if np.max(rows @ x) <= 1.0 + 1e-9:
            out.append(x)
    return np.array(out) if out else np.zeros((0, h))
