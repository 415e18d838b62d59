"""Dense complex linear algebra substrate with explicit tolerance handling.

Everything downstream (pencil evaluation, certification systems, duality)
funnels through the handful of primitives in this module: Hermitian
eigendecomposition, SVD-based nullspace extraction with a relative rank
cutoff, Kronecker products, direct sums, and homogeneous solves of complex
linear systems via realification.  All values are immutable after
construction and all operations are pure, so they are safe to share across
threads.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NumericalError, ParameterError


@dataclass(frozen=True)
class ToleranceProfile:
    """Numerical tolerances threaded through every verdict.

    Attributes
    ----------
    hermitian_tol : float
        Maximum entrywise deviation ``||M - M*||_max`` accepted before a
        matrix is rejected as non-Hermitian.  Inputs within the tolerance
        are symmetrized.
    psd_tol : float
        Half-width of the positive-semidefiniteness boundary band: a point
        is a member when the minimum eigenvalue is >= -psd_tol and sits on
        the boundary when it is also <= psd_tol.
    rank_tol : float
        Relative singular-value cutoff (relative to the largest singular
        value) used for every rank/nullity decision.
    residual_tol : float
        Acceptable residual ``||M K||_max`` for a computed kernel basis K,
        relative to ``||M||``.
    membership_margin : float
        Width of the band around the boundary inside which two independent
        membership oracles are not required to agree.
    """

    hermitian_tol: float = 1e-12
    psd_tol: float = 1e-9
    rank_tol: float = 1e-8
    residual_tol: float = 1e-8
    membership_margin: float = 1e-8

    def __post_init__(self):
        for name in ("hermitian_tol", "psd_tol", "rank_tol", "residual_tol",
                     "membership_margin"):
            value = getattr(self, name)
            if not (value > 0.0 and np.isfinite(value)):
                raise ParameterError(f"{name} must be strictly positive, got {value!r}")


DEFAULT_TOL = ToleranceProfile()


def as_complex_matrix(M):
    """Validate and return a 2-d complex array with finite entries."""
    arr = np.asarray(M, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of ndim {arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("matrix contains NaN or Inf entries")
    return arr


def as_matrix_tuple(matrices):
    """Validate a tuple of same-size square matrices; returns a (g, n, n) array.

    Entries need not be Hermitian (used for the non-self-adjoint sets).
    """
    mats = [as_complex_matrix(M) for M in matrices]
    if not mats:
        raise DimensionError("empty matrix tuple")
    n = mats[0].shape[0]
    for M in mats:
        if M.shape != (n, n):
            raise DimensionError(f"tuple members must all be {n}x{n}, got {M.shape}")
    out = np.array(mats)
    out.setflags(write=False)
    return out


class HermitianTuple:
    """A g-tuple of n x n complex Hermitian matrices.

    Doubles as a pencil coefficient tuple and as an evaluation point.
    Inputs are symmetrized via ``(M + M*)/2``; the pre-symmetrization
    deviation is recorded and must not exceed ``hermitian_tol``.
    """

    __slots__ = ("mats", "hermitian_deviation")

    def __init__(self, matrices, hermitian_tol=DEFAULT_TOL.hermitian_tol):
        if isinstance(matrices, HermitianTuple):
            mats = matrices.mats
        else:
            mats = as_matrix_tuple(matrices)
        adj = mats.conj().transpose(0, 2, 1)
        deviation = float(np.abs(mats - adj).max()) if mats.size else 0.0
        if deviation > hermitian_tol:
            raise ParameterError(
                f"tuple member deviates from Hermitian by {deviation:.3e} "
                f"(tolerance {hermitian_tol:.3e})")
        sym = 0.5 * (mats + adj)
        sym.setflags(write=False)
        self.mats = sym
        self.hermitian_deviation = deviation

    @property
    def g(self):
        return self.mats.shape[0]

    @property
    def n(self):
        return self.mats.shape[1]

    def __len__(self):
        return self.g

    def __getitem__(self, i):
        return self.mats[i]

    def __iter__(self):
        return iter(self.mats)

    def conj(self):
        """Entrywise complex conjugate (Hermitian-ness is preserved)."""
        return HermitianTuple(self.mats.conj())

    def scaled(self, s):
        return HermitianTuple(self.mats * float(s))

    def __repr__(self):
        return f"HermitianTuple(g={self.g}, n={self.n})"


@dataclass(frozen=True)
class KernelBasis:
    """Orthonormal columns spanning a numerical nullspace.

    ``matrix`` has shape (m, k); ``rank_tol_used`` is the relative cutoff
    that produced it.
    """

    matrix: np.ndarray
    rank_tol_used: float

    @property
    def dim(self):
        return self.matrix.shape[1]

    def __post_init__(self):
        self.matrix.setflags(write=False)


@dataclass(frozen=True)
class HomogeneousSolution:
    """Nullspace of a complex-linear homogeneous system solved by realification.

    ``nullity`` counts complex dimensions; ``basis`` has shape
    (unknowns, nullity) with orthonormal complex columns;
    ``smallest_retained`` is the smallest singular value above the rank
    cutoff of the realified matrix (``inf`` when there is none).
    """

    nullity: int
    basis: np.ndarray
    smallest_retained: float

    def __post_init__(self):
        self.basis.setflags(write=False)


def hermitian_eigen(M, tol=DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    M : array_like
        Square matrix, Hermitian within ``tol.hermitian_tol``.
    tol : ToleranceProfile

    Returns
    -------
    (eigenvalues, eigenvectors)
        Eigenvalues ascending; eigenvector columns unitary.
    """
    arr = as_complex_matrix(M)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"eigendecomposition needs a square matrix, got {arr.shape}")
    deviation = float(np.abs(arr - arr.conj().T).max()) if arr.size else 0.0
    if deviation > tol.hermitian_tol:
        raise ParameterError(
            f"matrix deviates from Hermitian by {deviation:.3e} "
            f"(tolerance {tol.hermitian_tol:.3e})")
    sym = 0.5 * (arr + arr.conj().T)
    try:
        w, V = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure is rare
        raise NumericalError(f"Hermitian eigensolve did not converge: {exc}") from exc
    return w, V


def min_eigenvalue(M, tol=DEFAULT_TOL):
    """Smallest eigenvalue of a Hermitian matrix."""
    w, _ = hermitian_eigen(M, tol)
    return float(w[0])


def nullspace(M, tol=DEFAULT_TOL):
    """Orthonormal basis of the numerical nullspace of ``M``.

    A singular value belongs to the kernel when it is at most
    ``tol.rank_tol`` times the largest singular value; the reference scale
    is floored at 1 so that numerically vanishing matrices (every entry at
    roundoff level) report a full kernel instead of an empty one.  All
    certification systems here are built from O(1)-normalized data, which
    makes that floor the correct reading of "numerical rank".  The empty
    basis is a valid result.
    """
    arr = np.asarray(M)
    if arr.ndim != 2:
        raise DimensionError(f"expected a matrix, got ndim {arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("matrix contains NaN or Inf entries")
    m, n = arr.shape
    if n == 0:
        return KernelBasis(np.zeros((0, 0), dtype=arr.dtype), tol.rank_tol)
    if m == 0:
        return KernelBasis(np.eye(n, dtype=arr.dtype), tol.rank_tol)
    _, s, vh = np.linalg.svd(arr)
    smax = s[0] if s.size else 0.0
    cutoff = tol.rank_tol * max(smax, 1.0)
    k = int(n - min(m, n) + np.sum(s <= cutoff))
    if k == 0:
        basis = np.zeros((n, 0), dtype=vh.dtype)
    else:
        basis = vh[n - k:].conj().T
    return KernelBasis(basis, tol.rank_tol)


def kron(A, B):
    """Kronecker product with shape validation."""
    return np.kron(as_complex_matrix(A), as_complex_matrix(B))


def direct_sum(tuples):
    """Coordinatewise block-diagonal direct sum of Hermitian tuples."""
    parts = [t if isinstance(t, HermitianTuple) else HermitianTuple(t) for t in tuples]
    if not parts:
        raise DimensionError("direct_sum of an empty collection")
    g = parts[0].g
    for t in parts:
        if t.g != g:
            raise DimensionError(f"tuple lengths differ: {t.g} vs {g}")
    n = sum(t.n for t in parts)
    out = np.zeros((g, n, n), dtype=complex)
    offset = 0
    for t in parts:
        out[:, offset:offset + t.n, offset:offset + t.n] = t.mats
        offset += t.n
    return HermitianTuple(out)


def realify(M):
    """Real 2m x 2n representation of a complex matrix acting on stacked
    real/imaginary parts: ``[Re x; Im x] -> [Re(Mx); Im(Mx)]``."""
    arr = np.asarray(M, dtype=complex)
    return np.block([[arr.real, -arr.imag], [arr.imag, arr.real]])


def real_nullspace(M, tol=DEFAULT_TOL):
    """Nullspace of a real matrix plus the smallest retained singular value.

    Returns ``(basis, smallest_retained)`` where the basis columns are real
    and orthonormal and ``smallest_retained`` is ``inf`` when the matrix
    has no singular value above the cutoff.  As in :func:`nullspace`, the
    rank cutoff is relative to the largest singular value with the
    reference scale floored at 1.
    """
    arr = np.asarray(M, dtype=float)
    m, n = arr.shape
    if m == 0 or n == 0:
        return np.eye(n), np.inf
    _, s, vh = np.linalg.svd(arr)
    smax = s[0]
    cutoff = tol.rank_tol * max(smax, 1.0)
    k = int(n - min(m, n) + np.sum(s <= cutoff))
    retained = s[s > cutoff]
    smallest = float(retained.min()) if retained.size else np.inf
    basis = vh[n - k:].T if k else np.zeros((n, 0))
    return basis, smallest


def solve_homogeneous(M, tol=DEFAULT_TOL):
    """Nullspace of the complex-linear system ``M x = 0`` by realification.

    The complex matrix is stacked into its real 2m x 2n form, one real SVD
    decides the rank, and the complex basis is reassembled from the real
    nullspace.  The complex nullity is half the real one.
    """
    arr = as_complex_matrix(M)
    m, n = arr.shape
    if n == 0:
        return HomogeneousSolution(0, np.zeros((0, 0), complex), np.inf)
    if m == 0:
        return HomogeneousSolution(n, np.eye(n, dtype=complex), np.inf)
    basis_real, smallest = real_nullspace(realify(arr), tol)
    nullity = basis_real.shape[1] // 2
    if nullity == 0:
        return HomogeneousSolution(0, np.zeros((n, 0), complex), smallest)
    # Each real null vector [Re x; Im x] yields a complex null vector; the
    # realified nullspace is invariant under multiplication by i, so the
    # complex span has exactly half the real dimension.
    candidates = basis_real[:n] + 1j * basis_real[n:]
    u, _, _ = np.linalg.svd(candidates, full_matrices=False)
    basis = u[:, :nullity]
    return HomogeneousSolution(nullity, basis, smallest)


def hermitian_basis(n):
    """Orthonormal (Frobenius) basis of the real space of n x n Hermitian
    matrices, as an (n*n, n, n) array."""
    out = np.zeros((n * n, n, n), dtype=complex)
    idx = 0
    for j in range(n):
        out[idx, j, j] = 1.0
        idx += 1
    r = 1.0 / np.sqrt(2.0)
    for j in range(n):
        for k in range(j + 1, n):
            out[idx, j, k] = r
            out[idx, k, j] = r
            idx += 1
            out[idx, j, k] = 1j * r
            out[idx, k, j] = -1j * r
            idx += 1
    return out


def random_hermitian(rng, n, scale=1.0):
    """Gaussian Hermitian matrix (GUE-type normalization is not needed here)."""
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (G + G.conj().T)


def random_hermitian_tuple(rng, n, g, scale=1.0):
    """Tuple of independent Gaussian Hermitian matrices."""
    return HermitianTuple(np.array([random_hermitian(rng, n, scale) for _ in range(g)]))


def random_unitary(rng, n):
    """Haar-ish unitary via QR of a complex Gaussian matrix."""
    G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(G)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_orthogonal(rng, n):
    """Random real orthogonal matrix via QR of a Gaussian matrix."""
    G = rng.normal(size=(n, n))
    Q, R = np.linalg.qr(G)
    return Q * np.sign(np.diag(R))


def batched_min_eigenvalues(batch):
    """Smallest eigenvalue of each Hermitian matrix in a (N, m, m) stack."""
    if batch.shape[0] == 0:
        return np.zeros(0)
    return np.linalg.eigvalsh(batch)[:, 0]


def batched_max_eigenvalues(batch):
    """Largest eigenvalue of each Hermitian matrix in a (N, m, m) stack."""
    if batch.shape[0] == 0:
        return np.zeros(0)
    return np.linalg.eigvalsh(batch)[:, -1]
