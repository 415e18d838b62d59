"""Universal anticommuting tuples and the Pauli tuple.

The length-g spin tuple is the tuple of pairwise anticommuting self-adjoint
unitaries of size 2**(g-1) obtained from the classical tensor recursion:
starting from ``(diag(1,-1), offdiag(1,1))``, each step tensors
``diag(1,-1)`` onto every existing entry and appends ``I (x) offdiag(1,1)``.
"""

from functools import lru_cache

import numpy as np

from .errors import ParameterError
from .linalg import DEFAULT_TOL, HermitianTuple, random_hermitian_tuple
from .pencil import boundary_scale, coefficient_mats, membership

_DIAG = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_OFFDIAG = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_IMDIAG = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)

DEFAULT_SIZE_CAP = 8192  # matrix size 2**(g-1); g = 14 by default


@lru_cache(maxsize=None)
def _spin_mats(g):
    mats = [_DIAG, _OFFDIAG]
    for _ in range(g - 2):
        eye = np.eye(mats[0].shape[0], dtype=complex)
        mats = [np.kron(M, _DIAG) for M in mats] + [np.kron(eye, _OFFDIAG)]
    arr = np.array(mats)
    arr.setflags(write=False)
    return arr


def spin_tuple(g, size_cap=DEFAULT_SIZE_CAP):
    """Universal g-tuple of pairwise anticommuting self-adjoint unitaries.

    Parameters
    ----------
    g : int
        Tuple length, at least 2.
    size_cap : int
        Upper bound on the matrix size 2**(g-1); dense eigensolves beyond
        this are not worth it.
    """
    if g < 2:
        raise ParameterError(f"spin tuples need g >= 2, got {g}")
    if 2 ** (g - 1) > size_cap:
        raise ParameterError(
            f"spin tuple of length {g} has size {2 ** (g - 1)} > cap {size_cap}")
    return HermitianTuple(_spin_mats(g))


def pauli_tuple():
    """The three anticommuting self-adjoint unitary 2x2 matrices."""
    return HermitianTuple(np.array([_DIAG, _OFFDIAG, _IMDIAG]))


def pauli_conj_tuple():
    """Entrywise complex conjugate of the Pauli tuple (negates the third entry)."""
    return pauli_tuple().conj()


def anticommutation_residual(tup):
    """Largest violation of the self-adjoint-unitary / anticommutation relations."""
    mats = tup.mats if isinstance(tup, HermitianTuple) else np.asarray(tup, complex)
    g, n, _ = mats.shape
    eye = np.eye(n)
    worst = 0.0
    for i in range(g):
        worst = max(worst, float(np.abs(mats[i] @ mats[i] - eye).max()))
        worst = max(worst, float(np.abs(mats[i] - mats[i].conj().T).max()))
        for j in range(i + 1, g):
            worst = max(worst, float(np.abs(mats[i] @ mats[j] + mats[j] @ mats[i]).max()))
    return worst


def orthogonal_transform(U, X):
    """Rotate a tuple by a real orthogonal matrix: entry j becomes
    ``sum_k U[j, k] X_k``."""
    U = np.asarray(U, dtype=float)
    Xm = X.mats if isinstance(X, HermitianTuple) else HermitianTuple(X).mats
    g = Xm.shape[0]
    if U.shape != (g, g):
        raise ParameterError(f"expected a {g}x{g} orthogonal matrix, got {U.shape}")
    if np.abs(U @ U.T - np.eye(g)).max() > 1e-10:
        raise ParameterError("matrix is not orthogonal within 1e-10")
    return HermitianTuple(np.einsum("jk,kab->jab", U, Xm))


def spin_membership(g, X, tol=DEFAULT_TOL):
    """Membership of X in the free spectrahedron of the length-g spin tuple."""
    return membership(spin_tuple(g), X, tol)


def extend_by_zero_check(g, h, X, tol=DEFAULT_TOL):
    """Check that membership at length g matches membership of the
    zero-padded tuple at length h > g.  Returns (agree, verdict_g, verdict_h)."""
    if not g < h:
        raise ParameterError(f"need g < h, got g={g}, h={h}")
    Xm = X.mats if isinstance(X, HermitianTuple) else HermitianTuple(X).mats
    if Xm.shape[0] != g:
        raise ParameterError(f"point has length {Xm.shape[0]}, expected {g}")
    n = Xm.shape[1]
    padded = np.concatenate([Xm, np.zeros((h - g, n, n), dtype=complex)], axis=0)
    verdict_g = membership(spin_tuple(g), HermitianTuple(Xm), tol)
    verdict_h = membership(spin_tuple(h), HermitianTuple(padded), tol)
    return verdict_g.member == verdict_h.member, verdict_g, verdict_h


def random_spin_member(rng, g, n, boundary=True, scale=1.0, tol=DEFAULT_TOL):
    """Random member of the spin free spectrahedron.

    Gaussian Hermitian tuples are scaled to the boundary via the largest
    eigenvalue of the linear part (boundary-rich sampling exercises the
    extremality machinery); ``scale`` then pulls inside (< 1) or pushes
    outside (> 1).
    """
    X = random_hermitian_tuple(rng, n, g)
    s = boundary_scale(spin_tuple(g), X, tol)
    if not np.isfinite(s):
        return X.scaled(scale)
    factor = s * scale if boundary else s * rng.uniform(0.0, 1.0) * scale
    return X.scaled(factor)


def random_pencil_member(rng, A, n, scale=1.0, tol=DEFAULT_TOL):
    """Random boundary-scaled member of an arbitrary free spectrahedron."""
    g = coefficient_mats(A).shape[0]
    X = random_hermitian_tuple(rng, n, g)
    s = boundary_scale(A, X, tol)
    if not np.isfinite(s):
        return X.scaled(scale)
    return X.scaled(s * scale)
