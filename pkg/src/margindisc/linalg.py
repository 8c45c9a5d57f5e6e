"""Dense complex-matrix kernel used by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128 in row-major
order; the helpers here add the validated spectral operations the rest of the
package relies on (Hermitian/unitary eigendecompositions, nullspaces, Kronecker
products).  Heavy lifting is delegated to LAPACK through numpy.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import config
from .errors import NoConvergence, NotHermitian, NotUnitary


def as_cmatrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex128 array."""
    m = np.ascontiguousarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"{name}: expected a 2-D array, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError(f"{name}: entries must be finite")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def max_norm(a: np.ndarray) -> float:
    return float(np.abs(a).max()) if a.size else 0.0


def is_hermitian(a: np.ndarray, tol: float | None = None) -> bool:
    tol = config.HERMITICITY_TOL if tol is None else tol
    return max_norm(a - dagger(a)) <= tol


def is_unitary(u: np.ndarray, tol: float | None = None) -> bool:
    tol = config.UNITARITY_TOL if tol is None else tol
    d = u.shape[0]
    return u.shape[0] == u.shape[1] and max_norm(dagger(u) @ u - np.eye(d)) <= tol


class HermEigen(NamedTuple):
    """Ascending eigenvalues and the unitary matrix of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def herm_eig(a) -> HermEigen:
    """Eigendecomposition of a Hermitian matrix.

    Raises NotHermitian when ``||A - A^dag||_max`` exceeds the configured
    tolerance, NoConvergence when LAPACK gives up.  Eigenvalues are ascending;
    ``V @ diag(w) @ V^dag`` reconstructs the input to 1e-9 relative max-norm.
    """
    a = as_cmatrix(a, "herm_eig")
    if not is_hermitian(a):
        raise NotHermitian(f"residual {max_norm(a - dagger(a)):.3e}")
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from None
    return HermEigen(w, v)


def min_eig(a) -> float:
    """Smallest eigenvalue of the Hermitian part (A + A^dag)/2."""
    a = as_cmatrix(a, "min_eig")
    h = 0.5 * (a + dagger(a))
    try:
        return float(np.linalg.eigvalsh(h)[0])
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from None


class UnitaryEigen(NamedTuple):
    """Eigenphases in (-pi, pi] ascending, with orthonormal column eigenvectors."""

    phases: np.ndarray
    eigenvectors: np.ndarray


def _wrap_phase(theta: np.ndarray) -> np.ndarray:
    # map to (-pi, pi]; atan2 can return -pi for arguments on the cut
    theta = np.where(theta <= -np.pi + 1e-15, theta + 2 * np.pi, theta)
    return theta


def _phase_clusters(phases: np.ndarray, gap: float) -> list[np.ndarray]:
    """Group sorted phases whose circular gap is below ``gap``."""
    n = len(phases)
    if n == 0:
        return []
    breaks = [i + 1 for i in range(n - 1) if phases[i + 1] - phases[i] > gap]
    clusters = [np.arange(a, b) for a, b in zip([0] + breaks, breaks + [n])]
    # the circle closes: a cluster hugging -pi joins one hugging +pi
    if len(clusters) > 1 and (phases[0] + 2 * np.pi - phases[-1]) <= gap:
        clusters[0] = np.concatenate([clusters[-1], clusters[0]])
        clusters.pop()
    return clusters


def unitary_eig(u) -> UnitaryEigen:
    """Spectral decomposition of a unitary matrix.

    A general dense eigensolver provides the raw decomposition; eigenvectors
    inside each eigenphase cluster (circular gap <= config.PHASE_CLUSTER_GAP)
    are re-orthonormalized by QR, which restores an exact spectral
    decomposition because unitary matrices are normal.
    """
    u = as_cmatrix(u, "unitary_eig")
    if not is_unitary(u):
        raise NotUnitary(f"residual {max_norm(dagger(u) @ u - np.eye(u.shape[0])):.3e}")
    try:
        vals, vecs = np.linalg.eig(u)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from None
    phases = _wrap_phase(np.angle(vals))
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    vecs = vecs[:, order]
    for idx in _phase_clusters(phases, config.PHASE_CLUSTER_GAP):
        q, _ = np.linalg.qr(vecs[:, idx])
        vecs[:, idx] = q
    return UnitaryEigen(phases, vecs)


def nullspace(l, tol: float) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical nullspace of ``l``.

    Keeps right-singular vectors whose singular value is below ``tol`` times
    the largest singular value; a matrix whose largest singular value is
    itself below ``tol`` counts as zero (full nullspace).  Operators in this
    package are O(1) scaled, so the absolute floor is safe.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    l = as_cmatrix(l, "nullspace")
    try:
        _, s, vh = np.linalg.svd(l)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from None
    smax = s[0] if s.size else 0.0
    if smax <= tol:
        return np.eye(l.shape[1], dtype=complex)
    keep = np.concatenate([s <= tol * smax, np.ones(l.shape[1] - len(s), dtype=bool)])
    return np.ascontiguousarray(vh.conj().T[:, keep])


def kron(a, b) -> np.ndarray:
    """Kronecker product with (i,j) block equal to ``a[i, j] * b``."""
    return np.kron(as_cmatrix(a, "kron lhs"), as_cmatrix(b, "kron rhs"))
