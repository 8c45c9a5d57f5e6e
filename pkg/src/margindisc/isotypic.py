"""Isotypic decomposition of (projective) representations.

The engine splits a validated representation into irreducible blocks with
dimensions ``d``, multiplicities ``m``, and a symmetry-adapted basis aligned
across multiplicity copies, so that every copy of an irrep transforms with the
same matrices ``D(g)``.

Method: a random Hermitian element of the commutant algebra is drawn by
twirling a seeded Gaussian matrix over the group; for a generic draw each of
its eigenspaces carries exactly one irreducible copy.  Copies are grouped into
equivalence classes through character inner products (Schur orthogonality holds
for projective irreps sharing a factor set), and every copy is rotated onto the
class reference via a group-averaged intertwiner.  Bad draws are detected by
non-integral character products and retried with a fresh seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import AlignmentFailure, DegenerateDraw
from .groups import ProjectiveRep
from .linalg import dagger, max_norm, nullspace
from .sampling import random_hermitian


@dataclass(frozen=True)
class IrrepBlock:
    """One inequivalent irrep: its copies' aligned basis and shared matrices.

    ``basis[:, b, a]`` is the basis vector of copy ``b`` (0-based) and
    internal index ``a``; ``rep_matrices[g]`` is the d x d unitary with
    ``U_g basis[:, b, :] = basis[:, b, :] @ rep_matrices[g]`` for every copy.
    """

    irrep_id: int
    dim: int
    multiplicity: int
    basis: np.ndarray
    rep_matrices: np.ndarray


@dataclass(frozen=True)
class IrrepDecomposition:
    rep: ProjectiveRep
    blocks: tuple[IrrepBlock, ...]
    seed: int

    @property
    def dimension(self) -> int:
        return self.rep.dimension

    @property
    def group_order(self) -> int:
        return self.rep.group.order

    @property
    def total_basis(self) -> np.ndarray:
        """Unitary change of basis with columns ordered block, copy, index."""
        cols = [
            blk.basis[:, b, a]
            for blk in self.blocks
            for b in range(blk.multiplicity)
            for a in range(blk.dim)
        ]
        return np.ascontiguousarray(np.stack(cols, axis=1))

    def reconstruction_residual(self) -> float:
        """Max-norm gap between the input matrices and their block rebuild."""
        basis = self.total_basis
        worst = 0.0
        for g in range(self.group_order):
            blocks = [blk.rep_matrices[g] for blk in self.blocks for _ in range(blk.multiplicity)]
            rebuilt = basis @ _block_diag(blocks) @ dagger(basis)
            worst = max(worst, max_norm(self.rep.matrices[g] - rebuilt))
        return worst


def _block_diag(mats: list[np.ndarray]) -> np.ndarray:
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=complex)
    k = 0
    for m in mats:
        out[k : k + m.shape[0], k : k + m.shape[0]] = m
        k += m.shape[0]
    return out


def commutant_element(rep: ProjectiveRep, rng) -> np.ndarray:
    """Random Hermitian element of {X : U_g X = X U_g for all g}."""
    h = random_hermitian(rng, rep.dimension)
    acc = np.zeros_like(h)
    for g in range(rep.group.order):
        acc += rep.conjugate(g, h)
    acc /= rep.group.order
    return 0.5 * (acc + dagger(acc))


def commutant_basis(rep: ProjectiveRep, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (k, D, D) of the commutant algebra.

    Solves the stacked linear maps ``X -> U_g X - X U_g`` over a generating
    set; the dimension equals the sum of squared multiplicities.
    """
    d = rep.dimension
    gens = rep.group.generators()
    if not gens:
        basis = np.eye(d * d, dtype=complex)
        return basis.reshape(d * d, d, d)
    eye = np.eye(d)
    rows = [np.kron(rep.matrices[g], eye) - np.kron(eye, rep.matrices[g].T) for g in gens]
    ns = nullspace(np.vstack(rows), tol)
    return np.ascontiguousarray(ns.T.reshape(-1, d, d))


def _cluster_indices(w: np.ndarray) -> list[np.ndarray]:
    tol = config.CLUSTER_REL_GAP * max(float(np.abs(w).max()), 1e-12)
    breaks = [i + 1 for i in range(len(w) - 1) if w[i + 1] - w[i] > tol]
    return [np.arange(a, b) for a, b in zip([0] + breaks, breaks + [len(w)])]


def _characters(copies: list[np.ndarray], mats: np.ndarray) -> np.ndarray:
    return np.stack(
        [np.einsum("pa,gpq,qa->g", v.conj(), mats, v, optimize=True) for v in copies]
    )


def _intertwiner(d_ref: np.ndarray, d_copy: np.ndarray, rng) -> np.ndarray:
    """Unitary T with D_ref(g) T = T D_copy(g) for all g, deterministic phase."""
    d = d_ref.shape[1]
    for _ in range(3):
        y = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        t = np.einsum("gab,bc,gdc->ad", d_ref, y, d_copy.conj(), optimize=True)
        t /= d_ref.shape[0]
        scale = np.trace(t @ dagger(t)).real / d
        if scale > 1e-12:
            t /= np.sqrt(scale)
            flat = np.argmax(np.abs(t))
            entry = t.flat[flat]
            t *= entry.conjugate() / abs(entry)
            return t
    raise AlignmentFailure("no invertible intertwiner found; copies not equivalent?")


def decompose(rep: ProjectiveRep, seed: int = 0) -> IrrepDecomposition:
    """Decompose ``rep`` into aligned irreducible blocks.

    Deterministic given (rep, seed).  Raises DegenerateDraw after
    config.DECOMPOSE_RETRIES reseeded attempts, AlignmentFailure when an
    intertwiner does not verify.
    """
    last = None
    for attempt in range(config.DECOMPOSE_RETRIES):
        try:
            return _decompose_once(rep, seed + attempt, seed)
        except DegenerateDraw as exc:
            last = exc
    raise DegenerateDraw(f"retries exhausted: {last}")


def _decompose_once(rep: ProjectiveRep, draw_seed: int, seed: int) -> IrrepDecomposition:
    mats = rep.matrices
    n, dim = rep.group.order, rep.dimension
    rng = np.random.default_rng(draw_seed)

    r = commutant_element(rep, rng)
    w, v = np.linalg.eigh(r)
    copies = [np.ascontiguousarray(v[:, idx]) for idx in _cluster_indices(w)]

    chi = _characters(copies, mats)
    gram = chi.conj() @ chi.T / n
    rounded = np.round(gram.real)
    if np.abs(gram - rounded).max() > config.CHAR_INT_TOL:
        raise DegenerateDraw(
            f"character products not integral (worst {np.abs(gram - rounded).max():.3e})"
        )
    if np.abs(np.diag(rounded) - 1.0).max() > 0:
        raise DegenerateDraw("an eigenvalue cluster is not a single irreducible copy")

    classes: list[list[int]] = []
    for i in range(len(copies)):
        for cls in classes:
            if rounded[cls[0], i] == 1:
                if copies[cls[0]].shape[1] != copies[i].shape[1]:
                    raise DegenerateDraw("equivalent copies with mismatched dimensions")
                cls.append(i)
                break
        else:
            classes.append([i])
    classes.sort(key=lambda cls: (copies[cls[0]].shape[1], len(cls), cls[0]))

    blocks = []
    for sigma, cls in enumerate(classes):
        ref = copies[cls[0]]
        d = ref.shape[1]
        d_ref = np.einsum("pa,gpq,qb->gab", ref.conj(), mats, ref, optimize=True)
        aligned = [ref]
        for i in cls[1:]:
            d_copy = np.einsum(
                "pa,gpq,qb->gab", copies[i].conj(), mats, copies[i], optimize=True
            )
            t = _intertwiner(d_ref, d_copy, rng)
            resid = max(
                max_norm(d_ref[g] @ t - t @ d_copy[g]) for g in range(n)
            )
            if resid > config.INTERTWINER_TOL:
                raise AlignmentFailure(f"intertwiner residual {resid:.3e}")
            aligned.append(copies[i] @ dagger(t))
        basis = np.ascontiguousarray(np.stack(aligned, axis=1))  # (D, m, d)
        block = IrrepBlock(sigma, d, len(cls), basis, d_ref)
        _verify_block(rep, block)
        blocks.append(block)

    if sum(b.dim * b.multiplicity for b in blocks) != dim:
        raise DegenerateDraw("block dimensions do not add up to the space dimension")
    _verify_cross_orthogonality(blocks, n)

    dec = IrrepDecomposition(rep, tuple(blocks), seed)
    basis = dec.total_basis
    if max_norm(dagger(basis) @ basis - np.eye(dim)) > config.BASIS_UNITARITY_TOL:
        raise DegenerateDraw("assembled basis is not unitary")
    return dec


def _verify_block(rep: ProjectiveRep, block: IrrepBlock) -> None:
    n = rep.group.order
    worst = 0.0
    for g in range(n):
        lhs = np.einsum("pq,qba->pba", rep.matrices[g], block.basis, optimize=True)
        rhs = np.einsum("pbc,ca->pba", block.basis, block.rep_matrices[g], optimize=True)
        worst = max(worst, max_norm(lhs - rhs))
    if worst > config.TRANSFORM_TOL:
        raise DegenerateDraw(f"transformation property residual {worst:.3e}")

    d = block.dim
    gram = np.einsum("gab,gcd->abcd", block.rep_matrices.conj(), block.rep_matrices)
    target = np.einsum("ac,bd->abcd", np.eye(d), np.eye(d)) * (n / d)
    if max_norm(gram - target) > config.ORTHOGONALITY_TOL:
        raise DegenerateDraw("Schur orthogonality residual too large")


def _verify_cross_orthogonality(blocks: list[IrrepBlock], n: int) -> None:
    for i, a in enumerate(blocks):
        for b in blocks[i + 1 :]:
            cross = np.einsum("gab,gcd->abcd", a.rep_matrices.conj(), b.rep_matrices)
            if max_norm(cross) > config.ORTHOGONALITY_TOL:
                raise DegenerateDraw("cross-block orthogonality residual too large")


def multiplicity_signature(dec: IrrepDecomposition) -> list[tuple[int, int]]:
    """Sorted (dimension, multiplicity) pairs of the decomposition."""
    return sorted((b.dim, b.multiplicity) for b in dec.blocks)


def span_rank(rep: ProjectiveRep) -> int:
    """Rank of the span of the vectorized representation matrices.

    Equals the sum of squared dimensions of irreps present; a decomposition
    cross-check that never looks at the decomposition itself.
    """
    flat = rep.matrices.reshape(rep.group.order, -1)
    return int(np.linalg.matrix_rank(flat, tol=1e-8))
