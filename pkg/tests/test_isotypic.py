import itertools

import numpy as np

from margindisc.catalog import color_coding, phase_shift, superdense
from margindisc.groups import FactorSet, FiniteGroup, ProjectiveRep
from margindisc.isotypic import (
    commutant_basis,
    decompose,
    multiplicity_signature,
    span_rank,
)
from margindisc.linalg import max_norm


def s3_defining_rep():
    group = FiniteGroup.symmetric(3)
    perms = list(itertools.permutations(range(3)))
    mats = np.zeros((6, 3, 3), dtype=complex)
    for g, p in enumerate(perms):
        for j in range(3):
            mats[g, p[j], j] = 1.0
    return ProjectiveRep(group, FactorSet.trivial(6), mats)


def z3_regular_rep():
    group = FiniteGroup.cyclic(3)
    mats = np.zeros((3, 3, 3), dtype=complex)
    for g in range(3):
        for j in range(3):
            mats[g, (j + g) % 3, j] = 1.0
    return ProjectiveRep(group, FactorSet.trivial(3), mats)


def trivial_group_rep(dim):
    group = FiniteGroup(np.zeros((1, 1), dtype=np.int64))
    return ProjectiveRep(group, FactorSet.trivial(1), np.eye(dim, dtype=complex)[None])


def test_commutant_dimension_irreducible():
    assert commutant_basis(superdense(2).rep).shape[0] == 1


def test_commutant_dimension_two_lines():
    assert commutant_basis(phase_shift(3, 1).rep).shape[0] == 2


def test_commutant_dimension_trivial_group():
    assert commutant_basis(trivial_group_rep(3)).shape[0] == 9


def test_commutant_elements_commute():
    rep = s3_defining_rep()
    basis = commutant_basis(rep)
    assert basis.shape[0] == 2  # (1,1) + (2,1) blocks
    for x in basis:
        for u in rep.matrices:
            assert max_norm(u @ x - x @ u) <= 1e-8


def test_decompose_pauli_single_block():
    dec = decompose(superdense(2).rep, 0)
    assert multiplicity_signature(dec) == [(2, 1)]


def test_decompose_s3_defining():
    dec = decompose(s3_defining_rep(), 0)
    assert multiplicity_signature(dec) == [(1, 1), (2, 1)]


def test_decompose_z3_regular():
    dec = decompose(z3_regular_rep(), 0)
    assert multiplicity_signature(dec) == [(1, 1), (1, 1), (1, 1)]


def test_decompose_schur_weyl_s4():
    dec = decompose(color_coding(4, 2).rep, 0)
    assert multiplicity_signature(dec) == [(1, 5), (2, 1), (3, 3)]


def test_decompose_dimension_bookkeeping():
    for prob in (phase_shift(5, 2), color_coding(3, 2), superdense(3)):
        dec = decompose(prob.rep, 0)
        assert sum(b.dim * b.multiplicity for b in dec.blocks) == prob.rep.dimension


def test_decompose_commutant_and_span_cross_checks():
    for prob in (phase_shift(3, 2), color_coding(3, 2), superdense(2)):
        dec = decompose(prob.rep, 0)
        sig = multiplicity_signature(dec)
        assert commutant_basis(prob.rep).shape[0] == sum(m * m for _, m in sig)
        assert span_rank(prob.rep) == sum(d * d for d, _ in sig)


def test_decompose_reconstruction():
    for prob in (phase_shift(3, 2), color_coding(3, 2), superdense(3)):
        dec = decompose(prob.rep, 0)
        assert dec.reconstruction_residual() <= 1e-6


def test_decompose_basis_unitary():
    dec = decompose(color_coding(3, 2).rep, 0)
    basis = dec.total_basis
    assert max_norm(basis.conj().T @ basis - np.eye(8)) <= 1e-8


def test_decompose_transformation_property():
    rep = color_coding(3, 2).rep
    dec = decompose(rep, 0)
    for blk in dec.blocks:
        for g in range(rep.group.order):
            for b in range(blk.multiplicity):
                lhs = rep.matrices[g] @ blk.basis[:, b, :]
                rhs = blk.basis[:, b, :] @ blk.rep_matrices[g]
                assert max_norm(lhs - rhs) <= 1e-7


def test_decompose_orthogonality_relations():
    rep = color_coding(3, 2).rep
    dec = decompose(rep, 0)
    n = rep.group.order
    for blk in dec.blocks:
        d = blk.dim
        gram = np.einsum("gab,gcd->abcd", blk.rep_matrices.conj(), blk.rep_matrices)
        target = np.einsum("ac,bd->abcd", np.eye(d), np.eye(d)) * (n / d)
        assert max_norm(gram - target) <= 1e-6
    for i, a in enumerate(dec.blocks):
        for b in dec.blocks[i + 1 :]:
            cross = np.einsum("gab,gcd->abcd", a.rep_matrices.conj(), b.rep_matrices)
            assert max_norm(cross) <= 1e-6


def test_decompose_character_integrality():
    rep = color_coding(4, 2).rep
    dec = decompose(rep, 0)
    n = rep.group.order
    chars = []
    for blk in dec.blocks:
        chars.append(np.einsum("gaa->g", blk.rep_matrices))
    for i, ci in enumerate(chars):
        for j, cj in enumerate(chars):
            inner = (ci.conj() @ cj) / n
            expected = 1.0 if i == j else 0.0
            assert abs(inner - expected) <= 0.01


def test_decompose_seed_independent_signature():
    rep = color_coding(3, 2).rep
    sig1 = multiplicity_signature(decompose(rep, 1))
    sig2 = multiplicity_signature(decompose(rep, 20_000))
    assert sig1 == sig2


def test_decompose_deterministic_given_seed():
    rep = phase_shift(5, 2).rep
    d1 = decompose(rep, 3)
    d2 = decompose(rep, 3)
    assert max_norm(d1.total_basis - d2.total_basis) == 0.0


def test_projective_decomposition_superdense_d4():
    dec = decompose(superdense(4).rep, 0)
    assert multiplicity_signature(dec) == [(4, 1)]
