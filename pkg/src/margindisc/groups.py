"""Finite groups, factor sets, and validated projective representations.

Groups are explicit multiplication tables (element 0 is the identity); no
presentation or word-problem machinery.  A projective representation is a set
of unitaries with ``U_g U_h = c[g, h] U_{gh}`` for a unit-modulus factor set
``c`` obeying the cocycle identity ``c[g,h] c[gh,k] = c[g,hk] c[h,k]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import DimensionMismatch, NotProjective
from .linalg import as_cmatrix, dagger, max_norm


def _triple_iter(n: int, rng_seed: int = 0):
    """All (g, h, k) triples for small groups, a seeded sample otherwise."""
    if n <= config.EXHAUSTIVE_GROUP_LIMIT:
        return itertools.product(range(n), repeat=3)
    rng = np.random.default_rng(rng_seed)
    return (tuple(t) for t in rng.integers(0, n, size=(config.SAMPLED_CHECKS, 3)))


def _pair_iter(n: int, dim: int = 1, rng_seed: int = 0):
    """Group-element pairs to check: exhaustive when affordable.

    Matrix checks cost O(dim^3) per pair, so the pair count is capped by a
    flop budget; small groups on small spaces still get every pair.
    """
    budget_pairs = max(64, int(config.PAIR_CHECK_FLOP_BUDGET // max(dim**3, 1)))
    if n <= config.EXHAUSTIVE_GROUP_LIMIT and n * n <= budget_pairs:
        return itertools.product(range(n), repeat=2)
    rng = np.random.default_rng(rng_seed)
    count = min(config.SAMPLED_CHECKS, budget_pairs)
    return (tuple(t) for t in rng.integers(0, n, size=(count, 2)))


@dataclass(frozen=True)
class FiniteGroup:
    """Multiplication table ``table[g, h] = g*h`` with identity element 0."""

    table: np.ndarray
    name: str = ""
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        n = t.shape[0]
        if t.shape != (n, n):
            raise ValueError(f"multiplication table must be square, got {t.shape}")
        if t.min() < 0 or t.max() >= n:
            raise ValueError("table entries must be element indices")
        for g in range(n):
            if sorted(t[g]) != list(range(n)) or sorted(t[:, g]) != list(range(n)):
                raise ValueError(f"table is not a Latin square at row/column {g}")
        if not (np.array_equal(t[0], np.arange(n)) and np.array_equal(t[:, 0], np.arange(n))):
            raise ValueError("element 0 must act as the identity")
        for g, h, k in _triple_iter(n):
            if t[t[g, h], k] != t[g, t[h, k]]:
                raise ValueError(f"associativity fails at ({g}, {h}, {k})")
        inv = np.full(n, -1, dtype=np.int64)
        for g in range(n):
            inv[g] = int(np.nonzero(t[g] == 0)[0][0])
        if any(t[g, inv[g]] != 0 or t[inv[g], g] != 0 for g in range(n)):
            raise ValueError("inverses do not verify")
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "inverse", inv)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inv(self, g: int) -> int:
        return int(self.inverse[g])

    def generators(self) -> list[int]:
        """A small generating set, found greedily by closure."""
        gens: list[int] = []
        closure = {0}
        for g in range(1, self.order):
            if g not in closure:
                gens.append(g)
                frontier = [g]
                closure.add(g)
                while frontier:
                    x = frontier.pop()
                    for y in list(closure):
                        for z in (self.mul(x, y), self.mul(y, x)):
                            if z not in closure:
                                closure.add(z)
                                frontier.append(z)
        return gens

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        idx = np.arange(n)
        return cls((idx[:, None] + idx[None, :]) % n, name=f"Z{n}")

    @classmethod
    def direct_product(cls, a: "FiniteGroup", b: "FiniteGroup") -> "FiniteGroup":
        na, nb = a.order, b.order
        table = np.empty((na * nb, na * nb), dtype=np.int64)
        for (i, j), (k, l) in itertools.product(
            itertools.product(range(na), range(nb)), repeat=2
        ):
            table[i * nb + j, k * nb + l] = a.mul(i, k) * nb + b.mul(j, l)
        return cls(table, name=f"{a.name or 'G'}x{b.name or 'H'}")

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        """S_n with elements in lexicographic order (identity first).

        Composition convention: ``(p*q)(x) = p(q(x))``.
        """
        perms = list(itertools.permutations(range(n)))
        index = {p: i for i, p in enumerate(perms)}
        table = np.empty((len(perms), len(perms)), dtype=np.int64)
        for i, p in enumerate(perms):
            for j, q in enumerate(perms):
                table[i, j] = index[tuple(p[q[x]] for x in range(n))]
        return cls(table, name=f"S{n}")

    @classmethod
    def from_permutations(cls, generators) -> "FiniteGroup":
        """Close a set of permutation tuples into a group table.

        The identity is placed first; enumeration is capped at
        config.CLOSURE_CAP elements.
        """
        gens = [tuple(g) for g in generators]
        n = len(gens[0])
        ident = tuple(range(n))
        elements = [ident]
        seen = {ident}
        frontier = [ident]
        while frontier:
            x = frontier.pop(0)
            for g in gens:
                y = tuple(g[x[i]] for i in range(n))
                if y not in seen:
                    if len(elements) >= config.CLOSURE_CAP:
                        raise ValueError(f"closure exceeds cap {config.CLOSURE_CAP}")
                    seen.add(y)
                    elements.append(y)
                    frontier.append(y)
        index = {p: i for i, p in enumerate(elements)}
        table = np.empty((len(elements), len(elements)), dtype=np.int64)
        for i, p in enumerate(elements):
            for j, q in enumerate(elements):
                table[i, j] = index[tuple(p[q[x]] for x in range(n))]
        return cls(table)


@dataclass(frozen=True)
class FactorSet:
    """Unit-modulus table ``c[g, h]`` satisfying the cocycle identity."""

    c: np.ndarray

    def __post_init__(self):
        c = as_cmatrix(self.c, "factor set")
        n = c.shape[0]
        if c.shape != (n, n):
            raise ValueError("factor set must be square")
        if np.abs(np.abs(c) - 1.0).max() > config.FACTOR_MODULUS_TOL:
            raise ValueError("factor set entries must have unit modulus")
        object.__setattr__(self, "c", c)

    @classmethod
    def trivial(cls, n: int) -> "FactorSet":
        return cls(np.ones((n, n), dtype=complex))

    def is_trivial(self) -> bool:
        return bool(np.abs(self.c - 1.0).max() <= config.FACTOR_MODULUS_TOL)

    def cocycle_residual(self, group: FiniteGroup) -> float:
        t, c = group.table, self.c
        worst = 0.0
        for g, h, k in _triple_iter(group.order):
            lhs = c[g, h] * c[t[g, h], k]
            rhs = c[g, t[h, k]] * c[h, k]
            worst = max(worst, abs(lhs - rhs))
        return worst


@dataclass(frozen=True)
class ProjectiveRep:
    """Unitary matrices ``matrices[g]`` realizing ``U_g U_h = c[g,h] U_{gh}``."""

    group: FiniteGroup
    factor_set: FactorSet
    matrices: np.ndarray

    def __post_init__(self):
        mats = np.ascontiguousarray(self.matrices, dtype=complex)
        n = self.group.order
        if mats.shape[0] != n or mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise DimensionMismatch(
                f"need {n} square matrices, got array of shape {mats.shape}"
            )
        if self.factor_set.c.shape[0] != n:
            raise DimensionMismatch("factor set order does not match the group")
        object.__setattr__(self, "matrices", mats)
        report = validate_rep(self)
        if not report.ok:
            raise ValueError("invalid projective representation: " + "; ".join(report.failures))

    @property
    def dimension(self) -> int:
        return self.matrices.shape[1]

    def conjugate(self, g: int, a: np.ndarray) -> np.ndarray:
        """U_g A U_g^dag (independent of the phase convention of U_g)."""
        u = self.matrices[g]
        return u @ a @ dagger(u)


@dataclass(frozen=True)
class RepValidation:
    unitarity: float
    homomorphism: float
    cocycle: float
    identity: float
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_rep(rep: ProjectiveRep) -> RepValidation:
    """Max residual of each representation axiom; failures listed, not raised."""
    group, c, mats = rep.group, rep.factor_set.c, rep.matrices
    n, d = group.order, rep.dimension
    failures = []

    unit = max(max_norm(dagger(u) @ u - np.eye(d)) for u in mats)
    if unit > config.UNITARITY_TOL:
        failures.append(f"unitarity residual {unit:.3e}")

    hom = 0.0
    for g, h in _pair_iter(n, d):
        hom = max(hom, max_norm(mats[g] @ mats[h] - c[g, h] * mats[group.table[g, h]]))
    if hom > config.REP_PRODUCT_TOL:
        failures.append(f"product residual {hom:.3e}")

    coc = rep.factor_set.cocycle_residual(group)
    if coc > config.FACTOR_MODULUS_TOL * 10:
        failures.append(f"cocycle residual {coc:.3e}")

    phase = np.trace(mats[0]) / d
    ident = max_norm(mats[0] - phase * np.eye(d)) if abs(phase) > 0.5 else 1.0
    if ident > config.REP_PRODUCT_TOL or abs(abs(phase) - 1.0) > config.REP_PRODUCT_TOL:
        failures.append(f"identity element residual {ident:.3e}")

    return RepValidation(unit, hom, coc, ident, tuple(failures))


def infer_factor_set(group: FiniteGroup, matrices) -> FactorSet:
    """Recover ``c[g, h] = tr(U_{gh}^dag U_g U_h) / D`` from the matrices.

    Raises NotProjective when some product U_g U_h is not proportional to
    U_{gh} within config.PROPORTIONALITY_TOL.
    """
    mats = np.ascontiguousarray(matrices, dtype=complex)
    n, d = group.order, mats.shape[1]
    if mats.shape[0] != n:
        raise DimensionMismatch(f"need {n} matrices, got {mats.shape[0]}")
    c = np.empty((n, n), dtype=complex)
    for g in range(n):
        for h in range(n):
            prod = mats[g] @ mats[h]
            target = mats[group.table[g, h]]
            scale = np.trace(dagger(target) @ prod) / d
            if abs(abs(scale) - 1.0) > config.PROPORTIONALITY_TOL or max_norm(
                prod - scale * target
            ) > config.PROPORTIONALITY_TOL:
                raise NotProjective(
                    f"U_{g} U_{h} not proportional to U_{group.table[g, h]}"
                )
            c[g, h] = scale / abs(scale)
    fs = FactorSet(c)
    resid = fs.cocycle_residual(group)
    if resid > config.FACTOR_MODULUS_TOL * 10:
        raise NotProjective(f"inferred factor set breaks the cocycle identity ({resid:.3e})")
    return fs


def projective_rep(group: FiniteGroup, matrices, factor_set: FactorSet | None = None) -> ProjectiveRep:
    """Build a validated ProjectiveRep, inferring the factor set if absent."""
    if factor_set is None:
        factor_set = infer_factor_set(group, matrices)
    return ProjectiveRep(group, factor_set, np.ascontiguousarray(matrices, dtype=complex))


def permutation_action_rep(group: FiniteGroup, perms, local_dim: int) -> ProjectiveRep:
    """Ordinary representation permuting the factors of (C^d)^{otimes N}.

    ``perms[g]`` is the permutation tuple for group element g; the operator
    moves the content of slot j to slot perms[g][j].
    """
    n_sites = len(perms[0])
    dim = local_dim**n_sites
    mats = np.zeros((group.order, dim, dim), dtype=complex)
    strides = [local_dim ** (n_sites - 1 - j) for j in range(n_sites)]
    for g, p in enumerate(perms):
        for src in range(dim):
            digits = [(src // strides[j]) % local_dim for j in range(n_sites)]
            dst = sum(digits[j] * strides[p[j]] for j in range(n_sites))
            mats[g, dst, src] = 1.0
    return ProjectiveRep(group, FactorSet.trivial(group.order), mats)
