"""Closed-form constructors for the example families.

Three families ship with exact rational kappa values: qubit phase shifts over
Z_K (with N-fold parallel queries), quantum color coding (symmetric-group
permutations of N systems of d colors, via hook length/content formulas), and
generalized-Pauli superdense coding over Z_d x Z_d, plus the contrasting
ordinary qutrit phase family on the same group.  All integer arithmetic is
exact; floats appear only in emitted convenience columns.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import config
from .errors import CapExceeded
from .group_disc import KappaSummary, kappa_from_signature
from .groups import FactorSet, FiniteGroup, ProjectiveRep, permutation_action_rep


# ---------------------------------------------------------------------------
# partitions and hook formulas


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing positive parts."""

    parts: tuple[int, ...]

    def __post_init__(self):
        p = tuple(int(x) for x in self.parts)
        if any(x <= 0 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise ValueError(f"not a partition: {p}")
        object.__setattr__(self, "parts", p)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def rows(self) -> int:
        return len(self.parts)

    def hooks(self) -> list[int]:
        """Hook lengths cell by cell (row-major)."""
        parts = self.parts
        cols = [sum(1 for r in parts if r > j) for j in range(parts[0])]
        return [
            (parts[i] - j) + (cols[j] - i) - 1
            for i in range(len(parts))
            for j in range(parts[i])
        ]

    def contents(self) -> list[int]:
        return [j - i for i in range(len(self.parts)) for j in range(self.parts[i])]


def partitions(n: int, max_rows: int | None = None) -> Iterator[Partition]:
    """Partitions of n in reverse lexicographic order, row count capped."""
    if n > config.PARTITION_N_CAP:
        raise CapExceeded(f"partition enumeration capped at n = {config.PARTITION_N_CAP}")

    def gen(remaining: int, cap: int, prefix: tuple[int, ...]):
        if remaining == 0:
            yield Partition(prefix)
            return
        if max_rows is not None and len(prefix) == max_rows:
            return
        for part in range(min(cap, remaining), 0, -1):
            yield from gen(remaining - part, part, prefix + (part,))

    yield from gen(n, n, ())


def hook_dimension(lam: Partition) -> int:
    """f_lambda = n! / product of hooks (symmetric-group irrep dimension)."""
    num = math.factorial(lam.n)
    den = math.prod(lam.hooks())
    assert num % den == 0
    return num // den


def content_multiplicity(lam: Partition, d: int) -> int:
    """s_lambda(d) = prod (d + content) / hook (GL(d) irrep dimension).

    Zero when the partition has more than d rows.
    """
    if lam.rows > d:
        return 0
    value = Fraction(1)
    for c, h in zip(lam.contents(), lam.hooks()):
        value *= Fraction(d + c, h)
    assert value.denominator == 1
    return int(value)


# ---------------------------------------------------------------------------
# catalog problems


@dataclass(frozen=True)
class CatalogProblem:
    """A named instance with closed-form constants and (optionally) matrices.

    ``rep`` is None when the representation dimension exceeds the build cap;
    the closed-form kappa data is exact either way.
    """

    family: str
    params: dict
    kappa_summary: KappaSummary
    rep: ProjectiveRep | None
    dimension: int
    extras: dict

    @property
    def kappa(self) -> Fraction:
        return self.kappa_summary.kappa

    @property
    def kappa_ancilla(self) -> Fraction:
        return self.kappa_summary.kappa_ancilla

    @property
    def r_star(self) -> int:
        return self.kappa_summary.r_star

    def label(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.family}({inner})"


def phase_shift(K: int, N: int = 1, with_matrices: bool = True) -> CatalogProblem:
    """N-fold parallel qubit phase shifts over Z_K.

    U_k = diag(1, e^{2 pi i k / K}) tensored N times; every irrep is one
    dimensional (weight = number of excited qubits mod K), so
    kappa = kappa_ancilla = min(N + 1, K) / K and ancillas are useless.
    With ``with_matrices=False`` (or beyond the storage cap) only the exact
    closed-form data is produced.
    """
    if K < 2 or N < 1:
        raise ValueError("need K >= 2 and N >= 1")
    dim = 2**N
    if dim > config.PHASE_SHIFT_DIM_CAP:
        raise CapExceeded(f"2^{N} exceeds the {config.PHASE_SHIFT_DIM_CAP} dimension cap")
    rep = None
    if with_matrices and K * dim * dim <= config.REP_STORAGE_CAP:
        group = FiniteGroup.cyclic(K)
        single = [np.diag([1.0, np.exp(2j * np.pi * k / K)]) for k in range(K)]
        mats = []
        for k in range(K):
            u = np.eye(1, dtype=complex)
            for _ in range(N):
                u = np.kron(u, single[k])
            mats.append(u)
        rep = ProjectiveRep(group, FactorSet.trivial(K), np.stack(mats))

    mult = [0] * K
    for w in range(N + 1):
        mult[w % K] += math.comb(N, w)
    signature = [(1, m) for m in mult if m > 0]
    summary = kappa_from_signature(signature, K)
    assert summary.kappa == Fraction(min(N + 1, K), K)
    return CatalogProblem(
        family="phase-shift",
        params={"K": K, "N": N},
        kappa_summary=summary,
        rep=rep,
        dimension=dim,
        extras={"weight_multiplicities": mult},
    )


def color_coding(N: int, d: int, with_matrices: bool = True) -> CatalogProblem:
    """Permutations of N systems with d colors: ordinary rep of S_N.

    Block data comes from Schur-Weyl duality: for each partition of N with
    at most d rows, the irrep dimension is the hook length formula f_lambda
    and its multiplicity the hook content formula s_lambda(d).  Matrices are
    built only when d^N and the total N! x (d^N)^2 storage fit the caps.
    """
    if N < 2 or d < 2:
        raise ValueError("need N >= 2 and d >= 2")
    signature = []
    for lam in partitions(N, max_rows=d):
        signature.append((hook_dimension(lam), content_multiplicity(lam, d)))
    summary = kappa_from_signature(signature, math.factorial(N))

    rep = None
    dim = d**N
    if (
        with_matrices
        and dim <= config.COLOR_CODING_DIM_CAP
        and math.factorial(N) * dim * dim <= config.REP_STORAGE_CAP
    ):
        group = FiniteGroup.symmetric(N)
        perms = list(itertools.permutations(range(N)))
        rep = permutation_action_rep(group, perms, d)
    return CatalogProblem(
        family="color-coding",
        params={"N": N, "d": d},
        kappa_summary=summary,
        rep=rep,
        dimension=dim,
        extras={},
    )


def color_coding_curve(max_n: int, d_values=None) -> list[dict]:
    """Plot data for kappa/kappa_ancilla across (N, d).

    Each row carries exact rationals, floats, and the rescaled abscissa
    (d - 2 sqrt(N)) / N^(1/6) used to display the approach to the large-N
    regime (the limiting distribution itself is out of scope).
    """
    if max_n > config.PARTITION_N_CAP:
        raise CapExceeded(f"max N capped at {config.PARTITION_N_CAP}")
    rows = []
    for n in range(2, max_n + 1):
        ds = list(d_values) if d_values is not None else list(range(2, n + 1))
        for d in ds:
            signature = [
                (hook_dimension(lam), content_multiplicity(lam, d))
                for lam in partitions(n, max_rows=d)
            ]
            summary = kappa_from_signature(signature, math.factorial(n))
            rows.append(
                {
                    "N": n,
                    "d": d,
                    "kappa_num": summary.kappa.numerator,
                    "kappa_den": summary.kappa.denominator,
                    "kappaA_num": summary.kappa_ancilla.numerator,
                    "kappaA_den": summary.kappa_ancilla.denominator,
                    "kappa_float": float(summary.kappa),
                    "kappaA_float": float(summary.kappa_ancilla),
                    "rescaled_x": (d - 2.0 * math.sqrt(n)) / n ** (1.0 / 6.0),
                }
            )
    return rows


CURVE_COLUMNS = [
    "N",
    "d",
    "kappa_num",
    "kappa_den",
    "kappaA_num",
    "kappaA_den",
    "kappa_float",
    "kappaA_float",
    "rescaled_x",
]


def curve_csv(rows: list[dict]) -> str:
    lines = [",".join(CURVE_COLUMNS)]
    for row in rows:
        lines.append(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c]) for c in CURVE_COLUMNS))
    return "\n".join(lines) + "\n"


def shift_matrix(d: int) -> np.ndarray:
    """X with X|a> = |a - 1 mod d> (i.e. X = sum_a |a><a+1|)."""
    x = np.zeros((d, d), dtype=complex)
    for a in range(d):
        x[a, (a + 1) % d] = 1.0
    return x


def clock_matrix(d: int) -> np.ndarray:
    """Z = diag(1, w, ..., w^{d-1}) with w = e^{2 pi i / d}."""
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def superdense(d: int) -> CatalogProblem:
    """Generalized-Pauli family U_{k,l} = X^k Z^l over Z_d x Z_d.

    The factor set e^{-2 pi i l k' / d} is nontrivial; the representation is
    the unique irrep for that factor set, so kappa = 1/d while
    kappa_ancilla = 1: an ancilla of dimension d makes the d^2 outputs of
    the maximally entangled input exactly orthogonal.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    zd = FiniteGroup.cyclic(d)
    group = FiniteGroup.direct_product(zd, zd)
    x, z = shift_matrix(d), clock_matrix(d)
    mats = np.stack(
        [
            np.linalg.matrix_power(x, k) @ np.linalg.matrix_power(z, l)
            for k in range(d)
            for l in range(d)
        ]
    )
    c = np.empty((d * d, d * d), dtype=complex)
    for k in range(d):
        for l in range(d):
            for kp in range(d):
                for lp in range(d):
                    c[k * d + l, kp * d + lp] = np.exp(-2j * np.pi * l * kp / d)
    rep = ProjectiveRep(group, FactorSet(c), mats)
    summary = kappa_from_signature([(d, 1)], d * d)
    bell = np.zeros(d * d, dtype=complex)
    for a in range(d):
        bell[a * d + a] = 1.0 / math.sqrt(d)
    return CatalogProblem(
        family="superdense",
        params={"d": d},
        kappa_summary=summary,
        rep=rep,
        dimension=d,
        extras={"entangled_input": bell},
    )


def superdense_output_gram(problem: CatalogProblem) -> np.ndarray:
    """Gram matrix of the d^2 entangled outputs (U_{k,l} x 1)|bell>."""
    d = problem.params["d"]
    bell = problem.extras["entangled_input"]
    outs = [np.kron(u, np.eye(d)) @ bell for u in problem.rep.matrices]
    gram = np.empty((d * d, d * d), dtype=complex)
    for i, a in enumerate(outs):
        for j, b in enumerate(outs):
            gram[i, j] = a.conj() @ b
    return gram


def qutrit_phase_rep(d: int) -> CatalogProblem:
    """Ordinary diagonal family V_{k,l} on a qutrit over the same Z_d x Z_d.

    Three one-dimensional irreps are present (out of d^2), each once:
    kappa = kappa_ancilla = 3/d^2 and any ancilla is useless, in contrast
    with the projective family of :func:`superdense`.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    zd = FiniteGroup.cyclic(d)
    group = FiniteGroup.direct_product(zd, zd)
    mats = np.stack(
        [
            np.diag(
                [1.0, np.exp(2j * np.pi * k / d), np.exp(2j * np.pi * l / d)]
            )
            for k in range(d)
            for l in range(d)
        ]
    )
    rep = ProjectiveRep(group, FactorSet.trivial(d * d), mats)
    summary = kappa_from_signature([(1, 1)] * 3, d * d)
    return CatalogProblem(
        family="qutrit-phase",
        params={"d": d},
        kappa_summary=summary,
        rep=rep,
        dimension=3,
        extras={},
    )


def build(family: str, **params) -> CatalogProblem:
    builders = {
        "phase-shift": phase_shift,
        "color-coding": color_coding,
        "superdense": superdense,
        "qutrit-phase": qutrit_phase_rep,
    }
    if family not in builders:
        raise ValueError(f"unknown catalog family {family!r}")
    return builders[family](**params)


def small_instances(max_dim: int = 16, max_order: int = 24) -> list[CatalogProblem]:
    """The desk-scale instances exercised by the verification suites."""
    problems = [
        phase_shift(2, 1),
        phase_shift(3, 1),
        phase_shift(3, 2),
        phase_shift(5, 2),
        phase_shift(4, 3),
        color_coding(3, 2),
        color_coding(4, 2),
        color_coding(2, 3),
        color_coding(3, 3),
        superdense(2),
        superdense(3),
        superdense(4),
        qutrit_phase_rep(2),
        qutrit_phase_rep(3),
    ]
    return [
        p
        for p in problems
        if p.rep is not None
        and p.rep.dimension <= max_dim
        and p.rep.group.order <= max_order
    ]
