"""Margin discrimination for group-symmetric process sets.

For processes forming a projective representation with uniform priors, the
maximum success probability is governed by a single constant computed from the
decomposition signature,

    kappa = sum_sigma min(m_sigma, d_sigma) d_sigma / |G|,

with P_max(m) = kappa above the critical margin m_c = 1 - kappa and linear
kappa m / (1 - kappa) below it.  This module computes kappa (exact rational),
its ancilla-assisted variants, the optimal input/POVM witness, POVM
symmetrization, and a randomized check of the governing operator inequality
E <= kappa sum_g U_g E U_g^dag.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from . import config
from .core import InputState, Povm, ProcessSet, evaluate
from .errors import DimensionMismatch, WitnessMismatch
from .groups import FactorSet, ProjectiveRep
from .isotypic import IrrepDecomposition, decompose, multiplicity_signature
from .linalg import dagger, kron, max_norm, min_eig
from .sampling import ginibre, rng_from


class GroupDomain(str, enum.Enum):
    MINIMUM_ERROR = "minimum-error"
    LINEAR = "linear"


class TwoUnitaryDomain(str, enum.Enum):
    MINIMUM_ERROR = "minimum-error"
    INTERMEDIATE = "intermediate"
    SINGLE_STATE = "single-state"


@dataclass(frozen=True)
class KappaSummary:
    """kappa, its ancilla variants, and the per-block contributions."""

    group_order: int
    signature: tuple[tuple[int, int], ...]  # (dim, multiplicity) pairs
    kappa: Fraction
    kappa_ancilla: Fraction
    contributions: tuple[Fraction, ...]

    @property
    def m_c(self) -> Fraction:
        return 1 - self.kappa

    def kappa_prime(self, r: int) -> Fraction:
        """kappa with an ancilla of dimension r (multiplicities times r)."""
        if r < 1:
            raise ValueError("ancilla dimension must be >= 1")
        return Fraction(
            sum(min(m * r, d) * d for d, m in self.signature), self.group_order
        )

    @property
    def r_star(self) -> int:
        """Smallest ancilla dimension with kappa'(r) saturated at kappa_ancilla."""
        return max(-(-d // m) for d, m in self.signature)

    def as_dict(self) -> dict:
        return {
            "group_order": self.group_order,
            "signature": [list(p) for p in self.signature],
            "kappa": [self.kappa.numerator, self.kappa.denominator],
            "kappa_float": float(self.kappa),
            "kappa_ancilla": [self.kappa_ancilla.numerator, self.kappa_ancilla.denominator],
            "kappa_ancilla_float": float(self.kappa_ancilla),
            "m_c": float(self.m_c),
            "r_star": self.r_star,
        }


def kappa_from_signature(signature, group_order: int) -> KappaSummary:
    """KappaSummary from explicit (dim, multiplicity) pairs, exact rationals."""
    sig = tuple((int(d), int(m)) for d, m in signature)
    if any(d < 1 or m < 1 for d, m in sig):
        raise ValueError("signature entries must be positive")
    contribs = tuple(Fraction(min(m, d) * d, group_order) for d, m in sig)
    return KappaSummary(
        group_order=group_order,
        signature=sig,
        kappa=sum(contribs, Fraction(0)),
        kappa_ancilla=Fraction(sum(d * d for d, _ in sig), group_order),
        contributions=contribs,
    )


def kappa(dec: IrrepDecomposition) -> KappaSummary:
    """KappaSummary of a decomposed representation."""
    return kappa_from_signature(multiplicity_signature(dec), dec.group_order)


def minimal_perfect_ancilla(summary: KappaSummary) -> int:
    """Smallest ancilla dimension at which kappa'(r) reaches kappa_ancilla.

    This is max over present irreps of ceil(d/m).  Discrimination becomes
    perfect (including unambiguously, at m = 0) only when kappa_ancilla = 1;
    when irreps are missing no ancilla can reach probability 1.
    """
    return summary.r_star


def unambiguous_perfect_ancilla(summary: KappaSummary) -> int | None:
    """Ancilla dimension enabling perfect unambiguous discrimination, or None.

    None whenever some irrep is missing (kappa_ancilla < 1): the missing
    irrep cannot appear with any ancilla, so P_max(0) stays 0.
    """
    return summary.r_star if summary.kappa_ancilla == 1 else None


def p_max(kappa_value, m) -> tuple[float, GroupDomain]:
    """Two-branch maximum success probability for a group problem."""
    k = Fraction(kappa_value) if not isinstance(kappa_value, float) else kappa_value
    if not 0 < k <= 1:
        raise ValueError(f"kappa {kappa_value!r} outside (0, 1]")
    if not 0 <= m <= 1:
        raise ValueError(f"margin {m!r} outside [0, 1]")
    m_c = 1 - k
    if m >= m_c:
        return float(k), GroupDomain.MINIMUM_ERROR
    return float(k * m / (1 - k)), GroupDomain.LINEAR


def p_max_exact(kappa_value: Fraction, m: Fraction) -> tuple[Fraction, GroupDomain]:
    """Exact-rational version of :func:`p_max`."""
    k = Fraction(kappa_value)
    m = Fraction(m)
    if m >= 1 - k:
        return k, GroupDomain.MINIMUM_ERROR
    return k * m / (1 - k), GroupDomain.LINEAR


@dataclass(frozen=True)
class CovariantPovm:
    """POVM generated by one seed element: E_g = U_g E_1 U_g^dag.

    ``seed_element`` corresponds to guessing the identity element; the
    inconclusive element is the completeness remainder and must be PSD.
    """

    rep: ProjectiveRep
    seed_element: np.ndarray

    def __post_init__(self):
        e1 = np.ascontiguousarray(self.seed_element, dtype=complex)
        d = self.rep.dimension
        if e1.shape != (d, d):
            raise DimensionMismatch(f"seed element shape {e1.shape} != ({d}, {d})")
        if min_eig(e1) < -config.PSD_TOL:
            raise ValueError("seed element is not PSD")
        object.__setattr__(self, "seed_element", e1)
        if min_eig(self.inconclusive_element()) < -config.COVARIANCE_TOL:
            raise ValueError(
                "covariant completeness fails: sum_g U_g E_1 U_g^dag exceeds identity"
            )

    def element(self, g: int) -> np.ndarray:
        return self.rep.conjugate(g, self.seed_element)

    def inconclusive_element(self) -> np.ndarray:
        total = np.zeros((self.rep.dimension,) * 2, dtype=complex)
        for g in range(self.rep.group.order):
            total += self.element(g)
        return np.eye(self.rep.dimension) - total

    def to_povm(self) -> Povm:
        """Flatten to the shared Povm type, inconclusive element first."""
        return Povm(
            (self.inconclusive_element(),)
            + tuple(self.element(g) for g in range(self.rep.group.order))
        )

    def covariance_residual(self) -> float:
        """Worst-case |U_h E_g U_h^dag - E_{hg}| over sampled pairs."""
        group = self.rep.group
        worst = 0.0
        pairs = (
            [(h, g) for h in range(group.order) for g in range(group.order)]
            if group.order <= 16
            else [(h, g) for h in range(16) for g in range(16)]
        )
        for h, g in pairs:
            lhs = self.rep.conjugate(h, self.element(g))
            worst = max(worst, max_norm(lhs - self.element(group.mul(h, g))))
        return worst


@dataclass(frozen=True)
class MarginResult:
    """Solution of one margin-discrimination instance.

    Group problems attach a kappa summary and a covariant POVM witness;
    two-unitary problems attach the S/critical-margin profile instead and
    leave the POVM empty (the oracle certifies attainability).
    """

    p_max: float
    margin: float
    domain: str
    input_state: InputState | None = None
    povm: CovariantPovm | None = None
    p_max_exact: Fraction | None = None
    kappa_summary: KappaSummary | None = None
    profile: Any = None
    witness_residuals: dict | None = None
    notes: str = ""


def process_set_from_rep(rep: ProjectiveRep) -> ProcessSet:
    """Uniform-prior process set over the representation's unitaries."""
    n = rep.group.order
    return ProcessSet(tuple(rep.matrices), tuple([1.0 / n] * n))


def optimal_input_state(dec: IrrepDecomposition) -> tuple[np.ndarray, KappaSummary]:
    """The optimal pure input assembled from the aligned basis.

    Superposes the diagonal basis vectors |sigma, a, a> for
    a < min(multiplicity, dim) with weights sqrt(d_sigma / |G|), normalized
    by sqrt(kappa).
    """
    summary = kappa(dec)
    phi = np.zeros(dec.dimension, dtype=complex)
    for blk in dec.blocks:
        weight = np.sqrt(blk.dim / dec.group_order)
        for a in range(min(blk.multiplicity, blk.dim)):
            phi += weight * blk.basis[:, a, a]
    phi /= np.sqrt(float(summary.kappa))
    return phi, summary


def optimal_strategy(dec: IrrepDecomposition, m: float) -> MarginResult:
    """Optimal input state and covariant POVM at margin ``m``, verified.

    The returned witness is re-evaluated through the shared ``evaluate``
    contract; a mismatch with the analytic value raises WitnessMismatch
    (it signals a decomposition bug, never a tolerance issue).
    """
    if not 0 <= m <= 1:
        raise ValueError(f"margin {m!r} outside [0, 1]")
    phi, summary = optimal_input_state(dec)
    value, domain = p_max(summary.kappa, m)
    if m >= summary.m_c:
        exact = summary.kappa
    elif m == 0:
        exact = Fraction(0)
    else:
        exact = None
    state = InputState.pure(phi)
    povm = CovariantPovm(dec.rep, value * np.outer(phi, phi.conj()))
    report = evaluate(process_set_from_rep(dec.rep), state, povm.to_povm())
    residuals = {
        "success_gap": abs(report.p_success - value),
        "margin_excess": max(0.0, report.p_error - m),
        "completeness": 0.0,
        "psd": max(0.0, -min_eig(povm.inconclusive_element())),
    }
    if residuals["success_gap"] > config.WITNESS_TOL or residuals["margin_excess"] > config.WITNESS_TOL:
        raise WitnessMismatch(
            f"witness reproduces {report.p_success!r} with error {report.p_error!r}, "
            f"expected {value!r} under margin {m!r}"
        )
    return MarginResult(
        p_max=value,
        margin=m,
        domain=domain.value,
        input_state=state,
        povm=povm,
        p_max_exact=exact,
        kappa_summary=summary,
        witness_residuals=residuals,
    )


def symmetrize(rep: ProjectiveRep, povm: Povm, state: InputState) -> CovariantPovm:
    """Average a POVM over the group action into a covariant POVM.

    The seed element is (1/|G|) sum_g U_g^dag F_g U_g; the construction
    preserves both the success and the error probability for ``state``
    exactly (an algebraic identity, not an approximation).
    """
    n = rep.group.order
    if povm.n_conclusive != n:
        raise DimensionMismatch(f"POVM has {povm.n_conclusive} conclusive elements, need {n}")
    if povm.dimension != rep.dimension:
        raise DimensionMismatch("POVM dimension does not match the representation")
    d = rep.dimension
    seed = np.zeros((d, d), dtype=complex)
    for g in range(n):
        u = rep.matrices[g]
        seed += dagger(u) @ povm.elements[g + 1] @ u
    seed /= n
    seed = 0.5 * (seed + dagger(seed))
    del state  # preservation holds for every input; kept for signature clarity
    return CovariantPovm(rep, seed)


@dataclass(frozen=True)
class KeyInequalityReport:
    trials: int
    worst_scaled_eig: float
    equality_gap: float
    passed: bool


def verify_key_inequality(
    rep: ProjectiveRep, dec: IrrepDecomposition, trials: int = 100, seed: int = 0
) -> KeyInequalityReport:
    """Randomized check of E <= kappa sum_g U_g E U_g^dag on PSD draws.

    Also evaluates the analytic equality case: the optimal input state
    saturates the inequality with smallest eigenvalue 0.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    summary = kappa(dec)
    k = float(summary.kappa)
    rng = rng_from(seed)
    d = rep.dimension
    worst = np.inf
    for _ in range(trials):
        g = ginibre(rng, d)
        e = g @ dagger(g)
        worst = min(worst, min_eig(k * _group_twirl_sum(rep, e) - e) / max_norm(e))

    phi, _ = optimal_input_state(dec)
    e_star = np.outer(phi, phi.conj())
    equality_gap = abs(min_eig(k * _group_twirl_sum(rep, e_star) - e_star))

    passed = worst >= -config.KEY_INEQUALITY_TOL and equality_gap <= config.KEY_INEQUALITY_TOL
    return KeyInequalityReport(trials, float(worst), float(equality_gap), passed)


def _group_twirl_sum(rep: ProjectiveRep, e: np.ndarray) -> np.ndarray:
    total = np.zeros_like(e)
    for g in range(rep.group.order):
        total += rep.conjugate(g, e)
    return total


def ancilla_extend(rep: ProjectiveRep, r: int) -> ProjectiveRep:
    """Tensor every U_g with the identity on an r-dimensional ancilla."""
    if r < 1:
        raise ValueError("ancilla dimension must be >= 1")
    if r == 1:
        return rep
    eye = np.eye(r)
    mats = np.stack([kron(u, eye) for u in rep.matrices])
    return ProjectiveRep(rep.group, FactorSet(rep.factor_set.c.copy()), mats)


def solve_group(rep: ProjectiveRep, m: float, seed: int = 0) -> MarginResult:
    """Decompose and solve a group-symmetric instance in one call."""
    return optimal_strategy(decompose(rep, seed), m)
