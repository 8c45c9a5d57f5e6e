"""Closed-form margin discrimination between two unitary processes.

The whole problem reduces to the eigenphases of U_1^dag U_2: the minimum
squared overlap S_min is the squared distance from the origin to the convex
hull of the unit-circle points e^{i theta_a}, and the maximum success
probability is a three-branch expression in (priors, S_min, margin) with two
critical margins separating the minimum-error, intermediate, and single-state
regimes.  Ancillas never help here; tensoring with an identity leaves the
eigenphase set unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import config
from .core import InputState
from .errors import InvalidPriors
from .group_disc import MarginResult, TwoUnitaryDomain
from .linalg import as_cmatrix, dagger, is_unitary, unitary_eig


@dataclass(frozen=True)
class UnitaryPair:
    """Two same-dimension unitaries with priors, ordered so eta1 <= eta2.

    Inputs with eta1 > eta2 are swapped internally (the closed forms assume
    the ordering); ``swapped`` records the permutation for reporting.
    """

    u1: np.ndarray
    u2: np.ndarray
    eta1: float = 0.5
    eta2: float = 0.5
    swapped: bool = False

    def __post_init__(self):
        u1 = as_cmatrix(self.u1, "u1")
        u2 = as_cmatrix(self.u2, "u2")
        if u1.shape != u2.shape:
            raise ValueError(f"shape mismatch: {u1.shape} vs {u2.shape}")
        for name, u in (("u1", u1), ("u2", u2)):
            if not is_unitary(u):
                raise ValueError(f"{name} is not unitary within {config.UNITARITY_TOL}")
        e1, e2 = float(self.eta1), float(self.eta2)
        if e1 < 0 or e2 < 0 or abs(e1 + e2 - 1.0) > config.PRIOR_SUM_TOL:
            raise InvalidPriors(f"priors ({e1}, {e2}) must be nonnegative and sum to 1")
        if e1 > e2:
            u1, u2, e1, e2 = u2, u1, e2, e1
            object.__setattr__(self, "swapped", True)
        object.__setattr__(self, "u1", u1)
        object.__setattr__(self, "u2", u2)
        object.__setattr__(self, "eta1", e1)
        object.__setattr__(self, "eta2", e2)

    @property
    def dimension(self) -> int:
        return self.u1.shape[0]

    def relative_spectrum(self) -> "PhaseSpectrum":
        phases, vecs = unitary_eig(dagger(self.u1) @ self.u2)
        return PhaseSpectrum(phases, vecs)


@dataclass(frozen=True)
class PhaseSpectrum:
    """Eigenphases of U_1^dag U_2 in (-pi, pi] with orthonormal eigenvectors."""

    phases: np.ndarray
    vectors: np.ndarray

    def merged(self) -> tuple[np.ndarray, list[int]]:
        """Distinct phases (duplicates within the cluster gap merged).

        Returns the merged phase values and, per merged phase, the index of
        the first eigenvector of its cluster.
        """
        phases = self.phases
        reps: list[int] = []
        values: list[float] = []
        for i, th in enumerate(phases):
            if values and th - values[-1] <= config.PHASE_CLUSTER_GAP:
                continue
            values.append(float(th))
            reps.append(i)
        # circular wrap: a cluster at +pi may continue at -pi
        if len(values) > 1 and (values[0] + 2 * math.pi - values[-1]) <= config.PHASE_CLUSTER_GAP:
            values.pop()
            reps.pop()
        return np.asarray(values), reps


@dataclass(frozen=True)
class SminResult:
    """Minimum squared overlap with its certificate.

    ``support`` indexes the merged phases carrying weight; the optimal input
    is sum_a sqrt(q_a) |a> over the supporting eigenvectors.
    """

    s_min: float
    support: tuple[int, ...]
    weights: tuple[float, ...]
    input_vector: np.ndarray
    phases: np.ndarray

    def certificate_value(self) -> float:
        z = sum(q * np.exp(1j * self.phases[a]) for a, q in zip(self.support, self.weights))
        return float(abs(z) ** 2)


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Indices of hull vertices (counterclockwise monotone chain).

    Collinear points within config.HULL_COLLINEAR_TOL are dropped.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n <= 2:
        return np.arange(n)
    order = np.lexsort((pts[:, 1], pts[:, 0]))

    def cross(o, a, b):
        return (pts[a, 0] - pts[o, 0]) * (pts[b, 1] - pts[o, 1]) - (
            pts[a, 1] - pts[o, 1]
        ) * (pts[b, 0] - pts[o, 0])

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= config.HULL_COLLINEAR_TOL:
            lower.pop()
        lower.append(int(i))
    upper: list[int] = []
    for i in order[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= config.HULL_COLLINEAR_TOL:
            upper.pop()
        upper.append(int(i))
    return np.asarray(lower[:-1] + upper[:-1], dtype=int)


def _segment_closest(p: np.ndarray, q: np.ndarray) -> tuple[float, float]:
    """(squared distance from origin, barycentric t) for segment p -> q."""
    d = q - p
    denom = float(d @ d)
    t = 0.0 if denom == 0.0 else min(1.0, max(0.0, float(-(p @ d) / denom)))
    c = p + t * d
    return float(c @ c), t


def _zero_certificate(phases: np.ndarray) -> tuple[tuple[int, ...], tuple[float, ...]]:
    """Convex weights q with sum_a q_a e^{i theta_a} = 0 (origin in hull).

    Anchor the first phase and balance it against the two phases straddling
    its antipode; the largest circular gap being <= pi guarantees they exist.
    """
    n = len(phases)
    target = phases[0] + math.pi
    # indices of the gap containing the antipodal direction
    ext = np.concatenate([phases, [phases[0] + 2 * math.pi]])
    j = int(np.searchsorted(ext, target, side="right")) - 1
    a, b = j % n, (j + 1) % n
    if a == 0 or b == 0:
        # antipode coincides with the anchor's neighbourhood: antipodal pair
        other = a if a != 0 else b
        return (0, other), (0.5, 0.5)
    # solve q0 * e^{i th0} + qa e^{i tha} + qb e^{i thb} = 0 with q0 = 1
    mat = np.array(
        [
            [math.cos(phases[a]), math.cos(phases[b])],
            [math.sin(phases[a]), math.sin(phases[b])],
        ]
    )
    rhs = -np.array([math.cos(phases[0]), math.sin(phases[0])])
    qa, qb = np.linalg.lstsq(mat, rhs, rcond=None)[0]
    qa, qb = max(qa, 0.0), max(qb, 0.0)
    total = 1.0 + qa + qb
    return (0, a, b), (1.0 / total, qa / total, qb / total)


def s_min(pair: UnitaryPair) -> SminResult:
    """Minimum of |<phi| U_1^dag U_2 |phi>|^2 over pure inputs.

    The minimum over inputs equals the squared distance from the origin to
    the convex hull of the eigenvalue points on the unit circle; the origin
    side of the hull is decided by the largest circular gap between sorted
    eigenphases (gap > pi puts the origin strictly outside).
    """
    spectrum = pair.relative_spectrum()
    phases, reps = spectrum.merged()
    vectors = spectrum.vectors
    n = len(phases)

    if n == 1:
        phi = vectors[:, reps[0]]
        return SminResult(1.0, (0,), (1.0,), phi, phases)

    gaps = np.diff(np.concatenate([phases, [phases[0] + 2 * math.pi]]))
    largest = float(gaps.max())

    if largest < math.pi + config.HULL_BOUNDARY_BAND:
        support, weights = _zero_certificate(phases)
        phi = sum(
            math.sqrt(q) * vectors[:, reps[a]] for a, q in zip(support, weights)
        )
        phi = phi / np.linalg.norm(phi)
        return SminResult(0.0, support, weights, phi, phases)

    points = np.stack([np.cos(phases), np.sin(phases)], axis=1)
    hull = convex_hull(points)
    best = (np.inf, 0, 0, 0.0)  # s, index a, index b, t
    h = len(hull)
    for k in range(h):
        a, b = int(hull[k]), int(hull[(k + 1) % h])
        s, t = _segment_closest(points[a], points[b])
        if s < best[0]:
            best = (s, a, b, t)
    s, a, b, t = best
    if t <= 0.0 or a == b:
        support, weights = (a,), (1.0,)
    elif t >= 1.0:
        support, weights = (b,), (1.0,)
    else:
        support, weights = (a, b), (1.0 - t, t)
    phi = sum(math.sqrt(q) * vectors[:, reps[i]] for i, q in zip(support, weights))
    phi = phi / np.linalg.norm(phi)
    return SminResult(float(s), support, weights, phi, phases)


def critical_margins(eta1: float, eta2: float, s: float) -> tuple[float, float]:
    """The two critical margins (m_c, m_c') for priors eta1 <= eta2.

    m_c = (1 - sqrt(1 - 4 eta1 eta2 S)) / 2; m_c' is nonzero only when
    eta1 <= eta2 S, with a guard at the vanishing denominator
    1 - 2 sqrt(eta1 eta2 S) (where its limit is 0).
    """
    _check_priors(eta1, eta2)
    if not 0.0 <= s <= 1.0 + 1e-12:
        raise ValueError(f"S {s!r} outside [0, 1]")
    s = min(s, 1.0)
    root = math.sqrt(max(0.0, 1.0 - 4.0 * eta1 * eta2 * s))
    m_c = 0.5 * (1.0 - root)
    if eta1 >= eta2 * s:
        return m_c, 0.0
    denom = 1.0 - 2.0 * math.sqrt(eta1 * eta2 * s)
    if denom < config.MC_PRIME_DENOM_GUARD:
        return m_c, 0.0
    m_c_prime = (eta1 - math.sqrt(eta1 * eta2 * s)) ** 2 / denom
    return m_c, m_c_prime


def p_max_pure(eta1: float, eta2: float, s: float, m: float) -> tuple[float, TwoUnitaryDomain]:
    """Three-branch maximum success probability for two outputs with overlap S."""
    _check_priors(eta1, eta2)
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"margin {m!r} outside [0, 1]")
    s = min(max(s, 0.0), 1.0)
    m_c, m_c_prime = critical_margins(eta1, eta2, s)
    if m >= m_c:
        value = 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - 4.0 * eta1 * eta2 * s)))
        return value, TwoUnitaryDomain.MINIMUM_ERROR
    if m >= m_c_prime:
        value = (math.sqrt(m) + math.sqrt(1.0 - 2.0 * math.sqrt(eta1 * eta2 * s))) ** 2
        return value, TwoUnitaryDomain.INTERMEDIATE
    value = eta2 * (
        math.sqrt(m * s / eta1) + math.sqrt((eta1 - m) * (1.0 - s) / eta1)
    ) ** 2
    return value, TwoUnitaryDomain.SINGLE_STATE


def _check_priors(eta1: float, eta2: float) -> None:
    if eta1 < 0 or eta2 < 0 or abs(eta1 + eta2 - 1.0) > config.PRIOR_SUM_TOL:
        raise InvalidPriors(f"priors ({eta1}, {eta2}) must be nonnegative and sum to 1")
    if eta1 > eta2:
        raise InvalidPriors("closed forms assume eta1 <= eta2")


@dataclass(frozen=True)
class TwoUnitaryProfile:
    """S_min with the derived critical margins, as a reusable margin profile."""

    s: float
    eta1: float
    eta2: float
    m_c: float
    m_c_prime: float
    swapped: bool = False

    def p_max(self, m: float) -> float:
        return p_max_pure(self.eta1, self.eta2, self.s, m)[0]

    def domain(self, m: float) -> TwoUnitaryDomain:
        return p_max_pure(self.eta1, self.eta2, self.s, m)[1]


def profile(pair: UnitaryPair) -> tuple[TwoUnitaryProfile, SminResult]:
    smin = s_min(pair)
    m_c, m_c_prime = critical_margins(pair.eta1, pair.eta2, smin.s_min)
    return (
        TwoUnitaryProfile(smin.s_min, pair.eta1, pair.eta2, m_c, m_c_prime, pair.swapped),
        smin,
    )


def solve(pair: UnitaryPair, m: float) -> MarginResult:
    """Margin result for a two-unitary instance.

    The optimal input comes from the S_min certificate; no closed-form POVM
    is attached (attainability of the value is certified numerically by the
    oracle module).
    """
    prof, smin = profile(pair)
    value, domain = p_max_pure(pair.eta1, pair.eta2, smin.s_min, m)
    state = InputState.pure(smin.input_vector)
    overlap = state.vector.conj() @ (dagger(pair.u1) @ pair.u2) @ state.vector
    return MarginResult(
        p_max=value,
        margin=m,
        domain=domain.value,
        input_state=state,
        povm=None,
        profile=prof,
        witness_residuals={"s_min_gap": abs(abs(overlap) ** 2 - smin.s_min)},
        notes="POVM omitted: closed form not in scope; value certified by the oracle",
    )


def ancilla_invariance_check(pair: UnitaryPair, r: int, tol: float = 1e-10) -> bool:
    """S_min is unchanged by tensoring both unitaries with an r-dim identity."""
    if r < 1:
        raise ValueError("ancilla dimension must be >= 1")
    base = s_min(pair).s_min
    eye = np.eye(r)
    extended = UnitaryPair(
        np.kron(pair.u1, eye), np.kron(pair.u2, eye), pair.eta1, pair.eta2
    )
    return abs(s_min(extended).s_min - base) <= tol
