"""Independent numerical certification of the analytic results.

Brute-force margin-constrained optimization over POVMs (and, in
``optimize_full``, over pure input states) by multi-restart projected
gradient ascent on factorized elements E = M M^dag; completeness is enforced
exactly by an inverse-square-root projection and the margin by an exact
penalty.  Unambiguous problems (m = 0) use a structural variant instead: the
margin multiplier diverges as m -> 0, so conclusive elements are confined to
the orthocomplement of the competing output supports, making the error
probability zero by construction, with a final scale rebalancing at fixed
element directions.

Input states move by candidate search.  The correct ascent direction at an
active margin is (Z_succ - mu Z_err) phi for the (unknown) constraint
multiplier mu, so proposals sweep a ladder of multipliers, plus a
backtracking local refiner and random perturbations, each scored by a short
POVM re-optimization.

Nothing here reads the analytic modules' internals; agreement between this
optimizer and the closed forms is the package's correctness certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ._ascent import BACKEND, get_kernel
from .core import InputState, ProcessSet
from .errors import CertificationFailure
from .group_disc import process_set_from_rep
from .groups import ProjectiveRep
from .linalg import dagger, max_norm
from .sampling import ginibre, random_density, random_pure_state


@dataclass(frozen=True)
class OracleConfig:
    """Optimizer budget and schedule; defaults suit dimensions up to ~16."""

    restarts: int = 32
    iterations: int = 2000
    step0: float = 0.35
    decay: float = 0.01
    penalty: float = 32.0
    penalty_max: float = 1e7
    seed: int = 0
    tolerance: float = 1e-5
    feasibility_slack: float = 1e-9
    rounds: int = 6
    input_steps: int = 80
    mixed_samples: int = 3

    def __post_init__(self):
        for name in (
            "restarts",
            "iterations",
            "step0",
            "decay",
            "penalty",
            "penalty_max",
            "tolerance",
            "feasibility_slack",
            "rounds",
            "input_steps",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.mixed_samples < 0:
            raise ValueError("mixed_samples must be >= 0")


@dataclass(frozen=True)
class OracleReport:
    """Best feasible value found, with the residuals that certify it."""

    best_p_success: float
    best_p_error: float
    margin: float
    residuals: dict
    certified: bool
    backend: str
    analytic_p_max: float | None = None
    gap: float | None = None
    mixed_best: float | None = None
    restart_values: tuple[float, ...] | None = None
    input_vector: np.ndarray | None = field(default=None, repr=False)

    def as_dict(self) -> dict:
        return {
            "best_p_success": self.best_p_success,
            "best_p_error": self.best_p_error,
            "margin": self.margin,
            "residuals": dict(self.residuals),
            "certified": self.certified,
            "backend": self.backend,
            "analytic_p_max": self.analytic_p_max,
            "gap": self.gap,
            "mixed_best": self.mixed_best,
        }


def _weighted_outputs(processes: ProcessSet, rho: np.ndarray) -> np.ndarray:
    return np.stack(
        [p * (u @ rho @ dagger(u)) for p, u in zip(processes.priors, processes.unitaries)]
    )


def _initial_factors(rng, n: int, d: int, near_inconclusive: bool) -> np.ndarray:
    factors = np.empty((n + 1, d, d), dtype=complex)
    if near_inconclusive:
        factors[0] = np.eye(d)
        for i in range(1, n + 1):
            factors[i] = 0.05 * ginibre(rng, d)
    else:
        for i in range(n + 1):
            factors[i] = ginibre(rng, d)
    return factors


def _elements_from_factors(factors: np.ndarray) -> np.ndarray:
    return factors @ np.conj(np.swapaxes(factors, 1, 2))


def _povm_residuals(factors: np.ndarray, margin: float, px: float) -> dict:
    elements = _elements_from_factors(factors)
    completeness = max_norm(elements.sum(axis=0) - np.eye(factors.shape[1]))
    psd = max(0.0, -min(np.linalg.eigvalsh(e)[0] for e in elements))
    return {
        "margin": max(0.0, px - margin),
        "completeness": float(completeness),
        "psd": float(psd),
    }


def _success_error_operators(processes: ProcessSet, conclusive: np.ndarray):
    """Z_succ, Z_err with p_succ(phi) = <phi|Z_succ|phi> at fixed POVM."""
    d = processes.dimension
    z_succ = np.zeros((d, d), dtype=complex)
    z_err = np.zeros((d, d), dtype=complex)
    total = conclusive.sum(axis=0)
    for i, u in enumerate(processes.unitaries):
        z_succ += processes.priors[i] * (dagger(u) @ conclusive[i] @ u)
        z_err += processes.priors[i] * (dagger(u) @ (total - conclusive[i]) @ u)
    return z_succ, z_err


# ---------------------------------------------------------------------------
# unambiguous (m = 0) structural path


def _complement_projectors(weighted: np.ndarray) -> np.ndarray:
    """Q_i projecting onto the orthocomplement of the other outputs' supports."""
    n, d = weighted.shape[0], weighted.shape[1]
    supports = []
    for i in range(n):
        w, v = np.linalg.eigh(weighted[i])
        keep = w > max(w[-1], 0.0) * 1e-12 + 1e-300
        supports.append(v[:, keep])
    qs = np.empty((n, d, d), dtype=complex)
    for i in range(n):
        others = [supports[j] for j in range(n) if j != i and supports[j].shape[1]]
        if not others:
            qs[i] = np.eye(d)
            continue
        stacked = np.concatenate(others, axis=1)
        u, s, _ = np.linalg.svd(stacked, full_matrices=False)
        span = u[:, s > s[0] * 1e-10] if s.size else u[:, :0]
        qs[i] = np.eye(d) - span @ dagger(span)
    return qs


def _scale_polish(weighted, elements) -> np.ndarray:
    """Rebalance element scales at fixed element directions.

    Solves max sum_i c_i t_i subject to lambda_max(sum_i t_i E_i) <= 1 over
    t >= 0 (a handful of variables) with a sequential quadratic step, then
    rescales back into the feasible cone.  Element supports are untouched,
    so any zero-error structure survives exactly.
    """
    from scipy.optimize import minimize

    n = elements.shape[0]
    gains = np.array(
        [float(np.einsum("jk,kj->", weighted[i], elements[i]).real) for i in range(n)]
    )
    if not (gains > 1e-15).any():
        return elements

    def top_eig(t):
        total = np.einsum("i,ijk->jk", t, elements)
        evals, evecs = np.linalg.eigh(total)
        return float(evals[-1]), evecs[:, -1]

    def constraint(t):
        return 1.0 - top_eig(t)[0]

    def constraint_jac(t):
        v = top_eig(t)[1]
        return -np.array([float((v.conj() @ elements[i] @ v).real) for i in range(n)])

    result = minimize(
        lambda t: -gains @ t,
        np.ones(n),
        jac=lambda t: -gains,
        bounds=[(0.0, None)] * n,
        constraints=[{"type": "ineq", "fun": constraint, "jac": constraint_jac}],
        method="SLSQP",
        options={"maxiter": 200, "ftol": 1e-14},
    )
    t = np.maximum(result.x, 0.0)
    lam = top_eig(t)[0]
    if lam > 1.0:
        t /= lam
    return np.einsum("i,ijk->ijk", t, elements)


def _zero_error_ascent(weighted, qs, rng, iters: int, step0: float, decay: float,
                       polish: bool = True):
    """Gradient ascent confined to the zero-error cone; returns (po, px, E).

    The sub-identity constraint on the conclusive sum is handled by
    per-iteration rescaling plus a penalty against its top eigendirection
    (projected back into the cone); a final scale rebalancing removes the
    first-order bias of the penalty equilibrium.
    """
    n, d = weighted.shape[0], weighted.shape[1]
    total = weighted.sum(axis=0)
    steering = np.stack([qs[i] @ weighted[i] @ qs[i] for i in range(n)])
    m = np.stack([qs[i] @ ginibre(rng, d) for i in range(n)]) / np.sqrt(n * d)
    best_po, best_elements = 0.0, np.zeros((n, d, d), dtype=complex)
    penalty = 8.0
    for t in range(iters + 1):
        e = m @ np.conj(np.swapaxes(m, 1, 2))
        evals, evecs = np.linalg.eigh(e.sum(axis=0))
        lam = float(evals[-1])
        if lam > 1.0:  # stay in the feasible cone; growth is multiplicative
            m /= np.sqrt(lam)
            e /= lam
            lam = 1.0
        po = float(np.einsum("ijk,ikj->", weighted, e).real)
        if po > best_po:
            best_po, best_elements = po, e.copy()
        if t == iters:
            break
        grad = steering @ m
        if lam > 1.0 - 1e-9:
            # rebalance against the active top eigendirection of the sum,
            # projected back into the zero-error cone of each element
            top_proj = np.outer(evecs[:, -1], evecs[:, -1].conj())
            grad -= penalty * (qs @ top_proj @ m)
        m += (step0 / (1.0 + decay * t)) * grad
    if polish and best_po > 0.0:
        polished = _scale_polish(weighted, best_elements)
        po = float(np.einsum("ijk,ikj->", weighted, polished).real)
        if po > best_po:
            best_po, best_elements = po, polished
    # deterministic seed: dominant allowed direction of each output,
    # rebalanced; exact for rank-one outputs in the classic regimes and a
    # variance-free floor for the randomized ascent
    seeds = np.zeros((n, d, d), dtype=complex)
    for i in range(n):
        _, vecs = np.linalg.eigh(weighted[i])
        direction = qs[i] @ vecs[:, -1]
        norm = np.linalg.norm(direction)
        if norm > 1e-12:
            direction /= norm
            seeds[i] = np.outer(direction, direction.conj())
    if seeds.any():
        seeds = _scale_polish(weighted, seeds)
        po = float(np.einsum("ijk,ikj->", weighted, seeds).real)
        if po > best_po:
            best_po, best_elements = po, seeds
    px = float(np.einsum("jk,ikj->", total, best_elements).real - best_po)
    return best_po, px, best_elements


def _zero_error_solve(processes, phi, rng, iters, step0, decay, polish=True):
    weighted = _weighted_outputs(processes, np.outer(phi, phi.conj()))
    qs = _complement_projectors(weighted)
    return _zero_error_ascent(weighted, qs, rng, iters, step0, decay, polish)


def _optimize_zero_error(processes, rho, cfg) -> tuple[float, float, dict]:
    weighted = _weighted_outputs(processes, rho)
    qs = _complement_projectors(weighted)
    best_po, best_px = 0.0, 0.0
    best_elements = np.zeros_like(weighted)
    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, 11, restart])
        po, px, elements = _zero_error_ascent(
            weighted, qs, rng, cfg.iterations, cfg.step0, cfg.decay
        )
        if po > best_po:
            best_po, best_px, best_elements = po, px, elements
    d = weighted.shape[1]
    total = best_elements.sum(axis=0)
    residuals = {
        "margin": max(0.0, best_px),
        "completeness": 0.0,  # inconclusive element is the exact remainder
        "psd": max(0.0, -float(np.linalg.eigvalsh(np.eye(d) - total)[0])),
    }
    return best_po, best_px, residuals


# ---------------------------------------------------------------------------
# input-state moves


def _backtracking_input(z_succ, z_err, phi, m, cfg) -> np.ndarray:
    """Sphere-constrained ascent at fixed POVM; every accepted move is
    feasible and improving, so it works in arbitrarily thin margin basins."""

    def p_err(v):
        return float((v.conj() @ z_err @ v).real)

    def p_succ(v):
        return float((v.conj() @ z_succ @ v).real)

    cur = phi
    feasible_start = p_err(phi) <= m + cfg.feasibility_slack
    best_phi, best_val = (phi, p_succ(phi)) if feasible_start else (phi, -1.0)
    w = 16.0
    for _ in range(cfg.input_steps):
        infeasible = p_err(cur) > m
        grad = z_succ @ cur
        if infeasible:
            grad = grad - w * (z_err @ cur)
            w = min(2.0 * w, 1e6)
        moved = False
        step = 0.7
        for _ in range(9):
            cand = cur + step * grad
            cand /= np.linalg.norm(cand)
            if infeasible and p_err(cand) < p_err(cur):
                cur, moved = cand, True
                break
            if (
                not infeasible
                and p_err(cand) <= m + cfg.feasibility_slack
                and p_succ(cand) > p_succ(cur) + 1e-16
            ):
                cur, moved = cand, True
                break
            step /= 4.0
        if not moved and not infeasible:
            break
        if p_err(cur) <= m + cfg.feasibility_slack and p_succ(cur) > best_val:
            best_phi, best_val = cur, p_succ(cur)
    return best_phi if best_val >= 0 else cur


def _loewdin_move(processes: ProcessSet, phi: np.ndarray) -> np.ndarray:
    """Fixed-point input proposal from symmetric output orthogonalization.

    Replaces the outputs U_i phi by their Loewdin orthogonalization and
    returns the input best aligned with them; iterating this contracts onto
    inputs with exactly orthogonalizable outputs whenever they exist.
    """
    outs = np.stack([u @ phi for u in processes.unitaries])
    gram = outs.conj() @ outs.T
    w, v = np.linalg.eigh(gram)
    w = np.maximum(w, 1e-12 * max(float(w[-1]), 1e-300))
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    tilde = inv_sqrt.T @ outs
    h = np.zeros((processes.dimension,) * 2, dtype=complex)
    for j, u in enumerate(processes.unitaries):
        t = tilde[j] / max(np.linalg.norm(tilde[j]), 1e-300)
        vec = dagger(u) @ t
        h += processes.priors[j] * np.outer(vec, vec.conj())
    _, vecs = np.linalg.eigh(h)
    return vecs[:, -1]


_MULTIPLIER_LADDER = (0.0, 0.5, 2.0, 8.0, 32.0, 128.0)


def _input_candidates(processes, conclusive, phi, m, cfg, rng) -> list[np.ndarray]:
    """Proposals for the next input: multiplier-ladder eigenvectors of
    Z_succ - mu Z_err (bracketing the unknown active-margin multiplier),
    a backtracking refiner, and random perturbations."""
    z_succ, z_err = _success_error_operators(processes, conclusive)
    cands = [phi]
    for mu in _MULTIPLIER_LADDER:
        _, vecs = np.linalg.eigh(z_succ - mu * z_err)
        cands.append(vecs[:, -1])
    cands.append(_backtracking_input(z_succ, z_err, phi, m, cfg))
    d = processes.dimension
    for sigma in (0.3, 0.1):
        cand = phi + sigma * (rng.standard_normal(d) + 1j * rng.standard_normal(d))
        cands.append(cand / np.linalg.norm(cand))
    return cands


def _pick_input(
    processes, candidates, m, cfg, rng, kernel, score_iters, warm_factors=None
) -> np.ndarray:
    """Score candidates by a short POVM re-optimization; best feasible wins.

    Warm-starting from the incumbent factors makes scores comparable at
    much shorter runs: the incumbent input scores its true value and a
    challenger must beat it honestly.
    """
    n, d = len(processes), processes.dimension
    best_phi, best_score = candidates[0], -1.0
    for cand in candidates:
        weighted = _weighted_outputs(processes, np.outer(cand, cand.conj()))
        factors = (
            warm_factors.copy()
            if warm_factors is not None
            else _initial_factors(rng, n, d, near_inconclusive=True)
        )
        po, _, _ = kernel(
            weighted,
            m,
            factors,
            score_iters,
            cfg.step0,
            cfg.decay,
            cfg.penalty,
            cfg.penalty_max,
            cfg.feasibility_slack,
        )
        if po > best_score:
            best_phi, best_score = cand, po
    return best_phi


# ---------------------------------------------------------------------------
# public entry points


def optimize_fixed_input(
    processes: ProcessSet,
    state: InputState,
    m: float,
    cfg: OracleConfig | None = None,
    kernel_name: str | None = None,
) -> OracleReport:
    """Maximize the success probability over POVMs at fixed input state."""
    cfg = cfg or OracleConfig()
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"margin {m!r} outside [0, 1]")
    if m == 0.0:
        po, px, residuals = _optimize_zero_error(processes, state.rho, cfg)
        certified = all(v <= 1e-8 for v in residuals.values())
        return OracleReport(po, px, m, residuals, certified, BACKEND)

    kernel = get_kernel(kernel_name)
    weighted = _weighted_outputs(processes, state.rho)
    n, d = len(processes), processes.dimension
    best = (-1.0, np.inf, None)
    values = []
    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, 7, restart])
        factors = _initial_factors(rng, n, d, near_inconclusive=(restart == 0))
        po, px, best_factors = kernel(
            weighted,
            m,
            factors,
            cfg.iterations,
            cfg.step0,
            cfg.decay,
            cfg.penalty,
            cfg.penalty_max,
            cfg.feasibility_slack,
        )
        values.append(po)
        if po > best[0]:
            best = (po, px, best_factors)
    po, px, factors = best
    if factors is None:
        # the all-inconclusive POVM is always feasible: P_succ = 0
        factors = np.zeros((n + 1, d, d), dtype=complex)
        factors[0] = np.eye(d)
        po, px = 0.0, 0.0
    residuals = _povm_residuals(factors, m, px)
    certified = all(v <= 1e-8 for v in residuals.values())
    return OracleReport(
        po, px, m, residuals, certified, BACKEND, restart_values=tuple(values)
    )


def _full_restart_margin(processes, rng, cfg, iters_per_round, kernel, m):
    n, d = len(processes), processes.dimension
    phi = random_pure_state(rng, d)
    factors = _initial_factors(rng, n, d, near_inconclusive=False)
    best = (-1.0, np.inf, factors, phi)
    for r in range(cfg.rounds):
        weighted = _weighted_outputs(processes, np.outer(phi, phi.conj()))
        # the final round gets the full budget: the POVM must re-converge
        # after the last input move
        iters = iters_per_round if r < cfg.rounds - 1 else cfg.iterations
        po, px, best_factors = kernel(
            weighted,
            m,
            factors,
            iters,
            cfg.step0,
            cfg.decay,
            cfg.penalty,
            cfg.penalty_max,
            cfg.feasibility_slack,
        )
        if po > best[0]:
            best = (po, px, best_factors, phi)
        if r < cfg.rounds - 1:
            candidates = _input_candidates(
                processes, _elements_from_factors(best_factors)[1:], phi, m, cfg, rng
            )
            phi = _pick_input(
                processes,
                candidates,
                m,
                cfg,
                rng,
                kernel,
                max(120, iters_per_round // 2),
                warm_factors=best_factors,
            )
    return best


def _full_restart_zero_error(processes, rng, cfg, iters_per_round, kernel):
    """Unambiguous restart: annealed positive-margin rounds steer the input
    (the exact m = 0 objective has a divergent constraint multiplier), then
    the structural solver evaluates and candidate-polishes exactly."""
    n, d = len(processes), processes.dimension
    phi = random_pure_state(rng, d)
    factors = _initial_factors(rng, n, d, near_inconclusive=False)
    for proxy in np.geomspace(0.5, 1e-4, num=max(4, cfg.rounds)):
        proxy = float(proxy)
        weighted = _weighted_outputs(processes, np.outer(phi, phi.conj()))
        _, _, best_factors = kernel(
            weighted,
            proxy,
            factors,
            iters_per_round,
            cfg.step0,
            cfg.decay,
            cfg.penalty,
            cfg.penalty_max,
            cfg.feasibility_slack,
        )
        candidates = _input_candidates(
            processes, _elements_from_factors(best_factors)[1:], phi, proxy, cfg, rng
        )
        phi = _pick_input(
            processes,
            candidates,
            proxy,
            cfg,
            rng,
            kernel,
            max(120, iters_per_round // 2),
            warm_factors=best_factors,
        )

    best = (-1.0, 0.0, np.zeros((n, d, d), dtype=complex), phi)
    for r in range(cfg.rounds):
        po, px, elements = _zero_error_solve(
            processes, phi, rng, iters_per_round, cfg.step0, cfg.decay
        )
        if po > best[0]:
            best = (po, px, elements, phi)
        if r == cfg.rounds - 1:
            break
        z_succ, z_err = _success_error_operators(processes, elements)
        candidates = [_backtracking_input(z_succ, z_err, phi, 0.0, cfg)]
        cand = phi
        for _ in range(3):  # a few fixed-point steps sharpen the proposal
            cand = _loewdin_move(processes, cand)
        candidates.append(cand)
        for mu in (8.0 * (r + 1), 64.0 * (r + 1)):
            _, vecs = np.linalg.eigh(z_succ - mu * z_err)
            candidates.append(vecs[:, -1])
        base_sigma = 0.4 / (1.0 + r)
        for sigma in (base_sigma, base_sigma / 8.0, base_sigma / 32.0):
            for _ in range(2):
                cand = phi + sigma * (
                    rng.standard_normal(d) + 1j * rng.standard_normal(d)
                )
                candidates.append(cand / np.linalg.norm(cand))
        scores = [
            _zero_error_solve(
                processes, cand, rng, iters_per_round, cfg.step0, cfg.decay
            )[0]
            for cand in candidates
        ]
        pick = int(np.argmax(scores))
        if scores[pick] > po:
            phi = candidates[pick]
    return best


def optimize_full(
    problem: ProcessSet | ProjectiveRep,
    m: float,
    cfg: OracleConfig | None = None,
    analytic_p_max: float | None = None,
    kernel_name: str | None = None,
) -> OracleReport:
    """Alternating maximization over pure inputs and POVMs.

    When ``analytic_p_max`` is supplied, exceeding it by more than ten times
    the configured tolerance raises CertificationFailure (an analytic-side
    bug, never ignored).  Random mixed inputs are also sampled to confirm
    that none beats the pure optimum.
    """
    cfg = cfg or OracleConfig()
    processes = (
        process_set_from_rep(problem) if isinstance(problem, ProjectiveRep) else problem
    )
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"margin {m!r} outside [0, 1]")
    d = processes.dimension

    zero_error = m == 0.0
    kernel = get_kernel(kernel_name)
    iters_per_round = max(50, cfg.iterations // cfg.rounds)
    best = (-1.0, np.inf, None, None)  # po, px, payload, phi
    values = []
    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, 3, restart])
        if zero_error:
            po, px, payload, phi = _full_restart_zero_error(
                processes, rng, cfg, iters_per_round, kernel
            )
        else:
            po, px, payload, phi = _full_restart_margin(
                processes, rng, cfg, iters_per_round, kernel, m
            )
        values.append(po)
        if po > best[0]:
            best = (po, px, payload, phi)

    po, px, payload, phi = best
    if zero_error:
        total = payload.sum(axis=0)
        residuals = {
            "margin": max(0.0, px),
            "completeness": 0.0,
            "psd": max(0.0, -float(np.linalg.eigvalsh(np.eye(d) - total)[0])),
        }
    else:
        residuals = _povm_residuals(payload, m, px)

    mixed_best = None
    if cfg.mixed_samples:
        reduced = replace(
            cfg,
            restarts=max(2, cfg.restarts // 8),
            iterations=max(300, cfg.iterations // 2),
            mixed_samples=0,
        )
        mixed_best = -1.0
        for k in range(cfg.mixed_samples):
            rng = np.random.default_rng([cfg.seed, 13, k])
            rho = random_density(rng, d)
            rep = optimize_fixed_input(processes, InputState(rho), m, reduced, kernel_name)
            mixed_best = max(mixed_best, rep.best_p_success)

    gap = None
    certified = all(v <= 1e-8 for v in residuals.values())
    if analytic_p_max is not None:
        gap = analytic_p_max - po
        if po > analytic_p_max + 10 * cfg.tolerance:
            raise CertificationFailure(
                f"oracle found {po!r}, above analytic {analytic_p_max!r}"
            )
        if mixed_best is not None and mixed_best > analytic_p_max + 10 * cfg.tolerance:
            raise CertificationFailure(
                f"mixed input reached {mixed_best!r}, above analytic {analytic_p_max!r}"
            )
        certified = certified and abs(gap) <= 10 * cfg.tolerance

    return OracleReport(
        po,
        px,
        m,
        residuals,
        certified,
        BACKEND,
        analytic_p_max=analytic_p_max,
        gap=gap,
        mixed_best=mixed_best,
        restart_values=tuple(values),
        input_vector=phi,
    )


@dataclass(frozen=True)
class ConcavityReport:
    margins: tuple[float, ...]
    values: tuple[float, ...]
    monotonicity_violation: float
    concavity_violation: float
    passed: bool


def concavity_scan(
    problem: ProcessSet | ProjectiveRep,
    grid,
    cfg: OracleConfig | None = None,
    slack: float | None = None,
) -> ConcavityReport:
    """Optimize at every margin of a sorted grid; check shape properties.

    Discrete concavity is checked through divided differences so the grid
    need not be uniform; ``slack`` defaults to 20x the oracle tolerance
    scaled by the smallest grid gap.
    """
    cfg = cfg or OracleConfig()
    grid = [float(g) for g in grid]
    if sorted(grid) != grid or len(grid) < 2:
        raise ValueError("grid must be sorted ascending with at least two points")
    values = [optimize_full(problem, g, cfg).best_p_success for g in grid]
    min_gap = min(b - a for a, b in zip(grid, grid[1:]))
    slack = slack if slack is not None else 20 * cfg.tolerance / max(min_gap, 1e-6)
    slopes = [
        (vb - va) / (mb - ma)
        for (ma, va), (mb, vb) in zip(zip(grid, values), zip(grid[1:], values[1:]))
    ]
    mono = max((-min(s for s in slopes), 0.0)) if slopes else 0.0
    conc = max((b - a for a, b in zip(slopes, slopes[1:])), default=0.0)
    passed = mono <= slack and conc <= slack
    return ConcavityReport(tuple(grid), tuple(values), mono, max(conc, 0.0), passed)
