"""Pure-numpy projected-gradient ascent kernel (reference implementation).

Same contract as the compiled kernel in ``_core``: maximize the success
probability over POVM factor matrices under a mean-error margin, enforcing
completeness by an inverse-square-root projection after every step and the
margin by an exact penalty with geometric ramping.  The best feasible iterate
is tracked and returned; ``factors`` is updated in place to the final iterate.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

_LAMBDA_FLOOR = 1e-15


def _project_completeness(factors: np.ndarray) -> None:
    """Rescale all factors so that sum_mu M_mu M_mu^dag = identity."""
    s = np.einsum("mij,mkj->ik", factors, factors.conj())
    w, v = np.linalg.eigh(s)
    w = np.maximum(w, w[-1] * _LAMBDA_FLOOR if w[-1] > 0 else _LAMBDA_FLOOR)
    t = (v / np.sqrt(w)) @ v.conj().T
    factors[...] = np.einsum("ij,mjk->mik", t, factors)


def _probabilities(weighted: np.ndarray, factors: np.ndarray, total: np.ndarray):
    e = factors[1:] @ np.conj(np.swapaxes(factors[1:], 1, 2))
    po = float(np.einsum("ijk,ikj->", weighted, e).real)
    px = float(np.einsum("jk,kj->", total, e.sum(axis=0)).real - po)
    return po, px


def ascent_margin(
    weighted: np.ndarray,
    margin: float,
    factors: np.ndarray,
    iters: int,
    step0: float,
    decay: float,
    penalty0: float,
    penalty_max: float,
    feas_tol: float,
):
    """Run the ascent; returns (best_p_success, best_p_error, best_factors)."""
    weighted = np.ascontiguousarray(weighted, dtype=complex)
    total = weighted.sum(axis=0)
    best_po, best_px = -1.0, np.inf
    best = factors.copy()
    w = penalty0
    _project_completeness(factors)
    for t in range(iters + 1):
        po, px = _probabilities(weighted, factors, total)
        if px <= margin + feas_tol and po > best_po:
            best_po, best_px = po, px
            best[...] = factors
        if t == iters:
            break
        infeasible = px > margin
        step = step0 / (1.0 + decay * t)
        if infeasible:
            step /= 1.0 + w
            grad_gen = (1.0 + w) * weighted - w * total[None]
        else:
            grad_gen = weighted
        factors[1:] += step * (grad_gen @ factors[1:])
        _project_completeness(factors)
        if (t + 1) % 64 == 0 and px > margin + feas_tol:
            w = min(2.0 * w, penalty_max)
    return best_po, best_px, best
