"""Shared problem/result data model for discrimination with an error margin.

A problem instance is a finite set of unitaries with priors; a strategy is an
input state plus a POVM whose element 0 is the inconclusive outcome.  All
validation happens at construction so that ``evaluate`` stays cheap inside
optimizer loops.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import config
from .errors import DimensionMismatch, InvalidPriors
from .linalg import as_cmatrix, dagger, is_hermitian, is_unitary, max_norm, min_eig


@dataclass(frozen=True)
class ProcessSet:
    """Unitaries ``unitaries[i]`` applied with prior probability ``priors[i]``."""

    unitaries: tuple[np.ndarray, ...]
    priors: tuple[float, ...]

    def __post_init__(self):
        us = tuple(as_cmatrix(u, f"unitaries[{i}]") for i, u in enumerate(self.unitaries))
        if len(us) < 2:
            raise ValueError("need at least two processes")
        d = us[0].shape[0]
        for i, u in enumerate(us):
            if u.shape != (d, d):
                raise DimensionMismatch(f"unitaries[{i}]: shape {u.shape} != ({d}, {d})")
            if not is_unitary(u):
                raise ValueError(f"unitaries[{i}]: not unitary within {config.UNITARITY_TOL}")
        ps = tuple(float(p) for p in self.priors)
        if len(ps) != len(us):
            raise InvalidPriors("one prior per unitary required")
        if any(p < 0 for p in ps):
            raise InvalidPriors("priors must be nonnegative")
        if abs(sum(ps) - 1.0) > config.PRIOR_SUM_TOL:
            raise InvalidPriors(f"priors sum to {sum(ps)!r}, not 1")
        object.__setattr__(self, "unitaries", us)
        object.__setattr__(self, "priors", ps)

    @property
    def dimension(self) -> int:
        return self.unitaries[0].shape[0]

    def __len__(self) -> int:
        return len(self.unitaries)

    def outputs(self, rho: np.ndarray) -> np.ndarray:
        """Stack of output states U_i rho U_i^dag, shape (n, d, d)."""
        return np.stack([u @ rho @ dagger(u) for u in self.unitaries])


@dataclass(frozen=True)
class Povm:
    """POVM with ``elements[0]`` the inconclusive outcome.

    Each element must be Hermitian and PSD; the elements must sum to the
    identity within config.COMPLETENESS_TOL.
    """

    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        es = tuple(as_cmatrix(e, f"elements[{i}]") for i, e in enumerate(self.elements))
        if len(es) < 2:
            raise ValueError("a POVM needs at least two elements")
        d = es[0].shape[0]
        total = np.zeros((d, d), dtype=complex)
        for i, e in enumerate(es):
            if e.shape != (d, d):
                raise DimensionMismatch(f"elements[{i}]: shape {e.shape} != ({d}, {d})")
            if not is_hermitian(e, config.POVM_HERMITICITY_TOL):
                raise ValueError(f"elements[{i}]: not Hermitian")
            if min_eig(e) < -config.PSD_TOL:
                raise ValueError(f"elements[{i}]: not PSD (min eig {min_eig(e):.3e})")
            total += e
        if max_norm(total - np.eye(d)) > config.COMPLETENESS_TOL:
            raise ValueError(
                f"elements do not sum to identity (residual {max_norm(total - np.eye(d)):.3e})"
            )
        object.__setattr__(self, "elements", es)

    @property
    def dimension(self) -> int:
        return self.elements[0].shape[0]

    @property
    def n_conclusive(self) -> int:
        return len(self.elements) - 1


@dataclass(frozen=True)
class InputState:
    """Density matrix, optionally tagged with its pure-state vector."""

    rho: np.ndarray
    vector: np.ndarray | None = None

    def __post_init__(self):
        rho = as_cmatrix(self.rho, "rho")
        if not is_hermitian(rho):
            raise ValueError("rho: not Hermitian")
        if min_eig(rho) < -config.PSD_TOL:
            raise ValueError(f"rho: not PSD (min eig {min_eig(rho):.3e})")
        if abs(np.trace(rho).real - 1.0) > config.TRACE_TOL:
            raise ValueError(f"rho: trace {np.trace(rho).real!r} != 1")
        object.__setattr__(self, "rho", rho)
        if self.vector is not None:
            v = np.ascontiguousarray(self.vector, dtype=complex).reshape(-1)
            object.__setattr__(self, "vector", v)

    @classmethod
    def pure(cls, vector) -> "InputState":
        v = np.ascontiguousarray(vector, dtype=complex).reshape(-1)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("zero vector")
        v = v / n
        return cls(np.outer(v, v.conj()), v)

    @property
    def dimension(self) -> int:
        return self.rho.shape[0]


@dataclass(frozen=True)
class DiscriminationReport:
    """Success / error / inconclusive probabilities of one strategy."""

    p_success: float
    p_error: float
    p_inconclusive: float
    margin: float | None = field(default=None)

    def __post_init__(self):
        for name in ("p_success", "p_error", "p_inconclusive"):
            p = getattr(self, name)
            if not -1e-10 <= p <= 1 + 1e-10:
                raise ValueError(f"{name}={p!r} outside [0, 1]")
        total = self.p_success + self.p_error + self.p_inconclusive
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total!r}, not 1")


def evaluate(processes: ProcessSet, state: InputState, povm: Povm) -> DiscriminationReport:
    """Success, error and inconclusive probabilities of (state, povm).

    ``povm`` must have one conclusive element per process plus the
    inconclusive element at index 0.
    """
    n, d = len(processes), processes.dimension
    if state.dimension != d or povm.dimension != d:
        raise DimensionMismatch(
            f"dimensions differ: processes {d}, state {state.dimension}, povm {povm.dimension}"
        )
    if povm.n_conclusive != n:
        raise DimensionMismatch(f"povm has {povm.n_conclusive} conclusive elements, need {n}")
    outs = processes.outputs(state.rho)
    joint = np.empty((n, n + 1))
    for i in range(n):
        for mu in range(n + 1):
            joint[i, mu] = processes.priors[i] * np.trace(outs[i] @ povm.elements[mu]).real
    p_succ = float(sum(joint[i, i + 1] for i in range(n)))
    p_inc = float(joint[:, 0].sum())
    p_err = float(joint[:, 1:].sum() - p_succ)
    return DiscriminationReport(p_succ, p_err, p_inc)


def margin_satisfied(report: DiscriminationReport, m: float) -> bool:
    """True iff the mean error probability respects the margin ``m``."""
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"margin {m!r} outside [0, 1]")
    return report.p_error <= m + config.MARGIN_SLACK


def clamp_probability(p: float) -> float:
    """Clamp to [0, 1] for display only; arithmetic must see raw values."""
    return min(1.0, max(0.0, p))
