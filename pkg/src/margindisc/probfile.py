"""Problem-file parsing and report serialization (JSON).

Schema: top level ``{"kind": ..., "margin": float, "payload": {...}}`` with
kind one of ``two_unitary`` | ``group_rep`` | ``catalog``.  Complex scalars
are ``[re, im]`` pairs; matrices are row-major nested lists.  Groups appear
as ``{"order": n, "mult_table": [[int]]}`` and factor sets as either the
string ``"trivial"`` or a full table of complex pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import catalog as catalog_mod
from .core import ProcessSet
from .errors import MarginDiscError, SchemaError, ValidationError
from .groups import FactorSet, FiniteGroup, ProjectiveRep, infer_factor_set, validate_rep
from .two_unitary import UnitaryPair

KINDS = ("two_unitary", "group_rep", "catalog")


def _expect(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise SchemaError(path, message)


def complex_from_pair(value, path: str) -> complex:
    _expect(
        isinstance(value, (list, tuple)) and len(value) == 2,
        path,
        "complex scalar must be a [re, im] pair",
    )
    re, im = value
    _expect(
        isinstance(re, (int, float)) and isinstance(im, (int, float)),
        path,
        "complex parts must be numbers",
    )
    return complex(re, im)


def matrix_from_json(value, path: str) -> np.ndarray:
    _expect(isinstance(value, list) and value, path, "matrix must be a non-empty nested list")
    rows = []
    width = None
    for i, row in enumerate(value):
        _expect(isinstance(row, list) and row, f"{path}[{i}]", "matrix row must be a list")
        if width is None:
            width = len(row)
        _expect(len(row) == width, f"{path}[{i}]", "ragged matrix")
        rows.append([complex_from_pair(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)])
    return np.array(rows, dtype=complex)


def matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


@dataclass(frozen=True)
class ProblemFile:
    kind: str
    margin: float
    pair: UnitaryPair | None = None
    rep: ProjectiveRep | None = None
    processes: ProcessSet | None = None
    catalog_problem: "catalog_mod.CatalogProblem | None" = None
    options: dict | None = None


def parse_problem(text: str) -> ProblemFile:
    """Parse and fully validate a problem document.

    SchemaError names the offending field; ValidationError carries the
    numerical residual that failed.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}") from None
    _expect(isinstance(doc, dict), "$", "top level must be an object")
    kind = doc.get("kind")
    _expect(kind in KINDS, "$.kind", f"must be one of {KINDS}")
    margin = doc.get("margin", 1.0)
    _expect(isinstance(margin, (int, float)), "$.margin", "must be a number")
    _expect(0.0 <= margin <= 1.0, "$.margin", "must lie in [0, 1]")
    payload = doc.get("payload")
    _expect(isinstance(payload, dict), "$.payload", "must be an object")

    if kind == "two_unitary":
        return ProblemFile(kind, float(margin), pair=_parse_two_unitary(payload))
    if kind == "group_rep":
        rep = _parse_group_rep(payload)
        return ProblemFile(kind, float(margin), rep=rep)
    problem = _parse_catalog(payload)
    return ProblemFile(kind, float(margin), catalog_problem=problem)


def _parse_two_unitary(payload: dict) -> UnitaryPair:
    for key in ("u1", "u2"):
        _expect(key in payload, f"$.payload.{key}", "missing")
    u1 = matrix_from_json(payload["u1"], "$.payload.u1")
    u2 = matrix_from_json(payload["u2"], "$.payload.u2")
    priors = payload.get("priors", [0.5, 0.5])
    _expect(
        isinstance(priors, list) and len(priors) == 2,
        "$.payload.priors",
        "must be a list of two numbers",
    )
    total = sum(priors)
    if abs(total - 1.0) > 1e-12:
        raise ValidationError("$.payload.priors", f"sum {total!r} != 1")
    try:
        return UnitaryPair(u1, u2, float(priors[0]), float(priors[1]))
    except MarginDiscError:
        raise
    except ValueError as exc:
        raise ValidationError("$.payload", str(exc)) from None


def _parse_group_rep(payload: dict) -> ProjectiveRep:
    group_doc = payload.get("group")
    _expect(isinstance(group_doc, dict), "$.payload.group", "must be an object")
    _expect("mult_table" in group_doc, "$.payload.group.mult_table", "missing")
    table = group_doc["mult_table"]
    _expect(isinstance(table, list), "$.payload.group.mult_table", "must be a nested list")
    order = group_doc.get("order", len(table))
    _expect(order == len(table), "$.payload.group.order", "does not match the table")
    try:
        group = FiniteGroup(np.array(table, dtype=np.int64))
    except ValueError as exc:
        raise ValidationError("$.payload.group.mult_table", str(exc)) from None

    matrices_doc = payload.get("matrices")
    _expect(isinstance(matrices_doc, list), "$.payload.matrices", "must be a list of matrices")
    _expect(
        len(matrices_doc) == group.order,
        "$.payload.matrices",
        f"need {group.order} matrices, got {len(matrices_doc)}",
    )
    mats = np.stack(
        [matrix_from_json(m, f"$.payload.matrices[{g}]") for g, m in enumerate(matrices_doc)]
    )

    factor_doc = payload.get("factor_set", "trivial")
    try:
        if factor_doc == "trivial":
            factor = FactorSet.trivial(group.order)
        elif factor_doc == "infer":
            factor = infer_factor_set(group, mats)
        else:
            factor = FactorSet(matrix_from_json(factor_doc, "$.payload.factor_set"))
        rep = ProjectiveRep(group, factor, mats)
    except MarginDiscError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise ValidationError("$.payload", str(exc)) from None
    except ValueError as exc:
        raise ValidationError("$.payload", str(exc)) from None
    report = validate_rep(rep)
    if not report.ok:
        raise ValidationError("$.payload.matrices", "; ".join(report.failures))
    return rep


_CATALOG_PARAMS = {
    "phase-shift": ("K", "N"),
    "color-coding": ("N", "d"),
    "superdense": ("d",),
    "qutrit-phase": ("d",),
}


def _parse_catalog(payload: dict):
    family = payload.get("family")
    _expect(
        family in _CATALOG_PARAMS,
        "$.payload.family",
        f"must be one of {sorted(_CATALOG_PARAMS)}",
    )
    params_doc = payload.get("params", {})
    _expect(isinstance(params_doc, dict), "$.payload.params", "must be an object")
    params = {}
    for key in _CATALOG_PARAMS[family]:
        if key in params_doc:
            value = params_doc[key]
            _expect(
                isinstance(value, int) and value >= 1,
                f"$.payload.params.{key}",
                "must be a positive integer",
            )
            params[key] = value
    try:
        return catalog_mod.build(family, **params)
    except (ValueError, MarginDiscError) as exc:
        raise ValidationError("$.payload.params", str(exc)) from None


def problem_to_json(problem, margin: float) -> str:
    """Serialize a UnitaryPair, ProjectiveRep, or CatalogProblem to file text."""
    if isinstance(problem, UnitaryPair):
        doc: dict[str, Any] = {
            "kind": "two_unitary",
            "margin": margin,
            "payload": {
                "u1": matrix_to_json(problem.u1),
                "u2": matrix_to_json(problem.u2),
                "priors": [problem.eta1, problem.eta2],
            },
        }
    elif isinstance(problem, ProjectiveRep):
        doc = {
            "kind": "group_rep",
            "margin": margin,
            "payload": {
                "group": {
                    "order": problem.group.order,
                    "mult_table": problem.group.table.tolist(),
                },
                "factor_set": "trivial"
                if problem.factor_set.is_trivial()
                else matrix_to_json(problem.factor_set.c),
                "matrices": [matrix_to_json(u) for u in problem.matrices],
            },
        }
    elif isinstance(problem, catalog_mod.CatalogProblem):
        if problem.rep is None:
            raise ValueError("catalog instance has no built matrices to emit")
        return problem_to_json(problem.rep, margin)
    else:
        raise TypeError(f"cannot serialize {type(problem).__name__}")
    return json.dumps(doc, indent=2)
