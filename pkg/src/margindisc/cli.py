"""Command-line front end.

Subcommands: ``two-unitary``, ``group``, ``catalog`` (four families plus the
color-coding curve emitter), and ``verify``.  Results go to stdout (JSON by
default), diagnostics to stderr.  Exit codes: 0 success, 1 invalid input,
2 numerical failure, 3 certification/verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import catalog as catalog_mod
from . import config
from .core import InputState, Povm, evaluate
from .errors import (
    CapExceeded,
    CertificationFailure,
    DegenerateDraw,
    MarginDiscError,
    NoConvergence,
    SchemaError,
    ValidationError,
    WitnessMismatch,
)
from .group_disc import (
    MarginResult,
    ancilla_extend,
    kappa,
    p_max_exact,
    optimal_strategy,
    process_set_from_rep,
    symmetrize,
    verify_key_inequality,
)
from .groups import ProjectiveRep
from .isotypic import decompose, multiplicity_signature
from .oracle import OracleConfig, optimize_full
from .probfile import parse_problem, problem_to_json
from .sampling import random_povm, random_pure_state
from .two_unitary import UnitaryPair, ancilla_invariance_check, profile, solve

_NUMERICAL_ERRORS = (DegenerateDraw, NoConvergence, CapExceeded)


def _default_seed() -> int:
    try:
        return int(os.environ.get("MARGINDISC_SEED", "0"))
    except ValueError:
        return 0


def _margin_value(text: str) -> tuple[float, Fraction | None]:
    """Parse a margin as float plus exact fraction when representable."""
    try:
        frac = Fraction(text)
    except (ValueError, ZeroDivisionError):
        frac = None
    value = float(frac) if frac is not None else float(text)
    if not 0.0 <= value <= 1.0:
        raise ValidationError("margin", f"{value!r} outside [0, 1]")
    return value, frac


def _fraction_pair(f: Fraction | None):
    return None if f is None else [f.numerator, f.denominator]


def _emit(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        print(json.dumps(report, indent=2), file=stream)
        return
    flat = _flatten(report)
    if fmt == "csv":
        print(",".join(str(k) for k in flat), file=stream)
        print(",".join(_csv_cell(v) for v in flat.values()), file=stream)
        return
    width = max(len(k) for k in flat)
    for k, v in flat.items():
        print(f"{k:<{width}}  {v}", file=stream)


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    text = str(v)
    return '"' + text.replace('"', '""') + '"' if "," in text else text


def _flatten(doc: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in doc.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


def _result_report(
    result: MarginResult, seed: int, elapsed: float, oracle_doc: dict | None
) -> dict:
    doc = {
        "p_max": result.p_max,
        "p_max_exact": _fraction_pair(result.p_max_exact),
        "domain": result.domain,
        "m_c": None,
        "kappa": result.kappa_summary.as_dict() if result.kappa_summary else None,
        "witness_residuals": result.witness_residuals,
        "oracle": oracle_doc,
        "seed": seed,
        "timing_s": elapsed,
    }
    if result.kappa_summary is not None:
        doc["m_c"] = float(result.kappa_summary.m_c)
    if result.profile is not None:
        doc["m_c"] = result.profile.m_c
        doc["m_c_prime"] = result.profile.m_c_prime
        doc["s_min"] = result.profile.s
        doc["priors_swapped"] = result.profile.swapped
    if result.notes:
        doc["notes"] = result.notes
    return doc


def _oracle_config(args) -> OracleConfig:
    kwargs = {"seed": args.seed}
    if getattr(args, "oracle_restarts", None):
        kwargs["restarts"] = args.oracle_restarts
    if getattr(args, "oracle_iterations", None):
        kwargs["iterations"] = args.oracle_iterations
    return OracleConfig(**kwargs)


# ---------------------------------------------------------------------------
# subcommands


def cmd_two_unitary(args) -> int:
    started = time.perf_counter()
    with open(args.file, encoding="utf-8") as fh:
        problem = parse_problem(fh.read())
    if problem.kind != "two_unitary":
        raise ValidationError("$.kind", f"expected two_unitary, got {problem.kind}")
    margin = problem.margin if args.margin is None else _margin_value(args.margin)[0]
    result = solve(problem.pair, margin)
    oracle_doc = None
    if args.oracle:
        report = optimize_full(
            _pair_process_set(problem.pair), margin, _oracle_config(args), result.p_max
        )
        oracle_doc = report.as_dict()
    _emit(_result_report(result, args.seed, time.perf_counter() - started, oracle_doc), args.format)
    return 0


def _pair_process_set(pair: UnitaryPair):
    from .core import ProcessSet

    return ProcessSet((pair.u1, pair.u2), (pair.eta1, pair.eta2))


def _solve_group_exact(rep: ProjectiveRep, margin: float, margin_frac, seed: int) -> MarginResult:
    dec = decompose(rep, seed)
    result = optimal_strategy(dec, margin)
    if result.p_max_exact is None and margin_frac is not None:
        exact, _ = p_max_exact(result.kappa_summary.kappa, margin_frac)
        result = MarginResult(
            p_max=result.p_max,
            margin=result.margin,
            domain=result.domain,
            input_state=result.input_state,
            povm=result.povm,
            p_max_exact=exact,
            kappa_summary=result.kappa_summary,
            witness_residuals=result.witness_residuals,
        )
    return result


def cmd_group(args) -> int:
    started = time.perf_counter()
    with open(args.file, encoding="utf-8") as fh:
        problem = parse_problem(fh.read())
    if problem.kind == "group_rep":
        rep = problem.rep
    elif problem.kind == "catalog":
        rep = problem.catalog_problem.rep
        if rep is None:
            raise ValidationError("$.payload", "catalog instance too large to build matrices")
    else:
        raise ValidationError("$.kind", f"expected group_rep, got {problem.kind}")
    if args.ancilla > 1:
        rep = ancilla_extend(rep, args.ancilla)
    if args.margin is None:
        margin, margin_frac = problem.margin, None
    else:
        margin, margin_frac = _margin_value(args.margin)
    result = _solve_group_exact(rep, margin, margin_frac, args.seed)
    doc_extra = {}
    if args.verify_theorem:
        dec = decompose(rep, args.seed)
        ki = verify_key_inequality(rep, dec, trials=args.verify_theorem, seed=args.seed)
        doc_extra["key_inequality"] = {
            "trials": ki.trials,
            "worst_scaled_eig": ki.worst_scaled_eig,
            "equality_gap": ki.equality_gap,
            "passed": ki.passed,
        }
        if not ki.passed:
            print("theorem verification failed", file=sys.stderr)
            return 3
    oracle_doc = None
    if args.oracle:
        report = optimize_full(rep, margin, _oracle_config(args), result.p_max)
        oracle_doc = report.as_dict()
    doc = _result_report(result, args.seed, time.perf_counter() - started, oracle_doc)
    doc.update(doc_extra)
    _emit(doc, args.format)
    return 0


def cmd_catalog(args) -> int:
    started = time.perf_counter()
    if args.family == "color-coding" and args.curve:
        rows = catalog_mod.color_coding_curve(args.max_N)
        sys.stdout.write(catalog_mod.curve_csv(rows))
        return 0

    params = {
        "phase-shift": lambda: {"K": args.K, "N": args.N},
        "color-coding": lambda: {"N": args.N, "d": args.d},
        "superdense": lambda: {"d": args.d},
        "qutrit-phase": lambda: {"d": args.d},
    }[args.family]()
    problem = catalog_mod.build(args.family, **params)
    margin, margin_frac = _margin_value(args.margin)

    if args.emit_file:
        with open(args.emit_file, "w", encoding="utf-8") as fh:
            fh.write(problem_to_json(problem, margin))
        print(f"problem file written to {args.emit_file}", file=sys.stderr)

    summary = problem.kappa_summary
    effective_kappa = summary.kappa_prime(args.ancilla) if args.ancilla > 1 else summary.kappa
    exact, domain = p_max_exact(
        effective_kappa, margin_frac if margin_frac is not None else Fraction(margin).limit_denominator(10**15)
    )
    doc = {
        "p_max": float(exact),
        "p_max_exact": _fraction_pair(exact),
        "domain": domain.value,
        "m_c": float(1 - effective_kappa),
        "m_c_exact": _fraction_pair(1 - effective_kappa),
        "kappa": summary.as_dict(),
        "witness_residuals": None,
        "oracle": None,
        "seed": args.seed,
        "family": problem.label(),
        "ancilla": args.ancilla,
    }
    if args.ancilla > 1:
        doc["kappa_prime"] = _fraction_pair(effective_kappa)

    buildable = problem.rep is not None and problem.rep.dimension * args.ancilla <= 64
    if buildable:
        rep = ancilla_extend(problem.rep, args.ancilla) if args.ancilla > 1 else problem.rep
        result = _solve_group_exact(rep, margin, margin_frac, args.seed)
        doc["witness_residuals"] = result.witness_residuals
        engine_kappa = result.kappa_summary.kappa
        if engine_kappa != effective_kappa:
            print(
                f"engine kappa {engine_kappa} != closed form {effective_kappa}",
                file=sys.stderr,
            )
            return 3
        if args.oracle:
            report = optimize_full(rep, margin, _oracle_config(args), result.p_max)
            doc["oracle"] = report.as_dict()
    doc["timing_s"] = time.perf_counter() - started
    _emit(doc, args.format)
    return 0


def cmd_verify(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        problem = parse_problem(fh.read())
    checks: list[tuple[str, bool, str]] = []
    if problem.kind == "two_unitary":
        _verify_two_unitary(problem.pair, checks)
    else:
        rep = problem.rep if problem.kind == "group_rep" else problem.catalog_problem.rep
        if rep is None:
            raise ValidationError("$.payload", "catalog instance too large to verify")
        _verify_group(rep, args.trials, args.seed, checks)
    ok = True
    for name, passed, detail in checks:
        tag = "ok" if passed else "FAIL"
        ok &= passed
        print(f"[{tag}] {name}: {detail}")
    return 0 if ok else 3


def _verify_two_unitary(pair: UnitaryPair, checks) -> None:
    prof, smin = profile(pair)
    cert = abs(smin.certificate_value() - smin.s_min)
    checks.append(("s_min certificate", cert <= config.SMIN_CERT_TOL, f"residual {cert:.2e}"))

    continuity = 0.0
    for m_star in (prof.m_c, prof.m_c_prime):
        if 0.0 < m_star < 1.0:
            lo = prof.p_max(max(0.0, m_star - 1e-12))
            hi = prof.p_max(min(1.0, m_star + 1e-12))
            continuity = max(continuity, abs(hi - lo))
    checks.append(("branch continuity", continuity <= 1e-9, f"jump {continuity:.2e}"))

    grid = np.linspace(0.0, 1.0, 101)
    values = [prof.p_max(m) for m in grid]
    diffs = np.diff(values)
    second = np.diff(diffs)
    checks.append(
        (
            "monotone nondecreasing",
            bool(diffs.min() >= -1e-12),
            f"min first difference {diffs.min():.2e}",
        )
    )
    checks.append(
        ("concavity", bool(second.max() <= 1e-9), f"max second difference {second.max():.2e}")
    )
    inv = all(ancilla_invariance_check(pair, r) for r in (2, 3))
    checks.append(("ancilla invariance of S_min", inv, "r in {2, 3}"))


def _verify_group(rep: ProjectiveRep, trials: int, seed: int, checks) -> None:
    dec = decompose(rep, seed)
    summary = kappa(dec)
    ki = verify_key_inequality(rep, dec, trials=trials, seed=seed)
    checks.append(
        (
            "key inequality",
            ki.passed,
            f"worst scaled min-eig {ki.worst_scaled_eig:.2e}, equality gap {ki.equality_gap:.2e}",
        )
    )

    rng = np.random.default_rng(seed)
    pset = process_set_from_rep(rep)
    worst = 0.0
    for _ in range(max(1, min(50, trials))):
        povm = Povm(tuple(random_povm(rng, rep.dimension, rep.group.order + 1)))
        state = InputState.pure(random_pure_state(rng, rep.dimension))
        before = evaluate(pset, state, povm)
        after = evaluate(pset, state, symmetrize(rep, povm, state).to_povm())
        worst = max(
            worst,
            abs(before.p_success - after.p_success),
            abs(before.p_error - after.p_error),
        )
    checks.append(("symmetrization invariance", worst <= 1e-10, f"worst drift {worst:.2e}"))

    margins = [0.0, float(summary.m_c) / 2, float(summary.m_c), 1.0]
    witness_ok, detail = True, "all margins reproduced"
    for m in margins:
        if not 0.0 <= m <= 1.0:
            continue
        try:
            optimal_strategy(dec, m)
        except WitnessMismatch as exc:
            witness_ok, detail = False, str(exc)
            break
    checks.append(("witness consistency", witness_ok, detail))
    checks.append(
        (
            "signature",
            True,
            f"{multiplicity_signature(dec)} kappa={summary.kappa} kappaA={summary.kappa_ancilla}",
        )
    )


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="margindisc",
        description="Unitary-process discrimination with an error margin",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    seed_default = _default_seed()

    def add_common(p, margin_required: bool = False, margin_default=None):
        p.add_argument("--seed", type=int, default=seed_default)
        p.add_argument("--format", choices=("json", "csv", "table"), default="json")
        p.add_argument("--oracle", action="store_true", help="run the certification oracle")
        p.add_argument("--oracle-restarts", type=int, default=None)
        p.add_argument("--oracle-iterations", type=int, default=None)
        if margin_required:
            p.add_argument("--margin", required=True)
        else:
            p.add_argument("--margin", default=margin_default)

    p = sub.add_parser("two-unitary", help="solve a two-unitary problem file")
    p.add_argument("--file", required=True)
    add_common(p)
    p.set_defaults(func=cmd_two_unitary)

    p = sub.add_parser("group", help="solve a group-symmetric problem file")
    p.add_argument("--file", required=True)
    p.add_argument("--ancilla", type=int, default=1)
    p.add_argument(
        "--verify-theorem",
        type=int,
        nargs="?",
        const=100,
        default=None,
        metavar="TRIALS",
    )
    add_common(p)
    p.set_defaults(func=cmd_group)

    pc = sub.add_parser("catalog", help="closed-form example families")
    fam = pc.add_subparsers(dest="family", required=True)

    p = fam.add_parser("phase-shift")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--N", type=int, default=1)
    _catalog_common(p, seed_default)

    p = fam.add_parser("color-coding")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--curve", action="store_true", help="emit CSV curve data")
    p.add_argument("--max-N", type=int, default=12, dest="max_N")
    _catalog_common(p, seed_default)

    p = fam.add_parser("superdense")
    p.add_argument("--d", type=int, required=True)
    _catalog_common(p, seed_default)

    p = fam.add_parser("qutrit-phase")
    p.add_argument("--d", type=int, required=True)
    _catalog_common(p, seed_default)

    p = sub.add_parser("verify", help="run key-inequality/symmetrization/witness checks")
    p.add_argument("--file", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=seed_default)
    p.set_defaults(func=cmd_verify)

    return parser


def _catalog_common(p, seed_default: int) -> None:
    p.add_argument("--margin", default="1")
    p.add_argument("--ancilla", type=int, default=1)
    p.add_argument("--seed", type=int, default=seed_default)
    p.add_argument("--format", choices=("json", "csv", "table"), default="json")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--oracle-restarts", type=int, default=None)
    p.add_argument("--oracle-iterations", type=int, default=None)
    p.add_argument("--emit-file", default=None, metavar="PATH")
    p.set_defaults(func=cmd_catalog)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, ValidationError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 1
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (CertificationFailure, WitnessMismatch) as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return 3
    except MarginDiscError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
