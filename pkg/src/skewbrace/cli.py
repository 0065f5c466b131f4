"""Command-line front door.

Exit codes: 0 success / verification passed; 1 verification failed
(counterexample or invalid input object); 2 usage error; 3 resource
limit (size bound or search budget).  Reports are JSON on stdout with
stable key order; `enumerate` streams JSON lines.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .braces import (
    SkewBrace,
    brace_class,
    is_left_simple,
    left_ideals,
    make_brace,
)
from .catalog import BUILTIN_NAMES, resolve_group_name
from .classification import check_conditions, check_thm2b, verify_thm1, verify_thm2a
from .enumeration import brute_force_braces, enumerate_braces
from .errors import (
    BraceRelationFails,
    IdentityMismatch,
    NotAGroup,
    NotSimpleAdditive,
    SearchTimeout,
    SizeLimit,
    SkewBraceError,
    TableCorrupt,
)
from .fileio import load_brace, load_group
from .groups import (
    DEFAULT_LATTICE_BOUND,
    DEFAULT_TABLE_BOUND,
    FiniteGroup,
    all_subgroups,
    automorphism_group,
    group_profile,
    opposite_group,
)
from .hopf_galois import correspondence_report, fixed_algebra_stats
from .tables import audit_paper_tables

USAGE_ERROR = 2
LIMIT_ERROR = 3


class UsageError(Exception):
    pass


def _resolve_group(spec: str, table_bound: int) -> FiniteGroup:
    G = resolve_group_name(spec, table_bound=table_bound)
    if G is not None:
        return G
    if Path(spec).exists():
        return load_group(spec, table_bound=table_bound)
    raise UsageError(
        f"unknown group {spec!r}: not a builtin ({', '.join(BUILTIN_NAMES)}; "
        f"powers like A5^2) and not a file"
    )


def _resolve_brace(spec: str, table_bound: int, workers: int) -> SkewBrace:
    for prefix, opposite in (("trivial:", False), ("almost-trivial:", True)):
        if spec.startswith(prefix):
            G = _resolve_group(spec[len(prefix):], table_bound)
            circle = opposite_group(G) if opposite else G
            kind = "almost_trivial" if opposite else "trivial"
            return make_brace(G, circle, name=f"{kind}:{G.name}", workers=workers)
    if Path(spec).exists():
        return load_brace(spec, table_bound=table_bound, workers=workers)
    raise UsageError(
        f"unknown brace {spec!r}: not a file and not trivial:<group> / "
        f"almost-trivial:<group>"
    )


def _cmd_group_inspect(args) -> tuple[int, dict]:
    G = _resolve_group(args.group, args.table_bound)
    profile = group_profile(G, aut_bound=args.aut_bound)
    report = {
        "group": G.name,
        "order": G.order,
        "is_abelian": profile.is_abelian,
        "center_order": len(profile.center),
        "is_simple": profile.is_simple,
        "is_characteristically_simple": profile.is_characteristically_simple,
        "simple_factor_hint": profile.simple_factor_hint,
    }
    if G.order <= args.aut_bound:
        aut = automorphism_group(G, bound=args.aut_bound)
        report["aut_order"] = aut.order
        report["inner_order"] = aut.inner_order
        report["out_order"] = aut.out_order
    if G.order <= args.lattice_bound:
        report["subgroup_count"] = len(all_subgroups(G, lattice_bound=args.lattice_bound))
    return 0, report


def _cmd_brace_check(args) -> tuple[int, dict]:
    try:
        B = _resolve_brace(args.brace, args.table_bound, args.workers)
    except BraceRelationFails as exc:
        return 1, {
            "valid": False,
            "error": "brace relation fails",
            "triple": list(exc.triple),
        }
    except (NotAGroup, IdentityMismatch) as exc:
        return 1, {"valid": False, "error": str(exc)}
    return 0, {
        "valid": True,
        "name": B.name,
        "order": B.order,
        "brace_class": brace_class(B),
    }


def _cmd_brace_ideals(args) -> tuple[int, dict]:
    B = _resolve_brace(args.brace, args.table_bound, args.workers)
    ideals = left_ideals(B, lattice_bound=args.lattice_bound)
    return 0, {
        "name": B.name,
        "order": B.order,
        "left_ideal_count": len(ideals),
        "left_ideals": [
            {"order": i.order, "elements": list(i.elements)} for i in ideals
        ],
    }


def _cmd_brace_simple(args) -> tuple[int, dict]:
    B = _resolve_brace(args.brace, args.table_bound, args.workers)
    simple, witness = is_left_simple(B)
    report = {
        "name": B.name,
        "order": B.order,
        "left_simple": simple,
        "witness": None
        if witness is None
        else {"order": witness.order, "elements": list(witness.elements)},
    }
    return 0, report


def _cmd_enumerate(args) -> tuple[int, dict]:
    G = _resolve_group(args.group, args.table_bound)
    t0 = time.monotonic()
    braces = enumerate_braces(
        G,
        up_to_iso=args.up_to_iso,
        workers=args.workers,
        timeout_ms=args.timeout_ms,
    )
    lines = []
    for i, b in enumerate(braces):
        lines.append(
            {
                "index": i,
                "name": b.name,
                "order": b.order,
                "brace_class": brace_class(b),
                "circle": b.circle.table.tolist(),
            }
        )
    summary = {
        "count": len(braces),
        "up_to_iso": bool(args.up_to_iso),
        "elapsed_ms": int((time.monotonic() - t0) * 1000),
    }
    return 0, {"stream": lines, "summary": summary}


def _cmd_verify_thm1(args) -> tuple[int, dict]:
    if args.p is None or args.n is None:
        raise UsageError("verify-thm1 needs --p and --n")
    report = verify_thm1(args.p, args.n, workers=args.workers)
    return (0 if report["passed"] else 1), report


def _cmd_verify_thm2a(args) -> tuple[int, dict]:
    G = _resolve_group(args.group or "A5", args.table_bound)
    report = verify_thm2a(G, workers=args.workers, timeout_ms=args.timeout_ms)
    return (0 if report["passed"] else 1), report


def _cmd_check_thm2b(args) -> tuple[int, dict]:
    if args.n is None:
        raise UsageError("check-thm2b needs --n (the power)")
    if args.group is None:
        raise UsageError("check-thm2b needs --group (the simple factor)")
    T = _resolve_group(args.group, args.table_bound)
    B = _resolve_brace(args.brace, args.table_bound, args.workers)
    report = check_thm2b(B, T, args.n)
    return (0 if report["passed"] else 1), report


def _cmd_classify_conditions(args) -> tuple[int, dict]:
    B = _resolve_brace(args.brace, args.table_bound, args.workers)
    report = check_conditions(B, aut_bound=args.aut_bound)
    return 0, report


def _cmd_audit_tables(args) -> tuple[int, dict]:
    report = audit_paper_tables()
    return (0 if report["passed"] else 1), report


def _cmd_hgs_report(args) -> tuple[int, dict]:
    B = _resolve_brace(args.brace, args.table_bound, args.workers)
    report = correspondence_report(B, lattice_bound=args.lattice_bound).to_dict()
    report["fixed_algebra"] = fixed_algebra_stats(B)
    return 0, report


def _cmd_oracle_compare(args) -> tuple[int, dict]:
    G = _resolve_group(args.group, args.table_bound)
    brute = brute_force_braces(G)
    holo = enumerate_braces(G, up_to_iso=False, workers=args.workers)
    brute_set = {b.circle.table.tobytes() for b in brute}
    holo_set = {b.circle.table.tobytes() for b in holo}
    agree = brute_set == holo_set
    report = {
        "group": G.name,
        "order": G.order,
        "brute_force_count": len(brute),
        "holomorph_count": len(holo),
        "identical_circle_sets": agree,
        "passed": agree,
    }
    return (0 if agree else 1), report


_COMMANDS = {
    "group-inspect": _cmd_group_inspect,
    "brace-check": _cmd_brace_check,
    "brace-ideals": _cmd_brace_ideals,
    "brace-simple": _cmd_brace_simple,
    "enumerate": _cmd_enumerate,
    "verify-thm1": _cmd_verify_thm1,
    "verify-thm2a": _cmd_verify_thm2a,
    "check-thm2b": _cmd_check_thm2b,
    "classify-conditions": _cmd_classify_conditions,
    "audit-tables": _cmd_audit_tables,
    "hgs-report": _cmd_hgs_report,
    "oracle-compare": _cmd_oracle_compare,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewbrace",
        description="Finite skew brace toolkit: validation, enumeration, "
        "left-simplicity, classification tables, Hopf-Galois reports.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in _COMMANDS:
        sp = sub.add_parser(verb)
        sp.add_argument("--group", help="builtin name, T^k power, or a JSON file")
        sp.add_argument("--brace", help="JSON file, trivial:<group>, or almost-trivial:<group>")
        sp.add_argument("--p", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--up-to-iso", action="store_true")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--timeout-ms", type=int, default=None)
        sp.add_argument("--lattice-bound", type=int, default=DEFAULT_LATTICE_BOUND)
        sp.add_argument("--table-bound", type=int, default=DEFAULT_TABLE_BOUND)
        sp.add_argument("--aut-bound", type=int, default=DEFAULT_TABLE_BOUND)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", type=str, default=None)
    return parser


def _emit(args, verb: str, payload: dict, elapsed_ms: int) -> None:
    if verb == "enumerate":
        chunks = []
        for line in payload["stream"]:
            chunks.append(json.dumps(line, sort_keys=True))
        summary = dict(payload["summary"])
        summary.update({"tool_version": __version__, "command": verb})
        chunks.append(json.dumps(summary, sort_keys=True))
        text = "\n".join(chunks)
    else:
        report = dict(payload)
        report.update(
            {"tool_version": __version__, "command": verb, "elapsed_ms": elapsed_ms}
        )
        text = json.dumps(report, sort_keys=True, indent=2)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    t0 = time.monotonic()
    try:
        code, payload = _COMMANDS[args.verb](args)
    except UsageError as exc:
        print(json.dumps({"error": str(exc), "command": args.verb}, sort_keys=True))
        return USAGE_ERROR
    except (SizeLimit, SearchTimeout) as exc:
        print(
            json.dumps(
                {"error": str(exc), "command": args.verb, "kind": type(exc).__name__},
                sort_keys=True,
            )
        )
        return LIMIT_ERROR
    except BraceRelationFails as exc:
        print(
            json.dumps(
                {
                    "error": str(exc),
                    "triple": list(exc.triple),
                    "command": args.verb,
                },
                sort_keys=True,
            )
        )
        return 1
    except (NotAGroup, IdentityMismatch, NotSimpleAdditive, TableCorrupt) as exc:
        print(json.dumps({"error": str(exc), "command": args.verb}, sort_keys=True))
        return 1
    except SkewBraceError as exc:
        print(json.dumps({"error": str(exc), "command": args.verb}, sort_keys=True))
        return 1
    elapsed_ms = int((time.monotonic() - t0) * 1000)
    _emit(args, args.verb, payload, elapsed_ms)
    return code


if __name__ == "__main__":
    sys.exit(main())
