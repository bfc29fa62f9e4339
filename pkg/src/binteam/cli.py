"""Command-line front end.

Subcommands::

    binteam classify [--format csv|json|table]
    binteam orbit (--code C | --M JSON --N JSON)
    binteam solve INSTANCE.json [--strategy S.json] [--restarts R] [--seed S] [--no-seesaw]
    binteam witness [--instance-out F] [--strategy-out F]
    binteam verify [--seed S] [--samples N] [--chi-grid 1/4,1,2] [--output report.json]
    binteam report [AUDIT.json]

Exit status is 0 on success, 1 when a verification fails and 2 on malformed
input.  Output depends only on the arguments.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from .polytopes import DeterministicVertexLabel, local_optimum, ns_optimum
from .quantum import (
    HALF_CAC_WITNESS_COST,
    half_cac_witness,
    load_strategy,
    quantum_cost,
    seesaw_optimize,
    strategy_problems,
    strategy_to_dict,
)
from .superstructure import classify, classify_all, orbit_paths
from .team_core import BinaryCostPair, centralized_optimum, format_number, instance_to_dict, load_instance
from .verification import audit_theorem, default_chi_grid

CSV_COLUMNS = ("code", "m", "n", "cell", "orbit", "verdict")


class InputError(Exception):
    """Malformed user input; reported on stderr with exit status 2."""


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _label_dict(label, instance=None) -> dict:
    out = {"kind": "deterministic" if isinstance(label, DeterministicVertexLabel) else "no-signalling"}
    out.update(label._asdict())
    if isinstance(label, DeterministicVertexLabel) and instance is not None:
        (a0, a1), (b0, b1) = label.actions()
        la, lb = instance.action_labels
        out["actions"] = {"A": [la[a0], la[a1]], "B": [lb[b0], lb[b1]]}
    return out


def _pair_dict(pair: BinaryCostPair) -> dict:
    return {"code": pair.code, "M": [list(r) for r in pair.m], "N": [list(r) for r in pair.n]}


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(args, out) -> int:
    rows = [r.as_row() for r in classify_all()]
    if args.format == "json":
        out.write(_dump(rows))
    elif args.format == "table":
        out.write(_table(rows))
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        out.write(buf.getvalue())
    return 0


def _table(rows) -> str:
    lines = [" ".join(f"{c:>6}" if c != "verdict" and c != "cell" else f"{c:<12}" for c in CSV_COLUMNS)]
    for r in rows:
        lines.append(" ".join(f"{r[c]:>6}" if c not in ("verdict", "cell") else f"{r[c]:<12}" for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _parse_matrix(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"matrix is not JSON: {text!r}") from exc


def cmd_orbit(args, out) -> int:
    if args.code is not None:
        if not 0 <= args.code < 256:
            raise InputError("--code must be in 0..255")
        pair = BinaryCostPair.from_code(args.code)
    elif args.M is not None and args.N is not None:
        try:
            pair = BinaryCostPair(_parse_matrix(args.M), _parse_matrix(args.N))
        except (ValueError, TypeError) as exc:
            raise InputError(str(exc)) from exc
    else:
        raise InputError("give --code or both --M and --N")
    rec = classify(pair)
    members = sorted(orbit_paths(pair).items(), key=lambda kv: kv[0].code)
    result = {
        "pair": _pair_dict(pair),
        "cell": rec.cell,
        "verdict": rec.verdict,
        "representative": rec.orbit_id.code,
        "size": len(members),
        "members": [dict(_pair_dict(p), path=[str(a) for a in path]) for p, path in members],
    }
    out.write(_dump(result))
    return 0


def cmd_solve(args, out) -> int:
    instance = load_instance(args.instance)
    j_l, lab_l = local_optimum(instance)
    j_ns, lab_ns = ns_optimum(instance)
    j_c, arg_c = centralized_optimum(instance)
    result = {
        "instance": instance_to_dict(instance),
        "class": classify(instance.cost_pair).as_row(),
        "local_optimum": format_number(j_l),
        "local_argmin": _label_dict(lab_l, instance),
        "ns_optimum": format_number(j_ns),
        "ns_argmin": _label_dict(lab_ns, instance),
        "centralized_optimum": format_number(j_c),
        "centralized_argmin": {f"{a},{b}": list(u) for (a, b), u in arg_c.items()},
        "ns_gap": j_ns < j_l,
        "centralization_gap": j_c < j_l,
    }
    if args.strategy:
        strat = load_strategy(args.strategy)
        problems = strategy_problems(strat)
        if problems:
            raise InputError("invalid strategy: " + "; ".join(problems))
        jq = quantum_cost(instance, strat)
        result["strategy"] = {"quantum_cost": format_number(jq), "gap": format_number(float(j_l) - jq),
                              "advantage": jq < float(j_l)}
    if not args.no_seesaw:
        res = seesaw_optimize(instance, restarts=args.restarts, seed=args.seed)
        result["seesaw"] = {
            "value": format_number(res.value),
            "gap": format_number(float(j_l) - res.value),
            "converged": res.converged,
            "iterations": res.iterations,
            "restarts": args.restarts,
            "seed": args.seed,
        }
    out.write(_dump(result))
    return 0


def cmd_witness(args, out) -> int:
    instance, strat = half_cac_witness()
    j_l, lab = local_optimum(instance)
    jq = quantum_cost(instance, strat)
    result = {
        "instance": instance_to_dict(instance),
        "strategy": strategy_to_dict(strat),
        "valid": not strategy_problems(strat),
        "quantum_cost": format_number(jq),
        "quantum_cost_closed_form": "(-7-3*sqrt(3))/10",
        "closed_form_error": format_number(abs(jq - HALF_CAC_WITNESS_COST)),
        "local_optimum": format_number(j_l),
        "local_argmin": _label_dict(lab, instance),
        "gap": format_number(float(j_l) - jq),
    }
    if args.instance_out:
        Path(args.instance_out).write_text(_dump(result["instance"]))
    if args.strategy_out:
        Path(args.strategy_out).write_text(_dump(result["strategy"]))
    out.write(_dump(result))
    return 0


def _parse_chi_grid(text: str):
    try:
        grid = tuple(Fraction(v.strip()) for v in text.split(",") if v.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad --chi-grid {text!r}") from exc
    if not grid or any(c <= 0 for c in grid):
        raise InputError("--chi-grid needs positive rationals")
    return grid


def cmd_verify(args, out) -> int:
    if args.samples < 1:
        raise InputError("--samples must be at least 1")
    grid = _parse_chi_grid(args.chi_grid) if args.chi_grid else default_chi_grid(args.seed)
    report = audit_theorem(seed=args.seed, samples_per_class=args.samples, chi_grid=grid)
    if args.output:
        Path(args.output).write_text(_dump(report.to_dict()))
    out.write(report.summary_table() + "\n")
    for c in report.failures:
        out.write(f"FAILED {c.name} code={c.code}: {c.detail}\n")
    return 0 if report.passed else 1


def cmd_report(args, out) -> int:
    if not args.audit:
        out.write(_table([r.as_row() for r in classify_all()]))
        return 0
    try:
        data = json.loads(Path(args.audit).read_text())
        checks, meta = data["checks"], data["metadata"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"not an audit report: {exc}") from exc
    by_name: dict[str, list[int]] = {}
    for c in checks:
        tally = by_name.setdefault(c["name"], [0, 0])
        tally[0] += 1
        tally[1] += not c["passed"]
    out.write(f"seed={meta.get('seed')} samples_per_class={meta.get('samples_per_class')} "
              f"chi_grid={','.join(meta.get('chi_grid', []))}\n")
    out.write(f"{'check':<28} {'runs':>6} {'failed':>6}\n")
    for name in sorted(by_name):
        runs, bad = by_name[name]
        out.write(f"{name:<28} {runs:>6} {bad:>6}\n")
    passed = all(c["passed"] for c in checks)
    out.write(f"overall: {'PASS' if passed else 'FAIL'}\n")
    return 0 if passed else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="binteam", description="Binary two-agent team decision problems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify all 256 cost pairs")
    p.add_argument("--format", choices=("csv", "json", "table"), default="csv")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("orbit", help="orbit of one cost pair under the symmetry actions")
    p.add_argument("--code", type=int, help="pair code: M mask in bits 0-3, N mask in bits 4-7")
    p.add_argument("--M", help="M as JSON, e.g. '[[-1,0],[0,-1]]'")
    p.add_argument("--N", help="N as JSON")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("solve", help="local, no-signalling and centralised optima of an instance")
    p.add_argument("instance", help="instance JSON file")
    p.add_argument("--strategy", help="strategy JSON file to evaluate")
    p.add_argument("--restarts", type=int, default=32, help="see-saw restarts (default 32)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-seesaw", action="store_true", help="skip the see-saw search")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("witness", help="reproduce the 1/2-CAC advantage witness")
    p.add_argument("--instance-out", help="also write the instance JSON here")
    p.add_argument("--strategy-out", help="also write the strategy JSON here")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="run the audit over all 256 classes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=500, help="instances per class (default 500)")
    p.add_argument("--chi-grid", help="comma-separated rationals; default: base grid plus 4 seeded draws")
    p.add_argument("--output", help="write the audit report JSON here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="summarise an audit JSON, or print the classification table")
    p.add_argument("audit", nargs="?", help="audit report written by 'verify --output'")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "restarts", 1) < 1:
        print("binteam: error: --restarts must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args, out)
    except (InputError, ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"binteam: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
