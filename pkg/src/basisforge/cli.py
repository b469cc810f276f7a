"""Command-line interface binding constructions, verification, and tables.

Every command is deterministic (no randomness anywhere in the pipeline) and
emits canonical JSON: sorted keys, compact separators, basis elements sorted
by element index.  Exit codes: 0 ok, 1 failed verification, 2 usage or
domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from .admissibility import classify_group, partition_census
from .bounds import SmallCaseExcludedError, bound_report
from .caps import CapExceededError
from .constructions import (
    BasisSet,
    UnattainableTargetError,
    even_power_recursion,
    exhaustive_min,
    greedy_basis,
    parabola_basis_odd,
    pcp_lines,
    pcp_multi,
    star_basis_standard,
    teichmuller_rds_basis,
)
from .groups import parse_group_spec
from .planner import HypothesisError, materialize_plan, plan_decomposition
from .verify import check_g_basis, check_rds

KIND_ALIASES = {"add": "additive", "diff": "difference", "additive": "additive", "difference": "difference"}


@dataclass
class CommandResult:
    status: str  # ok | error
    payload: dict
    exit_code: int


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def serialize_basis(basis: BasisSet) -> str:
    return canonical_json(basis.to_json_dict()) + "\n"


def load_basis(path: str) -> BasisSet:
    with open(path, "r", encoding="utf-8") as fh:
        return BasisSet.from_json_dict(json.load(fh))


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="basisforge", description=__doc__)
    top.add_argument("--threads", type=int, default=1, help="worker cap (outputs never depend on it)")
    top.add_argument("--cap", type=int, default=None, help="enumeration cap override")
    subs = top.add_subparsers(dest="command", required=True)

    c = subs.add_parser("construct", help="build a basis and write it as JSON")
    c.add_argument("--family", required=True,
                   choices=["parabola", "t4rds", "star8", "pcp", "pcpmulti", "recursion", "greedy"])
    c.add_argument("--p", type=int)
    c.add_argument("--s", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--g", type=int)
    c.add_argument("--kind", choices=list(KIND_ALIASES))
    c.add_argument("--complete", action="store_true")
    c.add_argument("--variant", choices=["Z2_2s_n", "Z2s_2n"])
    c.add_argument("--group", type=str)
    c.add_argument("--out", required=True)

    v = subs.add_parser("verify", help="check a basis file at a given g and kind")
    v.add_argument("--basis", required=True)
    v.add_argument("--g", type=int, required=True)
    v.add_argument("--kind", choices=list(KIND_ALIASES), required=True)

    r = subs.add_parser("rds-check", help="relative-difference-set check for a basis file")
    r.add_argument("--basis", required=True)
    r.add_argument("--subgroup", required=True, help="JSON list of generator coordinate lists")
    r.add_argument("--lambda", dest="lam", type=int, required=True)

    cl = subs.add_parser("classify", help="admissibility class of a 2-group")
    cl.add_argument("--group", required=True)

    ce = subs.add_parser("census", help="partition census of 2-groups up to a given order exponent")
    ce.add_argument("--max-n", dest="max_n", type=int, required=True)
    ce.add_argument("--out", required=True)

    b = subs.add_parser("bounds", help="lower/upper bound report for a group")
    b.add_argument("--group", required=True)
    b.add_argument("--g", type=int, required=True)
    b.add_argument("--kind", choices=list(KIND_ALIASES), required=True)

    s = subs.add_parser("search-min", help="exact minimum basis size by exhaustive search")
    s.add_argument("--group", required=True)
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--kind", choices=list(KIND_ALIASES), required=True)

    p = subs.add_parser("plan", help="symbolic decomposition plan for a power of a group")
    p.add_argument("--group", required=True)
    p.add_argument("--theorem", choices=["weak", "adm"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--materialize", action="store_true")
    p.add_argument("--out", help="write the materialized basis here")
    return top


def _construct(args) -> CommandResult:
    fam = args.family
    cap = args.cap

    def need(*names):
        missing = [x for x in names if getattr(args, x) is None]
        if missing:
            raise ValueError(f"family {fam} requires --" + ", --".join(missing))

    if fam == "parabola":
        need("p", "s", "n")
        basis = parabola_basis_odd(args.p, args.s, args.n, complete=args.complete, cap=cap)
    elif fam == "t4rds":
        need("n")
        basis = teichmuller_rds_basis(args.n, complete=args.complete, cap=cap)
    elif fam == "star8":
        need("n")
        basis = star_basis_standard(args.n, cap=cap)
    elif fam == "pcp":
        need("p", "s", "n", "k")
        basis = pcp_lines(args.p, args.s, args.n, args.k, cap=cap)
    elif fam == "pcpmulti":
        need("group", "k")
        basis = pcp_multi(parse_group_spec(args.group), args.k, cap=cap)
    elif fam == "recursion":
        need("variant", "s", "n")
        basis = even_power_recursion(args.s, args.n, args.variant, cap=cap)
    else:  # greedy
        need("group", "g", "kind")
        basis = greedy_basis(parse_group_spec(args.group), args.g, KIND_ALIASES[args.kind], cap=cap)

    _write(args.out, serialize_basis(basis))
    payload = {
        "file": args.out,
        "group": list(basis.group.moduli),
        "size": basis.size,
        "kind": basis.kind,
        "g_claimed": basis.g_claimed,
    }
    return CommandResult("ok", payload, 0)


def _verify(args) -> CommandResult:
    basis = load_basis(args.basis)
    cert = check_g_basis(basis, KIND_ALIASES[args.kind], args.g, cap=args.cap)
    payload = cert.to_json_dict()
    payload["group"] = list(basis.group.moduli)
    return CommandResult("ok" if cert.passed else "error", payload, 0 if cert.passed else 1)


def _rds_check(args) -> CommandResult:
    basis = load_basis(args.basis)
    gens = [tuple(x) for x in json.loads(args.subgroup)]
    res = check_rds(basis, gens, args.lam, cap=args.cap)
    return CommandResult("ok" if res.passed else "error", res.to_json_dict(), 0 if res.passed else 1)


def _classify(args) -> CommandResult:
    g = parse_group_spec(args.group)
    return CommandResult("ok", {"group": list(g.moduli), "verdict": classify_group(g)}, 0)


def _census(args) -> CommandResult:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "p_n", "weakly", "admissible", "ratio"])
    for n in range(1, args.max_n + 1):
        stats = partition_census(n)
        writer.writerow(
            [n, stats.total, stats.weakly_admissible, stats.admissible, f"{stats.ratio:.6f}"]
        )
    _write(args.out, buf.getvalue())
    return CommandResult("ok", {"file": args.out, "rows": args.max_n}, 0)


def _bounds(args) -> CommandResult:
    g = parse_group_spec(args.group)
    report = bound_report(g, args.g, KIND_ALIASES[args.kind])
    return CommandResult("ok", report.to_json_dict(), 0)


def _search_min(args) -> CommandResult:
    g = parse_group_spec(args.group)
    size, witness = exhaustive_min(g, args.g, KIND_ALIASES[args.kind])
    payload = {
        "group": list(g.moduli),
        "g": args.g,
        "kind": KIND_ALIASES[args.kind],
        "size": size,
        "witness": [list(e) for e in witness.sorted_elements()],
    }
    return CommandResult("ok", payload, 0)


def _plan(args) -> CommandResult:
    g = parse_group_spec(args.group)
    theorem = "weakly_admissible" if args.theorem == "weak" else "admissible"
    plan = plan_decomposition(g, theorem, args.n)
    payload = plan.to_json_dict()
    if args.materialize:
        basis = materialize_plan(plan, cap=args.cap)
        cert = check_g_basis(basis, "difference", 1, cap=args.cap)
        payload["materialized"] = {
            "size": basis.size,
            "verdict": cert.verdict,
            "min_count": cert.min_count,
        }
        if args.out:
            _write(args.out, serialize_basis(basis))
            payload["materialized"]["file"] = args.out
        if not cert.passed:
            return CommandResult("error", payload, 1)
    return CommandResult("ok", payload, 0)


_HANDLERS = {
    "construct": _construct,
    "verify": _verify,
    "rds-check": _rds_check,
    "classify": _classify,
    "census": _census,
    "bounds": _bounds,
    "search-min": _search_min,
    "plan": _plan,
}


def run(argv: list[str]) -> CommandResult:
    """Parse and execute one command; never raises on expected failures."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return CommandResult("error", {"error": "usage"}, 2 if code != 0 else 0)
    if args.threads is not None and args.threads < 1:
        return CommandResult("error", {"error": "--threads must be >= 1"}, 2)
    try:
        return _HANDLERS[args.command](args)
    except CapExceededError as exc:
        return CommandResult(
            "error", {"error": str(exc), "cap": exc.cap, "size": exc.size}, 2
        )
    except (ValueError, HypothesisError, UnattainableTargetError, SmallCaseExcludedError) as exc:
        return CommandResult("error", {"error": str(exc)}, 2)
    except FileNotFoundError as exc:
        return CommandResult("error", {"error": str(exc)}, 2)


def main() -> None:
    result = run(sys.argv[1:])
    doc = dict(result.payload)
    doc["status"] = result.status
    print(canonical_json(doc))
    sys.exit(result.exit_code)


if __name__ == "__main__":
    main()
