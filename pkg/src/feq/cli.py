"""``feq`` command-line front end.

Standard output carries JSON only; diagnostics go to standard error.
Exit status 0 means success and 2 means a usage or constraint error.  A failed
verification or an unclassifiable input exits 1.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .algebra import ZOO, abelianization, derived_subgroup, make_carrier
from .classify import classify
from .equations import EQUATIONS, build_context, verify
from .errors import (
    AuxiliaryInvalid,
    BackendMismatch,
    ConstraintViolated,
    FeqError,
    InternalVerificationFailed,
    NotASolution,
    Unclassifiable,
)
from .families import BranchParams, construct, get_branch, list_branches
from .fixtures import fixture_suite, run_fixture
from .funcspace import enumerate_characters
from .oracle import SweepConfig, sweep
from .sampling import standard_fixed
from .serialize import (
    _Decoder,
    branch_result_to_json,
    carrier_to_json,
    characters_to_json,
    report_to_json,
    solution_from_json,
    solution_to_json,
    sweep_report_to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(doc, out=None):
    text = json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def _note(msg):
    print(msg, file=sys.stderr)


def _load_json(arg):
    """Inline JSON or a path to a UTF-8 JSON file."""
    if arg is None:
        return None
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            return json.load(fh)
    try:
        return json.loads(arg)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not a file and not valid JSON: {arg!r} ({exc})") from None


def _equation(name):
    eq = str(name).upper()
    if eq not in EQUATIONS:
        raise UsageError(f"unknown equation {name!r}; expected one of {', '.join(EQUATIONS)}")
    return eq


# ---------------------------------------------------------------------------
# default fixed data


def _context(args, eq, carrier):
    n = getattr(args, "n", None) or 2
    fixed = standard_fixed(eq, carrier, n) if not args.fixed else {}
    if args.fixed:
        doc = _load_json(args.fixed)
        dec = _Decoder(carrier, doc.pop("conductor", 1) if isinstance(doc, dict) else 1)
        for key, val in doc.items():
            fixed[key] = [dec.fn(v) for v in val] if key == "chis" else dec.fn(val)
    return build_context(eq, carrier, fixed, args.radius)


# ---------------------------------------------------------------------------
# subcommands


def cmd_groups(args):
    specs = [args.carrier] if args.carrier else list(ZOO)
    out = []
    for spec in specs:
        c = make_carrier(spec)
        entry = {"carrier": carrier_to_json(c), "group": c.is_group, "finite": c.is_finite,
                 "generators": [c.name(g) for g in c.generators]}
        if c.is_finite:
            entry["order"] = c.order
            if c.is_group:
                entry["abelianization"] = list(abelianization(c).factors)
                entry["derived_order"] = derived_subgroup(c).order
                entry["characters"] = len(enumerate_characters(c))
        out.append(entry)
    _emit({"carriers": out})
    return EXIT_OK


def cmd_characters(args):
    c = make_carrier(args.carrier)
    doc = characters_to_json(c)
    doc["count"] = len(doc["characters"])
    _emit(doc)
    return EXIT_OK


def cmd_branches(args):
    eqs = [_equation(args.equation)] if args.equation else list(EQUATIONS)
    out = []
    for eq in eqs:
        for b in list_branches(eq):
            out.append({"key": b.key, "equation": eq, "branch": b.index, "formula": b.anchor,
                        "params": list(b.param_names(2)), "aux": list(b.aux_names(2)), "gauge": list(b.gauge),
                        "constraints": [name for name, _ in b.constraints], "note": b.note or None})
    _emit({"branches": out})
    return EXIT_OK


def _branch_params(doc, carrier):
    doc = dict(doc or {})
    dec = _Decoder(carrier, doc.pop("conductor", 1))
    if "params" in doc:
        aux_doc = doc.get("aux") or {}
        doc = doc["params"]
    else:
        aux_doc = {}
    params = {k: dec.s(str(v)) for k, v in doc.items()}
    aux = {}
    for k, v in aux_doc.items():
        if v is None:
            aux[k] = None
        elif isinstance(v, dict) and "element" in v:
            aux[k] = dec.el(v["element"])
        else:
            aux[k] = dec.fn(v)
    return BranchParams(params, aux)


def cmd_construct(args):
    eq = _equation(args.equation)
    c = make_carrier(args.carrier)
    ctx = _context(args, eq, c)
    get_branch(eq, args.branch)
    bp = _branch_params(_load_json(args.params), c)
    if args.aux:
        extra = _branch_params({"params": {}, "aux": _load_json(args.aux)}, c)
        bp = BranchParams(bp.params, {**bp.aux, **extra.aux})
    tup = construct(ctx, args.branch, bp)
    _emit(solution_to_json(ctx, tup), args.out)
    return EXIT_OK


def _read_solution(args):
    doc = _load_json(args.solution)
    if doc is None:
        raise UsageError("--solution is required")
    if args.equation and _equation(args.equation) != str(doc.get("equation", "")).upper():
        raise UsageError(f"solution is for {doc.get('equation')}, not {args.equation}")
    return solution_from_json(doc, args.radius)


def cmd_verify(args):
    ctx, tup = _read_solution(args)
    if args.backend == "float":
        ctx, tup = ctx.to_float(), tup.to_float()
    rep = verify(ctx, tup)
    _emit(report_to_json(rep, ctx.carrier.spec))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_classify(args):
    if args.backend == "float":
        raise UsageError("classify needs exact arithmetic; the float backend is refused")
    ctx, tup = _read_solution(args)
    try:
        res = classify(ctx, tup)
    except (NotASolution, Unclassifiable) as exc:
        _note(str(exc))
        _emit({"status": "not_a_solution" if isinstance(exc, NotASolution) else "unclassifiable",
               "reason": str(exc)})
        return EXIT_FAIL
    doc = branch_result_to_json(res, ctx.carrier.spec)
    doc["key"] = res.key
    _emit(doc)
    return EXIT_OK


def cmd_sweep(args):
    eq = _equation(args.equation)
    c = make_carrier(args.carrier)
    ctx = _context(args, eq, c)
    cfg = SweepConfig(structured=args.samples, unstructured=args.unstructured, homogeneous=args.homogeneous,
                      dump_dir=args.dump)
    rep = sweep(ctx, cfg, args.seed)
    doc = sweep_report_to_json(rep)
    doc["clean"] = rep.clean
    _emit(doc)
    return EXIT_OK if rep.clean else EXIT_FAIL


def _slug(name):
    return re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_").lower()


def _witness(rep, carrier):
    if not rep.failures:
        return None
    doc = report_to_json(rep, carrier)
    return {"conductor": doc["conductor"], **doc["failures"][0]}


def cmd_fixtures(args):
    rows = []
    if args.source:
        files = sorted(f for f in os.listdir(args.source) if f.endswith(".json"))
        wanted = [f.lower() for f in args.filter or []]
        for fname in files:
            with open(os.path.join(args.source, fname), encoding="utf-8") as fh:
                doc = json.load(fh)
            name = doc.get("name", fname)
            if wanted and not any(w in name.lower() for w in wanted):
                continue
            ctx, tup = solution_from_json(doc)
            rep = verify(ctx, tup)
            rows.append({"name": name, "file": fname, "verdict": rep.verdict, "problems": [],
                         "witness": _witness(rep, ctx.carrier.spec)})
    else:
        for fx in fixture_suite(args.filter):
            res = run_fixture(fx)
            row = {"name": fx.name, "verdict": "pass" if res.passed else "fail", "problems": res.problems,
                   "witness": _witness(res.report, fx.ctx.carrier.spec)}
            if args.export:
                os.makedirs(args.export, exist_ok=True)
                doc = solution_to_json(fx.ctx, fx.tup)
                doc["name"] = fx.name
                row["file"] = _slug(fx.name) + ".json"
                with open(os.path.join(args.export, row["file"]), "w", encoding="utf-8") as fh:
                    json.dump(doc, fh, indent=2, sort_keys=True, ensure_ascii=False)
                    fh.write("\n")
            rows.append(row)
    width = max((len(r["name"]) for r in rows), default=4)
    for r in rows:
        _note(f"{r['name']:<{width}}  {r['verdict'].upper()}")
    failed = sum(r["verdict"] != "pass" for r in rows)
    _emit({"fixtures": rows, "passed": len(rows) - failed, "failed": failed})
    return EXIT_OK if failed == 0 else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing


def _radius(text):
    r = int(text)
    if r < 0:
        raise argparse.ArgumentTypeError("radius must be non-negative")
    return r


def build_parser():
    p = argparse.ArgumentParser(prog="feq", description="Exact construction, verification and classification "
                                "of solutions to sine-addition-type functional equations.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, carrier=False, equation=False, fixed=False):
        if carrier:
            sp.add_argument("--carrier", required=True, help="carrier spec, e.g. C6, S3, Z^2, N^1, BS12")
        if equation:
            sp.add_argument("--equation", required=True, help="E0 to E8")
        if fixed:
            sp.add_argument("--fixed", help="JSON (inline or file) with the fixed functions; character labels allowed")
            sp.add_argument("--n", type=int, default=2, help="number of characters for E3/E4")
        sp.add_argument("--radius", type=_radius, default=None, help="word-ball radius for infinite carriers")

    sp = sub.add_parser("groups", help="describe zoo carriers")
    sp.add_argument("--carrier")
    sp.set_defaults(run=cmd_groups)

    sp = sub.add_parser("characters", help="enumerate the characters of a finite carrier")
    sp.add_argument("--carrier", required=True)
    sp.set_defaults(run=cmd_characters)

    sp = sub.add_parser("branches", help="list the solution families")
    sp.add_argument("--equation")
    sp.set_defaults(run=cmd_branches)

    sp = sub.add_parser("construct", help="build a solution from family parameters")
    common(sp, carrier=True, equation=True, fixed=True)
    sp.add_argument("--branch", type=int, required=True)
    sp.add_argument("--params", default="{}", help="JSON object of scalar literals")
    sp.add_argument("--aux", help="JSON object of auxiliary functions")
    sp.add_argument("--out", help="also write the solution to this file")
    sp.set_defaults(run=cmd_construct)

    for name, fn, hlp in (("verify", cmd_verify, "check a solution on the verification domain"),
                          ("classify", cmd_classify, "identify the family and parameters of a solution")):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("--equation")
        sp.add_argument("--solution", required=True, help="solution JSON file")
        sp.add_argument("--backend", choices=("exact", "float"), default="exact")
        sp.add_argument("--radius", type=_radius, default=None)
        sp.set_defaults(run=fn)

    sp = sub.add_parser("sweep", help="oracle completeness sweep")
    common(sp, carrier=True, equation=True, fixed=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=100, help="structured samples")
    sp.add_argument("--unstructured", type=int, default=50)
    sp.add_argument("--homogeneous", type=int, default=3)
    sp.add_argument("--dump", help="directory for counterexample dumps")
    sp.set_defaults(run=cmd_sweep)

    sp = sub.add_parser("fixtures", help="run the named reference fixtures")
    sp.add_argument("--filter", action="append", help="substring of fixture names (repeatable)")
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--export", help="write each fixture solution to this directory")
    src.add_argument("--from", dest="source", help="verify solution files from this directory instead")
    sp.set_defaults(run=cmd_fixtures)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (UsageError, ConstraintViolated, AuxiliaryInvalid, BackendMismatch, ValueError, KeyError,
            FileNotFoundError) as exc:
        _note(f"feq: error: {exc}")
        return EXIT_USAGE
    except InternalVerificationFailed as exc:
        _note(f"feq: internal verification failed: {exc}")
        return EXIT_FAIL
    except FeqError as exc:
        _note(f"feq: {type(exc).__name__}: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
