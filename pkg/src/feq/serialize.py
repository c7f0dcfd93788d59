"""JSON readers and writers.

Every document declares one ``conductor`` N; cyclotomic literals in it are
written in the power basis of Q(zeta_N).  Functions are stored
structurally (``repr`` = table, mult, add, lincomb, product, phi) so they
stay defined off the verification domain.
"""

from __future__ import annotations

from collections import Counter

from .algebra import Carrier, make_carrier
from .equations import (
    EQUATIONS,
    EquationContext,
    SolutionTuple,
    VerificationReport,
    build_context,
    custom_context,
)
from .funcspace import (
    Additive,
    FloatView,
    GFunction,
    LinComb,
    Multiplicative,
    Phi,
    PhiRecord,
    Product,
    Table,
    enumerate_characters,
    table_from_function,
)
from .scalar import Cyclotomic, FloatScalar, format_scalar, lcm, parse_scalar


# ---------------------------------------------------------------------------
# carriers


def carrier_to_json(c: Carrier):
    try:
        if make_carrier(c.spec) == c:
            return c.spec
    except Exception:
        pass
    return {"name": c.spec, **c.to_json()}


def carrier_from_json(doc) -> Carrier:
    return make_carrier(doc)


# ---------------------------------------------------------------------------
# encoder with a conductor pre-pass


class _Encoder:
    def __init__(self, carrier):
        self.c = carrier
        self.N = 1
        self.collect = True

    def s(self, v):
        if self.collect:
            if isinstance(v, Cyclotomic):
                self.N = lcm(self.N, v.canonical().n)
            return None
        if isinstance(v, FloatScalar):
            return format_scalar(v)
        return format_scalar(v, self.N)

    def el(self, x):
        return self.c.name(x)

    def fn(self, f: GFunction):
        if isinstance(f, FloatView):
            return self.fn(f.inner)
        if isinstance(f, Multiplicative):
            return {"repr": "mult", "images": [self.s(v) for v in f.images], "character": f.character}
        if isinstance(f, Additive):
            return {"repr": "add", "images": [self.s(v) for v in f.images]}
        if isinstance(f, LinComb):
            return {"repr": "lincomb", "terms": [[self.s(a), self.fn(g)] for a, g in f.terms]}
        if isinstance(f, Product):
            return {"repr": "product", "mult": self.fn(f.mult), "add": self.fn(f.add)}
        if isinstance(f, Phi):
            r = f.record
            return {"repr": "phi", "form": r.form, "chi1": self.fn(r.chi1), "chi2": self.fn(r.chi2),
                    "alpha": self.s(r.alpha), "lam": self.s(r.lam),
                    "additive": self.fn(r.additive) if r.additive is not None else None,
                    "base": self.el(r.base) if r.base is not None else None}
        if not isinstance(f, Table):
            f = table_from_function(f)
        vals = {self.el(x): self.s(v) for x, v in f.table.items()}
        return {"repr": "table", "values": dict(sorted(vals.items())) if not self.collect else vals,
                "default": self.s(f.default) if f.default is not None else None}


def _encode(carrier, build):
    """Run ``build(enc)`` twice: once to learn the conductor, once to emit."""
    enc = _Encoder(make_carrier(carrier))
    build(enc)
    enc.collect = False
    doc = build(enc)
    doc["conductor"] = enc.N
    return doc


class _Decoder:
    def __init__(self, carrier, conductor=1):
        self.c = carrier
        self.N = int(conductor or 1)

    def s(self, text):
        return parse_scalar(text, conductor=self.N)

    def el(self, name):
        return self.c.parse(name)

    def fn(self, d):
        if isinstance(d, str):
            return character_by_label(self.c, d)
        if "conductor" in d and d["conductor"] != self.N:
            return _Decoder(self.c, d["conductor"]).fn({k: v for k, v in d.items() if k != "conductor"})
        kind = d.get("repr")
        if kind == "mult":
            return Multiplicative(self.c, [self.s(v) for v in d["images"]], character=d.get("character", True))
        if kind == "add":
            return Additive(self.c, [self.s(v) for v in d["images"]])
        if kind == "lincomb":
            return LinComb(self.c, [(self.s(a), self.fn(g)) for a, g in d["terms"]])
        if kind == "product":
            return Product(self.fn(d["mult"]), self.fn(d["add"]))
        if kind == "phi":
            rec = PhiRecord(self.fn(d["chi1"]), self.fn(d["chi2"]), d["form"], alpha=self.s(d.get("alpha", "0")),
                            additive=self.fn(d["additive"]) if d.get("additive") else None,
                            base=self.el(d["base"]) if d.get("base") is not None else None,
                            lam=self.s(d.get("lam", "0")))
            return Phi(rec)
        if kind == "table":
            default = d.get("default", "0")
            return Table(self.c, {self.el(k): self.s(v) for k, v in d["values"].items()},
                         default=self.s(default) if default is not None else None)
        raise ValueError(f"unknown function repr {kind!r}")


def character_by_label(c, label):
    for ch in enumerate_characters(c):
        if ch.label == label:
            return ch
    raise ValueError(f"{c.spec} has no character labelled {label!r}")


# ---------------------------------------------------------------------------
# functions and contexts


def function_to_json(f: GFunction):
    doc = _encode(f.carrier, lambda e: e.fn(f))
    doc["carrier"] = carrier_to_json(f.carrier)
    return doc


def function_from_json(doc, carrier=None) -> GFunction:
    c = make_carrier(carrier if carrier is not None else doc["carrier"])
    return _Decoder(c, doc.get("conductor", 1)).fn(doc)


_INPUT_KEYS = ("mu1", "mu2", "chi", "chis", "mu", "A", "chi1", "chi2")


def _fixed_doc(enc, ctx):
    out = {}
    for k in _INPUT_KEYS:
        if k in ctx.fixed:
            v = ctx.fixed[k]
            out[k] = [enc.fn(f) for f in v] if k == "chis" else enc.fn(v)
    return out


def _context_header(ctx):
    head = {"equation": ctx.equation, "carrier": carrier_to_json(ctx.carrier), "radius": ctx.radius}
    if ctx.equation not in EQUATIONS:
        head["slots"] = list(ctx.slots)
        head["terms"] = [list(t) for t in ctx.terms]
    return head


def context_from_json(doc, radius=None) -> tuple[EquationContext, _Decoder]:
    c = make_carrier(doc["carrier"])
    dec = _Decoder(c, doc.get("conductor", 1))
    radius = radius if radius is not None else doc.get("radius")
    fixed = {}
    for k, v in (doc.get("fixed") or {}).items():
        fixed[k] = [dec.fn(f) for f in v] if k == "chis" else dec.fn(v)
    eq = str(doc["equation"]).upper() if str(doc["equation"]).upper() in EQUATIONS else doc["equation"]
    if eq in EQUATIONS:
        ctx = build_context(eq, c, fixed, radius)
    else:
        ctx = custom_context(eq, c, doc["slots"], [tuple(t) for t in doc["terms"]], fixed, radius)
    return ctx, dec


def solution_to_json(ctx: EquationContext, tup: SolutionTuple):
    def build(enc):
        doc = _context_header(ctx)
        doc["fixed"] = _fixed_doc(enc, ctx)
        doc["unknowns"] = {s: enc.fn(tup[s]) for s in ctx.slots}
        return doc

    return _encode(ctx.carrier, build)


def solution_from_json(doc, radius=None):
    ctx, dec = context_from_json(doc, radius)
    tup = SolutionTuple({s: dec.fn(doc["unknowns"][s]) for s in ctx.slots})
    return ctx, tup


# ---------------------------------------------------------------------------
# parameters, reports, results


def _aux_doc(enc, aux):
    out = {}
    for k, v in aux.items():
        if v is None:
            out[k] = None
        elif isinstance(v, GFunction):
            out[k] = enc.fn(v)
        else:
            out[k] = {"element": enc.el(v)}
    return out


def _aux_from(dec, doc):
    out = {}
    for k, v in (doc or {}).items():
        if v is None:
            out[k] = None
        elif isinstance(v, dict) and "element" in v:
            out[k] = dec.el(v["element"])
        else:
            out[k] = dec.fn(v)
    return out


def params_to_json(carrier, branch, bp):
    def build(enc):
        return {"branch": int(branch), "params": {k: enc.s(v) for k, v in bp.params.items()},
                "aux": _aux_doc(enc, bp.aux)}

    return _encode(carrier, build)


def params_from_json(doc, carrier):
    from .families import BranchParams

    c = make_carrier(carrier)
    dec = _Decoder(c, doc.get("conductor", 1))
    params = {k: dec.s(v) for k, v in (doc.get("params") or {}).items()}
    return int(doc.get("branch", 0)), BranchParams(params, _aux_from(dec, doc.get("aux")))


def report_to_json(rep: VerificationReport, carrier):
    def build(enc):
        return {
            "verdict": rep.verdict,
            "domain": rep.domain,
            "pairs_checked": rep.pairs_checked,
            "failure_count": rep.failure_count,
            "failures": [{"x": enc.el(x), "y": enc.el(y), "residual": enc.s(r)} for x, y, r in rep.failures],
            "backend": rep.backend,
            "max_residual": float(rep.max_residual),
            "max_abs_residual": float(rep.max_abs_residual),
        }

    return _encode(make_carrier(carrier), build)


def report_from_json(doc, carrier) -> VerificationReport:
    c = make_carrier(carrier)
    dec = _Decoder(c, doc.get("conductor", 1))
    fails = [(dec.el(f["x"]), dec.el(f["y"]), dec.s(f["residual"])) for f in doc["failures"]]
    return VerificationReport(doc["domain"], doc["pairs_checked"], fails, doc["failure_count"], doc["backend"],
                              doc.get("max_residual", 0.0), doc.get("max_abs_residual", 0.0))


def branch_result_to_json(res, carrier):
    def build(enc):
        return {"equation": res.equation, "branch": res.branch, "anchor": res.anchor,
                "params": {k: enc.s(v) for k, v in res.params.items()},
                "aux": _aux_doc(enc, res.aux), "gauge": dict(res.gauge), "path": list(res.path)}

    return _encode(make_carrier(carrier), build)


def branch_result_from_json(doc, carrier):
    from .classify import BranchResult

    c = make_carrier(carrier)
    dec = _Decoder(c, doc.get("conductor", 1))
    return BranchResult(doc["equation"], int(doc["branch"]), {k: dec.s(v) for k, v in doc["params"].items()},
                        _aux_from(dec, doc.get("aux")), dict(doc.get("gauge") or {}), doc.get("anchor", ""),
                        list(doc.get("path") or []))


def sweep_report_to_json(rep):
    return {
        "equation": rep.equation,
        "carrier": rep.carrier,
        "seed": rep.seed,
        "samples": rep.samples,
        "infeasible": rep.infeasible,
        "certificates_ok": rep.certificates_ok,
        "tuples": rep.tuples,
        "classified": dict(sorted(rep.classified.items())),
        "unclassifiable": rep.unclassifiable,
        "not_solutions": rep.not_solutions,
        "dumps": list(rep.dumps),
    }


def sweep_report_from_json(doc):
    from .oracle import SweepReport

    return SweepReport(doc["equation"], doc["carrier"], doc["seed"], doc["samples"], doc["infeasible"],
                       doc["certificates_ok"], doc["tuples"], Counter(doc["classified"]), doc["unclassifiable"],
                       doc["not_solutions"], list(doc["dumps"]))


def characters_to_json(c: Carrier):
    chars = enumerate_characters(c)

    def build(enc):
        return {"carrier": carrier_to_json(c), "generators": [enc.el(g) for g in c.generators],
                "characters": [{"label": ch.label, "images": [enc.s(v) for v in ch.images],
                                "values": {enc.el(x): enc.s(ch(x)) for x in c.elements()}} for ch in chars]}

    return _encode(c, build)
