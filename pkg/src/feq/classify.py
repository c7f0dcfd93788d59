"""Branch recognition: which family a verified tuple belongs to, with its parameters.

The decision tree follows the case split of each classification: first a
span test of f against the fixed functions, then evaluations at the
identity.  Equations with a g1 slot (E1, E5, E7) reduce to their companion
(E2, E6, E8) once h1(e) != 0.  Every result is rebuilt with ``construct``
and compared slot by slot before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import BS12Carrier
from .equations import EquationContext, SolutionTuple, verify
from .errors import (
    BackendMismatch,
    FeqError,
    NotASolution,
    ProbeInsufficient,
    RankNotFull,
    Unclassifiable,
)
from .families import BranchParams, construct, get_branch
from .funcspace import (
    Additive,
    GFunction,
    Multiplicative,
    check_phi,
    default_base_point,
    lincomb,
)
from .scalar import ONE, ZERO, ScalarMatrix, solve_columns

PROBE_RADIUS_CAP = 6


class _Independent:
    """Marker returned when a function is not in the span of a basis."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        return False

    def __repr__(self):
        return "Independent"


Independent = _Independent()


@dataclass
class ProbeSet:
    """Probe elements on which ``basis`` has full column rank.

    ``rows`` indexes a square invertible submatrix; ``inverse`` is its
    inverse, stored by columns.
    """

    elements: tuple
    basis: tuple
    rank: int
    rows: tuple
    inverse: list
    radius: int | None = None

    @property
    def certified(self):
        return self.rank == len(self.basis)


@dataclass
class BranchResult:
    equation: str
    branch: int
    params: dict
    aux: dict = field(default_factory=dict)
    gauge: dict = field(default_factory=dict)
    anchor: str = ""
    path: list = field(default_factory=list)

    @property
    def key(self):
        return f"{self.equation}-B{self.branch}"

    def branch_params(self):
        return BranchParams(dict(self.params), dict(self.aux))


def context_basis(ctx: EquationContext):
    F = ctx.fixed
    eq = ctx.equation
    if eq in ("E1", "E2"):
        return (F["mu1"], F["mu2"], F["chi"])
    if eq in ("E3", "E4"):
        return tuple(F["chis"])
    if eq in ("E5", "E6", "E7", "E8"):
        return (F["mu"], F["chi"], F["chiA"])
    if eq == "E0":
        if F["chi1"].images == F["chi2"].images:
            return (F["chi1"],)
        return (F["chi1"], F["chi2"])
    raise ValueError(f"no fixed basis for {eq}")


def _rank(rows):
    return ScalarMatrix(rows).rank() if rows else 0


def _certify(elements, basis, radius=None):
    k = len(basis)
    table = [[b(x) for b in basis] for x in elements]
    chosen = []
    for i, row in enumerate(table):
        if len(chosen) == k:
            break
        if _rank([table[j] for j in chosen] + [row]) > len(chosen):
            chosen.append(i)
    rank = len(chosen)
    inverse = []
    if rank == k and k:
        sub = ScalarMatrix([table[i] for i in chosen])
        ident = [[ONE if r == cidx else ZERO for r in range(k)] for cidx in range(k)]
        inverse = solve_columns(sub, ident).particular
    return ProbeSet(tuple(elements), tuple(basis), rank, tuple(chosen), inverse, radius)


def build_probe(ctx: EquationContext, basis=None) -> ProbeSet:
    """All elements of a finite carrier; otherwise a word ball grown until the
    rank of ``basis`` is the same for two consecutive radii."""
    basis = context_basis(ctx) if basis is None else tuple(basis)
    c = ctx.carrier
    if c.is_finite:
        probe = _certify(c.elements(), basis)
    else:
        cap = min(PROBE_RADIUS_CAP, ctx.radius)
        prev = None
        probe = None
        for r in range(1, cap + 1):
            probe = _certify(c.word_ball(r), basis, r)
            if probe.certified and prev is not None and prev.rank == probe.rank:
                break
            prev = probe
    if not probe.certified:
        raise RankNotFull(f"fixed functions have rank {probe.rank} < {len(basis)} on {c.spec}")
    return probe


def coefficients_in_span(fn: GFunction, basis, probe: ProbeSet, domain=None):
    """Exact coefficients of ``fn`` in ``basis``, or ``Independent``.

    The coefficients come from the probe's invertible submatrix and are then
    checked on every element of ``domain``.
    """
    basis = tuple(basis)
    if tuple(id(b) for b in basis) != tuple(id(b) for b in probe.basis):
        raise ProbeInsufficient("probe was certified for a different basis")
    if not probe.certified:
        raise ProbeInsufficient("probe does not certify the basis")
    domain = probe.elements if domain is None else domain
    k = len(basis)
    rhs = [fn(probe.elements[i]) for i in probe.rows]
    coeffs = [ZERO] * k
    for j, col in enumerate(probe.inverse):
        if rhs[j].is_zero():
            continue
        for i in range(k):
            coeffs[i] = coeffs[i] + col[i] * rhs[j]
    live = [(c, b) for c, b in zip(coeffs, basis) if not c.is_zero()]
    for x in domain:
        v = ZERO
        for c, b in live:
            v = v + c * b(x)
        if v != fn(x):
            return Independent
    return coeffs


# ---------------------------------------------------------------------------
# helpers


class _Tree:
    """Decision bookkeeping shared by one classification."""

    def __init__(self, ctx, probe):
        self.ctx = ctx
        self.c = ctx.carrier
        self.e = ctx.carrier.identity
        self.dom = ctx.domain()
        self.probe = probe
        self.basis = probe.basis
        self.path = []

    def note(self, step):
        self.path.append(step)

    def span(self, fn):
        return coefficients_in_span(fn, self.basis, self.probe, self.dom)

    def zero(self, fn):
        return fn.is_zero_on(self.dom)

    def at_e(self, fn):
        return fn(self.e)

    def comb(self, *terms):
        return lincomb([(c, f) for c, f in terms], self.c)

    def as_mult(self, fn, character=True):
        images = [fn(g) for g in self.c.generators]
        try:
            m = Multiplicative(self.c, images, character=character)
        except FeqError:
            return None
        return m if m.equals_on(fn, self.dom) else None

    def as_char(self, fn):
        return self.as_mult(fn, character=True)

    def need(self, cond, reason):
        if not cond:
            raise Unclassifiable(self.ctx.equation, reason)


def _result(tree, eq, k, params, aux=None, gauge=None):
    b = get_branch(eq, k)
    tree.note(f"{eq}-B{k}")
    return BranchResult(eq, k, dict(params), dict(aux or {}), dict(gauge or {}), b.anchor, list(tree.path))


GAUGE_NOTE = "free slot of the family, returned as given"


# ---------------------------------------------------------------------------
# per-equation trees; each returns (branch, params, aux, gauge)


def _tree_e2(t, f, h1, h2, h, fixed):
    co = t.span(f)
    if co is Independent:
        t.note("f independent of {mu1,mu2,chi}")
        mu = t.as_char(h1)
        t.need(mu is not None, "h1 is not a character")
        c = t.at_e(f)
        phi = t.comb((ONE, f), (-c, mu))
        t.need(check_phi(phi, mu, fixed["chi"], t.dom) is None, "f - f(e)mu fails the E0 identity")
        return 1, {"c": c}, {"mu": mu, "phi": phi}, {}
    a, b, c = co
    t.note("f = a mu1 + b mu2 + c chi")
    if a == b:
        t.need(a.is_zero(), "f has equal nonzero mu1 and mu2 coefficients")
        return 2, {"c": c}, {"h1": h1}, {"h1": GAUGE_NOTE}
    return 3, {"a": a, "b": b, "c": c}, {}, {}


def _classify_e2(t, tup):
    return _tree_e2(t, tup["f"], tup["h1"], tup["h2"], tup["h"], t.ctx.fixed)


def _classify_e1(t, tup):
    f, g1, h1, h2, h = (tup[s] for s in ("f", "g1", "h1", "h2", "h"))
    b = t.at_e(h1)
    if b.is_zero():
        t.note("h1(e) = 0")
        if t.zero(h1):
            t.note("h1 = 0")
            return 1, {"b": t.at_e(h)}, {"g1": g1}, {"g1": GAUGE_NOTE}
        cg = t.span(g1)
        t.need(cg is not Independent, "g1 outside span{mu1,mu2,chi}")
        al, be, ga = cg
        if al == be:
            hb = t.at_e(h)
            if not hb.is_zero():
                return 2, {"b": hb, "alpha": al, "gamma": ga}, {"h1": h1}, {"h1": GAUGE_NOTE}
            t.note("f = 0: the b=1 normalization is a gauge choice")
            return (5, {"b": ONE, "a1": ZERO, "a2": -2 * al, "a3": -ga}, {"h1": h1},
                    {"h1": GAUGE_NOTE, "b": "undetermined when f = 0; set to 1"})
        return _e1_b3(t, f, cg, h1)
    t.note("h1(e) != 0: reduce to E2")
    a2, a3 = t.at_e(h2) / b, t.at_e(h) / b
    rh1 = t.comb((ONE / b, h1))
    k, p, aux, _ = _tree_e2(t, f, rh1, t.comb((ONE, h2), (-a2, h1)), t.comb((ONE, h), (-a3, h1)), t.ctx.fixed)
    if k == 1:
        mu = aux["mu"]
        a1 = t.at_e(f) / b
        phi = t.comb((ONE / b, f), (-a1, mu))
        return 4, {"b": b, "a1": a1, "a2": a2, "a3": a3}, {"mu": mu, "phi": phi}, {}
    if k == 2:
        return 5, {"b": b, "a1": t.at_e(f) / b, "a2": a2, "a3": a3}, {"h1": h1}, {"h1": GAUGE_NOTE}
    cg = t.span(g1)
    t.need(cg is not Independent, "g1 outside span{mu1,mu2,chi}")
    return _e1_b3(t, f, cg, h1)


def _e1_b3(t, f, cg, h1):
    d1, d2, d3 = 2 * cg[0], 2 * cg[1], cg[2]
    t.need(d1 != d2, "g1 has equal mu1 and mu2 coefficients")
    ch = t.span(h1)
    cf = t.span(f)
    t.need(ch is not Independent and cf is not Independent, "h1 or f outside the span")
    a3 = -2 * cf[2] / (d1 - d2)
    return 3, {"a1": ch[0], "a2": ch[1], "a3": a3, "d1": d1, "d2": d2, "d3": d3}, {}, {}


def _classify_e4(t, tup):
    n = t.ctx.n
    f, h = tup["f"], tup["h"]
    co = t.span(f)
    if co is not Independent:
        t.note("f in span{chi_j}")
        return 1, {f"alpha{j + 1}": co[j] for j in range(n)}, {"h": h}, {"h": GAUGE_NOTE}
    t.note("f independent of {chi_j}")
    chi = t.as_char(h)
    t.need(chi is not None, "h is not a character")
    aux = {"chi": chi}
    for j in range(n):
        phi = tup[f"h{j + 1}"]
        t.need(check_phi(phi, chi, t.ctx.fixed["chis"][j], t.dom) is None, f"h{j + 1} fails the E0 identity")
        aux[f"phi{j + 1}"] = phi
    return 2, {"a": t.at_e(f)}, aux, {}


def _classify_e3(t, tup):
    n = t.ctx.n
    f, g, h = tup["f"], tup["g"], tup["h"]
    co = t.span(f)
    if co is not Independent:
        t.note("f in span{chi_j}")
        params = {f"a{j + 1}": co[j] for j in range(n)}
        if t.zero(h):
            return 1, params, {"g": g}, {"g": GAUGE_NOTE}
        cg = t.span(g)
        t.need(cg is not Independent, "g outside span{chi_j}")
        params.update({f"beta{j + 1}": cg[j] for j in range(n)})
        return 2, params, {"h": h}, {"h": GAUGE_NOTE}
    t.note("f independent of {chi_j}")
    b = t.at_e(h)
    t.need(not b.is_zero(), "h(e) = 0 with f outside the span")
    chi = t.as_char(t.comb((ONE / b, h)))
    t.need(chi is not None, "h/h(e) is not a character")
    params = {"alpha": t.at_e(f) / b, "b": b}
    aux = {"chi": chi}
    for j in range(n):
        hj = tup[f"h{j + 1}"]
        aj = t.at_e(hj) / b
        params[f"a{j + 1}"] = aj
        aux[f"phi{j + 1}"] = t.comb((ONE / b, hj), (-aj, chi))
    return 3, params, aux, {}


def _tree_e6(t, f, h1):
    co = t.span(f)
    if co is Independent:
        t.note("f independent of {mu,chi,chiA}")
        m = t.as_mult(h1, character=t.c.is_group)
        t.need(m is not None, "h1 is not multiplicative")
        return 1, {"c": t.at_e(f)}, {"m": m}, {}
    if all(x.is_zero() for x in co):
        t.note("f = 0")
        return 2, {}, {"h1": h1}, {"h1": GAUGE_NOTE}
    a, b, c = co
    return 3, {"a": a, "b": b, "c": c}, {}, {}


def _classify_e6(t, tup):
    return _tree_e6(t, tup["f"], tup["h1"])


def _classify_e5(t, tup):
    f, g1, h1, h2, h = (tup[s] for s in ("f", "g1", "h1", "h2", "h"))
    if t.zero(f):
        t.note("f = 0")
        if t.zero(h1):
            return 1, {}, {"g1": g1}, {"g1": GAUGE_NOTE}
        cg = t.span(g1)
        t.need(cg is not Independent and cg[0] == cg[1], "g1 not of the form a(mu+chi)/2 + b chiA")
        return 2, {"a": 2 * cg[0], "b": cg[2]}, {"h1": h1}, {"h1": GAUGE_NOTE}
    a1 = t.at_e(h1)
    if a1.is_zero():
        t.note("h1(e) = 0")
        return _e5_b3(t, g1, h1)
    t.note("h1(e) != 0: reduce to E6")
    k, p, aux, _ = _tree_e6(t, f, t.comb((ONE / a1, h1)))
    if k == 1:
        params = {"alpha": t.at_e(f) / a1, "a1": a1, "a2": t.at_e(h2) / a1, "a3": t.at_e(h) / a1}
        return 4, params, {"m": aux["m"]}, {}
    t.need(k == 3, "reduced tuple is the zero family with f != 0")
    return _e5_b3(t, g1, h1)


def _e5_b3(t, g1, h1):
    cg, ch = t.span(g1), t.span(h1)
    t.need(cg is not Independent and ch is not Independent, "g1 or h1 outside span{mu,chi,chiA}")
    return 3, {"a1": ch[0], "a2": ch[1], "a3": ch[2], "d1": 2 * cg[0], "d2": 2 * cg[1], "d3": cg[2]}, {}, {}


def _tree_e8(t, f, h1, h2):
    co = t.span(f)
    if co is Independent:
        t.note("f independent of {mu,chi,chiA}")
        mu1 = t.as_char(h1)
        t.need(mu1 is not None, "h1 is not a character")
        t.need(check_phi(h2, mu1, t.ctx.fixed["mu"], t.dom) is None, "h2 fails the E0 identity")
        return 2, {"a": t.at_e(f)}, {"mu1": mu1, "phi": h2}, {}
    a, b, c = co
    if b.is_zero():
        t.need(c.is_zero(), "f = a mu + c chiA with c != 0")
        t.note("f = a mu")
        return 1, {"a": a}, {"h1": h1}, {"h1": GAUGE_NOTE}
    return 3, {"a": a, "b": b, "alpha": c / b}, {}, {}


def _classify_e8(t, tup):
    return _tree_e8(t, tup["f"], tup["h1"], tup["h2"])


def _classify_e7(t, tup):
    f, g1, h1, h2, h = (tup[s] for s in ("f", "g1", "h1", "h2", "h"))
    co = t.span(f)
    if co is not Independent and co[1].is_zero() and co[2].is_zero():
        t.note("f = a mu")
        if t.zero(h1):
            return 1, {"a": co[0]}, {"g1": g1}, {"g1": GAUGE_NOTE}
        cg = t.span(g1)
        t.need(cg is not Independent and cg[1].is_zero(), "g1 not of the form -b mu + c chiA")
        return 2, {"a": co[0], "b": -cg[0], "c": cg[2]}, {"h1": h1}, {"h1": GAUGE_NOTE}
    a = t.at_e(h1)
    if a.is_zero():
        t.note("h1(e) = 0")
        cg, ch = t.span(g1), t.span(h1)
        t.need(co is not Independent and cg is not Independent and ch is not Independent,
               "f, g1 or h1 outside span{mu,chi,chiA}")
        return (3, {"a": co[0], "alpha": cg[0], "beta": cg[1], "gamma": cg[2], "b": co[2], "c": ch[2]},
                {}, {})
    t.note("h1(e) != 0: reduce to E8")
    s2 = t.at_e(h2) / a
    k, p, aux, _ = _tree_e8(t, f, t.comb((ONE / a, h1)), t.comb((ONE, h2), (-s2, h1)))
    if k == 2:
        a1 = t.at_e(f)
        params = {"a1": a1, "a2": t.at_e(h2) - a1, "a3": -t.at_e(h) / a, "a": a}
        phi = t.comb((ONE, f), (-a1, t.ctx.fixed["mu"]))
        return 4, params, {"mu1": aux["mu1"], "phi": phi}, {}
    t.need(k == 3, "reduced tuple has f proportional to mu")
    c = a
    ch, cg = t.span(h1), t.span(g1)
    t.need(ch is not Independent and cg is not Independent, "g1 or h1 outside span{mu,chi,chiA}")
    return 5, {"alpha": ch[2] / c, "a": co[0], "a1": cg[0], "a3": cg[2], "c": c, "a2": cg[1]}, {}, {}


def _classify_e0(t, tup):
    F = t.ctx.fixed
    chi1, chi2 = F["chi1"], F["chi2"]
    f = tup["f"]
    if chi1.images == chi2.images:
        t.note("chi1 = chi2")
        A = Additive(t.c, [f(g) / chi1(g) for g in t.c.generators]) if _additive_ok(t, f, chi1) else None
        t.need(A is not None, "f/chi1 is not additive")
        return 1, {}, {"A": A}, {}
    t.note("chi1 != chi2")
    y0 = default_base_point(t.c, chi1, chi2)
    alpha = f(y0) / (chi1(y0) - chi2(y0))
    lam = ZERO
    if isinstance(t.c, BS12Carrier):
        for x in t.dom:
            q = t.c.commutator(y0, x)[1]
            if q != 0:
                lam = (f(x) - alpha * (chi1(x) - chi2(x))) / (chi1(x) * q)
                break
    return 2, {"alpha": alpha, "lam": lam}, {"y0": y0}, {}


def _additive_ok(t, f, chi1):
    try:
        Additive(t.c, [f(g) / chi1(g) for g in t.c.generators])
    except FeqError:
        return False
    return True


_TREES = {
    "E0": _classify_e0, "E1": _classify_e1, "E2": _classify_e2, "E3": _classify_e3, "E4": _classify_e4,
    "E5": _classify_e5, "E6": _classify_e6, "E7": _classify_e7, "E8": _classify_e8,
}


def _is_float(tup):
    for _, fn in tup.items():
        if getattr(fn, "backend", "exact") == "float":
            return True
    return False


def reconstruct(ctx: EquationContext, result: BranchResult) -> SolutionTuple:
    return construct(ctx, result.branch, result.branch_params(), verify_result=False)


def classify(ctx: EquationContext, tup: SolutionTuple, probe: ProbeSet | None = None,
             check_solution=True) -> BranchResult:
    """Identify the branch of a verified tuple and recover its parameters.

    Raises ``NotASolution`` when verification fails and ``Unclassifiable``
    when no branch reproduces the tuple.
    """
    if ctx.backend == "float" or _is_float(tup):
        raise BackendMismatch("classification needs the exact backend")
    if check_solution:
        rep = verify(ctx, tup)
        if not rep.passed:
            raise NotASolution(rep)
    probe = build_probe(ctx) if probe is None else probe
    t = _Tree(ctx, probe)
    k, params, aux, gauge = _TREES[ctx.equation](t, tup)
    res = _result(t, ctx.equation, k, params, aux, gauge)
    try:
        rebuilt = reconstruct(ctx, res)
    except FeqError as exc:
        raise Unclassifiable(ctx.equation, f"{res.key} parameters rejected: {exc}") from exc
    for slot in ctx.slots:
        if not rebuilt[slot].equals_on(tup[slot], t.dom):
            raise Unclassifiable(ctx.equation, f"{res.key} does not reproduce slot {slot}")
    return res
