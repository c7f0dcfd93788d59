"""Named reference tuples: the motivating identities and the reduction examples.

Each fixture is bound to a concrete zoo context.  Running it verifies the
tuple and checks the reduced closed forms slot by slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import make_carrier
from .equations import (
    EquationContext,
    SolutionTuple,
    build_context,
    cosine_sine_context,
    sine_addition_context,
    verify,
)
from .errors import ConstraintViolated
from .families import BranchParams, construct, get_branch
from .funcspace import Additive, Multiplicative, enumerate_characters, lincomb, phi_solve, product, zero_function
from .scalar import ONE, ZERO, exact

HALF = exact("1/2")


@dataclass
class Fixture:
    name: str
    ctx: EquationContext
    tup: SolutionTuple
    expect: dict = field(default_factory=dict)  # slot -> expected function
    differ: list = field(default_factory=list)  # (slot, function it must differ from)
    also: list = field(default_factory=list)  # extra (ctx, tuple) pairs that must verify
    note: str = ""


@dataclass
class FixtureResult:
    name: str
    passed: bool
    report: object
    problems: list


def run_fixture(fx: Fixture) -> FixtureResult:
    problems = []
    rep = verify(fx.ctx, fx.tup)
    if not rep.passed:
        problems.append(f"{rep.failure_count} failing pairs")
    dom = fx.ctx.domain()
    for slot, fn in fx.expect.items():
        if not fx.tup[slot].equals_on(fn, dom):
            problems.append(f"{slot} differs from the reduced form")
    for slot, fn in fx.differ:
        if fx.tup[slot].equals_on(fn, dom):
            problems.append(f"{slot} should differ from {fn.describe()}")
    for ctx2, tup2 in fx.also:
        r2 = verify(ctx2, tup2)
        if not r2.passed:
            problems.append(f"{ctx2.equation}: {r2.failure_count} failing pairs")
    return FixtureResult(fx.name, not problems, rep, problems)


def _L(c, *terms):
    return lincomb([(exact(a), f) for a, f in terms], c)


def _q(s):
    return exact(s)


# ---------------------------------------------------------------------------
# standard data


def _c6_characters():
    c = make_carrier("C6")
    ch = enumerate_characters(c)
    return c, ch


def _z1_data():
    c = make_carrier("Z^1")
    return c, Multiplicative(c, [2]), Multiplicative(c, [3]), Additive(c, [1])


def _n1_data():
    c = make_carrier("N^1")
    return (c, Multiplicative(c, [2], character=False), Multiplicative(c, [3], character=False),
            Additive(c, [1]))


def cosine_sine_triple(mu, chi, A, c1, c2):
    """(f, g, k) with f(xy) = f(x)g(y) + g(x)f(y) + k(x)k(y); needs 1 + c1*c2^2 = 0."""
    c1, c2 = exact(c1), exact(c2)
    if ONE + c1 * c2 * c2 != ZERO:
        raise ConstraintViolated("1+c₁c₂²=0")
    c = mu.carrier
    chiA = product(chi, A)
    f = _L(c, (-c1, mu), (c1, chi), (-c1 * c2, chiA))
    g = _L(c, (HALF, mu), (HALF, chi), (-c2 / 2, chiA))
    return f, g, chiA


# ---------------------------------------------------------------------------
# fixtures


def _motivating():
    out = []
    c, mu, chi, A = _z1_data()
    chiA = product(chi, A)
    for c1, c2 in (("-1", "1"), ("-1/4", "2")):
        f, g, k = cosine_sine_triple(mu, chi, A, c1, c2)
        ctx = cosine_sine_context(c)
        out.append(Fixture(f"cosine-sine (c1={c1}, c2={c2}) on Z^1", ctx, SolutionTuple({"f": f, "g": g, "k": k})))
        e6 = build_context("E6", c, dict(mu=mu, chi=chi, A=A))
        h = _L(c, (-_q(c2) / 2, f), (ONE, chiA))
        out.append(Fixture(f"cosine-sine as E6 (c1={c1}, c2={c2}) on Z^1", e6,
                           SolutionTuple({"f": f, "h1": g, "h2": f, "h": h}), differ=[("h", chiA)]))
    z2 = make_carrier("Z^2")
    mu, chi, A = Multiplicative(z2, [2, 1]), Multiplicative(z2, [1, 3]), Additive(z2, [0, 1])
    f, g, k = cosine_sine_triple(mu, chi, A, "-1", "1")
    out.append(Fixture("cosine-sine (c1=-1, c2=1) on Z^2", cosine_sine_context(z2),
                       SolutionTuple({"f": f, "g": g, "k": k}),
                       expect={"f": _L(z2, (1, mu), (-1, chi), (1, product(chi, A)))}))
    for spec, data in (("N^1", _n1_data()), ("Z^1", _z1_data())):
        c, mu, chi, A = data
        m = Multiplicative(c, [5], character=c.is_group)
        ctx = build_context("E5", c, dict(mu=mu, chi=chi, A=A))
        chiA = ctx.fixed["chiA"]
        tup = SolutionTuple({"f": m, "g1": _L(c, (HALF, m), (HALF, mu), (HALF, chi), (ONE, chiA)),
                             "h1": _L(c, (2, m)), "h2": _L(c, (-2, m)), "h": _L(c, (-2, m))})
        out.append(Fixture(f"E5 quadruple with m on {spec}", ctx, tup))
    c, mu, chi, A = _z1_data()
    ctx = build_context("E7", c, dict(mu=mu, chi=chi, A=A))
    chiA = ctx.fixed["chiA"]
    tup = SolutionTuple({"f": mu, "g1": _L(c, (-1, mu), (1, chiA)), "h1": chi, "h2": _L(c, (1, mu), (1, chi)),
                         "h": _L(c, (-1, chi))})
    out.append(Fixture("E7 motivating tuple on Z^1", ctx, tup,
                       differ=[("g1", mu), ("h2", mu), ("h", zero_function(c)), ("h", chiA)]))
    return out


def _sine_addition():
    out = []
    c, ch = _c6_characters()
    mu1, mu2, chi = ch[1], ch[2], ch[3]
    ctx = build_context("E1", c, dict(mu1=mu1, mu2=mu2, chi=chi))
    d1 = _q(2)
    p = dict(a1=HALF, a2=HALF, a3=ZERO, d1=d1, d2=-d1, d3=ZERO)
    tup = construct(ctx, 3, BranchParams(p))
    s = _L(c, (d1 / 2, mu1), (-d1 / 2, mu2))
    gg = _L(c, (HALF, mu1), (HALF, mu2))
    sa = sine_addition_context(c)
    out.append(Fixture("sine addition from E1 branch 3 on C6", ctx, tup,
                       expect={"f": s, "g1": s, "h2": s, "h1": gg, "h": zero_function(c)},
                       also=[(sa, SolutionTuple({"f": tup["f"], "g": tup["h1"]}))]))
    c, mu, chi, A = _n1_data()
    ctx = build_context("E5", c, dict(mu=mu, chi=chi, A=A))
    tup = construct(ctx, 3, BranchParams(p))
    s = _L(c, (d1 / 2, mu), (-d1 / 2, chi))
    out.append(Fixture("sine addition from E5 branch 3 on N^1", ctx, tup,
                       expect={"f": s, "g1": s, "h2": s, "h1": _L(c, (HALF, mu), (HALF, chi)),
                               "h": zero_function(c)},
                       also=[(sine_addition_context(c), SolutionTuple({"f": tup["f"], "g": tup["h1"]}))]))
    return out


def _e1_reductions():
    out = []
    c, ch = _c6_characters()
    mu1, mu2, chi, mu = ch[1], ch[2], ch[3], ch[4]
    ctx = build_context("E1", c, dict(mu1=mu1, mu2=mu2, chi=chi))
    g = ctx.fixed["g"]
    zero = zero_function(c)
    al = _q("3/2")
    h1 = _L(c, (1, ch[0]), (-1, ch[5]))
    # b=0 sits outside the branch's own constraint, so evaluate its formulas directly
    slots = get_branch("E1", 2).build(ctx, dict(b=ZERO, alpha=al, gamma=ZERO), {"h1": h1})
    tup = SolutionTuple({s: slots[s] for s in ctx.slots})
    cc = 2 * al
    out.append(Fixture("E1 branch 2 with b=gamma=0 on C6", ctx, tup,
                       expect={"f": zero, "g1": _L(c, (cc, g)), "h2": _L(c, (-cc, h1)), "h": zero}))
    a1, a2, d1, d2 = _q(2), _q(-1), _q(3), _q("1/2")
    tup = construct(ctx, 3, BranchParams(dict(a1=a1, a2=a2, a3=ZERO, d1=d1, d2=d2, d3=ZERO)))
    out.append(Fixture("E1 branch 3 with a3=d3=0 on C6", ctx, tup, expect={
        "f": _L(c, ((d1 - d2) * a1 / 2, mu1), (-(d1 - d2) * a2 / 2, mu2)),
        "g1": _L(c, (d1 / 2, mu1), (d2 / 2, mu2)),
        "h1": _L(c, (a1, mu1), (a2, mu2)),
        "h2": _L(c, (-a1 * d2, mu1), (-a2 * d1, mu2)),
        "h": zero}))
    b = _q(3)
    phi0 = phi_solve(c, mu, chi, {"alpha": ZERO})
    tup = construct(ctx, 4, BranchParams(dict(b=b, a1=a1, a2=a2, a3=ZERO), {"mu": mu, "phi": phi0}))
    out.append(Fixture("E1 branch 4 with a3=0 and phi=0 on C6", ctx, tup, expect={
        "f": _L(c, (a1 * b, mu)), "g1": _L(c, (a1, mu), (-a2, g)), "h1": _L(c, (b, mu)),
        "h2": _L(c, (a2 * b, mu)), "h": zero}))
    return out


def _e3_examples():
    out = []
    c, ch = _c6_characters()
    chi1, chi2, chi = ch[1], ch[2], ch[3]
    ctx = build_context("E3", c, dict(chis=[chi1, chi2]))
    al, b, a1, beta = _q(2), _q(3), _q(-1), _q("5/2")
    phi1 = phi_solve(c, chi, chi1, {"alpha": beta})
    phi2 = phi_solve(c, chi, chi2, {"alpha": ZERO})
    tup = construct(ctx, 3, BranchParams(dict(alpha=al, b=b, a1=a1, a2=ZERO), {"chi": chi, "phi1": phi1, "phi2": phi2}))
    c1 = al * b
    c2 = a1 * b - c1
    ft = _L(c, (c1, chi), (-c1, chi1), (b, phi1))
    out.append(Fixture("E3 branch 3 with one active chi_j on C6", ctx, tup, expect={
        "f": _L(c, (c1, chi1), (1, ft)), "g": _L(c, (1 / b, ft), (-c2 / b, chi1)), "h": _L(c, (b, chi)),
        "h1": _L(c, (c1, chi1), (c2, chi), (1, ft)), "h2": zero_function(c)}))
    cz, mu, chi_z, A = _z1_data()
    ctx = build_context("E3", cz, dict(chis=[chi_z, mu]))
    al, a1 = _q(4), _q("1/3")
    phi1 = phi_solve(cz, chi_z, chi_z, {"additive": A})
    phi2 = phi_solve(cz, chi_z, mu, {"alpha": ZERO})
    tup = construct(ctx, 3, BranchParams(dict(alpha=al, b=ONE, a1=a1, a2=ZERO),
                                         {"chi": chi_z, "phi1": phi1, "phi2": phi2}))
    c1, c2 = al - a1, a1
    chiA = product(chi_z, A)
    out.append(Fixture("E3 branch 3 with chi=chi_1 and b=1 on Z^1", ctx, tup, expect={
        "f": _L(cz, (c1 + c2, chi_z), (1, chiA)), "g": _L(cz, (c1, chi_z), (1, chiA)),
        "h1": _L(cz, (c2, chi_z), (1, chiA)), "h2": zero_function(cz)}))
    return out


def _e5_reductions():
    out = []
    c, mu, chi, A = _n1_data()
    ctx = build_context("E5", c, dict(mu=mu, chi=chi, A=A))
    g = ctx.fixed["g"]
    zero = zero_function(c)
    a1, a2, d1, d2 = _q(2), _q(-1), _q(3), _q("1/2")
    tup = construct(ctx, 3, BranchParams(dict(a1=a1, a2=a2, a3=ZERO, d1=d1, d2=d2, d3=ZERO)))
    out.append(Fixture("E5 branch 3 with a3=d3=0 on N^1", ctx, tup, expect={
        "f": _L(c, ((d1 - d2) * a1 / 2, mu), (-(d1 - d2) * a2 / 2, chi)),
        "g1": _L(c, (d1 / 2, mu), (d2 / 2, chi)), "h1": _L(c, (a1, mu), (a2, chi)),
        "h2": _L(c, (-a1 * d2, mu), (-a2 * d1, chi)), "h": zero}))
    m = Multiplicative(c, [0], character=False)
    al = _q("7/2")
    tup = construct(ctx, 4, BranchParams(dict(alpha=al, a1=a1, a2=a2, a3=ZERO), {"m": m}))
    out.append(Fixture("E5 branch 4 with a3=0 on N^1", ctx, tup, expect={
        "f": _L(c, (a1 * al, m)), "g1": _L(c, (al, m), (-a2, g)), "h1": _L(c, (a1, m)),
        "h2": _L(c, (a1 * a2, m)), "h": zero}))
    return out


def _e7_reductions():
    out = []
    c, mu, chi, A = _z1_data()
    ctx = build_context("E7", c, dict(mu=mu, chi=chi, A=A))
    zero = zero_function(c)
    mu1 = Multiplicative(c, [_q("1/2")])
    phi = phi_solve(c, mu1, mu, {"alpha": _q(3)})
    a, a1, a2 = _q(2), _q(-1), _q("5/3")
    tup = construct(ctx, 4, BranchParams(dict(a1=a1, a2=a2, a3=ZERO, a=a), {"mu1": mu1, "phi": phi}))
    out.append(Fixture("E7 branch 4 with a3=0 on Z^1", ctx, tup, expect={
        "f": _L(c, (a1, mu), (1, phi)), "g1": _L(c, (1 / a, phi), (-a2 / a, mu)), "h1": _L(c, (a, mu1)),
        "h2": _L(c, (a1, mu), (a2, mu1), (1, phi)), "h": zero}))
    a, a1, a2, cc = _q(2), _q(-1), _q("5/3"), _q(3)
    tup = construct(ctx, 5, BranchParams(dict(alpha=ZERO, a=a, a1=a1, a3=ZERO, c=cc, a2=a2)))
    lam = cc * a2
    c1 = a + cc * a2
    c2 = -cc * a1 - cc * a2
    ft = _L(c, (lam, chi), (-lam, mu))
    out.append(Fixture("E7 branch 5 with alpha=a3=0 on Z^1", ctx, tup, expect={
        "f": _L(c, (c1, mu), (1, ft)), "g1": _L(c, (1 / cc, ft), (-c2 / cc, mu)), "h1": _L(c, (cc, chi)),
        "h2": _L(c, (c1, mu), (c2, chi), (1, ft)), "h": zero}))
    return out


def _worked_examples():
    out = []
    c, ch = _c6_characters()
    mu1, mu2, chi = ch[1], ch[5], ch[2]
    ctx = build_context("E2", c, dict(mu1=mu1, mu2=mu2, chi=chi))
    tup = construct(ctx, 3, BranchParams(dict(a=2, b=1, c=0)))
    out.append(Fixture("E2 branch 3 with (a,b,c)=(2,1,0) on C6", ctx, tup, expect={
        "f": _L(c, (2, mu1), (1, mu2)), "h1": _L(c, (2, mu1), (-1, mu2)), "h2": _L(c, (-4, mu1), (4, mu2)),
        "h": zero_function(c)}))
    cz, mu, chi_z, A = _z1_data()
    ctx = build_context("E8", cz, dict(mu=mu, chi=chi_z, A=A))
    chiA = ctx.fixed["chiA"]
    tup = construct(ctx, 3, BranchParams(dict(a=0, b=1, alpha=1)))
    out.append(Fixture("E8 branch 3 with (a,b,alpha)=(0,1,1) on Z^1", ctx, tup, expect={
        "f": _L(cz, (1, chi_z), (1, chiA)), "h1": _L(cz, (1, chi_z), (1, chiA)), "h2": zero_function(cz),
        "h": _L(cz, (-1, chiA))}))
    return out


def fixture_suite(names=None):
    """All fixtures, optionally filtered by substring match on the name."""
    fixtures = (_motivating() + _sine_addition() + _e1_reductions() + _e3_examples() + _e5_reductions()
                + _e7_reductions() + _worked_examples())
    if names:
        fixtures = [fx for fx in fixtures if any(n.lower() in fx.name.lower() for n in names)]
    return fixtures
