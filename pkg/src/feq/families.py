"""Closed-form solution families, one constructor per branch.

Each ``Branch`` pairs its parameter schema and constraint predicates with a
builder.  ``construct`` checks the constraints and verifies what it built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .algebra import BS12Carrier
from .equations import EquationContext, SolutionTuple, verify
from .errors import AuxiliaryInvalid, ConstraintViolated, InternalVerificationFailed
from .funcspace import (
    Additive,
    GFunction,
    Multiplicative,
    Phi,
    Table,
    check_phi,
    lincomb,
    phi_solve,
    product,
    zero_function,
)
from .scalar import ONE, ZERO, exact

HALF = exact("1/2")


@dataclass
class BranchParams:
    params: dict = field(default_factory=dict)
    aux: dict = field(default_factory=dict)

    def __post_init__(self):
        self.params = {k: exact(v) for k, v in self.params.items()}


@dataclass(frozen=True)
class Branch:
    equation: str
    index: int
    anchor: str
    param_names: Callable  # n -> tuple of scalar parameter names
    aux_names: Callable  # n -> tuple of auxiliary names
    gauge: tuple  # auxiliary names that are free slots of the solution
    constraints: tuple  # (name, predicate(ctx, p, aux))
    build: Callable  # (ctx, p, aux) -> dict slot -> GFunction
    nonzero_slots: tuple = ()
    note: str = ""

    @property
    def key(self):
        return f"{self.equation}-B{self.index}"


def _names(*names):
    return lambda n: tuple(names)


def _indexed(prefix, n):
    return tuple(f"{prefix}{j}" for j in range(1, n + 1))


def _L(ctx, *terms):
    return lincomb([(c, f) for c, f in terms if not exact(c).is_zero()], ctx.carrier)


def point_mass(carrier, x, value=ONE):
    return Table(carrier, {x: exact(value)}, default=ZERO)


# ---------------------------------------------------------------------------
# builders, grouped by equation


def _e2(ctx, k, p, a):
    F = ctx.fixed
    mu1, mu2, chi = F["mu1"], F["mu2"], F["chi"]
    if k == 1:
        mu, phi = a["mu"], a["phi"]
        return dict(f=_L(ctx, (p["c"], mu), (ONE, phi)), h1=mu, h2=zero_function(ctx.carrier), h=phi)
    if k == 2:
        h1 = a["h1"]
        return dict(f=_L(ctx, (p["c"], chi)), h1=h1, h2=zero_function(ctx.carrier),
                    h=_L(ctx, (p["c"], chi), (-p["c"], h1)))
    A_, B_, C_ = p["a"], p["b"], p["c"]
    d = A_ - B_
    return dict(
        f=_L(ctx, (A_, mu1), (B_, mu2), (C_, chi)),
        h1=_L(ctx, (A_ / d, mu1), (-B_ / d, mu2)),
        h2=_L(ctx, (-2 * A_ * B_ / d, mu1), (2 * A_ * B_ / d, mu2)),
        h=_L(ctx, (-C_ * A_ / d, mu1), (C_ * B_ / d, mu2), (C_, chi)),
    )


def _e1(ctx, k, p, a):
    F = ctx.fixed
    mu1, mu2, chi = F["mu1"], F["mu2"], F["chi"]
    zero = zero_function(ctx.carrier)
    if k == 1:
        return dict(f=_L(ctx, (p["b"], chi)), g1=a["g1"], h1=zero, h2=zero, h=_L(ctx, (p["b"], chi)))
    if k == 2:
        b, al, ga, h1 = p["b"], p["alpha"], p["gamma"], a["h1"]
        return dict(f=_L(ctx, (b, chi)), g1=_L(ctx, (al, mu1), (al, mu2), (ga, chi)), h1=h1,
                    h2=_L(ctx, (-2 * al, h1)), h=_L(ctx, (b, chi), (-ga, h1)))
    if k == 3:
        a1, a2, a3, d1, d2, d3 = (p[n] for n in ("a1", "a2", "a3", "d1", "d2", "d3"))
        dd = d1 - d2
        return dict(
            f=_L(ctx, (dd * a1 * HALF, mu1), (-dd * a2 * HALF, mu2), (-dd * a3 * HALF, chi)),
            g1=_L(ctx, (d1 * HALF, mu1), (d2 * HALF, mu2), (d3, chi)),
            h1=_L(ctx, (a1, mu1), (a2, mu2)),
            h2=_L(ctx, (-a1 * d2, mu1), (-a2 * d1, mu2)),
            h=_L(ctx, (-a1 * d3, mu1), (-a2 * d3, mu2), (-a3 * dd * HALF, chi)),
        )
    b, a1, a2, a3 = p["b"], p["a1"], p["a2"], p["a3"]
    if k == 4:
        mu, phi = a["mu"], a["phi"]
        return dict(
            f=_L(ctx, (a1 * b, mu), (b, phi)),
            g1=_L(ctx, (-a2 * HALF, mu1), (-a2 * HALF, mu2), (-a3, chi), (a1, mu), (ONE, phi)),
            h1=_L(ctx, (b, mu)),
            h2=_L(ctx, (a2 * b, mu)),
            h=_L(ctx, (a3 * b, mu), (b, phi)),
        )
    # k == 5; the chi coefficients carry a3 (see the derivation via the reduced E2 quadruple)
    h1 = a["h1"]
    return dict(
        f=_L(ctx, (a1 * b, chi)),
        g1=_L(ctx, (-a2 * HALF, mu1), (-a2 * HALF, mu2), (a1 - a3, chi)),
        h1=h1,
        h2=_L(ctx, (a2, h1)),
        h=_L(ctx, (a1 * b, chi), (-(a1 - a3), h1)),
    )


def _e4(ctx, k, p, a):
    chis = ctx.fixed["chis"]
    n = len(chis)
    if k == 1:
        h = a["h"]
        al = [p[f"alpha{j}"] for j in range(1, n + 1)]
        out = dict(f=_L(ctx, *zip(al, chis)), h=h)
        for j in range(n):
            out[f"h{j + 1}"] = _L(ctx, (al[j], chis[j]), (-al[j], h))
        return out
    chi = a["chi"]
    phis = [a[f"phi{j}"] for j in range(1, n + 1)]
    out = dict(f=_L(ctx, (p["a"], chi), *[(ONE, ph) for ph in phis]), h=chi)
    for j in range(n):
        out[f"h{j + 1}"] = phis[j]
    return out


def _e3(ctx, k, p, a):
    chis = ctx.fixed["chis"]
    n = len(chis)
    zero = zero_function(ctx.carrier)
    if k in (1, 2):
        aj = [p[f"a{j}"] for j in range(1, n + 1)]
        out = dict(f=_L(ctx, *zip(aj, chis)))
        if k == 1:
            out.update(g=a["g"], h=zero)
            for j in range(n):
                out[f"h{j + 1}"] = _L(ctx, (aj[j], chis[j]))
        else:
            be = [p[f"beta{j}"] for j in range(1, n + 1)]
            h = a["h"]
            out.update(g=_L(ctx, *zip(be, chis)), h=h)
            for j in range(n):
                out[f"h{j + 1}"] = _L(ctx, (aj[j], chis[j]), (-be[j], h))
        return out
    chi = a["chi"]
    al, b = p["alpha"], p["b"]
    aj = [p[f"a{j}"] for j in range(1, n + 1)]
    phis = [a[f"phi{j}"] for j in range(1, n + 1)]
    out = dict(
        f=_L(ctx, (al * b, chi), *[(b, ph) for ph in phis]),
        g=_L(ctx, (al, chi), *[(-aj[j], chis[j]) for j in range(n)], *[(ONE, ph) for ph in phis]),
        h=_L(ctx, (b, chi)),
    )
    for j in range(n):
        out[f"h{j + 1}"] = _L(ctx, (aj[j] * b, chi), (b, phis[j]))
    return out


def _e6(ctx, k, p, a):
    F = ctx.fixed
    mu, chi, cA = F["mu"], F["chi"], F["chiA"]
    zero = zero_function(ctx.carrier)
    if k == 1:
        m = a["m"]
        return dict(f=_L(ctx, (p["c"], m)), h1=m, h2=zero, h=zero)
    if k == 2:
        return dict(f=zero, h1=a["h1"], h2=zero, h=zero)
    A_, B_, C_ = p["a"], p["b"], p["c"]
    d = A_ - B_
    return dict(
        f=_L(ctx, (A_, mu), (B_, chi), (C_, cA)),
        h1=_L(ctx, (A_ / d, mu), (-B_ / d, chi), (-C_ / d, cA)),
        h2=_L(ctx, (-2 * A_ * B_ / d, mu), (2 * A_ * B_ / d, chi), (2 * A_ * C_ / d, cA)),
        h=_L(ctx, (-C_ * A_ / d, mu), (C_ * A_ / d, chi), (C_ * C_ / d, cA)),
    )


def _e5(ctx, k, p, a):
    F = ctx.fixed
    mu, chi, cA, g = F["mu"], F["chi"], F["chiA"], F["g"]
    zero = zero_function(ctx.carrier)
    if k == 1:
        return dict(f=zero, g1=a["g1"], h1=zero, h2=zero, h=zero)
    if k == 2:
        h1 = a["h1"]
        return dict(f=zero, g1=_L(ctx, (p["a"], g), (p["b"], cA)), h1=h1,
                    h2=_L(ctx, (-p["a"], h1)), h=_L(ctx, (-p["b"], h1)))
    if k == 3:
        a1, a2, a3, d1, d2, d3 = (p[n] for n in ("a1", "a2", "a3", "d1", "d2", "d3"))
        dd = d1 - d2
        return dict(
            f=_L(ctx, (dd * a1 * HALF, mu), (-dd * a2 * HALF, chi), (-dd * a3 * HALF, cA)),
            g1=_L(ctx, (d1 * HALF, mu), (d2 * HALF, chi), (d3, cA)),
            h1=_L(ctx, (a1, mu), (a2, chi), (a3, cA)),
            h2=_L(ctx, (-a1 * d2, mu), (-a2 * d1, chi), (-a3 * d1, cA)),
            h=_L(ctx, (-a1 * d3, mu), (-a2 * d3 - a3 * d1 * HALF + a3 * d2 * HALF, chi), (-a3 * d3, cA)),
        )
    m = a["m"]
    al, a1, a2, a3 = p["alpha"], p["a1"], p["a2"], p["a3"]
    return dict(
        f=_L(ctx, (a1 * al, m)),
        g1=_L(ctx, (al, m), (-a2, g), (-a3, cA)),
        h1=_L(ctx, (a1, m)),
        h2=_L(ctx, (a1 * a2, m)),
        h=_L(ctx, (a1 * a3, m)),
    )


def _e8(ctx, k, p, a):
    F = ctx.fixed
    mu, chi, cA = F["mu"], F["chi"], F["chiA"]
    zero = zero_function(ctx.carrier)
    if k == 1:
        h1 = a["h1"]
        return dict(f=_L(ctx, (p["a"], mu)), h1=h1, h2=_L(ctx, (p["a"], mu), (-p["a"], h1)), h=zero)
    if k == 2:
        mu1, phi = a["mu1"], a["phi"]
        return dict(f=_L(ctx, (p["a"], mu1), (ONE, phi)), h1=mu1, h2=phi, h=zero)
    A_, b, al = p["a"], p["b"], p["alpha"]
    return dict(
        f=_L(ctx, (A_, mu), (b, chi), (b * al, cA)),
        h1=_L(ctx, (ONE, chi), (al, cA)),
        h2=_L(ctx, (A_, mu), (-A_, chi), (-A_ * al, cA)),
        h=_L(ctx, (-al * al * b, cA)),
    )


def _e7(ctx, k, p, a):
    F = ctx.fixed
    mu, chi, cA = F["mu"], F["chi"], F["chiA"]
    zero = zero_function(ctx.carrier)
    if k == 1:
        return dict(f=_L(ctx, (p["a"], mu)), g1=a["g1"], h1=zero, h2=_L(ctx, (p["a"], mu)), h=zero)
    if k == 2:
        h1 = a["h1"]
        return dict(f=_L(ctx, (p["a"], mu)), g1=_L(ctx, (-p["b"], mu), (p["c"], cA)), h1=h1,
                    h2=_L(ctx, (p["a"], mu), (p["b"], h1)), h=_L(ctx, (-p["c"], h1)))
    if k == 3:
        A_, al, be, ga, b, c = (p[n] for n in ("a", "alpha", "beta", "gamma", "b", "c"))
        return dict(
            f=_L(ctx, (A_, mu), (b, cA)),
            g1=_L(ctx, (al, mu), (be, chi), (ga, cA)),
            h1=_L(ctx, (c, cA)),
            h2=_L(ctx, (A_, mu), (-al * c, cA)),
            h=_L(ctx, (b, chi), (-ga * c, cA)),
        )
    if k == 4:
        mu1, phi = a["mu1"], a["phi"]
        a1, a2, a3, A_ = p["a1"], p["a2"], p["a3"], p["a"]
        return dict(
            f=_L(ctx, (a1, mu), (ONE, phi)),
            g1=_L(ctx, (ONE / A_, phi), (-a2 / A_, mu), (a3, cA)),
            h1=_L(ctx, (A_, mu1)),
            h2=_L(ctx, (a1, mu), (a2, mu1), (ONE, phi)),
            h=_L(ctx, (-A_ * a3, mu1)),
        )
    al, A_, a1, a3, c, a2 = (p[n] for n in ("alpha", "a", "a1", "a3", "c", "a2"))
    return dict(
        f=_L(ctx, (A_, mu), (c * a2, chi), (al * c * a2, cA)),
        g1=_L(ctx, (a1, mu), (a2, chi), (a3, cA)),
        h1=_L(ctx, (c, chi), (al * c, cA)),
        h2=_L(ctx, (A_, mu), (-c * a1, chi), (-al * c * a1, cA)),
        h=_L(ctx, (c * (al * a2 - a3), chi), (-al * c * a3, cA)),
    )


def _e0(ctx, k, p, a):
    F = ctx.fixed
    if k == 1:
        return dict(f=product(F["chi1"], a["A"]))
    payload = {"alpha": p["alpha"], "lam": p["lam"]}
    if a.get("y0") is not None:
        payload["base"] = a["y0"]
    return dict(f=phi_solve(ctx.carrier, F["chi1"], F["chi2"], payload, check=False))


# ---------------------------------------------------------------------------
# constraint helpers


def _ne(x, y):
    return lambda ctx, p, a: p[x] != p[y]


def _nz(*names):
    return lambda ctx, p, a: all(not p[n].is_zero() for n in names)


def _not_all_zero(*names):
    return lambda ctx, p, a: any(not p[n].is_zero() for n in names)


def _slot_nonzero(slot):
    return lambda ctx, p, a: not a[slot].is_zero_on(ctx.domain())


def _mult_nonzero(name):
    return lambda ctx, p, a: not a[name].is_zero_on(ctx.domain())


def _mult_not_in(name, *fixed):
    def pred(ctx, p, a):
        m = a[name]
        return all(not _same_mult(m, ctx.fixed[f], ctx) for f in fixed)

    return pred


def _same_mult(m1, m2, ctx):
    if isinstance(m1, Multiplicative) and isinstance(m2, Multiplicative):
        return m1.images == m2.images
    return m1.equals_on(m2, ctx.domain())


def _chars_equal(ctx, p, a):
    return _same_mult(ctx.fixed["chi1"], ctx.fixed["chi2"], ctx)


def _chars_differ(ctx, p, a):
    return not _chars_equal(ctx, p, a)


# ---------------------------------------------------------------------------
# catalog

_ALL = []


def _branch(eq, k, anchor, params, aux=(), gauge=(), constraints=(), nonzero=(), note="", builder=None):
    pn = params if callable(params) else _names(*params)
    an = aux if callable(aux) else _names(*aux)
    b = Branch(eq, k, anchor, pn, an, tuple(gauge), tuple(constraints),
               (lambda ctx, p, a, _k=k, _f=builder: _f(ctx, _k, p, a)), tuple(nonzero), note)
    _ALL.append(b)
    return b


_branch("E2", 1, "f=c*mu+phi[mu,chi], h1=mu, h2=0, h=phi[mu,chi]", ("c",), ("mu", "phi"), builder=_e2)
_branch("E2", 2, "f=c*chi, h1 arbitrary, h2=0, h=c*(chi-h1)", ("c",), ("h1",), ("h1",), builder=_e2)
_branch("E2", 3, "f=a*mu1+b*mu2+c*chi, h1=(a*mu1-b*mu2)/(a-b), h2=-2ab/(a-b)*(mu1-mu2), "
        "h=c/(a-b)*(-a*mu1+b*mu2+(a-b)*chi)", ("a", "b", "c"), constraints=[("a≠b", _ne("a", "b"))], builder=_e2)

_branch("E1", 1, "f=b*chi, g1 arbitrary, h1=h2=0, h=b*chi", ("b",), ("g1",), ("g1",), builder=_e1)
_branch("E1", 2, "f=b*chi, g1=alpha*(mu1+mu2)+gamma*chi, h1!=0 arbitrary, h2=-2*alpha*h1, h=b*chi-gamma*h1",
        ("b", "alpha", "gamma"), ("h1",), ("h1",), [("b≠0", _nz("b")), ("h₁≠0", _slot_nonzero("h1"))],
        nonzero=("h1",), builder=_e1)
_branch("E1", 3, "f=(d1-d2)*(a1/2*mu1-a2/2*mu2-a3/2*chi), g1=d1/2*mu1+d2/2*mu2+d3*chi, h1=a1*mu1+a2*mu2, "
        "h2=-a1*d2*mu1-a2*d1*mu2, h=-a1*d3*mu1-a2*d3*mu2-a3*(d1-d2)/2*chi",
        ("a1", "a2", "a3", "d1", "d2", "d3"), constraints=[("d₁≠d₂", _ne("d1", "d2"))], builder=_e1)
_branch("E1", 4, "f=a1*b*mu+b*phi[mu,chi], g1=-a2/2*(mu1+mu2)-a3*chi+a1*mu+phi[mu,chi], h1=b*mu, "
        "h2=a2*b*mu, h=a3*b*mu+b*phi[mu,chi]", ("b", "a1", "a2", "a3"), ("mu", "phi"),
        constraints=[("b≠0", _nz("b"))], builder=_e1)
_branch("E1", 5, "f=a1*b*chi, g1=-a2/2*(mu1+mu2)+(a1-a3)*chi, h1 arbitrary, h2=a2*h1, h=a1*b*chi-(a1-a3)*h1",
        ("b", "a1", "a2", "a3"), ("h1",), ("h1",), [("b≠0", _nz("b"))],
        note="chi coefficients use a3; with a2 in their place the tuple is not a solution", builder=_e1)

_branch("E4", 1, "f=sum alpha_j*chi_j, h arbitrary, h_j=alpha_j*chi_j-alpha_j*h",
        lambda n: _indexed("alpha", n), ("h",), ("h",), builder=_e4)
_branch("E4", 2, "f=a*chi+sum phi[chi,chi_j], h=chi, h_j=phi[chi,chi_j]",
        ("a",), lambda n: ("chi",) + _indexed("phi", n), builder=_e4)

_branch("E3", 1, "f=sum a_j*chi_j, g arbitrary, h=0, h_j=a_j*chi_j",
        lambda n: _indexed("a", n), ("g",), ("g",), builder=_e3)
_branch("E3", 2, "f=sum a_j*chi_j, g=sum beta_j*chi_j, h!=0 arbitrary, h_j=a_j*chi_j-beta_j*h",
        lambda n: _indexed("a", n) + _indexed("beta", n), ("h",), ("h",), [("h≠0", _slot_nonzero("h"))],
        nonzero=("h",), builder=_e3)
_branch("E3", 3, "f=alpha*b*chi+b*sum phi[chi,chi_j], g=alpha*chi-sum a_j*chi_j+sum phi[chi,chi_j], h=b*chi, "
        "h_j=a_j*b*chi+b*phi[chi,chi_j]", lambda n: ("alpha", "b") + _indexed("a", n),
        lambda n: ("chi",) + _indexed("phi", n), constraints=[("b≠0", _nz("b"))], builder=_e3)

_branch("E6", 1, "f=c*m, h1=m, h2=h=0 (m nonzero multiplicative, m!=mu, m!=chi)", ("c",), ("m",),
        constraints=[("c≠0", _nz("c")), ("m≠0", _mult_nonzero("m")), ("m∉{μ,χ}", _mult_not_in("m", "mu", "chi"))],
        builder=_e6)
_branch("E6", 2, "f=0, h1 arbitrary, h2=h=0", (), ("h1",), ("h1",), builder=_e6)
_branch("E6", 3, "f=a*mu+b*chi+c*chiA, h1=(a*mu-b*chi-c*chiA)/(a-b), h2=2a/(a-b)*(-b*mu+b*chi+c*chiA), "
        "h=c/(a-b)*(-a*mu+a*chi+c*chiA)", ("a", "b", "c"),
        constraints=[("(a,b,c)≠0", _not_all_zero("a", "b", "c")), ("a≠b", _ne("a", "b"))], builder=_e6)

_branch("E5", 1, "f=0, g1 arbitrary, h1=h2=h=0", (), ("g1",), ("g1",), builder=_e5)
_branch("E5", 2, "f=0, g1=a*(mu+chi)/2+b*chiA, h1!=0 arbitrary, h2=-a*h1, h=-b*h1", ("a", "b"), ("h1",), ("h1",),
        [("h₁≠0", _slot_nonzero("h1"))], nonzero=("h1",), builder=_e5)
_branch("E5", 3, "f=(d1-d2)*(a1/2*mu-a2/2*chi-a3/2*chiA), g1=d1/2*mu+d2/2*chi+d3*chiA, "
        "h1=a1*mu+a2*chi+a3*chiA, h2=-a1*d2*mu-a2*d1*chi-a3*d1*chiA, "
        "h=-a1*d3*mu+(-a2*d3-a3*d1/2+a3*d2/2)*chi-a3*d3*chiA", ("a1", "a2", "a3", "d1", "d2", "d3"),
        constraints=[("d₁≠d₂", _ne("d1", "d2")), ("(a₁,a₂,a₃)≠0", _not_all_zero("a1", "a2", "a3"))], builder=_e5)
_branch("E5", 4, "f=a1*alpha*m, g1=alpha*m-a2*(mu+chi)/2-a3*chiA, h1=a1*m, h2=a1*a2*m, h=a1*a3*m",
        ("alpha", "a1", "a2", "a3"), ("m",),
        constraints=[("α≠0", _nz("alpha")), ("a₁≠0", _nz("a1")), ("m≠0", _mult_nonzero("m"))], builder=_e5)

_branch("E8", 1, "f=a*mu, h1 arbitrary, h2=a*mu-a*h1, h=0", ("a",), ("h1",), ("h1",), builder=_e8)
_branch("E8", 2, "f=a*mu1+phi[mu1,mu], h1=mu1, h2=phi[mu1,mu], h=0", ("a",), ("mu1", "phi"), builder=_e8)
_branch("E8", 3, "f=a*mu+b*chi+b*alpha*chiA, h1=chi+alpha*chiA, h2=a*mu-a*chi-a*alpha*chiA, h=-alpha^2*b*chiA",
        ("a", "b", "alpha"), constraints=[("b≠0", _nz("b"))], builder=_e8)

_branch("E7", 1, "f=a*mu, g1 arbitrary, h1=0, h2=a*mu, h=0", ("a",), ("g1",), ("g1",), builder=_e7)
_branch("E7", 2, "f=a*mu, g1=-b*mu+c*chiA, h1!=0 arbitrary, h2=a*mu+b*h1, h=-c*h1", ("a", "b", "c"), ("h1",),
        ("h1",), [("h₁≠0", _slot_nonzero("h1"))], nonzero=("h1",), builder=_e7)
_branch("E7", 3, "f=a*mu+b*chiA, g1=alpha*mu+beta*chi+gamma*chiA, h1=c*chiA, h2=a*mu-alpha*c*chiA, "
        "h=b*chi-gamma*c*chiA", ("a", "alpha", "beta", "gamma", "b", "c"),
        constraints=[("βbc≠0", _nz("beta", "b", "c")), ("b=βc", lambda ctx, p, a: p["b"] == p["beta"] * p["c"])],
        builder=_e7)
_branch("E7", 4, "f=a1*mu+phi[mu1,mu], g1=(phi[mu1,mu]-a2*mu)/a+a3*chiA, h1=a*mu1, "
        "h2=a1*mu+a2*mu1+phi[mu1,mu], h=-a*a3*mu1", ("a1", "a2", "a3", "a"), ("mu1", "phi"),
        constraints=[("a≠0", _nz("a"))], builder=_e7)
_branch("E7", 5, "f=a*mu+c*a2*chi+alpha*c*a2*chiA, g1=a1*mu+a2*chi+a3*chiA, h1=c*chi+alpha*c*chiA, "
        "h2=a*mu-c*a1*chi-alpha*c*a1*chiA, h=c*(alpha*a2-a3)*chi-alpha*c*a3*chiA",
        ("alpha", "a", "a1", "a3", "c", "a2"), constraints=[("c≠0", _nz("c")), ("a₂≠0", _nz("a2"))], builder=_e7)

_branch("E0", 1, "chi1=chi2: f=chi1*A with A additive", (), ("A",),
        constraints=[("χ₁=χ₂", _chars_equal)], builder=_e0)
_branch("E0", 2, "chi1!=chi2: f(x)=alpha*(chi1(x)-chi2(x))+A([y0,x])*chi1(x), A additive on [G,G] with "
        "A(xcx^-1)=chi2(x)/chi1(x)*A(c)", ("alpha", "lam"), ("y0",),
        constraints=[("χ₁≠χ₂", _chars_differ)],
        note="the additive map on [G,G] is the slope q -> lam*q on BS12 and zero elsewhere", builder=_e0)

CATALOG = {}
for _b in _ALL:
    CATALOG.setdefault(_b.equation, []).append(_b)


def list_branches(eq):
    return list(CATALOG[eq.upper()])


def get_branch(eq, k) -> Branch:
    try:
        return CATALOG[eq.upper()][int(k) - 1]
    except (KeyError, IndexError, ValueError):
        raise ValueError(f"{eq} has no branch {k}") from None


# ---------------------------------------------------------------------------
# construction


def _phi_pairs(ctx, branch, aux):
    """(aux name, chi1, chi2) for every phi the branch needs."""
    eq, k, F = branch.equation, branch.index, ctx.fixed
    if (eq, k) in (("E2", 1), ("E1", 4)):
        return [("phi", aux["mu"], F["chi"])]
    if (eq, k) in (("E8", 2), ("E7", 4)):
        return [("phi", aux["mu1"], F["mu"])]
    if (eq, k) in (("E4", 2), ("E3", 3)):
        return [(f"phi{j}", aux["chi"], F["chis"][j - 1]) for j in range(1, ctx.n + 1)]
    return []


def default_aux(ctx, branch, params):
    """Defaults for free slots: zero, or a point mass when the slot must be nonzero."""
    out = {}
    c = ctx.carrier
    for name in branch.gauge:
        if name not in branch.nonzero_slots and not (branch.key == "E1-B5" and name == "h1"):
            out[name] = zero_function(c)
        elif branch.key == "E1-B2":
            dom = ctx.domain()
            out[name] = point_mass(c, dom[1] if len(dom) > 1 else dom[0])
        elif branch.key == "E1-B5":
            out[name] = point_mass(c, c.identity, params.get("b", ONE))
        else:
            out[name] = point_mass(c, c.identity)
    if branch.key == "E0-B1":
        out["A"] = Additive(c, [ZERO] * len(c.generators))
    if branch.key == "E0-B2":
        out["y0"] = None
    return out


def _certified_phi(fn, chi1, chi2):
    """A Phi record for exactly this character pair solves E0 by construction."""
    if not isinstance(fn, Phi):
        return False
    r = fn.record
    return all(isinstance(a, Multiplicative) and a.same_as(b) for a, b in ((r.chi1, chi1), (r.chi2, chi2)))


def _check_aux(ctx, branch, aux):
    c = ctx.carrier
    for name in branch.aux_names(ctx.n):
        if name not in aux:
            raise AuxiliaryInvalid(f"{branch.key} needs auxiliary {name!r}")
        v = aux[name]
        if name == "y0":
            continue
        if not isinstance(v, GFunction) or v.carrier != c:
            raise AuxiliaryInvalid(f"{name} must be a function on {c.spec}")
        if name in ("mu", "mu1", "chi", "m") and not isinstance(v, Multiplicative):
            raise AuxiliaryInvalid(f"{name} must be multiplicative")
        if name in ("mu", "mu1", "chi") and not v.character:
            raise AuxiliaryInvalid(f"{name} must be a character")
        if name == "A" and not isinstance(v, Additive):
            raise AuxiliaryInvalid("A must be additive")
    dom = ctx.domain()
    for name, c1, c2 in _phi_pairs(ctx, branch, aux):
        if _certified_phi(aux[name], c1, c2):
            continue
        bad = check_phi(aux[name], c1, c2, dom)
        if bad is not None:
            raise AuxiliaryInvalid(f"{name} fails f(xy)=f(x)chi1(y)+chi2(x)f(y) at "
                                   f"({c.name(bad[0])}, {c.name(bad[1])})")


def construct(ctx: EquationContext, branch, params: BranchParams | dict, verify_result=True) -> SolutionTuple:
    if not isinstance(branch, Branch):
        branch = get_branch(ctx.equation, branch)
    if branch.equation != ctx.equation:
        raise ValueError(f"branch {branch.key} does not belong to {ctx.equation}")
    if isinstance(params, dict):
        params = BranchParams(params)
    names = branch.param_names(ctx.n)
    missing = [n for n in names if n not in params.params]
    if missing:
        raise ConstraintViolated("parameters", f"missing {missing}")
    extra = [n for n in params.params if n not in names]
    if extra:
        raise ConstraintViolated("parameters", f"unknown {extra}")
    p = {n: params.params[n] for n in names}
    aux = default_aux(ctx, branch, p)
    aux.update({k: v for k, v in params.aux.items() if v is not None or k == "y0"})
    _check_aux(ctx, branch, aux)
    for cname, pred in branch.constraints:
        if not pred(ctx, p, aux):
            raise ConstraintViolated(cname)
    if branch.key == "E0-B2" and not p["lam"].is_zero() and not isinstance(ctx.carrier, BS12Carrier):
        raise AuxiliaryInvalid(f"no nonzero additive map on [G,G] is realized on {ctx.carrier.spec}")
    slots = branch.build(ctx, p, aux)
    tup = SolutionTuple({s: slots[s] for s in ctx.slots})
    if verify_result:
        rep = verify(ctx, tup)
        if not rep.passed:
            raise InternalVerificationFailed(f"{branch.key} built a non-solution", rep)
    return tup


def fixture_suite(names=None):
    """Named reference tuples bound to zoo contexts (see ``feq.fixtures``)."""
    from .fixtures import fixture_suite as _suite

    return _suite(names)
