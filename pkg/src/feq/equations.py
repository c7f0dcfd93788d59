"""Equation registry E0-E8 and the residual verifier.

Every equation has the shape ``f(xy) = sum_t X_t(x) Y_t(y)`` where each
``X_t``/``Y_t`` is either an unknown slot or a fixed function of the context.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import Carrier, make_carrier
from .errors import ConstraintViolated, WrongCarrierKind
from .funcspace import GFunction, Multiplicative, lincomb, product
from .scalar import Cyclotomic, FloatScalar, cyclotomic_powers, exact, lcm, totient

DEFAULT_RADIUS = 4
FAILURE_CAP = 16
MAX_N = 8

EQUATIONS = ("E0", "E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8")


def default_radius():
    raw = os.environ.get("FEQ_DEFAULT_RADIUS")
    if raw:
        try:
            r = int(raw)
        except ValueError:
            raise ValueError(f"FEQ_DEFAULT_RADIUS must be an integer, got {raw!r}") from None
        if r < 0:
            raise ValueError("FEQ_DEFAULT_RADIUS must be non-negative")
        return r
    return DEFAULT_RADIUS


def _schema(eq, n=0):
    """(unknown slots, terms) for an equation id."""
    if eq == "E0":
        return ("f",), (("f", "chi1"), ("chi2", "f"))
    if eq in ("E1", "E5"):
        return ("f", "g1", "h1", "h2", "h"), (("g1", "h1"), ("g", "h2"), ("chi" if eq == "E1" else "chiA", "h"))
    if eq in ("E2", "E6"):
        return ("f", "h1", "h2", "h"), (("f", "h1"), ("g", "h2"), ("chi" if eq == "E2" else "chiA", "h"))
    if eq == "E3":
        hs = tuple(f"h{j}" for j in range(1, n + 1))
        return ("f", "g", "h") + hs, (("g", "h"),) + tuple((f"chi{j}", f"h{j}") for j in range(1, n + 1))
    if eq == "E4":
        hs = tuple(f"h{j}" for j in range(1, n + 1))
        return ("f", "h") + hs, (("f", "h"),) + tuple((f"chi{j}", f"h{j}") for j in range(1, n + 1))
    if eq == "E7":
        return ("f", "g1", "h1", "h2", "h"), (("g1", "h1"), ("mu", "h2"), ("chiA", "h"))
    if eq == "E8":
        return ("f", "h1", "h2", "h"), (("f", "h1"), ("mu", "h2"), ("chiA", "h"))
    raise ValueError(f"unknown equation {eq!r}")


@dataclass
class EquationContext:
    equation: str
    carrier: Carrier
    fixed: dict
    slots: tuple
    terms: tuple
    radius: int = field(default_factory=default_radius)
    backend: str = "exact"

    def domain(self):
        if self.carrier.is_finite:
            return self.carrier.elements()
        return self.carrier.word_ball(self.radius)

    def domain_description(self):
        if self.carrier.is_finite:
            return {"kind": "exhaustive", "order": self.carrier.order}
        return {"kind": "word_ball", "radius": self.radius}

    @property
    def n(self):
        return len(self.fixed.get("chis", ()))

    def x_side_slots(self):
        """Unknowns fixed by the oracle: f plus slots used on the x side."""
        xs = {t[0] for t in self.terms}
        return tuple(s for s in self.slots if s == "f" or s in xs)

    def y_side_slots(self):
        ys = {t[1] for t in self.terms}
        return tuple(s for s in self.slots if s in ys and s not in self.x_side_slots())

    def lookup(self, name, tup):
        if name in self.slots:
            return tup[name]
        return self.fixed[name]

    def to_float(self, eps=1e-9):
        fixed = {}
        for k, v in self.fixed.items():
            if isinstance(v, GFunction):
                fixed[k] = v.to_float(eps)
            elif isinstance(v, (list, tuple)):
                fixed[k] = type(v)(f.to_float(eps) for f in v)
            else:
                fixed[k] = v
        return EquationContext(self.equation, self.carrier, fixed, self.slots, self.terms, self.radius, "float")

    def with_radius(self, radius):
        return EquationContext(self.equation, self.carrier, self.fixed, self.slots, self.terms, radius, self.backend)


@dataclass
class SolutionTuple:
    values: dict

    def __getitem__(self, slot):
        return self.values[slot]

    def __iter__(self):
        return iter(self.values)

    def items(self):
        return self.values.items()

    def replace(self, **kw):
        d = dict(self.values)
        d.update(kw)
        return SolutionTuple(d)

    def to_float(self, eps=1e-9):
        return SolutionTuple({k: f.to_float(eps) for k, f in self.values.items()})


@dataclass
class VerificationReport:
    domain: dict
    pairs_checked: int
    failures: list
    failure_count: int
    backend: str = "exact"
    max_residual: float = 0.0  # relative, float backend only
    max_abs_residual: float = 0.0

    @property
    def verdict(self):
        return "pass" if self.failure_count == 0 else "fail"

    @property
    def passed(self):
        return self.failure_count == 0


# ---------------------------------------------------------------------------
# context construction


def _distinct(a, b, dom):
    if isinstance(a, Multiplicative) and isinstance(b, Multiplicative) and a.carrier == b.carrier:
        return a.images != b.images
    return any(a(x) != b(x) for x in dom)


def _nonzero(f, dom):
    return any(not f(x).is_zero() for x in dom)


def _need_group(eq, c):
    if not c.is_group:
        raise WrongCarrierKind(f"{eq} needs a group; {c.spec} is a monoid")


def _need_character(name, f, c):
    if f.carrier != c:
        raise ConstraintViolated(f"{name} on {c.spec}", "function lives on another carrier")
    if not isinstance(f, Multiplicative):
        raise ConstraintViolated(f"{name} multiplicative", "expected a multiplicative function")


def build_context(eq, carrier, fixed, radius=None) -> EquationContext:
    """Validate the fixed data of ``eq`` on ``carrier`` and bind it."""
    c = make_carrier(carrier)
    eq = eq.upper()
    radius = default_radius() if radius is None else radius
    probe = c.elements() if c.is_finite else c.word_ball(min(radius, 3))
    fx = dict(fixed)
    if eq in ("E1", "E2"):
        _need_group(eq, c)
        for k in ("mu1", "mu2", "chi"):
            _need_character(k, fx[k], c)
        if not _distinct(fx["mu1"], fx["mu2"], probe):
            raise ConstraintViolated("μ₁≠μ₂")
        if not _distinct(fx["mu1"], fx["chi"], probe):
            raise ConstraintViolated("μ₁≠χ")
        if not _distinct(fx["mu2"], fx["chi"], probe):
            raise ConstraintViolated("μ₂≠χ")
        fx["g"] = lincomb([(exact("1/2"), fx["mu1"]), (exact("1/2"), fx["mu2"])])
    elif eq in ("E3", "E4"):
        _need_group(eq, c)
        chis = list(fx["chis"])
        if not chis:
            raise ConstraintViolated("N≥1")
        for j, ch in enumerate(chis):
            _need_character(f"chi{j + 1}", ch, c)
            for k in range(j):
                if not _distinct(ch, chis[k], probe):
                    raise ConstraintViolated("χ_j distinct", f"chi{k + 1} = chi{j + 1}")
        fx["chis"] = tuple(chis)
        for j, ch in enumerate(chis):
            fx[f"chi{j + 1}"] = ch
    elif eq in ("E5", "E6"):
        for k in ("mu", "chi"):
            _need_character(k, fx[k], c)
        if not _nonzero(fx["mu"], probe):
            raise ConstraintViolated("μ≠0")
        if not _nonzero(fx["chi"], probe):
            raise ConstraintViolated("χ≠0")
        if not _distinct(fx["mu"], fx["chi"], probe):
            raise ConstraintViolated("μ≠χ")
        fx["chiA"] = product(fx["chi"], fx["A"])
        if not _nonzero(fx["chiA"], probe):
            raise ConstraintViolated("χA≠0")
        fx["g"] = lincomb([(exact("1/2"), fx["mu"]), (exact("1/2"), fx["chi"])])
    elif eq in ("E7", "E8"):
        _need_group(eq, c)
        for k in ("mu", "chi"):
            _need_character(k, fx[k], c)
        if not _distinct(fx["mu"], fx["chi"], probe):
            raise ConstraintViolated("μ≠χ")
        if not _nonzero(fx["A"], probe):
            raise ConstraintViolated("A≠0")
        fx["chiA"] = product(fx["chi"], fx["A"])
    elif eq == "E0":
        _need_group(eq, c)
        for k in ("chi1", "chi2"):
            _need_character(k, fx[k], c)
    else:
        raise ValueError(f"unknown equation {eq!r}")
    slots, terms = _schema(eq, len(fx.get("chis", ())))
    return EquationContext(eq, c, fx, slots, terms, radius)


def custom_context(name, carrier, slots, terms, fixed=None, radius=None) -> EquationContext:
    """Ad-hoc equation f(xy) = sum X_t(x) Y_t(y) built on the same machinery."""
    return EquationContext(name, make_carrier(carrier), dict(fixed or {}), tuple(slots), tuple(terms),
                           default_radius() if radius is None else radius)


def cosine_sine_context(carrier, radius=None):
    """f(xy) = f(x) g(y) + g(x) f(y) + k(x) k(y)."""
    return custom_context("cosine-sine", carrier, ("f", "g", "k"), (("f", "g"), ("g", "f"), ("k", "k")),
                          radius=radius)


def sine_addition_context(carrier, radius=None):
    """f(xy) = f(x) g(y) + g(x) f(y)."""
    return custom_context("sine-addition", carrier, ("f", "g"), (("f", "g"), ("g", "f")), radius=radius)


# ---------------------------------------------------------------------------
# residuals


def _check_tuple(ctx, tup):
    missing = [s for s in ctx.slots if s not in tup.values]
    if missing:
        raise ValueError(f"tuple is missing slots {missing}")
    for s in ctx.slots:
        if tup[s].carrier != ctx.carrier:
            raise ValueError(f"slot {s} lives on {tup[s].carrier.spec}, not {ctx.carrier.spec}")


def residual(ctx: EquationContext, tup: SolutionTuple, x, y):
    c = ctx.carrier
    r = ctx.lookup("f", tup)(c.mul(x, y))
    for xs, ys in ctx.terms:
        r = r - ctx.lookup(xs, tup)(x) * ctx.lookup(ys, tup)(y)
    return r


def _coeff_rows(vals, N, deg):
    """Power-basis coefficients (mpq) of exact values embedded in Q(zeta_N)."""
    out = np.empty((len(vals), deg), dtype=object)
    for i, v in enumerate(vals):
        out[i, :] = v.embed(N).c if v.n != N else v.c
    return out


def _exact_residuals(fvals, index, xcols, ycols):
    """Residual tensor R[x, y, k] over the power basis of a common conductor.

    ``fvals`` holds f at each distinct product and ``index[i, j]`` points at
    the entry for the pair (x_i, y_j).
    """
    allvals = list(fvals)
    for col in xcols + ycols:
        allvals.extend(col)
    N = lcm(*{v.n for v in allvals})
    deg = totient(N)
    powers = cyclotomic_powers(N)
    R = _coeff_rows(fvals, N, deg)[index]
    for xv, yv in zip(xcols, ycols):
        X = _coeff_rows(xv, N, deg)
        Y = _coeff_rows(yv, N, deg)
        xs = [i for i in range(deg) if any(X[:, i])]
        ys = [j for j in range(deg) if any(Y[:, j])]
        for i in xs:
            for j in ys:
                outer = np.multiply.outer(X[:, i], Y[:, j])
                for k, p in enumerate(powers[(i + j) % N]):
                    if p:
                        R[:, :, k] -= outer * p if p != 1 else outer
    return R, N


@lru_cache(maxsize=64)
def _products(c, dom):
    """Distinct products of the domain and the index of each pair's product."""
    mul = c.mul
    pos = {}
    index = np.empty((len(dom), len(dom)), dtype=np.intp)
    for i, x in enumerate(dom):
        for j, y in enumerate(dom):
            index[i, j] = pos.setdefault(mul(x, y), len(pos))
    return tuple(pos), index


def verify(ctx: EquationContext, tup: SolutionTuple, domain=None, eps=1e-9) -> VerificationReport:
    """Check every pair of the verification domain.

    Exact tuples must give residual exactly zero.  Float tuples pass when
    ``|residual| <= eps * max(1, |f(xy)|, sum |X(x) Y(y)|)``.
    """
    _check_tuple(ctx, tup)
    c = ctx.carrier
    dom = ctx.domain() if domain is None else list(domain)
    n = len(dom)
    f = ctx.lookup("f", tup)
    distinct, index = _products(c, tuple(dom))
    fvals = [f(xy) for xy in distinct]  # many pairs share a product
    xcols = [[ctx.lookup(xs, tup)(x) for x in dom] for xs, _ in ctx.terms]
    ycols = [[ctx.lookup(ys, tup)(y) for y in dom] for _, ys in ctx.terms]
    floaty = ctx.backend == "float" or any(isinstance(v, FloatScalar) for v in fvals[:1])
    worst = absolute = 0.0
    if floaty:
        L = np.array([complex(v) for v in fvals])[index] if n else np.zeros((0, 0), complex)
        R = L.copy()
        scale = np.abs(L)
        for xv, yv in zip(xcols, ycols):
            T = np.multiply.outer(np.array([complex(v) for v in xv]), np.array([complex(v) for v in yv]))
            R -= T
            scale += np.abs(T)
        rel = np.abs(R) / np.maximum(1.0, scale)
        bad = rel > eps
        worst = float(rel.max()) if rel.size else 0.0
        absolute = float(np.abs(R).max()) if R.size else 0.0
        residual_at = lambda i, j: FloatScalar(R[i, j], eps)
    else:
        R, N = _exact_residuals(fvals, index, xcols, ycols) if n else (np.zeros((0, 0, 1), object), 1)
        bad = (R != 0).any(axis=2)
        residual_at = lambda i, j: Cyclotomic(N, tuple(R[i, j, :]), _reduced=True)
    idx = np.argwhere(bad)
    failures = [(dom[i], dom[j], residual_at(i, j)) for i, j in idx[:FAILURE_CAP]]
    return VerificationReport(ctx.domain_description(), n * n, failures, int(len(idx)),
                              "float" if floaty else "exact", worst, absolute)
