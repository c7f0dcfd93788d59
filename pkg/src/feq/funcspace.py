"""Scalar-valued functions on a carrier.

All variants share the ``GFunction`` interface: call with an element to get a
``Scalar``.  Values are memoized per instance, so building a function once and
evaluating it on a whole verification domain is cheap.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import BS12Carrier, Carrier, FiniteCarrier, abelianization
from .errors import (
    AuxiliaryInvalid,
    BasePointInvalid,
    CarrierMismatch,
    NotAGroup,
    NotFinite,
    RelationViolated,
    TransformationPropertyViolated,
    ZeroValueForCharacter,
)
from .scalar import ONE, ZERO, FloatScalar, common_conductor, exact, lcm, to_float, zeta

PHI_CHECK_RADIUS = 3


class GFunction:
    carrier: Carrier
    kind = "abstract"

    def __init__(self, carrier):
        self.carrier = carrier
        self._memo = {}

    def _eval(self, x):
        raise NotImplementedError

    def __call__(self, x):
        try:
            return self._memo[x]
        except KeyError:
            v = self._memo[x] = self._eval(x)
            return v

    def values(self, domain):
        return [self(x) for x in domain]

    @property
    def backend(self):
        return "exact"

    def conductor(self, domain=None):
        if domain is None:
            domain = default_domain(self.carrier)
        return common_conductor(self.values(domain))

    # algebra ----------------------------------------------------------------

    def _check(self, other):
        if other.carrier != self.carrier:
            raise CarrierMismatch(f"{self.carrier.spec} vs {other.carrier.spec}")

    def __add__(self, other):
        if not isinstance(other, GFunction):
            return NotImplemented
        return lincomb([(ONE, self), (ONE, other)])

    def __sub__(self, other):
        if not isinstance(other, GFunction):
            return NotImplemented
        return lincomb([(ONE, self), (-ONE, other)])

    def __neg__(self):
        return lincomb([(-ONE, self)])

    def __mul__(self, other):
        if isinstance(other, GFunction):
            return product(self, other)
        return lincomb([(other, self)])

    def __rmul__(self, other):
        if isinstance(other, GFunction):
            return NotImplemented
        return lincomb([(other, self)])

    def __truediv__(self, other):
        if isinstance(other, GFunction):
            return NotImplemented
        return lincomb([(ONE / exact(other) if not isinstance(other, FloatScalar) else 1 / other.z, self)])

    def equals_on(self, other, domain):
        return all(self(x) == other(x) for x in domain)

    def is_zero_on(self, domain):
        return all(self(x).is_zero() for x in domain)

    def to_float(self, eps=None):
        return FloatView(self, eps)

    def describe(self):
        return self.kind


def default_domain(carrier, radius=None):
    from .equations import default_radius

    if carrier.is_finite:
        return carrier.elements()
    return carrier.word_ball(default_radius() if radius is None else radius)


class Table(GFunction):
    """Explicit values; elements missing from ``values`` take ``default``."""

    kind = "table"

    def __init__(self, carrier, values, default=ZERO):
        super().__init__(carrier)
        self.table = dict(values)
        self.default = default
        if carrier.is_finite and default is None and len(self.table) != carrier.order:
            raise ValueError("finite table must give every element")

    def _eval(self, x):
        v = self.table.get(x, self.default)
        if v is None:
            raise KeyError(f"table has no value at {self.carrier.name(x)}")
        return v

    @property
    def backend(self):
        for v in self.table.values():
            return v.backend
        return "exact"


def table_from_function(fn: GFunction, domain=None) -> Table:
    domain = default_domain(fn.carrier) if domain is None else domain
    return Table(fn.carrier, {x: fn(x) for x in domain})


class Multiplicative(GFunction):
    """m(xy) = m(x) m(y) with m(e) = 1; ``character`` forbids zeros."""

    kind = "mult"

    def __init__(self, carrier, images, character=True, label=None):
        super().__init__(carrier)
        self.images = tuple(exact(v) for v in images)
        self.character = character
        self.label = label
        if len(self.images) != len(carrier.generators):
            raise RelationViolated(f"{carrier.spec} needs {len(carrier.generators)} generator images")
        if character and any(v.is_zero() for v in self.images):
            raise ZeroValueForCharacter("a character never vanishes")
        if isinstance(carrier, FiniteCarrier):
            vals = carrier.extend_images(self.images, lambda a, b: a * b, ONE)
            carrier.check_multiplicative(vals)
            self._memo = dict(enumerate(vals))
        else:
            carrier.check_mult_images(self.images)
            self._powers = {}

    def _power(self, i, k):
        try:
            return self._powers[i, k]
        except KeyError:
            v = self._powers[i, k] = self.images[i] ** k
            return v

    def _eval(self, x):
        return self.carrier.mult_value(self.images, x, self._power)

    def same_as(self, other):
        return isinstance(other, Multiplicative) and other.carrier == self.carrier and other.images == self.images

    def describe(self):
        return self.label or "mult[" + ",".join(str(v) for v in self.images) + "]"


def trivial_character(carrier):
    return Multiplicative(carrier, [ONE] * len(carrier.generators), label="1")


class Additive(GFunction):
    kind = "add"

    def __init__(self, carrier, images, label=None):
        super().__init__(carrier)
        self.images = tuple(exact(v) for v in images)
        self.label = label
        if len(self.images) != len(carrier.generators):
            raise RelationViolated(f"{carrier.spec} needs {len(carrier.generators)} generator images")
        if isinstance(carrier, FiniteCarrier):
            vals = carrier.extend_images(self.images, lambda a, b: a + b, ZERO)
            carrier.check_additive(vals)
            self._memo = dict(enumerate(vals))
        else:
            carrier.check_add_images(self.images)

    def _eval(self, x):
        return self.carrier.add_value(self.images, x)

    def is_zero(self):
        return all(v.is_zero() for v in self.images)

    def describe(self):
        return self.label or "add[" + ",".join(str(v) for v in self.images) + "]"


class Product(GFunction):
    """Pointwise product of a multiplicative function and an additive one."""

    kind = "product"

    def __init__(self, mult: GFunction, add: GFunction):
        mult._check(add) if isinstance(mult, GFunction) else None
        super().__init__(mult.carrier)
        self.mult = mult
        self.add = add

    def _eval(self, x):
        return self.mult(x) * self.add(x)

    def describe(self):
        return f"{self.mult.describe()}*{self.add.describe()}"


class LinComb(GFunction):
    kind = "lincomb"

    def __init__(self, carrier, terms):
        super().__init__(carrier)
        self.terms = tuple(terms)

    def _eval(self, x):
        acc = ZERO
        for c, f in self.terms:
            if not c.is_zero():
                acc = acc + c * f(x)
        return acc

    def describe(self):
        return " + ".join(f"({c})*{f.describe()}" for c, f in self.terms) or "0"


def zero_function(carrier):
    return LinComb(carrier, ())


def lincomb(terms, carrier=None) -> GFunction:
    """Scalar-weighted sum; nested combinations are flattened."""
    flat = []
    for c, f in terms:
        c = exact(c)
        if carrier is None:
            carrier = f.carrier
        elif f.carrier != carrier:
            raise CarrierMismatch(f"{carrier.spec} vs {f.carrier.spec}")
        if isinstance(f, LinComb):
            flat.extend((c * c2, f2) for c2, f2 in f.terms)
        else:
            flat.append((c, f))
    if carrier is None:
        raise ValueError("empty combination needs an explicit carrier")
    return LinComb(carrier, [(c, f) for c, f in flat if not c.is_zero()])


def product(mult: GFunction, add: GFunction) -> GFunction:
    if mult.carrier != add.carrier:
        raise CarrierMismatch(f"{mult.carrier.spec} vs {add.carrier.spec}")
    if isinstance(mult, Additive) and isinstance(add, Multiplicative):
        mult, add = add, mult
    if not (isinstance(mult, Multiplicative) and isinstance(add, Additive)):
        raise TypeError("pointwise products are limited to multiplicative x additive")
    return Product(mult, add)


def combine(op, *args):
    """``combine('sum', f, g, ...)``, ``combine('scale', c, f)``, ``combine('product', m, A)``."""
    if op == "sum":
        return lincomb([(ONE, f) for f in args])
    if op == "scale":
        c, f = args
        return lincomb([(c, f)])
    if op == "product":
        return product(*args)
    raise ValueError(f"unknown combine op {op!r}")


class FloatView(GFunction):
    """Float-backend image of an exact function."""

    kind = "float"

    def __init__(self, inner: GFunction, eps=None):
        super().__init__(inner.carrier)
        self.inner = inner
        self.eps = eps

    def _eval(self, x):
        v = self.inner(x)
        return v if isinstance(v, FloatScalar) else to_float(v, self.eps or 1e-9)

    @property
    def backend(self):
        return "float"

    def describe(self):
        return f"float({self.inner.describe()})"


# ---------------------------------------------------------------------------
# characters


_CHARACTERS = {}


def enumerate_characters(c: Carrier):
    """All homomorphisms G -> C*, in lexicographic order of exponent vectors."""
    if not c.is_finite:
        raise NotFinite(f"{c.spec} is infinite")
    if c not in _CHARACTERS:
        _CHARACTERS[c] = tuple(_characters(c))
    return list(_CHARACTERS[c])


def _characters(c):
    ab = abelianization(c)
    N = ab.exponent
    out = []
    ranges = [range(d) for d in ab.factors]
    import itertools

    for ts in itertools.product(*ranges):
        vals = []
        for x in c.elements():
            k = sum(t * cx * (N // d) for t, cx, d in zip(ts, ab.project(x), ab.factors)) % N
            vals.append(zeta(N, k) if N > 1 else ONE)
        images = [vals[g] for g in c.generators]
        chi = Multiplicative(c, images, label="chi" + "".join(f"_{t}" for t in ts) if ts else "1")
        out.append(chi)
    return out


def multiplicative_from_images(c: Carrier, images, character=None):
    """``images``: one value per generator, or (finite carriers) a full table."""
    images = [exact(v) for v in images]
    if c.is_finite and len(images) == c.order and len(images) != len(c.generators):
        table = images
        images = [table[g] for g in c.generators]
        m = Multiplicative(c, images, character=False if character is None else character)
        if any(m(x) != table[x] for x in c.elements()):
            raise RelationViolated("table is not determined by a homomorphism")
    else:
        if character is None:
            character = c.is_group
        m = Multiplicative(c, images, character=character)
    if c.is_group and not m.character:
        m.character = True  # nonzero on a group <=> character
    return m


def additive_from_images(c: Carrier, images):
    images = [exact(v) for v in images]
    if c.is_finite and len(images) == c.order and len(images) != len(c.generators):
        table = images
        a = Additive(c, [table[g] for g in c.generators])
        if any(a(x) != table[x] for x in c.elements()):
            raise RelationViolated("table is not additive")
        return a
    return Additive(c, images)


# ---------------------------------------------------------------------------
# solutions of f(xy) = f(x) chi1(y) + chi2(x) f(y)


class CommutatorAdditive:
    """An additive map on [G,G] (only the BS12 slope form q -> lam * q)."""

    def __init__(self, carrier, lam):
        self.carrier = carrier
        self.lam = exact(lam)
        if not isinstance(carrier, BS12Carrier) and not self.lam.is_zero():
            raise AuxiliaryInvalid(f"nonzero additive maps on [G,G] are only realized on BS12, not {carrier.spec}")

    def __call__(self, c):
        if self.lam.is_zero():
            return ZERO
        p, q = c
        if p != 0:
            raise ValueError("element is not in [G,G]")
        return self.lam * q


class PhiRecord:
    """Data of one solution of f(xy) = f(x) chi1(y) + chi2(x) f(y).

    ``form`` is ``equal`` (chi1 = chi2, payload ``additive``), ``central``
    (payload ``alpha``) or ``commutator`` (payload ``alpha``, ``base`` y0 and
    the slope ``lam`` of the additive map on [G,G]).
    """

    def __init__(self, chi1, chi2, form, alpha=ZERO, additive=None, base=None, lam=ZERO):
        self.chi1 = chi1
        self.chi2 = chi2
        self.form = form
        self.alpha = exact(alpha)
        self.additive = additive
        self.base = base
        self.lam = exact(lam)


class Phi(GFunction):
    kind = "phi"

    def __init__(self, record: PhiRecord):
        super().__init__(record.chi1.carrier)
        self.record = record
        r = record
        if r.form == "commutator":
            self._cadd = CommutatorAdditive(self.carrier, r.lam)

    def _eval(self, x):
        r = self.record
        if r.form == "equal":
            return r.chi1(x) * r.additive(x)
        v = r.alpha * (r.chi1(x) - r.chi2(x))
        if r.form == "commutator" and not r.lam.is_zero():
            v = v + self._cadd(self.carrier.commutator(r.base, x)) * r.chi1(x)
        return v

    def describe(self):
        r = self.record
        if r.form == "equal":
            return f"phi[{r.chi1.describe()}*{r.additive.describe()}]"
        if r.form == "central":
            return f"phi[{r.alpha}*({r.chi1.describe()}-{r.chi2.describe()})]"
        return f"phi[alpha={r.alpha}, y0={self.carrier.name(r.base)}, lam={r.lam}]"


def e0_residual(fn, chi1, chi2, x, y):
    c = fn.carrier
    return fn(c.mul(x, y)) - fn(x) * chi1(y) - chi2(x) * fn(y)


def check_phi(fn, chi1, chi2, domain):
    """First pair violating the E0 identity, or None.

    Pairs whose product lies outside a partial table are skipped.
    """
    for x in domain:
        for y in domain:
            try:
                r = e0_residual(fn, chi1, chi2, x, y)
            except KeyError:
                continue
            if not r.is_zero():
                return (x, y)
    return None


def _transformation_samples(c, n=100, seed=0, radius=PHI_CHECK_RADIUS):
    rng = random.Random(seed)
    ball = default_domain(c, radius)
    out = []
    for _ in range(n):
        x, u, v = rng.choice(ball), rng.choice(ball), rng.choice(ball)
        out.append((x, c.commutator(u, v)))
    return out


def check_transformation_property(cadd, chi1, chi2, samples):
    c = cadd.carrier
    for x, comm in samples:
        lhs = cadd(c.mul(c.mul(x, comm), c.inv(x)))
        rhs = chi2(x) / chi1(x) * cadd(comm)
        if lhs != rhs:
            return (x, comm)
    return None


def phi_solve(c: Carrier, chi1, chi2, payload=None, check=True):
    """Build phi_{chi1,chi2}.

    ``payload`` keys: ``additive`` (chi1 = chi2), ``alpha`` and optionally
    ``base`` and ``lam`` (chi1 != chi2).
    """
    payload = dict(payload or {})
    if not c.is_group:
        raise NotAGroup(f"{c.spec} is not a group")
    if chi1.carrier != c or chi2.carrier != c:
        raise CarrierMismatch("characters live on another carrier")
    dom = default_domain(c, PHI_CHECK_RADIUS)
    if all(chi1(x) == chi2(x) for x in dom):
        A = payload.get("additive") or Additive(c, [ZERO] * len(c.generators))
        rec = PhiRecord(chi1, chi2, "equal", additive=A)
    else:
        alpha = payload.get("alpha", ZERO)
        lam = exact(payload.get("lam", ZERO))
        if lam.is_zero() and payload.get("base") is None:
            rec = PhiRecord(chi1, chi2, "central", alpha=alpha)
        else:
            base = payload.get("base")
            if base is None:
                base = default_base_point(c, chi1, chi2)
            if chi1(base) == chi2(base):
                raise BasePointInvalid(f"chi1 and chi2 agree at {c.name(base)}")
            rec = PhiRecord(chi1, chi2, "commutator", alpha=alpha, base=base, lam=lam)
            cadd = CommutatorAdditive(c, lam)
            bad = check_transformation_property(cadd, chi1, chi2, _transformation_samples(c))
            if bad is not None:
                raise TransformationPropertyViolated(f"fails at x={c.name(bad[0])}, c={c.name(bad[1])}")
    fn = Phi(rec)
    if check:
        bad = check_phi(fn, chi1, chi2, dom)
        if bad is not None:
            raise AuxiliaryInvalid(f"phi fails E0 at ({c.name(bad[0])}, {c.name(bad[1])})")
    return fn


def default_base_point(c, chi1, chi2):
    """Canonical y0: first generator, then first ball element, where the characters differ."""
    for g in c.generators:
        if chi1(g) != chi2(g):
            return g
    for x in default_domain(c, PHI_CHECK_RADIUS):
        if chi1(x) != chi2(x):
            return x
    raise BasePointInvalid("characters agree on the probe domain")


@dataclass(frozen=True)
class Centrality:
    """Truthy when central; otherwise ``witness`` is a pair with f(xy) != f(yx)."""

    central: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.central


def is_central(fn: GFunction, domain=None) -> Centrality:
    c = fn.carrier
    if domain is None:
        domain = default_domain(c)
    if getattr(c, "is_abelian", False):
        return Centrality(True)
    for x in domain:
        for y in domain:
            if fn(c.mul(x, y)) != fn(c.mul(y, x)):
                return Centrality(False, (x, y))
    return Centrality(True)


def coefficient_conductor(fns, domain):
    return lcm(*(f.conductor(domain) for f in fns))
