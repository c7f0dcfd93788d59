"""Scalars for function values.

Two backends share one interface:

* ``Cyclotomic`` -- exact elements of Q(zeta_N) stored in the power basis
  zeta^0 .. zeta^(phi(N)-1), reduced modulo the N-th cyclotomic polynomial.
  Rational coefficients are ``gmpy2.mpq``.
* ``FloatScalar`` -- a complex double with a relative comparison tolerance.

Mixing the two without an explicit ``to_float`` raises ``BackendMismatch``.
Plain Python numbers (int, Fraction, mpq) coerce into the exact backend;
float and complex coerce into the float backend.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache, reduce
from numbers import Rational

from gmpy2 import mpq

from .errors import BackendMismatch, DivisionByZero, Infeasible

DEFAULT_EPS = 1e-9


# ---------------------------------------------------------------------------
# cyclotomic polynomials and per-conductor tables


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_divexact(num, den):
    """Exact division of integer polynomials (low-to-high coefficients)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        q, r = divmod(num[i + len(den) - 1], lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[i] = q
        for j, c in enumerate(den):
            num[i + j] -= q * c
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return tuple(out)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("conductor must be positive")
    poly = (-1,) + (0,) * (n - 1) + (1,)
    for d in _divisors(n)[:-1]:
        poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return poly


def totient(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


class _Tables:
    """Reduced power basis images of zeta^e for one conductor."""

    def __init__(self, n):
        self.n = n
        phi = cyclotomic_polynomial(n)
        self.deg = deg = len(phi) - 1
        powers = []
        vec = [0] * deg
        vec[0] = 1
        for _ in range(n):
            powers.append(tuple(vec))
            # multiply by zeta: shift up, fold the top coefficient back
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for i in range(deg):
                    vec[i] -= top * phi[i]
        self.powers = powers
        self.units = [k for k in range(1, n + 1) if math.gcd(k, n) == 1]


@lru_cache(maxsize=None)
def _tables(n) -> _Tables:
    return _Tables(n)


def cyclotomic_powers(n):
    """Reduced power-basis vectors of zeta_n^k for k = 0 .. n-1 (ints)."""
    return _tables(n).powers


def _reduce(n, poly):
    """Reduce a coefficient list indexed by exponent (any length) mod Phi_n."""
    t = _tables(n)
    out = [mpq(0)] * t.deg
    for e, c in enumerate(poly):
        if not c:
            continue
        if e < t.deg:
            out[e] += c
        else:
            for i, p in enumerate(t.powers[e % n]):
                if p:
                    out[i] += c * p
    return tuple(out)


# ---------------------------------------------------------------------------
# scalar classes


class Scalar:
    """Common base so callers can ``isinstance`` either backend."""

    __slots__ = ()
    backend = None


def _is_exact_number(x):
    return isinstance(x, (int, Rational)) or type(x) is type(mpq(0))


class Cyclotomic(Scalar):
    __slots__ = ("n", "c", "_canon")
    backend = "exact"

    def __init__(self, n, coeffs, _reduced=False):
        self.n = n
        if _reduced:
            self.c = coeffs
        else:
            self.c = _reduce(n, [mpq(x) for x in coeffs])
        self._canon = None

    # constructors ---------------------------------------------------------

    @classmethod
    def rational(cls, q):
        if isinstance(q, Fraction):
            q = mpq(q.numerator, q.denominator)
        return cls(1, (mpq(q),), _reduced=True)

    @classmethod
    def zeta(cls, n, k=1):
        t = _tables(n)
        return cls(n, tuple(mpq(x) for x in t.powers[k % n]), _reduced=True)

    # coercion -------------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, FloatScalar) or isinstance(x, (float, complex)):
            raise BackendMismatch("cannot mix exact and float scalars; call to_float()")
        if _is_exact_number(x):
            return Cyclotomic.rational(x)
        return None

    def embed(self, m):
        """The same number viewed in Q(zeta_m); requires n | m."""
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError(f"conductor {self.n} does not divide {m}")
        step = m // self.n
        if self.n == 1:
            poly = [self.c[0]]
        else:
            poly = [mpq(0)] * (step * (len(self.c) - 1) + 1)
            for i, c in enumerate(self.c):
                poly[i * step] = c
        return Cyclotomic(m, _reduce(m, poly), _reduced=True)

    def project(self, m):
        """View in the subfield Q(zeta_m) (m | n); None if not contained there."""
        if m == self.n:
            return self
        if self.n % m:
            return None
        if self.is_rational():
            return Cyclotomic(m, _reduce(m, [self.c[0]]), _reduced=True)
        dm = totient(m)
        basis = [Cyclotomic.zeta(m, i).embed(self.n).c for i in range(dm)]
        # solve sum_i x_i basis[i] = self.c over Q
        rows = [[basis[i][r] for i in range(dm)] + [self.c[r]] for r in range(len(self.c))]
        sol = _solve_rational(rows, dm)
        if sol is None:
            return None
        return Cyclotomic(m, tuple(sol), _reduced=True)

    @staticmethod
    def _common(a, b):
        if a.n == b.n:
            return a, b
        m = a.n * b.n // math.gcd(a.n, b.n)
        return a.embed(m), b.embed(m)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if type(other) is Cyclotomic and other.n == self.n:
            if self.n == 1:
                return Cyclotomic(1, (self.c[0] + other.c[0],), _reduced=True)
            return Cyclotomic(self.n, tuple(x + y for x, y in zip(self.c, other.c)), _reduced=True)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._common(self, o)
        return Cyclotomic(a.n, tuple(x + y for x, y in zip(a.c, b.c)), _reduced=True)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is Cyclotomic and other.n == self.n == 1:
            return Cyclotomic(1, (self.c[0] - other.c[0],), _reduced=True)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._common(self, o)
        return Cyclotomic(a.n, tuple(x - y for x, y in zip(a.c, b.c)), _reduced=True)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Cyclotomic(self.n, tuple(-x for x in self.c), _reduced=True)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if type(other) is Cyclotomic:
            o = other
            if o.n == 1 and self.n == 1:
                return Cyclotomic(1, (self.c[0] * o.c[0],), _reduced=True)
        else:
            o = self._coerce(other)
            if o is None:
                return NotImplemented
        if o.n == 1:
            s = o.c[0]
            return Cyclotomic(self.n, tuple(x * s for x in self.c), _reduced=True)
        if self.n == 1:
            s = self.c[0]
            return Cyclotomic(o.n, tuple(x * s for x in o.c), _reduced=True)
        a, b = self._common(self, o)
        poly = [mpq(0)] * (len(a.c) + len(b.c) - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        poly[i + j] += x * y
        return Cyclotomic(a.n, _reduce(a.n, poly), _reduced=True)

    __rmul__ = __mul__

    def conjugate_by(self, k):
        """Galois conjugate zeta -> zeta^k (k coprime to n)."""
        poly = [mpq(0)] * self.n
        for i, c in enumerate(self.c):
            poly[(i * k) % self.n] += c
        return Cyclotomic(self.n, _reduce(self.n, poly), _reduced=True)

    def norm(self):
        """Field norm down to Q, as an mpq."""
        acc = self
        for k in _tables(self.n).units[1:]:
            acc = acc * self.conjugate_by(k)
        return acc.embed(self.n).c[0] if self.n > 1 else acc.c[0]

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.n == 1:
            return Cyclotomic(1, (1 / self.c[0],), _reduced=True)
        others = Cyclotomic.rational(1)
        for k in _tables(self.n).units[1:]:
            others = others * self.conjugate_by(k)
        nrm = (self * others).c[0]
        return others * Cyclotomic.rational(1 / nrm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.n == 1:
            if not o.c[0]:
                raise DivisionByZero("division by zero")
            s = 1 / o.c[0]
            return Cyclotomic(self.n, tuple(x * s for x in self.c), _reduced=True)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if self.n == 1:
            return Cyclotomic(1, (self.c[0] ** k,), _reduced=True)
        result = Cyclotomic.rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # predicates -----------------------------------------------------------

    def is_zero(self):
        return not any(self.c)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self):
        return not any(self.c[1:])

    def as_rational(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except BackendMismatch:
            return False
        if o is None:
            return NotImplemented
        a, b = self._common(self, o)
        return a.c == b.c

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def canonical(self):
        """The same number in the smallest conductor that contains it."""
        if self._canon is None:
            canon = self
            if self.is_rational():
                canon = Cyclotomic(1, (self.c[0],), _reduced=True)
            else:
                for d in _divisors(self.n)[:-1]:
                    p = self.project(d)
                    if p is not None:
                        canon = p
                        break
            self._canon = canon
        return self._canon

    def __hash__(self):
        c = self.canonical()
        if c.n == 1:
            return hash(c.c[0])
        return hash((c.n, c.c))

    # conversion -----------------------------------------------------------

    def __complex__(self):
        if self.n == 1:
            return complex(float(self.c[0]))
        z = cmath.exp(2j * math.pi / self.n)
        return sum((float(c) * z**i for i, c in enumerate(self.c) if c), 0j)

    def to_float(self, eps=DEFAULT_EPS):
        return FloatScalar(complex(self), eps)

    def __repr__(self):
        return f"Cyclotomic({format_scalar(self)!r}, n={self.n})"

    def __str__(self):
        return format_scalar(self)


class FloatScalar(Scalar):
    __slots__ = ("z", "eps")
    backend = "float"

    def __init__(self, z, eps=DEFAULT_EPS):
        self.z = complex(z)
        self.eps = eps

    def _coerce(self, x):
        if isinstance(x, FloatScalar):
            return x.z
        if isinstance(x, Cyclotomic):
            raise BackendMismatch("cannot mix exact and float scalars; call to_float()")
        if isinstance(x, (int, float, complex)) or _is_exact_number(x):
            return complex(x) if not _is_exact_number(x) else complex(float(x))
        return None

    def _wrap(self, z):
        return FloatScalar(z, self.eps)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._wrap(self.z + o)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is Cyclotomic and other.n == self.n == 1:
            return Cyclotomic(1, (self.c[0] - other.c[0],), _reduced=True)
        o = self._coerce(other)
        return NotImplemented if o is None else self._wrap(self.z - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._wrap(o - self.z)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._wrap(self.z * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise DivisionByZero("division by zero")
        return self._wrap(self.z / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._wrap(o / self.z)

    def __neg__(self):
        return self._wrap(-self.z)

    def __pos__(self):
        return self

    def __pow__(self, k):
        return self._wrap(self.z**k)

    def inverse(self):
        if self.z == 0:
            raise DivisionByZero("inverse of zero")
        return self._wrap(1 / self.z)

    def is_zero(self):
        return abs(self.z) <= self.eps

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except BackendMismatch:
            return False
        if o is None:
            return NotImplemented
        scale = max(1.0, abs(self.z), abs(o))
        return abs(self.z - o) <= self.eps * scale

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None  # tolerance equality is not transitive

    def __complex__(self):
        return self.z

    def to_float(self, eps=None):
        return self if eps is None else FloatScalar(self.z, eps)

    def __repr__(self):
        return f"FloatScalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = Cyclotomic.rational(0)
ONE = Cyclotomic.rational(1)


def exact(x) -> Cyclotomic:
    """Coerce an int/Fraction/mpq/literal/Cyclotomic into the exact backend."""
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, str):
        s = parse_scalar(x)
        if not isinstance(s, Cyclotomic):
            raise BackendMismatch(f"literal {x!r} is not exact")
        return s
    c = Cyclotomic._coerce(x)
    if c is None:
        raise TypeError(f"cannot make an exact scalar from {x!r}")
    return c


def to_float(s, eps=DEFAULT_EPS) -> FloatScalar:
    if isinstance(s, Scalar):
        return s.to_float(eps)
    return FloatScalar(complex(s), eps)


def zeta(n, k=1) -> Cyclotomic:
    return Cyclotomic.zeta(n, k)


def common_conductor(scalars) -> int:
    n = 1
    for s in scalars:
        if isinstance(s, Cyclotomic):
            m = s.canonical().n
            n = n * m // math.gcd(n, m)
    return n


# ---------------------------------------------------------------------------
# literal grammar: "p/q", "n", "c*z^k" terms joined by + (conductor given
# separately), float "a+bi"

_FLOAT_RE = re.compile(
    r"^\s*(?P<re>[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)?"
    r"\s*(?:(?P<im>[+-]\s*(\d+\.?\d*|\.\d+)?([eE][+-]?\d+)?)\s*i)?\s*$"
)
_TERM_RE = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*(\*?\s*z(?:\s*\^\s*(\d+))?)?\s*")


def _looks_float(text):
    t = text.strip()
    return t.endswith("i") or "." in t or ("e" in t.lower() and "z" not in t)


def parse_scalar(text, conductor=1, backend="exact", eps=DEFAULT_EPS):
    """Parse a scalar literal.

    >>> parse_scalar("3/2")
    Cyclotomic('3/2', n=1)
    >>> parse_scalar("1+1*z^1+1*z^2", conductor=3).is_zero()
    True
    """
    if not isinstance(text, str):
        text = str(text)
    if _looks_float(text) or backend == "float":
        if not _looks_float(text):
            return exact_literal(text, conductor).to_float(eps)
        m = _FLOAT_RE.match(text.replace(" ", ""))
        if not m or (m.group("re") is None and m.group("im") is None):
            raise ValueError(f"bad float literal {text!r}")
        re_part = float(m.group("re")) if m.group("re") else 0.0
        im_txt = m.group("im")
        if im_txt is None:
            im_part = 0.0
        elif im_txt in "+-":
            im_part = float(im_txt + "1")
        else:
            im_part = float(im_txt)
        if backend == "exact":
            return FloatScalar(complex(re_part, im_part), eps)
        return FloatScalar(complex(re_part, im_part), eps)
    return exact_literal(text, conductor)


def exact_literal(text, conductor=1) -> Cyclotomic:
    text = text.strip()
    if not text:
        raise ValueError("empty scalar literal")
    poly = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad scalar literal {text!r}")
        sign, coeff, zpart, exp = m.groups()
        if not first and not sign:
            raise ValueError(f"bad scalar literal {text!r}")
        if coeff is None and zpart is None:
            raise ValueError(f"bad scalar literal {text!r}")
        c = mpq(coeff) if coeff is not None else mpq(1)
        if sign == "-":
            c = -c
        k = 0
        if zpart is not None:
            k = int(exp) if exp is not None else 1
            if conductor == 1 and k % 1 == 0 and k != 0:
                raise ValueError(f"literal {text!r} uses z but conductor is 1")
        poly[k] = poly.get(k, mpq(0)) + c
        pos = m.end()
        first = False
    n = conductor
    vec = [mpq(0)] * (max(poly) + 1)
    for k, c in poly.items():
        vec[k] += c
    if n == 1:
        return Cyclotomic.rational(vec[0])
    return Cyclotomic(n, _reduce(n, vec), _reduced=True)


def _fmt_rat(q):
    q = mpq(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(s, conductor=None) -> str:
    """Inverse of ``parse_scalar``; exact values may be embedded in ``conductor``."""
    if isinstance(s, FloatScalar):
        return f"{s.z.real!r}{s.z.imag:+.17g}i"
    s = exact(s)
    if conductor is not None:
        s = s.canonical().embed(conductor)
    if s.is_rational():
        return _fmt_rat(s.c[0])
    terms = [_fmt_rat(c) if k == 0 else f"{_fmt_rat(c)}*z^{k}" for k, c in enumerate(s.c) if c]
    return terms[0] + "".join(t if t.startswith("-") else "+" + t for t in terms[1:])


# ---------------------------------------------------------------------------
# linear algebra


def _solve_rational(rows, nvars):
    """Solve a small rational augmented system; None if inconsistent."""
    rows = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(nvars):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    sol = [mpq(0)] * nvars
    for i, c in enumerate(piv):
        sol[c] = rows[i][-1]
    return sol


class ScalarMatrix:
    """Immutable rectangular matrix of scalars from one backend."""

    def __init__(self, rows, eps=DEFAULT_EPS):
        rows = [tuple(r) for r in rows]
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        backends = {getattr(x, "backend", None) for r in rows for x in r}
        backends.discard(None)
        if len(backends) > 1:
            raise BackendMismatch("matrix mixes exact and float entries")
        self.backend = backends.pop() if backends else "exact"
        conv = exact if self.backend == "exact" else (lambda x: to_float(x, eps))
        self._rows = tuple(tuple(conv(x) for x in r) for r in rows)
        self.eps = eps

    @property
    def shape(self):
        return (len(self._rows), len(self._rows[0]) if self._rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def rows(self):
        return [list(r) for r in self._rows]

    def column(self, j):
        return [r[j] for r in self._rows]

    def transpose(self):
        return ScalarMatrix(list(zip(*self._rows)), self.eps)

    def to_float(self, eps=DEFAULT_EPS):
        return ScalarMatrix([[to_float(x, eps) for x in r] for r in self._rows], eps)

    def __eq__(self, other):
        return isinstance(other, ScalarMatrix) and self._rows == other._rows

    def __repr__(self):
        return f"ScalarMatrix({self.shape[0]}x{self.shape[1]}, {self.backend})"

    # -- rank ---------------------------------------------------------------

    def rank(self):
        if self.backend == "float":
            return _float_rref(self.rows(), self.shape[1], self.eps)[1].__len__()
        return _bareiss_rank(self.rows())

    def determinant(self):
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        if self.backend == "float":
            raise NotImplementedError("float determinant is not needed")
        return _bareiss_det(self.rows())


def _bareiss_rank(a):
    """Fraction-free (one-step Bareiss) elimination; returns the rank."""
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    prev = ONE
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if not a[i][c].is_zero()), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            aic = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c + 1, ncols):
                row_i[j] = (piv * row_i[j] - aic * row_r[j]) / prev
            row_i[c] = ZERO
        prev = piv
        r += 1
        if r == nrows:
            break
    return r


def _bareiss_det(a):
    n = len(a)
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if a[k][k].is_zero():
            p = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if p is None:
                return ZERO
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def _float_rref(a, ncols, eps):
    a = [list(r) for r in a]
    scale = max((abs(complex(x)) for r in a for x in r), default=0.0) or 1.0
    piv = []
    r = 0
    for c in range(ncols):
        if r == len(a):
            break
        p = max(range(r, len(a)), key=lambda i: abs(complex(a[i][c])))
        if abs(complex(a[p][c])) <= eps * scale:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and abs(complex(a[i][c])) > 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
    return a, piv


def _exact_rref(a, ncols):
    """Gauss-Jordan on the first ``ncols`` columns of ``a`` (rows mutated)."""
    piv = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if not a[i][c].is_zero()), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        row_r = a[r]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if not f.is_zero():
                    a[i] = [x - f * y if not y.is_zero() else x for x, y in zip(a[i], row_r)]
        piv.append(c)
        r += 1
    return a, piv


class LinearSolution:
    """Result of ``solve_columns``: one particular solution per rhs column
    plus a basis of the right null space of ``M``."""

    def __init__(self, rank, particular, nullspace):
        self.rank = rank
        self.particular = particular
        self.nullspace = nullspace


def solve_columns(M: ScalarMatrix, rhs_columns) -> LinearSolution:
    """Solve ``M x = b`` for every ``b`` in ``rhs_columns`` at once.

    Raises ``Infeasible`` (with a left-null certificate) on the first
    inconsistent column.
    """
    nrows, ncols = M.shape
    k = len(rhs_columns)
    if M.backend == "float":
        raise NotImplementedError("float backend verifies only")
    a = []
    for i in range(nrows):
        row = list(M._rows[i])
        row += [exact(col[i]) for col in rhs_columns]
        row += [ONE if j == i else ZERO for j in range(nrows)]
        a.append(row)
    a, piv = _exact_rref(a, ncols)
    rank = len(piv)
    for i in range(rank, nrows):
        for j in range(k):
            if not a[i][ncols + j].is_zero():
                cert = a[i][ncols + k:]
                raise Infeasible(cert, column=j)
    particular = []
    for j in range(k):
        x = [ZERO] * ncols
        for i, c in enumerate(piv):
            x[c] = a[i][ncols + j]
        particular.append(x)
    free = [c for c in range(ncols) if c not in piv]
    nullspace = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for i, c in enumerate(piv):
            v[c] = -a[i][fc]
        nullspace.append(v)
    return LinearSolution(rank, particular, nullspace)


def rank_and_solve(M: ScalarMatrix, rhs=None):
    """Rank of ``M`` and, if ``rhs`` is given, one solution of ``M x = rhs``.

    Exact matrices use fraction-free elimination for the rank; float
    matrices use a pivot threshold of ``eps`` relative to the largest entry.
    """
    if M.backend == "float":
        if rhs is None:
            return M.rank(), None
        ncols = M.shape[1]
        rows = [list(r) + [to_float(b, M.eps)] for r, b in zip(M._rows, rhs)]
        red, piv = _float_rref(rows, ncols + 1, M.eps)
        if ncols in piv:
            raise Infeasible(None)
        x = [FloatScalar(0, M.eps)] * ncols
        for i, c in enumerate(piv):
            x[c] = red[i][-1]
        return len(piv), x
    rank = M.rank()
    if rhs is None:
        return rank, None
    sol = solve_columns(M, [list(rhs)])
    return rank, sol.particular[0]


def lcm(*ns):
    return reduce(lambda a, b: a * b // math.gcd(a, b), ns, 1)
