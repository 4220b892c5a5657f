"""Rational functions over exact fields; recovering the map to the j-line.

Polynomials and rational functions are generic over any exact field whose
elements support +, -, *, unary -, is_zero() and inverse(); in practice the
coefficients are CyclotomicNumber (Q sits inside as conductor 1) or, for the
pencil solves, polynomials over it.  The map pi with pi(h) = j is found by a
linear solve on q-expansion coefficients, and degree-1 relations between two
covers by fiber matching over the branch points.
"""

from __future__ import annotations

from fractions import Fraction

from .exactalg import CyclotomicNumber as Cyc
from .exactalg import divisors, lcm
from .qseries import PuiseuxExpansion, j_expansion

INF = "inf"  # marker for the point at infinity in fiber bookkeeping


class RelateError(Exception):
    """No map of the requested shape exists (or the search cannot decide)."""


class PrecisionShort(RelateError):
    """The available q-expansion precision does not pin the answer down."""


def _is_zero(c) -> bool:
    return c.is_zero() if hasattr(c, "is_zero") else c == 0


class Polynomial:
    """Dense univariate polynomial; coefficient index = exponent."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while coeffs and _is_zero(coeffs[-1]):
            coeffs.pop()
        self.c = coeffs

    @staticmethod
    def const(value) -> "Polynomial":
        return Polynomial([value])

    @staticmethod
    def t(one=None) -> "Polynomial":
        one = Cyc.of(1) if one is None else one
        return Polynomial([one - one, one])

    def degree(self) -> int:
        return len(self.c) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.c

    def leading(self):
        assert self.c, "zero polynomial has no leading coefficient"
        return self.c[-1]

    def one_coeff(self):
        lead = self.leading()
        return lead * lead.inverse()

    def zero_coeff(self):
        return self.c[0] - self.c[0]

    def coeff(self, k):
        if 0 <= k < len(self.c):
            return self.c[k]
        assert self.c, "no coefficients to infer a zero from"
        return self.zero_coeff()

    def __add__(self, other):
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        return Polynomial(out)

    def __neg__(self):
        return Polynomial([-x for x in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return Polynomial([])
        out = [self.zero_coeff()] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if _is_zero(x):
                continue
            for j, y in enumerate(other.c):
                out[i + j] = out[i + j] + x * y
        return Polynomial(out)

    def scale(self, k):
        return Polynomial([x * k for x in self.c])

    def __pow__(self, e: int):
        assert e >= 0
        if e == 0:
            return Polynomial([self.one_coeff()])
        out = self
        for _ in range(e - 1):
            out = out * self
        return out

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(self.leading().inverse())

    def divmod(self, other):
        assert not other.is_zero(), "division by the zero polynomial"
        inv = other.leading().inverse()
        rem = list(self.c)
        n, m = len(rem), len(other.c)
        if n < m:
            return Polynomial([]), Polynomial(rem)
        quo = [None] * (n - m + 1)
        for k in range(n - m, -1, -1):
            q = rem[k + m - 1] * inv
            quo[k] = q
            if not _is_zero(q):
                for j, y in enumerate(other.c):
                    rem[k + j] = rem[k + j] - q * y
        return Polynomial(quo), Polynomial(rem[:m - 1])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def gcd(self, other) -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "Polynomial":
        return Polynomial([x * i for i, x in enumerate(self.c)][1:])

    def squarefree_parts(self):
        """Yun decomposition: list of (monic squarefree factor, multiplicity)."""
        assert not self.is_zero()
        f = self.monic()
        if f.degree() < 1:
            return []
        d = f.derivative()
        a = f.gcd(d)
        b, r = f.divmod(a)
        assert r.is_zero()
        c, r = d.divmod(a)
        assert r.is_zero()
        out = []
        i = 1
        while b.degree() > 0:
            d2 = c - b.derivative()
            p = b.gcd(d2)
            if p.degree() > 0:
                out.append((p, i))
            b, r = b.divmod(p)
            assert r.is_zero()
            c, r = d2.divmod(p)
            assert r.is_zero()
            i += 1
        return out

    def eval(self, x):
        if not self.c:
            return x - x
        acc = self.c[-1]
        for co in reversed(self.c[:-1]):
            acc = acc * x + co
        return acc

    def eval_series(self, s: PuiseuxExpansion) -> PuiseuxExpansion:
        assert self.c, "evaluating the zero polynomial needs a precision hint"
        acc = PuiseuxExpansion.constant(self.c[-1], s.den, s.prec)
        for co in reversed(self.c[:-1]):
            acc = acc * s + co
        return acc

    def compose(self, other: "Polynomial") -> "Polynomial":
        assert self.c
        acc = Polynomial([self.c[-1]])
        for co in reversed(self.c[:-1]):
            acc = acc * other + Polynomial([co])
        return acc

    def map_coeffs(self, fn) -> "Polynomial":
        return Polynomial([fn(x) for x in self.c])

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        if len(self.c) != len(other.c):
            return False
        return all(x == y for x, y in zip(self.c, other.c))

    def __repr__(self):
        return f"Polynomial({self.c!r})"

    def __str__(self):
        if not self.c:
            return "0"
        bits = []
        for i in range(len(self.c) - 1, -1, -1):
            x = self.c[i]
            if _is_zero(x):
                continue
            if i == 0:
                bits.append(f"{x}")
            elif i == 1:
                bits.append(f"{x}*t")
            else:
                bits.append(f"{x}*t^{i}")
        return " + ".join(bits)


def _field_tag(coeffs) -> str:
    n = 1
    for c in coeffs:
        if isinstance(c, Cyc):
            n = lcm(n, c.reduce().n)
    return "Q" if n == 1 else f"K{n}"


class RationalFunction:
    """num/den with gcd 1 and monic denominator."""

    __slots__ = ("num", "den", "field")

    def __init__(self, num: Polynomial, den: Polynomial, field=None):
        assert not den.is_zero(), "zero denominator"
        if not num.is_zero():
            g = num.gcd(den)
            if g.degree() > 0:
                num, r = num.divmod(g)
                assert r.is_zero()
                den, r = den.divmod(g)
                assert r.is_zero()
        inv = den.leading().inverse()
        self.num = num.scale(inv)
        self.den = den.scale(inv)
        self.field = field if field is not None else _field_tag(num.c + den.c)

    @staticmethod
    def of(value, field=None) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, Polynomial):
            num = value
            one = num.one_coeff() if not num.is_zero() else Cyc.of(1)
        else:
            num = Polynomial.const(Cyc.of(value))
            one = Cyc.of(1)
        return RationalFunction(num, Polynomial.const(one), field)

    @staticmethod
    def t(field=None) -> "RationalFunction":
        return RationalFunction(Polynomial.t(), Polynomial.const(Cyc.of(1)),
                                field)

    def degree(self) -> int:
        return max(self.num.degree(), self.den.degree())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction.of(other, self.field)

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den,
                                self.den * o.den, self.field)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, self.field)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den, self.field)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        assert not self.is_zero()
        return RationalFunction(self.den, self.num, self.field)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = RationalFunction.of(1, self.field)
        for _ in range(e):
            out = out * self
        return out

    def compose(self, other) -> "RationalFunction":
        """self(other(t))."""
        o = self._coerce(other)
        d = max(self.num.degree(), self.den.degree())
        one = Polynomial([o.den.one_coeff()])
        dpow = [one]
        npow = [one]
        for _ in range(d):
            dpow.append(dpow[-1] * o.den)
            npow.append(npow[-1] * o.num)
        top = Polynomial([])
        bot = Polynomial([])
        for i, co in enumerate(self.num.c):
            if not _is_zero(co):
                top = top + (npow[i] * dpow[d - i]).scale(co)
        for i, co in enumerate(self.den.c):
            if not _is_zero(co):
                bot = bot + (npow[i] * dpow[d - i]).scale(co)
        assert not bot.is_zero(), "composition lands in the pole locus"
        return RationalFunction(top, bot, self.field)

    def eval(self, x):
        """Value at a field element, or None at a pole."""
        b = self.den.eval(x)
        if _is_zero(b):
            return None
        return self.num.eval(x) * b.inverse()

    def eval_series(self, s: PuiseuxExpansion) -> PuiseuxExpansion:
        return self.num.eval_series(s) * self.den.eval_series(s).inverse()

    def map_coeffs(self, fn) -> "RationalFunction":
        return RationalFunction(self.num.map_coeffs(fn),
                                self.den.map_coeffs(fn))

    def galois(self, d: int) -> "RationalFunction":
        """Apply zeta -> zeta^d to every coefficient."""
        return self.map_coeffs(lambda c: c.galois(d))

    def coeff_conductor(self) -> int:
        n = 1
        for c in self.num.c + self.den.c:
            n = lcm(n, c.reduce().n)
        return n

    def __eq__(self, other):
        if not isinstance(other, (RationalFunction, Polynomial, int, Fraction,
                                  Cyc)):
            return NotImplemented
        o = self._coerce(other)
        return self.num == o.num and self.den == o.den

    def __repr__(self):
        if self.den.degree() == 0:
            return f"({self.num})"
        return f"({self.num}) / ({self.den})"

    def to_json(self) -> dict:
        return {"field": self.field,
                "num": [c.to_json() for c in self.num.c],
                "den": [c.to_json() for c in self.den.c]}

    @staticmethod
    def from_json(data) -> "RationalFunction":
        num = Polynomial([Cyc.from_json(c) for c in data["num"]])
        den = Polynomial([Cyc.from_json(c) for c in data["den"]])
        return RationalFunction(num, den, data["field"])


# ---------------------------------------------------------------------------
# parsing table entries like "(t^3 + 24t^2 + 192t + 512)/(t + 24)"


def _tokens(s: str):
    out = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            out.append(("int", int(s[i:j])))
            i = j
        elif ch in "t^*/+-()":
            out.append((ch, None))
            i += 1
        else:
            raise ValueError(f"unexpected character {ch!r}")
    return out


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind=None):
        tok = self.toks[self.i]
        assert kind is None or tok[0] == kind, f"expected {kind}, got {tok}"
        self.i += 1
        return tok

    def expr(self) -> RationalFunction:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        out = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            out = out - t if op == "-" else out + t
        return out

    def term(self) -> RationalFunction:
        out = self.factor()
        while True:
            nxt = self.peek()
            if nxt == "*":
                self.take()
                out = out * self.factor()
            elif nxt == "/":
                self.take()
                out = out / self.factor()
            elif nxt in ("int", "t", "("):
                out = out * self.factor()  # implicit multiplication
            else:
                return out

    def factor(self) -> RationalFunction:
        base = self.base()
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            e = self.take("int")[1]
            base = base ** (-e if neg else e)
        return base

    def base(self) -> RationalFunction:
        nxt = self.peek()
        if nxt == "int":
            return RationalFunction.of(self.take()[1])
        if nxt == "t":
            self.take()
            return RationalFunction.t()
        if nxt == "(":
            self.take()
            out = self.expr()
            self.take(")")
            return out
        if nxt == "-":
            self.take()
            return -self.factor()
        raise ValueError(f"unexpected token {nxt}")


def parse_ratfun(s: str) -> RationalFunction:
    """Parse an expression in t: integers, ^, parentheses, implicit products."""
    p = _Parser(_tokens(s))
    out = p.expr()
    assert p.i == len(p.toks), "trailing input"
    return out


# ---------------------------------------------------------------------------
# degree-1 maps as matrices mod scalars


class ProjectiveTransform:
    """2x2 matrix mod scalars; acts on t as (a*t + b)/(c*t + d)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        a, b, c, d = (x if isinstance(x, Cyc) else Cyc.of(x)
                      for x in (a, b, c, d))
        det = a * d - b * c
        assert not det.is_zero(), "singular matrix"
        for x in (a, b, c, d):
            if not x.is_zero():
                inv = x.inverse()
                break
        self.a, self.b, self.c, self.d = ((y * inv).reduce()
                                          for y in (a, b, c, d))

    def entries(self):
        return self.a, self.b, self.c, self.d

    def as_ratfun(self, field=None) -> RationalFunction:
        return RationalFunction(Polynomial([self.b, self.a]),
                                Polynomial([self.d, self.c]), field)

    def __call__(self, x):
        """Image of a point (a field element or INF)."""
        if isinstance(x, str):
            assert x == INF
            if self.c.is_zero():
                return INF
            return self.a * self.c.inverse()
        x = x if isinstance(x, Cyc) else Cyc.of(x)
        bot = self.c * x + self.d
        if bot.is_zero():
            return INF
        return (self.a * x + self.b) * bot.inverse()

    def compose(self, other: "ProjectiveTransform") -> "ProjectiveTransform":
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return ProjectiveTransform(a * e + b * g, a * f + b * h,
                                   c * e + d * g, c * f + d * h)

    def inverse(self) -> "ProjectiveTransform":
        return ProjectiveTransform(self.d, -self.b, -self.c, self.a)

    def is_identity(self) -> bool:
        return (self.b.is_zero() and self.c.is_zero()
                and (self.a - self.d).is_zero())

    def __eq__(self, other):
        if not isinstance(other, ProjectiveTransform):
            return NotImplemented
        return all((x - y).is_zero()
                   for x, y in zip(self.entries(), other.entries()))

    def __repr__(self):
        return (f"ProjectiveTransform({self.a!r}, {self.b!r}, "
                f"{self.c!r}, {self.d!r})")


# ---------------------------------------------------------------------------
# linear algebra over the coefficient field


def nullspace(rows: list) -> list:
    """Basis of the right nullspace, by fraction-free elimination.

    Bareiss style: each update is a two-term cross product divided by the
    previous pivot, which keeps intermediate entries the size of minors.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    mat = [list(r) for r in rows]
    piv_cols = []
    prev = None
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if not _is_zero(mat[i][col]):
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        piv = mat[r][col]
        for i in range(len(mat)):
            if i == r or _is_zero(mat[i][col]):
                continue
            fac = mat[i][col]
            row = mat[i]
            for j in range(ncols):
                val = row[j] * piv - fac * mat[r][j]
                if prev is not None:
                    val = val / prev
                row[j] = val
        piv_cols.append(col)
        prev = piv
        r += 1
        if r == len(mat):
            break
    free_cols = [j for j in range(ncols) if j not in piv_cols]
    basis = []
    for fc in free_cols:
        vec = [Cyc.of(0)] * ncols
        vec[fc] = Cyc.of(1)
        for i in range(len(piv_cols) - 1, -1, -1):
            pc = piv_cols[i]
            s = Cyc.of(0)
            for j in range(pc + 1, ncols):
                if not _is_zero(vec[j]) and not _is_zero(mat[i][j]):
                    s = s + mat[i][j] * vec[j]
            vec[pc] = (-s * mat[i][pc].inverse()).reduce()
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# recovering pi with pi(h) = j


def relate_to_j(h, degree: int, verify_to: int = 30):
    """The rational map pi of the given degree with pi(h) = j.

    Solves the homogeneous linear system in the 2*degree + 2 coefficients of
    num and den given by matching q-expansions, then checks the residual
    keeps vanishing well past the solve window.  h may carry an expansion()
    method or be a plain Puiseux series.  Raises PrecisionShort when more
    precision could still settle the question, RelateError when no map of
    this degree exists.
    """
    assert degree >= 1
    expandable = hasattr(h, "expansion")
    width = getattr(h, "width", None)
    if width is None:
        series0 = h.expansion(2) if expandable else h
        width = int(Fraction(-1) / series0.valuation())
    prec = (degree + 12 + width - 1) // width + 2
    for _ in range(4):
        series = h.expansion(prec) if expandable else h
        pi = _relate_solve(series, degree)
        if pi is not None:
            break
        if not expandable:
            raise PrecisionShort("series input is too short to decide")
        prec *= 2
    else:
        raise PrecisionShort(f"nullspace still not 1-dimensional at {prec}")
    if expandable and not verify_residual(pi, h, upto=verify_to):
        raise RelateError(f"solution fails exactness past q^{verify_to}")
    return pi


def _relate_solve(series: PuiseuxExpansion, degree: int):
    jq = j_expansion(int(series.precision()) + 2)
    hpow = [PuiseuxExpansion.constant(Cyc.of(1), series.den, series.prec)]
    for _ in range(degree):
        hpow.append(hpow[-1] * series)
    jh = [jq * p for p in hpow]
    lo = min(p.valuation() for p in hpow + jh)
    hi = min(p.precision() for p in hpow + jh)
    rows = []
    e = lo
    step = Fraction(1, series.den)
    while e < hi:
        row = ([p.coeff(e) for p in hpow]
               + [-(q.coeff(e)) for q in jh])
        if any(not c.is_zero() for c in row):
            rows.append(row)
        e += step
    if len(rows) < 2 * degree + 4:
        return None
    basis = nullspace(rows)
    if not basis:
        raise RelateError(f"no degree-{degree} map relates this series to j")
    if len(basis) > 1:
        return None  # underdetermined: more precision needed
    vec = basis[0]
    num = Polynomial(vec[:degree + 1])
    den = Polynomial(vec[degree + 1:])
    if den.is_zero():
        raise RelateError("solution is degenerate; wrong degree")
    return RationalFunction(num, den)


def verify_residual(pi: RationalFunction, h, upto: int = 30) -> bool:
    """pi(h) - j = O(q^upto), coefficient by coefficient, exactly."""
    width = getattr(h, "width", 1)
    extra = pi.degree() // width + 3
    series = h.expansion(upto + extra) if hasattr(h, "expansion") else h
    lhs = pi.eval_series(series)
    rhs = j_expansion(int(lhs.precision()) + 1)
    diff = lhs - rhs
    if diff.is_zero():
        return True
    return diff.valuation() >= upto


# ---------------------------------------------------------------------------
# decomposition pi = J o u


def decompose(pi: RationalFunction, u: RationalFunction) -> RationalFunction:
    """The J with pi = J(u), found by a linear solve; raises RelateError."""
    dp, du = pi.degree(), u.degree()
    assert du >= 1 and not u.num.is_zero()
    if dp % du:
        raise RelateError("degree of u does not divide degree of pi")
    d = dp // du
    one = Polynomial([u.den.one_coeff()])
    dpow = [one]
    npow = [one]
    for _ in range(d):
        dpow.append(dpow[-1] * u.den)
        npow.append(npow[-1] * u.num)
    terms = [npow[i] * dpow[d - i] for i in range(d + 1)]
    lhs = [t * pi.den for t in terms]
    rhs = [t * pi.num for t in terms]
    deg = max(q.degree() for q in lhs + rhs)
    zero = Cyc.of(0)
    rows = []
    for k in range(deg + 1):
        rows.append([q.coeff(k) if k <= q.degree() else zero for q in lhs]
                    + [-(q.coeff(k)) if k <= q.degree() else zero
                       for q in rhs])
    for vec in nullspace(rows):
        num = Polynomial(vec[:d + 1])
        den = Polynomial(vec[d + 1:])
        if den.is_zero():
            continue
        J = RationalFunction(num, den)
        if J.compose(u) == pi:
            return J
    raise RelateError("pi does not factor through u")


# ---------------------------------------------------------------------------
# root finding within the coefficient field


def _rational_roots(poly: Polynomial):
    """All rational roots, by the usual divisor bound on p/q (complete)."""
    den = 1
    for c in poly.c:
        assert c.is_rational()
        den = lcm(den, c.as_fraction().denominator)
    ints = [int(c.as_fraction() * den) for c in poly.c]
    stripped = 0
    while ints and ints[0] == 0:
        ints.pop(0)
        stripped += 1
    roots = [Fraction(0)] if stripped else []
    if not ints:
        return roots
    a0, an = abs(ints[0]), abs(ints[-1])
    for p in divisors(a0):
        for q in divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand not in roots and poly.eval(Cyc.of(cand)).is_zero():
                    roots.append(cand)
    return roots


def _unit_pool(conductor: int):
    """The roots of unity available in the conductor's cyclotomic field."""
    m = conductor if conductor % 2 == 0 else 2 * conductor
    return [Cyc.zeta(m, k).reduce() for k in range(m)]


def field_roots(poly: Polynomial) -> list:
    """Roots inside the coefficient field that the search can reach.

    Complete for rational coefficients and for linear factors; over a proper
    cyclotomic field it additionally scans rational multiples of the roots
    of unity, which is a heuristic rather than a full factorization.
    """
    poly = Polynomial([c.reduce() for c in poly.c])
    if poly.degree() < 1:
        return []
    roots = []

    def add(r):
        r = r if isinstance(r, Cyc) else Cyc.of(r)
        if poly.eval(r).is_zero() and not any((r - s).is_zero()
                                              for s in roots):
            roots.append(r.reduce())

    cond = 1
    for c in poly.c:
        cond = lcm(cond, c.n)
    if all(c.is_rational() for c in poly.c):
        for r in _rational_roots(poly):
            add(r)
    for part, _ in poly.squarefree_parts():
        if part.degree() == 1:
            add(-part.c[0] * part.c[1].inverse())
    if cond > 1:
        # q*u is a root iff q is a rational root of the u-rescaled polynomial
        for u in _unit_pool(cond):
            scaled = Polynomial([(poly.c[i] * u ** i).reduce()
                                 for i in range(len(poly.c))])
            if all(c.is_rational() for c in scaled.c):
                for q in _rational_roots(scaled):
                    add(Cyc.of(q) * u)
    return roots


# ---------------------------------------------------------------------------
# solving p1 = p2 o g for degree-1 g


def _affine_solutions(p1: RationalFunction, p2: RationalFunction):
    """All g with p1 = p2 o g when both maps are polynomials.

    A polynomial's only pole is at infinity, so g fixes infinity and is
    affine, g = a*t + b.  Depressing both polynomials forces b, and a
    satisfies one binomial condition per coefficient; when the gcd of those
    conditions has degree 0 no solution exists over any field extension,
    which makes the empty answer a certificate.
    """
    n = p1.degree()
    f1, f2 = p1.num, p2.num
    ninv = Cyc.of(Fraction(1, n))
    one = Cyc.of(1)
    s1 = f1.c[n - 1] * f1.c[n].inverse() * ninv
    s2 = f2.c[n - 1] * f2.c[n].inverse() * ninv
    g1 = f1.compose(Polynomial([-s1, one]))
    g2 = f2.compose(Polynomial([-s2, one]))
    # solve g1(t) = g2(a*t), coefficientwise g2_k a^k = g1_k
    zero = Cyc.of(0)
    G = Polynomial([])
    for k in range(n + 1):
        c1, c2 = g1.coeff(k), g2.coeff(k)
        if c1.is_zero() and c2.is_zero():
            continue
        cond = (Polynomial([c2 - c1]) if k == 0
                else Polynomial([-c1] + [zero] * (k - 1) + [c2]))
        G = cond if G.is_zero() else G.gcd(cond)
    if G.degree() == 0:
        return []  # incompatible coefficient supports: empty over Qbar
    out = []
    for a in field_roots(G):
        if a.is_zero():
            continue
        b = a * s1 - s2
        g = ProjectiveTransform(a, b, zero, one)
        if p2.compose(g.as_ratfun()) == p1:
            out.append(g)
    return out


def _fiber(p: RationalFunction, y):
    """Found points of the fiber over y with multiplicity, plus residue.

    Returns (points, leftovers): points is a list of (point, multiplicity)
    with point a field element or INF; leftovers is a list of (degree,
    multiplicity) for factors whose roots were not found.
    """
    n = p.degree()
    if isinstance(y, str):
        assert y == INF
        poly = p.den
    else:
        yc = y if isinstance(y, Cyc) else Cyc.of(y)
        poly = p.num - p.den.scale(yc)
    points = []
    leftovers = []
    if poly.degree() < n:
        points.append((INF, n - poly.degree()))
    if poly.degree() >= 1:
        for part, mult in poly.squarefree_parts():
            found = field_roots(part)
            for r in found:
                points.append((r, mult))
            rest = part.degree() - len(found)
            if rest:
                leftovers.append((rest, mult))
    return points, leftovers


def _permutations(xs):
    if not xs:
        yield []
        return
    for i in range(len(xs)):
        for rest in _permutations(xs[:i] + xs[i + 1:]):
            yield [xs[i]] + rest


def _condition_row(x, ximg):
    """Linear condition on (a, b, c, d) for g(x) = ximg."""
    zero, one = Cyc.of(0), Cyc.of(1)
    x_inf = isinstance(x, str)
    y_inf = isinstance(ximg, str)
    if x_inf and y_inf:
        return [zero, zero, one, zero]
    if x_inf:
        return [one, zero, -ximg, zero]
    if y_inf:
        return [zero, zero, x, one]
    return [x, one, -(ximg * x), -ximg]


def _pencil_solutions(p1, p2, v1, v2):
    """Solve p1 = p2 o g over the pencil g = v1 + lambda*v2.

    The matrix entries become degree-1 polynomials in lambda; clearing
    denominators in p2(g(t)) = p1(t) gives one polynomial condition in
    lambda per power of t, and their gcd carries the solutions.
    """
    lam = Polynomial([Cyc.of(0), Cyc.of(1)])
    ent = [Polynomial([a]) + lam.scale(b) for a, b in zip(v1, v2)]
    gn = Polynomial([ent[1], ent[0]])   # a*t + b with lambda-poly entries
    gd = Polynomial([ent[3], ent[2]])
    n = p2.degree()
    lift = lambda q: q.map_coeffs(lambda c: Polynomial([c]))
    N1, D1 = lift(p1.num), lift(p1.den)
    N2, D2 = lift(p2.num), lift(p2.den)
    one = Polynomial([Polynomial([Cyc.of(1)])])
    gd_p = [one]
    gn_p = [one]
    for _ in range(n):
        gd_p.append(gd_p[-1] * gd)
        gn_p.append(gn_p[-1] * gn)
    comp_n = Polynomial([])
    comp_d = Polynomial([])
    for i in range(n + 1):
        term = gn_p[i] * gd_p[n - i]
        if i <= N2.degree():
            comp_n = comp_n + term * Polynomial([N2.c[i]])
        if i <= D2.degree():
            comp_d = comp_d + term * Polynomial([D2.c[i]])
    ident = N1 * comp_d - D1 * comp_n
    conds = [c for c in ident.c if not c.is_zero()]
    if not conds:
        raise RelateError("a whole pencil of transforms matched; degenerate")
    g = conds[0]
    for c in conds[1:]:
        g = g.gcd(c)
    out = []
    for lam0 in field_roots(g):
        vals = [e.eval(lam0) for e in ent]
        if not (vals[0] * vals[3] - vals[1] * vals[2]).is_zero():
            out.append(ProjectiveTransform(*vals))
    # lambda = infinity is the one member the affine parameter misses
    if not (v2[0] * v2[3] - v2[1] * v2[2]).is_zero():
        out.append(ProjectiveTransform(*v2))
    return out


def mobius_solve(p1: RationalFunction, p2: RationalFunction,
                 anchors=(INF, 0, 1728)) -> list:
    """All degree-1 g over the coefficient field with p1 = p2 o g.

    Polynomial pairs go through the affine route, where the empty answer is
    certified over every extension.  Otherwise fibers over the anchor values
    (the branch triple of the j-line by default) are matched point by point:
    g must carry the fiber of p1 to the fiber of p2 preserving multiplicity
    and rationality, so mismatched counts certify emptiness whenever root
    finding was complete (rational coefficients, or every factor split).
    """
    n = p1.degree()
    assert n == p2.degree(), "degrees differ"
    if n == 0:
        raise RelateError("constant maps do not determine a transform")
    if n == 1:
        m1 = ProjectiveTransform(p1.num.coeff(1), p1.num.coeff(0),
                                 p1.den.coeff(1), p1.den.coeff(0))
        m2 = ProjectiveTransform(p2.num.coeff(1), p2.num.coeff(0),
                                 p2.den.coeff(1), p2.den.coeff(0))
        return [m2.inverse().compose(m1)]
    if p1.is_polynomial() and p2.is_polynomial():
        return _affine_solutions(p1, p2)
    rational = all(c.is_rational()
                   for c in p1.num.c + p1.den.c + p2.num.c + p2.den.c)
    matchings = []
    for y in anchors:
        pts1, left1 = _fiber(p1, y)
        pts2, left2 = _fiber(p2, y)
        certified = rational or (not left1 and not left2)
        mismatch = sorted(left1) != sorted(left2)
        by1: dict = {}
        by2: dict = {}
        for x, m in pts1:
            by1.setdefault(m, []).append(x)
        for x, m in pts2:
            by2.setdefault(m, []).append(x)
        if not mismatch:
            counts1 = sorted((m, len(xs)) for m, xs in by1.items())
            counts2 = sorted((m, len(xs)) for m, xs in by2.items())
            mismatch = counts1 != counts2
        if mismatch:
            if certified:
                return []
            raise RelateError("cannot certify emptiness over this field")
        matchings.append(sorted(((m, xs, by2[m]) for m, xs in by1.items()),
                                key=lambda triple: triple[0]))
    assignments = [[]]
    for fiber in matchings:
        for m, xs, ys in fiber:
            assignments = [old + list(zip(xs, perm))
                           for perm in _permutations(ys)
                           for old in assignments]
    found = []
    for pairs in assignments:
        rows = [_condition_row(x, ximg) for x, ximg in pairs]
        basis = nullspace(rows)
        if len(basis) == 1:
            v = basis[0]
            if (v[0] * v[3] - v[1] * v[2]).is_zero():
                continue
            cands = [ProjectiveTransform(*v)]
        elif len(basis) == 2:
            cands = _pencil_solutions(p1, p2, basis[0], basis[1])
        elif len(basis) > 2:
            raise RelateError("too few rational fiber points to pin the map")
        else:
            continue
        for g in cands:
            if g not in found and p2.compose(g.as_ratfun()) == p1:
                found.append(g)
    return found
