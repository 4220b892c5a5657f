"""Truncated Puiseux expansions in q^(1/w) with cyclotomic coefficients.

A series is a finite dict of exponent -> coefficient on the lattice (1/den)*Z
together with the exponent up to which the expansion is trusted.  All
operations track precision; nothing ever silently extends a series.
"""

from __future__ import annotations

from fractions import Fraction

from .exactalg import CyclotomicNumber as Cyc
from .exactalg import GaloisAutomorphism, lcm


def _as_cyc(x) -> Cyc:
    return x if isinstance(x, Cyc) else Cyc.of(Fraction(x))


class PrecisionError(ValueError):
    """Raised when an operation needs more terms than are available."""


class PuiseuxExpansion:
    """Exact truncated series sum c_k q^(k/den), known for k < prec."""

    __slots__ = ("den", "prec", "terms")

    def __init__(self, den: int, prec: int, terms: dict[int, Cyc]):
        assert den >= 1
        self.den = den
        self.prec = prec
        self.terms = {k: v for k, v in terms.items() if k < prec and v}

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(den: int, prec: int) -> "PuiseuxExpansion":
        return PuiseuxExpansion(den, prec, {})

    @staticmethod
    def monomial(exp: Fraction, coeff, den: int, prec: int) -> "PuiseuxExpansion":
        e = Fraction(exp)
        k = e * den
        assert k.denominator == 1, (exp, den)
        return PuiseuxExpansion(den, prec, {int(k): _as_cyc(coeff)})

    @staticmethod
    def constant(value, den: int, prec: int) -> "PuiseuxExpansion":
        return PuiseuxExpansion.monomial(Fraction(0), value, den, prec)

    @staticmethod
    def from_int_coeffs(coeffs: dict[int, int], prec: int) -> "PuiseuxExpansion":
        return PuiseuxExpansion(1, prec, {k: Cyc.of(v) for k, v in coeffs.items()})

    # -- basic structure ------------------------------------------------------

    def rebase(self, new_den: int) -> "PuiseuxExpansion":
        if new_den == self.den:
            return self
        assert new_den % self.den == 0
        f = new_den // self.den
        return PuiseuxExpansion(new_den, self.prec * f,
                                {k * f: v for k, v in self.terms.items()})

    def collapse_den(self, new_den: int) -> "PuiseuxExpansion":
        """Assert every exponent lies on the coarser lattice 1/new_den."""
        assert self.den % new_den == 0
        f = self.den // new_den
        if f == 1:
            return self
        assert all(k % f == 0 for k in self.terms), "exponents off the target lattice"
        return PuiseuxExpansion(new_den, self.prec // f,
                                {k // f: v for k, v in self.terms.items()})

    def _unify(self, other: "PuiseuxExpansion"):
        d = lcm(self.den, other.den)
        return self.rebase(d), other.rebase(d)

    def precision(self) -> Fraction:
        return Fraction(self.prec, self.den)

    def valuation(self) -> Fraction:
        """Order of the leading term; demands a nonzero known term."""
        if not self.terms:
            raise PrecisionError("series is zero to available precision")
        return Fraction(min(self.terms), self.den)

    def leading_coeff(self) -> Cyc:
        return self.terms[min(self.terms)]

    def coeff(self, exp) -> Cyc:
        e = Fraction(exp) * self.den
        if e.denominator != 1:
            return Cyc.of(0)
        k = int(e)
        if k >= self.prec:
            raise PrecisionError(f"coefficient q^{exp} beyond precision")
        return self.terms.get(k, Cyc.of(0))

    def constant_term(self) -> Cyc:
        return self.coeff(0)

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, prec: Fraction) -> "PuiseuxExpansion":
        p = Fraction(prec) * self.den
        assert p.denominator == 1
        p = int(p)
        assert p <= self.prec, "cannot extend precision by truncation"
        return PuiseuxExpansion(self.den, p, {k: v for k, v in self.terms.items() if k < p})

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Cyc)):
            other = PuiseuxExpansion.constant(other, self.den, self.prec)
        a, b = self._unify(other)
        p = min(a.prec, b.prec)
        out = dict(a.terms)
        for k, v in b.terms.items():
            w = out.get(k)
            out[k] = v if w is None else w + v
        return PuiseuxExpansion(a.den, p, out)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxExpansion(self.den, self.prec, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Cyc)):
            other = PuiseuxExpansion.constant(other, self.den, self.prec)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, coeff) -> "PuiseuxExpansion":
        c = _as_cyc(coeff)
        if not c:
            return PuiseuxExpansion.zero(self.den, self.prec)
        return PuiseuxExpansion(self.den, self.prec,
                                {k: v * c for k, v in self.terms.items()})

    def shift(self, exp) -> "PuiseuxExpansion":
        """Multiply by q^exp."""
        e = Fraction(exp)
        d = lcm(self.den, e.denominator)
        s = self.rebase(d)
        k0 = int(e * d)
        return PuiseuxExpansion(d, s.prec + k0,
                                {k + k0: v for k, v in s.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyc)):
            return self.scale(other)
        a, b = self._unify(other)
        if not a.terms or not b.terms:
            # precision of a product with an (apparent) zero
            va = min(a.terms) if a.terms else a.prec
            vb = min(b.terms) if b.terms else b.prec
            return PuiseuxExpansion.zero(a.den, min(a.prec + vb, b.prec + va))
        va, vb = min(a.terms), min(b.terms)
        p = min(a.prec + vb, b.prec + va)
        out: dict[int, Cyc] = {}
        for i, x in a.terms.items():
            for j, y in b.terms.items():
                k = i + j
                if k < p:
                    w = out.get(k)
                    prod = x * y
                    out[k] = prod if w is None else w + prod
        return PuiseuxExpansion(a.den, p, out)

    __rmul__ = __mul__

    def times_one_minus(self, exp, coeff) -> "PuiseuxExpansion":
        """Multiply by the binomial (1 - coeff*q^exp) without full convolution."""
        return self - self.shift(exp).scale(coeff).truncate(self.precision())

    def inverse(self) -> "PuiseuxExpansion":
        if not self.terms:
            raise PrecisionError("cannot invert a series that vanishes to precision")
        v = min(self.terms)
        lead = self.terms[v]
        li = lead.inverse()
        # write self = lead q^v (1 + x), invert the unit part by recursion
        x = (self.shift(Fraction(-v, self.den)).scale(li) - 1)
        n_terms = x.prec  # exponents now start at 1 on lattice 1/den
        inv_unit = PuiseuxExpansion.constant(1, x.den, x.prec)
        acc = PuiseuxExpansion.constant(1, x.den, x.prec)
        if x.terms:
            step = 0
            while True:
                acc = (acc * (-x)).truncate(Fraction(n_terms, x.den))
                if acc.is_zero():
                    break
                inv_unit = inv_unit + acc
                step += 1
                assert step <= n_terms + 1
        return inv_unit.scale(li).shift(Fraction(-v, self.den))

    def __pow__(self, k: int) -> "PuiseuxExpansion":
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return PuiseuxExpansion.constant(1, self.den, self.prec)
        out = None
        base = self
        while k:
            if k & 1:
                out = base if out is None else out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- coefficient maps -----------------------------------------------------

    def map_coeffs(self, f) -> "PuiseuxExpansion":
        return PuiseuxExpansion(self.den, self.prec,
                                {k: f(v) for k, v in self.terms.items()})

    def reduce_coeffs(self) -> "PuiseuxExpansion":
        return self.map_coeffs(lambda c: c.reduce())

    def coeff_conductor(self) -> int:
        n = 1
        for v in self.terms.values():
            n = lcm(n, v.reduce().n)
        return n

    # -- comparison -----------------------------------------------------------

    def agrees_with(self, other: "PuiseuxExpansion", upto=None) -> bool:
        a, b = self._unify(other)
        p = min(a.prec, b.prec)
        if upto is not None:
            p = min(p, int(Fraction(upto) * a.den))
        for k in set(a.terms) | set(b.terms):
            if k < p and a.terms.get(k, _ZERO) != b.terms.get(k, _ZERO):
                return False
        return True

    def __repr__(self):
        items = sorted(self.terms.items())[:6]
        body = " + ".join(f"({v})q^{Fraction(k, self.den)}" for k, v in items)
        more = " + ..." if len(self.terms) > 6 else ""
        return f"Series[{body}{more}; O(q^{Fraction(self.prec, self.den)})]"

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        terms = []
        for k in sorted(self.terms):
            c = self.terms[k].reduce()
            e = Fraction(k, self.den)
            terms.append([e.numerator, e.denominator, [str(x) for x in c.c], c.n])
        return {"width": self.den,
                "precision": [self.prec, self.den],
                "terms": terms}

    @staticmethod
    def from_json(data: dict) -> "PuiseuxExpansion":
        den = data["width"]
        pn, pd = data["precision"]
        prec = Fraction(pn, pd) * den
        assert prec.denominator == 1
        terms: dict[int, Cyc] = {}
        for num, d, vec, cond in data["terms"]:
            k = Fraction(num, d) * den
            assert k.denominator == 1
            terms[int(k)] = Cyc(cond, [Fraction(s) for s in vec])
        return PuiseuxExpansion(den, int(prec), terms)


_ZERO = Cyc.of(0)


def galois_on_series(series: PuiseuxExpansion, sigma) -> PuiseuxExpansion:
    """Apply a Galois automorphism to every coefficient (q is fixed)."""
    if isinstance(sigma, tuple):
        sigma = GaloisAutomorphism(*sigma)
    return series.map_coeffs(sigma)


# ---------------------------------------------------------------------------
# the elliptic modular function


def _eta_like(prec: int) -> list[int]:
    """Coefficients of prod_(n>=1) (1 - q^n) up to q^prec (Euler's series)."""
    out = [0] * (prec + 1)
    out[0] = 1
    # pentagonal number theorem
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > prec and g2 > prec:
            break
        s = 1 if k % 2 == 0 else -1
        if g1 <= prec:
            out[g1] += s
        if g2 <= prec:
            out[g2] += s
        k += 1
    return out


def _int_mul(a: list[int], b: list[int], prec: int) -> list[int]:
    out = [0] * (prec + 1)
    for i, x in enumerate(a):
        if x and i <= prec:
            top = prec - i
            for j, y in enumerate(b[: top + 1]):
                if y:
                    out[i + j] += x * y
    return out


def sigma_divisors(n: int, power: int) -> int:
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d**power
            e = n // d
            if e != d:
                s += e**power
        d += 1
    return s


def eisenstein4(prec: int) -> list[int]:
    return [1] + [240 * sigma_divisors(n, 3) for n in range(1, prec + 1)]


def delta_coeffs(prec: int) -> list[int]:
    """Coefficients of Delta/q = prod (1-q^n)^24 up to q^prec."""
    eta = _eta_like(prec)
    out = [1] + [0] * prec
    base = eta
    k = 24
    while k:
        if k & 1:
            out = _int_mul(out, base, prec)
        k >>= 1
        if k:
            base = _int_mul(base, base, prec)
    return out


def j_expansion(prec: int) -> PuiseuxExpansion:
    """q-expansion of j = E4^3/Delta through q^(prec-1)."""
    n = prec + 1
    e4 = eisenstein4(n)
    e43 = _int_mul(_int_mul(e4, e4, n), e4, n)
    dq = delta_coeffs(n)  # Delta/q, unit constant term
    # invert the unit part over Z by recursion
    inv = [0] * (n + 1)
    inv[0] = 1
    for k in range(1, n + 1):
        s = 0
        for i in range(1, k + 1):
            if i < len(dq) and dq[i]:
                s += dq[i] * inv[k - i]
        inv[k] = -s
    jq = _int_mul(e43, inv, n)  # j*q
    terms = {k - 1: Cyc.of(c) for k, c in enumerate(jq) if c and k - 1 < prec}
    return PuiseuxExpansion(1, prec, terms)
