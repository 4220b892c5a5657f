"""Exact arithmetic core: cyclotomic numbers in power basis and residue matrices.

Everything downstream (q-expansions, divisor solves, twists) runs on the types
in this module.  Rationals are fractions.Fraction throughout; a cyclotomic
number of conductor n is stored on the power basis 1, z, ..., z^(phi(n)-1)
modulo the n-th cyclotomic polynomial, where z = exp(2*pi*i/n).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


# ---------------------------------------------------------------------------
# small number-theory helpers


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; inputs here are tiny (conductors, moduli)."""
    assert n >= 1
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n).items():
        phi *= (p - 1) * p ** (e - 1)
    return phi


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def crt(residues: list[int], moduli: list[int]) -> int:
    """Chinese remainder for pairwise coprime moduli."""
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        t = ((r - x) * pow(m, -1, q)) % q
        x += m * t
        m *= q
    return x % m


# ---------------------------------------------------------------------------
# dense polynomial helpers over Fraction (low degree first)


def poly_trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return poly_trim(out)


def poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = Fraction(1, 1) / b[-1]
    while True:
        poly_trim(a)
        if len(a) < len(b):
            break
        k = len(a) - len(b)
        c = a[-1] * inv
        q[k] = c
        for i in range(len(b)):
            a[k + i] -= c * b[i]
        a.pop()
    return poly_trim(q), poly_trim(a)


def poly_gcdex(a: list, b: list) -> tuple[list, list, list]:
    """Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = [Fraction(x) for x in a], [Fraction(x) for x in b]
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while poly_trim(list(r1)):
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_trim([x - y for x, y in zip_pad(s0, poly_mul(q, s1))])
        t0, t1 = t1, poly_trim([x - y for x, y in zip_pad(t0, poly_mul(q, t1))])
    if r0:
        lead = r0[-1]
        r0 = [x / lead for x in r0]
        s0 = [x / lead for x in s0]
        t0 = [x / lead for x in t0]
    return r0, s0, t0


def zip_pad(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low first) of the n-th cyclotomic polynomial.

    Computed by dividing x^n - 1 by the product of all lower-level factors;
    integer arithmetic is exact at every step.
    """
    assert n >= 1
    xn1 = [-1] + [0] * (n - 1) + [1]
    den = [1]
    for d in divisors(n)[:-1]:
        den = [int(c) for c in poly_mul(den, list(cyclotomic_polynomial(d)))]
    q, r = poly_divmod([Fraction(c) for c in xn1], [Fraction(c) for c in den])
    assert not r, "cyclotomic division must be exact"
    assert all(c.denominator == 1 for c in q)
    return tuple(int(c) for c in q)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """z^k on the power basis of conductor n, for k = 0 .. 2*phi(n)-2.

    Also long enough to cover k < n so roots of unity index directly.
    """
    phi = euler_phi(n)
    top = max(n, 2 * phi - 1)
    mod = cyclotomic_polynomial(n)
    red = [Fraction(-c, mod[-1]) for c in mod[:-1]]  # x^phi = sum red[i] x^i
    rows: list[tuple[Fraction, ...]] = []
    cur = [Fraction(0)] * phi
    cur[0] = Fraction(1)
    for _ in range(top):
        rows.append(tuple(cur))
        lead = cur[phi - 1]
        nxt = [Fraction(0)] + cur[: phi - 1]
        if lead:
            nxt = [a + lead * b for a, b in zip(nxt, red)]
        cur = nxt
    return tuple(rows)


@lru_cache(maxsize=None)
def _galois_table(n: int, d: int) -> tuple[tuple[Fraction, ...], ...]:
    """Images of basis powers z^i under z -> z^d, as basis vectors."""
    phi = euler_phi(n)
    tab = _power_table(n)
    return tuple(tab[(i * d) % n] for i in range(phi))


@lru_cache(maxsize=None)
def _lift_table(d: int, n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Basis of conductor d rewritten in conductor n (d | n): columns z_d^j."""
    assert n % d == 0
    step = n // d
    tab = _power_table(n)
    return tuple(tab[(j * step) % n] for j in range(euler_phi(d)))


def _solve_square(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve a small dense exact linear system; None if singular/inconsistent."""
    m = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    n = len(m)
    cols = len(m[0]) - 1
    piv_rows = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, n) if m[i][c]), None)
        if piv is None:
            return None
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_rows.append(c)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if m[i][cols]:
            return None
    sol = [Fraction(0)] * cols
    for i, c in enumerate(piv_rows):
        sol[c] = m[i][cols]
    return sol


@lru_cache(maxsize=None)
def _reduce_solver(n: int, d: int):
    """Pseudo-inverse data for rewriting conductor-n vectors in conductor d."""
    cols = _lift_table(d, n)
    phin, phid = euler_phi(n), euler_phi(d)
    # normal equations: (B^T B) c = B^T v
    btb = [[sum(cols[i][k] * cols[j][k] for k in range(phin)) for j in range(phid)]
           for i in range(phid)]
    return cols, btb


class CyclotomicNumber:
    """Element of Q(zeta_n) on the power basis, immutable."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs):
        self.n = n
        phi = euler_phi(n)
        c = list(coeffs)
        assert len(c) == phi, (n, len(c))
        self.c = tuple(Fraction(x) for x in c)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def of(value, n: int = 1) -> "CyclotomicNumber":
        if isinstance(value, CyclotomicNumber):
            return value if n == 1 else value.lift(lcm(value.n, n))
        phi = euler_phi(n)
        c = [Fraction(value)] + [Fraction(0)] * (phi - 1)
        return CyclotomicNumber(n, c)

    @staticmethod
    def zero(n: int = 1) -> "CyclotomicNumber":
        return CyclotomicNumber.of(0, n)

    @staticmethod
    def one(n: int = 1) -> "CyclotomicNumber":
        return CyclotomicNumber.of(1, n)

    @staticmethod
    def zeta(n: int, k: int = 1) -> "CyclotomicNumber":
        """zeta_n^k, reduced to the power basis."""
        return CyclotomicNumber(n, _power_table(n)[k % n])

    # -- structure ----------------------------------------------------------

    def lift(self, m: int) -> "CyclotomicNumber":
        """Rewrite in conductor m, which must be a multiple of n."""
        if m == self.n:
            return self
        assert m % self.n == 0, (self.n, m)
        cols = _lift_table(self.n, m)
        phim = euler_phi(m)
        out = [Fraction(0)] * phim
        for j, cj in enumerate(self.c):
            if cj:
                col = cols[j]
                for k in range(phim):
                    if col[k]:
                        out[k] += cj * col[k]
        return CyclotomicNumber(m, out)

    def try_conductor(self, d: int) -> "CyclotomicNumber | None":
        """Rewrite in conductor d (d | n) if the element lies there."""
        if d == self.n:
            return self
        assert self.n % d == 0
        cols, btb = _reduce_solver(self.n, d)
        phin, phid = euler_phi(self.n), euler_phi(d)
        rhs = [sum(cols[i][k] * self.c[k] for k in range(phin)) for i in range(phid)]
        sol = _solve_square([row[:] for row in btb], rhs)
        if sol is None:
            return None
        # verify: the normal equations can have spurious solutions only if
        # the candidate fails to reproduce the vector exactly
        for k in range(phin):
            if sum(cols[j][k] * sol[j] for j in range(phid)) != self.c[k]:
                return None
        return CyclotomicNumber(d, sol)

    def reduce(self) -> "CyclotomicNumber":
        """Smallest-conductor representation (skipping conductors 2 mod 4)."""
        for d in divisors(self.n):
            if d % 4 == 2 and d != self.n:
                continue
            got = self.try_conductor(d)
            if got is not None:
                return got
        return self

    def galois(self, d: int) -> "CyclotomicNumber":
        """Apply zeta -> zeta^d; requires gcd(d, n) = 1."""
        d %= self.n
        if self.n == 1 or d == 1:
            return self
        assert gcd(d, self.n) == 1, (d, self.n)
        tab = _galois_table(self.n, d)
        phi = euler_phi(self.n)
        out = [Fraction(0)] * phi
        for i, ci in enumerate(self.c):
            if ci:
                row = tab[i]
                for k in range(phi):
                    if row[k]:
                        out[k] += ci * row[k]
        return CyclotomicNumber(self.n, out)

    # -- predicates / accessors ---------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def as_fraction(self) -> Fraction:
        assert self.is_rational(), self
        return self.c[0]

    # -- arithmetic ----------------------------------------------------------

    def _pair(self, other):
        if not isinstance(other, CyclotomicNumber):
            other = CyclotomicNumber.of(other, 1)
        if self.n == other.n:
            return self, other
        m = lcm(self.n, other.n)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        a, b = self._pair(other)
        return CyclotomicNumber(a.n, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.n, [-x for x in self.c])

    def __sub__(self, other):
        a, b = self._pair(other)
        return CyclotomicNumber(a.n, [x - y for x, y in zip(a.c, b.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.n, [x * other for x in self.c])
        if other.is_rational():
            f = other.c[0]
            return CyclotomicNumber(self.n, [x * f for x in self.c])
        if self.is_rational():
            f = self.c[0]
            return CyclotomicNumber(other.n, [f * x for x in other.c])
        a, b = self._pair(other)
        phi = len(a.c)
        conv = [Fraction(0)] * (2 * phi - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        conv[i + j] += x * y
        tab = _power_table(a.n)
        out = list(conv[:phi])
        for k in range(phi, 2 * phi - 1):
            ck = conv[k]
            if ck:
                row = tab[k]
                for t in range(phi):
                    if row[t]:
                        out[t] += ck * row[t]
        return CyclotomicNumber(a.n, out)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        assert not self.is_zero(), "division by zero"
        if self.is_rational():
            return CyclotomicNumber.of(1 / self.c[0], self.n)
        mod = [Fraction(c) for c in cyclotomic_polynomial(self.n)]
        g, s, _ = poly_gcdex(list(self.c), mod)
        assert len(g) == 1, "element must be a unit mod the cyclotomic polynomial"
        inv = [x / g[0] for x in s]
        _, r = poly_divmod(inv, mod)
        r += [Fraction(0)] * (euler_phi(self.n) - len(r))
        return CyclotomicNumber(self.n, r)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return CyclotomicNumber(self.n, [x / f for x in self.c])
        a, b = self._pair(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = CyclotomicNumber.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.c[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._pair(other)
        return a.c == b.c

    def __hash__(self):
        r = self.reduce()
        return hash((r.n, r.c))

    def __repr__(self):
        if self.is_rational():
            return f"Cyc({self.c[0]})"
        terms = [f"{c}*z{self.n}^{i}" for i, c in enumerate(self.c) if c]
        return "Cyc(" + " + ".join(terms) + ")"

    # -- serialization -------------------------------------------------------

    def to_json(self) -> list:
        return [self.n, [str(x) for x in self.c]]

    @staticmethod
    def from_json(data) -> "CyclotomicNumber":
        n, coeffs = data
        return CyclotomicNumber(n, [Fraction(s) for s in coeffs])


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class GaloisAutomorphism:
    """sigma_d on Q(zeta_n): zeta -> zeta^d, applied coefficient-wise elsewhere."""

    __slots__ = ("n", "d")

    def __init__(self, n: int, d: int):
        d %= n
        if n > 1:
            assert gcd(d, n) == 1, (n, d)
        self.n, self.d = n, d if n > 1 else 0

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            return x
        assert isinstance(x, CyclotomicNumber)
        if x.n == self.n:
            return x.galois(self.d)
        m = lcm(x.n, self.n)
        # extend d to conductor m, acting trivially on the part coprime to n
        dm = self.extend(m).d
        return x.lift(m).galois(dm)

    def extend(self, m: int) -> "GaloisAutomorphism":
        """Extension to conductor m (n | m) fixing zeta_(m/n') primes away from n."""
        assert m % self.n == 0
        if m == self.n:
            return self
        fac_m = factorize(m)
        res, mods = [], []
        for p, e in fac_m.items():
            q = p**e
            if self.n % p == 0:
                res.append(self.d % q)
            else:
                res.append(1 % q)
            mods.append(q)
        return GaloisAutomorphism(m, crt(res, mods))

    def compose(self, other: "GaloisAutomorphism") -> "GaloisAutomorphism":
        m = lcm(self.n, other.n)
        a, b = self.extend(m), other.extend(m)
        return GaloisAutomorphism(m, (a.d * b.d) % m)

    def inverse(self) -> "GaloisAutomorphism":
        if self.n == 1:
            return self
        return GaloisAutomorphism(self.n, pow(self.d, -1, self.n))

    def __eq__(self, other):
        return (self.n, self.d) == (other.n, other.d)

    def __hash__(self):
        return hash((self.n, self.d))

    def __repr__(self):
        return f"sigma_{self.d} mod {self.n}"


def galois_group(n: int) -> list[GaloisAutomorphism]:
    if n <= 2:
        return [GaloisAutomorphism(n, 1 % n if n > 1 else 0)]
    return [GaloisAutomorphism(n, d) for d in range(1, n) if gcd(d, n) == 1]


# ---------------------------------------------------------------------------
# residue matrices


class Mat2:
    """2x2 matrix over Z/n with invertible determinant."""

    __slots__ = ("n", "a", "b", "c", "d")

    def __init__(self, n: int, a: int, b: int, c: int, d: int, check: bool = True):
        self.n = n
        self.a, self.b, self.c, self.d = a % n, b % n, c % n, d % n
        if check and n > 1:
            assert gcd(self.det(), n) == 1, f"det not a unit mod {n}"

    @staticmethod
    def identity(n: int) -> "Mat2":
        return Mat2(n, 1, 0, 0, 1, check=False)

    @staticmethod
    def from_int(mat, n: int) -> "Mat2":
        (a, b), (c, d) = mat
        return Mat2(n, a, b, c, d)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.n

    def __mul__(self, o: "Mat2") -> "Mat2":
        assert self.n == o.n
        n = self.n
        return Mat2(
            n,
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
            check=False,
        )

    def inverse(self) -> "Mat2":
        di = pow(self.det(), -1, self.n) if self.n > 1 else 0
        return Mat2(self.n, self.d * di, -self.b * di, -self.c * di, self.a * di,
                    check=False)

    def __pow__(self, k: int) -> "Mat2":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Mat2.identity(self.n), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __neg__(self) -> "Mat2":
        return Mat2(self.n, -self.a, -self.b, -self.c, -self.d, check=False)

    def order(self) -> int:
        k, m = 1, self
        ident = Mat2.identity(self.n)
        while m != ident:
            m = m * self
            k += 1
            assert k <= self.n**4
        return k

    def __eq__(self, other):
        return (self.n, self.entries()) == (other.n, other.entries())

    def __hash__(self):
        return hash((self.n, self.entries()))

    def __lt__(self, other):
        return self.entries() < other.entries()

    def __repr__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]] mod {self.n}"


def sl2_lift(m: Mat2) -> tuple[tuple[int, int], tuple[int, int]]:
    """Integer matrix of determinant 1 reducing to m (det m must be 1 mod n)."""
    n = m.n
    if n == 1:
        return ((1, 0), (0, 1))
    assert m.det() == 1 % n, "only determinant-1 residues lift"
    a, b, c, d = m.entries()
    # adjust bottom row to a coprime pair congruent mod n
    c1, d1 = None, None
    for s in range(0, 4 * n + 1):
        for cc in (c + s * n, c - s * n):
            for t in range(0, 4 * n + 1):
                for dd in (d + t * n, d - t * n):
                    if gcd(cc, dd) == 1:
                        c1, d1 = cc, dd
                        break
                if d1 is not None:
                    break
            if d1 is not None:
                break
        if d1 is not None:
            break
    assert d1 is not None
    # base solution of a0*d1 - b0*c1 = 1
    g, x, y = ext_gcd(d1, c1)
    assert g == 1
    a0, b0 = x, -y
    # shift (a0,b0) by k*(c1,d1) to hit the required residues mod n
    res, mods = [], []
    for p, e in factorize(n).items():
        q = p**e
        if c1 % p:
            res.append(((a - a0) * pow(c1, -1, q)) % q)
        else:
            res.append(((b - b0) * pow(d1, -1, q)) % q)
        mods.append(q)
    k = crt(res, mods)
    a1, b1 = a0 + k * c1, b0 + k * d1
    assert a1 * d1 - b1 * c1 == 1
    assert (a1 - a) % n == 0 and (b1 - b) % n == 0
    assert (c1 - c) % n == 0 and (d1 - d) % n == 0
    return ((a1, b1), (c1, d1))


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """g, x, y with a*x + b*y = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def imat_mul(x, y):
    """Product of integer 2x2 matrices given as ((a,b),(c,d))."""
    (a, b), (c, d) = x
    (e, f), (g, h) = y
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def imat_det(x) -> int:
    (a, b), (c, d) = x
    return a * d - b * c
