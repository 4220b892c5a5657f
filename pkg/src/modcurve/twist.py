"""Galois cocycles valued in PGL2, their conic models, and trivializations.

A cocycle over the conductor-M cyclotomic field is stored on generators of
(Z/MZ)^x and extended by the cocycle relation.  Embedding into GL3 through
the conic y^2 = xz, solving Hilbert 90 by averaging, and reading off the
twisted quadratic form turns "is this cocycle a coboundary" into "does this
rational conic have a rational point", which is decided locally.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .exactalg import CyclotomicNumber as Cyc
from .exactalg import euler_phi
from .relate import Polynomial, ProjectiveTransform, RationalFunction

REAL_PLACE = "real"


# ---------------------------------------------------------------------------
# the Galois group of a cyclotomic field


def unit_group(m: int) -> list:
    assert m >= 3
    return [d for d in range(1, m) if math.gcd(d, m) == 1]


def _mul_closure(gens, m):
    have = {1}
    frontier = [1]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = (x * g) % m
                if y not in have:
                    have.add(y)
                    new.append(y)
        frontier = new
    return have


def unit_generators(m: int) -> list:
    """A small generating set of (Z/mZ)^x, greedily chosen."""
    units = unit_group(m)
    gens = []
    have = {1}
    for d in units:
        if d in have:
            continue
        gens.append(d)
        have = _mul_closure(gens, m)
        if len(have) == len(units):
            break
    return gens


def transform_galois(T: ProjectiveTransform, d: int) -> ProjectiveTransform:
    return ProjectiveTransform(T.a.galois(d), T.b.galois(d),
                               T.c.galois(d), T.d.galois(d))


# ---------------------------------------------------------------------------
# small exact matrix helpers (lists of lists of cyclotomic numbers)


def mat_identity(n: int):
    return [[Cyc.of(1 if i == j else 0) for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    assert len(A[0]) == k
    out = [[Cyc.of(0)] * m for _ in range(n)]
    for i in range(n):
        for l in range(k):
            a = A[i][l]
            if a.is_zero():
                continue
            for j in range(m):
                out[i][j] = out[i][j] + a * B[l][j]
    return out


def mat_vec(A, v):
    out = []
    for row in A:
        s = Cyc.of(0)
        for a, x in zip(row, v):
            s = s + a * x
        out.append(s)
    return out


def mat_galois(A, d: int):
    return [[x.galois(d) for x in row] for row in A]


def mat_eq(A, B) -> bool:
    return all((x - y).is_zero() for ra, rb in zip(A, B)
               for x, y in zip(ra, rb))


def mat_inv(A):
    """Gauss-Jordan inverse; asserts invertibility."""
    n = len(A)
    work = [list(row) + list(idrow) for row, idrow in zip(A, mat_identity(n))]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if not work[i][col].is_zero():
                piv = i
                break
        assert piv is not None, "singular matrix"
        work[col], work[piv] = work[piv], work[col]
        inv = work[col][col].inverse()
        work[col] = [x * inv for x in work[col]]
        for i in range(n):
            if i == col or work[i][col].is_zero():
                continue
            f = work[i][col]
            work[i] = [x - f * y for x, y in zip(work[i], work[col])]
    return [row[n:] for row in work]


def mat_transpose(A):
    return [list(col) for col in zip(*A)]


def mat_is_rational(A) -> bool:
    return all(x.is_rational() for row in A for x in row)


def _mat_proportional(A, B) -> bool:
    ref = None
    for ra, rb in zip(A, B):
        for x, y in zip(ra, rb):
            if x.is_zero() != y.is_zero():
                return False
            if ref is None and not x.is_zero():
                ref = (x, y)
    if ref is None:
        return False
    x0, y0 = ref
    return all((x * y0 - y * x0).is_zero()
               for ra, rb in zip(A, B) for x, y in zip(ra, rb))


# ---------------------------------------------------------------------------
# cocycles


class Cocycle:
    """Galois cocycle into PGL2 over the conductor-M cyclotomic field."""

    def __init__(self, conductor: int, images: dict):
        assert conductor >= 3
        self.conductor = conductor
        self.gen_images = {d % conductor: T for d, T in images.items()}
        self._full = None

    @staticmethod
    def trivial(conductor: int) -> "Cocycle":
        one = ProjectiveTransform(1, 0, 0, 1)
        return Cocycle(conductor, {g: one
                                   for g in unit_generators(conductor)})

    @staticmethod
    def coboundary(conductor: int, A: ProjectiveTransform) -> "Cocycle":
        """The cocycle d -> A^(-1) sigma_d(A)."""
        inv = A.inverse()
        return Cocycle(conductor,
                       {g: inv.compose(transform_galois(A, g))
                        for g in unit_generators(conductor)})

    def _materialize(self):
        m = self.conductor
        full = {1: ProjectiveTransform(1, 0, 0, 1)}
        if 1 in self.gen_images and not self.gen_images[1].is_identity():
            return None
        frontier = [1]
        while frontier:
            new = []
            for d in frontier:
                for g, Tg in self.gen_images.items():
                    e = (g * d) % m
                    cand = Tg.compose(transform_galois(full[d], g))
                    if e in full:
                        if full[e] != cand:
                            return None
                    else:
                        full[e] = cand
                        new.append(e)
            frontier = new
        if len(full) != len(unit_group(m)):
            return None
        return full

    def images(self) -> dict:
        if self._full is None:
            self._full = self._materialize()
            assert self._full is not None, "inconsistent cocycle data"
        return self._full

    def __call__(self, d: int) -> ProjectiveTransform:
        return self.images()[d % self.conductor]

    def validate(self) -> bool:
        full = self._materialize()
        if full is None:
            return False
        m = self.conductor
        for s, Ts in full.items():
            for t, Tt in full.items():
                if full[(s * t) % m] != Ts.compose(transform_galois(Tt, s)):
                    return False
        return True


def cocycle_validate(c: Cocycle) -> bool:
    return c.validate()


class Gl3Cocycle:
    """Matrix-valued cocycle (any fixed size) over a cyclotomic field."""

    def __init__(self, conductor: int, images: dict):
        assert conductor >= 3
        self.conductor = conductor
        self.gen_images = {d % conductor: M for d, M in images.items()}
        self._full = None

    @staticmethod
    def coboundary(conductor: int, A) -> "Gl3Cocycle":
        inv = mat_inv(A)
        return Gl3Cocycle(conductor,
                          {g: mat_mul(inv, mat_galois(A, g))
                           for g in unit_generators(conductor)})

    def size(self) -> int:
        return len(next(iter(self.gen_images.values())))

    def _materialize(self):
        m = self.conductor
        full = {1: mat_identity(self.size())}
        frontier = [1]
        while frontier:
            new = []
            for d in frontier:
                for g, Mg in self.gen_images.items():
                    e = (g * d) % m
                    cand = mat_mul(Mg, mat_galois(full[d], g))
                    if e in full:
                        if not mat_eq(full[e], cand):
                            return None
                    else:
                        full[e] = cand
                        new.append(e)
            frontier = new
        if len(full) != len(unit_group(m)):
            return None
        return full

    def images(self) -> dict:
        if self._full is None:
            self._full = self._materialize()
            assert self._full is not None, "inconsistent cocycle data"
        return self._full

    def validate(self) -> bool:
        full = self._materialize()
        if full is None:
            return False
        m = self.conductor
        for s, Ms in full.items():
            for t, Mt in full.items():
                if not mat_eq(full[(s * t) % m],
                              mat_mul(Ms, mat_galois(Mt, s))):
                    return False
        return True


# ---------------------------------------------------------------------------
# the conic embedding of PGL2


def pgl2_to_gl3(T: ProjectiveTransform):
    """The automorphism of the conic y^2 = xz induced by T."""
    a, b, c, d = T.entries()
    det_inv = (a * d - b * c).inverse()
    two = Cyc.of(2)
    rows = [[a * a, two * a * b, b * b],
            [a * c, a * d + b * c, b * d],
            [c * c, two * c * d, d * d]]
    return [[x * det_inv for x in row] for row in rows]


def pgl2_from_gl3(R) -> ProjectiveTransform:
    """Recover the projective transform whose conic action is R (up to scalar)."""
    half = Cyc.of(Fraction(1, 2))
    if not R[0][0].is_zero():
        a, b = R[0][0], R[0][1] * half
    else:
        assert R[0][1].is_zero() and not R[0][2].is_zero(), \
            "top row is not of square shape"
        a, b = Cyc.of(0), R[0][2]
    if not R[2][0].is_zero():
        c, d = R[2][0], R[2][1] * half
    else:
        assert R[2][1].is_zero() and not R[2][2].is_zero(), \
            "bottom row is not of square shape"
        c, d = Cyc.of(0), R[2][2]
    # fix the relative scale of (c, d) against (a, b) from the middle row
    mid = (a * c, a * d + b * c, b * d)
    top = (a * a, Cyc.of(2) * a * b, b * b)
    k = next(i for i in range(3) if not mid[i].is_zero())
    k0 = next(i for i in range(3) if not top[i].is_zero())
    gamma = (R[1][k] / mid[k]) / (R[0][k0] / top[k0])
    T = ProjectiveTransform(a, b, gamma * c, gamma * d)
    assert _mat_proportional(pgl2_to_gl3(T), R), "matrix is not a conic action"
    return T


# ---------------------------------------------------------------------------
# Hilbert 90 by averaging


def hilbert90(psi: Gl3Cocycle):
    """A matrix M over the field with psi(sigma) = M^(-1) sigma(M), exactly.

    The twisted action sigma*v = psi(sigma) sigma(v) is Q-linear and its
    fixed space has full rank; averaging the standard Q-basis of K^n gives
    spanning fixed vectors, n independent ones form the columns of M^(-1).
    """
    images = psi.images()
    m = psi.conductor
    n = psi.size()
    phi = euler_phi(m)
    fixed = []       # independent fixed vectors (columns of P)
    echelon = []     # row-echelon copies for the independence test
    for j in range(n):
        for i in range(phi):
            u = [Cyc.of(0)] * n
            u[j] = Cyc.zeta(m, i) if i else Cyc.of(1)
            w = [Cyc.of(0)] * n
            for g, Mg in images.items():
                gu = [x.galois(g) for x in u]
                im = mat_vec(Mg, gu)
                w = [s + x for s, x in zip(w, im)]
            # reduce against the echelon rows to test independence
            v = list(w)
            for row in echelon:
                lead = next(idx for idx in range(n)
                            if not row[idx].is_zero())
                if not v[lead].is_zero():
                    f = v[lead] * row[lead].inverse()
                    v = [x - f * y for x, y in zip(v, row)]
            if any(not x.is_zero() for x in v):
                fixed.append(w)
                echelon.append(v)
                if len(fixed) == n:
                    break
        if len(fixed) == n:
            break
    assert len(fixed) == n, "fixed space has deficient rank: invalid cocycle"
    P = mat_transpose(fixed)
    M = mat_inv(P)
    for g, Mg in images.items():
        assert mat_eq(Mg, mat_mul(P, mat_galois(M, g))), \
            "averaging produced an invalid trivialization"
    return M


# ---------------------------------------------------------------------------
# conics over Q


def _frac_mat_mul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    return [[sum(A[i][l] * B[l][j] for l in range(k)) for j in range(m)]
            for i in range(n)]


def _frac_det3(S):
    return (S[0][0] * (S[1][1] * S[2][2] - S[1][2] * S[2][1])
            - S[0][1] * (S[1][0] * S[2][2] - S[1][2] * S[2][0])
            + S[0][2] * (S[1][0] * S[2][1] - S[1][1] * S[2][0]))


class Conic:
    """Smooth plane conic, stored as a symmetric Gram matrix over Q."""

    def __init__(self, gram):
        S = [[Fraction(x) for x in row] for row in gram]
        assert all(S[i][j] == S[j][i] for i in range(3) for j in range(3))
        assert _frac_det3(S) != 0, "degenerate conic"
        self.gram = S

    @staticmethod
    def from_coefficients(xx, yy, zz, xy=0, xz=0, yz=0) -> "Conic":
        h = Fraction(1, 2)
        return Conic([[Fraction(xx), h * xy, h * xz],
                      [h * xy, Fraction(yy), h * yz],
                      [h * xz, h * yz, Fraction(zz)]])

    @staticmethod
    def standard() -> "Conic":
        """y^2 - xz, the image of the squaring embedding of the line."""
        return Conic.from_coefficients(0, 1, 0, 0, -1, 0)

    def evaluate(self, x, y, z) -> Fraction:
        v = [Fraction(x), Fraction(y), Fraction(z)]
        return sum(v[i] * self.gram[i][j] * v[j]
                   for i in range(3) for j in range(3))

    def coefficients(self) -> tuple:
        """(xx, yy, zz, xy, xz, yz) as coprime integers, first nonzero > 0."""
        S = self.gram
        vals = [S[0][0], S[1][1], S[2][2],
                2 * S[0][1], 2 * S[0][2], 2 * S[1][2]]
        den = 1
        for v in vals:
            den = den * v.denominator // math.gcd(den, v.denominator)
        ints = [int(v * den) for v in vals]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        ints = [v // g for v in ints]
        lead = next(v for v in ints if v)
        if lead < 0:
            ints = [-v for v in ints]
        return tuple(ints)

    def determinant(self) -> Fraction:
        return _frac_det3(self.gram)

    def __repr__(self):
        names = ("x^2", "y^2", "z^2", "xy", "xz", "yz")
        bits = [f"{c}*{n}" for c, n in zip(self.coefficients(), names) if c]
        return "Conic(" + " + ".join(bits) + ")"


def _diagonalize(S):
    """(diagonal entries, basis T) with T^t S T diagonal, over Q."""
    S = [list(row) for row in S]
    T = [[Fraction(1 if i == j else 0) for j in range(3)] for i in range(3)]

    def sym_col_op(dst, src, f):
        # basis change b_dst += f*b_src, applied to S on both sides
        for i in range(3):
            S[i][dst] += f * S[i][src]
        for j in range(3):
            S[dst][j] += f * S[src][j]
        for i in range(3):
            T[i][dst] += f * T[i][src]

    for k in range(3):
        if S[k][k] == 0:
            j = next((j for j in range(k + 1, 3) if S[j][j] != 0), None)
            if j is not None:
                for i in range(3):
                    S[i][k], S[i][j] = S[i][j], S[i][k]
                for i in range(3):
                    S[k][i], S[j][i] = S[j][i], S[k][i]
                for i in range(3):
                    T[i][k], T[i][j] = T[i][j], T[i][k]
            else:
                j = next((j for j in range(k + 1, 3) if S[k][j] != 0), None)
                assert j is not None, "degenerate form"
                sym_col_op(k, j, Fraction(1))
        for j in range(k + 1, 3):
            if S[k][j] != 0:
                sym_col_op(j, k, -S[k][j] / S[k][k])
    return [S[0][0], S[1][1], S[2][2]], T


def _squarefree(n: int):
    """(squarefree part, square root of the cofactor) of a nonzero integer."""
    assert n != 0
    sf, root = 1 if n > 0 else -1, 1
    n = abs(n)
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e % 2:
            sf *= p
        root *= p ** (e // 2)
        p += 1 if p == 2 else 2
    return sf * n, root


def _reduce_diagonal(diag, T):
    """Scale to squarefree pairwise coprime integers, updating the basis."""
    coeffs = []
    for k in range(3):
        d = diag[k]
        assert d != 0
        val = d.numerator * d.denominator
        sf, root = _squarefree(val)
        scale = Fraction(d.denominator, root)
        for i in range(3):
            T[i][k] *= scale
        coeffs.append(sf)
    g = math.gcd(math.gcd(abs(coeffs[0]), abs(coeffs[1])), abs(coeffs[2]))
    if g > 1:
        coeffs = [c // g for c in coeffs]
    changed = True
    while changed:
        changed = False
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                g = math.gcd(abs(coeffs[i]), abs(coeffs[j]))
                if g > 1:
                    p = g
                    k = 3 - i - j
                    coeffs[i] //= p
                    coeffs[j] //= p
                    coeffs[k] *= p
                    for r in range(3):
                        T[r][k] *= p
                    changed = True
    return coeffs, T


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def hilbert_symbol(a: int, b: int, place) -> int:
    """The Hilbert symbol (a, b) at a prime or at the real place."""
    assert a != 0 and b != 0
    if place == REAL_PLACE:
        return -1 if a < 0 and b < 0 else 1
    p = place
    alpha = 0
    while a % p == 0:
        a //= p
        alpha += 1
    beta = 0
    while b % p == 0:
        b //= p
        beta += 1
    if p == 2:
        eps = ((a - 1) // 2) * ((b - 1) // 2)
        omega = alpha * ((b * b - 1) // 8) + beta * ((a * a - 1) // 8)
        return -1 if (eps + omega) % 2 else 1
    e = alpha * beta * ((p - 1) // 2)
    s = (-1) ** (e % 2)
    if beta % 2:
        s *= _legendre(a, p)
    if alpha % 2:
        s *= _legendre(b, p)
    return s


def _prime_factors(n: int):
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _local_obstructions(a: int, b: int, c: int) -> list:
    """Places among {2, p | abc, real} where a x^2 + b y^2 + c z^2 = 0 fails."""
    u, v = -a * c, -b * c
    places = sorted(set([2] + _prime_factors(a * b * c)))
    bad = [p for p in places if hilbert_symbol(u, v, p) == -1]
    if hilbert_symbol(u, v, REAL_PLACE) == -1:
        bad.append(REAL_PLACE)
    return bad


def _holzer_search(a: int, b: int, c: int):
    """A nontrivial zero within the classical bounds; None if none exists.

    For a solvable pairwise-coprime squarefree diagonal form a zero exists
    with |x| <= sqrt|bc|, |y| <= sqrt|ac|, |z| <= sqrt|ab|, so an exhaustive
    scan of the two cheapest variables is complete.
    """
    coeffs = [a, b, c]
    bounds = [math.isqrt(abs(b * c)), math.isqrt(abs(a * c)),
              math.isqrt(abs(a * b))]
    order = sorted(range(3), key=lambda i: bounds[i])
    i, j = order[0], order[1]
    k = 3 - i - j
    for u in range(bounds[i] + 1):
        for v in range(-bounds[j], bounds[j] + 1):
            if u == 0 and v <= 0:
                continue
            rest = -(coeffs[i] * u * u + coeffs[j] * v * v)
            if rest % coeffs[k]:
                continue
            w2 = rest // coeffs[k]
            if w2 < 0:
                continue
            w = math.isqrt(w2)
            if w * w == w2:
                sol = [0, 0, 0]
                sol[i], sol[j], sol[k] = u, v, w
                return tuple(sol)
    return None


def conic_has_point(C: Conic):
    """(point, None) with a primitive integer point, or (None, obstructions).

    Local solvability is checked by Hilbert symbols at the real place and
    the primes dividing twice the discriminant; when all pass, a point is
    found on the reduced diagonal model and mapped back.
    """
    diag, T = _diagonalize(C.gram)
    coeffs, T = _reduce_diagonal(diag, T)
    a, b, c = coeffs
    bad = _local_obstructions(a, b, c)
    if bad:
        return None, bad
    sol = _holzer_search(a, b, c)
    assert sol is not None, "locally solvable but no point in the search box"
    pt = [sum(T[i][j] * sol[j] for j in range(3)) for i in range(3)]
    den = 1
    for x in pt:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in pt]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    ints = [x // g for x in ints]
    assert C.evaluate(*ints) == 0
    return tuple(ints), None


def conic_point(C: Conic):
    return conic_has_point(C)[0]


def brute_force_point(C: Conic, bound: int):
    """A primitive point of height at most bound, by exhaustion over (x, y).

    For each pair the equation is a quadratic in z, so integer roots come
    from a square discriminant; this sees exactly the points in the box.
    """
    xx, yy, zz, xy, xz, yz = C.coefficients()

    def reduced(x, y, z):
        g = math.gcd(math.gcd(abs(x), abs(y)), abs(z))
        return (x // g, y // g, z // g)

    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            if x == 0 and y == 0:
                continue
            b = xz * x + yz * y
            c = xx * x * x + xy * x * y + yy * y * y
            if zz == 0:
                if b == 0:
                    if c == 0:
                        return reduced(x, y, 0)
                    continue
                if c % b == 0 and abs(c // b) <= bound:
                    return reduced(x, y, -c // b)
                continue
            disc = b * b - 4 * zz * c
            if disc < 0:
                continue
            s = math.isqrt(disc)
            if s * s != disc:
                continue
            for num in (-b + s, -b - s):
                if num % (2 * zz) == 0:
                    z = num // (2 * zz)
                    if abs(z) <= bound and (x, y, z) != (0, 0, 0):
                        return reduced(x, y, z)
    return None


# ---------------------------------------------------------------------------
# from cocycle to conic and back


def _conic_and_matrix(zeta: Cocycle):
    bar = Gl3Cocycle(zeta.conductor,
                     {d: pgl2_to_gl3(T) for d, T in zeta.images().items()})
    M = hilbert90(bar)
    Minv = mat_inv(M)
    half = Cyc.of(Fraction(1, 2))
    S0 = [[Cyc.of(0), Cyc.of(0), -half],
          [Cyc.of(0), Cyc.of(1), Cyc.of(0)],
          [-half, Cyc.of(0), Cyc.of(0)]]
    S = mat_mul(mat_transpose(Minv), mat_mul(S0, Minv))
    assert mat_is_rational(S), "twisted form failed to descend"
    gram = [[x.as_fraction() for x in row] for row in S]
    return Conic(gram), M


def conic_from_cocycle(zeta: Cocycle) -> Conic:
    """The rational conic representing the twist of the line by zeta."""
    return _conic_and_matrix(zeta)[0]


def _standardizing_map(C: Conic, point):
    """B in GL3(Q) with Q0(B x) proportional to the form of C."""
    S = C.gram

    def bil(u, v):
        return sum(u[i] * S[i][j] * v[j] for i in range(3) for j in range(3))

    P1 = [Fraction(x) for x in point]
    assert bil(P1, P1) == 0
    basis = [[Fraction(1), Fraction(0), Fraction(0)],
             [Fraction(0), Fraction(1), Fraction(0)],
             [Fraction(0), Fraction(0), Fraction(1)]]
    P2 = next(e for e in basis if bil(P1, e) != 0)
    s12 = bil(P1, P2)
    alpha = -bil(P2, P2) / (2 * s12)
    P2 = [alpha * x + y for x, y in zip(P1, P2)]
    s = bil(P1, P2)
    assert s != 0 and bil(P2, P2) == 0
    # orthogonal complement of the hyperbolic pair
    rows = [[sum(S[i][j] * P[j] for j in range(3)) for i in range(3)]
            for P in (P1, P2)]
    P3 = [rows[0][1] * rows[1][2] - rows[0][2] * rows[1][1],
          rows[0][2] * rows[1][0] - rows[0][0] * rows[1][2],
          rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]]
    c = bil(P3, P3)
    assert c != 0, "complement vector is isotropic; degenerate form"
    T = [[P1[i], P2[i], P3[i]] for i in range(3)]
    # hyperbolic basis of the standard conic: e1, e3 isotropic, e2 the norm
    U = [[Fraction(1), Fraction(0), Fraction(0)],
         [Fraction(0), Fraction(0), Fraction(1)],
         [Fraction(0), Fraction(1), Fraction(0)]]
    beta = Fraction(-2) * s / c
    V = [[Fraction(1), Fraction(0), Fraction(0)],
         [Fraction(0), beta, Fraction(0)],
         [Fraction(0), Fraction(0), Fraction(1)]]
    # invert T over Q by adjugate
    det = _frac_det3(T)
    assert det != 0
    adj = [[(T[(j + 1) % 3][(i + 1) % 3] * T[(j + 2) % 3][(i + 2) % 3]
             - T[(j + 1) % 3][(i + 2) % 3] * T[(j + 2) % 3][(i + 1) % 3])
            for j in range(3)] for i in range(3)]
    Tinv = [[adj[i][j] / det for j in range(3)] for i in range(3)]
    B = _frac_mat_mul(_frac_mat_mul(U, V), Tinv)
    return B


def trivialize(zeta: Cocycle):
    """A with zeta(sigma) = A^(-1) sigma(A) for all sigma, or None.

    None means the associated conic has no rational point, so no such A
    exists over any abelian extension compatible with the data.
    """
    C, M = _conic_and_matrix(zeta)
    point, _ = conic_has_point(C)
    if point is None:
        return None
    B = _standardizing_map(C, point)
    B_cyc = [[Cyc.of(x) for x in row] for row in B]
    A = pgl2_from_gl3(mat_mul(B_cyc, M))
    inv = A.inverse()
    for d, T in zeta.images().items():
        assert T == inv.compose(transform_galois(A, d)), \
            "trivialization failed verification"
    return A


def twist_morphism(pi: RationalFunction, A: ProjectiveTransform) \
        -> RationalFunction:
    """pi composed with A^(-1); asserts the result has rational coefficients."""
    out = pi.compose(A.inverse().as_ratfun())
    out = RationalFunction(out.num.map_coeffs(lambda x: x.reduce()),
                           out.den.map_coeffs(lambda x: x.reduce()))
    assert out.coeff_conductor() == 1, "twisted map did not descend to Q"
    return out


def cocycle_bound(n: int, b: int) -> int:
    """Conductor bound through which any such cocycle factors."""
    return 2 * n * b if n % 4 == 2 else n * b
