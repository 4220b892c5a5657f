"""Siegel-function products, cusp divisors, and hauptmodul construction.

A hauptmodul is built as a unit times a product of Siegel functions g_a whose
exponents solve an integer divisor system (several cusps), as a coset trace of
a smaller group's hauptmodul (one cusp), or from a bundled explicit expression
for the handful of groups where neither route applies.

Products are kept symbolic: a term is a cyclotomic coefficient, a root-of-unity
exponent, and a map from region indices to integer exponents.  All heavy series
arithmetic then happens over K_N; big roots of unity only multiply whole terms.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd, lcm

from .congruence import (CongruenceSubgroup, Cusp, canonical_rep,
                         orbits_on_region, _fixture_path)
from .exactalg import CyclotomicNumber as Cyc
from .exactalg import Mat2, divisors, sl2_lift
from .qseries import PuiseuxExpansion


class UnsolvableSystem(Exception):
    """Raised when no Siegel-product exponent vector gives the wanted divisor."""


def bernoulli2(x) -> Fraction:
    x = Fraction(x)
    return x * x - x + Fraction(1, 6)


def sl2_word(mat) -> list:
    """Decompose an integer determinant-1 matrix into T-powers and S factors.

    Returns ops [("T", k), ("S", 1), ...] whose left-to-right product is mat.
    Euclidean reduction on the left column; verified by reconstruction.
    """
    (a, b), (c, d) = mat
    assert a * d - b * c == 1
    word = []
    while c != 0:
        k = a // c
        # mat = T^k * S * rest with rest = S^-1 T^-k mat
        word.append(("T", k))
        word.append(("S", 1))
        a, b, c, d = -c, -d, a - k * c, b - k * d
    if a == 1:
        word.append(("T", b))
    else:
        assert a == -1
        word.extend([("S", 1), ("S", 1), ("T", -b)])
    m = ((1, 0), (0, 1))
    for op, k in word:
        if op == "T":
            m = ((m[0][0], m[0][0] * k + m[0][1]), (m[1][0], m[1][0] * k + m[1][1]))
        else:
            m = ((-m[0][1], m[0][0]), (-m[1][1], m[1][0]))
    assert m == mat, (m, mat)
    return word


def eta_character_exponent(mat) -> Fraction:
    """Exponent e with epsilon(mat) = e^{2 pi i e}, epsilon the homomorphism
    sending T to zeta_12 and S to zeta_4."""
    e = Fraction(0)
    for op, k in sl2_word(mat):
        e += Fraction(k, 12) if op == "T" else Fraction(3, 12)
    return e % 1


def canon_index(k: int, l: int, n: int):
    """Region representative of (k/n, l/n) and the unit exponent it emits."""
    (a1, a2), exp = canonical_rep(Fraction(k, n), Fraction(l, n))
    return (int(a1 * n), int(a2 * n)), exp


class SiegelTerm:
    """coeff * e^{2 pi i unit_exp} * prod over factors g_{(k/n,l/n)}^m.

    Factor indices are canonicalized into the half region on construction,
    folding the reduction units into unit_exp.
    """

    __slots__ = ("n", "coeff", "unit_exp", "factors")

    def __init__(self, n: int, coeff, unit_exp, factors: dict):
        self.n = n
        self.coeff = coeff if isinstance(coeff, Cyc) else Cyc.of(coeff)
        exp = Fraction(unit_exp)
        cleaned: dict = {}
        for (k, l), m in factors.items():
            m = int(m)
            if m == 0:
                continue
            rep, u = canon_index(k, l, n)
            exp += u * m
            cleaned[rep] = cleaned.get(rep, 0) + m
        self.unit_exp = exp % 1
        self.factors = {a: m for a, m in sorted(cleaned.items()) if m}

    def key(self):
        return tuple(sorted(self.factors.items()))

    def total_coeff(self) -> Cyc:
        root = Cyc.zeta(self.unit_exp.denominator, self.unit_exp.numerator)
        return (self.coeff * root).reduce()

    def scaled(self, c) -> "SiegelTerm":
        return SiegelTerm(self.n, self.coeff * c, self.unit_exp, dict(self.factors))

    def mul(self, other: "SiegelTerm") -> "SiegelTerm":
        assert self.n == other.n
        factors = dict(self.factors)
        for a, m in other.factors.items():
            factors[a] = factors.get(a, 0) + m
        return SiegelTerm(self.n, self.coeff * other.coeff,
                          self.unit_exp + other.unit_exp, factors)

    def slash(self, mat) -> "SiegelTerm":
        """Substitute tau -> mat(tau) for an integer SL2(Z) matrix."""
        total_m = sum(self.factors.values())
        exp = self.unit_exp + eta_character_exponent(mat) * total_m
        (a, b), (c, d) = mat
        factors = {}
        for (k, l), m in self.factors.items():
            factors[(k * a + l * c, k * b + l * d)] = m
        return SiegelTerm(self.n, self.coeff, exp, factors)

    def galois(self, d: int) -> "SiegelTerm":
        """sigma_d on the constant coefficient and unit only."""
        den = self.unit_exp.denominator
        assert gcd(d, den) == 1, (d, den)
        return SiegelTerm(self.n, self.coeff.galois(d),
                          self.unit_exp * d, dict(self.factors))

    def act_by_diag(self, d: int) -> "SiegelTerm":
        """Index action of diag(1, d): (a1, a2) -> (a1, d a2), units tracked."""
        assert gcd(d, self.n) == 1
        factors = {(k, l * d): m for (k, l), m in self.factors.items()}
        return SiegelTerm(self.n, self.coeff, self.unit_exp, factors)

    def star_diag(self, d: int) -> "SiegelTerm":
        """Full action of diag(1, d): sigma_d on q-expansion coefficients."""
        return self.galois(d).act_by_diag(d)

    def expansion(self, prec: int) -> PuiseuxExpansion:
        """Exact q-expansion; prec counted in whole powers of q."""
        n = self.n
        lead = Fraction(0)
        for (k, l), m in self.factors.items():
            lead += m * bernoulli2(Fraction(k, n)) / 2
        den = lcm(lead.denominator, n)
        extra = Fraction(0)  # definitional unit e^{2 pi i a2(a1-1)/2} per factor
        sign = 1
        for (k, l), m in self.factors.items():
            extra += m * Fraction(l * (k - n), 2 * n * n)
            if m % 2:
                sign = -sign
        unit = (self.unit_exp + extra) % 1
        c0 = (self.coeff * Cyc.zeta(unit.denominator, unit.numerator) * sign).reduce()
        series = PuiseuxExpansion.monomial(lead, c0, den, prec * den)
        for (k, l), m in self.factors.items():
            series = series * (_siegel_core(n, k, l, den, prec) ** m)
        return series

    def __repr__(self):
        return (f"SiegelTerm(n={self.n}, unit_exp={self.unit_exp}, "
                f"factors={self.factors})")


def _siegel_core(n: int, k: int, l: int, den: int, prec: int) -> PuiseuxExpansion:
    """(1 - q_z) prod_m (1 - q^m q_z)(1 - q^m / q_z), q_z = q^{k/n} zeta_n^l."""
    zl = Cyc.zeta(n, l % n)
    zli = Cyc.zeta(n, (-l) % n)
    kk = Fraction(k, n)
    assert 0 <= kk <= Fraction(1, 2)
    out = PuiseuxExpansion.constant(Cyc.of(1), den, prec * den)
    out = out.times_one_minus(kk, zl)
    m = 1
    while m - kk <= prec:
        if m + kk <= prec:
            out = out.times_one_minus(m + kk, zl)
        out = out.times_one_minus(m - kk, zli)
        m += 1
    return out


class SiegelSum:
    """Formal sum of SiegelTerms; the shape traces and special cases take."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms):
        combined: dict = {}
        for t in terms:
            assert t.n == n
            combined.setdefault(t.key(), []).append(t)
        out = []
        for key, ts in sorted(combined.items()):
            total = ts[0].total_coeff()
            for t in ts[1:]:
                total = total + t.total_coeff()
            total = total.reduce()
            if total:
                out.append(SiegelTerm(n, total, Fraction(0), dict(ts[0].factors)))
        self.n = n
        self.terms = out

    def slash(self, mat) -> "SiegelSum":
        return SiegelSum(self.n, [t.slash(mat) for t in self.terms])

    def scaled(self, c) -> "SiegelSum":
        return SiegelSum(self.n, [t.scaled(c) for t in self.terms])

    def galois(self, d: int) -> "SiegelSum":
        return SiegelSum(self.n, [t.galois(d) for t in self.terms])

    def star_diag(self, d: int) -> "SiegelSum":
        return SiegelSum(self.n, [t.star_diag(d) for t in self.terms])

    def structural_eq(self, other: "SiegelSum") -> bool:
        if self.n != other.n or len(self.terms) != len(other.terms):
            return False
        for a, b in zip(self.terms, other.terms):
            if a.factors != b.factors or a.total_coeff() != b.total_coeff():
                return False
        return True

    def structural_key(self):
        out = []
        for t in self.terms:
            c = t.total_coeff()
            out.append((t.key(), c.n, c.c))
        return tuple(out)

    def expansion(self, prec: int) -> PuiseuxExpansion:
        assert self.terms, "empty sum has no expansion"
        out = self.terms[0].expansion(prec)
        for t in self.terms[1:]:
            out = out + t.expansion(prec)
        return out

    def __repr__(self):
        return f"SiegelSum(n={self.n}, {len(self.terms)} terms)"


# ---------------------------------------------------------------------------
# cusp divisors of orbit products and the hauptmodul exponent system


def orbit_divisor(orbit, cusps: list, n: int) -> list:
    """Divisor of (prod_{a in O} g_a)^{12n} as integers indexed like cusps."""
    coeffs = []
    for cu in cusps:
        (a, _), (c, _) = cu.scaling
        total = Fraction(0)
        for (k, l) in orbit:
            x = Fraction(k * a + l * c, n)
            total += bernoulli2(x - (x // 1))
        val = 6 * n * cu.width * total
        assert val.denominator == 1, (cu, val)
        coeffs.append(int(val))
    assert sum(coeffs) == 0, "principal divisor must have degree zero"
    return coeffs


def hnf_solve(columns: list, target: list):
    """Solve sum_j m_j * columns[j] = target over the integers, or None.

    Column-style Hermite reduction carrying a transformation matrix.
    """
    ncols = len(columns)
    nrows = len(target)
    a = [[columns[j][i] for j in range(ncols)] for i in range(nrows)]
    u = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col_op(j1, j2, q):
        for i in range(nrows):
            a[i][j2] -= q * a[i][j1]
        for i in range(ncols):
            u[i][j2] -= q * u[i][j1]

    def col_swap(j1, j2):
        for i in range(nrows):
            a[i][j1], a[i][j2] = a[i][j2], a[i][j1]
        for i in range(ncols):
            u[i][j1], u[i][j2] = u[i][j2], u[i][j1]

    pivots = []
    col = 0
    for row in range(nrows):
        if col >= ncols:
            break
        while True:
            nz = [j for j in range(col, ncols) if a[row][j] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda j: abs(a[row][j]))
            j1 = nz[0]
            for j2 in nz[1:]:
                col_op(j1, j2, a[row][j2] // a[row][j1])
        nz = [j for j in range(col, ncols) if a[row][j] != 0]
        if not nz:
            continue
        if nz[0] != col:
            col_swap(col, nz[0])
        if a[row][col] < 0:
            for i in range(nrows):
                a[i][col] = -a[i][col]
            for i in range(ncols):
                u[i][col] = -u[i][col]
        pivots.append((row, col))
        col += 1

    y = [0] * ncols
    t = list(target)
    for r, c in pivots:
        if t[r] % a[r][c] != 0:
            return None
        q = t[r] // a[r][c]
        y[c] = q
        for i in range(nrows):
            t[i] -= q * a[i][c]
    if any(t):
        return None
    m = [sum(u[i][j] * y[j] for j in range(ncols)) for i in range(ncols)]
    for i in range(nrows):
        assert sum(m[j] * columns[j][i] for j in range(ncols)) == target[i]
    return m


def unit_exponent(orbits, m: list, n: int) -> int:
    """The integer e mod 2n^2 fixing the leading unit of the product."""
    total = 0
    for mi, orb in zip(m, orbits):
        total += mi * sum(l * (n - k) for (k, l) in orb)
    return total % (2 * n * n)


class Hauptmodul:
    """A group, its symbolic expression, and normalization bookkeeping.

    expansion() returns the normalized series: leading coefficient 1 at the
    infinite cusp and constant term 0, so h = (raw - shift) / scale.
    """

    def __init__(self, group, expression: SiegelSum, width: int,
                 scale: Cyc, shift: Cyc, conjugator=None):
        self.group = group
        self.expression = expression
        self.width = width
        self.scale = scale
        self.shift = shift
        self.conjugator = conjugator  # set when built on a conjugate model
        self._cache: dict = {}

    def raw_expansion(self, prec: int) -> PuiseuxExpansion:
        if ("raw", prec) not in self._cache:
            self._cache[("raw", prec)] = self.expression.expansion(prec)
        return self._cache[("raw", prec)]

    def expansion(self, prec: int) -> PuiseuxExpansion:
        if ("norm", prec) not in self._cache:
            raw = self.raw_expansion(prec)
            norm = (raw - self.shift).scale(self.scale.inverse()).reduce_coeffs()
            assert norm.valuation() == Fraction(-1, self.width)
            assert norm.leading_coeff() == Cyc.of(1)
            self._cache[("norm", prec)] = norm
        return self._cache[("norm", prec)]

    def cusp_expansion(self, cusp: Cusp, prec: int) -> PuiseuxExpansion:
        """Normalized expansion in the local parameter at the given cusp."""
        raw = self.expression.slash(cusp.scaling).expansion(prec)
        return (raw - self.shift).scale(self.scale.inverse())

    def cusp_value(self, cusp: Cusp, prec: int = 2) -> Cyc:
        """Exact value of the normalized hauptmodul at a cusp away from oo."""
        series = self.cusp_expansion(cusp, prec)
        assert series.valuation() >= 0, "hauptmodul has its pole here"
        return series.constant_term().reduce()

    def check_invariance(self):
        """Structural slash-invariance under every group generator."""
        n = self.group.N
        for g in self.group.generators:
            lift = sl2_lift(Mat2(n, *g))
            assert self.expression.slash(lift).structural_eq(self.expression), \
                f"expression moved by generator {g}"
        return True


def hauptmodul_multicusp(group: CongruenceSubgroup) -> Hauptmodul:
    """Unit times Siegel-orbit product with divisor -P1 + P2; needs >= 2 cusps."""
    n = group.N
    cusps = group.cusps()
    assert len(cusps) >= 2, "product construction needs a second cusp"
    orbits = orbits_on_region(group)
    columns = [orbit_divisor(o, cusps, n) for o in orbits]
    m = None
    for p2 in range(1, len(cusps)):
        target = [0] * len(cusps)
        target[0] = -12 * n
        target[p2] = 12 * n
        m = hnf_solve(columns, target)
        if m is not None:
            break
    if m is None:
        raise UnsolvableSystem(group.label)
    e = unit_exponent(orbits, m, n)
    factors: dict = {}
    for mi, orb in zip(m, orbits):
        if mi:
            for a in orb:
                factors[a] = factors.get(a, 0) + mi
    term = SiegelTerm(n, Cyc.of(1), Fraction(e, 2 * n * n), factors)
    return _finalize(group, SiegelSum(n, [term]), cusps[0].width)


def _finalize(group, expr: SiegelSum, width: int, conjugator=None) -> Hauptmodul:
    probe = expr.expansion(3)
    assert probe.valuation() == Fraction(-1, width), \
        (group.label, probe.valuation(), width)
    scale = probe.leading_coeff().reduce()
    shift = probe.coeff(0).reduce()
    h = Hauptmodul(group, expr, width, scale, shift, conjugator)
    assert h.expansion(3).coeff_conductor() in set(divisors(group.N)), \
        f"{group.label}: coefficients escape K_N"
    h.check_invariance()
    return h


def hauptmodul_singlecusp(group: CongruenceSubgroup,
                          subgroup: CongruenceSubgroup,
                          cosets: list) -> Hauptmodul:
    """Trace of the subgroup's hauptmodul over the given coset lifts."""
    assert subgroup.N == group.N
    assert subgroup.psl_index % group.psl_index == 0
    index = subgroup.psl_index // group.psl_index
    assert len(cosets) == index
    assert len(subgroup.cusps()) == index, \
        "trace needs [G:G'] equal to the subgroup cusp count"
    inner = hauptmodul_multicusp(subgroup)
    scale_inv = inner.scale.inverse()
    terms = []
    for alpha in cosets:
        terms.extend(inner.expression.slash(alpha).scaled(scale_inv).terms)
    expr = SiegelSum(group.N, terms)
    return _finalize(group, expr, group.cusps()[0].width)


# ---------------------------------------------------------------------------
# bundled explicit expressions


def _term_from_json(n, row) -> SiegelTerm:
    coeff = Cyc.from_json(row["coeff"])
    factors = {(k, l): m for k, l, m in row["factors"]}
    return SiegelTerm(n, coeff, Fraction(row.get("unit_num", 0),
                                         row.get("unit_den", 1)), factors)


def load_special_table(fixtures_dir=None) -> dict:
    path = _fixture_path("special_hauptmoduls.json", fixtures_dir)
    with open(path) as fh:
        return {row["label"]: row for row in json.load(fh)}


def hauptmodul_special(label: str, group: CongruenceSubgroup,
                       fixtures_dir=None) -> Hauptmodul:
    """Explicit bundled expression, cross-checked against its trace data."""
    table = load_special_table(fixtures_dir)
    if label not in table:
        raise KeyError(f"no bundled hauptmodul for {label!r}")
    row = table[label]
    n = row["level"]
    assert n == group.N
    expr = SiegelSum(n, [_term_from_json(n, t) for t in row["terms"]])
    if row.get("trace_f") is not None:
        f = SiegelSum(n, [_term_from_json(n, row["trace_f"])])
        reps = [sl2_lift(Mat2(n, *g)) for g in row["trace_reps"]]
        terms = []
        for alpha in reps:
            terms.extend(f.slash(alpha).terms)
        recomputed = SiegelSum(n, terms)
        assert recomputed.structural_eq(expr), \
            f"{label}: trace of f disagrees with the listed sum"
    return _finalize(group, expr, group.cusps()[0].width)


def find_trace_subgroup(group: CongruenceSubgroup):
    """Search inside the group for a subgroup usable for the coset trace.

    Wanted: same level, genus 0, contains -I, [G:G'] equal to the cusp count
    of G', and a solvable divisor system.  Returns (sub, lifts, h) or None.
    """
    from .congruence import enumerate_subgroups, _mm
    n = group.N
    neg = ((-1) % n, 0, 0, (-1) % n)
    candidates = []
    for s in enumerate_subgroups(sorted(group.H), n):
        if neg not in s or len(s) == len(group.H):
            continue
        candidates.append((len(group.H) // len(s), sorted(s)))
    candidates.sort()
    for index, elems in candidates:
        try:
            sub = CongruenceSubgroup(group.label + "'", n, elems)
        except AssertionError:
            continue  # proper level drop
        if sub.genus() != 0 or len(sub.cusps()) != index:
            continue
        seen = set()
        reps = []
        for g in sorted(group.H):
            if g in seen:
                continue
            reps.append(g)
            for h in elems:
                seen.add(_mm(h, g, n))
        assert len(reps) == index
        lifts = [sl2_lift(Mat2(n, *g)) for g in reps]
        try:
            return sub, lifts, hauptmodul_singlecusp(group, sub, lifts)
        except UnsolvableSystem:
            continue
    return None


def _orbit_slash_unit(n: int, orbit, lift) -> Fraction:
    """Unit exponent picked up by prod_{a in orbit} g_a under slash by lift."""
    term = SiegelTerm(n, Cyc.of(1), Fraction(0), {a: 1 for a in orbit})
    moved = term.slash(lift)
    assert moved.factors == term.factors, "index set is not closed"
    return moved.unit_exp


def _small_generating_set(elements, n):
    from .congruence import close_subgroup
    target = frozenset(elements)
    gens: list = []
    have = close_subgroup([], n)
    for g in sorted(target):
        if g not in have:
            gens.append(g)
            have = close_subgroup(gens, n)
            if have == target:
                return gens
    assert have == target
    return gens


def _trace_two_pole(group, sub, lifts):
    """Trace of a subgroup-invariant product with two simple cusp poles.

    Works for subgroups of any genus: a one-pole degree-one divisor is only
    principal on genus 0, so the traced function is allowed the divisor
    -P_a - P_b + (effective of degree 2) over the subgroup's cusps, and
    invariance of the bare product is imposed through congruence rows on the
    slash unit exponents (the unit is additive along the subgroup, so
    generators suffice).  Returns None when no target divisor works.
    """
    n = group.N
    cusps = sub.cusps()
    k = len(cusps)
    if k < 2:
        return None
    orbits = orbits_on_region(sub)
    columns = [orbit_divisor(o, cusps, n) for o in orbits]
    gen_lifts = [sl2_lift(Mat2(n, *g))
                 for g in _small_generating_set(sub.H, n)]
    unit_rows = [[_orbit_slash_unit(n, o, gl) for o in orbits]
                 for gl in gen_lifts]
    D = 1
    for row in unit_rows:
        for u in row:
            D = lcm(D, u.denominator)
    ext_columns = []
    for i in range(len(orbits)):
        col = list(columns[i])
        for row in unit_rows:
            u = row[i] * D
            assert u.denominator == 1
            col.append(int(u))
        ext_columns.append(col)
    for j in range(len(gen_lifts)):
        ext_columns.append([0] * k + [D if i == j else 0
                                      for i in range(len(gen_lifts))])
    patterns = []
    for a in range(k):
        for b in range(a + 1, k):
            rest = [j for j in range(k) if j not in (a, b)]
            for c in rest:
                patterns.append((a, b, {c: 2}))
            for x in range(len(rest)):
                for y in range(x + 1, len(rest)):
                    patterns.append((a, b, {rest[x]: 1, rest[y]: 1}))
    for a, b, eff in patterns:
        target = [0] * k
        target[a] = target[b] = -12 * n
        for j, mult in eff.items():
            target[j] = 12 * n * mult
        sol = hnf_solve(ext_columns, target + [0] * len(gen_lifts))
        if sol is None:
            continue
        m = sol[:len(orbits)]
        factors: dict = {}
        for mi, orb in zip(m, orbits):
            if mi:
                for idx in orb:
                    factors[idx] = factors.get(idx, 0) + mi
        f = SiegelSum(n, [SiegelTerm(n, Cyc.of(1), Fraction(0), factors)])
        for gl in gen_lifts:
            assert f.slash(gl).structural_eq(f)
        terms = []
        for alpha in lifts:
            terms.extend(f.slash(alpha).terms)
        expr = SiegelSum(n, terms)
        width = group.cusps()[0].width
        probe = expr.expansion(2)
        try:
            if probe.valuation() != Fraction(-1, width):
                continue  # the two pole terms cancelled
        except ValueError:
            continue
        return _finalize(group, expr, width)
    return None


def hauptmodul_trace_general(group: CongruenceSubgroup):
    """Trace over a subgroup of any genus; used when no genus-0 trace exists.

    Returns (sub, lifts, h) or None.
    """
    from .congruence import enumerate_subgroups, _mm
    n = group.N
    neg = ((-1) % n, 0, 0, (-1) % n)
    candidates = []
    for s in enumerate_subgroups(sorted(group.H), n):
        if neg not in s or len(s) == len(group.H):
            continue
        candidates.append((len(group.H) // len(s), sorted(s)))
    candidates.sort()
    for index, elems in candidates:
        try:
            sub = CongruenceSubgroup(group.label + "'", n, elems)
        except AssertionError:
            continue  # proper level drop
        if len(sub.cusps()) != index:
            continue
        seen = set()
        reps = []
        for g in sorted(group.H):
            if g in seen:
                continue
            reps.append(g)
            for h in elems:
                seen.add(_mm(h, g, n))
        assert len(reps) == index
        lifts = [sl2_lift(Mat2(n, *g)) for g in reps]
        h = _trace_two_pole(group, sub, lifts)
        if h is not None:
            return sub, lifts, h
    return None


_haupt_memo: dict = {}


def hauptmodul_for(group: CongruenceSubgroup, fixtures_dir=None) -> Hauptmodul:
    """Dispatcher: bundled expression, product construction, then trace."""
    key = (group.label, group.N, frozenset(group.H))
    if key in _haupt_memo:
        return _haupt_memo[key]
    h = _haupt_memo[key] = _hauptmodul_for(group, fixtures_dir)
    return h


def _hauptmodul_for(group: CongruenceSubgroup, fixtures_dir=None) -> Hauptmodul:
    label = group.label
    try:
        specials = load_special_table(fixtures_dir)
    except FileNotFoundError:
        specials = {}
    if label in specials:
        return hauptmodul_special(label, group, fixtures_dir)
    if len(group.cusps()) >= 2:
        try:
            return hauptmodul_multicusp(group)
        except UnsolvableSystem:
            found = solvable_conjugate(group)
            if found is not None:
                return found
            raise
    found = find_trace_subgroup(group)
    if found is not None:
        return found[2]
    found = hauptmodul_trace_general(group)
    if found is not None:
        return found[2]
    raise UnsolvableSystem(label)


def solvable_conjugate(group: CongruenceSubgroup):
    """Try SL2(Z/N)-conjugates of the group until the system solves."""
    from .congruence import sl2_elements
    n = group.N
    for m in sl2_elements(n):
        lift = sl2_lift(Mat2(n, *m))
        conj = group.conjugated(lift, label=group.label)
        try:
            h = hauptmodul_multicusp(conj)
        except UnsolvableSystem:
            continue
        h.conjugator = lift
        return h
    return None
