"""Congruence subgroups presented by residue generators.

A group is stored as its image H inside SL2(Z/N) (always containing -I); the
actual subgroup of SL2(Z) is the full preimage.  Cosets, cusps, widths,
elliptic counts, genus and the orbits on the half-index region are all finite
computations on H.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd, lcm

from .exactalg import Mat2, divisors, factorize, sl2_lift

T_INT = ((1, 1), (0, 1))
S_INT = ((0, 1), (-1, 0))
NEG_I = ((-1, 0), (0, -1))


def _mm(x, y, n):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % n, (a * f + b * h) % n,
            (c * e + d * g) % n, (c * f + d * h) % n)


def _minv(x, n):
    a, b, c, d = x
    det = (a * d - b * c) % n
    di = pow(det, -1, n)
    return ((d * di) % n, (-b * di) % n, (-c * di) % n, (a * di) % n)


def reduce_mat(mat, n) -> tuple[int, int, int, int]:
    (a, b), (c, d) = mat
    return (a % n, b % n, c % n, d % n)


@lru_cache(maxsize=None)
def sl2_order(n: int) -> int:
    if n == 1:
        return 1
    order = n**3
    for p in factorize(n):
        order = order // p**2 * (p**2 - 1)
    return order


@lru_cache(maxsize=None)
def sl2_elements(n: int) -> tuple[tuple[int, int, int, int], ...]:
    """All of SL2(Z/n), generated from the two standard unipotents."""
    if n == 1:
        return ((0, 0, 0, 0),)
    gens = (reduce_mat(T_INT, n), reduce_mat(S_INT, n))
    seen = {(1 % n, 0, 0, 1 % n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _mm(x, g, n)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    assert len(seen) == sl2_order(n)
    return tuple(sorted(seen))


def close_subgroup(gens, n) -> frozenset:
    """Subgroup of SL2(Z/n) generated by the given residues."""
    if n == 1:
        return frozenset({(0, 0, 0, 0)})
    gens = [g if isinstance(g, tuple) and len(g) == 4 else reduce_mat(g, n) for g in gens]
    for g in gens:
        a, b, c, d = g
        assert (a * d - b * c) % n == 1 % n, f"generator not in SL2: {g}"
    ident = (1 % n, 0, 0, 1 % n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _mm(x, g, n)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def kernel_elements(n: int, m: int) -> list:
    """Elements of SL2(Z/n) congruent to the identity mod m (m | n)."""
    assert n % m == 0
    return [x for x in sl2_elements(n)
            if x[0] % m == 1 % m and x[1] % m == 0 and x[2] % m == 0 and x[3] % m == 1 % m]


class Cusp:
    """A cusp a/c of the group, with an SL2(Z) scaling matrix and its width."""

    __slots__ = ("a", "c", "scaling", "width", "index")

    def __init__(self, a: int, c: int, scaling, width: int, index: int):
        self.a, self.c = a, c
        self.scaling = scaling  # integer matrix sending infinity to a/c
        self.width = width
        self.index = index

    def is_infinity(self) -> bool:
        return self.c == 0

    def __repr__(self):
        pt = "oo" if self.c == 0 else f"{self.a}/{self.c}"
        return f"Cusp({pt}, width {self.width})"


class CongruenceSubgroup:
    """Genus-zero-capable congruence subgroup given by residues mod its level."""

    def __init__(self, label: str, level: int, generators, *,
                 expected_index=None, expected_genus=None):
        self.label = label
        self.N = level
        norm = []
        for g in generators:
            if isinstance(g, tuple) and len(g) == 4:
                norm.append(tuple(x % level for x in g) if level > 1 else (0, 0, 0, 0))
            else:
                norm.append(reduce_mat(g, level))
        for a, b, c, d in norm:
            assert (a * d - b * c) % level == 1 % level, f"determinant not 1: {(a, b, c, d)}"
        self.generators = norm
        self.H = close_subgroup(norm, level)
        neg = reduce_mat(NEG_I, level)
        assert neg in self.H, "-I must lie in the generated residue group"
        self.psl_index = sl2_order(level) // len(self.H)
        if expected_index is not None:
            assert self.psl_index == expected_index, \
                (label, self.psl_index, expected_index)
        # minimality of the stated level
        for m in divisors(level)[:-1]:
            if all(k in self.H for k in kernel_elements(level, m)):
                raise AssertionError(f"{label}: level is {m}, not {level}")
        self._cosets = None
        self._cusps = None
        self._ell = None
        if expected_genus is not None:
            assert self.genus() == expected_genus, (label, self.genus(), expected_genus)

    # -- membership ---------------------------------------------------------

    def contains(self, mat) -> bool:
        """Whether an integer SL2 matrix reduces into the group."""
        return reduce_mat(mat, self.N) in self.H

    # -- coset structure ------------------------------------------------------

    def cosets(self):
        """Right cosets H\\SL2(Z/N): list of representatives + lookup dict."""
        if self._cosets is None:
            n = self.N
            lookup: dict[tuple, int] = {}
            reps = []
            for x in sl2_elements(n):
                if x in lookup:
                    continue
                idx = len(reps)
                reps.append(x)
                for h in self.H:
                    lookup[_mm(h, x, n)] = idx
            assert len(reps) == self.psl_index
            self._cosets = (reps, lookup)
        return self._cosets

    def coset_action(self, mat_mod) -> list[int]:
        """Permutation of coset indices given by right multiplication."""
        reps, lookup = self.cosets()
        n = self.N
        return [lookup[_mm(reps[i], mat_mod, n)] for i in range(len(reps))]

    def cusps(self) -> list[Cusp]:
        """Cusps with scaling matrices; the infinite cusp comes first."""
        if self._cusps is not None:
            return self._cusps
        n = self.N
        reps, lookup = self.cosets()
        t = reduce_mat(T_INT, n)
        perm = self.coset_action(t)
        seen = [False] * len(reps)
        cusps = []
        for i in range(len(reps)):
            if seen[i]:
                continue
            orbit = [i]
            seen[i] = True
            j = perm[i]
            while j != i:
                seen[j] = True
                orbit.append(j)
                j = perm[j]
            width = len(orbit)
            # pick the nicest point among the orbit's lifted representatives
            best = None
            for k in orbit:
                if k == lookup[(1 % n, 0, 0, 1 % n)]:
                    best = (0, 1, ((1, 0), (0, 1)))
                    break
                lift = sl2_lift(Mat2(n, *reps[k]))
                (a, _), (c, _) = lift
                if c < 0 or (c == 0 and a < 0):
                    a, c = -a, -c
                    lift = ((-lift[0][0], -lift[0][1]), (-lift[1][0], -lift[1][1]))
                key = (c, a, lift)
                if best is None or key < best:
                    best = key
            c, a, lift = best
            cusps.append(Cusp(a, c, lift, width, len(cusps)))
        # infinite cusp first, then by (denominator, numerator)
        cusps.sort(key=lambda cu: (cu.c != 0, cu.c, cu.a))
        for i, cu in enumerate(cusps):
            cu.index = i
        assert cusps[0].c == 0 and cusps[0].a == 1
        assert sum(cu.width for cu in cusps) == self.psl_index
        self._cusps = cusps
        return cusps

    def elliptic_counts(self) -> tuple[int, int]:
        if self._ell is None:
            n = self.N
            s = reduce_mat(S_INT, n)
            u = _mm(reduce_mat(S_INT, n), reduce_mat(T_INT, n), n)  # order 6
            perm2 = self.coset_action(s)
            perm3 = self.coset_action(u)
            e2 = sum(1 for i, j in enumerate(perm2) if i == j)
            e3 = sum(1 for i, j in enumerate(perm3) if i == j)
            self._ell = (e2, e3)
        return self._ell

    def genus(self) -> int:
        mu = self.psl_index
        e2, e3 = self.elliptic_counts()
        c = len(self.cusps())
        g = Fraction(1) + Fraction(mu, 12) - Fraction(e2, 4) - Fraction(e3, 3) - Fraction(c, 2)
        assert g.denominator == 1 and g >= 0, (self.label, g)
        return int(g)

    def conjugated(self, mat, label=None) -> "CongruenceSubgroup":
        """Group mat * Gamma * mat^-1 for an integer matrix of determinant 1."""
        (a, b), (c, d) = mat
        assert a * d - b * c == 1
        n = self.N
        m = reduce_mat(mat, n)
        mi = _minv(m, n)
        gens = [_mm(_mm(m, g, n), mi, n) for g in self.generators]
        return CongruenceSubgroup(label or self.label + "~", n, gens)

    def flipped(self, label=None) -> "CongruenceSubgroup":
        """Conjugate by diag(-1, 1): negate the off-diagonal entries."""
        n = self.N
        gens = [(a % n, -b % n, -c % n, d % n) for a, b, c, d in self.generators]
        return CongruenceSubgroup(label or self.label + "c", n, gens)

    def __repr__(self):
        return (f"CongruenceSubgroup({self.label}, level {self.N}, "
                f"index {self.psl_index}, genus {self.genus()})")


# ---------------------------------------------------------------------------
# the half-index region used for Siegel indices


def region_points(n: int) -> list[tuple[int, int]]:
    """Integer pairs (k, l) standing for (k/n, l/n) in the half region.

    The region keeps one of a, -a (mod translations): 0 < k < n/2 with any l;
    k = 0 with 1 <= l <= n/2; and for even n the edge k = n/2 with 0 <= l <= n/2.
    """
    pts = []
    for k in range(0, n // 2 + 1):
        if 2 * k == n:
            pts.extend((k, l) for l in range(0, n // 2 + 1))
        elif k == 0:
            pts.extend((0, l) for l in range(1, n // 2 + 1))
        else:
            pts.extend((k, l) for l in range(0, n))
    return pts


def region_normalize(k: int, l: int, n: int) -> tuple[tuple[int, int], int]:
    """Canonical representative in the region; second value is +1 or -1
    recording whether (k, l) or its negative was kept."""
    k %= n
    l %= n
    assert (k, l) != (0, 0), "index must be nonzero"
    two_k = 2 * k
    if (0 < two_k < n) or \
       (two_k == n and 2 * l <= n) or \
       (k == 0 and 0 < 2 * l <= n):
        return (k, l), 1
    return ((-k) % n, (-l) % n), -1


def orbits_on_region(group: CongruenceSubgroup) -> list[list[tuple[int, int]]]:
    """Orbits of the group acting on the region by row-vector multiplication."""
    n = group.N
    gens = list(group.generators)
    gens += [_minv(g, n) for g in gens]
    pts = region_points(n)
    index = {p: i for i, p in enumerate(pts)}
    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for p in pts:
        k, l = p
        for a, b, c, d in gens:
            img = region_normalize(k * a + l * c, k * b + l * d, n)[0]
            ri, rj = find(index[p]), find(index[img])
            if ri != rj:
                parent[ri] = rj
    buckets: dict[int, list[tuple[int, int]]] = {}
    for p in pts:
        buckets.setdefault(find(index[p]), []).append(p)
    return sorted(buckets.values(), key=lambda o: (len(o), o[0]))


def aN_region(n: int) -> list[tuple[Fraction, Fraction]]:
    """The half region inside (1/n)Z^2 / Z^2, as pairs of Fractions."""
    return [(Fraction(k, n), Fraction(l, n)) for k, l in region_points(n)]


def translation_unit_exponent(a1: Fraction, a2: Fraction, m1: int, m2: int) -> Fraction:
    """Exponent e (mod 1) of the unit e^{2 pi i e} relating g_{a+m} to g_a."""
    e = Fraction(m1 + m2 + m1 * m2, 2) + Fraction(m2) * a1 / 2 - a2 * Fraction(m1) / 2
    return e % 1


def canonical_rep(a1, a2):
    """Canonical region representative a' with the unit u so that g_a = u g_{a'}.

    The unit is returned as an exponent e in [0,1) meaning e^{2 pi i e}; it
    combines the sign rule for g_{-a} with the integer-translation factor.
    """
    a1, a2 = Fraction(a1), Fraction(a2)
    assert not (a1.denominator == 1 and a2.denominator == 1), "index must not be integral"
    n = lcm(a1.denominator, a2.denominator)
    k = int(a1 * n) % n
    l = int(a2 * n) % n
    (ck, cl), sign = region_normalize(k, l, n)
    b1, b2 = Fraction(ck, n), Fraction(cl, n)
    if sign == 1:
        m1, m2 = int(a1 - b1), int(a2 - b2)
        assert b1 + m1 == a1 and b2 + m2 == a2
        exp = translation_unit_exponent(b1, b2, m1, m2)
    else:
        m1, m2 = int(a1 + b1), int(a2 + b2)
        assert -b1 + m1 == a1 and -b2 + m2 == a2
        # g_{-a'+m} = eps(-a', m) g_{-a'} = -eps(-a', m) g_{a'}
        exp = (translation_unit_exponent(-b1, -b2, m1, m2) + Fraction(1, 2)) % 1
    return (b1, b2), exp


def canonical_rep_unit(a1, a2):
    """Same as canonical_rep but with the unit as a cyclotomic number."""
    from .exactalg import CyclotomicNumber
    (b1, b2), exp = canonical_rep(a1, a2)
    root = CyclotomicNumber.zeta(exp.denominator) ** (exp.numerator % exp.denominator)
    return (b1, b2), root.reduce()


# ---------------------------------------------------------------------------
# fixtures


def _fixture_path(name: str, fixtures_dir=None):
    if fixtures_dir is not None:
        import os
        return os.path.join(fixtures_dir, name)
    return resources.files("modcurve.fixtures").joinpath(name)


def load_group_fixture(fixtures_dir=None) -> dict:
    path = _fixture_path("groups.json", fixtures_dir)
    with open(path) as fh:
        rows = json.load(fh)
    return {row["label"]: row for row in rows}


def subgroup_from_fixture(label: str, fixtures_dir=None) -> CongruenceSubgroup:
    """Build and validate the group recorded under the given label."""
    rows = load_group_fixture(fixtures_dir)
    if label not in rows:
        raise KeyError(f"unknown group label {label!r}")
    row = rows[label]
    gens = [tuple(g) for g in row["generators"]]
    return CongruenceSubgroup(label, row["level"], gens,
                              expected_index=row["index"],
                              expected_genus=row["genus"])


def list_group_labels(fixtures_dir=None) -> list[str]:
    return sorted(load_group_fixture(fixtures_dir).keys())


# ---------------------------------------------------------------------------
# generic subgroup enumeration for small matrix groups


def enumerate_subgroups(elements, n, *, min_order=1, progress=None):
    """All subgroups of a subset-closed group of SL2(Z/n) residues.

    elements must form a group.  Returns frozensets.  min_order prunes the
    output only (closure still explores everything), so keep inputs small.
    """
    elems = sorted(elements)
    ident = (1 % n, 0, 0, 1 % n)
    subgroups: set[frozenset] = {frozenset([ident])}
    # cyclic subgroups first
    cyclics = set()
    for g in elems:
        cur, acc = g, [g]
        while cur != ident:
            cur = _mm(cur, g, n)
            acc.append(cur)
        cyclics.add(frozenset(acc))
    frontier = set(cyclics)
    subgroups |= cyclics
    while frontier:
        nxt = set()
        for sub in frontier:
            for g in elems:
                if g in sub:
                    continue
                grown = close_subgroup(list(sub) + [g], n)
                fs = frozenset(grown)
                if fs not in subgroups:
                    subgroups.add(fs)
                    nxt.add(fs)
        frontier = nxt
        if progress:
            progress(len(subgroups))
    return [s for s in subgroups if len(s) >= min_order]
