"""Coset, cusp, genus and region-orbit checks against classical values."""

import random

from modcurve.congruence import (CongruenceSubgroup, close_subgroup,
                                 enumerate_subgroups, orbits_on_region,
                                 reduce_mat, region_normalize, region_points,
                                 sl2_elements, sl2_order)


def from_residues(label, n, residues):
    return CongruenceSubgroup(label, n, [((r[0], r[1]), (r[2], r[3])) for r in residues])


def gamma0_group(n):
    residues = [r for r in sl2_elements(n) if r[2] == 0]
    return from_residues(f"G0({n})", n, residues)


def principal(n):
    # the principal congruence group of the given level, with -I adjoined
    residues = [(1 % n, 0, 0, 1 % n), ((-1) % n, 0, 0, (-1) % n)]
    return from_residues(f"pm_principal({n})", n, residues)


def test_sl2_orders():
    assert [sl2_order(n) for n in [1, 2, 3, 4, 5, 6, 7, 8, 12]] == \
        [1, 6, 24, 48, 120, 144, 336, 384, 1152]
    for n in [2, 3, 4, 5, 6, 7, 8]:
        assert len(sl2_elements(n)) == sl2_order(n)


def test_full_group():
    # the full group has level 1, so a level-2 presentation must be rejected
    try:
        CongruenceSubgroup("SL2", 2, [((0, 1), (-1, 0)), ((1, 1), (0, 1))])
        assert False, "level 2 presentation of the full group should be rejected"
    except AssertionError as e:
        assert "level" in str(e)
    full = CongruenceSubgroup("SL2", 1, [((1, 1), (0, 1))])
    assert full.psl_index == 1
    assert full.genus() == 0
    cs = full.cusps()
    assert len(cs) == 1 and cs[0].width == 1 and cs[0].is_infinity()
    assert full.elliptic_counts() == (1, 1)


def test_gamma0_classics():
    for n, index, ncusp, genus in [(2, 3, 2, 0), (3, 4, 2, 0), (4, 6, 3, 0),
                                   (5, 6, 2, 0), (11, 12, 2, 1), (13, 14, 2, 0),
                                   (16, 24, 6, 0)]:
        g = gamma0_group(n)
        assert g.psl_index == index, (n, g.psl_index)
        assert len(g.cusps()) == ncusp, (n, len(g.cusps()))
        assert g.genus() == genus, (n, g.genus())
    g2 = gamma0_group(2)
    assert g2.elliptic_counts() == (1, 0)
    # cusps of G0(4): infinity (width 1), 0 (width 4), 1/2 (width 1)
    widths = sorted(c.width for c in gamma0_group(4).cusps())
    assert widths == [1, 1, 4]


def test_principal_classics():
    for n, index, ncusp, genus in [(2, 6, 3, 0), (3, 12, 4, 0), (4, 24, 6, 0),
                                   (5, 60, 12, 0), (7, 168, 24, 3), (8, 192, 24, 5)]:
        g = principal(n)
        assert g.psl_index == index
        cs = g.cusps()
        assert len(cs) == ncusp
        assert all(c.width == n for c in cs)
        assert g.genus() == genus


def test_scaling_matrices():
    g = gamma0_group(4)
    for c in g.cusps():
        (a, b), (cc, d) = c.scaling
        assert a * d - b * cc == 1
        assert (a, cc) == (c.a, c.c)
        # width is minimal: scaling * T^w * scaling^-1 lands in the group
        w = c.width
        for k in range(1, w + 1):
            m = ((a, b), (cc, d))
            tk = ((1, k), (0, 1))
            minv = ((d, -b), (-cc, a))
            prod = mat_mul(mat_mul(m, tk), minv)
            inside = g.contains(prod)
            assert inside == (k == w)


def mat_mul(x, y):
    return ((x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
            (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]))


def test_conjugated():
    g = gamma0_group(4).conjugated(((0, 1), (-1, 0)))
    assert g.psl_index == 6 and g.genus() == 0 and len(g.cusps()) == 3


def test_region_counts():
    assert len(region_points(2)) == 3
    assert len(region_points(3)) == 4
    for n in range(2, 16):
        pts = set(region_points(n))
        # normalization maps every nonzero index into the region, involutively
        for k in range(n):
            for l in range(n):
                if (k, l) == (0, 0):
                    continue
                (ck, cl), sign = region_normalize(k, l, n)
                assert (ck, cl) in pts
                back, sign2 = region_normalize(sign * ck, sign * cl, n)
                assert back == (k % n, l % n) or (k, l) != (ck, cl) or sign2 == 1
        # each {a, -a} pair is represented exactly once
        seen = set()
        for k, l in pts:
            key = frozenset({(k, l), ((-k) % n, (-l) % n)})
            assert key not in seen
            seen.add(key)
        total = n * n - 1
        pairs = sum(1 for k in range(n) for l in range(n)
                    if (k, l) != (0, 0) and ((-k) % n, (-l) % n) == (k, l))
        assert len(pts) == (total - pairs) // 2 + pairs


def test_region_orbits_oracle():
    # independent plain breadth-first orbit computation
    rng = random.Random(7)
    for n in [3, 4, 5, 6, 8]:
        residues = [r for r in sl2_elements(n) if r[2] == 0]
        g = from_residues(f"G0({n})", n, residues)
        fast = orbits_on_region(g)
        pts = region_points(n)
        gens = list(g.generators)
        slow = []
        left = set(pts)
        while left:
            start = min(left)
            orb = {start}
            frontier = [start]
            while frontier:
                nxt = []
                for (k, l) in frontier:
                    for (a, b, c, d) in gens:
                        img = region_normalize(k * a + l * c, k * b + l * d, n)[0]
                        if img not in orb:
                            orb.add(img)
                            nxt.append(img)
                frontier = nxt
            left -= orb
            slow.append(frozenset(orb))
        assert {frozenset(o) for o in fast} == set(slow)
        assert sum(len(o) for o in fast) == len(pts)


def test_canonical_rep():
    from fractions import Fraction as F
    from modcurve.congruence import aN_region, canonical_rep, canonical_rep_unit
    assert aN_region(2) == [(F(0), F(1, 2)), (F(1, 2), F(0)), (F(1, 2), F(1, 2))]
    assert len(aN_region(3)) == 4
    # points already in the region come back unchanged with unit 1
    for a in aN_region(5):
        rep, exp = canonical_rep(*a)
        assert rep == a and exp == 0
    # sign flip alone gives -1
    rep, exp = canonical_rep(F(-1, 2), F(0))
    assert rep == (F(1, 2), F(0)) and exp == F(1, 2)
    # translation of a2 by 1 gives -1 here
    rep, exp = canonical_rep(F(0), F(3, 2))
    assert rep == (F(0), F(1, 2)) and exp == F(1, 2)
    # a unit of order 3 appears at level 3: -zeta_6 = zeta_3^2 = -1 - zeta_3
    (rep, unit) = canonical_rep_unit(F(1, 3), F(5, 3))
    assert rep == (F(1, 3), F(2, 3))
    z3 = unit.__class__.zeta(3)
    assert unit == z3 * z3
    # integral indices are rejected
    try:
        canonical_rep(F(2), F(-1))
        assert False
    except AssertionError:
        pass


def test_enumerate_subgroups_small():
    elems = sl2_elements(2)
    subs = enumerate_subgroups(elems, 2)
    # SL2(Z/2) is symmetric of degree 3: subgroups 1, three of order 2,
    # one of order 3, whole group
    assert sorted(len(s) for s in subs) == [1, 2, 2, 2, 3, 6]
    elems3 = sl2_elements(3)
    subs3 = enumerate_subgroups(elems3, 3)
    for s in subs3:
        assert close_subgroup(list(s), 3) == s
    assert len(elems3) in [len(s) for s in subs3]
