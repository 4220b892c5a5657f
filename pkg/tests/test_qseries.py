import random
from fractions import Fraction

import pytest

from modcurve.exactalg import CyclotomicNumber as Cyc
from modcurve.exactalg import GaloisAutomorphism
from modcurve.qseries import (
    PrecisionError,
    PuiseuxExpansion as PX,
    delta_coeffs,
    eisenstein4,
    galois_on_series,
    j_expansion,
)


def rand_series(rng, den, prec, conductor=1, lo=-3):
    terms = {}
    for k in range(lo, prec):
        if rng.random() < 0.5:
            if conductor == 1:
                terms[k] = Cyc.of(Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
            else:
                terms[k] = Cyc.zeta(conductor, rng.randrange(conductor)) * rng.randint(-3, 3)
    return PX(den, prec, terms)


def test_monomial_and_coeff_access():
    s = PX.monomial(Fraction(-1, 4), 3, den=4, prec=10)
    assert s.valuation() == Fraction(-1, 4)
    assert s.coeff(Fraction(-1, 4)) == 3
    assert s.coeff(Fraction(1, 2)) == 0
    with pytest.raises(PrecisionError):
        s.coeff(Fraction(11, 4))


def test_addition_tracks_min_precision():
    a = PX.monomial(0, 1, den=2, prec=8)
    b = PX.monomial(Fraction(1, 3), 2, den=3, prec=9)
    c = a + b
    assert c.den == 6
    assert c.precision() == min(Fraction(8, 2), Fraction(9, 3))


def test_mul_against_naive_convolution():
    rng = random.Random(1)
    for _ in range(25):
        a = rand_series(rng, 2, rng.randint(3, 9))
        b = rand_series(rng, 2, rng.randint(3, 9))
        c = a * b
        # naive check on a few exponents below the tracked precision
        for k in range(-6, c.prec):
            tot = Cyc.of(0)
            for i, x in a.terms.items():
                j = k - i
                if j in b.terms:
                    tot = tot + x * b.terms[j]
            if k < c.prec:
                assert c.terms.get(k, Cyc.of(0)) == tot


def test_mul_associative_random():
    rng = random.Random(2)
    for _ in range(10):
        a = rand_series(rng, 3, 7)
        b = rand_series(rng, 3, 7)
        c = rand_series(rng, 3, 7)
        l = (a * b) * c
        r = a * (b * c)
        assert l.agrees_with(r)


def test_inverse_and_pow():
    rng = random.Random(3)
    for _ in range(12):
        s = rand_series(rng, 2, 9)
        if not s.terms:
            continue
        inv = s.inverse()
        one = s * inv
        assert one.agrees_with(PX.constant(1, one.den, one.prec))
        sq = s**2
        assert sq.agrees_with(s * s)
    t = PX.monomial(Fraction(-1, 2), 1, den=2, prec=6) + 5
    assert (t**0).agrees_with(PX.constant(1, 2, 6))
    assert (t**-2).agrees_with((t * t).inverse())


def test_binomial_multiplication_shortcut():
    rng = random.Random(4)
    s = rand_series(rng, 4, 12)
    z = Cyc.zeta(8, 3)
    full = s * (PX.constant(1, 4, 12) - PX.monomial(Fraction(3, 4), z, 4, 12))
    quick = s.times_one_minus(Fraction(3, 4), z)
    assert full.agrees_with(quick)


def test_collapse_den_asserts_lattice():
    s = PX(4, 8, {0: Cyc.of(1), 4: Cyc.of(2)})
    c = s.collapse_den(1)
    assert c.den == 1 and c.terms == {0: Cyc.of(1), 1: Cyc.of(2)}
    bad = PX(4, 8, {1: Cyc.of(1)})
    with pytest.raises(AssertionError):
        bad.collapse_den(2)


def test_galois_on_series_is_multiplicative():
    rng = random.Random(5)
    sig = GaloisAutomorphism(8, 5)
    a = rand_series(rng, 2, 7, conductor=8)
    b = rand_series(rng, 2, 7, conductor=8)
    left = galois_on_series(a * b, sig)
    right = galois_on_series(a, sig) * galois_on_series(b, sig)
    assert left.agrees_with(right)


def test_json_roundtrip():
    rng = random.Random(6)
    s = rand_series(rng, 3, 6, conductor=12)
    t = PX.from_json(s.to_json())
    assert t.agrees_with(s) and t.den == s.den and t.prec == s.prec


# frozen values: the classical expansion j = 1/q + 744 + 196884 q + 21493760 q^2 + ...
def test_j_expansion_known_coefficients():
    j = j_expansion(12)
    assert j.coeff(-1) == 1
    assert j.coeff(0) == 744
    assert j.coeff(1) == 196884
    assert j.coeff(2) == 21493760


def test_j_identity_with_eisenstein_and_delta():
    # independent residual check: j * Delta - E4^3 = 0 through the window
    P = 40
    j = j_expansion(P)
    n = P + 2
    delta = PX(1, n, {k + 1: Cyc.of(c) for k, c in enumerate(delta_coeffs(n)) if c})
    e4 = PX(1, n, {k: Cyc.of(c) for k, c in enumerate(eisenstein4(n)) if c})
    resid = j * delta - e4**3
    assert resid.is_zero()


def test_delta_is_cusp_form_tau_values():
    # Ramanujan tau spot values
    d = delta_coeffs(6)
    assert d[:6] == [1, -24, 252, -1472, 4830, -6048]
