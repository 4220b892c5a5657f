"""The abelian twist families of the line and their exact verification.

Nine cases: a finite abelian subgroup A of PGL2(Q), its quotient map pi(T),
a trivializing matrix A(x, v) with entries in K = Q(v)[x]/(pi(x) - v), and
the twisted map pi_{A,v}(u) over Q(v).  The defining identities (the twisted
map equals pi composed with the inverse trivialization, and the matrix
trivializes the tautological cocycle) are checked by exact arithmetic in the
quotient ring.  All denominators are cleared first, so the verification uses
ring operations only; the fiber polynomial is monic in x, which keeps the
reduction division-free.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from math import isqrt

from .exactalg import CyclotomicNumber as Cyc
from .relate import (Polynomial, ProjectiveTransform, RationalFunction,
                     parse_ratfun)

_FIXTURE_CACHE = None


def _load_fixture():
    global _FIXTURE_CACHE
    if _FIXTURE_CACHE is None:
        path = os.path.join(os.path.dirname(__file__), "fixtures",
                            "families.json")
        with open(path) as fh:
            data = json.load(fh)
        assert [entry["case"] for entry in data] == list(range(9))
        _FIXTURE_CACHE = data
    return _FIXTURE_CACHE


def _const_of(r: RationalFunction) -> Cyc:
    assert r.is_constant(), "expected a constant"
    return r.num.coeff(0) if not r.num.is_zero() else Cyc.of(0)


def _poly_of(r: RationalFunction) -> Polynomial:
    assert r.is_polynomial(), "expected a polynomial"
    return r.num


def _pv_const(value) -> Polynomial:
    return Polynomial([value if isinstance(value, Cyc) else Cyc.of(value)])


_PV_ONE = _pv_const(1)


def is_rational_square(q: Fraction) -> bool:
    q = Fraction(q)
    if q < 0:
        return False
    return (isqrt(q.numerator) ** 2 == q.numerator
            and isqrt(q.denominator) ** 2 == q.denominator)


# ---------------------------------------------------------------------------
# arithmetic in Q[v][x] modulo the fiber polynomial


def _mod_monic(f: Polynomial, m: Polynomial) -> Polynomial:
    """Remainder of f by a monic m; coefficients need only ring operations."""
    n = m.degree()
    while f.degree() >= n:
        k = f.degree() - n
        shift = Polynomial([f.zero_coeff()] * k + [f.leading()])
        f = f - shift * m
    return f


class Residue:
    """Class of a polynomial in x modulo a fixed monic fiber polynomial.

    Coefficients are polynomials in v, so this is the order Q[v][x]/(m)
    inside the function field; ring operations only, no inversions.
    """

    __slots__ = ("poly", "mod")

    def __init__(self, poly: Polynomial, mod: Polynomial):
        self.poly = _mod_monic(poly, mod)
        self.mod = mod

    def __add__(self, other):
        return Residue(self.poly + other.poly, self.mod)

    def __sub__(self, other):
        return Residue(self.poly - other.poly, self.mod)

    def __neg__(self):
        return Residue(-self.poly, self.mod)

    def __mul__(self, other):
        return Residue(self.poly * other.poly, self.mod)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __eq__(self, other):
        if not isinstance(other, Residue):
            return NotImplemented
        return self.poly == other.poly

    def __repr__(self):
        return f"Residue({self.poly!r})"


def _res_const(pv: Polynomial, m: Polynomial) -> Residue:
    return Residue(Polynomial([pv]), m)


def _res_one(m: Polynomial) -> Residue:
    return _res_const(_PV_ONE, m)


def _fiber_polynomial(base_map: RationalFunction) -> Polynomial:
    """P(x) - v*Q(x) as a polynomial in x with coefficients in Q[v]."""
    p, q = base_map.num, base_map.den
    assert p.degree() > q.degree(), "quotient map must have its pole at infinity"
    assert (p.leading() - p.one_coeff()).is_zero(), "fiber polynomial is not monic"
    coeffs = []
    for i in range(p.degree() + 1):
        ci = [p.coeff(i)]
        if i <= q.degree():
            ci.append(-q.coeff(i))
        coeffs.append(Polynomial(ci))
    return Polynomial(coeffs)


def _clear_denominators(entries):
    """Scale a matrix of x-coefficient lists in Q(v) to polynomial entries.

    entries: four lists of RationalFunction coefficients (ascending x power).
    Returns four Polynomials in x with Q[v] coefficients; the common scaling
    is projective and drops out of every check.
    """
    lead = Polynomial([Cyc.of(1)])
    lcm = lead
    for entry in entries:
        for r in entry:
            g = lcm.gcd(r.den)
            quo, rem = r.den.divmod(g)
            assert rem.is_zero()
            lcm = lcm * quo
    out = []
    for entry in entries:
        coeffs = []
        for r in entry:
            quo, rem = (r.num * lcm).divmod(r.den)
            assert rem.is_zero()
            coeffs.append(quo)
        out.append(Polynomial(coeffs))
    return out


# ---------------------------------------------------------------------------
# the family record


class TwistFamily:
    """An abelian group of Mobius maps with its quotient map and twist data."""

    __slots__ = ("case_id", "alpha", "group", "base_map", "trivializer",
                 "specialized", "modulus")

    def __init__(self, case_id: int, alpha, group, base_map: RationalFunction,
                 trivializer=None, specialized=None):
        deg = base_map.degree()
        assert len(group) == deg, "group order must equal the map degree"
        assert any(g.is_identity() for g in group), "group misses the identity"
        for g in group:
            assert base_map.compose(g.as_ratfun()) == base_map, \
                "group element does not stabilize the quotient map"
        for g in group:
            for h in group:
                gh = g.compose(h)
                assert gh == h.compose(g), "group is not abelian"
                assert any(gh == k for k in group), "group is not closed"
        self.case_id = case_id
        self.alpha = alpha
        self.group = list(group)
        self.base_map = base_map
        self.trivializer = trivializer
        self.specialized = specialized
        self.modulus = (_fiber_polynomial(base_map)
                        if trivializer is not None or specialized is not None
                        else None)
        if trivializer is not None:
            n = self.modulus.degree()
            assert len(trivializer) == 4
            for p in trivializer:
                assert p.degree() < n, "trivializer entry not reduced"
        if specialized is not None:
            num, den = specialized
            assert max(len(num), len(den)) == deg + 1

    def __repr__(self):
        extra = f", alpha={self.alpha}" if self.alpha is not None else ""
        return f"TwistFamily(case {self.case_id}{extra}, order {len(self.group)})"


class SpecializationPoint:
    """A rational value of v together with its regularity for the family."""

    __slots__ = ("v", "regular")

    def __init__(self, family: TwistFamily, v):
        self.v = Fraction(v)
        m0 = _specfiber(family, self.v)
        self.regular = m0.gcd(m0.derivative()).degree() == 0

    def __repr__(self):
        return f"SpecializationPoint({self.v}, regular={self.regular})"


def _specfiber(family: TwistFamily, v: Fraction) -> Polynomial:
    p, q = family.base_map.num, family.base_map.den
    return p - q.scale(Cyc.of(v))


def family_data(case_id: int, alpha=None) -> TwistFamily:
    """Load one of the nine stored families, substituting alpha if required."""
    if not isinstance(case_id, int) or not 0 <= case_id <= 8:
        raise ValueError(f"unknown case {case_id!r}")
    needs_alpha = case_id in (2, 5)
    if needs_alpha and alpha is None:
        raise ValueError(f"case {case_id} requires alpha")
    if not needs_alpha and alpha is not None:
        raise ValueError(f"case {case_id} does not take alpha")
    if needs_alpha:
        alpha = Fraction(alpha)
        if alpha == 0:
            raise ValueError("alpha must be non-zero")
        if case_id == 2 and is_rational_square(alpha):
            raise ValueError("alpha must not be a square")
    raw = _load_fixture()[case_id]
    sub = (lambda s: s.replace("a", f"({alpha})")) if needs_alpha else (lambda s: s)
    group = [ProjectiveTransform(*(_const_of(parse_ratfun(sub(e))) for e in mat))
             for mat in raw["group"]]
    base_map = parse_ratfun(sub(raw["pi"]))
    trivializer = _clear_denominators(
        [[parse_ratfun(sub(c)) for c in entry] for entry in raw["trivializer"]])
    num = [_poly_of(parse_ratfun(sub(c))) for c in raw["specialized"]["num"]]
    den = [_poly_of(parse_ratfun(sub(c))) for c in raw["specialized"]["den"]]
    return TwistFamily(case_id, alpha if needs_alpha else None, group,
                       base_map, trivializer, (num, den))


# ---------------------------------------------------------------------------
# verification of the stored identities


def _compose_homogeneous(coeffs, wn: Polynomial, wd: Polynomial, n: int,
                         m: Polynomial) -> Polynomial:
    """sum_i c_i * wn^i * wd^(n-i) for rational c_i, over the residue ring."""
    one_t = Polynomial([_res_one(m)])
    npows, dpows = [one_t], [one_t]
    for _ in range(n):
        npows.append(npows[-1] * wn)
        dpows.append(dpows[-1] * wd)
    acc = Polynomial([])
    for i, ci in enumerate(coeffs):
        if ci.is_zero():
            continue
        acc = acc + (npows[i] * dpows[n - i]).scale(_res_const(_pv_const(ci), m))
    return acc


def _proportional(ps, qs) -> bool:
    if all(p.is_zero() for p in ps) or all(q.is_zero() for q in qs):
        return False
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            if not ps[i] * qs[j] == ps[j] * qs[i]:
                return False
    return True


def _substituted_matrix(family: TwistFamily, g: ProjectiveTransform,
                        m: Polynomial, n: int):
    """Trivializer entries with x replaced by g(x), homogenized by degree n-1."""
    ga, gb, gc, gd = g.entries()
    gn = Polynomial([_pv_const(gb), _pv_const(ga)])
    gdp = Polynomial([_pv_const(gd), _pv_const(gc)])
    one = Polynomial([_PV_ONE])
    npows, dpows = [one], [one]
    for _ in range(n - 1):
        npows.append(npows[-1] * gn)
        dpows.append(dpows[-1] * gdp)
    out = []
    for p in family.trivializer:
        acc = Polynomial([])
        for i, ci in enumerate(p.c):
            if ci.is_zero():
                continue
            acc = acc + (npows[i] * dpows[(n - 1) - i]).scale(ci)
        out.append(Residue(acc, m))
    return out


def verify_family_identity(family: TwistFamily) -> bool:
    """Check pi composed with the inverse trivialization against the stored twist.

    Both sides are compared after cross multiplication in the quotient ring,
    and the matrix is checked to carry each group element to its own Galois
    substitution (projectively), which is the cocycle identity.
    """
    assert family.trivializer is not None and family.specialized is not None, \
        "family carries no trivializer data"
    m = family.modulus
    n = m.degree()
    a11, a12, a21, a22 = (Residue(p, m) for p in family.trivializer)
    assert not (a11 * a22 - a12 * a21).is_zero(), "degenerate trivializer"
    # inverse as a Mobius map: t -> (a22*t - a12)/(-a21*t + a11)
    wn = Polynomial([-a12, a22])
    wd = Polynomial([a11, -a21])
    pn = _compose_homogeneous(family.base_map.num.c, wn, wd, n, m)
    qd = _compose_homogeneous(family.base_map.den.c, wn, wd, n, m)
    assert not qd.is_zero(), "inverse trivialization collapses the map"
    num, den = family.specialized
    ns = Polynomial([_res_const(c, m) for c in num])
    ds = Polynomial([_res_const(c, m) for c in den])
    if not pn * ds == qd * ns:
        return False
    for g in family.group:
        if g.is_identity():
            continue
        rg = [_res_const(_pv_const(e), m) for e in g.entries()]
        lhs = (a11 * rg[0] + a12 * rg[2], a11 * rg[1] + a12 * rg[3],
               a21 * rg[0] + a22 * rg[2], a21 * rg[1] + a22 * rg[3])
        rhs = _substituted_matrix(family, g, m, n)
        if not _proportional(lhs, rhs):
            return False
    return True


# ---------------------------------------------------------------------------
# specialization and conjugation


def specialize(family: TwistFamily, v) -> RationalFunction:
    """Substitute a regular rational value for v in the stored twisted map."""
    if family.specialized is None:
        raise ValueError("conjugated family has no stored twist data")
    point = SpecializationPoint(family, v)
    if not point.regular:
        raise ValueError(f"map is ramified over v = {point.v}")
    val = Cyc.of(point.v)
    num, den = family.specialized
    out = RationalFunction(Polynomial([c.eval(val) for c in num]),
                           Polynomial([c.eval(val) for c in den]))
    if out.degree() != family.base_map.degree():
        raise ValueError(f"degenerate fiber at v = {point.v}")
    return out


def conjugate_family(family: TwistFamily, c: ProjectiveTransform) -> TwistFamily:
    """Move the family to a conjugate coordinate: group CaC^-1, map pi o C^-1."""
    if c.is_identity():
        return TwistFamily(family.case_id, family.alpha, family.group,
                           family.base_map, family.trivializer,
                           family.specialized)
    ci = c.inverse()
    group = [c.compose(a).compose(ci) for a in family.group]
    base_map = family.base_map.compose(ci.as_ratfun())
    return TwistFamily(family.case_id, family.alpha, group, base_map)


# ---------------------------------------------------------------------------
# groups cut out by a coset pairing


def group_from_cocycle_description(g0_spec, gamma):
    """Filter an ambient group by the determinant pairing g*G = phi(det g).

    gamma packages the homomorphism data as (normal_gens, rep_by_det):
    generators of a normal subgroup G mod the modulus of g0_spec, and for
    each determinant class a coset representative of its image in G0/G.
    Returns the spec of the subgroup cut out by the pairing.
    """
    from .grouprec import (AdelicGroupSpec, gl2_closure, generating_subset,
                           mat_det_mod, mat_inv_mod, mat_mul_mod)
    m = g0_spec.modulus
    normal_gens, reps = gamma
    ambient = g0_spec.elements()
    normal = gl2_closure(normal_gens, m)
    assert normal <= ambient, "G is not contained in the ambient group"
    for x in g0_spec.generators:
        xi = mat_inv_mod(x, m)
        for y in normal_gens:
            yt = y if isinstance(y, tuple) and len(y) == 4 else tuple(
                e % m for row in y for e in row)
            conj = mat_mul_mod(mat_mul_mod(x, yt, m), xi, m)
            assert conj in normal, "G is not normal in the ambient group"
    reps = {d % m: tuple(e % m for e in rep) for d, rep in reps.items()}
    dets = {mat_det_mod(g, m) for g in ambient}
    missing = dets - set(reps)
    if missing:
        raise ValueError(f"pairing not defined for determinant classes {sorted(missing)}")
    for d, rep in reps.items():
        if rep not in ambient:
            raise ValueError(f"representative for determinant {d} lies outside G0")
    for d1 in dets:
        for d2 in dets:
            prod = mat_mul_mod(reps[d1], reps[d2], m)
            against = reps[(d1 * d2) % m]
            if mat_mul_mod(mat_inv_mod(against, m), prod, m) not in normal:
                raise ValueError("pairing is not multiplicative mod the modulus")
    members = [g for g in sorted(ambient)
               if mat_mul_mod(mat_inv_mod(reps[mat_det_mod(g, m)], m), g, m) in normal]
    gens = generating_subset(members, m)
    return AdelicGroupSpec(m, gens)
