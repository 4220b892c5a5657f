"""Open subgroups of GL2(Zhat) from twisted coordinates, and their conics.

An open subgroup G with full determinant and -I is described by its image
mod a level M.  This module recovers generators of G from the action of the
normalizer of H = (Gamma mod M) on twisted hauptmodul coordinates, and in
the other direction produces a conic model of the curve attached to G by
building the descent cocycle from the coordinate's Galois behaviour.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .congruence import reduce_mat, sl2_elements, sl2_order
from .exactalg import CyclotomicNumber as Cyc
from .exactalg import Mat2, factorize, sl2_lift
from .qseries import galois_on_series, j_expansion
from .relate import ProjectiveTransform, RelateError, nullspace
from .twist import (Cocycle, Conic, conic_from_cocycle, conic_has_point,
                    transform_galois, unit_generators)


def mat_mul_mod(x, y, n):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % n, (a * f + b * h) % n,
            (c * e + d * g) % n, (c * f + d * h) % n)


def mat_det_mod(x, n) -> int:
    return (x[0] * x[3] - x[1] * x[2]) % n


def mat_inv_mod(x, n):
    a, b, c, d = x
    di = pow(a * d - b * c, -1, n)
    return ((d * di) % n, (-b * di) % n, (-c * di) % n, (a * di) % n)


def gl2_order(n: int) -> int:
    if n == 1:
        return 1
    order = n**4
    for p in factorize(n):
        order = order * (p - 1) * (p * p - 1) // p**3
    return order


def gl2_closure(gens, n) -> frozenset:
    """Subgroup of GL2(Z/n) generated by the given residues."""
    if n == 1:
        return frozenset({(0, 0, 0, 0)})
    gens = [g if isinstance(g, tuple) and len(g) == 4 else reduce_mat(g, n)
            for g in gens]
    for g in gens:
        assert mat_det_mod(g, n) in _units(n), \
            f"generator not invertible mod {n}: {g}"
    ident = (1 % n, 0, 0, 1 % n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mat_mul_mod(x, g, n)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _units(n: int) -> frozenset:
    return frozenset(d for d in range(max(n, 1)) if _coprime(d, n))


def _coprime(d: int, n: int) -> bool:
    while n:
        d, n = n, d % n
    return d == 1


def generating_subset(elements, n) -> list:
    """Reduce a finite subgroup of GL2(Z/n) to a short generating list."""
    elements = sorted(elements)
    gens = []
    have = gl2_closure([], n)
    for x in elements:
        if x not in have:
            gens.append(x)
            have = gl2_closure(gens, n)
            if len(have) == len(elements):
                break
    assert len(have) == len(elements), "generating subset does not close"
    return gens


class AdelicGroupSpec:
    """Level-M description of an open subgroup: modulus plus generators.

    The generated subgroup of GL2(Z/M) must contain -I and surject onto
    the units under the determinant; both are checked at construction.
    """

    __slots__ = ("modulus", "generators", "_elements")

    def __init__(self, modulus: int, generators):
        assert modulus >= 1
        self.modulus = modulus
        gens = sorted({tuple(e % modulus for e in g)
                       if isinstance(g, tuple) and len(g) == 4
                       else reduce_mat(g, modulus)
                       for g in generators})
        self.generators = gens
        self._elements = gl2_closure(gens, modulus)
        minus_i = (-1 % modulus, 0, 0, -1 % modulus)
        assert minus_i in self._elements, "group does not contain -I"
        dets = {mat_det_mod(g, modulus) for g in self._elements}
        assert dets == set(_units(modulus)), "determinant is not surjective"

    def elements(self) -> frozenset:
        return self._elements

    def order(self) -> int:
        return len(self._elements)

    def contains(self, mat) -> bool:
        m = mat if isinstance(mat, tuple) and len(mat) == 4 else reduce_mat(mat, self.modulus)
        return tuple(e % self.modulus for e in m) in self._elements

    @property
    def contains_minus_i(self) -> bool:
        return True

    @property
    def det_surjective(self) -> bool:
        return True

    def sl2_intersection(self) -> frozenset:
        one = 1 % self.modulus
        return frozenset(g for g in self._elements if mat_det_mod(g, self.modulus) == one)

    def sl2_index(self) -> int:
        """Index of the SL2 part inside SL2(Z/M)."""
        part = len(self.sl2_intersection())
        total = sl2_order(self.modulus)
        assert total % part == 0
        return total // part

    def index(self) -> int:
        total = gl2_order(self.modulus)
        assert total % self.order() == 0
        return total // self.order()

    def conjugate(self, mat) -> "AdelicGroupSpec":
        m = self.modulus
        mi = mat_inv_mod(mat, m)
        gens = [mat_mul_mod(mat_mul_mod(mat, g, m), mi, m) for g in self.generators]
        return AdelicGroupSpec(m, gens)

    def to_json(self) -> dict:
        return {"modulus": self.modulus,
                "generators": [list(g) for g in self.generators]}

    @staticmethod
    def from_json(data) -> "AdelicGroupSpec":
        return AdelicGroupSpec(data["modulus"],
                               [tuple(g) for g in data["generators"]])

    def __eq__(self, other):
        if not isinstance(other, AdelicGroupSpec):
            return NotImplemented
        return (self.modulus == other.modulus
                and self._elements == other._elements)

    def __repr__(self):
        return (f"AdelicGroupSpec(mod {self.modulus}, "
                f"{len(self.generators)} gens, order {self.order()})")


class RecoveryAmbiguity(Exception):
    """Zero or several full-determinant subgroups fix the coordinate."""

    def __init__(self, candidates):
        super().__init__(f"{len(candidates)} full-determinant candidates "
                         "fix the coordinate")
        self.candidates = candidates


class Order3Obstruction(Exception):
    """An odd-order twist cannot change rational-point status."""


def group_image_mod(group, m: int) -> frozenset:
    """Image of a congruence subgroup in SL2(Z/m), m a multiple of its level."""
    n = group.N
    assert m % n == 0, "modulus must be a multiple of the level"
    if m == n:
        return frozenset(group.H)
    return frozenset(g for g in sl2_elements(m)
                     if tuple(e % n for e in g) in group.H)


def gl2_elements(m: int) -> list:
    if m == 1:
        return [(0, 0, 0, 0)]
    units = _units(m)
    out = []
    for a in range(m):
        for b in range(m):
            for c in range(m):
                for d in range(m):
                    if (a * d - b * c) % m in units:
                        out.append((a, b, c, d))
    return out


def normalizer_mod(H: frozenset, m: int) -> list:
    """All elements of GL2(Z/m) normalizing the subgroup H of SL2(Z/m)."""
    hgens = generating_subset(H, m)
    out = []
    for g in gl2_elements(m):
        gi = mat_inv_mod(g, m)
        if all(mat_mul_mod(mat_mul_mod(g, x, m), gi, m) in H for x in hgens):
            out.append(g)
    return out


def coset_reps(normalizer: list, H: frozenset, m: int) -> list:
    seen = set()
    reps = []
    for g in sorted(normalizer):
        if g not in seen:
            reps.append(g)
            seen.update(mat_mul_mod(g, x, m) for x in H)
    return reps


# ---------------------------------------------------------------------------
# twisted hauptmodul coordinates and the normalizer action


class TwistedCoordinate:
    """A coordinate u = C(h): a PGL2(K_M) transform applied to a hauptmodul."""

    __slots__ = ("haupt", "transform", "modulus")

    def __init__(self, haupt, transform: ProjectiveTransform, modulus: int):
        assert modulus % haupt.group.N == 0, \
            "modulus must be a multiple of the group level"
        for e in transform.entries():
            assert modulus % e.reduce().n == 0, \
                "transform coefficients escape the coordinate field"
        self.haupt = haupt
        self.transform = transform
        self.modulus = modulus

    def expansion(self, prec: int):
        return self.transform.as_ratfun().eval_series(self.haupt.expansion(prec))

    def covers_j(self, pi_map, upto: int = 20) -> bool:
        """Whether pi_map(u) = j holds through q^upto, exactly per coefficient."""
        width = self.haupt.width
        extra = pi_map.degree() // width + 3
        series = pi_map.eval_series(self.expansion(upto + extra))
        rhs = j_expansion(int(series.precision()) + 1)
        return series.agrees_with(rhs, upto=upto)

    def __eq__(self, other):
        if not isinstance(other, TwistedCoordinate):
            return NotImplemented
        return (self.haupt is other.haupt and self.modulus == other.modulus
                and self.transform == other.transform)

    def __repr__(self):
        return (f"TwistedCoordinate({self.haupt.group.label}, mod "
                f"{self.modulus}, {[repr(e) for e in self.transform.entries()]})")


def _default_prec(haupt) -> int:
    ind = haupt.group.psl_index
    w = haupt.width
    return (2 * ind + 10 + w - 1) // w + 2


def star_series(haupt, mat, m: int, prec: int):
    """Normalized expansion of h*A for A in GL2(Z/m): slash the determinant-1
    part, then apply sigma_d to the coefficients."""
    assert haupt.conjugator is None, \
        "star action needs the hauptmodul on the untransported model"
    n = haupt.group.N
    d = mat_det_mod(mat, m)
    if n == 1:
        slashed = haupt.expansion(prec)
    else:
        dn = d % n
        di = pow(dn, -1, n)
        bn = (mat[0] % n, (mat[1] * di) % n, mat[2] % n, (mat[3] * di) % n)
        lift = sl2_lift(Mat2(n, *bn))
        raw = haupt.expression.slash(lift).expansion(prec)
        slashed = (raw - haupt.shift).scale(haupt.scale.inverse())
    return galois_on_series(slashed, (m, d)).reduce_coeffs()


def mobius_from_series(target, source) -> ProjectiveTransform:
    """The unique degree-1 transform with xi(source) = target.

    Linear solve over all shared exponents, so the returned transform
    satisfies the relation through the full precision window.
    """
    prod = target * source
    lo = min(source.valuation(), prod.valuation(), target.valuation(),
             Fraction(0))
    hi = min(source.precision(), prod.precision(), target.precision())
    den = lcm(source.den, target.den, prod.den)
    rows = []
    e = lo
    while e < hi:
        row = [source.coeff(e), Cyc.of(1) if e == 0 else Cyc.of(0),
               -(prod.coeff(e)), -(target.coeff(e))]
        if any(not x.is_zero() for x in row):
            rows.append(row)
        e += Fraction(1, den)
    assert len(rows) >= 6, "window too short to determine a transform"
    basis = nullspace(rows)
    if not basis:
        raise RelateError("series is not a degree-1 transform of the coordinate")
    assert len(basis) == 1, "transform underdetermined; raise precision"
    a, b, c, d = basis[0]
    assert not (a * d - b * c).is_zero(), "transform is degenerate"
    return ProjectiveTransform(a, b, c, d)


def act_on_delta(u: TwistedCoordinate, mat, prec=None) -> TwistedCoordinate:
    """Right action of a normalizer residue: u*A = sigma_d(C)(xi_A(h))."""
    m = u.modulus
    mat = tuple(int(e) % m for e in mat)
    d = mat_det_mod(mat, m)
    if prec is None:
        prec = _default_prec(u.haupt)
    source = u.haupt.expansion(prec)
    target = star_series(u.haupt, mat, m, prec)
    xi = mobius_from_series(target, source)
    moved = transform_galois(u.transform, d).compose(xi)
    return TwistedCoordinate(u.haupt, moved, m)


# ---------------------------------------------------------------------------
# recovering the open group from a coordinate


def recover_group(u: TwistedCoordinate, group, modulus=None) -> AdelicGroupSpec:
    """Preimage in GL2(Z/M) of the stabilizer of u in N(H)/H."""
    m = u.modulus if modulus is None else modulus
    assert m == u.modulus, "modulus disagrees with the coordinate"
    assert group is u.haupt.group, "coordinate was built on a different group"
    H = group_image_mod(group, m)
    reps = coset_reps(normalizer_mod(H, m), H, m)
    prec = _default_prec(u.haupt)
    stab = [A for A in reps
            if act_on_delta(u, A, prec).transform == u.transform]
    dets = {mat_det_mod(A, m) for A in stab}
    if dets != set(_units(m)):
        raise ValueError("stabilizer misses determinant classes; the "
                         "coordinate does not give a model over Q")
    members = sorted({mat_mul_mod(A, x, m) for A in stab for x in H})
    spec = AdelicGroupSpec(m, generating_subset(members, m))
    assert spec.order() == len(members)
    assert spec.sl2_intersection() == H, "SL2 part grew beyond the given group"
    assert spec.index() == spec.sl2_index()
    return spec


def _close_cosets(seed, mul, ident) -> frozenset:
    seen = {ident} | set(seed)
    frontier = list(seen)
    while frontier:
        new = []
        for x in frontier:
            for g in seed:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return frozenset(seen)


def _all_subgroups(elems: list, mul, ident) -> set:
    base = frozenset({ident})
    subs = {base}
    frontier = [base]
    pool = set(elems)
    while frontier:
        new = []
        for S in frontier:
            for x in elems:
                if x in S:
                    continue
                T = _close_cosets(S | {x}, mul, ident)
                if T <= pool and T not in subs:
                    subs.add(T)
                    new.append(T)
        frontier = new
    return subs


def recover_group_alt(group, modulus: int, u: TwistedCoordinate) -> AdelicGroupSpec:
    """Cross-validation path: enumerate the full-determinant subgroups of
    N(H)/H fixing u.  Unique candidate required; anything else is surfaced."""
    m = modulus
    assert m == u.modulus, "modulus disagrees with the coordinate"
    H = group_image_mod(group, m)
    reps = coset_reps(normalizer_mod(H, m), H, m)
    assert len(reps) <= 2**14, "quotient too large here; use recover_group"
    label = {}
    for r in reps:
        for x in H:
            label[mat_mul_mod(r, x, m)] = r
    ident = label[(1 % m, 0, 0, 1 % m)]

    def cmul(x, y):
        return label[mat_mul_mod(x, y, m)]

    prec = _default_prec(u.haupt)
    fixing = [r for r in reps
              if act_on_delta(u, r, prec).transform == u.transform]
    units = set(_units(m))
    specs = []
    for S in sorted(_all_subgroups(fixing, cmul, ident), key=sorted):
        if {mat_det_mod(g, m) for g in S} != units:
            continue
        members = sorted({mat_mul_mod(r, x, m) for r in S for x in H})
        specs.append(AdelicGroupSpec(m, generating_subset(members, m)))
    if len(specs) != 1:
        raise RecoveryAmbiguity(specs)
    return specs[0]


# ---------------------------------------------------------------------------
# conic models from group data


def conic_model_from_group(spec: AdelicGroupSpec, group, haupt,
                           prec=None) -> Conic:
    """Rational conic model of the curve attached to the group spec.

    The descent cocycle is zeta(sigma_g) = phi^-1 where h*g = phi(h); over
    Q (modulus at most 2) the model is the standard split conic.
    """
    m = spec.modulus
    H = group_image_mod(group, m)
    assert spec.sl2_intersection() == H, \
        "the group's SL2 part is not the given congruence group"
    if m <= 2:
        return Conic.standard()
    if prec is None:
        prec = _default_prec(haupt)
    source = haupt.expansion(prec)
    elements = sorted(spec.elements())
    images = {}
    for dgen in unit_generators(m):
        g = next(x for x in elements if mat_det_mod(x, m) == dgen)
        target = star_series(haupt, g, m, prec)
        phi = mobius_from_series(target, source)
        images[dgen] = phi.inverse()
    zeta = Cocycle(m, images)
    assert zeta.validate(), "descent data is not a cocycle"
    return conic_from_cocycle(zeta)


def second_twist_conic(conic: Conic, twist_order: int) -> Conic:
    """Twist a conic-model curve by a homomorphism of odd order.

    Restriction-corestriction along the odd-degree layer fixes the conic
    class, so the model passes through unchanged when soluble and a
    pointless conic can never be repaired this way: that failure is the
    order-3 obstruction.
    """
    assert twist_order >= 3 and twist_order % 2 == 1
    point, _ = conic_has_point(conic)
    if point is None:
        raise Order3Obstruction(
            f"an order-{twist_order} twist of a pointless conic "
            "has no rational points")
    return conic


def family_member_coordinate(family, v, haupt, root: Cyc,
                             modulus: int) -> TwistedCoordinate:
    """Coordinate u = A(h) of the family member at v, sending x to the root."""
    assert family.trivializer is not None, "family carries no trivializer data"
    vc = Cyc.of(Fraction(v))
    p, q = family.base_map.num, family.base_map.den
    assert (p.eval(root) - q.eval(root) * vc).is_zero(), \
        "root does not lie on the fiber over v"
    ents = []
    for entry in family.trivializer:
        acc = Cyc.of(0)
        power = Cyc.of(1)
        for pv in entry.c:
            acc = acc + pv.eval(vc) * power
            power = power * root
        ents.append(acc.reduce())
    c_mat = ProjectiveTransform(*ents)
    return TwistedCoordinate(haupt, c_mat, modulus)
