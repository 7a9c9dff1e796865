"""Bi-rapports, tri-rapports, the involution Phi and the scalar -1 on an abstract groupoid."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .errors import (
    AxiomViolation, DegeneratePoints, IdentityScalar, ReferenceNotUnit, SelfConjugate,
    TooFewPoints,
)
from .groupoid import UNIT, ProjGroupoid
from .report import ValidationReport


@dataclass(frozen=True)
class RapportMatrix:
    """A cross ratio (two columns) or tri-rapport (three columns) with its value."""

    top: tuple
    bottom: tuple
    value: str

    def __str__(self):
        return f"({','.join(self.top)};{','.join(self.bottom)})"


def _idx(g: ProjGroupoid, *points) -> list[int]:
    return [g.point_index(p) for p in points]


def _require_distinct(*xs) -> None:
    if len(set(xs)) != len(xs):
        raise DegeneratePoints(f"points must be mutually distinct: {xs}")


def _cr(g: ProjGroupoid, a: int, b: int, c: int, d: int) -> int:
    """Scalar index of (A,B;C,D): the composite A -(C)-> B -(D)-> A."""
    A = g._arrow
    return g._lab[g._T[A(a, b, c)][A(b, a, d)]]


def _tri(g: ProjGroupoid, a, b, c, x, y, z) -> int:
    A = g._arrow
    return g._lab[g._chain(A(a, b, x), A(b, c, y), A(c, a, z))]


def _smul(g: ProjGroupoid, s: int, t: int) -> int:
    return g._smul[s][t]


def _sinv(g: ProjGroupoid, s: int) -> int:
    e = g._sidx[UNIT]
    return next(t for t in range(len(g.scalars)) if g._smul[s][t] == e)


def cross_ratio(g: ProjGroupoid, a: str, b: str, c: str, d: str) -> str:
    _require_distinct(a, b, c, d)
    return g.scalars[_cr(g, *_idx(g, a, b, c, d))]


def cross_ratio_matrix(g: ProjGroupoid, a, b, c, d) -> RapportMatrix:
    return RapportMatrix((a, b), (c, d), cross_ratio(g, a, b, c, d))


def _solve(g: ProjGroupoid, mu: int, a: int, b: int, c: int) -> int:
    # the unique arrow d: B -> A with (C: A -> B).d = mu_A
    d = g._T[g._inverse(g._arrow(a, b, c))][g._arrow(a, a, mu)]
    if g._dst[d] != a or g._lab[d] == c:
        raise AxiomViolation("no fourth point closes the triangle",
                             (g.points[a], g.points[b], g.points[c], g.scalars[mu]))
    return g._lab[d]


def solve_fourth_point(g: ProjGroupoid, mu: str, a: str, b: str, c: str) -> str:
    """The unique D with (A,B;C,D) = mu, read off the arrow closing the triangle."""
    if mu == UNIT:
        raise IdentityScalar("the unit is not a cross ratio of four distinct points")
    _require_distinct(a, b, c)
    if mu not in g._sidx:
        raise ValueError(f"unknown scalar {mu!r}")
    return g.points[_solve(g, g._sidx[mu], *_idx(g, a, b, c))]


def tri_rapport(g: ProjGroupoid, a, b, c, x, y, z) -> str:
    """Scalar of A -(X)-> B -(Y)-> C -(Z)-> A."""
    _require_distinct(a, b, c)
    if x in (a, b) or y in (b, c) or z in (c, a):
        raise DegeneratePoints(f"labels must avoid the endpoints they connect: ({a},{b},{c};{x},{y},{z})")
    return g.scalars[_tri(g, *_idx(g, a, b, c, x, y, z))]


def _cache(g: ProjGroupoid, key, compute):
    if key not in g._cache:
        g._cache[key] = compute(g)
    return g._cache[key]


def _derive_phi(g: ProjGroupoid) -> dict:
    n = g.n
    phi = {}
    witness = {}
    for a, b, c, d in permutations(range(n), 4):
        mu = _cr(g, a, b, c, d)
        val = _cr(g, a, c, b, d)
        if mu in phi and phi[mu] != val:
            raise AxiomViolation("middle-four interchange is not well defined",
                                 (tuple(g.points[i] for i in witness[mu]),
                                  (g.points[a], g.points[b], g.points[c], g.points[d])))
        phi.setdefault(mu, val)
        witness.setdefault(mu, (a, b, c, d))
    e = g._sidx[UNIT]
    if n >= 4 and set(phi) != set(range(len(g.scalars))) - {e}:
        missing = sorted(set(range(len(g.scalars))) - {e} - set(phi))
        raise AxiomViolation("some scalar != 1 is not a cross ratio",
                             tuple(g.scalars[s] for s in missing))
    for mu, val in phi.items():
        if val == e or phi.get(val) != mu:
            raise AxiomViolation("Phi is not an involution", (g.scalars[mu], g.scalars[val]))
    return phi


def derive_phi(g: ProjGroupoid) -> dict:
    """The involution on scalars != 1 induced by middle-four interchange.

    Empty for three-point groupoids. Well-definedness and the involution law
    are verified exhaustively before returning.
    """
    phi = _cache(g, "phi", _derive_phi)
    return {g.scalars[k]: g.scalars[v] for k, v in sorted(phi.items())}


def _minus_one(g: ProjGroupoid) -> int:
    first = None
    for a, b, c in permutations(range(g.n), 3):
        v = _tri(g, a, b, c, c, a, b)
        if first is None:
            first = (v, (a, b, c))
        elif v != first[0]:
            P = g.points
            raise AxiomViolation("(A,B,C;C,A,B) depends on the triple",
                                 (tuple(P[i] for i in first[1]), (P[a], P[b], P[c])))
    v = first[0]
    if g._smul[v][v] != g._sidx[UNIT]:
        raise AxiomViolation("(-1).(-1) != 1", (g.scalars[v],))
    return v


def minus_one(g: ProjGroupoid) -> str:
    return g.scalars[_cache(g, "minus_one", _minus_one)]


def harmonic_conjugate(g: ProjGroupoid, a: str, b: str, c: str) -> str:
    m = minus_one(g)
    if m == UNIT:
        raise SelfConjugate("-1 = 1: the harmonic conjugate coincides with C")
    h = solve_fourth_point(g, m, a, b, c)
    if g.arrow(b, a, h) != g.chain(g.arrow(b, c, a), g.arrow(c, a, b)):
        raise AxiomViolation("harmonic characterization fails", (a, b, c, h))
    return h


# the four generators of S4 acting on [A B / C D] = (a, b, c, d)
GENERATORS = {
    "row_swap": (2, 3, 0, 1),
    "column_swap": (1, 0, 3, 2),
    "lower_swap": (0, 1, 3, 2),
    "middle_four": (0, 2, 1, 3),
}


def classical_six(g: ProjGroupoid, mu: str) -> set:
    """{mu, 1/mu, Phi mu, 1/Phi mu, Phi(1/mu), 1/Phi(1/mu)} computed in the Phi-group."""
    phi = derive_phi(g)
    inv = g.scalar_inverse
    return {mu, inv(mu), phi[mu], inv(phi[mu]), phi[inv(mu)], inv(phi[inv(mu)])}


def permutation_descent_report(g: ProjGroupoid) -> ValidationReport:
    """Confirm that all 24 permutations of a 4-tuple descend along cross ratio formation.

    The four generators are checked against their expected descended maps
    (identity, identity, inversion, Phi); then every permutation is checked
    for descent, and every orbit's value set against the classical six.
    """
    if g.n < 4:
        raise TooFewPoints("permutation descent needs at least four points")
    phi_s = derive_phi(g)
    phi = {g._sidx[k]: g._sidx[v] for k, v in phi_s.items()}
    expected = {
        "row_swap": lambda s: s,
        "column_swap": lambda s: s,
        "lower_swap": lambda s: _sinv(g, s),
        "middle_four": lambda s: phi[s],
    }
    tuples = list(permutations(range(g.n), 4))
    value = {t: _cr(g, *t) for t in tuples}
    P, S = g.points, g.scalars
    rep = ValidationReport()

    def descent_witness(perm, target=None):
        seen = {}
        for t in tuples:
            image = value[tuple(t[i] for i in perm)]
            mu = value[t]
            if target is not None and image != target(mu):
                return ("wrong map", tuple(P[i] for i in t), S[mu], S[image])
            if mu in seen and seen[mu][0] != image:
                return (tuple(P[i] for i in seen[mu][1]), tuple(P[i] for i in t))
            seen.setdefault(mu, (image, t))
        return None

    for name, perm in GENERATORS.items():
        rep.add(f"descent_{name}", descent_witness(perm, expected[name]))

    w = None
    for perm in permutations(range(4)):
        w = descent_witness(perm)
        if w:
            w = (perm,) + w
            break
    rep.add("descent_all_24", w)

    w = None
    for t in tuples:
        mu = S[value[t]]
        orbit = {S[value[tuple(t[i] for i in perm)]] for perm in permutations(range(4))}
        if not orbit <= classical_six(g, mu):
            w = (tuple(P[i] for i in t), tuple(sorted(orbit)))
            break
    rep.add("orbit_in_classical_six", w)
    return rep


def orbit_values(g: ProjGroupoid, a, b, c, d) -> set:
    pts = (a, b, c, d)
    return {cross_ratio(g, *(pts[i] for i in perm)) for perm in permutations(range(4))}


def twelve_scalars(g: ProjGroupoid, a, b, c, d) -> list[tuple[str, str]]:
    """The six classical values of (A,B;C,D) and their negatives, each as a tri-rapport.

    A cross ratio (W,X;Y,Z) is realized as the tri-rapport (W,Y,Z;X,W,X); its
    negative as (Y,W,Z;Z,Y,X), which the sign-change law relates to
    (Y,W,X;Z,Y,Z) = (W,X;Y,Z). Each realization is checked against the
    bi-rapport and the scalar -1 before returning.
    """
    _require_distinct(a, b, c, d)
    m = minus_one(g)
    arrangements = [(a, b, c, d), (a, b, d, c), (a, c, b, d),
                    (a, c, d, b), (a, d, b, c), (a, d, c, b)]
    classical, negated = [], []
    for w, x, y, z in arrangements:
        bi = cross_ratio(g, w, x, y, z)
        tri = tri_rapport(g, w, y, z, x, w, x)
        if tri != bi:
            raise AxiomViolation("bi-rapport differs from its tri-rapport form", (w, x, y, z))
        classical.append((f"({w},{y},{z};{x},{w},{x})", tri))
        neg = tri_rapport(g, y, w, z, z, y, x)
        pos = tri_rapport(g, y, w, x, z, y, z)
        if pos != g.scalar_product(m, neg) or neg != g.scalar_product(m, bi):
            raise AxiomViolation("sign change law fails", (y, w, x, z))
        negated.append((f"({y},{w},{z};{z},{y},{x})", neg))
    return classical + negated


def sign_change_report(g: ProjGroupoid) -> ValidationReport:
    """(A,B,C;D,A,D) = -(A,B,D;D,A,C) for all distinct 4-tuples."""
    m = g._sidx[minus_one(g)]
    w = None
    for a, b, c, d in permutations(range(g.n), 4):
        if _tri(g, a, b, c, d, a, d) != g._smul[m][_tri(g, a, b, d, d, a, c)]:
            w = tuple(g.points[i] for i in (a, b, c, d))
            break
    rep = ValidationReport()
    rep.add("sign_change", w)
    return rep


def _cr_or_unit(g, a, b, e, e2) -> int:
    if e == e2:
        return g._sidx[UNIT]
    return _cr(g, a, b, e, e2)


def _tri_as_birapport_product(g, a, b, c, e, f, h, e2, f2, h2) -> tuple[int, int]:
    prod = _smul(g, _smul(g, _cr_or_unit(g, a, b, e, e2), _cr_or_unit(g, b, c, f, f2)),
                 _cr_or_unit(g, c, a, h, h2))
    return prod, _tri(g, a, b, c, e, f, h)


def tri_as_birapport_product(g: ProjGroupoid, a, b, c, e, f, h, e2, f2, h2) -> str:
    """(A,B;E,E').(B,C;F,F').(C,A;H,H') given a unit reference (A,B,C;E',F',H') = 1.

    A factor whose two lower entries coincide is taken to be 1.
    """
    if tri_rapport(g, a, b, c, e2, f2, h2) != UNIT:
        raise ReferenceNotUnit(f"({a},{b},{c};{e2},{f2},{h2}) is not 1")
    tri_rapport(g, a, b, c, e, f, h)
    prod, tri = _tri_as_birapport_product(g, *_idx(g, a, b, c, e, f, h, e2, f2, h2))
    if prod != tri:
        raise AxiomViolation("tri-rapport differs from the product of three cross ratios",
                             (a, b, c, e, f, h, e2, f2, h2))
    return g.scalars[prod]


def _unit_reference(g: ProjGroupoid, a: int, b: int, c: int) -> tuple[int, int, int]:
    others = [k for k in range(g.n) if k not in (a, b, c)]
    e2, f2 = others[0], others[1]
    ac = g._T[g._arrow(a, b, e2)][g._arrow(b, c, f2)]
    return e2, f2, g._lab[g._inverse(ac)]


def find_unit_reference(g: ProjGroupoid, a: str, b: str, c: str) -> tuple[str, str, str]:
    """Labels (E',F',H') with (A,B,C;E',F',H') = 1; E', F' are the least admissible points."""
    if g.n < 5:
        raise TooFewPoints("a unit reference needs at least five points")
    _require_distinct(a, b, c)
    ref = _unit_reference(g, *_idx(g, a, b, c))
    out = tuple(g.points[k] for k in ref)
    if tri_rapport(g, a, b, c, *out) != UNIT:
        raise AxiomViolation("constructed reference is not a unit", (a, b, c) + out)
    return out


def bi_tri_report(g: ProjGroupoid) -> ValidationReport:
    """Exhaustive check of the bi/tri factorization over all admissible tuples.

    Admissible: A,B,C distinct; E,F,H and E',F',H' valid labels; the primed
    reference has value 1.
    """
    n = g.n
    e = g._sidx[UNIT]
    w = None
    for a, b, c in permutations(range(n), 3):
        lab_ab = [k for k in range(n) if k not in (a, b)]
        lab_bc = [k for k in range(n) if k not in (b, c)]
        lab_ca = [k for k in range(n) if k not in (c, a)]
        refs = [(e2, f2, h2) for e2 in lab_ab for f2 in lab_bc for h2 in lab_ca
                if _tri(g, a, b, c, e2, f2, h2) == e]
        for e2, f2, h2 in refs:
            for x in lab_ab:
                for y in lab_bc:
                    for z in lab_ca:
                        prod, tri = _tri_as_birapport_product(g, a, b, c, x, y, z, e2, f2, h2)
                        if prod != tri and w is None:
                            w = tuple(g.points[i] for i in (a, b, c, x, y, z, e2, f2, h2))
    rep = ValidationReport()
    rep.add("bi_tri_factorization", w)
    return rep
