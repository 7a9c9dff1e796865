"""Phi-groups, field reconstruction, projectivities and coordinatization."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .coordinate import ProjPoint, generate_groupoid
from .errors import (
    AxiomViolation, IncompatibleScalarMap, NotAField, ParseError, ProjLineError, TooFewPoints,
    UnsupportedFourPoint, VerificationFailure,
)
from .fields import FieldTable, validate_field
from .groupoid import UNIT, Morphism, ProjGroupoid, check_axioms, validate_structure
from .rapport import _cr, derive_phi, minus_one, solve_fourth_point, cross_ratio
from .report import ValidationReport


@dataclass(frozen=True)
class PhiGroup:
    """Abelian group with an involution on its non-unit elements and a chosen -1."""

    elements: tuple
    mul: tuple
    phi: dict
    minus_one: str

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "mul", tuple(tuple(r) for r in self.mul))
        object.__setattr__(self, "_idx", {e: i for i, e in enumerate(self.elements)})

    def times(self, s: str, t: str) -> str:
        return self.mul[self._idx[s]][self._idx[t]]

    def inv(self, s: str) -> str:
        return next(t for t in self.elements if self.times(s, t) == UNIT)

    def check(self) -> ValidationReport:
        E = self.elements
        rep = ValidationReport()
        w = None
        if UNIT not in E:
            w = ("no unit",)
        else:
            for a in E:
                if self.times(UNIT, a) != a or not any(self.times(a, b) == UNIT for b in E):
                    w = ("identity/inverse", a)
                    break
                for b in E:
                    if self.times(a, b) != self.times(b, a):
                        w = ("commutativity", a, b)
                        break
                    for c in E:
                        if self.times(self.times(a, b), c) != self.times(a, self.times(b, c)):
                            w = ("associativity", a, b, c)
                            break
                    if w:
                        break
                if w:
                    break
        rep.add("abelian_group", w)
        domain = set(E) - {UNIT}
        w = None
        if set(self.phi) != domain:
            w = ("domain", tuple(sorted(domain ^ set(self.phi))))
        else:
            for s, t in self.phi.items():
                if t not in domain or self.phi[t] != s:
                    w = (s, t)
                    break
        rep.add("phi_involution", w)
        m = self.minus_one
        rep.add("minus_one_order", None if m in E and self.times(m, m) == UNIT else (m,))
        return rep


@dataclass(frozen=True)
class Projectivity:
    """A point map plus a scalar map; arrows are transported label-wise."""

    point_map: dict
    scalar_map: dict

    def apply(self, m) -> Morphism:
        m = Morphism(*m)
        P = self.point_map
        if m.endo:
            return Morphism(P[m.src], P[m.src], self.scalar_map[m.label])
        return Morphism(P[m.src], P[m.dst], P[m.label])

    def to_json(self) -> dict:
        return {"points": [[a, b] for a, b in self.point_map.items()],
                "scalars": [[a, b] for a, b in self.scalar_map.items()]}


def extract_phi_group(g: ProjGroupoid) -> PhiGroup:
    """Scalar group, Phi and -1 of a groupoid satisfying the four axioms."""
    rep = check_axioms(g)
    if not rep.ok:
        raise AxiomViolation("groupoid fails the axioms", rep.violations[0].witness)
    return PhiGroup(g.scalars, g.scalar_mul, derive_phi(g), minus_one(g))


def _fresh_zero(elements) -> str:
    z = "0"
    while z in elements:
        z += "'"
    return z


def reconstruct_field(pg: PhiGroup) -> tuple[FieldTable, ValidationReport]:
    """Candidate field on G + {0}.

    Multiplication extends the group by 0.x = x.0 = 0. Addition is
    l + m = l.Phi((-1).l^-1.m), with l + 0 = 0 + l = l and l + (-l) = 0
    (the one case the Phi formula cannot reach). Nothing else is assumed:
    the returned report decides whether the result is a field.
    """
    well = pg.check()
    if not well.ok:
        raise ValueError("malformed Phi-group:\n" + well.format())
    zero = _fresh_zero(pg.elements)
    elements = (zero,) + pg.elements

    def mul(a, b):
        return zero if zero in (a, b) else pg.times(a, b)

    def add(a, b):
        if a == zero:
            return b
        if b == zero:
            return a
        r = pg.times(pg.times(pg.minus_one, pg.inv(a)), b)
        if r == UNIT:
            return zero
        return pg.times(a, pg.phi[r])

    table = FieldTable(elements, zero, UNIT,
                       [[add(a, b) for b in elements] for a in elements],
                       [[mul(a, b) for b in elements] for a in elements])
    return table, validate_field(table)


def _axioms_ok(g: ProjGroupoid, axioms) -> ValidationReport:
    key = ("axioms", tuple(axioms))
    if key not in g._cache:
        structure = g._cache.get("structure")
        if structure is None:
            structure = g._cache["structure"] = validate_structure(g)
        g._cache[key] = check_axioms(g, axioms, structure=structure)
    return g._cache[key]


def _minus_one_or_none(g: ProjGroupoid):
    try:
        return minus_one(g)
    except AxiomViolation:
        return None


def _phi_or_none(g: ProjGroupoid):
    try:
        return derive_phi(g)
    except AxiomViolation:
        return None


def _scalar_map_witness(p: dict, src: ProjGroupoid, dst: ProjGroupoid):
    """None if p is an injective, Phi-compatible group homomorphism."""
    if set(p) != set(src.scalars) or any(v not in dst._sidx for v in p.values()):
        return ("not total", tuple(sorted(set(src.scalars) ^ set(p))))
    if len(set(p.values())) != len(p):
        return ("not injective",)
    if p[UNIT] != UNIT:
        return ("unit", p[UNIT])
    for s in src.scalars:
        for t in src.scalars:
            if p[src.scalar_product(s, t)] != dst.scalar_product(p[s], p[t]):
                return ("not multiplicative", s, t)
    # Phi exists only where middle-four interchange descends; compatibility
    # is vacuous when neither side has it.
    phi, phi2 = _phi_or_none(src), _phi_or_none(dst)
    if phi is None or phi2 is None:
        return None if phi is phi2 else ("not Phi-compatible", "Phi defined on one side only")
    for s, t in phi.items():
        if phi2.get(p[s]) != p[t]:
            return ("not Phi-compatible", s)
    return None


def _image_array(pr: Projectivity, src: ProjGroupoid, dst: ProjGroupoid) -> np.ndarray:
    P = [dst._pidx[pr.point_map[p]] for p in src.points]
    p = [dst._sidx[pr.scalar_map[s]] for s in src.scalars]
    out = np.empty(len(src._morph), dtype=np.int64)
    for x, (i, j, k) in enumerate(src._morph):
        out[x] = dst._arrow(P[i], P[i], p[k]) if i == j else dst._arrow(P[i], P[j], P[k])
    return out


def _cr_arrays(g: ProjGroupoid):
    if "cr_arrays" not in g._cache:
        tuples = np.asarray(list(permutations(range(g.n), 4)), dtype=np.int64).reshape(-1, 4)
        table = np.full((g.n,) * 4, -1, dtype=np.int64)
        for t in tuples.tolist():
            table[tuple(t)] = _cr(g, *t)
        g._cache["cr_arrays"] = (tuples, table)
    return g._cache["cr_arrays"]


def verify_projectivity(pr: Projectivity, src: ProjGroupoid, dst: ProjGroupoid) -> ValidationReport:
    """Exhaustive check that (point map, scalar map) is a morphism of projection structures."""
    rep = ValidationReport()
    P = pr.point_map
    w = None
    if set(P) != set(src.points) or any(v not in dst._pidx for v in P.values()):
        w = ("not total",)
    elif len(set(P.values())) != len(P):
        seen = {}
        for a, b in P.items():
            if b in seen:
                w = (seen[b], a, b)
                break
            seen[b] = a
    rep.add("point_map_injective", w)
    sw = _scalar_map_witness(pr.scalar_map, src, dst)
    rep.add("scalar_homomorphism",
            sw if sw and sw[0] != "not Phi-compatible" else None)
    rep.add("phi_compatible", sw if sw and sw[0] == "not Phi-compatible" else None)
    if w is not None or sw is not None:
        for name in ("minus_one", "label_equation", "functoriality", "cross_ratio_preservation"):
            rep.add(name, ("skipped: maps are not well formed",))
        return rep

    m1, m2 = _minus_one_or_none(src), _minus_one_or_none(dst)
    if m1 is None or m2 is None:
        rep.add("minus_one", None if m1 is m2 else (m1, m2))
    else:
        rep.add("minus_one", None if pr.scalar_map[m1] == m2 else (m1, pr.scalar_map[m1], m2))

    img = _image_array(pr, src, dst)
    T1, T2 = src._Tn, dst._Tn
    xs, ys = np.nonzero(T1 >= 0)
    lhs = img[T1[xs, ys]]
    rhs = T2[img[xs], img[ys]]
    bad = lhs != rhs
    srcs, dsts = np.asarray(src._src), np.asarray(src._dst)
    non_endo = (srcs[xs] != dsts[xs]) & (srcs[ys] != dsts[ys]) & (srcs[xs] != dsts[ys])
    for name, mask in (("label_equation", bad & non_endo), ("functoriality", bad)):
        hit = np.flatnonzero(mask)
        w = None
        if len(hit):
            x, y = int(xs[hit[0]]), int(ys[hit[0]])
            w = (src.morphism(x), src.morphism(y), dst.morphism(int(rhs[hit[0]])),
                 dst.morphism(int(lhs[hit[0]])))
        rep.add(name, w)

    w = None
    if src.n >= 4:
        tuples, table = _cr_arrays(src)
        _, table2 = _cr_arrays(dst)
        Pi = np.asarray([dst._pidx[P[p]] for p in src.points])
        pi = np.asarray([dst._sidx[pr.scalar_map[s]] for s in src.scalars])
        mapped = Pi[tuples]
        lhs = pi[table[tuple(tuples.T)]]
        rhs = table2[tuple(mapped.T)]
        hit = np.flatnonzero(lhs != rhs)
        if len(hit):
            w = tuple(src.points[i] for i in tuples[hit[0]])
    rep.add("cross_ratio_preservation", w)
    return rep


def build_projectivity(src: ProjGroupoid, dst: ProjGroupoid, triple_src, triple_dst,
                       p: dict) -> Projectivity:
    """The unique projectivity sending triple_src to triple_dst with scalar part p.

    Every other point X goes to the D with (A',B';C',D) = p((A,B;C,X)). The
    result is verified exhaustively before it is returned.
    """
    for g in (src, dst):
        rep = _axioms_ok(g, (1, 2, 3))
        if not rep.ok:
            raise AxiomViolation("input groupoid fails axioms 1-3", rep.violations[0].witness)
    if src.n == 4 and _minus_one_or_none(src) in (None, UNIT):
        raise UnsupportedFourPoint("four-point source needs -1 != 1")
    a, b, c = triple_src
    a2, b2, c2 = triple_dst
    if len({a, b, c}) != 3 or len({a2, b2, c2}) != 3:
        raise AxiomViolation("triples must consist of distinct points", (triple_src, triple_dst))
    if dst.n < src.n:
        raise TooFewPoints("target has fewer points than the source")
    w = _scalar_map_witness(dict(p), src, dst)
    if w is not None:
        raise IncompatibleScalarMap(f"scalar map rejected: {w}")
    P = {a: a2, b: b2, c: c2}
    for x in src.points:
        if x not in P:
            P[x] = solve_fourth_point(dst, p[cross_ratio(src, a, b, c, x)], a2, b2, c2)
    pr = Projectivity({x: P[x] for x in src.points}, {s: p[s] for s in src.scalars})
    rep = verify_projectivity(pr, src, dst)
    if not rep.ok:
        raise VerificationFailure(rep)
    return pr


def coordinatize(g: ProjGroupoid) -> tuple[FieldTable, Projectivity]:
    """Reconstruct the scalar field k of g and an isomorphism onto the line over k.

    The first three points of g go to (1:0), (0:1), (1:1).
    """
    rep = _axioms_ok(g, (1, 2, 3, 4))
    if not rep.ok:
        raise AxiomViolation("groupoid fails the axioms", rep.violations[0].witness)
    if g.n == 4 and minus_one(g) == UNIT:
        raise UnsupportedFourPoint("four points with -1 = 1: outside the coordinatization hypotheses")
    field, frep = reconstruct_field(extract_phi_group(g))
    if not frep.ok:
        raise NotAField(frep)
    model = generate_groupoid(field)
    o, z = field.one, field.zero
    target = tuple(str(q) for q in (ProjPoint(o, z), ProjPoint(z, o), ProjPoint(o, o)))
    pr = build_projectivity(g, model, g.points[:3], target, {s: s for s in g.scalars})
    if set(pr.point_map.values()) != set(model.points):
        rep = ValidationReport()
        rep.add("surjective", tuple(sorted(set(model.points) - set(pr.point_map.values()))))
        raise VerificationFailure(rep)
    return field, pr


def dumps_projectivity(pr: Projectivity) -> str:
    obj = pr.to_json()
    pts = ",\n    ".join(json.dumps(x) for x in obj["points"])
    sc = ",\n    ".join(json.dumps(x) for x in obj["scalars"])
    return ('{\n  "points": [\n    ' + pts + '\n  ],\n  "scalars": [\n    ' + sc + "\n  ]\n}\n")


def loads_projectivity(text: str) -> Projectivity:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    if not isinstance(obj, dict) or set(obj) != {"points", "scalars"}:
        raise ProjLineError('projectivity object must have exactly the keys "points", "scalars"')
    return Projectivity({a: b for a, b in obj["points"]}, {a: b for a, b in obj["scalars"]})


def write_projectivity(pr: Projectivity, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_projectivity(pr))


def read_projectivity(path) -> Projectivity:
    with open(path, encoding="utf-8") as fh:
        return loads_projectivity(fh.read())
