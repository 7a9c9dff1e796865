"""The coordinate projective line over a finite field, built from determinants."""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .errors import DegeneratePoints, InvalidField, NonComposable, ZeroCoefficient
from .fields import FieldTable, validate_field
from .groupoid import UNIT, ProjGroupoid


@dataclass(frozen=True, order=True)
class ProjPoint:
    """Homogeneous coordinates (x:y), normalized to y = 1 or to (1:0)."""

    x: str
    y: str

    def __str__(self):
        return f"{self.x}:{self.y}"

    @property
    def rep(self) -> tuple:
        return (self.x, self.y)


@dataclass(frozen=True)
class CoordMorphism:
    src: ProjPoint
    dst: ProjPoint
    coeff: str


def _require_field(f: FieldTable) -> None:
    rep = validate_field(f)
    if not rep.ok:
        raise InvalidField("not a field:\n" + rep.format())


def normalize(u: tuple, f: FieldTable) -> ProjPoint:
    x, y = u
    if y != f.zero:
        return ProjPoint(f.div(x, y), f.one)
    if x == f.zero:
        raise DegeneratePoints("the zero vector spans no point")
    return ProjPoint(f.one, f.zero)


def point(name: str, f: FieldTable) -> ProjPoint:
    """Parse ``"x:y"`` into a normalized point."""
    x, sep, y = name.partition(":")
    if not sep:
        raise ValueError(f"point must be written x:y, got {name!r}")
    return normalize((x, y), f)


def enumerate_points(f: FieldTable) -> list[ProjPoint]:
    _require_field(f)
    return [ProjPoint(t, f.one) for t in f.elements] + [ProjPoint(f.one, f.zero)]


def det2(u: tuple, v: tuple, f: FieldTable) -> str:
    """Determinant of the 2x2 matrix with columns u and v."""
    return f.minus(f.times(u[0], v[1]), f.times(u[1], v[0]))


def _distinct(*pts) -> None:
    if len(set(pts)) != len(pts):
        raise DegeneratePoints(f"points must be mutually distinct: {[str(p) for p in pts]}")


def proj_scalar(a: ProjPoint, b: ProjPoint, c: ProjPoint, f: FieldTable) -> str:
    """Matrix entry of ``c: a -> b`` w.r.t. the canonical representatives: |a c| / |b c|."""
    _distinct(a, b, c)
    return f.div(det2(a.rep, c.rep, f), det2(b.rep, c.rep, f))


def label_of_map(a: ProjPoint, b: ProjPoint, t: str, f: FieldTable) -> ProjPoint:
    """The direction of projection for the map a -> b with coefficient t: span(a - t.b)."""
    if t == f.zero:
        raise ZeroCoefficient("zero-maps are not morphisms")
    _distinct(a, b)
    return normalize((f.minus(a.x, f.times(t, b.x)), f.minus(a.y, f.times(t, b.y))), f)


def coord_arrow(a: ProjPoint, b: ProjPoint, label, f: FieldTable) -> CoordMorphism:
    """``label: a -> b`` as a coefficient; for a == b the label is the scalar itself."""
    if a == b:
        if label == f.zero:
            raise ZeroCoefficient("zero-maps are not morphisms")
        return CoordMorphism(a, a, label)
    return CoordMorphism(a, b, proj_scalar(a, b, label, f))


def compose_coord(m1: CoordMorphism, m2: CoordMorphism, f: FieldTable) -> CoordMorphism:
    if m1.dst != m2.src:
        raise NonComposable(f"{m1.dst} != {m2.src}")
    return CoordMorphism(m1.src, m2.dst, f.times(m1.coeff, m2.coeff))


def morphism_label(m: CoordMorphism, f: FieldTable):
    """Point label of a non-endo morphism, or its scalar if endo."""
    if m.src == m.dst:
        return m.coeff
    return label_of_map(m.src, m.dst, m.coeff, f)


def cross_ratio_coord(a, b, c, d, f: FieldTable) -> str:
    """(|a c|/|b c|) . (|b d|/|a d|)"""
    _distinct(a, b, c, d)
    return f.times(proj_scalar(a, b, c, f), proj_scalar(b, a, d, f))


def scalar_names(f: FieldTable) -> dict:
    """Field element id -> groupoid scalar id (the field's one becomes the unit id)."""
    if f.one != UNIT and UNIT in f.elements:
        raise InvalidField(f"element id {UNIT!r} is reserved for the multiplicative identity")
    return {e: (UNIT if e == f.one else e) for e in f.nonzero}


def generate_groupoid(f: FieldTable) -> ProjGroupoid:
    """Materialize the projective line over ``f`` as an explicit groupoid.

    Points are named ``"x:y"``; scalars are the nonzero field elements.
    """
    pts = enumerate_points(f)
    names = scalar_names(f)
    scalars = [names[e] for e in f.nonzero]

    g = ProjGroupoid.__new__(ProjGroupoid)
    g._setup([str(p) for p in pts], scalars)
    n = len(pts)
    pidx = {p: i for i, p in enumerate(pts)}
    sidx = {e: i for i, e in enumerate(f.nonzero)}

    arrows = [coord_arrow(pts[i], pts[j], f.nonzero[k] if i == j else pts[k], f)
              for (i, j, k) in g._morph]
    labels = {}

    def index_of(m: CoordMorphism) -> int:
        i, j = pidx[m.src], pidx[m.dst]
        if i == j:
            return g._arrow(i, i, sidx[m.coeff])
        key = (i, j, m.coeff)
        if key not in labels:
            labels[key] = g._arrow(i, j, pidx[label_of_map(m.src, m.dst, m.coeff, f)])
        return labels[key]

    M = len(g._morph)
    T = np.full((M, M), -1, dtype=np.int64)
    for x in range(M):
        j = g._morph[x][1]
        for l in range(n):
            for y in g._hom(j, l):
                T[x, y] = index_of(compose_coord(arrows[x], arrows[y], f))
    g._finish([[sidx[f.times(s, t)] for t in f.nonzero] for s in f.nonzero], T)
    return g
