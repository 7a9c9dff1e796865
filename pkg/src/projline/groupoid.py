"""Finite groupoids with projection structure, as explicit tables.

Morphisms are encoded as ``(src, dst, label)``. For ``src != dst`` the
label is a point distinct from both endpoints (the arrow ``C: A -> B``); for
``src == dst`` it is a scalar id. Endo-arrows at every vertex are stored
directly under their abstract scalar id; :func:`validate_structure` checks
that this identification is coherent.

Composition is written left to right: ``compose(f, g)`` is "f, then g" and
requires ``f.dst == g.src``.
"""

from __future__ import annotations

import json
from itertools import permutations, product
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import (
    MalformedGroupoid, NonComposable, NotEndo, ParseError, StructurallyInvalid,
)
from .report import ValidationReport

UNIT = "1"
GROUPOID_KEYS = ("points", "scalars", "scalar_mul", "compose")


class Morphism(NamedTuple):
    src: str
    dst: str
    label: str

    @property
    def endo(self) -> bool:
        return self.src == self.dst

    def __str__(self):
        return f"[{self.src},{self.dst},{self.label}]"


class ProjGroupoid:
    """A groupoid with projection structure given by its full composition table.

    ``compose`` maps each composable ordered pair of morphisms to their
    composite; it may be a mapping or an iterable of ``(f, g, f.g)`` triples.
    """

    def __init__(self, points: Iterable[str], scalars: Iterable[str],
                 scalar_mul, compose):
        self._setup(points, scalars)
        smul = self._parse_scalar_mul(scalar_mul)
        items = compose.items() if isinstance(compose, Mapping) else (
            ((f, g), h) for f, g, h in compose)
        M = len(self._morph)
        T = np.full((M, M), -1, dtype=np.int64)
        for (f, g), h in items:
            x, y, z = self._index_of(f), self._index_of(g), self._index_of(h)
            if self._dst[x] != self._src[y]:
                raise MalformedGroupoid(f"entry for non-composable pair {Morphism(*f)}, {Morphism(*g)}")
            if T[x, y] != -1:
                raise MalformedGroupoid(f"duplicate entry for {Morphism(*f)}, {Morphism(*g)}")
            T[x, y] = z
        self._finish(smul, T)

    # -- construction ----------------------------------------------------

    def _setup(self, points, scalars):
        points = tuple(points)
        scalars = tuple(scalars)
        if len(set(points)) != len(points):
            raise MalformedGroupoid("duplicate point ids")
        if len(set(scalars)) != len(scalars):
            raise MalformedGroupoid("duplicate scalar ids")
        if len(points) < 3:
            raise MalformedGroupoid("a projection structure needs at least three points")
        if UNIT not in scalars:
            raise MalformedGroupoid(f"scalars must include the unit {UNIT!r}")
        if any(not isinstance(x, str) for x in points + scalars):
            raise MalformedGroupoid("point and scalar ids must be strings")
        self.points = points
        self.scalars = scalars
        self._pidx = {p: i for i, p in enumerate(points)}
        self._sidx = {s: i for i, s in enumerate(scalars)}
        n, s = len(points), len(scalars)
        off = [[0] * n for _ in range(n)]
        morph, src, dst, lab = [], [], [], []
        for i in range(n):
            for j in range(n):
                off[i][j] = len(morph)
                labels = range(s) if i == j else (k for k in range(n) if k != i and k != j)
                for k in labels:
                    morph.append((i, j, k))
                    src.append(i)
                    dst.append(j)
                    lab.append(k)
        self._off = off
        self._morph = morph
        self._src = src
        self._dst = dst
        self._lab = lab

    def _parse_scalar_mul(self, scalar_mul):
        s = len(self.scalars)
        rows = [list(r) for r in scalar_mul]
        if len(rows) != s or any(len(r) != s for r in rows):
            raise MalformedGroupoid(f"scalar_mul must be {s}x{s}")
        try:
            return [[self._sidx[x] for x in r] for r in rows]
        except KeyError as e:
            raise MalformedGroupoid(f"scalar_mul entry {e.args[0]!r} is not a scalar") from None

    def _finish(self, smul, T):
        missing = np.argwhere((T == -1) & self._composable_mask())
        if len(missing):
            x, y = missing[0]
            raise MalformedGroupoid(
                f"compose is not total: missing {self.morphism(x)}, {self.morphism(y)}")
        self._smul = smul
        self._Tn = T
        self._T = T.tolist()
        self._compose_map = None
        self._cache = {}

    def _composable_mask(self):
        d = np.asarray(self._dst)
        s = np.asarray(self._src)
        return d[:, None] == s[None, :]

    @classmethod
    def _from_arrays(cls, points, scalars, smul, T) -> ProjGroupoid:
        g = cls.__new__(cls)
        g._setup(points, scalars)
        g._finish([list(r) for r in smul], np.asarray(T, dtype=np.int64))
        return g

    def _index_of(self, m) -> int:
        try:
            a, b, c = m
        except (TypeError, ValueError):
            raise MalformedGroupoid(f"morphism must be a (src, dst, label) triple: {m!r}") from None
        if not all(isinstance(v, str) for v in (a, b, c)):
            raise MalformedGroupoid(f"morphism entries must be strings: {m!r}")
        i, j = self._pidx.get(a), self._pidx.get(b)
        if i is None or j is None:
            raise MalformedGroupoid(f"unknown endpoint in {Morphism(a, b, c)}")
        if i == j:
            k = self._sidx.get(c)
            if k is None:
                raise MalformedGroupoid(f"endo label {c!r} is not a scalar in {Morphism(a, b, c)}")
            return self._off[i][i] + k
        k = self._pidx.get(c)
        if k is None or k == i or k == j:
            raise MalformedGroupoid(f"label {c!r} must be a point distinct from both endpoints "
                                    f"in {Morphism(a, b, c)}")
        return self._arrow(i, j, k)

    # -- index-level helpers -------------------------------------------

    def _arrow(self, i: int, j: int, k: int) -> int:
        if i == j:
            return self._off[i][i] + k
        return self._off[i][j] + k - (k > i) - (k > j)

    def _id(self, i: int) -> int:
        return self._off[i][i] + self._sidx[UNIT]

    def _hom(self, i: int, j: int) -> range:
        size = len(self.scalars) if i == j else len(self.points) - 2
        return range(self._off[i][j], self._off[i][j] + size)

    def _chain(self, *xs: int) -> int:
        T = self._T
        r = xs[0]
        for x in xs[1:]:
            r = T[r][x]
        return r

    def _inverse(self, x: int) -> int:
        T = self._T
        e = self._id(self._src[x])
        for y in self._hom(self._dst[x], self._src[x]):
            if T[x][y] == e:
                return y
        raise StructurallyInvalid(_single("inverses", (self.morphism(x),)))

    # -- public API --------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def scalar_mul(self) -> tuple:
        return tuple(tuple(self.scalars[k] for k in r) for r in self._smul)

    def morphism(self, x: int) -> Morphism:
        i, j, k = self._morph[x]
        return Morphism(self.points[i], self.points[j],
                        self.scalars[k] if i == j else self.points[k])

    def morphisms(self) -> list[Morphism]:
        return [self.morphism(x) for x in range(len(self._morph))]

    def hom(self, a: str, b: str) -> list[Morphism]:
        return [self.morphism(x) for x in self._hom(self.point_index(a), self.point_index(b))]

    def point_index(self, p: str) -> int:
        try:
            return self._pidx[p]
        except KeyError:
            raise MalformedGroupoid(f"unknown point {p!r}") from None

    def arrow(self, a: str, b: str, label: str) -> Morphism:
        """The morphism ``label: a -> b`` (a scalar id when ``a == b``)."""
        m = Morphism(a, b, label)
        self._index_of(m)
        return m

    def identity(self, a: str) -> Morphism:
        return Morphism(a, a, UNIT)

    def compose(self, f, g) -> Morphism:
        x, y = self._index_of(f), self._index_of(g)
        if self._dst[x] != self._src[y]:
            raise NonComposable(f"{Morphism(*f)} then {Morphism(*g)}")
        return self.morphism(self._T[x][y])

    def chain(self, *ms) -> Morphism:
        r = ms[0]
        for m in ms[1:]:
            r = self.compose(r, m)
        return Morphism(*r)

    def inverse(self, f) -> Morphism:
        return self.morphism(self._inverse(self._index_of(f)))

    def scalar_product(self, s: str, t: str) -> str:
        return self.scalars[self._smul[self._sidx[s]][self._sidx[t]]]

    def scalar_inverse(self, s: str) -> str:
        for t in self.scalars:
            if self.scalar_product(s, t) == UNIT:
                return t
        raise StructurallyInvalid(_single("scalar_group", (s,)))

    @property
    def compose_map(self) -> dict:
        if self._compose_map is None:
            T = self._Tn
            xs, ys = np.nonzero(T >= 0)
            ms = self.morphisms()
            self._compose_map = {(ms[x], ms[y]): ms[T[x, y]] for x, y in zip(xs.tolist(), ys.tolist())}
        return self._compose_map

    def with_entry(self, f, g, h) -> ProjGroupoid:
        """Copy with the single composite ``f.g`` replaced by ``h``."""
        x, y, z = self._index_of(f), self._index_of(g), self._index_of(h)
        if self._dst[x] != self._src[y]:
            raise NonComposable(f"{Morphism(*f)} then {Morphism(*g)}")
        T = self._Tn.copy()
        T[x, y] = z
        return ProjGroupoid._from_arrays(self.points, self.scalars, self._smul, T)

    def relabel(self, point_map: Mapping[str, str], scalar_map: Mapping[str, str] | None = None,
                point_order: Iterable[str] | None = None) -> ProjGroupoid:
        """Transport the structure along bijections of points and scalars."""
        smap = scalar_map or {s: s for s in self.scalars}
        if smap.get(UNIT) != UNIT:
            raise MalformedGroupoid("scalar relabeling must fix the unit")
        points = tuple(point_order) if point_order is not None else tuple(point_map[p] for p in self.points)
        scalars = tuple(smap[s] for s in self.scalars)

        def tr(m):
            return Morphism(point_map[m.src], point_map[m.dst],
                            smap[m.label] if m.endo else point_map[m.label])

        smul = [[smap[x] for x in row] for row in self.scalar_mul]
        return ProjGroupoid(points, scalars, smul,
                            {(tr(f), tr(g)): tr(h) for (f, g), h in self.compose_map.items()})

    def __eq__(self, other):
        if not isinstance(other, ProjGroupoid):
            return NotImplemented
        return (self.points == other.points and self.scalars == other.scalars
                and self._smul == other._smul and np.array_equal(self._Tn, other._Tn))

    def __hash__(self):
        return hash((self.points, self.scalars, self._Tn.tobytes()))

    def __repr__(self):
        return f"ProjGroupoid(points={len(self.points)}, scalars={len(self.scalars)})"


def _single(name, witness) -> ValidationReport:
    rep = ValidationReport()
    rep.add(name, witness)
    return rep


# -- structural validation ------------------------------------------------

def _scalar_group_witness(g: ProjGroupoid):
    S = range(len(g.scalars))
    m = g._smul
    e = g._sidx[UNIT]
    name = g.scalars
    for a, b, c in product(S, repeat=3):
        if m[m[a][b]][c] != m[a][m[b][c]]:
            return ("associativity", name[a], name[b], name[c])
    for a in S:
        if m[e][a] != a or m[a][e] != a:
            return ("identity", name[a])
        if not any(m[a][b] == e for b in S):
            return ("inverse", name[a])
        for b in S:
            if m[a][b] != m[b][a]:
                return ("commutativity", name[a], name[b])
    return None


def _assoc_witness(g: ProjGroupoid):
    T = g._Tn
    n = g.n
    into = [np.asarray([x for x in range(len(g._morph)) if g._dst[x] == j]) for j in range(n)]
    out = [np.asarray([x for x in range(len(g._morph)) if g._src[x] == i]) for i in range(n)]
    for b in range(n):
        for c in range(n):
            mid = np.asarray(list(g._hom(b, c)))
            left = T[T[np.ix_(into[b], mid)][:, :, None], out[c][None, None, :]]
            right = T[into[b][:, None, None], T[np.ix_(mid, out[c])][None, :, :]]
            bad = np.argwhere(left != right)
            if len(bad):
                i, j, k = bad[0]
                return tuple(g.morphism(x) for x in (into[b][i], mid[j], out[c][k]))
    return None


def validate_structure(g: ProjGroupoid) -> ValidationReport:
    """Exhaustively check the groupoid laws and the commutativity conventions."""
    T = g._T
    M = len(g._morph)
    n = g.n
    mor = g.morphism
    rep = ValidationReport()

    rep.add("scalar_group", _scalar_group_witness(g))

    w = None
    src, dst = np.asarray(g._src), np.asarray(g._dst)
    mask = g._composable_mask()
    res = g._Tn
    bad = np.argwhere(mask & ((src[np.where(res >= 0, res, 0)] != src[:, None])
                              | (dst[np.where(res >= 0, res, 0)] != dst[None, :])))
    if len(bad):
        x, y = bad[0]
        w = (mor(x), mor(y), mor(res[x, y]))
    rep.add("composite_endpoints", w)
    endpoints_ok = w is None

    rep.add("associativity", _assoc_witness(g) if endpoints_ok else ("skipped: bad endpoints",))

    w = None
    for x in range(M):
        if T[g._id(g._src[x])][x] != x or T[x][g._id(g._dst[x])] != x:
            w = (mor(x),)
            break
    rep.add("identity", w)

    w = None
    for x in range(M):
        e_src, e_dst = g._id(g._src[x]), g._id(g._dst[x])
        if not any(T[x][y] == e_src and T[y][x] == e_dst for y in g._hom(g._dst[x], g._src[x])):
            w = (mor(x),)
            break
    rep.add("inverses", w)

    w = None
    for i, j in product(range(n), repeat=2):
        if len(g._hom(i, j)) == 0:
            w = (g.points[i], g.points[j])
            break
    rep.add("connected", w)

    w = None
    for i in range(n):
        for x, y in product(g._hom(i, i), repeat=2):
            if T[x][y] != T[y][x]:
                w = (mor(x), mor(y))
                break
        if w:
            break
    rep.add("vertex_commutative", w)

    w = None
    S = range(len(g.scalars))
    for i in range(n):
        for s, t in product(S, repeat=2):
            if T[g._arrow(i, i, s)][g._arrow(i, i, t)] != g._arrow(i, i, g._smul[s][t]):
                w = (mor(g._arrow(i, i, s)), mor(g._arrow(i, i, t)))
                break
        if w:
            break
    rep.add("scalar_coherence", w)

    # mu.alpha == alpha.mu' with mu, mu' the same abstract scalar at A and B
    w = None
    for i, j in permutations(range(n), 2):
        for a in g._hom(i, j):
            for s in S:
                if T[g._arrow(i, i, s)][a] != T[a][g._arrow(j, j, s)]:
                    w = (mor(g._arrow(i, i, s)), mor(a))
                    break
            if w:
                break
        if w:
            break
    rep.add("conjugation_independence", w)

    w = None
    for i, j in permutations(range(n), 2):
        labels = sorted(g._lab[x] for x in g._hom(i, j))
        if labels != [k for k in range(n) if k not in (i, j)]:
            w = (g.points[i], g.points[j])
            break
    rep.add("projection_bijection", w)
    return rep


# -- the four axioms ----------------------------------------------------------

def _distinct(n, r):
    return permutations(range(n), r)


def check_axioms(g: ProjGroupoid, axioms=(1, 2, 3, 4), structure: ValidationReport | None = None
                 ) -> ValidationReport:
    """Check the requested axioms exhaustively over all distinct tuples.

    Raises StructurallyInvalid unless the groupoid passes validate_structure
    (pass ``structure`` to reuse an existing report).
    """
    structure = structure if structure is not None else validate_structure(g)
    if not structure.ok:
        raise StructurallyInvalid(structure)
    T = g._T
    A = g._arrow
    n = g.n
    P = g.points
    mor = g.morphism
    rep = ValidationReport()

    if 1 in axioms:
        w = None
        for a, b, c in _distinct(n, 3):
            if T[A(a, b, c)][A(b, a, c)] != g._id(a):
                w = (mor(A(a, b, c)), mor(A(b, a, c)))
                break
        if w is None:
            for a, b, c, d in _distinct(n, 4):
                if T[A(a, b, c)][A(b, d, c)] != A(a, d, c):
                    w = (mor(A(a, b, c)), mor(A(b, d, c)))
                    break
        rep.add("axiom1", w)

    if 2 in axioms:
        w = None
        for a, b, c, d in _distinct(n, 4):
            top = g._chain(A(a, b, c), A(b, a, d), A(a, c, b))
            bottom = g._chain(A(a, c, b), A(c, d, a), A(d, c, b))
            if top != bottom:
                w = (P[a], P[b], P[c], P[d])
                break
        rep.add("axiom2", w)

    if 3 in axioms:
        w = None
        seen = {}
        for a, b, c, d in _distinct(n, 4):
            mu = T[A(a, b, c)][A(b, a, d)]
            image = T[A(a, c, b)][A(c, a, d)]
            key = g._lab[mu]
            val = g._lab[image]
            if key in seen and seen[key][0] != val:
                w = (tuple(P[i] for i in seen[key][1]), (P[a], P[b], P[c], P[d]))
                break
            seen.setdefault(key, (val, (a, b, c, d)))
        rep.add("axiom3", w)

    if 4 in axioms:
        w = None
        for a, b, c, d in _distinct(n, 4):
            lhs = g._chain(A(a, b, c), A(b, c, a), A(c, a, b))
            rhs = g._chain(A(a, b, d), A(b, d, a), A(d, a, b))
            if lhs != rhs:
                w = (P[a], P[b], P[c], P[d])
                break
        rep.add("axiom4", w)
    return rep


def abstract_scalar_of(g: ProjGroupoid, m) -> str:
    """Abstract scalar id of an endo-arrow, read off at the base vertex."""
    m = Morphism(*m)
    x = g._index_of(m)
    if not m.endo:
        raise NotEndo(f"{m} is not an endo-morphism")
    i = g._src[x]
    if i != 0:
        alpha = next(iter(g._hom(0, i)))
        x = g._chain(alpha, x, g._inverse(alpha))
    return g.scalars[g._lab[x]]


# -- serialization ------------------------------------------------------------

def dumps_groupoid(g: ProjGroupoid) -> str:
    T = g._Tn
    xs, ys = np.nonzero(T >= 0)
    triples = []
    for x, y in zip(xs.tolist(), ys.tolist()):
        triples.append(json.dumps([list(g.morphism(x)), list(g.morphism(y)),
                                   list(g.morphism(int(T[x, y])))]))
    rows = ",\n    ".join(json.dumps(list(r)) for r in g.scalar_mul)
    body = ",\n    ".join(triples)
    return (
        "{\n"
        f'  "points": {json.dumps(list(g.points))},\n'
        f'  "scalars": {json.dumps(list(g.scalars))},\n'
        f'  "scalar_mul": [\n    {rows}\n  ],\n'
        f'  "compose": [\n    {body}\n  ]\n'
        "}\n"
    )


def loads_groupoid(text: str) -> ProjGroupoid:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    if not isinstance(obj, dict) or set(obj) != set(GROUPOID_KEYS):
        raise MalformedGroupoid(f"groupoid object must have exactly the keys {GROUPOID_KEYS}")
    comp = obj["compose"]
    if not isinstance(comp, list) or any(not isinstance(t, list) or len(t) != 3 for t in comp):
        raise MalformedGroupoid("compose must be a list of [f, g, f.g] triples")
    return ProjGroupoid(obj["points"], obj["scalars"], obj["scalar_mul"],
                        [tuple(tuple(m) for m in t) for t in comp])


def write_groupoid(g: ProjGroupoid, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_groupoid(g))


def read_groupoid(path) -> ProjGroupoid:
    with open(path, encoding="utf-8") as fh:
        return loads_groupoid(fh.read())
