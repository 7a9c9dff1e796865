"""Exhaustive enumeration of small groupoids with projection structure.

A connected groupoid whose vertex group G is abelian is determined, once
an arrow from a base vertex to every other vertex is fixed, by one bijection
per ordered pair (A, B): hom(A, B) -> G. With the projection structure that
is a bijection phi_AB from the labels (the points other than A, B) onto G,
and composition becomes addition of exponents. Rechoosing the base arrows
shifts phi_AB by g_B - g_A, which leaves the composition table unchanged;
the enumeration fixes that freedom by requiring phi_0B(first label) = 0.

With Axiom 1 required, phi_AB(C) = h_C(B) - h_C(A) for functions h_C on the
points other than C, which shrinks the space enough to reach five points.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from itertools import permutations, product

import numpy as np

from .coordinatizer import Projectivity, _axioms_ok
from .errors import AxiomViolation, SizeOutOfRange
from .groupoid import UNIT, ProjGroupoid, check_axioms, dumps_groupoid, validate_structure
from .rapport import minus_one
from .report import ValidationReport

log = logging.getLogger(__name__)

MAX_POINTS = 5
POINT_NAMES = "ABCDEFGH"


def cyclic_scalars(m: int) -> list[str]:
    return [UNIT] + [f"g{k}" if k > 1 else "g" for k in range(1, m)]


@dataclass
class IsoClass:
    representative: ProjGroupoid
    members: list = field(default_factory=list)       # groupoids in the class
    witnesses: list = field(default_factory=list)     # member -> representative isomorphisms
    axiom_report: ValidationReport | None = None
    minus_one: str | None = None

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class SearchResult:
    point_count: int
    require_axioms: tuple
    minus_one_distinct: bool | None
    tables_enumerated: int
    classes: list[IsoClass]

    @property
    def models(self) -> list[ProjGroupoid]:
        return [c.representative for c in self.classes]

    def summary(self) -> dict:
        return {
            "points": self.point_count,
            "axioms": list(self.require_axioms),
            "minus_one_distinct": self.minus_one_distinct,
            "tables_enumerated": self.tables_enumerated,
            "models": sum(c.size for c in self.classes),
            "classes": [
                {"index": i, "size": c.size, "minus_one": c.minus_one,
                 "axioms": {ch.name: ch.passed for ch in c.axiom_report.checks}}
                for i, c in enumerate(self.classes)
            ],
        }


# -- table construction ------------------------------------------------------

def _skeleton(n: int) -> ProjGroupoid:
    g = ProjGroupoid.__new__(ProjGroupoid)
    g._setup(POINT_NAMES[:n], cyclic_scalars(n - 2))
    return g


def _table_from_phi(g: ProjGroupoid, phi: dict, m: int) -> np.ndarray:
    """Composition table from phi[(a, b)][label] -> exponent in Z/m."""
    n = g.n
    val = np.empty(len(g._morph), dtype=np.int64)
    inv = {}
    for x, (i, j, k) in enumerate(g._morph):
        val[x] = k if i == j else phi[i, j][k]
        if i != j:
            inv[i, j, val[x]] = x
    M = len(g._morph)
    T = np.full((M, M), -1, dtype=np.int64)
    for x, (i, j, _) in enumerate(g._morph):
        for l in range(n):
            for y in g._hom(j, l):
                s = (val[x] + val[y]) % m
                T[x, y] = g._off[i][i] + s if i == l else inv[i, l, s]
    return T


def _free_families(n: int, m: int):
    """Every gauge-normalized family of bijections phi_AB (no axioms assumed)."""
    pairs = list(permutations(range(n), 2))
    choices = []
    for a, b in pairs:
        labels = [k for k in range(n) if k not in (a, b)]
        bij = [dict(zip(labels, p)) for p in permutations(range(m))]
        if a == 0:
            bij = [d for d in bij if d[labels[0]] == 0]
        choices.append(bij)
    for combo in product(*choices):
        yield dict(zip(pairs, combo))


def _axiom1_families(n: int, m: int):
    """Families with phi_AB(C) = h_C(B) - h_C(A) that satisfy the projection bijection."""
    free = []
    for c in range(1, n):
        others = [x for x in range(n) if x != c]
        anchor = next(x for x in others if x != 0)
        for x in others:
            if x == anchor or (c == 1 and x == 0):
                continue
            free.append((c, x))
    if not free:
        grid = np.zeros((1, 0), dtype=np.int64)
    else:
        grid = np.asarray(list(product(range(m), repeat=len(free))), dtype=np.int64)
    N = len(grid)
    H = np.zeros((N, n, n), dtype=np.int64)
    for col, (c, x) in enumerate(free):
        H[:, c, x] = grid[:, col]
    ok = np.ones(N, dtype=bool)
    for a, b in permutations(range(n), 2):
        labels = [c for c in range(n) if c not in (a, b)]
        vals = (H[:, labels, b] - H[:, labels, a]) % m
        vals.sort(axis=1)
        ok &= (vals == np.arange(m)).all(axis=1)
    log.debug("axiom-1 parametrization: %d of %d assignments are bijective", ok.sum(), N)
    for h in H[ok]:
        yield {(a, b): {c: int((h[c, b] - h[c, a]) % m) for c in range(n) if c not in (a, b)}
               for a, b in permutations(range(n), 2)}


# -- isomorphism machinery ---------------------------------------------------------

def _scalar_isomorphisms(g1: ProjGroupoid, g2: ProjGroupoid):
    """All group isomorphisms scalars(g1) -> scalars(g2) fixing the unit, in canonical order."""
    S1, S2 = g1.scalars, g2.scalars
    if len(S1) != len(S2):
        return
    rest = [s for s in S1 if s != UNIT]

    def extend(assign, k):
        if k == len(rest):
            yield dict(assign)
            return
        s = rest[k]
        used = set(assign.values())
        for t in S2:
            if t in used:
                continue
            assign[s] = t
            if all(assign.get(g1.scalar_product(s, u)) in (None, g2.scalar_product(t, assign[u]))
                   for u in list(assign)):
                yield from extend(assign, k + 1)
            del assign[s]

    yield from extend({UNIT: UNIT}, 0)


def _morph_perm(g: ProjGroupoid, perm, saut) -> np.ndarray:
    """Index map on morphisms induced by point permutation `perm` and scalar map `saut` (ints)."""
    out = np.empty(len(g._morph), dtype=np.int64)
    for x, (i, j, k) in enumerate(g._morph):
        out[x] = g._arrow(perm[i], perm[i], saut[k]) if i == j else g._arrow(perm[i], perm[j], perm[k])
    return out


def _relabel_table(T: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    T2 = np.full_like(T, -1)
    xs, ys = np.nonzero(T >= 0)
    T2[sigma[xs], sigma[ys]] = sigma[T[xs, ys]]
    return T2


def iso_check(g1: ProjGroupoid, g2: ProjGroupoid) -> Projectivity | None:
    """First composition-preserving (point bijection, scalar isomorphism) pair, or None.

    Exhaustive: scalar isomorphisms in canonical order, then point bijections by
    backtracking, checking each composite as soon as every point it mentions is
    assigned.
    """
    if g1.n != g2.n or len(g1.scalars) != len(g2.scalars):
        return None
    n = g1.n
    T1, T2 = g1._Tn, g2._Tn
    xs, ys = np.nonzero(T1 >= 0)
    zs = T1[xs, ys]
    mor = np.asarray(g1._morph)
    endo = mor[:, 0] == mor[:, 1]

    def points_of(v):
        return np.where(endo[v], np.maximum(mor[v, 0], mor[v, 1]), mor[v].max(axis=1))

    depth = np.maximum(np.maximum(points_of(xs), points_of(ys)), points_of(zs))
    buckets = [np.flatnonzero(depth == k) for k in range(n)]

    for saut in _scalar_isomorphisms(g1, g2):
        sa = [g2._sidx[saut[s]] for s in g1.scalars]
        perm = [-1] * n

        def image(v):
            out = np.empty(len(v), dtype=np.int64)
            for q, x in enumerate(v.tolist()):
                i, j, k = g1._morph[x]
                out[q] = g2._arrow(perm[i], perm[i], sa[k]) if i == j else g2._arrow(perm[i], perm[j], perm[k])
            return out

        def extend(k):
            if k == n:
                return True
            for t in range(n):
                if t in perm[:k]:
                    continue
                perm[k] = t
                b = buckets[k]
                if len(b) == 0 or np.array_equal(T2[image(xs[b]), image(ys[b])], image(zs[b])):
                    if extend(k + 1):
                        return True
            perm[k] = -1
            return False

        if extend(0):
            return Projectivity({g1.points[i]: g2.points[perm[i]] for i in range(n)}, saut)
    return None


# -- enumeration -----------------------------------------------------------------

def enumerate_models(n: int, require_axioms=(1, 2, 3, 4), minus_one_distinct: bool | None = None,
                     max_points: int = MAX_POINTS) -> SearchResult:
    """All groupoids with projection structure on n points, up to isomorphism.

    The vertex group is cyclic of order n - 2 (every group of order <= 3 is).
    Survivors must pass validate_structure and the requested axioms; with
    ``minus_one_distinct`` set, they are further filtered on whether -1 != 1.
    """
    require_axioms = tuple(sorted(set(require_axioms)))
    if not 3 <= n <= max_points:
        raise SizeOutOfRange(f"n must lie in [3, {max_points}]")
    if max_points > MAX_POINTS and n > MAX_POINTS:
        log.warning("enumerating %d-point groupoids: cost grows super-exponentially", n)
    if not set(require_axioms) <= {1, 2, 3, 4}:
        raise ValueError(f"unknown axioms {require_axioms}")
    if minus_one_distinct is not None and 4 not in require_axioms:
        raise ValueError("filtering on -1 needs axiom 4")
    m = n - 2
    skeleton = _skeleton(n)
    if n <= 4:
        families = _free_families(n, m)
    elif 1 in require_axioms:
        families = _axiom1_families(n, m)
    else:
        raise SizeOutOfRange(f"{n}-point enumeration without axiom 1 is infeasible")

    survivors = {}
    total = 0
    for phi in families:
        total += 1
        T = _table_from_phi(skeleton, phi, m)
        key = T.tobytes()
        if key in survivors:
            continue
        g = ProjGroupoid._from_arrays(skeleton.points, skeleton.scalars,
                                      [[(a + b) % m for b in range(m)] for a in range(m)], T)
        structure = validate_structure(g)
        if not structure.ok:
            continue
        g._cache["structure"] = structure
        if require_axioms and not _axioms_ok(g, require_axioms).ok:
            continue
        if minus_one_distinct is not None:
            try:
                if (minus_one(g) != UNIT) != minus_one_distinct:
                    continue
            except AxiomViolation:
                continue
        survivors[key] = g
    log.info("n=%d: %d tables enumerated, %d survivors", n, total, len(survivors))
    return SearchResult(n, require_axioms, minus_one_distinct, total, _classify(skeleton, survivors))


def _classify(skeleton: ProjGroupoid, survivors: dict) -> list[IsoClass]:
    n = skeleton.n
    dummy = skeleton
    auts = list(_scalar_isomorphisms_skeleton(n - 2))
    relabelings = [(perm, saut, _morph_perm(dummy, perm, [dummy._sidx[saut[s]] for s in dummy.scalars]))
                   for perm in permutations(range(n)) for saut in auts]
    seen = set()
    classes = []
    for key in sorted(survivors):
        if key in seen:
            continue
        g = survivors[key]
        orbit = {}
        for perm, saut, sigma in relabelings:
            T2 = _relabel_table(g._Tn, sigma)
            orbit.setdefault(T2.tobytes(), (perm, saut, T2))
        seen.update(orbit)
        rep_key = min(orbit)
        _, _, rep_T = orbit[rep_key]
        rep = survivors.get(rep_key) or ProjGroupoid._from_arrays(
            g.points, g.scalars, g._smul, rep_T)
        cls = IsoClass(rep)
        # witness member -> rep: compose (g -> member)^-1 with (g -> rep)
        perm_r, saut_r, _ = orbit[rep_key]
        for k in sorted(orbit):
            if k not in survivors:
                raise AssertionError("enumeration is not closed under relabeling")
            perm_k, saut_k, _ = orbit[k]
            inv_k = {perm_k[i]: i for i in range(n)}
            inv_s = {v: u for u, v in saut_k.items()}
            cls.members.append(survivors[k])
            cls.witnesses.append(Projectivity(
                {g.points[i]: g.points[perm_r[inv_k[i]]] for i in range(n)},
                {s: saut_r[inv_s[s]] for s in g.scalars}))
        cls.axiom_report = check_axioms(rep)
        try:
            cls.minus_one = minus_one(rep)
        except AxiomViolation:
            cls.minus_one = None
        classes.append(cls)
    if len(seen) != len(survivors):
        raise AssertionError("orbit bookkeeping mismatch")
    return classes


def _scalar_isomorphisms_skeleton(m: int):
    names = cyclic_scalars(m)
    for u in range(1, m + 1):
        if m == 1 or np.gcd(u, m) == 1:
            yield {names[k]: names[(k * u) % m] for k in range(m)}
        if m == 1:
            break


def export_result(result: SearchResult, directory) -> None:
    """Write one groupoid file per class representative plus summary.json."""
    os.makedirs(directory, exist_ok=True)
    for i, cls in enumerate(result.classes):
        with open(os.path.join(directory, f"class{i}.groupoid"), "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write(dumps_groupoid(cls.representative))
    with open(os.path.join(directory, "summary.json"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(result.summary(), indent=2) + "\n")
