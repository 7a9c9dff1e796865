"""Finite fields as explicit addition/multiplication tables."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .errors import CompositeModulus, InvalidField, MalformedTable, ParseError
from .report import ValidationReport

FIELD_KEYS = ("elements", "zero", "one", "add", "mul")


@dataclass(frozen=True)
class FieldTable:
    """A finite field (or candidate field) given extensionally.

    Element ids are opaque strings; ``zero`` and ``one`` designate the
    neutral elements by id. Tables are row-major: ``add[i][j]`` is the sum of
    ``elements[i]`` and ``elements[j]``.
    """

    elements: tuple
    zero: str
    one: str
    add: tuple
    mul: tuple
    _index: dict = field(init=False, repr=False, compare=False)
    _add: list = field(init=False, repr=False, compare=False)
    _mul: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        elements = tuple(self.elements)
        add = tuple(tuple(row) for row in self.add)
        mul = tuple(tuple(row) for row in self.mul)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "add", add)
        object.__setattr__(self, "mul", mul)

        index = {e: i for i, e in enumerate(elements)}
        if len(index) != len(elements):
            raise MalformedTable("duplicate element ids")
        for name in ("zero", "one"):
            if getattr(self, name) not in index:
                raise MalformedTable(f"{name} {getattr(self, name)!r} is not a declared element")
        q = len(elements)
        tables = {}
        for name, tab in (("add", add), ("mul", mul)):
            if len(tab) != q or any(len(row) != q for row in tab):
                raise MalformedTable(f"{name} table is not {q}x{q}")
            ints = []
            for i, row in enumerate(tab):
                r = []
                for j, e in enumerate(row):
                    if e not in index:
                        raise MalformedTable(
                            f"{name}[{elements[i]}][{elements[j]}] = {e!r} is not a declared element"
                        )
                    r.append(index[e])
                ints.append(r)
            tables[name] = ints
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_add", tables["add"])
        object.__setattr__(self, "_mul", tables["mul"])

    @property
    def q(self) -> int:
        return len(self.elements)

    @property
    def nonzero(self) -> tuple:
        return tuple(e for e in self.elements if e != self.zero)

    def index(self, x: str) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise MalformedTable(f"{x!r} is not an element") from None

    def plus(self, x: str, y: str) -> str:
        return self.elements[self._add[self.index(x)][self.index(y)]]

    def times(self, x: str, y: str) -> str:
        return self.elements[self._mul[self.index(x)][self.index(y)]]

    def neg(self, x: str) -> str:
        for y in self.elements:
            if self.plus(x, y) == self.zero:
                return y
        raise InvalidField(f"{x!r} has no additive inverse")

    def inv(self, x: str) -> str:
        if x != self.zero:
            for y in self.elements:
                if self.times(x, y) == self.one:
                    return y
        raise InvalidField(f"{x!r} has no multiplicative inverse")

    def minus(self, x: str, y: str) -> str:
        return self.plus(x, self.neg(y))

    def div(self, x: str, y: str) -> str:
        return self.times(x, self.inv(y))

    def order(self, x: str) -> int:
        """Multiplicative order of a nonzero element."""
        y, k = x, 1
        while y != self.one:
            y = self.times(y, x)
            k += 1
            if k > self.q:
                raise InvalidField(f"{x!r} has infinite order in the table")
        return k

    def to_json(self) -> dict:
        return {
            "elements": list(self.elements),
            "zero": self.zero,
            "one": self.one,
            "add": [list(r) for r in self.add],
            "mul": [list(r) for r in self.mul],
        }

    @classmethod
    def from_json(cls, obj) -> FieldTable:
        if not isinstance(obj, dict) or set(obj) != set(FIELD_KEYS):
            raise MalformedTable(f"field object must have exactly the keys {FIELD_KEYS}")
        return cls(obj["elements"], obj["zero"], obj["one"], obj["add"], obj["mul"])


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def make_prime_field(p: int) -> FieldTable:
    """The integers mod ``p``, elements named ``"0"`` .. ``"p-1"``."""
    if not is_prime(p):
        raise CompositeModulus(f"{p} is not prime")
    names = [str(i) for i in range(p)]
    add = [[names[(i + j) % p] for j in range(p)] for i in range(p)]
    mul = [[names[(i * j) % p] for j in range(p)] for i in range(p)]
    return FieldTable(names, "0", "1", add, mul)


def validate_field(t: FieldTable) -> ValidationReport:
    """Check every field axiom exhaustively.

    Each check is recorded in order; a failed check carries the first
    witness found (a tuple of element ids).
    """
    E = range(t.q)
    A, M = t._add, t._mul
    z, o = t.index(t.zero), t.index(t.one)
    name = t.elements
    nz = [i for i in E if i != z]
    rep = ValidationReport()

    def first(pred, domain):
        for args in domain:
            if not pred(*args):
                return tuple(name[i] for i in args)
        return None

    rep.add("zero_ne_one", (t.zero, t.one) if z == o else None)
    rep.add("add_associativity",
            first(lambda a, b, c: A[A[a][b]][c] == A[a][A[b][c]], product(E, repeat=3)))
    rep.add("add_commutativity", first(lambda a, b: A[a][b] == A[b][a], product(E, repeat=2)))
    rep.add("add_identity", first(lambda a: A[z][a] == a == A[a][z], ((a,) for a in E)))
    rep.add("add_inverses", first(lambda a: z in A[a] and any(A[b][a] == z for b in E),
                                  ((a,) for a in E)))
    rep.add("mul_nonzero_closure", first(lambda a, b: M[a][b] != z, product(nz, repeat=2)))
    rep.add("mul_associativity",
            first(lambda a, b, c: M[M[a][b]][c] == M[a][M[b][c]], product(E, repeat=3)))
    rep.add("mul_commutativity", first(lambda a, b: M[a][b] == M[b][a], product(E, repeat=2)))
    rep.add("mul_identity", first(lambda a: M[o][a] == a == M[a][o], ((a,) for a in E)))
    rep.add("mul_inverses", first(lambda a: o in M[a] and any(M[b][a] == o for b in E),
                                  ((a,) for a in nz)))
    rep.add("distributivity",
            first(lambda a, b, c: M[a][A[b][c]] == A[M[a][b]][M[a][c]]
                  and M[A[b][c]][a] == A[M[b][a]][M[c][a]],
                  product(E, repeat=3)))
    return rep


def _require_field(t: FieldTable) -> None:
    rep = validate_field(t)
    if not rep.ok:
        raise InvalidField("table is not a field:\n" + rep.format())


def multiplicative_generator(t: FieldTable) -> str:
    for x in t.nonzero:
        if t.order(x) == t.q - 1:
            return x
    raise InvalidField("multiplicative group is not cyclic")


def _isomorphisms(f1: FieldTable, f2: FieldTable):
    if f1.q != f2.q:
        return
    g = multiplicative_generator(f1)
    powers = [f1.one]
    for _ in range(f1.q - 2):
        powers.append(f1.times(powers[-1], g))
    for h in f2.nonzero:
        if f2.order(h) != f2.q - 1:
            continue
        iso = {f1.zero: f2.zero}
        y = f2.one
        for x in powers:
            iso[x] = y
            y = f2.times(y, h)
        if all(iso[f1.plus(a, b)] == f2.plus(iso[a], iso[b])
               and iso[f1.times(a, b)] == f2.times(iso[a], iso[b])
               for a in f1.elements for b in f1.elements):
            yield iso


def field_iso_check(f1: FieldTable, f2: FieldTable) -> Optional[dict]:
    """Return an element bijection carrying f1's operations to f2's, or None.

    The search runs over the images of a generator of f1's multiplicative
    group, so it is exhaustive.
    """
    _require_field(f1)
    _require_field(f2)
    return next(_isomorphisms(f1, f2), None)


def field_automorphisms(f: FieldTable) -> list[dict]:
    _require_field(f)
    return list(_isomorphisms(f, f))


def dumps_field(t: FieldTable) -> str:
    obj = t.to_json()
    lines = ["{"]
    lines.append(f'  "elements": {json.dumps(obj["elements"])},')
    lines.append(f'  "zero": {json.dumps(obj["zero"])},')
    lines.append(f'  "one": {json.dumps(obj["one"])},')
    for key in ("add", "mul"):
        rows = ",\n    ".join(json.dumps(r) for r in obj[key])
        sep = "," if key == "add" else ""
        lines.append(f'  "{key}": [\n    {rows}\n  ]{sep}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads_field(text: str) -> FieldTable:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    return FieldTable.from_json(obj)


def write_field(t: FieldTable, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_field(t))


def read_field(path) -> FieldTable:
    with open(path, encoding="utf-8") as fh:
        return loads_field(fh.read())
