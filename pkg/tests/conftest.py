"""Shared fixtures and independent oracles.

The oracles here use plain integer arithmetic (mod p, or GF(2)[x]/(x^2+x+1)
for the four-element field) and never touch the package's field tables.
"""

from __future__ import annotations

import functools
import sys
from pathlib import Path

import pytest

from projline.coordinate import generate_groupoid
from projline.groupoid import ProjGroupoid
from projline.fields import make_prime_field, read_field

DATA = Path(__file__).parent / "data"
PRIMES = (2, 3, 5, 7)


class ModP:
    """Integer oracle for GF(p); element ids are decimal strings."""

    def __init__(self, p):
        self.p = p

    def s(self, x):
        return str(x % self.p)

    def inv(self, x):
        return pow(x, self.p - 2, self.p)

    def span(self, x, y):
        """Name of the point spanned by (x, y)."""
        x, y = x % self.p, y % self.p
        if y:
            return f"{x * self.inv(y) % self.p}:1"
        assert x
        return "1:0"

    def vec(self, name):
        x, y = name.split(":")
        return int(x), int(y)

    def det(self, u, v):
        return (u[0] * v[1] - u[1] * v[0]) % self.p

    def cross(self, a, b, c, d):
        a, b, c, d = map(self.vec, (a, b, c, d))
        num = self.det(a, c) * self.det(b, d)
        den = self.det(b, c) * self.det(a, d)
        return num * self.inv(den) % self.p

    def points(self):
        """Brute force: all nonzero vectors grouped by span."""
        seen = set()
        for x in range(self.p):
            for y in range(self.p):
                if x or y:
                    seen.add(self.span(x, y))
        return seen


def gf4_mul(x, y):
    # carry-less product reduced mod x^2 + x + 1; a = 2, b = 3
    r = 0
    for i in range(2):
        if y >> i & 1:
            r ^= x << i
    if r & 4:
        r ^= 0b111
    return r


GF4_NAMES = {0: "0", 1: "1", 2: "a", 3: "b"}


def swap_labels(g, a, b, c, d):
    """Transport g along the permutation of morphisms exchanging c:a->b and d:a->b."""
    m1, m2 = g.arrow(a, b, c), g.arrow(a, b, d)
    sw = {m1: m2, m2: m1}
    tr = lambda m: tuple(sw.get(m, m))
    triples = [(tr(f), tr(h), tr(r)) for (f, h), r in g.compose_map.items()]
    return ProjGroupoid(g.points, g.scalars, g.scalar_mul, triples)


@pytest.fixture(scope="session")
def gf4():
    return read_field(DATA / "gf4.field")


@functools.lru_cache(maxsize=None)
def model(p):
    return generate_groupoid(make_prime_field(p))


@pytest.fixture(scope="session")
def l5():
    return model(5)


@pytest.fixture(scope="session")
def l3():
    return model(3)


@pytest.fixture(scope="session")
def l7():
    return model(7)


@pytest.fixture(scope="session")
def l4(gf4):
    return generate_groupoid(gf4)


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(acc.RESULTS, key=lambda x: int(x.split()[1])):
        terminalreporter.write_line(line)
