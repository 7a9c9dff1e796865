import itertools
import json

import pytest

from projline.errors import MalformedGroupoid, NonComposable, NotEndo, ParseError, StructurallyInvalid
from projline.groupoid import (
    Morphism, ProjGroupoid, abstract_scalar_of, check_axioms, dumps_groupoid, loads_groupoid,
    read_groupoid, validate_structure, write_groupoid,
)

from conftest import PRIMES, model, swap_labels


def three_point():
    pts = ["A", "B", "C"]
    arrows = [(x, x, "1") for x in pts] + [
        (x, y, next(z for z in pts if z not in (x, y))) for x, y in itertools.permutations(pts, 2)]
    compose = [(f, g, (f[0], g[1], "1" if f[0] == g[1] else next(z for z in pts if z not in (f[0], g[1]))))
               for f in arrows for g in arrows if f[1] == g[0]]
    return ProjGroupoid(pts, ["1"], [["1"]], compose)


@pytest.mark.parametrize("p", PRIMES)
def test_models_pass_structure_and_axioms(p):
    g = model(p)
    rep = validate_structure(g)
    assert rep.ok, rep.format()
    ax = check_axioms(g)
    assert [c.name for c in ax.checks] == ["axiom1", "axiom2", "axiom3", "axiom4"]
    assert ax.ok, ax.format()


def test_gf4_model_passes(l4):
    assert validate_structure(l4).ok
    assert check_axioms(l4).ok


def test_three_point_groupoid():
    g = three_point()
    assert validate_structure(g).ok
    assert check_axioms(g).ok
    assert g == model(2).relabel({"0:1": "A", "1:1": "B", "1:0": "C"})


def test_hom_sets_have_projection_bijection(l5):
    for a, b in itertools.permutations(l5.points, 2):
        hom = l5.hom(a, b)
        assert len(hom) == len(l5.points) - 2
        assert sorted(m.label for m in hom) == sorted(set(l5.points) - {a, b})
    for a in l5.points:
        assert {m.label for m in l5.hom(a, a)} == set(l5.scalars)


def test_redirected_entry_fails_with_replayable_witness(l3):
    f, h = l3.arrow("1:0", "0:1", "1:1"), l3.arrow("0:1", "1:1", "1:0")
    r = l3.compose(f, h)
    other = next(m for m in l3.hom("1:0", "1:1") if m != r)
    bad = l3.with_entry(f, h, other)
    rep = validate_structure(bad)
    assert not rep.ok
    failing = {c.name for c in rep.violations}
    assert failing & {"associativity", "projection_bijection"}
    x, y, z = rep.get("associativity").witness
    assert bad.compose(bad.compose(x, y), z) != bad.compose(x, bad.compose(y, z))
    with pytest.raises(StructurallyInvalid) as exc:
        check_axioms(bad)
    assert not exc.value.report.ok


def test_label_swap_is_a_groupoid_but_breaks_axiom1(l5):
    bad = swap_labels(l5, "1:0", "0:1", "1:1", "2:1")
    assert validate_structure(bad).ok
    rep = check_axioms(bad)
    c = rep.get("axiom1")
    assert not c.passed
    assert c.witness


@pytest.mark.parametrize("p", [3, 5])
def test_label_swaps_always_fail_some_axiom(p):
    g = model(p)
    a, b = g.points[0], g.points[1]
    for c, d in itertools.combinations([x for x in g.points if x not in (a, b)], 2):
        rep = check_axioms(swap_labels(g, a, b, c, d))
        assert not rep.ok


def test_axiom_subset(l5):
    rep = check_axioms(l5, axioms=(2, 4))
    assert [c.name for c in rep.checks] == ["axiom2", "axiom4"]


def test_abstract_scalar_of(l5):
    for a in l5.points:
        assert abstract_scalar_of(l5, l5.identity(a)) == "1"
    A, B, C, D = "1:0", "0:1", "1:1", "2:1"
    endo = l5.chain(l5.arrow(A, B, C), l5.arrow(B, A, D))
    assert abstract_scalar_of(l5, endo) == "2"
    with pytest.raises(NotEndo):
        abstract_scalar_of(l5, l5.arrow(A, B, C))


def test_abstract_scalar_invariant_under_conjugation(l5):
    for a in l5.points:
        for mu in l5.hom(a, a):
            for b in l5.points:
                if b == a:
                    continue
                for x in l5.hom(a, b):
                    conj = l5.chain(l5.inverse(x), mu, x)
                    assert abstract_scalar_of(l5, conj) == abstract_scalar_of(l5, mu)


def test_inverse_and_composition_basics(l5):
    f = l5.arrow("1:0", "0:1", "1:1")
    assert l5.compose(f, l5.inverse(f)) == l5.identity("1:0")
    assert l5.inverse(f) == l5.arrow("0:1", "1:0", "1:1")
    with pytest.raises(NonComposable):
        l5.compose(f, f)


def test_round_trip(tmp_path, l3):
    path = tmp_path / "l3.groupoid"
    write_groupoid(l3, path)
    again = read_groupoid(path)
    assert again == l3
    assert again.points == l3.points and again.scalars == l3.scalars
    assert dumps_groupoid(again) == path.read_text()


def test_label_equal_to_source_is_malformed(l3):
    obj = json.loads(dumps_groupoid(l3))
    f, g, h = obj["compose"][-1]
    if f[0] != f[1]:
        f[2] = f[0]
    else:
        g[2] = g[0]
    with pytest.raises(MalformedGroupoid):
        loads_groupoid(json.dumps(obj))


def test_missing_entry_is_malformed(l3):
    obj = json.loads(dumps_groupoid(l3))
    obj["compose"].pop()
    with pytest.raises(MalformedGroupoid):
        loads_groupoid(json.dumps(obj))


def test_duplicate_entry_is_malformed(l3):
    obj = json.loads(dumps_groupoid(l3))
    obj["compose"].append(obj["compose"][0])
    with pytest.raises(MalformedGroupoid):
        loads_groupoid(json.dumps(obj))


def test_truncated_file_reports_position(l3):
    text = dumps_groupoid(l3)
    with pytest.raises(ParseError) as exc:
        loads_groupoid(text[: len(text) // 3])
    assert exc.value.line >= 1


@pytest.mark.parametrize("points,scalars", [(["A", "B"], ["1"]), (["A", "B", "C"], ["e"])])
def test_type_level_defects(points, scalars):
    with pytest.raises(MalformedGroupoid):
        ProjGroupoid(points, scalars, [[s] for s in scalars], [])


def test_morphism_formatting():
    assert str(Morphism("A", "B", "C")) == "[A,B,C]"
    assert Morphism("A", "A", "1").endo
