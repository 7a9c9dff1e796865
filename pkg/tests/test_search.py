import json

import numpy as np
import pytest

from projline.coordinatizer import coordinatize, verify_projectivity
from projline.errors import SizeOutOfRange
from projline.fields import validate_field
from projline.groupoid import ProjGroupoid, check_axioms, validate_structure
from projline.search import (
    _axiom1_families, _free_families, _skeleton, _table_from_phi, cyclic_scalars,
    enumerate_models, export_result, iso_check,
)

from conftest import model


@pytest.fixture(scope="module")
def unfiltered4():
    return enumerate_models(4, ())


def test_cyclic_scalar_names():
    assert cyclic_scalars(1) == ["1"]
    assert cyclic_scalars(3) == ["1", "g", "g2"]


def test_three_points():
    r = enumerate_models(3)
    assert len(r.classes) == 1
    assert r.classes[0].minus_one == "1"
    assert iso_check(r.models[0], model(2)) is not None


def test_four_points_minus_one_distinct(l3):
    r = enumerate_models(4, minus_one_distinct=True)
    assert len(r.classes) == 1
    assert r.classes[0].minus_one != "1"
    iso = iso_check(r.models[0], l3)
    assert iso is not None
    assert verify_projectivity(iso, r.models[0], l3).ok


def test_four_points_minus_one_equal_is_reported():
    r = enumerate_models(4, minus_one_distinct=False)
    summary = r.summary()
    assert summary["models"] == len(r.classes)
    assert summary["minus_one_distinct"] is False


def test_unfiltered_four_point_classification(unfiltered4, l3):
    r = unfiltered4
    assert r.tables_enumerated == 2 ** 12 // 2 ** 3
    assert sum(c.size for c in r.classes) == r.tables_enumerated
    for cls in r.classes:
        assert validate_structure(cls.representative).ok
        for member, w in zip(cls.members, cls.witnesses):
            assert verify_projectivity(w, member, cls.representative).ok
    hits = [c for c in r.classes if iso_check(c.representative, l3) is not None]
    assert len(hits) == 1


def test_unfiltered_representatives_pairwise_distinct(unfiltered4):
    reps = unfiltered4.models
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            assert iso_check(reps[i], reps[j]) is None


def test_axiom1_parametrization_matches_brute_force():
    n, m = 4, 2
    sk = _skeleton(n)
    smul = [[(a + b) % m for b in range(m)] for a in range(m)]

    def keep(phi):
        g = ProjGroupoid._from_arrays(sk.points, sk.scalars, smul, _table_from_phi(sk, phi, m))
        return validate_structure(g).ok and check_axioms(g, (1,)).ok

    brute = {_table_from_phi(sk, f, m).tobytes() for f in _free_families(n, m) if keep(f)}
    fast = {_table_from_phi(sk, f, m).tobytes() for f in _axiom1_families(n, m)}
    assert brute == fast


def test_five_points_coordinatize_to_order_four(gf4, l4):
    r = enumerate_models(5)
    assert r.classes
    for cls in r.classes:
        assert cls.axiom_report.ok
        k, pr = coordinatize(cls.representative)
        assert k.q == 4 and validate_field(k).ok
        assert iso_check(cls.representative, l4) is not None


def test_search_is_deterministic():
    a, b = enumerate_models(4, ()), enumerate_models(4, ())
    assert [c.representative for c in a.classes] == [c.representative for c in b.classes]
    assert np.array_equal(a.models[0]._Tn, b.models[0]._Tn)


def test_iso_check_examples(l3, l5):
    relabeled = l3.relabel({"0:1": "P", "1:1": "Q", "2:1": "R", "1:0": "S"},
                           point_order=["S", "R", "Q", "P"])
    iso = iso_check(l3, relabeled)
    assert iso is not None
    assert verify_projectivity(iso, l3, relabeled).ok
    assert iso_check(l3, l5) is None


@pytest.mark.parametrize("n", [2, 6])
def test_size_bounds(n):
    with pytest.raises(SizeOutOfRange):
        enumerate_models(n)


def test_five_points_without_axiom1_refused():
    with pytest.raises(SizeOutOfRange):
        enumerate_models(5, (2, 3))


def test_minus_one_filter_needs_axiom4():
    with pytest.raises(ValueError):
        enumerate_models(4, (1, 2, 3), minus_one_distinct=True)


def test_export(tmp_path):
    r = enumerate_models(4)
    export_result(r, tmp_path)
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["models"] == len(r.classes)
    assert sorted(p.name for p in tmp_path.glob("*.groupoid")) == [
        f"class{i}.groupoid" for i in range(len(r.classes))]
