import json
import random
from fractions import Fraction

import pytest

from relk0 import serialize
from relk0.complexes import random_cone, truncate
from relk0.errors import NotAComplex, ParseError
from relk0.grouprings import INT, RAT, FiniteAbelianGroup, GroupRingElement, mod_domain
from relk0.linalg import GroupRingMatrix
from relk0.modules import annihilator, random_presented_module

C2 = FiniteAbelianGroup.parse("C2")


def round_trip(obj):
    text = serialize.serialize(obj)
    back = serialize.parse(text)
    assert serialize.serialize(back) == text
    return back


def test_element_round_trip():
    for x in (
        GroupRingElement(C2, INT, (3, -1)),
        GroupRingElement(C2, RAT, (Fraction(3, 8), Fraction(-1, 8))),
        GroupRingElement(C2, mod_domain(3, 2), (10, 4)),
    ):
        assert round_trip(x) == x


def test_canonical_text():
    x = GroupRingElement(C2, INT, (3, 1))
    text = serialize.serialize(x)
    assert text.endswith("\n") and " " not in text
    assert list(json.loads(text)) == sorted(json.loads(text))


def test_random_objects_round_trip():
    rng = random.Random(1)
    for _ in range(15):
        pm, M = random_presented_module(rng, rng.choice([2, 3]))
        N = round_trip(M)
        assert (N.factors, N.actions) == (M.factors, M.actions)
        A = round_trip(pm.matrix)
        assert A == pm.matrix
        I = annihilator(M)
        J = round_trip(I)
        assert J.basis == I.basis
        _, C = random_cone(rng, rng.choice([2, 3]))
        D = round_trip(truncate(C))
        assert D.ranks == truncate(C).ranks


def test_parse_errors_name_the_field():
    good = serialize.to_json(GroupRingElement(C2, INT, (1, 2)))
    bad = dict(good, coeffs=[1, 2, 3])
    with pytest.raises(ParseError, match="element.coeffs"):
        serialize.from_json(bad)
    with pytest.raises(ParseError, match="element.domain"):
        serialize.from_json(dict(good, domain="padic:3"))
    M = GroupRingMatrix(C2, INT, [[GroupRingElement(C2, INT, (1, 0)), GroupRingElement(C2, INT, (0, 1))]])
    doc = serialize.to_json(M)
    doc["entries"][0][1]["coeffs"] = [1, "x"]
    with pytest.raises(ParseError, match=r"matrix.entries\[0\]\[1\]"):
        serialize.from_json(doc)
    with pytest.raises(ParseError, match="line 1"):
        serialize.parse("{not json")
    with pytest.raises(ParseError):
        serialize.parse("[1, 2]")
    with pytest.raises(ParseError):
        serialize.from_json({"unrelated": 1})


def test_non_canonical_input_rejected():
    doc = {"group": [2], "domain": "mod:3^1", "coeffs": [4, 0]}
    with pytest.raises(ParseError, match="canonical"):
        serialize.from_json(doc)


def test_complex_validation_on_load():
    one = GroupRingElement.one(C2)
    doc = {
        "group": [2],
        "l": 2,
        "ranks": [1, 1, 1],
        "differentials": [
            serialize.matrix_to_json(GroupRingMatrix(C2, INT, [[one]])),
            serialize.matrix_to_json(GroupRingMatrix(C2, INT, [[one]])),
        ],
    }
    with pytest.raises(NotAComplex, match="d_1 d_2"):
        serialize.from_json(doc)


def test_parse_artifacts(tmp_path):
    x = GroupRingElement(C2, INT, (5, 7))
    p = tmp_path / "x.json"
    p.write_text(serialize.serialize(x), encoding="utf-8")
    assert serialize.parse_artifacts(p) == x
