import json

import numpy as np
import pytest

from trideg import generators as gen
from trideg import serialize as ser
from trideg.complexes import Complex
from trideg.grothendieck import ShiftSum
from trideg.suite import random_deg, random_ged, random_tower

ALGEBRAS = [gen.a2(2), gen.a2(3), gen.a3(2), gen.a3_free(3), gen.loop(2), gen.loop(3)]


def roundtrip(obj):
    return json.loads(ser.dumps(obj))


@pytest.mark.parametrize("alg", ALGEBRAS, ids=repr)
def test_algebra_roundtrip(alg):
    back = ser.algebra_from_json(roundtrip(ser.algebra_to_json(alg)))
    assert back.dim == alg.dim and back.vertices == alg.vertices
    assert ser.algebra_to_json(back) == ser.algebra_to_json(alg)


def test_relations_as_strings():
    obj = {"field": 2, "vertices": ["1", "2", "3"],
           "arrows": [{"name": "a", "source": "1", "target": "2"}, {"name": "b", "source": "2", "target": "3"}],
           "relations": ["a*b"]}
    assert ser.algebra_from_json(obj).dim == 5


@pytest.mark.parametrize("seed", range(8))
def test_complex_and_map_roundtrip(seed):
    rng = np.random.default_rng(seed)
    alg = ALGEBRAS[seed % len(ALGEBRAS)]
    x, y = gen.random_complex(alg, rng, 4, 3), gen.random_complex(alg, rng, 4, 3)
    assert ser.complex_from_json(roundtrip(ser.complex_to_json(x))) == x
    f = gen.random_chain_map(x, y, rng)
    assert ser.map_from_json(roundtrip(ser.map_to_json(f))) == f


@pytest.mark.parametrize("seed", range(6))
def test_witness_roundtrip(seed):
    rng = np.random.default_rng(seed)
    alg = ALGEBRAS[seed % len(ALGEBRAS)]
    w = (random_deg if seed % 2 else random_ged)(alg, rng).witness
    back = ser.witness_from_json(roundtrip(ser.witness_to_json(w)))
    assert back.verify()
    assert (back.side, back.M, back.N, back.Z, back.layout) == (w.side, w.M, w.N, w.Z, w.layout)
    assert back.v == w.v and back.u == w.u


@pytest.mark.parametrize("seed", range(4))
def test_tower_roundtrip(seed):
    t = random_tower(ALGEBRAS[seed], np.random.default_rng(seed), 3)
    back = ser.tower_from_json(roundtrip(ser.tower_to_json(t)))
    assert back.verify() and back.tags == t.tags and back.objects == t.objects


def test_shiftsum_roundtrip_and_errors():
    x = ShiftSum.of([("S", 0, 2), ("S", 1, 1), ("T", 3, 1)])
    assert ser.shiftsum_from_json(roundtrip(ser.shiftsum_to_json(x))) == x
    with pytest.raises(ser.InputError):
        ser.shiftsum_from_json({"gen": "S"})
    with pytest.raises(ser.InputError):
        ser.shiftsum_from_json([{"gen": "S", "shift": 0}])
    with pytest.raises(ser.InputError):
        ser.shiftsum_from_json([{"gen": "S", "shift": 0, "mult": 0}])


def test_malformed_json_reports_location(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "terms": ,\n}')
    with pytest.raises(ser.InputError, match="line 2, column 12"):
        ser.read_json(p)
    with pytest.raises(ser.InputError):
        ser.read_json(tmp_path / "missing.json")


def test_unknown_vertex_and_missing_keys():
    alg = ser.algebra_to_json(gen.a2(2))
    with pytest.raises(ser.InputError, match="unknown vertex"):
        ser.complex_from_json({"algebra": alg, "terms": {"0": ["7"]}})
    with pytest.raises(ser.InputError, match="no algebra"):
        ser.complex_from_json({"terms": {"0": ["1"]}})
    with pytest.raises(ser.InputError, match="missing"):
        ser.algebra_from_json({"field": 2, "vertices": ["1"]})
    with pytest.raises(ser.InputError):
        ser.map_from_json({"source": {"algebra": alg, "terms": {}}})


def test_differential_must_square_to_zero():
    alg = ser.algebra_to_json(gen.a2(3))
    obj = {"algebra": alg, "terms": {"0": ["1"], "1": ["1"], "2": ["1"]},
           "differentials": {"0": [[{"e_1": 1}]], "1": [[{"e_1": 1}]]}}
    with pytest.raises(ser.InputError):
        ser.complex_from_json(obj)


def test_references(tmp_path):
    alg = gen.a2(2)
    (tmp_path / "alg.json").write_text(ser.dumps(ser.algebra_to_json(alg)))
    sub = tmp_path / "sub"
    sub.mkdir()
    x = Complex.stalk(alg, "1")
    obj = ser.complex_to_json(x)
    obj["algebra"] = "../alg.json"
    (sub / "x.json").write_text(ser.dumps(obj))
    ctx = ser.Context(tmp_path)
    assert ser.complex_from_json("sub/x.json", ctx) == x
    ctx.objects["X"] = x
    assert ser.complex_from_json("#X", ctx) == x
    with pytest.raises(ser.InputError, match="unknown reference"):
        ser.complex_from_json("#Y", ctx)
