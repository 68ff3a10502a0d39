import json
import pathlib

import numpy as np
import pytest

from trideg import generators as gen
from trideg import serialize as ser
from trideg.cli import UNKNOWN, main
from trideg.complexes import ChainMap, Complex, direct_sum, shift
from trideg.degeneration import left_witness
from trideg.grothendieck import Tower
from trideg.matrices import HomMatrix
from trideg.suite import random_ged, random_tower, stabilized_pair


def write(path, obj):
    path.write_text(ser.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    rng = np.random.default_rng(3)
    alg = gen.a2(3)
    z, m = gen.random_complex(alg, rng, 3, 2), gen.random_complex(alg, rng, 3, 2)
    s = Complex.stalk(alg, "1")
    f = {
        "z": write(tmp_path / "z.json", ser.complex_to_json(z)),
        "u_mz": write(tmp_path / "u_mz.json", ser.map_to_json(gen.random_chain_map(m, z, rng))),
        "u_zm": write(tmp_path / "u_zm.json", ser.map_to_json(gen.random_chain_map(z, m, rng))),
        "v": write(tmp_path / "v.json", ser.map_to_json(gen.random_endo(z, rng, "nilpotent"))),
        "id": write(tmp_path / "id.json", ser.map_to_json(ChainMap.identity(s))),
        "bad": write(tmp_path / "bad.json", ser.complex_to_json(direct_sum(s, shift(s, 3)).obj)),
        "good": write(tmp_path / "good.json", ser.complex_to_json(direct_sum(s, shift(s, 1)).obj)),
        "w": write(tmp_path / "w.json", ser.witness_to_json(random_ged(alg, rng).witness)),
        "tower": write(tmp_path / "tower.json", ser.tower_to_json(random_tower(alg, rng, 3))),
        "sum": write(tmp_path / "sum.json", [{"gen": "S", "shift": 0, "mult": 2},
                                             {"gen": "S", "shift": 1, "mult": 1},
                                             {"gen": "S", "shift": 3, "mult": 1}]),
        "sum_bad": write(tmp_path / "sum_bad.json", [{"gen": "S", "shift": 0, "mult": 2}]),
    }
    w1, w2 = stabilized_pair(alg, np.random.default_rng(5))
    f["w1"] = write(tmp_path / "w1.json", ser.witness_to_json(w1))
    f["w2"] = write(tmp_path / "w2.json", ser.witness_to_json(w2))
    return f


def test_cone(capsys, files):
    code, out, _ = run(capsys, "cone", files["u_zm"])
    assert code == 0 and "[ok] d o d = 0" in out and out.strip().endswith("verdict: true")


@pytest.mark.parametrize("cmd,keys", [("deg", ("u_mz", "v")), ("ged", ("u_zm", "v")),
                                      ("left-witness", ("z", "v", "u_zm"))])
def test_witness_commands(capsys, files, cmd, keys):
    code, out, _ = run(capsys, cmd, *(files[k] for k in keys), "--json")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] and rep["checks"]["k0(M) = k0(N)"]
    assert ser.witness_from_json(rep["witness"]).verify()


def test_nilpotent(capsys, files):
    assert run(capsys, "nilpotent", files["v"])[0] == 0
    code, out, _ = run(capsys, "nilpotent", files["id"])
    assert code == 1 and "[FAIL] v is nilpotent" in out


def test_k0(capsys, files):
    code, out, _ = run(capsys, "k0", files["good"], "--json")
    rep = json.loads(out)
    assert code == 0 and rep["zero"] and rep["k0"] == {"1": 0, "2": 0}


def test_pair_decompose(capsys, files):
    code, out, _ = run(capsys, "pair-decompose", files["sum"], "--json")
    rep = json.loads(out)
    assert code == 0 and rep["m"] == 2
    assert sorted((p["even"], p["odd"], p["mult"]) for p in rep["pairs"]) == [(0, 1, 1), (0, 3, 1)]
    code, _, err = run(capsys, "pair-decompose", files["sum_bad"])
    assert code == 2 and "nonzero alternating multiplicity" in err


@pytest.mark.parametrize("mode", [[], ["--nil-chain"], ["--single"]])
def test_tower_deg(capsys, files, mode):
    code, out, _ = run(capsys, "tower-deg", files["tower"], *mode, "--json")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"]
    assert ("nil_chain" in rep) == (mode != ["--single"])
    assert ("single" in rep) == (mode != ["--nil-chain"])


def test_tower_deg_modes_are_exclusive(files):
    with pytest.raises(SystemExit) as exc:
        main(["tower-deg", files["tower"], "--nil-chain", "--single"])
    assert exc.value.code == 2


def test_tower_deg_budget_exhaustion(capsys, tmp_path):
    found = False
    for seed in range(40):
        t = random_tower(gen.a2(3), np.random.default_rng(seed), 3)
        bare = Tower(t.algebra, t.generators, t.objects, t.maps, t.tags, ())
        path = write(tmp_path / f"t{seed}.json", ser.tower_to_json(bare))
        code, out, _ = run(capsys, "tower-deg", path, "--budget", 1)
        if code == 1:
            assert "verification failed" in out and "not found within budget" in out
            found = True
            break
        assert code == 0
    assert found
    # the same tower succeeds with the default budget
    assert run(capsys, "tower-deg", path)[0] == 0


def test_obstruct(capsys, files):
    code, out, _ = run(capsys, "obstruct", files["bad"], "--json")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "obstructed" and rep["obstruction"]["degree"] == 0
    code, out, _ = run(capsys, "obstruct", files["good"])
    assert code == 0 and UNKNOWN in out
    assert "does not show" in UNKNOWN


def test_zero_deg(capsys, files):
    code, out, _ = run(capsys, "zero-deg", files["z"], "--json")
    assert code == 0 and json.loads(out)["checks"]["k0(N) = 0"]


def test_compare_cones(capsys, files):
    assert run(capsys, "compare-cones", files["w"])[0] == 0


def test_two_pushout(capsys, files):
    code, out, _ = run(capsys, "two-pushout", files["w1"], files["w2"], "--json")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] and rep["witness"] is not None


def test_two_pushout_on_left_witness_is_input_error(capsys, files):
    code, _, err = run(capsys, "two-pushout", files["w"], files["w"])
    assert code == 2 and err.startswith("input error")


@pytest.mark.parametrize("name", ["zwara", "lemma-counterexample", "cone-zero"])
def test_demos(capsys, name):
    code, out, _ = run(capsys, "demo", name)
    assert code == 0 and "[FAIL]" not in out


def test_prop_suite_is_deterministic(capsys, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "prop-suite", "--cases", 6, "--seed", 11, "--out", out1)[0] == 0
    assert run(capsys, "--seed", 11, "prop-suite", "--cases", 6, "--out", out2)[0] == 0
    assert out1.read_text() == out2.read_text()
    assert json.loads(out1.read_text())["verdict"]


def test_input_errors(capsys, tmp_path, files):
    bad = tmp_path / "broken.json"
    bad.write_text('{\n  "a": ]\n}')
    code, _, err = run(capsys, "k0", bad)
    assert code == 2 and "malformed JSON at line 2" in err
    code, _, err = run(capsys, "k0", tmp_path / "nope.json")
    assert code == 2
    unknown = write(tmp_path / "unk.json", {"algebra": ser.algebra_to_json(gen.a2(2)), "terms": {"0": ["9"]}})
    code, _, err = run(capsys, "obstruct", unknown)
    assert code == 2 and "unknown vertex" in err
    with pytest.raises(SystemExit) as exc:
        main(["cone", files["u_zm"], "--budget", "0"])
    assert exc.value.code == 2


def test_tampered_witness_fails(capsys, tmp_path):
    alg = gen.a2(3)
    z, m = Complex.stalk(alg, "2"), Complex.stalk(alg, "1")
    a = HomMatrix.from_entries(alg, ["1"], ["2"], [[{"a": 1}]])
    w = left_witness(z, ChainMap.zero(z, z), ChainMap(z, m, {0: a}))
    assert run(capsys, "compare-cones", write(tmp_path / "w.json", ser.witness_to_json(w)))[0] == 0
    obj = ser.witness_to_json(w)
    obj["u"] = ser.Writer({"M": m, "Z": z}, "#algebra").map(ChainMap.zero(z, m))
    code, out, _ = run(capsys, "compare-cones", write(tmp_path / "t.json", obj))
    assert code == 1 and "[FAIL] input witness verifies" in out


SAMPLES = [("cone", "a.json"), ("deg", "a.json", "zero_p1.json"), ("ged", "a.json", "zero_p2.json"),
           ("left-witness", "p2.json", "zero_p2.json", "a.json"), ("nilpotent", "zero_p1.json"),
           ("k0", "s_plus_s1.json"), ("pair-decompose", "shiftsum.json"), ("tower-deg", "tower.json"),
           ("obstruct", "s_plus_s3.json"), ("obstruct", "s_plus_s1.json"), ("zero-deg", "p1.json"),
           ("compare-cones", "left_witness.json"), ("two-pushout", "w1.json", "w2.json")]


@pytest.mark.parametrize("argv", SAMPLES, ids=" ".join)
def test_shipped_samples(capsys, monkeypatch, argv):
    samples = pathlib.Path(__file__).resolve().parent.parent / "samples"
    monkeypatch.chdir(samples)
    assert run(capsys, *argv)[0] == 0
