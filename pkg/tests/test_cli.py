import json
import subprocess
import sys

import pytest

from symprel.coiso import normal_form_pair
from symprel.canonical import from_symplectomorphism
from symprel.relations import direct_sum, towber_block
from symprel.serial import (
    canonical_relation_doc,
    pair_doc,
    relation_doc,
    space_doc,
    subspace_doc,
)
from symprel.symplectic import identity_map, standard_space
from symprel.testkit import Rng, random_canonical_relation


def run_cli(args, stdin_text=None):
    proc = subprocess.run(
        [sys.executable, "-m", "symprel.cli", *args],
        input=stdin_text, capture_output=True, text=True)
    return proc


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_invariants_lambda_pair(tmp_path):
    pair = normal_form_pair((1, 0, 0, 0, 0))
    path = write(tmp_path, "pair.json", pair_doc(pair))
    proc = run_cli(["invariants", path])
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["k"] == [1, 1, 1, 1, 1]
    assert out["n"] == [1, 0, 0, 0, 0]


def test_equivalence_exit_codes(tmp_path):
    lam = write(tmp_path, "lam.json", pair_doc(normal_form_pair((1, 0, 0, 0, 0))))
    delta = write(tmp_path, "delta.json", pair_doc(normal_form_pair((0, 1, 0, 0, 0))))
    ok = run_cli(["equivalence", lam, lam])
    assert ok.returncode == 0
    body = json.loads(ok.stdout)
    assert body["equivalent"] is True
    bad = run_cli(["equivalence", lam, delta])
    assert bad.returncode == 3
    body = json.loads(bad.stdout)
    assert body["equivalent"] is False
    assert body["witness"] == "canonical_invariants"


def test_equivalence_canonical_verdicts(tmp_path):
    rng = Rng(100)
    draw = random_canonical_relation((0, 0, 0, 1, 1), rng)
    a = write(tmp_path, "a.json", canonical_relation_doc(draw.relation))
    same = run_cli(["equivalence", a, a])
    assert same.returncode == 0
    # graphs of generic symplectic maps land in the open case: exit 4
    ident = from_symplectomorphism(identity_map(standard_space(1)))
    b = write(tmp_path, "b.json", canonical_relation_doc(ident))
    rot = random_canonical_relation((0, 0, 1, 0, 0), Rng(4))
    c = write(tmp_path, "c.json", canonical_relation_doc(rot.relation))
    verdict = run_cli(["equivalence", b, c])
    assert verdict.returncode in (3, 4)


def test_compose_and_towber(tmp_path):
    r = towber_block("tau_plus", 2)
    path = write(tmp_path, "r.json", relation_doc(r))
    composed = run_cli(["compose", path, path])
    assert composed.returncode == 0
    doc = json.loads(composed.stdout)
    assert doc["kind"] == "relation"
    sig = run_cli(["towber", path])
    assert sig.returncode == 0
    body = json.loads(sig.stdout)
    assert body["tau_plus"] == {"2": 1}
    assert body["invariant_factors"] == []


def test_classify_and_witt_artin_and_darboux(tmp_path):
    v = standard_space(2)
    from symprel.linalg import span, unit_vector

    sub = span([unit_vector(0, 4)], 4)
    vp = write(tmp_path, "v.json", space_doc(v))
    sp = write(tmp_path, "s.json", subspace_doc(sub))
    out = run_cli(["classify", vp, sp])
    assert out.returncode == 0
    assert json.loads(out.stdout) == {"class": "isotropic", "rank": 0}
    wa = run_cli(["witt-artin", vp, sp])
    assert wa.returncode == 0
    body = json.loads(wa.stdout)
    assert body["k"]["basis"] == [["1", "0", "0", "0"]]
    darboux = run_cli(["darboux", vp])
    assert darboux.returncode == 0
    body = json.loads(darboux.stdout)
    assert body["q"] == [["1", "0", "0", "0"], ["0", "1", "0", "0"]]


def test_factorize_and_normal_form(tmp_path):
    rng = Rng(21)
    draw = random_canonical_relation((1, 0, 0, 1, 1), rng)
    path = write(tmp_path, "l.json", canonical_relation_doc(draw.relation))
    fact = run_cli(["factorize", path])
    assert fact.returncode == 0
    body = json.loads(fact.stdout)
    assert body["reduced_dim"] == 2  # A1 = F + H has dimension 2n3 + 2n5
    nf = run_cli(["normal-form", path])
    assert nf.returncode == 0
    body = json.loads(nf.stdout)
    assert body["phi0_is_normal_form"] is False
    pair = normal_form_pair((0, 1, 0, 1, 1))
    pp = write(tmp_path, "p.json", pair_doc(pair))
    nfp = run_cli(["normal-form", pp])
    assert nfp.returncode == 0
    assert json.loads(nfp.stdout)["n"] == [0, 1, 0, 1, 1]


def test_gen_pipes_into_invariants(tmp_path):
    params = write(tmp_path, "gen.json",
                   {"kind": "gen", "what": "pair", "n": [1, 0, 0, 1, 1]})
    gen = run_cli(["gen", "--seed", "5", params])
    assert gen.returncode == 0
    piped = run_cli(["invariants", "-"], stdin_text=gen.stdout)
    assert piped.returncode == 0
    assert json.loads(piped.stdout)["n"] == [1, 0, 0, 1, 1]


def test_gen_deterministic(tmp_path):
    params = write(tmp_path, "gen.json",
                   {"kind": "gen", "what": "canonical_relation",
                    "n": [0, 1, 0, 1, 1]})
    a = run_cli(["gen", "--seed", "9", params])
    b = run_cli(["gen", "--seed", "9", params])
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    c = run_cli(["gen", "--seed", "10", params])
    assert c.stdout != a.stdout


def test_malformed_input_exit_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    proc = run_cli(["invariants", str(path)])
    assert proc.returncode == 2
    assert proc.stdout == ""
    assert "error:" in proc.stderr
    lower = write(tmp_path, "bad2.json", {"kind": "space", "dim": 2,
                                          "form": [["0", "2/4"], ["-1/2", "0"]]})
    proc2 = run_cli(["invariants", lower])
    assert proc2.returncode == 2


def test_output_flag_and_byte_stability(tmp_path):
    pair = normal_form_pair((1, 1, 0, 0, 0))
    path = write(tmp_path, "pair.json", pair_doc(pair))
    out1 = tmp_path / "out1.json"
    out2 = tmp_path / "out2.json"
    assert run_cli(["--output", str(out1), "invariants", path]).returncode == 0
    assert run_cli(["--output", str(out2), "invariants", path]).returncode == 0
    assert out1.read_bytes() == out2.read_bytes()
    # keys sorted lexicographically
    text = out1.read_text()
    assert text.index('"elementary_type"') < text.index('"k"') < text.index('"n"')


def test_selftest_small():
    proc = run_cli(["selftest", "--seed", "7", "--size", "small"])
    assert proc.returncode == 0
    body = json.loads(proc.stdout)
    assert body["ok"] is True
    assert len(body["suites"]) >= 10
