import io
import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given

from herdisc.cli import run_command, verify_report
from herdisc.core import SetSystem
from herdisc.instances import (InstanceError, digest, load_instance, loads, parse_instance,
                               serialize)

from conftest import set_systems

GOLDEN = Path(__file__).parent / "golden"
GOLDEN_FILES = ["triangle.json", "palvolgyi_2_2.json", "hoffman_2.json", "hadamard_4.json"]


@pytest.mark.parametrize("name", GOLDEN_FILES)
def test_golden_round_trip(name):
    text = (GOLDEN / name).read_text()
    assert serialize(load_instance(GOLDEN / name)) == text


@pytest.mark.parametrize("name, argv", [
    ("triangle.json", ["gen", "triangle"]),
    ("palvolgyi_2_2.json", ["gen", "palvolgyi", "--k", "2", "--l", "2"]),
    ("hoffman_2.json", ["gen", "hoffman", "--k", "2"]),
    ("hadamard_4.json", ["gen", "hadamard", "--order", "4"]),
])
def test_gen_matches_golden(name, argv, tmp_path):
    out = tmp_path / name
    _, code = run_command(argv + ["--out", str(out)], write=True)
    assert code == 0
    assert out.read_bytes() == (GOLDEN / name).read_bytes()


def test_palvolgyi_golden_content():
    F = parse_instance(GOLDEN / "palvolgyi_2_2.json")
    assert F.sets == ((1, 5), (2, 5), (3, 4), (1, 2), (3, 5), (4, 5))
    assert F.tags == (1, 1, 1, 2, 2, 2)


def test_parse_examples():
    F = parse_instance(io.StringIO('{"n":3,"sets":[[1,2],[2,3],[1,3]]}'))
    assert F == SetSystem(3, [[1, 2], [2, 3], [1, 3]])
    assert parse_instance(io.StringIO('{"n":2,"sets":[]}')) == SetSystem(2, [])
    with pytest.raises(InstanceError, match="set 1, element 3"):
        parse_instance(io.StringIO('{"n":2,"sets":[[3]]}'))


@pytest.mark.parametrize("text, where", [
    ('{"n": 2, "sets": [[1],\n [2, "x"]]}', "set 2"),
    ('{"n": 2, "sets": [[1, 1]]}', "set 1: repeated"),
    ('{"n": 2}', "need 'n' and 'sets'"),
    ('{"n": 2, "sets": [], "extra": 1}', "unknown field"),
    ('{"n": 2, "sets": [[1]], "tags": [1, 2]}', "tags"),
    ('{"n": 2, "sets": [[1]]\n', "line 2"),
    ('{"matrix": [[1, 2], [3]]}', "matrix row 2"),
    ('[1, 2]', "top level"),
])
def test_parse_errors_name_location(text, where):
    with pytest.raises(InstanceError, match=where):
        loads(text)


@given(set_systems(max_n=6, max_m=5))
def test_serialize_round_trip(F):
    text = serialize(F)
    assert loads(text).system == F
    assert serialize(loads(text)) == text


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_disc_report(tmp_path):
    tri = _write(tmp_path, "tri.json", '{"n":3,"sets":[[1,2],[2,3],[1,3]]}')
    rep, code = run_command(["disc", "--in", tri])
    assert code == 0 and rep["status"] == "certified"
    assert rep["results"]["disc"] == 2 and len(rep["results"]["witness"]) == 3
    assert rep["instance_digest"] == digest(load_instance(tri))
    assert rep["version"] and "timing" not in rep
    assert verify_report(rep) == {"digest": True, "coloring": True}


def test_reports_are_deterministic(tmp_path):
    f = _write(tmp_path, "r.json", serialize(SetSystem(5, [[1, 2, 3], [2, 4], [3, 4, 5]])))
    for cmd in (["vecdisc"], ["pipeline"], ["herdisc", "--samples", "4", "--seed", "9"]):
        a, _ = run_command(cmd + ["--in", f])
        b, _ = run_command(cmd + ["--in", f])
        assert json.dumps(a) == json.dumps(b)


def test_pipeline_singletons(tmp_path):
    s4 = _write(tmp_path, "s4.json", serialize(SetSystem(4, [[1], [2], [3], [4]])))
    rep, code = run_command(["pipeline", "--in", s4])
    assert code == 0
    res = rep["results"]
    assert res["first_failure"] is None and all(res["links"].values())
    assert all(v >= 0 for v in res["slacks"].values())
    assert all(verify_report(rep).values())


def test_non_certified_exit_code(tmp_path):
    f = _write(tmp_path, "h.json", (GOLDEN / "hoffman_2.json").read_text())
    rep, code = run_command(["disc", "--in", f, "--node-budget", "3"])
    assert code == 2 and rep["status"] == "non-certified"
    rep, code = run_command(["herdisc", "--in", f, "--samples", "3"])
    assert code == 2
    rep, code = run_command(["detlb", "--in", f, "--greedy", "3"])
    assert code == 2 and all(verify_report(rep).values())


def test_error_exit_codes(tmp_path, capsys):
    bad = _write(tmp_path, "bad.json", '{"n":2,"sets":[[3]]}')
    assert run_command(["disc", "--in", bad]) == (None, 1)
    assert "set 1, element 3" in capsys.readouterr().err
    assert run_command(["nonsense"])[1] == 1
    assert run_command(["disc", "--in", bad, "--bogus-flag"])[1] == 1
    assert run_command(["disc", "--in", str(tmp_path / "missing.json")])[1] == 1
    mat = _write(tmp_path, "m.json", (GOLDEN / "hadamard_4.json").read_text())
    assert run_command(["disc", "--in", mat])[1] == 1
    assert run_command(["union-check", "--in", mat])[1] == 1       # untagged


def test_certify_and_tampering(tmp_path):
    tri = _write(tmp_path, "tri.json", (GOLDEN / "triangle.json").read_text())
    rep, code = run_command(["vecdisc", "--in", tri])
    assert code == 0
    cert = _write(tmp_path, "cert.json", json.dumps(rep))
    c, code = run_command(["certify", "--in", tri, "--cert", cert])
    assert code == 0 and c["results"]["valid"]
    assert all(verify_report(c).values())
    bad = dict(rep["results"]["certificate"])
    bad["z"] = [x + 0.5 for x in bad["z"]]
    badf = _write(tmp_path, "bad.json", json.dumps(bad))
    c, code = run_command(["certify", "--in", tri, "--cert", badf])
    assert code == 2 and not c["results"]["valid"]
    # a tampered vecdisc report fails verification
    rep["results"]["certificate"] = bad
    assert not all(verify_report(rep).values())


def test_verify_subcommand(tmp_path):
    tri = _write(tmp_path, "tri.json", (GOLDEN / "triangle.json").read_text())
    out = tmp_path / "rep.json"
    _, code = run_command(["gap", "--in", tri, "--out", str(out)], write=True)
    assert code == 0
    v, code = run_command(["verify", "--report", str(out)])
    assert code == 0 and v["results"]["all_passed"]
    rep = json.loads(out.read_text())
    rep["results"]["witness"]["det"] = 3
    out.write_text(json.dumps(rep))
    v, code = run_command(["verify", "--report", str(out)])
    assert code == 1 and not v["results"]["checks"]["witness"]


def test_union_check_hadamard_blocks(tmp_path):
    out = tmp_path / "h8.json"
    run_command(["gen", "hadamard", "--order", "8", "--blocks", "2", "--out", str(out)], write=True)
    rep, code = run_command(["union-check", "--in", str(out)])
    assert code == 0
    res = rep["results"]
    assert res["det"] in (4096, -4096) and all(res["links"].values()) and res["union_lemma"]
    rep2, code = run_command(["union-check", "--in", str(out), "--rows", "1,2", "--cols", "1,2"])
    assert code == 0 and rep2["results"]["k"] == 2
    assert all(verify_report(rep2).values())
    assert run_command(["union-check", "--in", str(out), "--rows", "1,2"])[1] == 1


def test_hereditary_vecdisc(tmp_path):
    tri = _write(tmp_path, "tri.json", (GOLDEN / "triangle.json").read_text())
    rep, code = run_command(["vecdisc", "--in", tri, "--hereditary", "exact"])
    assert code == 0 and rep["results"]["hervecdisc"] == pytest.approx(1.0, abs=1e-5)
    assert all(verify_report(rep).values())


def test_main_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "herdisc", "gen", "palvolgyi", "--k", "2", "--l", "2",
                          "--out", "-"], capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout == (GOLDEN / "palvolgyi_2_2.json").read_text()
