import json
import subprocess
import sys

import pytest

from chainmf.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_collection_22(capsys):
    code, out, _ = run(capsys, "collection", "-a", "2,2")
    assert code == 0
    d = json.loads(out)
    assert d["passed"] and len(d["collection"]["objects"]) == 3
    assert d["schema"] == "chainmf.report/1" and d["version"]


def test_collection_3(capsys):
    code, out, _ = run(capsys, "collection", "-a", "3", "--format", "text")
    assert code == 0 and "2 objects" in out


@pytest.mark.parametrize("argv", [["collection", "-a", "1,2"], ["checks", "-a", ""],
                                  ["collection", "-a", "2,x"], ["collection", "-a", "2,2", "--format", "dot"],
                                  ["hom", "-a", "3", "0", "7"], ["collection", "-a", "2", "--window", "3,1"]])
def test_config_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_quiver_dot(capsys):
    code, out, _ = run(capsys, "quiver", "-a", "3", "--format", "dot")
    assert code == 0
    assert out.count("->") == 1 and 'label="lambda 0"' in out


def test_quiver_json(capsys):
    code, out, _ = run(capsys, "quiver", "-a", "2,2", "--format", "json")
    d = json.loads(out)
    assert code == 0 and len(d["quiver"]["vertices"]) == 3 and d["passed"]


def test_quiver_fixture_compare(capsys, tmp_path):
    good = tmp_path / "good.dot"
    main(["quiver", "-a", "2,2", "--format", "dot", "--out", str(good)])
    capsys.readouterr()
    code, _, _ = run(capsys, "quiver", "-a", "2,2", "--format", "dot", "--expect", str(good))
    assert code == 0
    bad = tmp_path / "bad.dot"
    bad.write_text(good.read_text().replace("sigma", "lambda"))
    code, _, err = run(capsys, "quiver", "-a", "2,2", "--format", "dot", "--expect", str(bad))
    assert code == 1 and "differs" in err


def test_hom(capsys):
    code, out, _ = run(capsys, "hom", "-a", "3", "0", "1")
    dims = dict(map(tuple, json.loads(out)["dims"]))
    assert code == 0 and dims[0] == 1 and sum(dims.values()) == 1
    _, out, _ = run(capsys, "hom", "-a", "2,2", "0", "0")
    dims = dict(map(tuple, json.loads(out)["dims"]))
    assert dims[0] == 1 and sum(dims.values()) == 1
    _, out, _ = run(capsys, "hom", "-a", "3", "1", "0")
    assert all(d == 0 for _, d in json.loads(out)["dims"])
    _, out, _ = run(capsys, "hom", "-a", "3", "0", "1", "--window=-1,1", "--format", "text")
    assert out == "-1\t0\n0\t1\n1\t0\n"


def test_milnor(capsys):
    _, out, _ = run(capsys, "milnor", "-a", "2,2")
    d = json.loads(out)
    assert (d["recursion"], d["weights"], d["agree"]) == (3, 3, True)
    _, out, _ = run(capsys, "milnor", "-a", "2")
    assert json.loads(out)["recursion"] == 1
    code, out, _ = run(capsys, "milnor", "-a", "2,1")
    d = json.loads(out)
    assert code == 0 and d["recursion"] == 2 and d["weights"] is None and d["note"]


def test_checks(capsys):
    code, out, _ = run(capsys, "checks", "-a", "3,2")
    assert code == 0 and json.loads(out)["passed"]


def test_verification_failure_exit(capsys):
    code, out, err = run(capsys, "quiver", "-a", "3,2")
    assert code == 1
    d = json.loads(out)
    assert not d["passed"] and d["reports"][0]["counterexamples"]


def test_jobs_deterministic(tmp_path):
    outs = []
    for jobs in ("1", "3"):
        p = tmp_path / f"j{jobs}.json"
        r = subprocess.run([sys.executable, "-m", "chainmf.cli", "collection", "-a", "2,3", "--jobs", jobs,
                            "--out", str(p)], capture_output=True, text=True)
        assert r.returncode == 0, r.stderr
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
