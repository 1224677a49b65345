import json
import subprocess
import sys


from flagcert.cli import main


def run(tmp_path, *args, fmt="text"):
    return main(["--output-dir", str(tmp_path), "--format", fmt, *args])


def manifest(tmp_path):
    return json.loads((tmp_path / "manifest.json").read_text())


def test_enumerate_writes_file_and_manifest(tmp_path, capsys):
    assert run(tmp_path, "enumerate", "5") == 0
    lines = (tmp_path / "F5.txt").read_text().splitlines()
    assert lines[0] == "#flagcert graphs v1" and len(lines) == 12
    m = manifest(tmp_path)
    assert m["exit_code"] == 0
    assert m["stats"]["count"] == 11
    assert str(tmp_path / "F5.txt") in m["outputs"]
    assert {"flagcert", "python", "numpy"} <= set(m["versions"])
    assert "F5: 11 graphs" in capsys.readouterr().out


def test_json_output_mirrors_stats(tmp_path, capsys):
    assert run(tmp_path, "tournaments", "texact", "7", fmt="json") == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"n": 7, "t_exact": 2, "upper_bound": 2}
    assert manifest(tmp_path)["stats"] == out


def test_repeated_runs_give_identical_manifests(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["--output-dir", str(d), "construct", "random-tournament", "--n", "9", "--seed", "4"]) == 0
    ma, mb = manifest(a), manifest(b)
    for m in (ma, mb):
        m.pop("seconds")
        m["outputs"] = sorted(m["outputs"].values())
        m["command"] = m["command"][2:]
        m["stats"].pop("file")
    assert ma == mb


def test_tournament_and_hadamard_commands(tmp_path, capsys):
    assert run(tmp_path, "tournaments", "enum", "5") == 0
    assert "12 tournaments" in capsys.readouterr().out
    assert run(tmp_path, "tournaments", "realize", "5:123145") == 0
    assert "not realisable" in capsys.readouterr().out
    assert run(tmp_path, "hadamard", "paley", "7") == 0
    assert (tmp_path / "hadamard_8.txt").exists()
    assert run(tmp_path, "hadamard", "to-tournament", str(tmp_path / "hadamard_8.txt")) == 0
    assert manifest(tmp_path)["inputs"]
    assert run(tmp_path, "hadamard", "from-tournament", "3:101") == 0
    assert run(tmp_path, "hadamard", "from-tournament", "3:111") == 2


def test_construct_and_flags(tmp_path, capsys):
    assert run(tmp_path, "construct", "blowup", "--n", "36", "--depth", "1", "--seed", "3") == 0
    assert "K4^- -free: True" in capsys.readouterr().out
    assert run(tmp_path, "flags", "tau", "4") == 0
    assert manifest(tmp_path)["stats"]["count"] == 8
    assert run(tmp_path, "pairdensity", "tau", "3", "3") == 0
    assert run(tmp_path, "expressions", "target") == 0


def test_exit_codes(tmp_path):
    assert run(tmp_path, "verify", str(tmp_path / "missing.txt")) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("#flagcert certificate v1\n[Q1]\n1 1\n1\n")
    assert run(tmp_path, "verify", str(bad)) == 2
    assert "missing section" in manifest(tmp_path)["stats"]["error"]
    assert run(tmp_path, "tournaments", "enum", "9") == 3
    assert run(tmp_path, "enumerate", "8") == 3
    assert run(tmp_path, "flags", "nosuchtype", "4") == 2
    assert run(tmp_path, "no-such-command") == 2


def test_verify_zero_template_fails(tmp_path, capsys):
    assert run(tmp_path, "template") == 0
    capsys.readouterr()
    assert run(tmp_path, "verify", str(tmp_path / "certificate_template.txt")) == 1
    out = capsys.readouterr().out
    assert out.startswith("FAIL")
    assert "most negative slack -5/7" in out
    verdict = json.loads((tmp_path / "verdict.json").read_text())
    assert verdict["pass"] is False and verdict["negative_slack"] > 0


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "flagcert", "--output-dir", str(tmp_path),
                        "tournaments", "texact", "5"], capture_output=True, text=True)
    assert r.returncode == 0
    assert "t(5) = 1" in r.stdout
