import csv
import json
import subprocess
import sys

import pytest

from schreierlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def pair_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("pair") / "pair.json"
    assert main(["pair", "build", "--p", "2", "--q", "1", "--stages", "3", "--out", str(path)]) == 0
    return path


def test_schreier_member(capsys):
    assert run(capsys, "schreier", "member", "--xi", "w", "--set", "5,6,7,8,9,10")[:2] == (0, "true\n")
    code, out, _ = run(capsys, "schreier", "member", "--xi", "1", "--set", "2,3,4", "--json")
    assert json.loads(out)["member"] is False


def test_schreier_enum_json(capsys):
    code, out, _ = run(capsys, "schreier", "enum", "--xi", "1", "--max", "4", "--json")
    assert code == 0
    assert json.loads(out)["maximal"] == [[1], [2, 3], [2, 4], [3, 4]]
    code, out, _ = run(capsys, "schreier", "enum", "--xi", "2", "--max", "10", "--json")
    sets = json.loads(out)["maximal"]
    assert all(isinstance(x, int) for F in sets for x in F)


def test_schreier_threshold_and_find_l(capsys):
    assert run(capsys, "schreier", "threshold", "--xi", "3", "--zeta", "w", "--max", "12")[1] == "3\n"
    assert run(capsys, "schreier", "find-l", "--xi", "1", "--zeta", "1", "--max", "10")[1] == \
        "1,2,3,4,5,6,7,8,9,10\n"


def test_schreier_errors(capsys):
    assert run(capsys, "schreier", "enum", "--xi", "1", "--max", "99")[0] == 1
    assert run(capsys, "schreier", "member", "--xi", "w^", "--set", "1")[0] == 1


def test_seq_norm(capsys, pair_file):
    code, out, _ = run(capsys, "seq", "norm", "--space", "lorentz", "--q", "1",
                       "--weights", str(pair_file), "--vec", "1:1,2:1")
    assert code == 0 and float(out) == pytest.approx(1 + 2 ** -0.5)
    assert float(run(capsys, "seq", "norm", "--space", "lp", "--p", "2", "--vec", "1:3,7:4")[1]) == 5
    assert float(run(capsys, "seq", "norm", "--space", "c0", "--vec", "1:1,2:-2,3:2")[1]) == 2
    code, out, _ = run(capsys, "seq", "norm", "--space", "pair", "--weights", str(pair_file),
                       "--vec", "4:1", "--json")
    assert json.loads(out)["norm"] == 2.0
    code, out, _ = run(capsys, "seq", "norm", "--space", "lorentz", "--weights", f"{pair_file}#wt",
                       "--summing", "30", "--precision", "extended")
    assert float(out) == pytest.approx(2 + sum(j ** -0.5 for j in range(3, 31)), rel=1e-14)


def test_seq_export(capsys, tmp_path, pair_file):
    out = tmp_path / "w.csv"
    assert run(capsys, "seq", "export", "--weights", str(pair_file), "--n", "40", "--out", str(out))[0] == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["n", "w_n", "wtilde_n", "segment_id"]
    assert len(rows) == 41


def test_pair_build_and_validate(capsys, pair_file):
    code, out, _ = run(capsys, "pair", "validate", str(pair_file), "--samples", "200", "--json")
    assert code == 0 and json.loads(out)["passed"]


def test_pair_build_budget(capsys, tmp_path):
    code, _, err = run(capsys, "pair", "build", "--p", "2", "--q", "1", "--stages", "4",
                       "--out", str(tmp_path / "p4.json"))
    assert code == 1 and "bits" in err
    assert not (tmp_path / "p4.json").exists()


def test_pair_validate_corrupted(capsys, tmp_path, pair_file):
    data = json.loads(pair_file.read_text())
    data["segments_w"][1]["s"] = "-1/2"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert run(capsys, "pair", "validate", str(bad), "--samples", "20")[0] == 2


def test_dominate_const(capsys, pair_file):
    argv = ["dominate", "const", "--x", f"lorentz:{pair_file}#w", "--y", "lp:2", "--xi", "1",
            "--max", "50", "--budget", "200", "--seed", "7", "--json"]
    code, out, _ = run(capsys, *argv)
    first = json.loads(out)
    assert code == 0 and first["schema"] == "schreierlab.domination/1"
    assert first["constant_estimate"] >= 1
    assert run(capsys, *argv)[1] == out


def test_dominate_counterexample(capsys, tmp_path):
    code, out, _ = run(capsys, "dominate", "counterexample", "--p", "3", "--q", "1.5", "--stages", "3",
                       "--samples", "300", "--json", "--plot-dir", str(tmp_path))
    assert code == 0 and json.loads(out)["verdict"] == "PASS"
    assert (tmp_path / "witnesses.csv").read_text().splitlines()[0] == "k,n_k,ratio"
    assert (tmp_path / "weights.csv").read_text().splitlines()[0] == "n,w,wtilde,segment"


def test_dominate_counterexample_unbuildable(capsys, tmp_path):
    code, out, _ = run(capsys, "dominate", "counterexample", "--p", "2", "--q", "1", "--stages", "4",
                       "--samples", "10", "--json", "--plot-dir", str(tmp_path))
    assert code == 2 and json.loads(out)["verdict"] == "FAIL"
    # no singular witnesses were produced: header only
    assert (tmp_path / "witnesses.csv").read_text() == "k,n_k,ratio\n"


def test_suite_config_errors(capsys, tmp_path):
    assert run(capsys, "suite", "--max-n", "0")[0] == 1
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"max_n": 0}))
    assert run(capsys, "suite", "--config", str(cfg))[0] == 1
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "suite", "--config", str(cfg))[0] == 1


def test_suite_unwritable_output(capsys, tmp_path):
    assert run(capsys, "suite", "--out", str(tmp_path / "missing" / "r.json"))[0] == 1


def test_suite_corrupted_pair_file(capsys, tmp_path, pair_file):
    data = json.loads(pair_file.read_text())
    data["stages"][1]["n"] += 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(capsys, "suite", "--pair-file", str(bad), "--samples", "50", "--max-n", "8",
                       "--max-stages", "2", "--json")
    assert code == 2
    report = json.loads(out)
    assert not report["passed"]


def test_suite_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"max_n": 0, "samples": 10}))
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "suite", "--config", str(cfg), "--max-n", "8", "--max-stages", "2",
                     "--out", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["config"]["max_n"] == 8 and report["config"]["samples"] == 10


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "schreierlab.cli", "schreier", "member", "--xi", "2",
                          "--set", "2,3,4,5"], capture_output=True, text=True, check=True)
    assert out.stdout == "true\n"
