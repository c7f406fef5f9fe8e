import json
import subprocess
import sys

import pytest

from sumset_lab.cli import main


@pytest.fixture
def geo10(tmp_path):
    path = tmp_path / "geo10.pts"
    assert main(["gen", "geometric", "--n", "10", "-o", str(path)]) == 0
    return path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_writes_sidecar(tmp_path, capsys):
    path = tmp_path / "r.pts"
    code, _, _ = run(capsys, "gen", "ruzsa", "--m", "2", "--K", "8", "-o", str(path))
    assert code == 0
    meta = json.loads(path.with_suffix(".json").read_text())
    assert meta["size"] == 26 and meta["params"]["L"] == 8 and meta["group"] == [0, 0, 0]
    assert path.read_text().startswith("#group 0 0 0\n# ruzsa")


def test_gen_random_sidecar_has_seed_and_n(tmp_path, capsys):
    path = tmp_path / "x.pts"
    assert run(capsys, "gen", "random", "--m", "4", "--p", "1/2", "--K", "8", "--seed", "7",
               "-o", str(path))[0] == 0
    meta = json.loads(path.with_suffix(".json").read_text())
    assert meta["params"]["n"] == 16 and meta["params"]["seed"] == 7
    assert meta["params"]["p"] == {"num": 1, "den": 2, "float": 0.5}


def test_gen_errors(capsys):
    assert run(capsys, "gen", "ruzsa", "--m", "2", "--K", "100")[0] == 2
    assert run(capsys, "gen", "ruzsa", "--m", "2")[0] == 2
    assert run(capsys, "gen", "higher", "--h", "3", "--m", "2", "--alpha", "5")[0] == 2


def test_gen_to_stdout(capsys):
    code, out, _ = run(capsys, "gen", "gap", "--k", "1", "--d", "2", "--K", "1")
    assert code == 0 and out.startswith("#group 0 0 0")


def test_stats_json(geo10, capsys):
    code, out, _ = run(capsys, "stats", "-i", str(geo10), "--max-h", "3", "--json")
    data = json.loads(out)
    assert code == 0 and data["sizes"] == [10, 55, 220]
    assert data["K"] == {"num": 11, "den": 2, "float": 5.5}


def test_stats_text(geo10, capsys):
    code, out, _ = run(capsys, "stats", "-i", str(geo10))
    assert code == 0 and "|3A| = 220" in out


def test_check_ok(geo10, capsys):
    code, out, _ = run(capsys, "check", "-i", str(geo10))
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "check", "-i", str(geo10), "--json")
    assert json.loads(out)["all_hold"] is True


def test_check_violation_exit_code(geo10, capsys, monkeypatch):
    import sumset_lab.cli as cli
    from sumset_lab.bounds import bounds_from_sizes
    monkeypatch.setattr(cli, "bound_suite", lambda A, H: bounds_from_sizes((3, 6, 100)))
    code, _, err = run(capsys, "check", "-i", str(geo10))
    assert code == 1 and "witness" in err


def test_missing_and_bad_input(tmp_path, capsys):
    assert run(capsys, "stats", "-i", str(tmp_path / "missing.pts"))[0] == 2
    bad = tmp_path / "bad.pts"
    bad.write_text("1\n2\n")
    assert run(capsys, "check", "-i", str(bad))[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "stats", "-i", str(bad), "--max-h", "x")[0] == 2


def test_embed_and_dissoc(tmp_path, capsys):
    p = tmp_path / "a.pts"
    p.write_text("#group 0\n0\n1\n2\n")
    code, out, _ = run(capsys, "embed", "-i", str(p), "--h", "2")
    lines = out.splitlines()
    assert code == 0 and lines[1:6] == ["0 0", "0 1", "0 2", "1 2", "2 2"]
    assert lines[-1] == "# shadow identity: ok"
    code, out, _ = run(capsys, "embed", "-i", str(p), "--h", "3", "--json")
    assert json.loads(out) == {"h": 3, "sizes": {"S": 7, "C": 5, "shadow": 5},
                               "shadow_identity": True}
    code, out, _ = run(capsys, "embed", "-i", str(p), "--h", "3", "--tuples")
    assert code == 0 and "0 0 0" in out
    assert run(capsys, "dissoc", "-i", str(p), "--h", "2")[1].strip() == "false"
    assert run(capsys, "embed", "-i", str(p), "--h", "1")[0] == 2


def test_extract(tmp_path, capsys):
    p = tmp_path / "a.pts"
    p.write_text("#group 0\n0\n1\n3\n7\n")
    code, out, _ = run(capsys, "extract", "-i", str(p), "--h", "2", "--M", "2.0", "--json")
    data = json.loads(out)
    assert code == 0 and data["hypothesis_holds"] is False and data["Y"] == []
    assert data["M"] == {"num": 2, "den": 1, "float": 2.0}
    p.write_text("#group 0\n" + "".join(f"{i}\n" for i in range(12)))
    code, out, _ = run(capsys, "extract", "-i", str(p), "--M", "1", "--force",
                       "--strategy", "greedy", "--variant", "h2")
    assert code == 0 and "conclusion 1" in out
    assert run(capsys, "extract", "-i", str(p), "--M", "1", "--h", "3")[0] == 2


def test_stability(geo10, capsys):
    code, out, _ = run(capsys, "stability", "-i", str(geo10), "--json")
    data = json.loads(out)
    assert code == 0 and data["delta"]["num"] == 0 and data["size_y"] == 10
    assert data["triple_bound_holds"] and data["delta_within_theorem"]


def test_sweep_cli(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(f"family = ruzsa\nm = [2, 3]\nK = m^2\noutput = {tmp_path / 'out'}\n")
    code, out, _ = run(capsys, "sweep", str(cfg))
    assert code == 0 and "2 records" in out
    first = (tmp_path / "out.csv").read_bytes()
    assert run(capsys, "sweep", str(cfg), "-j", "2")[0] == 0
    assert (tmp_path / "out.csv").read_bytes() == first
    assert len((tmp_path / "out.jsonl").read_text().splitlines()) == 2
    assert run(capsys, "sweep", str(tmp_path / "none.cfg"))[0] == 2
    cfg.write_text("family = ruzsa\nm = [2]\nK = 4\n")
    assert run(capsys, "sweep", str(cfg))[0] == 2  # no output path
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run(capsys, "sweep", str(cfg), "-o", str(blocker / "x"))[0] == 2


def test_fuzz_cli(capsys):
    code, out, _ = run(capsys, "fuzz", "--group", "16 16", "--trials", "20", "--size-max", "5")
    assert code == 0 and "0 violations" in out
    assert run(capsys, "fuzz", "--trials", "0")[0] == 2
    assert run(capsys, "fuzz", "--group", "1")[0] == 2


def test_console_script_entry(geo10):
    proc = subprocess.run([sys.executable, "-m", "sumset_lab.cli", "check", "-i", str(geo10)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
