from fractions import Fraction

import pytest

from sumset_lab.group import GroupSpec
from sumset_lab.harness import (ConfigError, csv_header, failed_checks, format_csv, format_jsonl,
                                fuzz_check, minimize_witness, parse_config, safe_eval, sweep,
                                write_outputs)
from sumset_lab.sumsets import PointSet
import sumset_lab.harness as harness


def test_safe_eval():
    assert safe_eval("m^2 + 1", {"m": 3}) == 10
    assert safe_eval("m / 2", {"m": 3}) == Fraction(3, 2)
    assert safe_eval("[1, 2, 3]", {}) == [1, 2, 3]
    for bad in ("__import__('os')", "m", "1 +", "'x'"):
        with pytest.raises(ConfigError):
            safe_eval(bad, {})


def test_parse_config_grid():
    cfg = parse_config("""
    # comment
    family = random
    m = [2, 3]
    p = 1
    K = m^2 * 2   # derived
    seeds = [0, 1]
    max_h = 4
    jobs = 2
    """)
    assert cfg.max_h == 4 and cfg.jobs == 2 and cfg.seeds == [0, 1]
    assert cfg.param_names == ["m", "p", "K", "seed"]
    assert cfg.grid() == [
        {"m": 2, "p": 1, "K": 8, "seed": 0}, {"m": 2, "p": 1, "K": 8, "seed": 1},
        {"m": 3, "p": 1, "K": 18, "seed": 0}, {"m": 3, "p": 1, "K": 18, "seed": 1},
    ]


@pytest.mark.parametrize("text", ["m = 1", "family = ruzsa\nm 2", "family = ruzsa\nm = 1\nm = 2",
                                  "family = ruzsa\nK = q^2", "family = ruzsa\nmax_h = 2"])
def test_parse_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_ruzsa_sweep_records():
    cfg = parse_config("family = ruzsa\nm = [2, 3]\nK = m^2\n")
    recs = sweep(cfg, jobs=1)
    assert [r.sizes[0] for r in recs] == [20, 66]
    for r in recs:
        assert 0 < r.rho(2) <= 1 and r.bounds_ok
    lines = format_csv(cfg, recs).splitlines()
    assert lines[0] == "family,m,K_param,|A|,|2A|,|3A|,K,alpha_2,alpha_3,rho_2,bounds_ok"
    assert lines[1].startswith("ruzsa,2,4,20,132,462,")


def test_empty_grid_header_only(tmp_path):
    cfg = parse_config("family = ruzsa\nm = []\nK = m^2\n")
    recs = sweep(cfg)
    assert recs == []
    csv_path, jsonl_path = write_outputs(cfg, recs, str(tmp_path / "out"))
    assert csv_path.read_text() == ",".join(csv_header(cfg)) + "\n"
    assert jsonl_path.read_text() == ""


def test_invalid_points_skipped(caplog):
    cfg = parse_config("family = ruzsa\nm = 2\nK = [1, 4, 100]\n")
    recs = sweep(cfg)
    assert [r.params["K"] for r in recs] == [4] and recs[0].index == 1
    assert "skipped" in caplog.text


def test_gap_sweep_progression_sizes():
    cfg = parse_config("family = gap\nk = [2, 3]\nd = 1\nK = k\n")
    for r in sweep(cfg):
        k = r.params["k"]
        assert r.realized["P_sumset_sizes"][1] == 2 * k - 1


def test_sweep_deterministic_across_jobs():
    cfg = parse_config("family = random\nm = [2, 3]\np = 0.5\nK = m^2\nseeds = [4, 5]\n")
    a, b = sweep(cfg, jobs=1), sweep(cfg, jobs=3)
    assert format_csv(cfg, a) == format_csv(cfg, b)
    strip = lambda recs: [{k: v for k, v in r.to_json().items() if k != "wall_time"} for r in recs]
    assert strip(a) == strip(b)
    assert '"wall_time"' in format_jsonl(a)


def test_fuzz_clean():
    s = fuzz_check(GroupSpec.integers(), 60, 6, seed=3)
    assert s.ok and s.trials == 60
    s = fuzz_check(GroupSpec.cyclic(16, 2), 40, 6, seed=3, jobs=2)
    assert s.ok
    with pytest.raises(ValueError):
        fuzz_check(GroupSpec.integers(), 0, 5)
    with pytest.raises(ValueError):
        fuzz_check(GroupSpec.integers(), 5, 0)


def test_fuzz_reports_minimized_witness(monkeypatch):
    # a planted bug: pretend any set containing 0 and 5 breaks a check
    def fake(A):
        e = set(A.elements)
        return ["planted"] if {(0,), (5,)} <= e else []

    monkeypatch.setattr(harness, "failed_checks", fake)
    A = PointSet(GroupSpec.integers(), [[v] for v in (-3, 0, 2, 5, 9)])
    assert minimize_witness(A, "planted").elements == ((0,), (5,))


def test_failed_checks_clean_on_real_sets():
    assert failed_checks(PointSet(GroupSpec.integers(), [[0], [1], [4], [9]])) == []
