import csv
import json
import math

import pytest

from relheat.cli_runner import ConfigError, ExperimentConfig, main


def write(path, text):
    path.write_text(text)
    return str(path)


KERNEL = """
seed = 7
[process]
d = 3
alpha = 1.0
m = 0.0
[grid]
t = [0.5, 2.0]
r = [0.0, 1.0, 3.0]
"""


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_kernel_eval_matches_cauchy(tmp_path):
    cfg = write(tmp_path / "k.toml", KERNEL)
    assert main(["kernel-eval", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    rows = read_csv(tmp_path / "o" / "kernel_eval.csv")
    assert len(rows) == 6
    for row in rows:
        t, r = float(row["t"]), float(row["r"])
        assert float(row["p"]) == pytest.approx(t / (math.pi ** 2 * (t * t + r * r) ** 2),
                                                rel=1e-8)
    assert len({row["config_hash"] for row in rows}) == 1


def test_config_hash_tracks_seed(tmp_path):
    a = ExperimentConfig.from_toml(write(tmp_path / "k.toml", KERNEL))
    b = ExperimentConfig.from_toml(tmp_path / "k.toml")
    assert a.config_hash == b.config_hash
    b.seed = 8
    assert a.config_hash != b.config_hash


@pytest.mark.parametrize("text,key", [
    ("[process]\nalpah = 1\n", "process.alpah"),
    ("[bogus]\nx = 1\n", "bogus"),
    ("[grid]\npoints = [{t = 1, x = [2, 0, 0], z = 1}]\n", "grid.points[0].z"),
    ("[verify.nosuch]\nn = 1\n", "verify.nosuch"),
    ("[verify.scaling]\nwidgets = 1\n", "verify.scaling.widgets"),
])
def test_unknown_keys_are_named(tmp_path, text, key):
    with pytest.raises(ConfigError, match=key.replace("[", r"\[").replace("]", r"\]")):
        ExperimentConfig.from_toml(write(tmp_path / "bad.toml", text))


def test_exit_codes(tmp_path, capsys):
    bad = write(tmp_path / "bad.toml", "[process]\nalpah = 1\n")
    assert main(["kernel-eval", "--config", bad]) == 2
    assert "process.alpah" in capsys.readouterr().err
    assert main(["kernel-eval", "--config", str(tmp_path / "missing.toml")]) == 2
    assert main(["verify", "nosuch", "--out", str(tmp_path)]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["verify", "special_functions", "--threads", "0"]) == 2
    alpha = write(tmp_path / "a.toml", "[process]\nalpha = 2.5\n[grid]\nt = [1.0]\nr = [0.0]\n")
    assert main(["kernel-eval", "--config", alpha, "--out", str(tmp_path)]) == 2
    tol = write(tmp_path / "h.toml", "[process]\nm = 0.0\n[domain]\nradius = 1.0\n"
                "[estimator]\nn_replicates = 10\nhorizon_tol = 1e-300\n"
                "[grid]\npoints = [{x = [3, 0, 0], y = [0, 3, 0]}]\n")
    assert main(["green-eval", "--config", tol, "--out", str(tmp_path)]) == 3


def test_verify_writes_reports_and_is_reproducible(tmp_path, capsys):
    args = ["verify", "special_functions", "--seed", "3"]
    assert main(args + ["--out", str(tmp_path / "a"), "--threads", "1"]) == 0
    assert main(args + ["--out", str(tmp_path / "b"), "--threads", "8"]) == 0
    assert "psi_at_zero" in capsys.readouterr().out
    for name in ("special_functions.json", "special_functions_psi.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    rep = json.loads((tmp_path / "a" / "special_functions.json").read_text())
    assert rep["root_seed"] == 3 and rep["pass"] is True and len(rep["config_hash"]) == 64
    timing = json.loads((tmp_path / "a" / "special_functions.timing.json").read_text())
    assert timing["wall_time_s"] > 0


def test_failing_suite_exits_one_and_merges(tmp_path):
    out = str(tmp_path)
    assert main(["verify", "thm21_free", "--out", out]) == 1
    assert main(["verify", "special_functions", "--out", out]) == 0
    assert main(["report-merge", "--out", out]) == 1
    merged = json.loads((tmp_path / "merged.json").read_text())
    assert [r["suite"] for r in merged["reports"]] == ["special_functions", "thm21_free"]
    rows = read_csv(tmp_path / "merged.csv")
    assert {r["suite"] for r in rows} == {"special_functions", "thm21_free"}


def test_simulate_and_green_eval(tmp_path):
    cfg = write(tmp_path / "s.toml", """
seed = 1
[process]
d = 3
alpha = 1.0
m = 0.5
[domain]
radius = 1.0
[estimator]
n_replicates = 300
[grid]
t = [0.5]
x = [[1.2, 0, 0], [2.0, 0, 0]]
r = [0.5, 2.0]
""")
    out = tmp_path / "o"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    assert len(read_csv(out / "simulate.csv")) == 600
    summary = read_csv(out / "simulate_summary.csv")
    assert float(summary[0]["survival"]) < float(summary[1]["survival"])
    # the default y is the origin, inside the obstacle
    assert main(["green-eval", "--config", cfg, "--out", str(out)]) == 2
    green = write(tmp_path / "g.toml", """
[process]
m = 0.5
[domain]
radius = 1.0
[estimator]
n_replicates = 200
[grid]
r = [0.5, 2.0]
points = [{x = [2, 0, 0], y = [0, 2.5, 0]}]
""")
    assert main(["green-eval", "--config", green, "--out", str(out)]) == 0
    assert len(read_csv(out / "green_eval.csv")) == 2
    killed = read_csv(out / "killed_green.csv")
    assert len(killed) == 1 and float(killed[0]["G_D"]) > 0
