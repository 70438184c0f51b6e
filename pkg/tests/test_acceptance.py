"""Acceptance criteria 1-12, each at the stated sizes and tolerances.

Every test logs one ``criterion N: PASS|FAIL`` line, printed in the terminal
summary, and fails when any of its gates fails.
"""

import functools
import math

import pytest

from relheat.cli_runner import main
from relheat.suites import run_suite

pytestmark = pytest.mark.slow


@functools.lru_cache(maxsize=None)
def suite(name):
    return run_suite(name, seed=0)


def check(log, number, gates):
    failed = [g for g in gates if not g.passed]
    detail = "; ".join(f"{g.name}={g.value:.4g} (<= {g.threshold:g})" for g in gates)
    log.append(f"criterion {number}: {'FAIL' if failed else 'PASS'}  {detail}")
    assert not failed, f"criterion {number} failed: " + ", ".join(g.name for g in failed)


def pick(result, *names):
    return [result.gate(n) for n in names]


def test_criterion_01_special_functions(criterion_log):
    check(criterion_log, 1, suite("special_functions").gates)


def test_criterion_02_free_kernel_exactness(criterion_log):
    r = suite("free_kernel")
    check(criterion_log, 2, pick(r, "cauchy_max_rel_error", "normalization_max_error",
                                 "chapman_kolmogorov_rel_error"))


def test_criterion_03_gaussian_regime(criterion_log):
    r = suite("free_kernel")
    check(criterion_log, 3, pick(r, "gaussian_regime_rel_dev", "fine_quadrature_rel_dev"))


def test_criterion_04_scaling_identities(criterion_log):
    check(criterion_log, 4, suite("scaling").gates)


def test_criterion_05_free_kernel_envelope(criterion_log):
    check(criterion_log, 5, suite("thm21_free").gates)


def test_criterion_06_sampler_identities(criterion_log):
    check(criterion_log, 6, suite("sampler_laplace").gates)


def test_criterion_07_survival_exponent(criterion_log):
    check(criterion_log, 7, suite("survival_slope").gates)


def test_criterion_08_killed_kernel_envelope(criterion_log):
    check(criterion_log, 8, suite("thm12_full").gates)


def test_criterion_09_hitting_envelope(criterion_log):
    check(criterion_log, 9, suite("lemma41_hitting").gates)


def test_criterion_10_green(criterion_log):
    check(criterion_log, 10, suite("thm13_green").gates)


def test_criterion_11_green_integrals(criterion_log):
    check(criterion_log, 11, suite("green_integrals").gates)


def _outputs(path):
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())
            if not p.name.endswith(".timing.json")}


def test_criterion_12_reproducibility(criterion_log, tmp_path):
    checks = []
    for name in ("sampler_laplace", "scaling"):
        runs = []
        for k, threads in enumerate(("1", "1", "8")):
            out = tmp_path / f"{name}{k}"
            main(["verify", name, "--seed", "5", "--threads", threads, "--out", str(out)])
            runs.append(_outputs(out))
        checks.append((f"{name}_rerun", runs[0] == runs[1]))
        checks.append((f"{name}_threads_1_vs_8", runs[0] == runs[2]))
    cfg = tmp_path / "sim.toml"
    cfg.write_text("seed = 9\n[process]\nm = 0.5\n[domain]\nradius = 1.0\n"
                   "[estimator]\nn_replicates = 10000\n"
                   "[grid]\npoints = [{t = 1.0, x = [1.2, 0, 0]}]\n")
    sims = []
    for threads in ("1", "8"):
        out = tmp_path / f"sim{threads}"
        assert main(["simulate", "--config", str(cfg), "--threads", threads,
                     "--out", str(out)]) == 0
        sims.append(_outputs(out))
    checks.append(("simulate_threads_1_vs_8", sims[0] == sims[1]))
    failed = [name for name, ok in checks if not ok]
    status = "FAIL " + ", ".join(failed) if failed else "PASS"
    criterion_log.append(f"criterion 12: {status}  {len(checks)} byte-identity checks")
    assert not failed
