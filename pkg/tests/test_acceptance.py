"""Acceptance criteria, one test each; every test prints a PASS/FAIL line with its timing."""

import shutil
import subprocess
import sys
import time

import pytest

from hmh.harness import RunConfig, _run_one, build_checks, golden_report


@pytest.fixture(scope="module")
def config():
    return RunConfig(seed=42).validate()


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, seconds, budget, detail=""):
        within = budget is None or seconds < budget
        line = (f"[acceptance {number:>2}] {'PASS' if ok and within else 'FAIL'}  {title}  "
                f"({seconds:.1f} s" + (f" of {budget:.0f} s" if budget else "") + f") {detail}")
        with capsys.disabled():
            print("\n" + line)
        return ok and within
    return emit


def _run(config, suite, names):
    t0 = time.perf_counter()
    reps = [_run_one(it)[0] for it in build_checks(config, suite) if it[1].func.__name__ in names
            or getattr(it[1].args[0] if it[1].args else None, "__name__", None) in names]
    return reps, time.perf_counter() - t0


def _worst(reps):
    return max(r.rel_err for r in reps)


def test_01_special_function_layer(config, report):
    reps, sec = _run(config, "orthonormality", {"gram_report", "laguerre_report", "phi00_report"})
    assert len(reps) == 10
    ok = all(r.passed for r in reps)
    assert report(1, "Hermite Gram identity 1e-10, Laguerre series 1e-12", ok, sec, 5,
                  f"worst={_worst(reps):.1e}")


def test_02_twisted_heat_identity(config, report):
    reps, sec = _run(config, "heat", {"_check_heat"})
    assert len(reps) == 4
    ok = all(r.passed and r.rel_err <= 1e-8 for r in reps)
    assert report(2, "heat semigroup by twisted convolution 1e-8", ok, sec, 30, f"worst={_worst(reps):.1e}")


def test_03_heat_transform_isometry(config, report):
    reps, sec = _run(config, "bergman", {"_check_heat_isometry"})
    assert len(reps) == 5
    ok = all(r.rel_err <= 1e-5 for r in reps)
    assert report(3, "twisted heat transform isometry 1e-5", ok, sec, 60, f"worst={_worst(reps):.1e}")


def test_04_direct_integral_isometry(config, report):
    reps, sec = _run(config, "bergman", {"_check_direct_integral"})
    assert len(reps) == 10
    ok = all(r.rel_err <= 1e-4 for r in reps)
    assert report(4, "Segal-Bargmann direct integral isometry 1e-4", ok, sec, 180,
                  f"worst={_worst(reps):.1e}")


def test_05_gutzmer_equality(config, report):
    reps, sec = _run(config, "gutzmer", {"_check_gutzmer"})
    assert len(reps) == 2 * config.n_random + 1
    ok = all(r.rel_err <= 1e-5 for r in reps)
    assert report(5, "Gutzmer two-sided equality 1e-5, |Im| <= 0.6", ok, sec, 120,
                  f"worst={_worst(reps):.1e}")


def test_06_poisson_equality(config, report):
    reps, sec = _run(config, "poisson", {"_check_poisson"})
    assert len(reps) == 4
    assert all(r.params["r"] <= 0.3 and max(map(abs, r.params["H"])) <= 0.25 for r in reps)
    ok = all(r.rel_err <= 1e-4 for r in reps)
    assert report(6, "Poisson semigroup orbit equality 1e-4", ok, sec, 180, f"worst={_worst(reps):.1e}")


def test_07_plancherel(config, report):
    t0 = time.perf_counter()
    pins = golden_report()
    reps, sec = _run(config, "plancherel", {"_check_plancherel", "_check_polarization",
                                            "_check_band_capture"})
    sec = time.perf_counter() - t0
    assert len(reps) == config.n_random + 2
    ok = pins.passed and all(r.passed and r.rel_err <= 1e-6 for r in reps)
    assert report(7, "Plancherel 1e-6 with pinned constants, polarization probe", ok, sec, 60,
                  f"worst={_worst(reps):.1e}")


def test_08_paley_wiener(config, report):
    reps, sec = _run(config, "paley_wiener", {"_check_pw_block", "_check_pw_sum",
                                              "_check_pw_identity_point", "_check_pw_sweep"})
    blocks = [r for r in reps if r.identity_name == "paley_wiener_lemma_block"]
    sums = [r for r in reps if r.identity_name.startswith("paley_wiener_block_orthogonality")]
    assert len(blocks) == 4 and len(sums) == 3
    ok = (all(r.rel_err <= 1e-4 and r.params["lemma_display_rel_err"] <= 1e-4 for r in blocks)
          and all(r.params["cross_over_diagonal"] < 1e-6 for r in sums)
          and all(r.params["identity_rel_err"] <= 1e-4 for r in sums)
          and all(r.passed for r in reps))
    cross = max(r.params["cross_over_diagonal"] for r in sums)
    assert report(8, "Paley-Wiener blocks and 2-block sums 1e-4, cross terms < 1e-6", ok, sec, 180,
                  f"worst={_worst(blocks):.1e} cross={cross:.1e}")


def test_09_metaplectic_and_unitarity(config, report):
    reps, sec = _run(config, "orthonormality", {"_check_metaplectic"})
    uni, sec2 = _run(config, "paley_wiener", {"_check_unitarity"})
    assert len(reps) == 4 and len(uni) == 1
    ok = all(r.lhs.real <= 1e-9 for r in reps) and uni[0].rel_err <= 1e-10
    assert report(9, "metaplectic intertwining 1e-9, rho unitarity 1e-10", ok, sec + sec2, None,
                  f"meta={max(r.lhs.real for r in reps):.1e} unit={uni[0].rel_err:.1e}")


def test_10_determinism(tmp_path, report):
    t0 = time.perf_counter()
    outs = [tmp_path / f"run{i}.json" for i in (1, 2)]
    exe = [shutil.which("hmh")] if shutil.which("hmh") else [sys.executable, "-m", "hmh.cli"]
    procs = [subprocess.Popen(exe + ["verify", "all", "--seed", "42", "--json", str(o), "--quiet"])
             for o in outs]
    codes = [p.wait(timeout=900) for p in procs]
    a, b = (o.read_bytes() for o in outs)
    ok = codes == [0, 0] and a == b and len(a) > 0
    assert report(10, "hmh verify all --seed 42 twice gives identical JSON", ok,
                  time.perf_counter() - t0, None, f"exit={codes} bytes={len(a)}")
