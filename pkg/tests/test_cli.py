import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from coherence_forge.linalg import array_to_json

TAU = 2 * math.pi


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "coherence_forge.cli", *args],
        capture_output=True, text=True, env=env,
    )


@pytest.fixture()
def fixtures(tmp_path):
    def dump(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    plus = np.array([1.0, 1.0]) / math.sqrt(2)
    rho = 0.6 * np.outer(plus, plus) + 0.4 * np.eye(2) / 2
    u023 = np.zeros(4)
    u023[0] = u023[2] = u023[3] = 1.0 / math.sqrt(3)
    return {
        "rho": dump("rho.json", array_to_json(rho)),
        "cbit": dump("cbit.json", array_to_json(plus)),
        "u023": dump("u023.json", array_to_json(u023)),
        "h2": dump("h2.json", {"levels_in_2pi_over_tau": [0, 1], "tau": TAU}),
        "h4": dump("h4.json", {"levels_in_2pi_over_tau": [0, 1, 2, 3],
                               "tau": TAU}),
        "hz_dense": dump("hz.json", array_to_json(np.diag([0.5, -0.5]))),
        "bad": dump("bad.json", {"re": "nonsense"}),
        "dir": tmp_path,
    }


def test_measures_reference_output(fixtures):
    res = run_cli("measures", "--state", fixtures["rho"],
                  "--ham", fixtures["hz_dense"], "--alpha", "2.0")
    assert res.returncode == 0
    out = json.loads(res.stdout)
    assert abs(out["F"] - 0.36) < 1e-12
    assert abs(out["P"] - 0.5625) < 1e-12
    assert abs(out["W"] - 0.05) < 1e-12
    assert out["support_commutes"] is True
    assert out["variance_if_pure"] is None
    assert abs(out["renyi"] - out["P"]) < 1e-12


def test_measures_infinite_purity(fixtures):
    res = run_cli("measures", "--state", fixtures["cbit"],
                  "--ham", fixtures["hz_dense"])
    assert res.returncode == 0
    out = json.loads(res.stdout)
    assert out["P"] == "inf"
    assert abs(out["variance_if_pure"] - 0.25) < 1e-12


def test_purify_round_trip(fixtures):
    from coherence_forge.linalg import array_from_json

    res = run_cli("purify", "--state", fixtures["rho"],
                  "--ham", fixtures["hz_dense"], "--ensemble")
    assert res.returncode == 0
    out = json.loads(res.stdout)
    assert abs(out["total_variance"] - out["qfi_over_4"]) < 1e-10
    assert abs(out["total_variance"] - 0.09) < 1e-10
    assert out["kkt_residual"] < 1e-10
    H_A = array_from_json(out["aux_hamiltonian"])
    assert np.max(np.abs(H_A - H_A.conj().T)) < 1e-12
    weights = [m["weight"] for m in out["ensemble"]]
    assert abs(sum(weights) - 1.0) < 1e-10


def test_dist_csv_and_summary(fixtures):
    res = run_cli("dist", "--state", fixtures["u023"],
                  "--ham", fixtures["h4"], "--copies", "4")
    assert res.returncode == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "n,p"
    summary = json.loads(lines[-1])
    assert abs(summary["period"] - TAU) < 1e-9
    assert summary["L"] == 2
    assert summary["tv_to_tp"] <= summary["barbour_bound"]
    rows = [ln.split(",") for ln in lines[1:-1]]
    total = sum(float(p) for _, p in rows)
    assert abs(total - 1.0) < 1e-9
    assert rows[0][0] == "0" and rows[-1][0] == "12"


def test_dist_gcd_not_one(fixtures, tmp_path):
    psi02 = np.zeros(3)
    psi02[0] = psi02[2] = 1.0 / math.sqrt(2)
    state = tmp_path / "psi02.json"
    state.write_text(json.dumps(array_to_json(psi02)))
    ham = tmp_path / "h3.json"
    ham.write_text(json.dumps({"levels_in_2pi_over_tau": [0, 1, 2],
                               "tau": TAU}))
    res = run_cli("dist", "--state", str(state), "--ham", str(ham))
    assert res.returncode == 0
    summary = json.loads(res.stdout.strip().splitlines()[-1])
    assert summary["L"] == "GcdNotOne"
    assert summary["barbour_bound"] == "inf"
    assert abs(summary["period"] - TAU / 2) < 1e-9


def test_convert_defaults_to_max_rate(fixtures):
    res = run_cli("convert", "--in", fixtures["u023"], fixtures["h4"],
                  "--out", fixtures["cbit"], fixtures["h2"],
                  "--copies", "8,32")
    assert res.returncode == 0
    assert "max rate" in res.stderr
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "m,k,tv_error,fidelity_floor"
    rows = [ln.split(",") for ln in lines[1:]]
    assert [r[0] for r in rows] == ["8", "32"]
    for r in rows:
        tv = float(r[2])
        assert abs(float(r[3]) - max(0.0, 1 - 2 * tv)) < 1e-12


def test_convert_below_rate_improves_with_copies(fixtures):
    rate = 0.9 * 56.0 / 9.0
    res = run_cli("convert", "--in", fixtures["u023"], fixtures["h4"],
                  "--out", fixtures["cbit"], fixtures["h2"],
                  "--rate", repr(rate), "--copies", "16,128")
    assert res.returncode == 0
    rows = [ln.split(",") for ln in res.stdout.strip().splitlines()[1:]]
    assert float(rows[1][2]) < float(rows[0][2])


def test_distill_single_and_double_copy(fixtures):
    for copies, expect in (("1", 0.8), ("2", 0.8)):
        res = run_cli("distill", "--in", fixtures["rho"], fixtures["h2"],
                      "--target", fixtures["cbit"], fixtures["h2"],
                      "--copies", copies)
        assert res.returncode == 0
        out = json.loads(res.stdout)
        assert abs(out["fidelity"] - expect) < 1e-5
        assert abs(out["hmin"] + math.log2(out["fidelity"])) < 1e-12
        assert out["gap"] < 1e-7
        assert out["bound_exact"] is not None
        assert out["bound_asymptotic"] is not None


def test_qubit_bound_table(fixtures):
    res = run_cli("qubit-bound", "--lambda", "0.6", "--n", "5")
    assert res.returncode == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "n,exact,asymptotic,cirac"
    assert len(lines) == 6
    for ln in lines[1:]:
        n, exact, asym, cirac = ln.split(",")
        assert abs(float(cirac) / float(asym) - 2 / 1.6) < 1e-12


def test_proptest_deterministic_and_seeded():
    a = run_cli("proptest", "--measure", "F", "--trials", "40", "--seed", "7")
    b = run_cli("proptest", "--measure", "F", "--trials", "40", "--seed", "7")
    assert a.returncode == 0
    assert a.stdout == b.stdout
    env = run_cli("proptest", "--measure", "F", "--trials", "40",
                  env_extra={"COHERENCE_FORGE_SEED": "99"})
    assert json.loads(env.stdout)["seed"] == 99
    # explicit flag beats the environment
    flag = run_cli("proptest", "--measure", "F", "--trials", "40",
                   "--seed", "3", env_extra={"COHERENCE_FORGE_SEED": "99"})
    assert json.loads(flag.stdout)["seed"] == 3


def test_error_exit_codes(fixtures):
    missing = run_cli("measures", "--state", "/nonexistent.json",
                      "--ham", fixtures["hz_dense"])
    assert missing.returncode == 1
    bad = run_cli("measures", "--state", fixtures["bad"],
                  "--ham", fixtures["hz_dense"])
    assert bad.returncode == 1
    assert "error:" in bad.stderr
    # dist demands a pure state
    mixed = run_cli("dist", "--state", fixtures["rho"],
                    "--ham", fixtures["h2"])
    assert mixed.returncode == 1


def test_dense_hamiltonian_warns(fixtures):
    res = run_cli("dist", "--state", fixtures["cbit"],
                  "--ham", fixtures["hz_dense"])
    assert res.returncode == 0
    assert "snapped" in res.stderr
