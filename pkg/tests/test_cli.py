import os
import subprocess
import sys
from pathlib import Path

import pytest

from surprisal.cli import main

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"

# name -> (argv, expected exit status); paths are relative to tests/data
CASES = {
    "measures": (["measures", "three_level.json"], 0),
    "measures_reference": (["measures", "with_reference.json"], 0),
    "measures_csv": (["--format", "csv", "measures", "with_reference.json"], 0),
    "lorenz": (["lorenz", "with_reference.json"], 0),
    "check_yes": (["check", "steeper.json", "three_level.json"], 0),
    "check_no": (["check", "three_level.json", "steeper.json"], 1),
    "check_eps": (["check", "three_level.json", "steeper.json", "--eps", "0.1"], 0),
    "approx_flat": (["approx", "with_reference.json", "--mode", "flat", "--eps", "0.05"], 0),
    "approx_steep": (["approx", "with_reference.json", "--mode", "steep", "--eps", "0.15"], 0),
    "approx_csv": (["--format", "csv", "approx", "three_level.json", "--mode", "flat", "--eps", "0.05"], 0),
    "smooth": (["smooth", "with_reference.json", "--eps", "0.1", "--exact"], 0),
    "suffice_yes": (["suffice", "peaked.json", "mild.json", "--eps", "0.9"], 0),
    "suffice_no": (["suffice", "peaked.json", "mild.json", "--eps", "0.5"], 1),
    "iid_rate": (["iid-rate", "steeper.json", "three_level.json", "--n", "100000", "--eps", "0.05"], 0),
    "iid_rate_uncertified": (["iid-rate", "steeper.json", "three_level.json", "--n", "3", "--eps", "0.05"], 1),
    "landauer_qubit": (["bounds", "landauer", "qubit_mixed.json"], 0),
    "landauer_qubit_qutrit": (["bounds", "landauer", "qubit_qutrit.json", "--n-max", "12"], 0),
    "catalyst": (["bounds", "catalyst", "--delta", "0.01", "--d-s", "2", "--d-e", "8", "--m-from", "4.5"], 0),
    "production": (["bounds", "production", "steeper.json", "three_level.json"], 0),
    "marginal": (["bounds", "marginal", "bipartite.json"], 0),
    "spectrum": (["spectrum-from-renyi", "renyi_four.txt", "--dim", "4"], 0),
    "proptest_cantelli": (["proptest", "--suite", "cantelli", "--trials", "50", "--seed", "7"], 0),
    "proptest_monotone_mutated": (["proptest", "--suite", "monotone", "--trials", "20", "--seed", "7", "--mutate"], 1),
    "proptest_spectral": (["proptest", "--suite", "spectral", "--trials", "40", "--seed", "7"], 0),
}


def run_cli(argv):
    return subprocess.run(
        [sys.executable, "-m", "surprisal.cli", *argv],
        cwd=DATA,
        capture_output=True,
        env={**os.environ, "PYTHONHASHSEED": "0"},
    )


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    argv, status = CASES[name]
    first, second = run_cli(argv), run_cli(argv)
    assert first.returncode == status, first.stderr.decode()
    assert first.stdout == second.stdout
    path = GOLDEN / f"{name}.txt"
    if os.environ.get("UPDATE_GOLDEN"):
        path.write_bytes(first.stdout)
    assert first.stdout == path.read_bytes()


def test_lorenz_out_file(tmp_path):
    out = tmp_path / "curve.csv"
    rc = main(["lorenz", str(DATA / "three_level.json"), "--out", str(out)])
    assert rc == 0
    assert out.read_text() == "x,y\n0,0\n0.33333333333333331,0.5\n0.66666666666666663,0.80000000000000004\n1,1\n"


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["measures", "bad_negative.json"], "bad_negative.json:2: field 'p': entry 1 is negative"),
        (["measures", "bad_reference.json"], "bad_reference.json:3: field 's'"),
        (["measures", "bad_syntax.json"], "bad_syntax.json:3: invalid JSON"),
        (["measures", "missing.json"], "missing.json:0: cannot read file"),
        (["spectrum-from-renyi", "bad_renyi.txt", "--dim", "3"], "bad_renyi.txt:2: field 'renyi'"),
        (["approx", "three_level.json", "--mode", "flat", "--eps", "1.5"], "InvalidEpsilon"),
        (["bounds", "catalyst", "--delta", "0.1"], "field 'd_s'"),
    ],
)
def test_input_errors(argv, fragment):
    res = run_cli(argv)
    assert res.returncode == 2
    assert fragment in res.stderr.decode()
    assert res.stdout == b""


def test_usage_error_exit_code():
    assert run_cli(["approx", "three_level.json"]).returncode == 2


def test_timing_flag_adds_runtime(capsys):
    main(["proptest", "--suite", "eta_chi", "--trials", "5", "--timing"])
    assert "runtime:" in capsys.readouterr().out
