import json
import subprocess
import sys

import pytest

from spnet import __version__
from spnet.cli import DEFAULT_SEED, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_exact_degree_pmf_json(capsys):
    code, out, _ = run(capsys, "exact", "--model", "bernoulli", "--p", "1/2", "--n", "3",
                       "--quantity", "degree-pmf", "--out", "json")
    assert code == 0
    data = json.loads(out)
    assert data["pmf"][:3] == [
        {"m": 1, "prob": "3/8"},
        {"m": 2, "prob": "3/8"},
        {"m": 3, "prob": "1/4"},
    ]
    assert data["version"] == __version__
    assert data["arguments"]["n"] == 3


def test_exact_csv(capsys):
    code, out, _ = run(capsys, "exact", "--model", "saturation", "--p", "1/2", "--n", "3",
                       "--quantity", "expected-sourcedegree", "--out", "csv")
    assert code == 0
    assert out.splitlines() == ["quantity,value", "expected-sourcedegree,11/6"]


def test_limit_bary_spectrum(capsys):
    code, out, _ = run(capsys, "limit", "--law", "bary-spectrum", "--b", "2", "--out", "json")
    assert code == 0
    assert json.loads(out)["lambda_1"] == pytest.approx(0.6180339887, abs=1e-10)


def test_limit_moments_csv(capsys):
    code, out, _ = run(capsys, "limit", "--law", "mittag-leffler", "--p", "1/2", "--r-max", "2",
                       "--out", "csv")
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "r,moment,coefficient"
    assert float(rows[3].split(",")[1]) == pytest.approx(2.0)


def test_oracle_json(capsys):
    code, out, _ = run(capsys, "oracle", "--model", "binary", "--n", "3")
    assert code == 0
    assert json.loads(out)["pmfs"]["path_count"] == {"2": "1/1"}


def test_simulate_prints_seed_and_is_deterministic(capsys, tmp_path):
    args = ["simulate", "--model", "binary", "--n", "20", "--trials", "500", "--workers", "2",
            "--stat", "sink-degree"]
    code, out1, err = run(capsys, *args)
    assert code == 0 and f"seed: {DEFAULT_SEED}" in err
    path = tmp_path / "s.json"
    assert main(args + ["--output", str(path)]) == 0
    assert json.loads(path.read_text()) == json.loads(out1)


@pytest.mark.parametrize(
    "argv",
    [
        ["exact", "--model", "bernoulli", "--quantity", "degree-pmf"],
        ["exact", "--model", "binary", "--n", "3", "--quantity", "degree-pmf"],
        ["oracle", "--model", "bernoulli", "--p", "1/2", "--n", "20"],
        ["simulate", "--model", "bernoulli", "--n", "5"],
        ["limit", "--law", "saturation-degree", "--p", "1/4"],
        ["exact", "--model", "bernoulli", "--p", "3/2", "--n", "3", "--quantity", "degree-pmf"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == "" and "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["exact", "--quantity", "nonsense"])
    assert exc.value.code == 2


def test_verify_oracle_suite_exit_0(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "oracle")
    assert code == 0
    data = json.loads(out)
    assert data["passed"] and [g["gate"] for g in data["gates"]] == [1, 2, 3]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "spnet", "limit", "--law", "bary-spectrum", "--b", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert 0.50 < json.loads(proc.stdout)["lambda_1"] < 0.55
