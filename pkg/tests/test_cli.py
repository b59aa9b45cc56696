import json
import subprocess
import sys

import pytest

from macbinom.cli import main
from macbinom.exact import gen, substitute
from macbinom.macdonald import H_norm, interp_P_star
from macbinom.partitions import Partition, enumerate_partitions, format_partition
from macbinom.serialization import field_from_json, field_to_json, poly_from_json, poly_to_json

q, t = gen("q"), gen("t")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


# --- compute ----------------------------------------------------------------


def test_compute_binom(capsys):
    assert run_json(capsys, "compute", "binom", "--lambda", "2", "--mu", "1", "--n", "1") == {"value": "q + 1"}
    assert run_json(capsys, "compute", "binom", "--lambda", "2,1", "--mu", "1") == {"value": "q + 1 + t^-1"}


def test_compute_hnorm_and_omega(capsys):
    assert run_json(capsys, "compute", "hnorm", "--mu", "") == {"value": "1"}
    assert run_json(capsys, "compute", "omega", "--nu", "1", "--lambda", "2") == {"value": "q + 1"}
    assert run_json(capsys, "compute", "omega", "--nu", "2", "--lambda", "3", "--regime", "jack") == {"value": "3"}


def test_compute_trinom(capsys):
    doc = run_json(capsys, "compute", "trinom", "--beta", "2,2", "--lambda", "1", "--nu", "")
    assert doc == run_json(capsys, "compute", "binom", "--lambda", "2,2", "--mu", "1")


def test_compute_eigentable(capsys):
    doc = run_json(capsys, "compute", "eigentable", "--n", "2", "--max-size", "1", "--k", "1")
    assert doc == {"table": {"": "0", "1": "-1 + q^-1"}}


@pytest.mark.parametrize("mu", [p for p in enumerate_partitions(3, 2)])
def test_pstar_round_trip_reproduces_H(capsys, mu):
    doc = run_json(capsys, "compute", "pstar", "--mu", format_partition(mu), "--n", "2")
    poly = poly_from_json(doc)
    point = {f"x{i}": q ** m for i, m in enumerate(mu.padded(2), start=1)}
    assert substitute(poly.expr, point) == H_norm(mu)


def test_compute_macdonald(capsys):
    doc = run_json(capsys, "compute", "macdonald", "--mu", "1,1", "--n", "2")
    assert doc == {"vars": ["x1", "x2"], "terms": [{"monomial": {"x1": 1, "x2": 1}, "coeff": {"num": "1", "den": "1"}}]}


def test_specialization(capsys):
    assert run_json(capsys, "compute", "binom", "--lambda", "2,1", "--mu", "1", "--at", "q=2", "--at", "t=1/3") == {"value": "6"}


def test_output_file(capsys, tmp_path):
    target = tmp_path / "h.json"
    code, out, _ = run(capsys, "compute", "hnorm", "--mu", "1", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text()) == {"value": "q - 1"}


# --- exit codes ---------------------------------------------------------------


@pytest.mark.parametrize("argv", [
    ["compute", "binom", "--lambda", "1,2", "--mu", "1"],
    ["compute", "binom", "--lambda", "x", "--mu", "1"],
    ["compute", "binom", "--mu", "1"],
    ["compute", "pstar", "--mu", "1,1,1", "--n", "2"],
    ["interpolate", "--expr", "x1 +* 2"],
])
def test_parse_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_pole_exit_3(capsys):
    code, _, err = run(capsys, "compute", "binom", "--lambda", "2,1", "--mu", "1", "--at", "t=0")
    assert code == 3
    assert "pole" in err


def test_contract_exit_4(capsys):
    code, _, err = run(capsys, "interpolate", "--expr", "x1 + x2", "--n", "2")
    assert code == 4
    code, _, _ = run(capsys, "interpolate", "--expr", "x1 + x2/t", "--n", "2", "--regime", "jack")
    assert code == 4


def test_verify_failure_exit_1(capsys, monkeypatch):
    import macbinom.binomial as bn

    real = bn._bar
    monkeypatch.setattr(bn, "_bar", lambda lam, mu: real(lam, mu) * 2 if mu else real(lam, mu))
    code, out, err = run(capsys, "verify", "binomial", "--max-size", "1", "--n", "1")
    assert code == 1
    doc = json.loads(out)
    assert doc["failed"] > 0 and not doc["ok"]
    assert "FAIL binomial/binomial_theorem" in err
    assert "residual" in json.dumps(doc)


# --- interpolate --------------------------------------------------------------


@pytest.mark.parametrize("expr, expected", [
    ("x1", {"": "1", "1": "1"}),
    ("1", {"": "1"}),
    ("x1^2", {"": "1", "1": "q + 1", "2": "1"}),
])
@pytest.mark.parametrize("algorithm", ["direct", "explicit", "fast"])
def test_interpolate_examples(capsys, expr, expected, algorithm):
    assert run_json(capsys, "interpolate", "--expr", expr, "--n", "1", "--algorithm", algorithm) == expected


def test_interpolate_file_inputs(capsys, tmp_path):
    text = tmp_path / "f.txt"
    text.write_text("x1^2 + x2^2 * t^-2\n")
    outputs = {run(capsys, "interpolate", "--input", str(text), "--algorithm", alg)[1]
               for alg in ("direct", "explicit", "fast")}
    assert len(outputs) == 1
    doc = tmp_path / "p.json"
    doc.write_text(json.dumps(poly_to_json(interp_P_star(Partition([2, 1]), 2))))
    assert run_json(capsys, "interpolate", "--input", str(doc)) == {"2,1": "1"}


def test_interpolate_jack(capsys):
    assert run_json(capsys, "interpolate", "--expr", "x1^2", "--regime", "jack", "--algorithm", "fast") == {"1": "1", "2": "2"}
    doc = run_json(capsys, "interpolate", "--expr", "x1 + x2 - 3*theta", "--regime", "jack")
    assert doc == {"": "-3*theta", "1": "1"}


def test_missing_input(capsys, tmp_path):
    code, _, _ = run(capsys, "interpolate", "--input", str(tmp_path / "absent.txt"))
    assert code == 2


# --- verify and determinism -------------------------------------------------------


def test_verify_examples(capsys):
    doc = run_json(capsys, "verify", "binomial", "--max-size", "3", "--n", "2")
    assert doc["ok"] and doc["failed"] == 0
    doc = run_json(capsys, "verify", "duality", "--max-size", "0")
    assert doc["passed"] == 1
    assert doc["suites"]["duality"]["cases"][0]["case"] == {"lambda": "", "mu": ""}


def test_sampled_report_is_byte_identical(capsys):
    argv = ["verify", "eigen", "--n", "2", "--mode", "sampled", "--seed", "7", "--samples", "2"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == second[0] == 0
    assert first[1] == second[1]
    assert json.loads(first[1])["seed"] == 7


def test_console_script_subprocess():
    cmd = [sys.executable, "-m", "macbinom.cli", "compute", "hnorm", "--mu", "1,1"]
    outs = [subprocess.run(cmd, capture_output=True, text=True, check=True).stdout for _ in range(2)]
    assert outs[0] == outs[1]
    assert field_from_json({"num": json.loads(outs[0])["value"], "den": "1"}) == H_norm(Partition([1, 1]))


def test_field_json_round_trip():
    f = (q ** 2 - t) / (1 - q * t ** 3)
    assert field_from_json(field_to_json(f)) == f
