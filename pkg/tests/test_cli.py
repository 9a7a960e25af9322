import json

import pytest

from gendrv.cli import EXIT_IO, EXIT_NOT_CONVERGED, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_cubic_solve(capsys):
    code, out = run(capsys, "cubic-solve", "--coeffs", "1,-6,11,-6")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["real_roots"] == pytest.approx([1.0, 2.0, 3.0])
    assert data["case"] == "NegativeDiscriminant"
    assert data["discriminant"] < 0


def test_cubic_solve_negative_leading_coefficient(capsys):
    code, out = run(capsys, "cubic-solve", "--coeffs", "-1,0,0,8")
    assert code == EXIT_OK
    assert json.loads(out)["real_roots"] == pytest.approx([2.0])


def test_cubic_solve_bad_coefficients(capsys):
    assert run(capsys, "cubic-solve", "--coeffs", "1,2,3")[0] == EXIT_USAGE
    assert run(capsys, "cubic-solve", "--coeffs", "0,0,1,2")[0] == EXIT_USAGE


def test_roots(capsys):
    code, out = run(capsys, "roots", "--function", "builtin:quartic-y", "--method", "c-nr", "--x0", "12")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["status"] == "converged"
    assert data["x_star"] == pytest.approx(10.0, abs=1e-4)
    assert "trace" not in data


def test_roots_with_trace(capsys):
    code, out = run(capsys, "roots", "--function", "x^2 - 4", "--method", "l-nr", "--x0", "4", "--trace")
    assert code == EXIT_OK
    trace = json.loads(out)["trace"]
    assert trace[1]["x"] == pytest.approx(2.5)


def test_roots_not_converged(capsys):
    code, out = run(capsys, "roots", "--function", "x^2 + 1", "--method", "q-nr", "--x0", "1")
    assert code == EXIT_NOT_CONVERGED
    assert json.loads(out)["status"] == "no-real-root"


def test_parse_error_exit_code(capsys):
    code, out = run(capsys, "roots", "--function", "sin(", "--method", "l-nr", "--x0", "1")
    assert code == EXIT_USAGE
    assert out == ""


def test_invalid_tolerance(capsys):
    code, _ = run(capsys, "roots", "--function", "x", "--method", "l-nr", "--x0", "1", "--tol", "0")
    assert code == EXIT_USAGE


def test_extrema_classification(capsys):
    code, out = run(capsys, "extrema", "--function", "builtin:quartic-y", "--method", "q-g", "--x0", "4")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["x_star"] == pytest.approx(4.87, abs=1e-2)
    assert data["classification"] == "maximum"


def test_extrema_negative_start(capsys):
    code, out = run(capsys, "extrema", "--function", "x^2", "--method", "l-g", "--x0", "-2",
                    "--step-a", "0.25")
    assert code == EXIT_OK
    assert json.loads(out)["classification"] == "minimum"


def test_function_with_leading_minus(capsys):
    code, out = run(capsys, "extrema", "--function", "-x^2 + 4", "--method", "q-g", "--x0", "-1")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["x_star"] == pytest.approx(0.0, abs=1e-9)
    assert data["classification"] == "maximum"


def test_coeffs(capsys):
    code, out = run(capsys, "coeffs", "--function", "x^4", "--x", "1", "--degree", "2")
    assert code == EXIT_OK
    assert json.loads(out)["coeffs"] == pytest.approx([3.0, -8.0, 6.0])


def test_coeffs_finite_spacing(capsys):
    code, out = run(capsys, "coeffs", "--function", "x^2", "--x", "1", "--degree", "1", "--delta", "0.5")
    assert code == EXIT_OK
    assert json.loads(out)["coeffs"] == pytest.approx([-1.5, 2.5])


@pytest.mark.parametrize("x0_range", [["--x0-range", "-2:13:31"], ["--x0-range=-2:13:31"]])
def test_sweep_writes_results(capsys, tmp_path, x0_range):
    csv_path, json_path = tmp_path / "out.csv", tmp_path / "out.json"
    code, out = run(capsys, "sweep", "--function", "builtin:quartic-y", "--methods", "l-nr,c-nr",
                    *x0_range, "--out-csv", str(csv_path), "--out-json", str(json_path))
    assert code == EXIT_OK
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "method,x0,status,x_star,y_star,iterations"
    assert len(lines) == 63
    assert json.loads(json_path.read_text())["spec_echo"]["methods"] == ["l-nr", "c-nr"]
    assert "L-NR / C-NR mean iterations" in out


def test_sweep_unwritable_output(capsys, tmp_path):
    code, _ = run(capsys, "sweep", "--function", "x^2 - 2", "--methods", "l-nr", "--x0-range", "1:2:3",
                  "--out-csv", str(tmp_path / "missing" / "out.csv"))
    assert code == EXIT_IO


@pytest.mark.parametrize("extra", [
    ["--methods", "l-nr", "--x0-range", "1:2"],
    ["--methods", "newton", "--x0-range", "1:2:3"],
    ["--methods", "l-nr", "--x0-range", "3:1:5"],
])
def test_sweep_bad_arguments(capsys, tmp_path, extra):
    code, _ = run(capsys, "sweep", "--function", "x^2 - 2", "--out-csv", str(tmp_path / "o.csv"), *extra)
    assert code == EXIT_USAGE


def test_unknown_method_is_rejected_by_argparse(capsys):
    with pytest.raises(SystemExit) as info:
        main(["roots", "--function", "x", "--method", "q-g", "--x0", "1"])
    assert info.value.code == 2
