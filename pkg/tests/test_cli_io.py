import math
import subprocess
import sys

import numpy as np
import pytest

from multipen import cli, io


def run(*argv):
    return subprocess.run([sys.executable, "-m", "multipen", *argv], capture_output=True, text=True)


def test_parse_certify():
    args = cli.parse_args(["certify", "--matrix", "A.txt", "--beta", "inf", "--support", "0,3,7"])
    assert args.subcommand == "certify"
    assert math.isinf(args.beta)
    assert args.support == [0, 3, 7]


@pytest.mark.parametrize("argv", [
    ["solve", "--beta", "0"],
    ["solve", "--matrix", "A", "--data", "y", "--alpha", "1", "--beta", "-2"],
    ["certify", "--matrix", "A", "--beta", "1", "--support", "1,1"],
    ["mc-recovery", "--out", "x.csv", "--alpha-grid", "1,2"],
])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        cli.parse_args(argv)
    assert exc.value.code == 2


def test_alpha_grid_parse():
    args = cli.parse_args(["mc-recovery", "--out", "r.csv", "--alpha-grid", "0.0002,1.25,51"])
    assert args.alpha_grid.size == 51
    assert np.allclose(args.alpha_grid, 0.0002 * 1.25 ** np.arange(51))
    assert args.beta_grid.size == 31


def test_matrix_round_trip(tmp_path, rng):
    M = rng.normal(size=(4, 7)) * 10.0 ** rng.integers(-8, 8, size=(4, 7))
    io.write_matrix(tmp_path / "M.txt", M)
    assert np.array_equal(io.read_matrix(tmp_path / "M.txt"), M)
    assert (tmp_path / "M.txt").read_text().splitlines()[0] == "4 7"


def test_vector_round_trip(tmp_path, rng):
    x = rng.normal(size=9)
    io.write_vector(tmp_path / "x.txt", x)
    assert np.array_equal(io.read_vector(tmp_path / "x.txt"), x)


def test_bad_matrix_file(tmp_path):
    (tmp_path / "bad.txt").write_text("2 2\n1 2 3\n")
    with pytest.raises(ValueError):
        io.read_matrix(tmp_path / "bad.txt")


def test_report_header_only_and_config(tmp_path):
    io.write_report([], tmp_path / "r.csv", ["a", "b"], config="mc-conditions --m 3")
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines == ["# config: mc-conditions --m 3", "a,b"]
    assert io.read_report(tmp_path / "r.csv") == (["a", "b"], [])


def test_report_six_digits(tmp_path):
    io.write_report([[1 / 3, math.inf, 7]], tmp_path / "r.csv", ["x", "y", "z"])
    _, rows = io.read_report(tmp_path / "r.csv")
    assert rows == [["0.333333", "inf", "7"]]
    assert float(rows[0][0]) == pytest.approx(1 / 3, rel=1e-6)


def test_certify_identity(tmp_path):
    io.write_matrix(tmp_path / "A.txt", np.eye(6))
    out = run("certify", "--matrix", str(tmp_path / "A.txt"), "--beta", "inf", "--support", "0,3", "--c", "3", "--d", "1")
    assert out.returncode == 0, out.stderr
    kv = dict(line.split("=", 1) for line in out.stdout.splitlines())
    assert float(kv["cd_bound"]) == 2.0
    assert float(kv["alpha_lo"]) == 1.0 and float(kv["alpha_hi"]) == 2.0
    assert kv["satisfiable"] == "true"


def test_certify_unsatisfiable_still_succeeds(tmp_path):
    A = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    io.write_matrix(tmp_path / "A.txt", A)
    out = run("certify", "--matrix", str(tmp_path / "A.txt"), "--beta", "inf", "--support", "0,1")
    assert out.returncode == 0
    kv = dict(line.split("=", 1) for line in out.stdout.splitlines())
    assert kv["satisfiable"] == "false" and kv["cd_bound"] == "inf"


def test_certify_support_out_of_range(tmp_path):
    io.write_matrix(tmp_path / "A.txt", np.eye(3))
    out = run("certify", "--matrix", str(tmp_path / "A.txt"), "--beta", "1", "--support", "5")
    assert out.returncode == 2


def test_region_with_theta_samples(tmp_path):
    io.write_matrix(tmp_path / "A.txt", np.eye(5))
    out = run("region", "--matrix", str(tmp_path / "A.txt"), "--beta", "1", "--k", "2",
              "--theta-samples", str(tmp_path / "t.csv"), "--theta-points", "5")
    assert out.returncode == 0, out.stderr
    kv = dict(line.split("=", 1) for line in out.stdout.splitlines())
    assert float(kv["r_value"]) == pytest.approx(2.0)
    header, rows = io.read_report(tmp_path / "t.csv")
    assert header == ["theta_arg", "theta_max", "theta_min"]
    assert len(rows) == 5
    assert float(rows[0][1]) == pytest.approx(float(rows[0][2]), rel=1e-5)


def test_gen_and_solve_pipeline(tmp_path):
    d = tmp_path
    assert run("gen-matrix", "--m", "15", "--n", "30", "--seed", "4", "--out", str(d / "A.txt")).returncode == 0
    out = run("gen-signal", "--n", "30", "--k", "2", "--d", "0.01", "--seed", "4", "--matrix", str(d / "A.txt"),
              "--data-out", str(d / "y.txt"), "--u-out", str(d / "u0.txt"), "--v-out", str(d / "v0.txt"))
    assert out.returncode == 0, out.stderr
    for mode in ("reduced", "alternating"):
        out = run("solve", "--matrix", str(d / "A.txt"), "--data", str(d / "y.txt"), "--alpha", "0.05",
                  "--beta", "1", "--mode", mode, "--tol", "1e-9", "--outer", "5000", "--inner", "5",
                  "--u-out", str(d / f"u_{mode}.txt"), "--v-out", str(d / f"v_{mode}.txt"))
        assert out.returncode == 0, out.stderr
        kv = dict(line.split("=", 1) for line in out.stdout.splitlines())
        assert float(kv["optimality_residual"]) <= 1e-9
    ur, ua = io.read_vector(d / "u_reduced.txt"), io.read_vector(d / "u_alternating.txt")
    assert np.linalg.norm(ur - ua) <= 1e-6
    truth = io.read_vector(d / "u0.txt")
    assert set(np.flatnonzero(ur)) == set(np.flatnonzero(truth))


def test_solve_dimension_mismatch(tmp_path):
    io.write_matrix(tmp_path / "A.txt", np.eye(3))
    io.write_vector(tmp_path / "y.txt", np.ones(4))
    out = run("solve", "--matrix", str(tmp_path / "A.txt"), "--data", str(tmp_path / "y.txt"), "--alpha", "1", "--beta", "inf",
              "--u-out", str(tmp_path / "u"), "--v-out", str(tmp_path / "v"))
    assert out.returncode == 2


def test_missing_file_is_failure(tmp_path):
    out = run("certify", "--matrix", str(tmp_path / "nope.txt"), "--beta", "1", "--support", "0")
    assert out.returncode == 1


def _body(path):
    return [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]


@pytest.mark.parametrize("argv", [
    ["mc-conditions", "--m", "8", "--n", "12", "--k", "2", "--matrices", "3", "--betas", "inf,1"],
    ["mc-region", "--m", "8", "--n", "12", "--k", "2", "--matrices", "3", "--betas", "0.5,2"],
    ["mc-recovery", "--problems", "2", "--m", "10", "--n", "20", "--k", "2",
     "--alpha-grid", "0.01,2,5", "--beta-grid", "0.1,2,3", "--outer", "3", "--inner", "5"],
])
def test_mc_commands_are_deterministic(tmp_path, argv):
    bodies = []
    for rep in range(2):
        out = tmp_path / f"r{rep}.csv"
        res = run(*argv, "--seed", "17", "--out", str(out))
        assert res.returncode == 0, res.stderr
        text = out.read_text()
        assert text.startswith("# config: " + argv[0])
        bodies.append(_body(out))
    assert len(bodies[0]) > 1
    assert bodies[0] == bodies[1]
