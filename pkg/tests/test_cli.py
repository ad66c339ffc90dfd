import pytest

from scripts.ndlat import EXIT_GUARD, EXIT_INVALID, EXIT_OK, EXIT_USAGE, run


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)  # no stray .env
    for name in ("ND_TICK", "ND_HORIZON", "ND_SEED", "ND_JOBS", "ND_RUNS"):
        monkeypatch.delenv(name, raising=False)


def test_compute_short_advertising_interval(capsys):
    code = run(["compute", "--ta", "0.1", "--ts", "2.42", "--ds", "0.59"])
    assert code == EXIT_OK
    out = capsys.readouterr().out.strip()
    assert out == "mean=0.730165289 max=1.900000000 min=0.000000000 order=0"


def test_compute_with_preset(capsys):
    assert run(["compute", "--preset", "a", "--ta", "0.1"]) == EXIT_OK
    assert "max=1.900000000" in capsys.readouterr().out


def test_compute_coupled(capsys):
    assert run(["compute", "--ta", "1", "--ts", "1", "--ds", "0.25"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "mean=INF max=INF coupled=true"


def test_compute_trace(capsys):
    assert run(["compute", "--tick", "1", "--ta", "26", "--ts", "20", "--ds", "3", "--trace"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "mean=89.700000000 max=234.000000000 min=0.000000000 order=1"
    assert lines[1].split("\t")[:3] == ["0", "6", "g"]
    assert lines[2].split("\t")[:3] == ["1", "2", "s"]


def test_compute_accepts_long_decimal_interval(capsys):
    code = run(["compute", "--ta", "10.239375", "--ts", "10.24", "--ds", "0.00065"])
    assert code == EXIT_OK
    assert capsys.readouterr().out.startswith("mean=")


def test_tick_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("ND_TICK", "1e-3")
    assert run(["compute", "--ta", "26", "--ts", "20", "--ds", "3"]) == EXIT_OK
    assert "max=234.000000000" in capsys.readouterr().out


def test_misaligned_value_names_flag(capsys):
    code = run(["compute", "--ta", "0.1000005", "--ts", "2.42", "--ds", "0.59"])
    assert code == EXIT_INVALID
    assert "--ta" in capsys.readouterr().err


def test_invalid_window(capsys):
    code = run(["compute", "--ta", "0.1", "--ts", "2.42", "--ds", "0.59", "--da", "0.59"])
    assert code == EXIT_INVALID
    assert "invalid parameters" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "--ta", "0.1"],
        ["frobnicate"],
        ["compute", "--ta", "abc", "--ts", "1", "--ds", "0.5"],
        ["sweep", "--ts", "2.56", "--ds", "0.32"],
    ],
)
def test_usage_errors(argv):
    assert run(argv) == EXIT_USAGE


def test_help_exits_cleanly(capsys):
    assert run(["--help"]) == EXIT_OK
    assert "compute" in capsys.readouterr().out


def test_oversized_grid_trips_guard():
    assert run(["simulate", "--exhaustive", "--ta", "1", "--ts", "11", "--ds", "1"]) == EXIT_GUARD


def test_simulate_exhaustive(capsys, tmp_path):
    out = tmp_path / "runs.csv"
    argv = ["simulate", "--tick", "1", "--ta", "26", "--ts", "20", "--ds", "3", "--exhaustive", "--out", str(out)]
    assert run(argv) == EXIT_OK
    assert capsys.readouterr().out.strip() == "mean=89.700000000 max=234.000000000 aborted=0 runs=20"
    assert len(out.read_text().splitlines()) == 21


def test_simulate_monte_carlo(capsys):
    argv = ["simulate", "--tick", "1", "--ta", "26", "--ts", "20", "--ds", "3", "--runs", "300", "--seed", "4"]
    assert run(argv) == EXIT_OK
    out = capsys.readouterr().out
    assert "aborted=0 runs=300" in out


def test_sweep_then_compare(capsys, tmp_path):
    sweep_csv = tmp_path / "sweep.csv"
    argv = ["sweep", "--tick", "1", "--ts", "20", "--ds", "3", "--ta-range", "26:28:1", "--out", str(sweep_csv)]
    assert run(argv) == EXIT_OK
    assert sweep_csv.exists()

    argv = ["compare", "--tick", "1", "--input", str(sweep_csv), "--runs", "200", "--horizon", "100000"]
    assert run(argv) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("mean: rmse=")
    assert lines[1].startswith("max: rmse=")
    assert "points=2 excluded=1" in lines[0]


def test_compare_missing_input(tmp_path):
    argv = ["compare", "--tick", "1", "--input", str(tmp_path / "nope.csv")]
    assert run(argv) == EXIT_INVALID


def test_sweep_to_stdout(capsys):
    argv = ["sweep", "--tick", "1", "--ts", "20", "--ds", "3", "--ta-range", "26:27:1"]
    assert run(argv) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("Ta,Ts,ds,da,mean,max")
    assert len(lines) == 3


def test_explore_and_bench(capsys):
    argv = [
        "explore", "--tick", "1", "--ds", "3", "--ta-range", "26:28:1", "--ts-range", "20:21:1",
        "--objective", "max_latency",
    ]
    assert run(argv) == EXIT_OK
    assert len(capsys.readouterr().out.strip().splitlines()) == 7

    assert run(["bench", "--tick", "1", "--ts", "20", "--ds", "3", "--ta-range", "21:30:1"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("instances=10 ")


def test_unknown_objective_is_invalid():
    argv = ["sweep", "--tick", "1", "--ts", "20", "--ds", "3", "--ta-range", "26:27:1", "--objective", "speed"]
    assert run(argv) == EXIT_INVALID
