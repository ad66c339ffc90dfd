import pandas as pd
import pytest

from app.models.analysis import Range
from app.services.sweep_service import sweep_ta
from scripts.result_writer import SWEEP_COLUMNS, load_sweep, save_runs, save_sweep


def test_sweep_csv_text():
    rows = sweep_ta(20, 3, 0, Range(26, 28, 2), tick=1.0)
    lines = save_sweep(rows).splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert lines[1] == "26.000000000,20.000000000,3.000000000,0.000000000,89.700000000,234.000000000,1,0.000000000,89.700000000"
    assert lines[2].split(",")[4:6] == ["INF", "INF"]


def test_sweep_csv_reads_back(tmp_path):
    rows = sweep_ta(20, 3, 0, Range(21, 40, 1), tick=1.0)
    path = tmp_path / "nested" / "sweep.csv"
    assert save_sweep(rows, path) == str(path)
    assert load_sweep(path, 1.0) == rows


def test_sweep_csv_reads_back_long_intervals(tmp_path):
    rows = sweep_ta(10_240_000, 650, 0, Range(10_238_750, 10_240_000, 625), tick=1e-6)
    path = tmp_path / "ble.csv"
    save_sweep(rows, path)
    loaded = load_sweep(path, 1e-6)
    assert [r.ta for r in loaded] == [10_238_750, 10_239_375, 10_240_000]
    assert [r.ta for r in loaded] == [r.ta for r in rows]
    assert [r.max_ticks for r in loaded] == [r.max_ticks for r in rows]


def test_load_sweep_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_sweep(tmp_path / "absent.csv", 1.0)


def test_load_sweep_missing_columns(tmp_path):
    path = tmp_path / "bad.csv"
    pd.DataFrame({"Ta": ["1.0"], "Ts": ["2.0"]}).to_csv(path, index=False)
    with pytest.raises(ValueError, match="missing columns"):
        load_sweep(path, 1.0)


def test_runs_csv(tmp_path):
    path = tmp_path / "runs.csv"
    save_runs([0, 7], [104, -1], path)
    df = pd.read_csv(path, dtype=str, keep_default_na=False)
    assert list(df.columns) == ["offset_ticks", "latency_ticks", "aborted"]
    assert df["offset_ticks"].tolist() == ["0.5", "7.5"]
    assert df["latency_ticks"].tolist() == ["104", ""]
    assert df["aborted"].tolist() == ["0", "1"]
