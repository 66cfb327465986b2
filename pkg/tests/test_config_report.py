import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dtlab.config import CACHE_ENV, RunConfig, parse_grid, parse_real, resolve_cache_dir
from dtlab.errors import ConfigError
from dtlab.report import read_csv, render_csv, render_json, write_report


def test_parse_real_pi_forms():
    assert parse_real("pi") == math.pi
    assert parse_real("π") == math.pi
    assert parse_real("pi/4") == pytest.approx(math.pi / 4)
    assert parse_real("3pi/4") == pytest.approx(3 * math.pi / 4)
    assert parse_real("3*pi/4") == pytest.approx(3 * math.pi / 4)
    assert parse_real("0.5pi") == pytest.approx(math.pi / 2)
    assert parse_real("3.14159265358979") == 3.14159265358979
    assert parse_real("1e5") == 100_000.0
    assert parse_real(2) == 2.0
    with pytest.raises(ConfigError):
        parse_real("tau")


def test_parse_grid():
    assert parse_grid("1e3:10:3") == [1000.0, 10_000.0, 100_000.0]
    assert parse_grid("500:4:4") == [500.0, 2000.0, 8000.0, 32_000.0]
    assert parse_grid("10,20,40") == [10.0, 20.0, 40.0]
    for bad in ("1e3:10", "1e3:1:3", "0:2:3", "1:2:x", "5,3", ""):
        with pytest.raises(ConfigError):
            parse_grid(bad)


@given(st.integers(1, 10**4), st.integers(2, 10), st.integers(1, 8))
def test_geometric_grid_increasing(start, factor, count):
    grid = parse_grid(f"{start}:{factor}:{count}")
    assert len(grid) == count
    assert all(b > a for a, b in zip(grid, grid[1:]))
    assert grid == [float(start * factor**i) for i in range(count)]


def test_run_config_validation():
    RunConfig("moments", lo=0, hi=math.pi, grid=[1, 2])
    with pytest.raises(ConfigError):
        RunConfig("moments", lo=2, hi=1)
    with pytest.raises(ConfigError):
        RunConfig("moments", grid=[3, 2])
    with pytest.raises(ConfigError):
        RunConfig("moments", r=-1)
    with pytest.raises(ConfigError):
        RunConfig("moments", threads=0)


def test_cache_dir_resolution(monkeypatch, tmp_path):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    assert resolve_cache_dir(None) == tmp_path
    assert resolve_cache_dir("elsewhere").name == "elsewhere"
    monkeypatch.delenv(CACHE_ENV)
    assert resolve_cache_dir(None).name == ".dtlab_cache"


ROWS = [(1000.0, 168, 0.1 + 0.2, None), (10_000.0, 1229, Fraction(7, 3), True), (3.0, 2**70, -1e-300, False)]
COLS = ["x", "count", "value", "flag"]


def test_csv_layout_and_float_repr():
    text = render_csv("demo", COLS, ROWS)
    lines = text.splitlines()
    assert lines[0] == "# dtlab demo v1"
    assert lines[1] == "x,count,value,flag"
    assert lines[2] == "1000.0,168,0.30000000000000004,"
    assert lines[3] == "10000.0,1229,7/3,1"
    assert lines[4] == f"3.0,{2**70},-1e-300,0"


def test_csv_json_round_trip(tmp_path):
    written = write_report(tmp_path / "sub" / "out.csv", "demo", {"r": 2, "big": 2**80}, COLS, ROWS)
    assert [p.name for p in written] == ["out.csv", "out.json"]
    schema, columns, rows = read_csv(written[0])
    doc = json.loads(written[1].read_text())
    assert schema == doc["schema"] == "demo"
    assert columns == doc["columns"] == COLS
    assert doc["params"] == {"r": 2, "big": str(2**80)}
    # every CSV cell is recoverable from the JSON value
    for csv_row, json_row in zip(rows, doc["rows"]):
        for cell, value in zip(csv_row, json_row):
            if value is None:
                assert cell == ""
            elif isinstance(value, bool):
                assert cell == ("1" if value else "0")
            elif isinstance(value, float):
                assert float(cell) == value
            else:
                assert cell == str(value)


def test_render_is_deterministic():
    assert render_csv("demo", COLS, ROWS) == render_csv("demo", COLS, list(ROWS))
    assert render_json("demo", {}, COLS, ROWS) == render_json("demo", {}, COLS, ROWS)


def test_read_csv_rejects_missing_header(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_csv(p)
