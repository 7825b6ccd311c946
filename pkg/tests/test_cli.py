import csv
import io
import json
import logging
import os

import numpy as np
import pytest

from app.cli import cli
from app.deps import get_settings
from app.logging_utils import logger


def rows_of(output: str):
    reader = csv.reader(io.StringIO(output))
    header = next(reader)
    return header, [[float(x) for x in r] for r in reader]


def invoke(runner, *args):
    return runner.invoke(cli, list(args))


def test_vacuum_state(runner):
    result = invoke(runner, "state", "--xi", "0")
    assert result.exit_code == 0, result.output
    header, rows = rows_of(result.output)
    assert header == ["n", "re", "im", "p"]
    assert len(rows) == 1
    n, re, im, p = rows[0]
    assert (n, re, p) == (0, 1, 1)
    assert im == 0


def test_fan_state_lives_on_lattice(runner):
    result = invoke(runner, "state", "--kind", "fan", "--k", "2", "--xi", "0.8")
    assert result.exit_code == 0, result.output
    _, rows = rows_of(result.output)
    assert rows[-1][3] > 0.0
    for n, re, im, p in rows:
        if int(n) % 4:
            assert p == 0.0
    assert sum(r[3] for r in rows) == pytest.approx(1.0, abs=1e-12)


def test_coherent_state_is_poisson(runner):
    result = invoke(runner, "state", "--kind", "kncs", "--k", "1", "--xi", "1.2")
    assert result.exit_code == 0, result.output
    _, rows = rows_of(result.output)
    from scipy.stats import poisson

    for n, _, _, p in rows[:15]:
        assert p == pytest.approx(poisson.pmf(int(n), 1.44), abs=1e-12)


def test_squeeze_second_order_is_flat(runner):
    result = invoke(runner, "squeeze", "--k", "2", "--n", "2", "--xi", "0.7", "--grid", "32")
    assert result.exit_code == 0, result.output
    header, rows = rows_of(result.output)
    assert header == ["xi", "phi", "s_numeric", "s_analytic"]
    s = np.array([r[2] for r in rows])
    assert np.ptp(s) < 1e-12
    assert np.allclose(s, [r[3] for r in rows], atol=1e-12)


def test_squeeze_coherent_is_zero(runner):
    result = invoke(runner, "squeeze", "--kind", "coherent", "--k", "1", "--n", "4",
                    "--xi", "0.9", "--grid", "16")
    assert result.exit_code == 0, result.output
    _, rows = rows_of(result.output)
    assert max(abs(r[2]) for r in rows) < 1e-10


def test_squeeze_eighth_order_direction(runner):
    result = invoke(runner, "squeeze", "--k", "4", "--n", "8", "--xi", "0.754939", "--grid", "64")
    assert result.exit_code == 0, result.output
    header, rows = rows_of(result.output)
    assert header == ["xi", "phi", "s_numeric", "s_analytic"]
    phi = np.array([r[1] for r in rows])
    s = np.array([r[2] for r in rows])
    best = phi[np.argmin(s)]
    assert best % (np.pi / 4) == pytest.approx(np.pi / 8, abs=1e-9)
    assert np.allclose(s, [r[3] for r in rows], atol=1e-9)


def test_squeeze_multiple_xi(runner):
    result = invoke(runner, "squeeze", "--k", "2", "--n", "4", "--xi", "0.5", "--xi", "0.7",
                    "--grid", "8")
    assert result.exit_code == 0, result.output
    _, rows = rows_of(result.output)
    assert len(rows) == 16
    assert {r[0] for r in rows} == {0.5, 0.7}


def test_report(runner):
    result = invoke(runner, "report", "--k", "2", "--n", "4")
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data["schema_version"] == "1"
    assert data["xi_c"] == pytest.approx(0.796541, abs=1e-5)
    assert data["xi_m"] == pytest.approx(0.669272, abs=1e-5)
    assert len(data["directions_sq"]) == 4


def test_report_in_degrees(runner):
    result = invoke(runner, "report", "--k", "2", "--n", "4", "--degrees")
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data["directions_sq"] == pytest.approx([45, 135, 225, 315], abs=0.5)
    assert data["conjugate_pair"] == pytest.approx([45, 90])


def test_report_without_squeezing_exits_4(runner):
    result = invoke(runner, "report", "--k", "2", "--n", "2")
    assert result.exit_code == 4
    assert "no squeezing for N < 2K" in result.output


def test_area(runner):
    result = invoke(runner, "area", "--k", "2", "--n", "6", "--xi", "0.659657")
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data["circle_area"] == pytest.approx(np.pi * (15 / 8) ** 2)
    assert data["area_analytic"] > data["circle_area"]
    assert data["area_numeric"] == pytest.approx(data["area_analytic"], rel=1e-6)


def test_geometry_xiq(runner):
    result = invoke(runner, "geometry", "--mode", "xiq", "--k", "8", "--xi", "1")
    assert result.exit_code == 0, result.output
    header, rows = rows_of(result.output)
    assert header == ["index", "re", "im", "arg"]
    assert len(rows) == 8
    assert all(abs(np.hypot(r[1], r[2]) - 1.0) < 1e-12 for r in rows)


def test_geometry_degrees(runner):
    result = invoke(runner, "geometry", "--mode", "chi", "--k", "4", "--xi", "1", "--degrees")
    assert result.exit_code == 0, result.output
    _, rows = rows_of(result.output)
    assert [r[3] for r in rows] == pytest.approx([0, 90, 180, 270], abs=1e-9)


def test_flower(runner):
    result = invoke(runner, "flower", "--k", "2", "--n", "6", "--xi", "0.659657", "--grid", "512")
    assert result.exit_code == 0, result.output
    header, rows = rows_of(result.output)
    assert header == ["phi", "s"]
    assert max(r[1] for r in rows) == pytest.approx(1.07, abs=0.01)


def test_surface_rows(runner):
    result = invoke(runner, "surface", "--k", "2", "--n", "4", "--xi", "0.3", "--xi", "0.6",
                    "--grid", "8")
    assert result.exit_code == 0, result.output
    header, rows = rows_of(result.output)
    assert header == ["xi", "phi", "s"]
    assert len(rows) == 16


def test_contour(runner):
    result = invoke(runner, "contour", "--k", "2", "--n", "4", "--xi", "0.669272", "--grid", "64")
    assert result.exit_code == 0, result.output
    _, rows = rows_of(result.output)
    moments = np.array([r[1] for r in rows])
    assert rows[0][2] == pytest.approx(0.75)
    assert moments.min() < 0.75 < moments.max()


def test_orders(runner):
    result = invoke(runner, "orders", "--k", "2", "--n", "8", "--xi", "1.5", "--grid", "30")
    assert result.exit_code == 0, result.output
    _, rows = rows_of(result.output)
    assert [(int(n), bool(s)) for n, s in rows] == [(2, False), (4, True), (6, True), (8, True)]


def test_json_table(runner):
    result = invoke(runner, "geometry", "--k", "2", "--xi", "1", "--format", "json")
    assert result.exit_code == 0, result.output
    data = json.loads(result.output)
    assert data["schema_version"] == "1"
    assert data["command"] == "geometry"
    assert len(data["rows"]) == 2


def test_output_is_deterministic(runner):
    args = ("squeeze", "--k", "2", "--n", "6", "--xi", "0.7", "--grid", "16")
    first, second = invoke(runner, *args), invoke(runner, *args)
    assert first.exit_code == 0
    assert first.output == second.output
    assert "\r" not in first.output


def test_out_writes_file(runner, tmp_path):
    target = tmp_path / "sub" / "state.csv"
    result = invoke(runner, "state", "--xi", "0.4", "--out", str(target))
    assert result.exit_code == 0, result.output
    assert target.read_text(encoding="utf-8").startswith("n,re,im,p\n")


@pytest.mark.parametrize("args", [
    ("squeeze", "--n", "3"),
    ("state", "--f", "nope"),
    ("state", "--kind", "fan", "--k", "3"),
    ("state", "--xi", "-1"),
    ("flower", "--k", "4", "--n", "8", "--grid", "64"),
])
def test_validation_exits_2(runner, args):
    result = invoke(runner, *args)
    assert result.exit_code == 2


def test_cutoff_too_small_exits_3(runner):
    result = invoke(runner, "state", "--kind", "kncs", "--k", "1", "--xi", "3", "--cutoff", "5")
    assert result.exit_code == 3


@pytest.fixture
def clean_logging(monkeypatch, tmp_path):
    env = {k: v for k, v in os.environ.items() if k != "FANSQ_LOG_LEVEL"}
    monkeypatch.setattr(os, "environ", env)
    monkeypatch.chdir(tmp_path)
    level = logger.level
    yield tmp_path
    logger.setLevel(level)
    get_settings.cache_clear()


def test_log_level_from_dotenv(runner, clean_logging):
    (clean_logging / ".env").write_text("FANSQ_LOG_LEVEL=DEBUG\n", encoding="utf-8")
    result = invoke(runner, "geometry", "--k", "2", "--xi", "1")
    assert result.exit_code == 0, result.output
    assert get_settings().log_level == "DEBUG"
    assert logger.level == logging.DEBUG


def test_log_level_flag_beats_dotenv(runner, clean_logging):
    (clean_logging / ".env").write_text("FANSQ_LOG_LEVEL=DEBUG\n", encoding="utf-8")
    result = invoke(runner, "--log-level", "error", "geometry", "--k", "2", "--xi", "1")
    assert result.exit_code == 0, result.output
    assert logger.level == logging.ERROR
