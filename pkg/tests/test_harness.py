from __future__ import annotations

import json

import pytest

from ddl_kant.harness import (
    ERROR, EXPECTED, FAIL, PASS, TEST_IDS, TestReport, render_table, run_suite,
)
from ddl_kant.search import Bounds


@pytest.fixture(scope="module")
def report() -> TestReport:
    return run_suite(Bounds(3, 2))


def test_grid_shape(report):
    assert list(report.matrix) == list(TEST_IDS)
    for row in report.matrix.values():
        assert set(row) == {"naive", "kroy", "custom"}
        assert set(row.values()) <= {PASS, FAIL, ERROR}


def test_naive_and_kroy_columns(report):
    for t in TEST_IDS:
        assert report.matrix[t]["naive"] == EXPECTED[t]["naive"], t
        assert report.matrix[t]["kroy"] == EXPECTED[t]["kroy"], t


def test_differences_are_explained(report):
    for t, s, expected, got in report.differences():
        assert expected != got
        assert report.cells[t][s].reason


def test_text_table(report):
    text = render_table(report, "text", timing=False)
    lines = text.splitlines()
    assert lines[0].split()[-3:] == ["Naive", "Kroy", "Custom"]
    assert any(line.startswith("passes") for line in lines)
    assert "bounds: w=3, s=2" in text and "runtime" not in text


def test_markdown_table(report):
    md = render_table(report, "markdown").splitlines()
    assert md[0] == "| Test | Naive | Kroy | Custom |"
    assert len(md) == 2 + len(TEST_IDS) + 1


def test_json_round_trip(report):
    d = json.loads(render_table(report, "json", timing=False))
    assert d["runtime_ms"] == 0
    back = TestReport.from_dict(d)
    assert back.matrix == report.matrix
    assert back.to_dict(timing=False) == report.to_dict(timing=False)


def test_single_subject_warns():
    r = run_suite(Bounds(2, 1))
    assert any("T2" in w for w in r.warnings)
    assert r.matrix["T2"]["kroy"] == PASS


def test_custom_column_is_stable_across_bounds():
    """Custom models all have one world, so growing the world bound past two
    adds no countermodels."""
    a, b = run_suite(Bounds(2, 2)), run_suite(Bounds(3, 2))
    assert a.matrix == b.matrix
