import pytest

from saflow.reporting import all_passed, write_report_csv
from saflow.verify import run_suite


@pytest.mark.parametrize("name", ["calculus", "expectations", "landscape", "appendix"])
def test_suites_pass_quick(name):
    rows = run_suite(name, quick=True)
    failed = [r for r in rows if not r.passed]
    assert not failed, [f"{r.check_id}: expected {r.expected}, got {r.actual}" for r in failed]


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("topology")


def test_report_csv_format(tmp_path):
    rows = run_suite("appendix", quick=True)
    path = tmp_path / "report.csv"
    write_report_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "check_id,input,expected,actual,tolerance,pass"
    assert len(lines) == len(rows) + 1
    assert all(line.endswith(("true", "false")) for line in lines[1:])
    assert all_passed(rows)
