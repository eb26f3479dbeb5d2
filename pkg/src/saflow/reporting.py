"""Shared check-report record and CSV writer for verification suites."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    input: str
    expected: str
    actual: str
    tolerance: str
    passed: bool


def write_report_csv(rows: list[CheckResult], path) -> None:
    with open(path, "w") as fh:
        fh.write("check_id,input,expected,actual,tolerance,pass\n")
        for r in rows:
            fh.write(
                f"{r.check_id},{r.input},{r.expected},{r.actual},"
                f"{r.tolerance},{str(r.passed).lower()}\n"
            )


def all_passed(rows: list[CheckResult]) -> bool:
    return all(r.passed for r in rows)
