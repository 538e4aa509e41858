"""Runs every acceptance criterion at its stated tolerance.

Each criterion prints one PASS/FAIL line (visible with ``pytest -s`` and in
the terminal summary).
"""

import pytest

from curvechar.acceptance import SUITES, TOTAL_BUDGET_S, run_suite

_results = {}


@pytest.mark.parametrize("name", list(SUITES), ids=[f"{SUITES[n][0]:02d}-{n}" for n in SUITES])
def test_criterion(name):
    res = run_suite(name)
    _results[name] = res
    print(res.line())
    assert res.ok, res.to_json()


def test_total_runtime_budget():
    missing = [n for n in SUITES if n not in _results]
    for n in missing:
        _results[n] = run_suite(n)
    total = sum(r.elapsed for r in _results.values())
    print(f"[{'PASS' if total < TOTAL_BUDGET_S else 'FAIL'}] acceptance total runtime {total:.1f}s (budget {TOTAL_BUDGET_S}s)")
    assert total < TOTAL_BUDGET_S


def pytest_terminal_summary_lines():
    lines = [r.line() for r in sorted(_results.values(), key=lambda r: r.criterion)]
    total = sum(r.elapsed for r in _results.values())
    lines.append(f"total acceptance runtime {total:.1f}s (budget {TOTAL_BUDGET_S}s)")
    return lines
