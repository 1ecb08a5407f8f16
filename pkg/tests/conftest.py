"""Shared test plumbing: the acceptance-criteria summary.

Tests named ``test_a<N>_*`` in test_acceptance.py carry the ``acceptance``
marker; their outcomes are folded into one PASS/FAIL line per criterion at
the end of the run so the verdicts read at a glance.
"""

import re
from collections import defaultdict

import pytest

CRITERIA = {
    1: "in-vector LRU equals the brute-force oracle (zero tolerance, <10 s)",
    2: "multistep M=1 equals invector operation-for-operation",
    3: "insert + 2(M-1) gets reaches vector 1 lane 0; one fewer does not",
    4: "three-step get(G) walkthrough hits the golden states",
    5: "ordering arc >= multistep > gclock > lru > invector (3/4 sizes, 0.3 pp)",
    6: "hit ratio non-decreasing in M (0.2 pp band); M=8 within 1.5 pp of arc",
    7: "vector-1 hits exceed 50% of all hits (zipfian and scan)",
    8: "garbage start lags lru early, converges within 0.5 pp by run end",
    9: "size-sweep ordering also holds at P=8 (3/4 sizes, 0.3 pp)",
    10: "8-thread stress conserves counts, audit clean, locks free",
    11: "zipfian/latest/scan conformity at p > 0.01",
    12: "plot pipeline: one series per policy, breakdown bars sum to hits",
}

_RESULTS = defaultdict(list)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    out = yield
    rep = out.get_result()
    if not item.get_closest_marker("acceptance"):
        return
    m = re.match(r"test_a(\d+)", item.name)
    if m is None:
        return
    # Count call-phase outcomes, plus setup-phase skips and errors (a broken
    # session fixture must surface as FAIL, not vanish from the table).
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _RESULTS[int(m.group(1))].append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_RESULTS):
        outcomes = _RESULTS[cid]
        if any(o == "failed" for o in outcomes):
            verdict = "FAIL"
        elif all(o == "skipped" for o in outcomes):
            verdict = "SKIP"
        else:
            verdict = "PASS"
        label = CRITERIA.get(cid, "")
        terminalreporter.write_line(f"A{cid:<3} {label:<70} {verdict}")
