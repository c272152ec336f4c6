"""Shared acceptance bookkeeping.

test_acceptance.py records one verdict per numbered criterion; the terminal
summary prints them as a compact scoreboard after the run.  Criterion 8
(invariant property suites) is scored from the test_invariants.py outcomes
instead of a dedicated test.
"""

ACCEPTANCE = {}
_INVARIANT_RESULTS = []

_LABELS = {
    1: "exact DP equivalence vs exhaustive search",
    2: "pruned == unpruned on long series",
    3: "PELT matches optimal partitioning",
    4: "short-segment sensitivity/precision",
    5: "p-value multiple-testing error rates",
    6: "alternating beats stateless on epidemic data",
    7: "profile search consistency",
    8: "invariant property suites",
    9: "qualitative wall-time bound at n=10000",
}


def record_acceptance(num, ok, detail=""):
    ACCEPTANCE[num] = (bool(ok), detail)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_invariants" in report.nodeid:
        _INVARIANT_RESULTS.append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if _INVARIANT_RESULTS:
        n_pass = sum(_INVARIANT_RESULTS)
        record_acceptance(8, all(_INVARIANT_RESULTS),
                          f"{n_pass}/{len(_INVARIANT_RESULTS)} invariant tests passed")
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_LABELS):
        label = _LABELS[num]
        if num not in ACCEPTANCE:
            terminalreporter.write_line(f"ACCEPTANCE {num}: NOT RUN - {label}")
            continue
        ok, detail = ACCEPTANCE[num]
        verdict = "PASS" if ok else "FAIL"
        tail = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"ACCEPTANCE {num}: {verdict} - {label}{tail}")
