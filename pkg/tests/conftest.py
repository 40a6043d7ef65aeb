import pytest

CRITERIA = {
    1: "variety point counts for endo (1,1,1) over F2 and F3",
    2: "curvature ideal agrees with curvature on points",
    3: "twisted d^2 = 0 and MC categories pass validation",
    4: "Bianchi identity on non-MC elements",
    5: "square-zero lifting always succeeds",
    6: "Dold-Kan ranks, simplicial identities, roundtrip",
    7: "simplicial composition: level 0, associativity, unitality",
    8: "Segal maps bijective, fault injection detected",
    9: "Buchsbaum-Eisenbud ideal equals curvature ideal",
    10: "CLI golden outputs byte-stable",
}

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        prev = _results.get(n, True)
        _results[n] = prev and rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n not in _results:
            status = "NOT RUN"
        else:
            status = "PASS" if _results[n] else "FAIL"
        tr.write_line(f"criterion {n:2d}: {status:7s} {CRITERIA[n]}")
