import pytest

# criterion number -> (title, outcome, seconds)
_CRITERIA = {}
_TITLES = {
    1: "disc-11 genus: 2 classes, #Aut {8, 12}, mass 5/24 certified",
    2: "2-neighbors of disc11a classify as (L2, L1, L2); all 2-neighbors of L2 are L1",
    3: "[T_2], [T_3], [T_5] on the disc-11 class set",
    4: "eigenvalues on (2,-3) = eta coefficients = curve counts, p <= 50",
    5: "commutation, self-adjointness, row sums, Ramanujan bound for p, q in {2,3,5,7}",
    6: "E8: one class, #Aut = 696729600 = 1/mass",
    7: "rank 16: two classes, root determinants 1 and 4, T_2 diagonal 20025",
    8: "47-neighbor of D24+ is even unimodular of rank 24 without roots",
    9: "property suites pass standalone",
}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    prev = _CRITERIA.get(marker)
    ok = report.passed
    if prev is not None:
        ok = ok and prev[0]
    _CRITERIA[marker] = (ok, report.duration + (prev[1] if prev else 0.0))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = m.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, secs = _CRITERIA[n]
        tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({secs:.1f} s)  {_TITLES.get(n, '')}")
