import pytest

_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record a named acceptance criterion; its pass/fail line is printed at the end."""
    entry = {"name": None, "detail": "", "nodeid": request.node.nodeid}
    _ACCEPTANCE.append(entry)

    def record(name, detail=""):
        entry["name"] = name
        entry["detail"] = detail

    yield record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        for entry in _ACCEPTANCE:
            if entry["nodeid"] == item.nodeid:
                entry["passed"] = rep.passed


def pytest_terminal_summary(terminalreporter):
    done = [e for e in _ACCEPTANCE if e.get("name")]
    if not done:
        return
    terminalreporter.section("acceptance criteria")
    for e in done:
        status = "PASS" if e.get("passed") else "FAIL"
        terminalreporter.write_line(f"[{status}] {e['name']}  {e['detail']}")
