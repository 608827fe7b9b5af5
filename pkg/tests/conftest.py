import pytest

_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        detail = dict(item.user_properties).get("detail", "")
        status = "PASS" if rep.passed else "FAIL"
        _results[number] = (status, title, rep.duration, detail)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_results):
        status, title, duration, detail = _results[number]
        extra = f"; {detail}" if detail else ""
        tr.write_line(f"criterion {number:>2}: {status}  {title} ({duration:.2f} s{extra})")
