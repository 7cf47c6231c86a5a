from collections import defaultdict

import pytest

_criteria: dict[str, dict] = defaultdict(lambda: {"title": "", "parts": []})


def pytest_addoption(parser):
    parser.addoption(
        "--run-long", action="store_true", default=False, help="run opt-in long tests"
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-long"):
        return
    skip = pytest.mark.skip(reason="opt-in long test, use --run-long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.skipped):
        entry = _criteria[str(mark.args[0])]
        entry["title"] = mark.args[1]
        entry["parts"].append((item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_criteria, key=int):
        entry = _criteria[num]
        outcomes = [o for _, o in entry["parts"]]
        ran = [o for o in outcomes if o != "skipped"]
        status = "FAIL" if "failed" in ran else ("PASS" if ran else "SKIP")
        skipped = [name for name, o in entry["parts"] if o == "skipped"]
        note = f"  (opt-in, not run: {', '.join(skipped)})" if skipped else ""
        tr.write_line(f"criterion {num:>2} {status}  {entry['title']}{note}")
