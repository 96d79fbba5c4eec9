import pytest

_results = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    n = marker.args[0]
    ok = call.excinfo is None
    prev = _results.get(n, (True, []))
    _results[n] = (prev[0] and ok, prev[1] + [(item.name, ok)])


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        ok, parts = _results[n]
        failed = [name for name, good in parts if not good]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} ({len(parts)} checks"
        line += f"; failing: {', '.join(failed)})" if failed else ")"
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240611)
