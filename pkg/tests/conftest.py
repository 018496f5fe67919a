import time
from pathlib import Path

import pytest

from specimen.compose import parse_tree
from specimen.lexicon import load_demo

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
SUITE_BUDGET_S = 60.0

_results: dict[tuple[int, str], bool] = {}
_started = time.perf_counter()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (report.when == "call" or report.failed):
        return
    key = tuple(marker.args)
    _results[key] = _results.get(key, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    elapsed = time.perf_counter() - _started
    terminalreporter.write_sep("=", "acceptance criteria")
    for (number, title), ok in sorted(_results.items()):
        if number == 6:
            ok = ok and elapsed < SUITE_BUDGET_S
            title = f"{title} [suite {elapsed:.1f} s]"
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number}. {title}")


@pytest.fixture(scope="session")
def lex():
    return load_demo()


@pytest.fixture(scope="session")
def trees():
    return {p.stem: parse_tree(p.read_text(encoding="utf-8")) for p in sorted((CORPUS / "trees").glob("*.sexp"))}
