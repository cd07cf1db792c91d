import os

import pytest

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_addoption(parser):
    parser.addoption("--full", action="store_true", default=False,
                     help="run the long benchmark variants (also SLDG_FULL=1)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--full") or os.environ.get("SLDG_FULL") == "1":
        return
    skip = pytest.mark.skip(reason="long run; use --full or SLDG_FULL=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
