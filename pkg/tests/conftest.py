import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import builders  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if builders.ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in builders.ACCEPTANCE:
            terminalreporter.write_line(line)
