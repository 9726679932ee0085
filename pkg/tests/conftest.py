import shlex
import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
EXTERNAL = f"dimacs-pipe:{shlex.quote(sys.executable)} {shlex.quote(str(TESTS / 'pysat_dimacs.py'))}"


@pytest.fixture(scope="session")
def external_solver():
  """Solver name for the pysat-backed DIMACS pipe."""
  return EXTERNAL


def pytest_configure(config):
  config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
  config._criteria = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
  outcome = yield
  rep = outcome.get_result()
  mark = item.get_closest_marker("criterion")
  if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
    return
  detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
  item.config._criteria.append((mark.args[0], mark.args[1], rep.passed, detail))


def pytest_terminal_summary(terminalreporter, config):
  if not config._criteria:
    return
  terminalreporter.section("acceptance criteria")
  for number, title, ok, detail in sorted(config._criteria):
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}"
    terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
