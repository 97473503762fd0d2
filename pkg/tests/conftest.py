import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from principal_config.foliation import Controls, assemble_configuration  # noqa: E402
from principal_config.surface import ImplicitQuadric  # noqa: E402

ACCEPTANCE = {}


def pytest_addoption(parser):
    parser.addoption("--regen-golden", action="store_true", default=False,
                     help="rewrite golden figures instead of comparing")


@pytest.fixture(scope="session")
def regen_golden(request):
    return request.config.getoption("--regen-golden")


@pytest.fixture(scope="session")
def ellipsoid321():
    return ImplicitQuadric.ellipsoid(3, 2, 1)


@pytest.fixture(scope="session")
def config321(ellipsoid321):
    return assemble_configuration(ellipsoid321, Controls(), n_leaves=3)


@pytest.fixture(scope="session")
def acceptance():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
