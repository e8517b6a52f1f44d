import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from eulerian_dmod import _kernels  # noqa: E402

BACKENDS = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    prev = _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(prev)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
