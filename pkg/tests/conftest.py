import numpy as np
import pytest

from signpipe.lexicon import default_lexicon
from signpipe.motion import _backend


@pytest.fixture(scope="session")
def lex():
    return default_lexicon()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(params=sorted(_backend.available()))
def backend(request, monkeypatch):
    """Run a spline test once per available kernel implementation."""
    monkeypatch.setattr(_backend, "kernels", _backend.available()[request.param])
    return request.param


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
