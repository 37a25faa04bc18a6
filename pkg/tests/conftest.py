import numpy as np
import pytest
from hypothesis import settings, strategies as st
from hypothesis.extra.numpy import arrays

from adrt_exact import Image

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")

_acceptance = []
_notes = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        line = f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}"
        if name in _notes:
            line += f"  ({_notes[name]})"
        terminalreporter.write_line(line)


@pytest.fixture
def note(request):
    """Attach a one-line measurement to the acceptance summary."""

    def add(text):
        _notes[request.node.name] = text

    return add


@pytest.fixture
def rng():
    return np.random.default_rng(20201016)


@pytest.fixture
def img2():
    from adrt_exact import image_from_values

    return image_from_values(1, [1, 2, 3, 4])


def int_image(rng, n, high=65536):
    side = 1 << n
    return Image(n, rng.integers(0, high, size=(side, side)).astype(float))


@st.composite
def images(draw, max_n=5, integer=True):
    n = draw(st.integers(0, max_n))
    side = 1 << n
    if integer:
        elems = st.integers(-1000, 1000).map(float)
    else:
        elems = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
    return Image(n, draw(arrays(np.float64, (side, side), elements=elems)))
