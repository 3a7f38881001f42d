import warnings

import numpy as np
import pytest
from hypothesis import settings
from scipy.linalg import expm

from sympwig import sympl
from sympwig.errors import NontrivialFormAtN1

settings.register_profile("default", deadline=None, max_examples=60)
# opt in with --hypothesis-profile=stress
settings.register_profile("stress", deadline=None, max_examples=2000)
settings.load_profile("default")


def random_spd(rng, dim, floor=0.1):
    x = rng.standard_normal((dim, dim))
    return x @ x.T / dim + floor * np.identity(dim)


def random_symplectic(rng, n, scale=0.5):
    """Product of a symplectic shear and a symplectic rotation-squeeze."""
    j = sympl.sympmat(n)
    h = rng.standard_normal((2 * n, 2 * n)) * scale
    h = 0.5 * (h + h.T)
    # exp(J H) is symplectic for symmetric H
    return expm(j @ h)


def random_form(rng, n):
    """A normalized random form ``S J S^T`` with a non-symplectic ``S``."""
    s = np.identity(2 * n) + 0.4 * rng.standard_normal((2 * n, 2 * n))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NontrivialFormAtN1)
        return sympl.make_form(s @ sympl.sympmat(n) @ s.T)


def skewed_block_form(theta):
    return sympl.make_form(sympl.block_form_matrix([theta, 1.0 / theta]))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def form_pair():
    """The standard form and the two-mode block form with thetas (2, 1/2)."""
    return sympl.Form.standard(2), skewed_block_form(2.0)


# -- acceptance summary -----------------------------------------------------

_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (report.when != "call" and report.passed):
        return
    number, title = marker.args
    ok = _criteria.get(number, (title, True))[1]
    _criteria[number] = (title, ok and report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
