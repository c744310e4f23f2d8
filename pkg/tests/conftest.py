import pytest

from pbwdeform.core import FreeElement, Presentation
from pbwdeform.parser import load
from pbwdeform.cli import bundled_path

X, Y, Z = (0,), (1,), (2,)


def commutator(degree_cap=8):
    return Presentation(["x", "y"], 2, [FreeElement({(0, 1): 1, (1, 0): -1})], degree_cap)


def truncated_cubic(degree_cap=7):
    return Presentation(["x"], 3, [FreeElement({(0, 0, 0): 1})], degree_cap)


def xyx(degree_cap=6):
    return Presentation(["x", "y"], 3, [FreeElement({(0, 1, 0): 1})], degree_cap)


def bundled(name, degree_cap=None):
    """(presentation, phi) for a bundled example."""
    alg = load(bundled_path(name))
    pres = alg.presentation(degree_cap if degree_cap is not None else alg.caps["degree"])
    return pres, alg.phi_map(pres)


@pytest.fixture
def comm():
    return commutator()


@pytest.fixture
def cubic():
    return truncated_cubic()


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for key in sorted(results):
            terminalreporter.write_line(results[key])
