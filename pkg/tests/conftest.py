import pytest

from dimerex.dimer import DimerModel, Edge
from dimerex.io import FIXTURES, load_fixture

CONSISTENT = ("dp0", "f0", "f1", "wf1")


@pytest.fixture(params=FIXTURES)
def any_model(request):
    return load_fixture(request.param)


@pytest.fixture(params=CONSISTENT)
def fano_model(request):
    return load_fixture(request.param)


def bigon_model():
    """Honeycomb with a doubled edge: valid faces, but a zig-zag meets its own translate."""
    c3 = load_fixture("c3")
    return DimerModel.build(
        ["b1"],
        ["w1"],
        list(c3.edges) + [Edge("e4", "b1", "w1", (0, 0))],
        {"b1": ["e3", "e1", "e4", "e2"], "w1": ["e4", "e1", "e2", "e3"]},
    )


def two_cycle_model():
    """Two nodes, two parallel edges; one zig-zag path has class (0, 0)."""
    c3 = load_fixture("c3")
    return DimerModel.build(
        ["b1"],
        ["w1"],
        list(c3.edges) + [Edge("e4", "b1", "w1", (0, 0))],
        {"b1": ["e3", "e1", "e4", "e2"], "w1": ["e1", "e4", "e2", "e3"]},
    )
