import numpy as np
import pytest

from hullmert import Edge, Hypergraph


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


@pytest.fixture
def two_line_graph() -> Hypergraph:
    """Two nullary edges whose lines (with w0=[2], v=[1]) are y=0 and y=eta+2."""
    return Hypergraph(
        1,
        [
            Edge.make(0, (), {}, ("flat",)),
            Edge.make(0, (), {0: 1.0}, ("steep",)),
        ],
        goal=0,
        n_features=1,
    )


@pytest.fixture
def diamond_graph() -> Hypergraph:
    """Two parallel single-word paths from a start node to the goal."""
    return Hypergraph(
        2,
        [
            Edge.make(0, (), {}, ()),
            Edge.make(1, (0,), {0: 1.0}, (0, "cat")),
            Edge.make(1, (0,), {0: -1.0}, (0, "dog")),
        ],
        goal=1,
        n_features=1,
    )


