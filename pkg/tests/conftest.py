"""
Shared fixtures for the LPDP solver tests
"""

import pytest
from hypothesis import HealthCheck, settings as hyp_settings

from lpdp_solver.core.config import Settings, get_settings
from lpdp_solver.core.lpdp.views import BlockView
from lpdp_solver.core.rng import SplitMix64
from lpdp_solver.models.graph import Graph, Instance
from lpdp_solver.services.instance_generator import generate_random_graph
from lpdp_solver.services.solver_service import SolverService


# fresh_settings is autouse, so every property test sees a function-scoped fixture
hyp_settings.register_profile(
    "lpdp",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.function_scoped_fixture, HealthCheck.too_slow],
)
hyp_settings.load_profile("lpdp")


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="Run slow performance tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Settings read from a clean environment for every test"""
    monkeypatch.delenv("LPDP_SEED", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def settings():
    return Settings()


@pytest.fixture
def solver_service(settings):
    return SolverService(settings)


@pytest.fixture
def path4():
    """Unit-weight path 0-1-2-3"""
    return Graph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)])


@pytest.fixture
def triangle():
    """Triangle with weights ab=1, bc=2, ca=4 on vertices a=0, b=1, c=2"""
    return Graph.from_edges(3, [(0, 1, 1), (1, 2, 2), (0, 2, 4)])


@pytest.fixture
def cycle4():
    return Graph.from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])


@pytest.fixture
def path4_instance(path4):
    return Instance(path4, 0, 3, name="path4")


def ladder(columns: int) -> Graph:
    """2 x columns grid; vertex (r, c) has id r * columns + c"""
    edges = []
    for c in range(columns):
        edges.append((c, columns + c, 1))
        if c + 1 < columns:
            edges.append((c, c + 1, 1))
            edges.append((columns + c, columns + c + 1, 1))
    return Graph.from_edges(2 * columns, edges)


@pytest.fixture
def make_ladder():
    return ladder


def leaf_view(nodes, edges, boundary, block=0, n=None) -> BlockView:
    """Leaf view over plain vertices; `n` above every node keeps them non-terminal"""
    nodes = tuple(sorted(nodes))
    edges = tuple(edges)
    return BlockView(
        block=block,
        level=0,
        n=max(nodes) + 1 if n is None else n,
        nodes=nodes,
        edges=edges,
        boundary=tuple(sorted(boundary)),
        flat_nodes=nodes,
        flat_edges=edges,
    )


def random_leaf_view(seed: int, max_nodes: int = 10, max_boundary: int = 5) -> BlockView:
    """Seeded sparse leaf view with up to `max_nodes` nodes and `max_boundary` boundary nodes"""
    rng = SplitMix64(seed)
    size = 1 + rng.below(max_nodes)
    p = (0.2, 0.3, 0.4)[rng.below(3)]
    g = generate_random_graph(size, p, 9, seed)
    boundary = rng.sample(range(size), 1 + rng.below(min(max_boundary, size)))
    return leaf_view(range(size), g.edges(), boundary)


@pytest.fixture
def make_leaf_view():
    return leaf_view


@pytest.fixture
def make_random_leaf_view():
    return random_leaf_view
