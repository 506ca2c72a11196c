"""
Tests for maze, BFS subgraph, random graph and any-pair instance generation
"""

from collections import deque
from itertools import combinations

import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from lpdp_solver.core.exceptions import (
    ComponentTooSmallError,
    InvalidParameterError,
    UnsatisfiableMazeError,
)
from lpdp_solver.core.exhaustive import exhaustive_dfs
from lpdp_solver.models.graph import Graph, Instance
from lpdp_solver.models.maze import parse_maze_text
from lpdp_solver.models.solution import SolveStatus
from lpdp_solver.services.instance_generator import (
    anypair_reduction,
    extract_bfs_subgraph,
    generate_maze,
    generate_random_graph,
    maze_to_instance,
    obstacle_count,
    random_instance,
)
from lpdp_solver.services.metis_io import emit_metis


def reachable(g: Graph, source: int):
    seen = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v, _ in g.neighbors(u):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def bfs_order(g: Graph, root: int, size: int):
    order = [root]
    queue = deque([root])
    while queue and len(order) < size:
        u = queue.popleft()
        for v, _ in g.neighbors(u):
            if v not in order and len(order) < size:
                order.append(v)
                queue.append(v)
    return order


class TestMazeGeneration:
    """Test seeded maze generation"""

    def test_no_fill_has_no_obstacles(self):
        maze = generate_maze(10, 0.0, seed=5)
        assert maze.obstacle_count == 0
        assert len(list(maze.free_cells())) == 100

    def test_obstacle_count_is_exact(self):
        maze = generate_maze(10, 0.3, seed=7)
        assert maze.obstacle_count == 30
        instance = maze_to_instance(maze)
        assert instance.target in reachable(instance.graph, instance.source)

    def test_obstacle_count_uses_decimal_fill(self):
        assert obstacle_count(10, 0.3) == 30
        assert obstacle_count(7, 0.4) == 19

    def test_same_seed_gives_identical_grid(self):
        first = generate_maze(20, 0.4, seed=11)
        second = generate_maze(20, 0.4, seed=11)
        assert first.to_text() == second.to_text()
        assert emit_metis(maze_to_instance(first).graph) == emit_metis(maze_to_instance(second).graph)

    @pytest.mark.parametrize("seed", range(10))
    def test_generated_mazes_are_connected(self, seed):
        maze = generate_maze(12, 0.4, seed=seed)
        instance = maze_to_instance(maze)
        assert instance.target in reachable(instance.graph, instance.source)

    def test_start_and_target_stay_free(self):
        maze = generate_maze(8, 0.4, seed=2)
        assert maze.is_free(0, 0)
        assert maze.is_free(7, 7)

    def test_disconnected_draws_exhaust_the_retry_budget(self):
        # both neighbors of the start are always blocked
        with pytest.raises(UnsatisfiableMazeError):
            generate_maze(2, 0.5, seed=0, retry_budget=5)

    @pytest.mark.parametrize("n,fill", [(1, 0.0), (5, 1.0), (5, -0.1)])
    def test_invalid_parameters(self, n, fill):
        with pytest.raises(InvalidParameterError):
            generate_maze(n, fill, seed=0)

    def test_text_round_trip(self):
        maze = generate_maze(6, 0.3, seed=4)
        text = maze.to_text()
        assert text.startswith("S")
        assert text.rstrip("\n").endswith("T")
        assert parse_maze_text(text, seed=4) == maze


class TestMazeToInstance:
    """Test maze graph conversion"""

    def test_open_two_by_two(self):
        instance = maze_to_instance(generate_maze(2, 0.0, seed=0))
        assert instance.graph.n == 4
        assert instance.graph.m == 4
        assert (instance.source, instance.target) == (0, 3)
        # corner-to-corner paths on a grid have even length
        assert exhaustive_dfs(instance).weight == 2

    def test_open_three_by_three(self):
        instance = maze_to_instance(generate_maze(3, 0.0, seed=0))
        solution = exhaustive_dfs(instance)
        assert solution.weight == 8
        assert sorted(solution.path) == list(range(9))

    def test_vertices_follow_row_major_free_cells(self):
        maze = parse_maze_text("S.#\n#..\n..T\n")
        instance = maze_to_instance(maze)
        assert instance.graph.n == 7
        assert instance.graph.edges() == [(0, 1, 1), (1, 2, 1), (2, 3, 1), (2, 5, 1), (3, 6, 1), (4, 5, 1), (5, 6, 1)]
        assert instance.target == 6

    def test_instance_name(self):
        instance = maze_to_instance(generate_maze(10, 0.3, seed=7))
        assert instance.name == "maze-n10-o30-s7"


class TestBfsSubgraph:
    """Test BFS subgraph extraction"""

    @pytest.fixture
    def path5(self):
        return Graph.from_edges(5, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1)])

    def test_path_prefix(self, path5):
        instance = extract_bfs_subgraph(path5, 3, seed=1, root=0)
        assert instance.graph.edges() == [(0, 1, 1), (1, 2, 1)]
        assert instance.source == 0
        assert instance.target in (1, 2)

    def test_full_size_keeps_every_edge(self):
        g = maze_to_instance(generate_maze(6, 0.0, seed=3)).graph
        instance = extract_bfs_subgraph(g, g.n, seed=9, root=0)
        assert instance.graph.n == g.n
        assert instance.graph.m == g.m
        assert instance.graph.total_weight == g.total_weight

    @pytest.mark.parametrize("seed", range(20))
    def test_extractions_are_induced(self, seed):
        g = generate_random_graph(60, 0.08, 20, seed=123)
        root = seed % g.n
        component = reachable(g, root)
        size = min(14, len(component))
        if size < 2:
            pytest.skip("isolated root")
        instance = extract_bfs_subgraph(g, size, seed=seed, root=root)
        touched = bfs_order(g, root, size)

        expected = [(i, j) for i, j in combinations(range(size), 2) if g.has_edge(touched[i], touched[j])]
        assert instance.graph.m == len(expected)
        for i, j, w in instance.graph.edges():
            assert g.weight(touched[i], touched[j]) == w

    def test_target_differs_from_source(self):
        g = maze_to_instance(generate_maze(10, 0.3, seed=1)).graph
        for seed in range(20):
            instance = extract_bfs_subgraph(g, 12, seed=seed)
            assert instance.source == 0
            assert 1 <= instance.target < 12

    def test_deterministic(self):
        g = maze_to_instance(generate_maze(10, 0.3, seed=1)).graph
        assert extract_bfs_subgraph(g, 20, seed=5) == extract_bfs_subgraph(g, 20, seed=5)

    def test_small_components_exhaust_retries(self):
        g = Graph.from_edges(4, [(0, 1, 1), (2, 3, 1)])
        with pytest.raises(ComponentTooSmallError):
            extract_bfs_subgraph(g, 3, seed=0, retry_budget=5)

    @pytest.mark.parametrize("size", [0, 1, 6])
    def test_invalid_size(self, path5, size):
        with pytest.raises(InvalidParameterError):
            extract_bfs_subgraph(path5, size, seed=0)


class TestRandomGraphs:
    """Test seeded random graphs"""

    def test_deterministic(self):
        assert generate_random_graph(20, 0.3, 10, seed=1) == generate_random_graph(20, 0.3, 10, seed=1)

    def test_weights_within_range(self):
        g = generate_random_graph(30, 0.5, 7, seed=2)
        assert all(1 <= w <= 7 for _, _, w in g.edges())

    def test_complete_and_empty_extremes(self):
        assert generate_random_graph(6, 1.0, 1, seed=0).m == 15
        assert generate_random_graph(6, 0.0, 1, seed=0).m == 0

    def test_random_instance_has_distinct_endpoints(self):
        for seed in range(30):
            instance = random_instance(5, 0.5, 3, seed)
            assert instance.source != instance.target

    def test_invalid_parameters(self):
        with pytest.raises(InvalidParameterError):
            generate_random_graph(5, 1.5, 1, seed=0)
        with pytest.raises(InvalidParameterError):
            generate_random_graph(5, 0.5, 0, seed=0)


class TestAnyPairReduction:
    """Test the any-pair to s-t reduction"""

    def test_single_vertex(self):
        instance = anypair_reduction(Graph.empty(1))
        assert instance.graph.n == 3
        assert instance.graph.edges() == [(0, 1, 0), (0, 2, 0)]
        assert exhaustive_dfs(instance).weight == 0

    def test_single_edge(self):
        instance = anypair_reduction(Graph.from_edges(2, [(0, 1, 7)]))
        solution = exhaustive_dfs(instance)
        assert solution.weight == 7
        assert solution.path[1:-1] in ([0, 1], [1, 0])

    def test_virtual_endpoints_are_not_adjacent(self, triangle):
        instance = anypair_reduction(triangle)
        assert (instance.source, instance.target) == (3, 4)
        assert not instance.graph.has_edge(3, 4)

    def test_empty_graph_rejected(self):
        with pytest.raises(InvalidParameterError):
            anypair_reduction(Graph.empty(0))

    @hyp_settings(max_examples=50, deadline=None)
    @given(
        n=st.integers(min_value=1, max_value=10),
        p=st.sampled_from([0.2, 0.3, 0.4]),
        seed=st.integers(min_value=0, max_value=10_000),
    )
    def test_matches_best_fixed_pair(self, n, p, seed):
        g = generate_random_graph(n, p, 9, seed)
        best = 0
        for s, t in combinations(range(n), 2):
            solution = exhaustive_dfs(Instance(g, s, t))
            if solution.status is SolveStatus.SOLVED:
                best = max(best, solution.weight)
        assert exhaustive_dfs(anypair_reduction(g)).weight == best
