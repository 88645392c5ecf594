import random
from pathlib import Path

import pytest

from make_golden import golden_graphs
from mixang.errors import OperatorFailure, Truncated, UnknownVertex
from mixang.exchange import (
    ExchangeGraph,
    build,
    components,
    diagonal_label,
    export_dot,
    export_json,
    parse_json,
    polygon_graph,
    regularity,
    rotation_quotient,
    state_key,
)
from mixang.surface import PolygonDissection, enumerate_dissections, flip_forward

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def hexagon():
    return polygon_graph(6, [1, 1, 2])


@pytest.fixture(scope="module")
def pentagon():
    return polygon_graph(5, [1, 2])


def brute_edges(m, weights):
    out = set()
    for a in enumerate_dissections(m, weights):
        for g in a.sorted_diagonals:
            out.add((state_key(a), state_key(flip_forward(a, g)), diagonal_label(g)))
    return out


def test_hexagon_graph(hexagon):
    assert len(hexagon.vertices) == 21 and len(hexagon.edges) == 42
    assert hexagon.edges == brute_edges(6, [1, 1, 2])
    assert regularity(hexagon, 2)
    assert not regularity(hexagon, 3)
    assert len(components(hexagon)) == 1


def test_hexagon_graph_from_any_start():
    for start in enumerate_dissections(6, [1, 1, 2]):
        g = build(start, lambda a: [(diagonal_label(d), flip_forward(a, d)) for d in a.sorted_diagonals])
        assert len(g.vertices) == 21


def test_pentagon_graph(pentagon):
    assert len(pentagon.vertices) == 5 and len(pentagon.edges) == 5
    assert regularity(pentagon, 1)
    assert len(components(pentagon)) == 1


@pytest.mark.parametrize("m, weights", [(7, [1, 1, 1, 2]), (7, [1, 2, 2]), (7, [2, 3]), (8, [1, 1, 2, 2])])
def test_polygon_systems_regular(m, weights):
    g = polygon_graph(m, weights)
    assert len(g.vertices) == len(enumerate_dissections(m, weights))
    assert g.edges == brute_edges(m, weights)
    assert regularity(g, len(weights) - 1)


def test_single_cell_system():
    g = polygon_graph(6, [4])
    assert len(g.vertices) == 1 and not g.edges
    assert len(components(g)) == 1
    q = rotation_quotient(g, 6)
    assert len(q.vertices) == 1 and q.metadata["orbit_sizes"] == {state_key(PolygonDissection(6)): 1}


def test_limit_one_truncates(hexagon):
    g = polygon_graph(6, [1, 1, 2], limit=1)
    assert len(g.vertices) == 1 and g.truncated and not g.edges
    with pytest.raises(Truncated):
        components(g)
    with pytest.raises(Truncated):
        regularity(g, 2)
    g = polygon_graph(6, [1, 1, 2], limit=10)
    assert len(g.vertices) == 10 and g.truncated
    assert all(s in g.vertices and t in g.vertices for s, t, _ in g.edges)


def test_parallel_build_is_identical(hexagon):
    for jobs in (2, 4):
        assert export_json(polygon_graph(6, [1, 1, 2], jobs=jobs)) == export_json(hexagon)


def test_operator_failure():
    def moves(x):
        if x >= 3:
            raise UnknownVertex("boom", vertex=x)
        return [("succ", x + 1)]

    with pytest.raises(OperatorFailure) as exc:
        build(0, moves)
    assert exc.value.details["cause"]["error"] == "UnknownVertex"


def test_generic_states():
    g = build(0, lambda x: [("+", (x + 1) % 7), ("*", (2 * x) % 7)])
    assert len(g.vertices) == 7 and len(components(g)) == 1


def test_rotation_quotients(hexagon, pentagon):
    q = rotation_quotient(hexagon, 6)
    sizes = q.metadata["orbit_sizes"]
    assert sorted(sizes.values()) == [3, 6, 6, 6] and sum(sizes.values()) == 21
    assert sum(q.metadata["edge_orbit_sizes"].values()) == len(hexagon.edges)
    p = rotation_quotient(pentagon, 5)
    assert len(p.vertices) == 1 and list(p.metadata["orbit_sizes"].values()) == [5]
    assert sum(p.metadata["edge_orbit_sizes"].values()) == 5


def test_random_rotation_invariance():
    rng = random.Random(2)
    for _ in range(10):
        weights = rng.choice([[1, 1, 2], [1, 1, 1, 1], [2, 2]])
        g = polygon_graph(6, weights)
        q = rotation_quotient(g, 6)
        assert sum(q.metadata["orbit_sizes"].values()) == len(g.vertices)
        assert sum(q.metadata["edge_orbit_sizes"].values()) == len(g.edges)


def test_dot_shapes(pentagon):
    single = ExchangeGraph(vertices={"k": 0})
    assert export_dot(single) == 'digraph {\n  "k";\n}\n'
    dot = export_dot(pentagon)
    assert dot.count("->") == 5 and dot.count('label="') == 5


def test_json_round_trip(hexagon):
    text = export_json(hexagon)
    back = parse_json(text, PolygonDissection.from_dict)
    assert back == hexagon
    assert export_json(back) == text


def test_networkx_view(hexagon):
    nx = pytest.importorskip("networkx")
    from mixang.exchange import to_networkx

    h = to_networkx(hexagon)
    assert h.number_of_nodes() == 21 and h.number_of_edges() == 42
    assert nx.is_strongly_connected(h)


@pytest.mark.parametrize("name", ["hexagon_112", "hexagon_112_z6", "pentagon_12"])
def test_golden_files(name):
    g = golden_graphs()[name]
    assert export_json(g) == (GOLDEN / f"{name}.json").read_text()
    assert export_dot(g, name) == (GOLDEN / f"{name}.dot").read_text()
