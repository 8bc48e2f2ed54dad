import math

import pytest

from taufact.structures.zdgraph import (
    GraphMode,
    build,
    clique_census,
    clique_number,
    diameter,
    export_dot,
    is_connected,
    to_adjacency_json,
    zn_vertex_count,
)


def _edge_labels(zg):
    return {tuple(zg.ring.labels(e)) for e in zg.edges}


def test_z12_plain_graph(ring):
    zg = build(ring("Z/12"), GraphMode.PLAIN)
    assert zg.vertices == [2, 3, 4, 6, 8, 9, 10]
    assert _edge_labels(zg) == {
        ("2", "6"), ("3", "4"), ("3", "8"), ("4", "6"),
        ("4", "9"), ("6", "8"), ("6", "10"), ("8", "9"),
    }
    assert clique_number(zg) == 2
    assert is_connected(zg)
    assert diameter(zg) <= 3


def test_z4_single_vertex_without_loop(ring):
    zg = build(ring("Z/4"))
    assert zg.vertices == [2]
    assert zg.edges == []
    assert is_connected(zg)
    assert diameter(zg) == 0
    assert clique_number(zg) == 1


def test_z6_graph_and_quotient(ring):
    R = ring("Z/6")
    zg = build(R)
    assert _edge_labels(zg) == {("2", "3"), ("3", "4")}
    assert diameter(zg) == 2

    quotient = build(R, GraphMode.QUOTIENT)
    assert quotient.vertices == [2, 3]
    assert quotient.edges == [(2, 3)]
    assert quotient.classes[2] == {2, 4}
    assert quotient.label(2) == "[2]"


def test_domains_have_empty_graphs(ring):
    zg = build(ring("GF(9)"))
    assert zg.vertices == []
    assert clique_number(zg) == 0
    assert diameter(zg) == 0
    assert is_connected(zg)


def test_disconnected_graph_has_infinite_diameter(ring):
    zg = build(ring("Z/6"))
    zg.graph.remove_edge(3, 4)
    assert not is_connected(zg)
    assert math.isinf(diameter(zg))


@pytest.mark.parametrize(
    "spec, omega",
    [
        ("Z/30", 3),
        ("GF(2) x GF(3)", 2),
        ("GF(2) x GF(3) x GF(5)", 3),
        ("GF(2) x GF(2) x GF(3) x GF(5)", 4),
        ("GF(2) x Z/4", 2),
    ],
)
def test_clique_numbers(ring, spec, omega):
    assert clique_number(build(ring(spec))) == omega


@pytest.mark.parametrize("n", [6, 12, 30, 36, 60])
def test_zn_vertex_count(ring, n):
    assert build(ring(f"Z/{n}")).graph.number_of_nodes() == zn_vertex_count(n)


def test_clique_census(ring):
    census = clique_census(build(ring("Z/30")))
    assert not census.overflow
    assert census.counts[3] >= 1
    assert census.total == sum(census.counts.values())

    capped = clique_census(build(ring("Z/30")), cap=3)
    assert capped.overflow
    assert capped.total == 3
    assert capped.to_record()["overflow"] is True


def test_export_dot_z6(ring):
    dot = export_dot(build(ring("Z/6")))
    assert dot == (
        'graph "Gamma(Z/6)" {\n'
        "  // mode=plain omega=2\n"
        '  "2";\n'
        '  "3";\n'
        '  "4";\n'
        '  "2" -- "3";\n'
        '  "3" -- "4";\n'
        "}\n"
    )


def test_export_dot_empty_and_single(ring):
    assert export_dot(build(ring("GF(5)"))) == 'graph "Gamma(GF(5))" {\n  // mode=plain omega=0\n}\n'
    assert '"2";' in export_dot(build(ring("Z/4")))


def test_export_dot_z30_notes_omega(ring):
    assert "omega=3" in export_dot(build(ring("Z/30")))


def test_adjacency_json(ring):
    record = to_adjacency_json(build(ring("Z/6"), GraphMode.QUOTIENT))
    assert record == {"vertices": ["[2]", "[3]"], "edges": [["[2]", "[3]"]], "mode": "associate-quotient"}
