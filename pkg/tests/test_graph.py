import itertools

import pytest
from hypothesis import given, strategies as st

from simonovits.graph import (Graph, PartTuple, ColoredGraph, edge_index,
                              edge_from_index, all_pairs, parse_graph,
                              format_graph, complete_graph, cycle_graph,
                              complete_multipartite, blowup_plus,
                              disjoint_union, petersen_graph, named_graph,
                              ext_int, is_delta_balanced)


@given(st.integers(2, 30), st.data())
def test_edge_index_roundtrip(n, data):
    u = data.draw(st.integers(0, n - 2))
    v = data.draw(st.integers(u + 1, n - 1))
    assert edge_from_index(n, edge_index(n, u, v)) == (u, v)


def test_edge_index_is_a_bijection():
    n = 9
    idxs = [edge_index(n, u, v) for (u, v) in all_pairs(n)]
    assert sorted(idxs) == list(range(n * (n - 1) // 2))


def test_parse_format_roundtrip():
    g = petersen_graph()
    assert parse_graph(format_graph(g)).edges() == g.edges()


def test_parse_rejects_duplicate_edges():
    with pytest.raises(ValueError):
        parse_graph("3 2\n0 1\n1 0\n")


def test_basic_invariants():
    g = complete_graph(5)
    assert g.edge_count() == 10
    assert g.degree(0) == 4
    assert g.chromatic_number() == 5
    c5 = cycle_graph(5)
    assert c5.chromatic_number() == 3
    assert not c5.is_bipartite()
    assert cycle_graph(6).is_bipartite()
    p = petersen_graph()
    assert p.edge_count() == 15
    assert all(p.degree(v) == 3 for v in range(10))
    assert p.chromatic_number() == 3


def test_named_graphs():
    assert named_graph("triangle").edge_count() == 3
    assert named_graph("k4").chromatic_number() == 4
    with pytest.raises(ValueError):
        named_graph("nope")


def test_complete_multipartite_and_blowup():
    g = complete_multipartite([3, 3])
    assert g.edge_count() == 9
    assert g.is_bipartite()
    gp = blowup_plus(2, 3)
    assert gp.edge_count() == 10
    assert gp.has_edge(0, 1)
    assert not g.has_edge(0, 1)


def test_disjoint_union():
    g = disjoint_union(cycle_graph(5), complete_graph(3))
    assert g.n == 8
    assert g.edge_count() == 8
    assert not g.is_connected()


def test_edge_mask_subgraph_roundtrip():
    g = petersen_graph()
    assert g.from_edge_mask(g.edge_mask()).edges() == g.edges()


def test_induced_relabels_and_in_place_keeps_labels():
    g = complete_graph(6)
    sub = g.induced([1, 3, 5])
    assert sub.n == 3 and sub.edge_count() == 3
    sub2 = g.induced_in_place([1, 3, 5])
    assert sub2.n == 6 and sub2.edge_count() == 3
    assert sub2.has_edge(1, 3)


def test_parttuple_masks_partition_all_pairs():
    part = PartTuple.from_assignment([0, 0, 1, 1, 2])
    ext, intm = part.ext_mask(), part.int_mask()
    assert ext & intm == 0
    assert (ext | intm).bit_count() == 10
    assert intm.bit_count() == 2


def test_parttuple_assignment_roundtrip():
    a = [0, 1, -1, 1, 0, 2]
    assert PartTuple.from_assignment(a).assignment() == a


def test_parttuple_rejects_overlap():
    with pytest.raises(ValueError):
        PartTuple(4, [{0, 1}, {1, 2}])


def test_ext_int_split():
    g = complete_graph(4)
    part = PartTuple.from_assignment([0, 0, 1, 1])
    ext, internal = ext_int(g, part)
    assert ext.edge_count() == 4
    assert internal.edge_count() == 2


def test_ext_int_drops_unsupported():
    g = complete_graph(4)
    part = PartTuple.from_assignment([0, 1, -1, -1], 2)
    ext, internal = ext_int(g, part)
    assert ext.edge_count() == 1
    assert internal.edge_count() == 0


def test_delta_balanced():
    part = PartTuple.from_assignment([0, 0, 0, 1, 1])
    assert is_delta_balanced(part, 0.4)
    assert not is_delta_balanced(part, 0.1)


def test_colored_graph_classes():
    q = Graph(5, [(0, 1), (0, 2), (0, 3)])
    cg = ColoredGraph(q, [1, 2, 2, 2, 0], centres=[0])
    assert cg.colour_class(2) == frozenset({1, 2, 3})
    assert cg.class_neighbours(0, 2) == frozenset({1, 2, 3})
    assert cg.k() == 1


@given(st.integers(2, 8), st.integers(0, 2 ** 12))
def test_greedy_colouring_proper(n, bits):
    edges = [e for i, e in enumerate(all_pairs(n)) if bits >> i & 1]
    g = Graph(n, edges)
    k = g.chromatic_number()
    col = g.proper_colouring(k)
    assert col is not None
    assert all(col[u] != col[v] for (u, v) in g.edges())
    assert g.proper_colouring(k - 1) is None or k == 1
