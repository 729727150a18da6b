import random

import pytest

from arcgen.caps import CapExceeded, Caps
from arcgen.graph_builder import (
    CayleySpec,
    Graph,
    GraphFormatError,
    build_family_graph,
    cayley,
    empty_graph,
    export_graph,
    is_connected,
    is_regular,
    parse_graph,
    standard_connection,
    valency,
    wreath_product,
)
from arcgen.group_algebra import AbelianH


def k2():
    return Graph(2, [(0, 1)])


def c4():
    return Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


def test_graph_canonical_form():
    g = Graph(3, [(2, 1), (1, 2), (0, 2)])
    assert g.adj == ((2,), (2,), (0, 1))
    assert g.m == 2


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(2, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 5)])


def test_predicates():
    assert valency(k2()) == 1
    assert is_connected(k2())
    two_isolated = Graph(2, [])
    assert not is_connected(two_isolated)
    assert is_regular(two_isolated)
    path = Graph(3, [(0, 1), (1, 2)])
    assert not is_regular(path)
    with pytest.raises(ValueError):
        valency(path)


# -- cayley ------------------------------------------------------------------


def test_cayley_klein_four_cycle():
    H = AbelianH(2, 1)
    g = cayley(CayleySpec(H, ((1, 0), (0, 1))))
    # vertices 1, b, a, ab; edges checked by hand
    assert g.n == 4
    assert g.adj == ((1, 2), (0, 3), (0, 3), (1, 2))
    assert g.valency() == 2
    assert g.is_connected()


def test_cayley_c4xc4():
    H = AbelianH(2, 2)
    g = cayley(CayleySpec(H, standard_connection(H)))
    assert g.n == 16
    assert g.valency() == 4
    assert g.is_connected()


def test_cayley_c3xc3():
    H = AbelianH(3, 1)
    g = cayley(CayleySpec(H, standard_connection(H)))
    assert g.n == 9
    assert g.valency() == 4


def test_cayley_validation():
    H = AbelianH(3, 1)
    with pytest.raises(ValueError, match="identity"):
        cayley(CayleySpec(H, ((0, 0), (1, 0), (2, 0))))
    with pytest.raises(ValueError, match="inverse-closed"):
        cayley(CayleySpec(H, ((1, 0),)))
    with pytest.raises(ValueError, match="duplicates"):
        cayley(CayleySpec(H, ((1, 0), (2, 0), (1, 0))))


def test_cayley_disconnected_when_set_does_not_generate():
    H = AbelianH(2, 1)
    g = cayley(CayleySpec(H, ((1, 0),)))
    assert not g.is_connected()


def test_cayley_translations_are_automorphisms():
    from arcgen.perm_group import Perm, is_automorphism

    H = AbelianH(2, 2)
    g = cayley(CayleySpec(H, standard_connection(H)))
    for t in standard_connection(H):
        perm = Perm(
            [H.index(*H.mul(H.element(k), t)) for k in range(H.order)]
        )
        assert is_automorphism(g, perm)


# -- wreath product ----------------------------------------------------------


def test_wreath_with_single_inner_vertex_is_isomorphic():
    delta = c4()
    g = wreath_product(empty_graph(1), delta)
    assert g == delta


def test_wreath_two_isolated_by_k2_is_four_cycle():
    g = wreath_product(empty_graph(2), k2())
    # K4 minus a perfect matching: vertices 0,1 vs 2,3 fully joined
    assert g.n == 4 and g.m == 4
    assert g.adj == ((2, 3), (2, 3), (0, 1), (0, 1))


def test_wreath_valency_law():
    # val(gamma wr delta) = val(gamma) + |V gamma| * val(delta)
    rng = random.Random(3)
    delta = c4()
    for inner_n, inner_edges in [(1, []), (3, [(0, 1)]), (2, [(0, 1)])]:
        gamma = Graph(inner_n, inner_edges)
        if not gamma.is_regular():
            continue
        g = wreath_product(gamma, delta)
        assert g.valency() == gamma.valency() + inner_n * delta.valency()


def test_wreath_of_isolated_vertices_is_p_times_regular():
    delta = c4()
    for p in (1, 2, 3):
        g = wreath_product(empty_graph(p), delta)
        assert g.valency() == p * delta.valency()


# -- family graphs -----------------------------------------------------------


def test_family_graph_2_2():
    fam = build_family_graph(2, 2)
    assert fam.graph.n == 32
    assert fam.graph.valency() == 8
    assert fam.graph.is_connected()
    assert not fam.degenerate


def test_family_graph_3_1():
    fam = build_family_graph(3, 1)
    assert fam.graph.n == 27
    assert fam.graph.valency() == 12


def test_family_graph_degenerate_2_1():
    fam = build_family_graph(2, 1)
    assert fam.degenerate
    assert fam.graph.n == 8
    assert fam.graph.valency() == 4


def test_family_graph_vertex_count_formula():
    for p, h in [(2, 1), (2, 2), (3, 1), (5, 1)]:
        fam = build_family_graph(p, h)
        assert fam.graph.n == p ** (2 * h + 1)


def test_family_graph_vertex_cap():
    with pytest.raises(CapExceeded) as exc:
        build_family_graph(2, 2, Caps(vertex_cap=10))
    assert exc.value.cap_name == "vertex"


# -- serialization -----------------------------------------------------------


def test_edge_list_k2():
    assert export_graph(k2()) == b"2 1\n0 1\n"


def test_edge_list_four_cycle():
    assert export_graph(c4()) == b"4 4\n0 1\n0 3\n1 2\n2 3\n"


def test_edge_list_round_trip_family_graph():
    g = build_family_graph(2, 2).graph
    assert parse_graph(export_graph(g)) == g


def test_edge_list_parse_errors_carry_line_numbers():
    with pytest.raises(GraphFormatError) as exc:
        parse_graph("2 1\n0 zzz\n")
    assert exc.value.line == 2
    with pytest.raises(GraphFormatError) as exc:
        parse_graph("nope\n")
    assert exc.value.line == 1
    with pytest.raises(GraphFormatError) as exc:
        parse_graph("3 2\n0 1\n")
    assert exc.value.line == 3


def test_sparse6_round_trip():
    rng = random.Random(20240811)
    graphs = [k2(), c4(), Graph(1, []), Graph(7, [(0, 1), (0, 2), (1, 2), (5, 6)])]
    for n in (2, 4, 8, 16, 33):
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < 0.3
        ]
        graphs.append(Graph(n, edges))
    graphs.append(build_family_graph(2, 2).graph)
    for g in graphs:
        data = export_graph(g, "sparse6")
        assert parse_graph(data, "sparse6") == g


def test_sparse6_matches_reference_implementation():
    nx = pytest.importorskip("networkx")
    rng = random.Random(99)
    graphs = [k2(), c4(), build_family_graph(2, 2).graph, build_family_graph(3, 1).graph]
    # powers of two exercise the padding special case
    for n in (2, 4, 8, 16, 32, 11, 27):
        for density in (0.05, 0.4, 0.8):
            edges = [
                (u, v)
                for u in range(n)
                for v in range(u + 1, n)
                if rng.random() < density
            ]
            graphs.append(Graph(n, edges))
    for g in graphs:
        ref = nx.Graph()
        ref.add_nodes_from(range(g.n))
        ref.add_edges_from(g.edges())
        expected = nx.to_sparse6_bytes(ref, header=False).strip()
        assert export_graph(g, "sparse6").strip() == expected


def test_unsupported_format():
    with pytest.raises(ValueError):
        export_graph(k2(), "dot")
    with pytest.raises(ValueError):
        parse_graph("", "dot")
