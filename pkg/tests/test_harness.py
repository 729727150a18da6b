import math

import pytest

from arcgen.graph_builder import CayleySpec, Graph, cayley, standard_connection
from arcgen.group_algebra import AbelianH
from arcgen.harness import (
    InstanceParseError,
    VTInstance,
    bound_report,
    connection_generators,
    load_instance,
    verify_connection_subgroup,
    verify_generation,
)
from arcgen.perm_group import Perm, PermGroup, exponent
from arcgen.pipeline import ConstructionParams, build_bundle


def c5_instance():
    graph = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
    group = PermGroup([Perm([1, 2, 3, 4, 0]), Perm([0, 4, 3, 2, 1])])
    return VTInstance(graph=graph, group=group)


def regular_cayley_instance():
    H = AbelianH(2, 2)
    graph = cayley(CayleySpec(H, standard_connection(H)))

    def translation(t):
        return Perm([H.index(*H.mul(H.element(k), t)) for k in range(H.order)])

    group = PermGroup([translation((1, 0)), translation((0, 1))])
    return VTInstance(graph=graph, group=group)


@pytest.fixture(scope="module")
def family_instance():
    bundle = build_bundle(ConstructionParams(2, 2))
    return VTInstance(graph=bundle.graph, group=bundle.big_group)


# -- instance validation -----------------------------------------------------


def test_instance_rejects_non_automorphism():
    graph = Graph(3, [(0, 1), (1, 2)])
    with pytest.raises(ValueError, match="generator 1 is not an automorphism"):
        VTInstance(graph=graph, group=PermGroup([Perm([1, 2, 0])]))


def test_instance_rejects_intransitive_group():
    graph = Graph(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ValueError, match="not vertex-transitive"):
        VTInstance(graph=graph, group=PermGroup([Perm([0, 2, 1])]))


def test_instance_rejects_degree_mismatch():
    graph = Graph(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ValueError, match="degree"):
        VTInstance(graph=graph, group=PermGroup([Perm([1, 0])]))


# -- instance file parsing ---------------------------------------------------

C5_TEXT = """5 5
0 1
0 4
1 2
2 3
3 4

1 2 3 4 0
0 4 3 2 1
"""


def test_load_instance_round_trip():
    inst = load_instance(C5_TEXT)
    assert inst.graph.n == 5
    assert inst.group.order() == 10


def test_load_instance_parse_error_line_numbers():
    with pytest.raises(InstanceParseError) as exc:
        load_instance("5 5\n0 1\n0 4\n1 2\n2 x\n3 4\n\n1 2 3 4 0\n")
    assert exc.value.line == 5
    with pytest.raises(InstanceParseError) as exc:
        load_instance("2 1\n0 1\n0 1\n\n1 0\n")
    assert exc.value.line == 3  # missing blank separator
    with pytest.raises(InstanceParseError) as exc:
        load_instance("2 1\n0 1\n\n1 2\n")
    assert exc.value.line == 4  # not a permutation
    with pytest.raises(InstanceParseError) as exc:
        load_instance("2 1\n0 1\n\n")
    assert "no generator" in str(exc.value)


# -- connection generators ---------------------------------------------------


def test_connection_generators_map_base_to_neighbors():
    inst = c5_instance()
    gens = connection_generators(inst)
    assert len(gens) == 2
    for g, beta in zip(gens, inst.graph.neighbors(0)):
        assert g(0) == beta


def test_connection_generators_regular_case_are_translations():
    # with a regular group the transversal elements for the neighbors of
    # the identity are exactly the connection-set translations
    inst = regular_cayley_instance()
    gens = connection_generators(inst)
    assert len(gens) == 4
    H = AbelianH(2, 2)
    for g, beta in zip(gens, inst.graph.neighbors(0)):
        assert g(0) == beta
        expected = Perm(
            [H.index(*H.mul(H.element(k), H.element(beta))) for k in range(16)]
        )
        assert g == expected


def test_connection_subgroup_transitive():
    for inst in (c5_instance(), regular_cayley_instance()):
        gens = connection_generators(inst)
        sub, transitive = verify_connection_subgroup(inst, gens)
        assert transitive
        assert sub.order() >= inst.graph.n


def test_verify_generation_c5():
    inst = c5_instance()
    assert verify_generation(inst, connection_generators(inst))


# -- bound reports -----------------------------------------------------------


def test_bound_report_c5():
    rep = bound_report(c5_instance())
    assert rep.n == 5 and rep.d == 2
    assert rep.e == 10
    assert rep.G_order == 10 and rep.G_alpha_order == 2
    assert rep.n <= rep.H_order
    assert rep.G_order <= rep.H_order * math.factorial(rep.n - 1)
    assert rep.decomposition_ok and rep.size_bound_ok and rep.generation_ok
    assert rep.all_ok


def test_bound_report_regular_cayley():
    rep = bound_report(regular_cayley_instance())
    assert rep.d == 4
    assert rep.H_order == 16 and rep.G_order == 16 and rep.G_alpha_order == 1
    assert rep.e == 4
    assert rep.all_ok
    assert rep.order_equality  # regular action: |G| = |H| * |G_alpha| exactly


def test_bound_report_family_graph(family_instance):
    rep = bound_report(family_instance)
    assert rep.n == 32 and rep.d == 8
    assert rep.G_order == 2**16
    assert rep.G_alpha_order == 2**11
    assert rep.e == 8
    assert rep.all_ok
    assert len(rep.connection_gens) == 8
    # |H| * |G_alpha| overcounts whenever the two subgroups intersect
    assert not rep.order_equality
    assert rep.G_order <= rep.H_order * rep.G_alpha_order


def test_exponent_of_connection_subgroup_divides_group_exponent():
    for inst in (c5_instance(), regular_cayley_instance()):
        gens = connection_generators(inst)
        sub, _ = verify_connection_subgroup(inst, gens)
        assert exponent(inst.group) % exponent(sub) == 0


def test_bound_report_render_stable_fields():
    rep = bound_report(c5_instance())
    lines = rep.render().strip().splitlines()
    assert lines[0] == "bound-certificate n=5 d=2 e=10"
    assert lines[1].startswith("H_order=")
    assert lines[2].startswith("G_order=10")
    assert lines[3].startswith("G_alpha_order=2")
    conn = [l for l in lines if l.startswith("connection_gen ")]
    assert len(conn) == 2
    assert lines[-4] == "decomposition_ok=true"
    assert lines[-3] == "size_bound_ok=true"
    assert lines[-2] == "generation_ok=true"
    assert lines[-1].startswith("order_equality=")
