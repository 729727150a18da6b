import math
import random

import pytest

from arcgen.caps import CapExceeded, Caps
from arcgen.graph_builder import Graph
from arcgen.perm_group import (
    NotTransitiveError,
    Perm,
    PermGroup,
    arc_orbit_size,
    commutator,
    exponent,
    frattini_decomposition_check,
    frattini_rank,
    generated,
    is_arc_transitive,
    is_automorphism,
    is_vertex_transitive,
    local_action,
    normal_closure,
    orbit_of,
    perm_to_line,
    perms_from_lines,
)
from oracles import brute_force_min_generators, enumerate_elements, exponent_by_table


def cycle(n):
    return Perm([(i + 1) % n for i in range(n)])


def dihedral_c5():
    return PermGroup([cycle(5), Perm([0, 4, 3, 2, 1])])


def c5_graph():
    return Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])


def p3_graph():
    return Graph(3, [(0, 1), (1, 2)])


# -- Perm basics -------------------------------------------------------------


def test_perm_validation():
    with pytest.raises(ValueError):
        Perm([0, 0, 1])
    with pytest.raises(ValueError):
        Perm([0, 3, 1])


def test_perm_composition_convention():
    # x^(g*h) = (x^g)^h
    g = Perm([1, 2, 0])
    h = Perm([0, 2, 1])
    assert (g * h)(0) == h(g(0))
    assert (g * g.inverse()).is_identity()


def test_perm_order_and_cycles():
    p = Perm([1, 2, 0, 4, 3])
    assert p.cycles() == [(0, 1, 2), (3, 4)]
    assert p.order() == 6
    assert (p ** 6).is_identity()
    assert p ** -1 == p.inverse()


def test_perm_interchange_round_trip():
    p = Perm([2, 0, 1, 3])
    line = perm_to_line(p)
    assert line == "2 0 1 3"
    assert perms_from_lines([line]) == [p]
    with pytest.raises(ValueError):
        perms_from_lines(["1 x 0"])
    with pytest.raises(ValueError):
        perms_from_lines(["0 1"], degree=3)


# -- automorphisms -----------------------------------------------------------


def test_identity_is_automorphism():
    assert is_automorphism(c5_graph(), Perm.identity(5))


def test_k2_swap_is_automorphism():
    assert is_automorphism(Graph(2, [(0, 1)]), Perm([1, 0]))


def test_path_rotation_is_not_automorphism():
    # mapping an endpoint of the path onto the center breaks degrees
    assert not is_automorphism(p3_graph(), Perm([1, 2, 0]))


def test_automorphism_degree_mismatch():
    with pytest.raises(ValueError):
        is_automorphism(p3_graph(), Perm([1, 0]))


# -- orbits and transitivity -------------------------------------------------


def test_orbit_under_trivial_group():
    G = PermGroup.trivial(4)
    assert orbit_of(2, G) == [2]


def test_orbit_under_full_cycle():
    G = PermGroup([cycle(6)])
    assert G.orbit(0) == list(range(6))


def test_rotation_only_is_vertex_but_not_arc_transitive():
    G = PermGroup([cycle(5)])
    g = c5_graph()
    assert is_vertex_transitive(g, G)
    assert arc_orbit_size(g, G) == 5
    assert not is_arc_transitive(g, G)


def test_dihedral_is_arc_transitive():
    g = c5_graph()
    G = dihedral_c5()
    assert is_arc_transitive(g, G)
    assert arc_orbit_size(g, G) == 10


def test_transitivity_checks_generators():
    bad = PermGroup([Perm([1, 2, 0])])
    with pytest.raises(ValueError, match="generator 1 is not an automorphism"):
        is_vertex_transitive(p3_graph(), bad)


# -- orders, stabilizers, chains ---------------------------------------------


def test_cycle_group_order():
    for n in (2, 3, 7, 12):
        assert PermGroup([cycle(n)]).order() == n


def test_dihedral_order_and_stabilizer():
    G = dihedral_c5()
    assert G.order() == 10
    stab = G.stabilizer(0)
    assert stab.order() == 2
    assert all(g(0) == 0 for g in stab.generators)


def test_symmetric_group_order():
    for n in (3, 4, 5, 6):
        G = PermGroup([Perm([1, 0] + list(range(2, n))), cycle(n)])
        assert G.order() == math.factorial(n)


def test_order_is_generator_order_invariant():
    rng = random.Random(11)
    gens = [Perm([1, 0, 2, 3, 4]), cycle(5), Perm([0, 1, 3, 2, 4])]
    reference = PermGroup(gens).order()
    for _ in range(3):
        shuffled = gens[:]
        rng.shuffle(shuffled)
        assert PermGroup(shuffled).order() == reference


def test_cached_chain_matches_fresh_chain():
    G = dihedral_c5()
    cached = G.order()
    assert G.fresh_chain().order() == cached
    assert G.fresh_chain(base_prefix=(3,)).order() == cached


def test_orbit_stabilizer_identity():
    rng = random.Random(5)
    for _ in range(5):
        n = rng.randrange(4, 8)
        gens = []
        for _ in range(2):
            images = list(range(n))
            rng.shuffle(images)
            gens.append(Perm(images))
        G = PermGroup(gens)
        for v in range(n):
            assert G.order() == len(G.orbit(v)) * G.stabilizer(v).order()


def test_sifting_soundness():
    rng = random.Random(17)
    gens = [Perm([1, 0, 3, 2, 4, 5]), Perm([2, 3, 4, 5, 0, 1])]
    G = PermGroup(gens)
    chain = G.chain()
    assert chain.verify()
    for g in gens:
        assert G.contains(g)
    # random products of generators are members
    for _ in range(20):
        word = Perm.identity(6)
        for _ in range(rng.randrange(1, 8)):
            word = word * gens[rng.randrange(2)]
        assert G.contains(word)
    assert not G.contains(Perm([1, 2, 3, 4, 5, 0]))


def test_order_cap_fires():
    gens = [Perm([1, 0] + list(range(2, 8))), cycle(8)]
    with pytest.raises(CapExceeded) as exc:
        PermGroup(gens, caps=Caps(order_cap=100)).order()
    assert exc.value.cap_name == "order"
    assert "100" in str(exc.value)


def test_transversal_images():
    G = dihedral_c5()
    reps = G.transversal(0)
    assert sorted(reps) == list(range(5))
    for point, g in reps.items():
        assert g(0) == point


# -- local action ------------------------------------------------------------


def test_local_action_dihedral():
    induced, orbits = local_action(c5_graph(), dihedral_c5(), 0)
    assert induced.degree == 2
    assert orbits == 1
    assert induced.order() == 2


def test_local_action_rotation_only():
    induced, orbits = local_action(c5_graph(), PermGroup([cycle(5)]), 0)
    assert orbits == 2
    assert induced.order() == 1


# -- frattini decomposition --------------------------------------------------


def test_decomposition_whole_group_as_subgroup():
    G = dihedral_c5()
    assert frattini_decomposition_check(G, G, 0)


def test_decomposition_with_rotations():
    G = dihedral_c5()
    rotations = PermGroup([cycle(5)])
    assert frattini_decomposition_check(G, rotations, 0)


def test_decomposition_requires_transitive_subgroup():
    G = dihedral_c5()
    reflections = PermGroup([Perm([0, 4, 3, 2, 1])])
    with pytest.raises(NotTransitiveError):
        frattini_decomposition_check(G, reflections, 0)


def test_decomposition_requires_membership():
    G = PermGroup([cycle(5)])
    outside = PermGroup([Perm([0, 4, 3, 2, 1]), cycle(5)])
    with pytest.raises(ValueError, match="does not lie in"):
        frattini_decomposition_check(G, outside, 0)


def test_decomposition_false_for_intransitive_big_group():
    # G itself not transitive: orbit-stabilizer count fails
    G = PermGroup([Perm([1, 0, 2, 3])])
    H = PermGroup([Perm([1, 0, 3, 2]), Perm([2, 3, 0, 1])])
    with pytest.raises(ValueError):
        # H's generators are not in G
        frattini_decomposition_check(G, H, 0)


# -- subgroup tools ----------------------------------------------------------


def test_normal_closure_of_central_element():
    # center of the dihedral group on 4 points: the rotation by 2
    G = PermGroup([cycle(4), Perm([0, 3, 2, 1])])
    r2 = Perm([2, 3, 0, 1])
    ncl = normal_closure(G, [r2])
    assert ncl.order() == 2
    assert ncl.contains(r2)


def test_normal_closure_transposition_s4():
    S4 = PermGroup([Perm([1, 0, 2, 3]), cycle(4)])
    ncl = normal_closure(S4, [Perm([1, 0, 2, 3])])
    assert ncl.order() == 24
    assert len(enumerate_elements(ncl)) == 24


def test_contains_rejects_outsider():
    G = PermGroup([cycle(5)])
    assert not G.contains(Perm([0, 4, 3, 2, 1]))


def test_generated():
    G = generated([Perm([1, 0, 2])], degree=3)
    assert G.order() == 2


# -- exponent ----------------------------------------------------------------


def test_exponent_examples():
    klein = PermGroup([Perm([1, 0, 2, 3]), Perm([0, 1, 3, 2])])
    assert exponent(klein) == 2
    assert exponent(dihedral_c5()) == 10
    s3 = PermGroup([Perm([1, 0, 2]), Perm([1, 2, 0])])
    assert exponent(s3) == 6


def test_exponent_matches_table_oracle():
    for G in (dihedral_c5(), PermGroup([cycle(6)]), PermGroup([Perm([1, 0, 2]), Perm([1, 2, 0])])):
        assert exponent(G) == exponent_by_table(G)


def test_exponent_cap():
    G = PermGroup([cycle(12)])
    with pytest.raises(CapExceeded) as exc:
        exponent(G, cap=5)
    assert exc.value.cap_name == "exponent"


# -- frattini rank -----------------------------------------------------------


def test_frattini_rank_elementary_abelian():
    E8 = PermGroup(
        [Perm([1, 0, 2, 3, 4, 5]), Perm([0, 1, 3, 2, 4, 5]), Perm([0, 1, 2, 3, 5, 4])]
    )
    assert frattini_rank(E8, 2) == 3


def test_frattini_rank_cyclic():
    assert frattini_rank(PermGroup([cycle(4)]), 2) == 1
    assert frattini_rank(PermGroup([cycle(9)]), 3) == 1


def test_frattini_rank_quaternion():
    # regular representation of the quaternion group; rank must be 2
    i = Perm([2, 3, 1, 0, 7, 6, 4, 5])
    j = Perm([4, 5, 6, 7, 1, 0, 3, 2])
    Q8 = PermGroup([i, j])
    assert Q8.order() == 8
    assert exponent(Q8) == 4
    assert frattini_rank(Q8, 2) == 2


def test_frattini_rank_rejects_non_p_group():
    with pytest.raises(ValueError, match="only for p-groups"):
        frattini_rank(dihedral_c5(), 2)


def test_frattini_rank_matches_brute_force_on_small_groups():
    i = Perm([2, 3, 1, 0, 7, 6, 4, 5])
    j = Perm([4, 5, 6, 7, 1, 0, 3, 2])
    groups = [
        PermGroup([cycle(4)]),
        PermGroup([cycle(8)]),
        PermGroup([Perm([1, 0, 2, 3]), Perm([0, 1, 3, 2])]),
        PermGroup([i, j]),
        PermGroup([cycle(4), Perm([0, 3, 2, 1])]),  # dihedral of order 8
    ]
    for G in groups:
        assert frattini_rank(G, 2) == brute_force_min_generators(G)


def test_commutator_identity():
    g = cycle(5)
    h = Perm([0, 4, 3, 2, 1])
    assert commutator(g, g).is_identity()
    assert commutator(g, h) == g.inverse() * h.inverse() * g * h


def test_orders_against_sympy_on_random_groups():
    sympy_comb = pytest.importorskip("sympy.combinatorics")
    rng = random.Random(20240812)
    for trial in range(15):
        n = rng.randrange(4, 10)
        gens = []
        for _ in range(rng.randrange(1, 4)):
            images = list(range(n))
            rng.shuffle(images)
            gens.append(images)
        ours = PermGroup([Perm(g) for g in gens])
        theirs = sympy_comb.PermutationGroup(
            [sympy_comb.Permutation(g) for g in gens]
        )
        assert ours.order() == theirs.order(), gens
        v = rng.randrange(n)
        assert ours.stabilizer(v).order() == theirs.stabilizer(v).order()
