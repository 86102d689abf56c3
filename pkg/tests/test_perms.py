"""Permutation engine tests, with brute-force oracles at small scale."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

import pytest

from octicount.perms import (
    Perm,
    PermGroup,
    abstract_isomorphic,
    all_subgroups,
    coset_action,
    cyclic_subgroup_orders,
    index_set,
    malle_alpha,
    normal_subgroups,
    parse_cycle_string,
    perm_index,
    perm_isomorphic,
    quotient_as_perm,
    subgroup_classes,
    wreath_c2_s4,
)


def P(degree, text):
    return parse_cycle_string(degree, text)


class TestPermBasics:
    def test_compose_and_inverse(self):
        a = P(4, "(1,2,3)")
        b = P(4, "(3,4)")
        assert (a * b) * (a * b).inverse() == Perm.identity(4)
        # (a*b)(x) = a(b(x))
        assert (a * b)(3) == a(4)

    def test_associative(self):
        a, b, c = P(5, "(1,2)"), P(5, "(2,3,4)"), P(5, "(1,5)(2,4)")
        assert (a * b) * c == a * (b * c)

    def test_index_examples(self):
        assert perm_index(P(8, "(1,2)")) == 1
        assert perm_index(Perm.identity(8)) == 0
        assert perm_index(P(8, "(1,2,3,4,5,6,7,8)")) == 7

    def test_index_conjugation_invariant(self):
        g = P(8, "(1,2,3)(4,5)")
        for h in PermGroup.symmetric(8).generators:
            assert perm_index(g.conjugate_by(h)) == perm_index(g)

    def test_cycle_string_round_trip(self):
        g = P(8, "(1,3,5)(2,4)(6,8)")
        assert parse_cycle_string(8, g.cycle_string()) == g


class TestPermGroup:
    def test_order_cross_check(self):
        for G in (PermGroup.symmetric(4), wreath_c2_s4()):
            assert G.order == G.schreier_order()

    def test_closure(self):
        G = PermGroup([P(4, "(1,2)"), P(4, "(1,2,3,4)")])
        elems = G.elements
        assert all(a * b in elems for a in G.generators for b in elems)
        assert all(a.inverse() in elems for a in elems)

    def test_canonical_text_round_trip(self):
        G = wreath_c2_s4()
        assert PermGroup.from_canonical_text(G.canonical_text()) == G

    def test_conjugacy_class_sizes(self):
        G = PermGroup.symmetric(4)
        assert sorted(len(c) for c in G.conjugacy_classes) == [1, 3, 6, 6, 8]


class TestMalle:
    def test_alpha_examples(self):
        assert malle_alpha(wreath_c2_s4()) == Fraction(1)
        assert malle_alpha(PermGroup.symmetric(8)) == Fraction(1)

    def test_trivial_group_rejected(self):
        with pytest.raises(ValueError):
            malle_alpha(PermGroup.trivial(4))

    def test_conjugation_invariant(self):
        G = wreath_c2_s4()
        g = P(8, "(1,5)(2,6,3,7)")
        assert malle_alpha(G.conjugate(g)) == malle_alpha(G)


class TestWreath:
    def test_order_and_transitivity(self):
        W = wreath_c2_s4()
        assert W.order == 384
        assert W.is_transitive()

    def test_not_in_a8(self):
        W = wreath_c2_s4()
        assert any(not g.is_even() for g in W.elements)


def brute_force_subgroups(G: PermGroup, max_gens: int = 3) -> set[frozenset]:
    """Independent oracle: subgroups generated by all <= max_gens subsets."""
    elems = sorted(G.elements, key=lambda p: p.images)
    found = {frozenset([G.identity])}
    for k in range(1, max_gens + 1):
        for gens in combinations(elems, k):
            found.add(frozenset(PermGroup(gens, degree=G.degree).elements))
    return found


class TestSubgroupLattice:
    def test_s3_classes(self):
        classes = subgroup_classes(PermGroup.symmetric(3))
        assert len(classes) == 4
        assert sorted(c.order for c in classes) == [1, 2, 3, 6]

    def test_class_size_equals_normalizer_index(self):
        G = PermGroup.symmetric(4)
        for cls in subgroup_classes(G):
            N = G.normalizer(cls.representative)
            assert cls.class_size == G.order // N.order

    def test_total_count_vs_brute_force(self):
        # Every subgroup of S4 needs at most 2 generators; use 3 for margin.
        G = PermGroup.symmetric(4)
        oracle = brute_force_subgroups(G)
        classes = subgroup_classes(G)
        assert sum(c.class_size for c in classes) == len(oracle) == 30
        assert len(all_subgroups(G)) == 30

    def test_d4_brute_force(self):
        D4 = PermGroup([P(4, "(1,2,3,4)"), P(4, "(1,3)")])
        assert sum(c.class_size for c in subgroup_classes(D4)) == len(
            brute_force_subgroups(D4)
        ) == 10

    def test_transitive_classes_of_s4(self):
        classes = subgroup_classes(PermGroup.symmetric(4))
        transitive = [c for c in classes if c.representative.is_transitive()]
        assert len(transitive) == 5


class TestPermIsomorphic:
    def test_transposition_conjugate(self):
        A = PermGroup([P(4, "(1,2)")])
        B = PermGroup([P(4, "(3,4)")])
        c = perm_isomorphic(A, B)
        assert c is not None
        assert A.conjugate(c) == B

    def test_c4_vs_v4(self):
        C4 = PermGroup([P(4, "(1,2,3,4)")])
        V4 = PermGroup([P(4, "(1,2)(3,4)"), P(4, "(1,3)(2,4)")])
        assert perm_isomorphic(C4, V4) is None

    def test_relabeled_group(self):
        from octicount.catalog import catalog_group

        G = catalog_group("8T39")
        H = G.conjugate(P(8, "(1,2)"))
        c = perm_isomorphic(G, H)
        assert c is not None and G.conjugate(c) == H

    def test_witness_maps_generators(self):
        A = PermGroup([P(6, "(1,2,3)"), P(6, "(4,5)")])
        B = A.conjugate(P(6, "(1,4)(2,5)(3,6)"))
        c = perm_isomorphic(A, B)
        assert all(g.conjugate_by(c) in B.elements for g in A.generators)


class TestCosetAction:
    def test_s3_natural(self):
        G = PermGroup.symmetric(3)
        act = coset_action(G, PermGroup([P(3, "(2,3)")]))
        assert act.induced_degree == 3
        assert perm_isomorphic(act.image(), G) is not None

    def test_point_stabilizer_gives_natural_action(self):
        for G in (wreath_c2_s4(), PermGroup.symmetric(4)):
            act = coset_action(G, G.stabilizer(1))
            assert act.induced_degree == G.degree
            assert perm_isomorphic(act.image(), G) is not None

    def test_block_action_kernel(self):
        W = wreath_c2_s4()
        blocks = PermGroup(
            [g for g in W.elements if {g(1), g(2)} == {1, 2}], degree=8
        )
        act = coset_action(W, blocks)
        assert act.induced_degree == 4
        kernel = act.kernel()
        assert kernel.order == 16
        assert kernel.element_orders() == {1, 2}

    def test_kernel_is_normal_core(self):
        G = PermGroup.symmetric(4)
        H = PermGroup([P(4, "(1,2)")])
        act = coset_action(G, H)
        assert act.kernel() == G.normal_core(H)


class TestQuotient:
    def test_wreath_mod_base(self):
        W = wreath_c2_s4()
        base = PermGroup(
            [P(8, "(1,2)"), P(8, "(3,4)"), P(8, "(5,6)"), P(8, "(7,8)")]
        )
        Q = quotient_as_perm(W, base)
        assert Q.order == 24
        assert abstract_isomorphic(Q, PermGroup.symmetric(4))

    def test_s4_mod_v4(self):
        G = PermGroup.symmetric(4)
        V4 = PermGroup([P(4, "(1,2)(3,4)"), P(4, "(1,3)(2,4)")])
        Q = quotient_as_perm(G, V4)
        assert Q.order == 6
        assert abstract_isomorphic(Q, PermGroup.symmetric(3))

    def test_full_quotient_trivial(self):
        G = PermGroup.symmetric(3)
        assert quotient_as_perm(G, G).order == 1

    def test_non_normal_rejected(self):
        G = PermGroup.symmetric(3)
        with pytest.raises(ValueError):
            quotient_as_perm(G, PermGroup([P(3, "(1,2)")]))


class TestElementSets:
    def test_cyclic_orders_s4(self):
        assert cyclic_subgroup_orders(PermGroup.symmetric(4)) == {1, 2, 3, 4}

    def test_index_set_of_8_cycle(self):
        C8 = PermGroup([P(8, "(1,2,3,4,5,6,7,8)")])
        assert index_set(C8) == {4, 6, 7}

    def test_normal_subgroups_of_s4(self):
        G = PermGroup.symmetric(4)
        orders = sorted(N.order for N in normal_subgroups(G))
        assert orders == [1, 4, 12, 24]
