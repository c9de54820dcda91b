import itertools
import math

import pytest

from schurkit.groups import (
    GroupError,
    Subgroup,
    all_subgroups,
    automorphism_group,
    make_group,
    omega_subgroup,
    orbits,
    orthogonal_complement,
    pairing_exponent,
    parse_group_spec,
    partition_stabilizer,
    quotient_group,
    squares_subgroup,
    subgroup_generated,
    sylow_subgroup,
)
from schurkit.perms import PermGroup

from conftest import shared_group


def test_make_group_examples():
    G = make_group([4, 2])
    assert G.order == 8 and G.exponent == 4
    E8 = make_group([2, 2, 2])
    assert E8.order == 8 and E8.exponent == 2
    assert make_group([]).order == 1


def test_make_group_rejects_bad_factor():
    with pytest.raises(GroupError):
        make_group([1, 4])
    with pytest.raises(GroupError):
        make_group([0])


def test_invariant_factors():
    assert make_group([4, 2]).invariant_factors == (2, 4)
    assert make_group([2, 4]).invariant_factors == (2, 4)
    assert make_group([6, 9]).invariant_factors == (3, 18)
    assert make_group([3, 3, 4]).invariant_factors == (3, 12)
    assert make_group([2, 3]).invariant_factors == (6,)


def test_mul_inv_identity():
    G = make_group([4, 2])
    a = G.index((1, 0))
    b = G.index((1, 1))
    assert G.coords(G.mul(a, b)) == (2, 1)
    for g in G.elements():
        assert G.mul(g, 0) == g
        assert G.mul(g, G.inv(g)) == 0


def test_rank_unrank_bijection():
    for factors in ([4, 2], [3, 5], [2, 2, 3], [6, 9]):
        G = make_group(factors)
        for x in G.elements():
            assert G.index(G.coords(x)) == x


def test_order_of():
    G = make_group([4, 2])
    assert G.order_of(0) == 1
    assert G.order_of(G.index((2, 1))) == 2
    assert G.order_of(G.index((1, 1))) == 4


def test_subgroup_generated_examples():
    G = make_group([4, 2])
    assert subgroup_generated(G, []).elements == {0}
    A0 = subgroup_generated(G, [G.index((2, 0))])
    assert A0.elements == {0, G.index((2, 0))}
    full = subgroup_generated(G, [G.index((1, 0)), G.index((0, 1))])
    assert full.order == 8


def _subgroups_by_brute_force(G):
    """Oracle: closures of all generator sets of size <= 2."""
    found = set()
    for g in G.elements():
        for h in G.elements():
            found.add(subgroup_generated(G, [g, h]).elements)
    return found


@pytest.mark.parametrize("factors,count", [([4], 3), ([2, 2], 5), ([4, 2], 8)])
def test_all_subgroups_counts(factors, count):
    G = make_group(factors)
    subs = all_subgroups(G)
    assert len(subs) == count
    assert {s.elements for s in subs} == _subgroups_by_brute_force(G)


def test_all_subgroups_lagrange():
    for factors in ([4, 2], [2, 2, 3], [3, 9], [6, 2]):
        G = make_group(factors)
        for H in all_subgroups(G):
            assert G.order % H.order == 0


def test_all_subgroups_bound():
    with pytest.raises(GroupError):
        all_subgroups(make_group([17, 17]))


def test_quotient_examples():
    G = make_group([4, 2])
    trivial = subgroup_generated(G, [])
    assert quotient_group(G, trivial).group.order == 8
    full = subgroup_generated(G, [G.index((1, 0)), G.index((0, 1))])
    assert quotient_group(G, full).group.order == 1
    A0 = subgroup_generated(G, [G.index((2, 0))])
    Q = quotient_group(G, A0)
    assert Q.group.invariant_factors == (2, 2)


def test_quotient_is_homomorphism():
    for factors in ([4, 2], [2, 2, 3], [3, 9], [8, 2]):
        G = make_group(factors)
        for H in all_subgroups(G):
            Q = quotient_group(G, H)
            pi = Q.projection
            for x in G.elements():
                for y in G.elements():
                    assert pi[G.mul(x, y)] == Q.group.mul(pi[x], pi[y])
            assert set(pi) == set(range(Q.group.order))


def _brute_force_automorphisms(G):
    """Oracle: filter all bijections preserving the multiplication table."""
    n = G.order
    out = []
    for p in itertools.permutations(range(n)):
        if p[0] != 0:
            continue
        if all(p[G.mul(a, b)] == G.mul(p[a], p[b])
               for a in range(n) for b in range(n)):
            out.append(p)
    return set(out)


def test_automorphism_group_against_brute_force():
    for factors in ([4, 2], [2, 2, 2], [8], [3, 3]):
        G = make_group(factors)
        aut = automorphism_group(G)
        assert aut.elements() == _brute_force_automorphisms(G)


def test_automorphism_group_orders():
    assert automorphism_group(make_group([5])).order() == 4
    assert automorphism_group(make_group([12])).order() == 4
    assert automorphism_group(shared_group(2, 2, 2)).order() == 168
    assert automorphism_group(shared_group(4, 2)).order() == 8


def test_automorphisms_preserve_products():
    for factors in ([4, 2], [3, 3], [2, 2, 2]):
        G = make_group(factors)
        for g in automorphism_group(G).elements():
            for a in G.elements():
                for b in G.elements():
                    assert g[G.mul(a, b)] == G.mul(g[a], g[b])


def test_omega_subgroup():
    G = make_group([4, 2])
    assert omega_subgroup(G, 1).elements == {0}
    assert omega_subgroup(G, 2).order == 4
    H = make_group([3, 9])
    omega3 = omega_subgroup(H, 3)
    assert omega3.order == 9
    assert all(H.order_of(x) in (1, 3) for x in omega3.elements)


def test_pairing_bilinear():
    for factors in ([4, 2], [6], [3, 9]):
        G = make_group(factors)
        for chi in G.elements():
            for x in G.elements():
                for y in G.elements():
                    lhs = pairing_exponent(G, chi, G.mul(x, y))
                    rhs = (pairing_exponent(G, chi, x)
                           + pairing_exponent(G, chi, y)) % G.exponent
                    assert lhs == rhs


def test_pairing_examples():
    C4 = make_group([4])
    assert all(pairing_exponent(C4, 0, x) == 0 for x in C4.elements())
    assert pairing_exponent(C4, 1, 2) == 2


def test_orthogonal_complement():
    G = make_group([4, 2])
    trivial = subgroup_generated(G, [])
    assert orthogonal_complement(trivial).order == 8
    full = Subgroup(G, frozenset(range(8)))
    assert orthogonal_complement(full).order == 1
    A = subgroup_generated(G, [G.index((1, 0))])
    assert orthogonal_complement(A).order == 2


def test_orthogonal_complement_laws():
    for factors in ([4, 2], [2, 2, 3], [3, 3], [8, 2], [4, 4]):
        G = make_group(factors)
        subs = all_subgroups(G)
        for H in subs:
            Hp = orthogonal_complement(H)
            assert H.order * Hp.order == G.order
            assert orthogonal_complement(Hp) == H
        for H in subs:
            for K in subs:
                if H <= K:
                    assert orthogonal_complement(K) <= orthogonal_complement(H)


def test_orbits_examples():
    C5 = make_group([5])
    aut = automorphism_group(C5)
    assert orbits(aut) == [[0], [1, 2, 3, 4]]
    assert orbits(PermGroup.trivial(4)) == [[0], [1], [2], [3]]
    G = shared_group(4, 2)
    from schurkit.classify import automorphism_from_generator_images
    k1 = automorphism_from_generator_images(G, [(1, 0), (2, 1)])
    K1 = PermGroup(8, [k1])
    got = orbits(K1)
    expect = [[0], [G.index((0, 1)), G.index((2, 1))], [G.index((1, 0))],
              [G.index((1, 1)), G.index((3, 1))], [G.index((2, 0))],
              [G.index((3, 0))]]
    assert got == sorted(expect, key=lambda c: c[0])


def test_partition_stabilizer_examples():
    G = shared_group(4, 2)
    aut = automorphism_group(G)
    singletons = [[x] for x in G.elements()]
    assert partition_stabilizer(aut, singletons).order() == 1
    assert partition_stabilizer(aut, [list(G.elements())]).order() == 8
    from schurkit.classify import automorphism_from_generator_images
    k1 = automorphism_from_generator_images(G, [(1, 0), (2, 1)])
    K1 = PermGroup(8, [k1])
    stab = partition_stabilizer(aut, K1.orbits())
    assert stab.order() == 2
    assert stab.elements() == PermGroup(8, [k1]).elements()


def test_sylow_and_squares():
    G = make_group([4, 6])
    assert sylow_subgroup(G, 2).order == 8
    assert sylow_subgroup(G, 3).order == 3
    H = make_group([4, 2])
    assert squares_subgroup(H).elements == {0, H.index((2, 0))}


def test_parse_group_spec():
    assert parse_group_spec("4,2").factors == (4, 2)
    assert parse_group_spec("E8").factors == (2, 2, 2)
    assert parse_group_spec("C6xC9").factors == (6, 9)
    assert parse_group_spec("E9xC4").factors == (3, 3, 4)
    with pytest.raises(GroupError):
        parse_group_spec("junk!")


def test_subgroup_as_group_isomorphism():
    for factors in ([4, 2], [6, 9], [3, 3, 4]):
        G = make_group(factors)
        for H in all_subgroups(G):
            view = H.as_group
            S = view.group
            assert S.order == H.order
            members = view.to_parent
            for i in range(S.order):
                for j in range(S.order):
                    assert members[S.mul(i, j)] == G.mul(members[i], members[j])
