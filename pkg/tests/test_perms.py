import itertools

import pytest

from schurkit.perms import (
    PermGroup,
    PermGroupError,
    compose,
    identity_perm,
    inverse_perm,
    perm_power,
)


def test_compose_convention():
    p = (1, 2, 0)
    q = (0, 2, 1)
    # (p then q)(x) = q[p[x]]
    assert compose(p, q) == (2, 1, 0)
    assert compose(p, inverse_perm(p)) == identity_perm(3)


def test_perm_power():
    p = (1, 2, 3, 0)
    assert perm_power(p, 4) == identity_perm(4)
    assert perm_power(p, -1) == inverse_perm(p)


def test_rejects_non_permutation():
    with pytest.raises(PermGroupError):
        PermGroup(3, [(0, 0, 1)])


def test_elements_and_order():
    rot = (1, 2, 3, 0)
    g = PermGroup(4, [rot])
    assert g.order() == 4
    swap = (1, 0, 2, 3)
    s4 = PermGroup(4, [rot, swap])
    assert len(s4.elements()) == 24


def test_chain_order_matches_closure():
    gens = [(1, 2, 3, 4, 0), (1, 0, 2, 3, 4)]
    g = PermGroup(5, gens)
    from schurkit.perms import StabilizerChain
    chain = StabilizerChain(5, g.generators)
    assert chain.order() == len(g.elements()) == 120


def test_contains():
    rot = (1, 2, 3, 0)
    g = PermGroup(4, [rot])
    assert g.contains((2, 3, 0, 1))
    assert not g.contains((1, 0, 3, 2))


def test_point_stabilizer_orbits():
    rot = (1, 2, 3, 4, 0)
    swap = (1, 0, 2, 3, 4)
    s5 = PermGroup(5, [rot, swap])
    stab = s5.point_stabilizer(0)
    assert stab.orbits() == [[0], [1, 2, 3, 4]]
    assert stab.order() == 24


def test_point_stabilizer_against_brute_force():
    gens = [(1, 2, 0, 4, 3), (0, 1, 2, 4, 3)]
    g = PermGroup(5, gens)
    elems = g.elements()
    brute = {p for p in elems if p[0] == 0}
    stab = g.point_stabilizer(0)
    assert stab.elements() <= elems
    assert {p for p in elems if p[0] == 0} == \
        set(PermGroup(5, brute).elements()) if brute != {identity_perm(5)} \
        else stab.order() == 1
    assert stab.order() == len(brute)


def test_orbits_domain_invariance():
    g = PermGroup(4, [(1, 0, 2, 3)])
    assert g.orbits([0, 1]) == [[0, 1]]
    with pytest.raises(PermGroupError):
        g.orbits([0, 2])
