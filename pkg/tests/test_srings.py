import itertools
import math

import pytest

from schurkit.constructions import group_ring, trivial_sring, tensor_sring, wreath_sring
from schurkit.groups import Subgroup, all_subgroups, make_group, subgroup_generated
from schurkit.srings import (
    SRingError,
    a_subgroups,
    coset_intersection_size,
    is_a_subgroup,
    is_dense,
    least_a_subgroup,
    make_sring,
    maximal_a_subgroups_in,
    quotient_of,
    quotient_sring,
    rational_conjugate,
    restrict_sring,
    set_radical,
    sring_from_json,
    sring_radical,
    sring_radical_3k,
    structure_constant,
)

from conftest import shared_enumeration, shared_group


def k1_ring():
    from schurkit.classify import table1_rings
    return table1_rings(shared_group(4, 2))["K1"]


def test_make_sring_group_ring_and_trivial():
    C4 = make_group([4])
    Z = make_sring(C4, [(0,), (1,), (2,), (3,)])
    assert Z.rank == 4
    T = make_sring(C4, [(0,), (1, 2, 3)])
    assert T.rank == 2


def test_make_sring_rejects_non_inverse_closed():
    C4 = make_group([4])
    with pytest.raises(SRingError) as err:
        make_sring(C4, [(0,), (1, 2), (3,)])
    assert err.value.kind == "not-inverse-closed"


def test_make_sring_rejects_bad_partition():
    C4 = make_group([4])
    with pytest.raises(SRingError) as err:
        make_sring(C4, [(0,), (1, 3)])
    assert err.value.kind == "not-a-partition"
    with pytest.raises(SRingError) as err:
        make_sring(C4, [(0, 2), (1, 3)])
    assert err.value.kind == "identity-not-singleton"


def test_make_sring_rejects_module_closure_violation():
    C8 = make_group([8])
    # inverse-closed but not a subring: {1,7} * {1,7} hits 2 and 6 but not 0's
    # classmates consistently
    with pytest.raises(SRingError) as err:
        make_sring(C8, [(0,), (1, 7), (2, 3, 5, 6), (4,)])
    assert err.value.kind == "module-closure"


def _naive_valid(G, classes):
    """Independent axiom checker via full indicator-vector products."""
    classes = [tuple(sorted(c)) for c in classes]
    if sorted(x for c in classes for x in c) != list(range(G.order)):
        return False
    if (0,) not in classes:
        return False
    class_sets = [frozenset(c) for c in classes]
    for c in classes:
        if frozenset(G.inv(x) for x in c) not in class_sets:
            return False
    for ci in classes:
        for cj in classes:
            vec = [0] * G.order
            for x in ci:
                for y in cj:
                    vec[G.mul(x, y)] += 1
            for c in classes:
                if len({vec[z] for z in c}) != 1:
                    return False
    return True


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


@pytest.mark.parametrize("factors", [[4], [5], [6], [2, 2], [7], [8], [4, 2]])
def test_validation_matches_naive_checker(factors):
    G = make_group(factors)
    for partition in _set_partitions(list(range(1, G.order))):
        classes = [(0,)] + [tuple(p) for p in partition]
        try:
            make_sring(G, classes)
            accepted = True
        except SRingError:
            accepted = False
        assert accepted == _naive_valid(G, classes)


def test_structure_constants():
    C4 = make_group([4])
    Z = group_ring(C4)
    for i in range(4):
        for j in range(4):
            for k in range(4):
                expect = 1 if C4.mul(i, j) == k else 0
                assert structure_constant(Z, i, j, k) == expect
    for n in (5, 6, 8):
        G = make_group([n])
        T = trivial_sring(G)
        assert structure_constant(T, 1, 1, 1) == n - 2
    A = k1_ring()
    G = A.group
    x_idx = A.class_of[G.index((0, 1))]
    assert structure_constant(A, x_idx, x_idx, 0) == 2


def test_a_subgroups():
    G = shared_group(4, 2)
    Z = group_ring(G)
    assert len(a_subgroups(Z)) == len(all_subgroups(G))
    T = trivial_sring(G)
    assert [H.order for H in a_subgroups(T)] == [1, 8]
    A = k1_ring()
    orders = [H.order for H in a_subgroups(A)]
    a_span = subgroup_generated(G, [G.index((1, 0))])
    assert a_span in a_subgroups(A)


def test_least_and_maximal_a_subgroups():
    G = shared_group(4, 2)
    T = trivial_sring(G)
    assert least_a_subgroup(T, {0}).order == 1
    assert least_a_subgroup(T, {3}).order == 8
    A = k1_ring()
    H = subgroup_generated(G, [G.index((1, 0))])
    assert maximal_a_subgroups_in(A, H) == [H]


def test_set_radical():
    G = shared_group(4, 2)
    assert set_radical(G, [0]).order == 1
    for n in (3, 5, 8):
        H = make_group([n])
        # brute check that only e stabilizes the set of non-identity elements
        rad = set_radical(H, range(1, n))
        assert rad.elements == {0}
    L = subgroup_generated(G, [G.index((2, 0))])
    coset = [G.mul(G.index((0, 1)), l) for l in L.elements]
    assert set_radical(G, coset) == L
    with pytest.raises(SRingError):
        set_radical(G, [])


def test_rational_conjugate():
    C5 = make_group([5])
    A = make_sring(C5, [(0,), (1, 4), (2, 3)])
    i = A.class_of[1]
    assert rational_conjugate(A, i, 1) == i
    assert rational_conjugate(A, i, -1) == i
    assert A.classes[rational_conjugate(A, i, 2)] == (2, 3)
    with pytest.raises(SRingError):
        rational_conjugate(A, i, 5)


def test_burnside_closure_on_enumerated_rings():
    for factors in ([8], [4, 2], [2, 2, 3], [9]):
        G = shared_group(*factors)
        for A in shared_enumeration(*factors).srings:
            for m in range(1, G.exponent + 1):
                if math.gcd(m, G.order) != 1:
                    continue
                image = sorted(rational_conjugate(A, i, m)
                               for i in range(A.rank))
                assert image == list(range(A.rank))


def test_restrict():
    G = shared_group(4, 2)
    A = k1_ring()
    full = Subgroup(G, frozenset(range(8)))
    assert restrict_sring(A, full) == A
    trivial = subgroup_generated(G, [])
    assert restrict_sring(A, trivial).rank == 1
    T = trivial_sring(G)
    assert restrict_sring(T, full) == T
    b_span = subgroup_generated(G, [G.index((0, 1))])
    with pytest.raises(SRingError):
        restrict_sring(A, b_span)


def test_quotient_sring():
    G = shared_group(4, 2)
    A = k1_ring()
    trivial = subgroup_generated(G, [])
    assert quotient_sring(A, trivial).rank == A.rank
    full = Subgroup(G, frozenset(range(8)))
    assert quotient_sring(A, full).rank == 1
    A0 = subgroup_generated(G, [G.index((2, 0))])
    Q = quotient_sring(A, A0)
    assert Q.group.invariant_factors == (2, 2)
    # oracle: push the six classes through the projection and dedupe; every
    # nontrivial class maps onto a single coset, so the quotient is Z E4
    G_elems = {i: G.coords(i) for i in G.elements()}
    proj_images = set()
    quot = quotient_of(G, A0)
    for c in A.classes:
        proj_images.add(frozenset(quot.projection[x] for x in c))
    assert Q.rank == len(proj_images) == 4
    assert Q.is_group_ring()


def test_coset_intersection_size():
    G = shared_group(4, 2)
    A = k1_ring()
    a_span = subgroup_generated(G, [G.index((1, 0))])
    i = A.class_of[G.index((1, 0))]
    # class inside H: the common size is the class size
    assert coset_intersection_size(A, i, a_span) == 1
    j = A.class_of[G.index((0, 1))]
    assert coset_intersection_size(A, j, a_span) == 2
    # constancy across x holds for every A-subgroup of every enumerated ring
    for A2 in shared_enumeration(4, 2).srings:
        for H in a_subgroups(A2):
            for k in range(A2.rank):
                coset_intersection_size(A2, k, H)


def test_sring_radical():
    G = shared_group(3, 9)
    Z = group_ring(G)
    assert sring_radical_3k(Z).order == 1
    T = trivial_sring(G)
    assert sring_radical_3k(T).order == 1
    # wreath with top classes full L-cosets has radical >= L
    L = subgroup_generated(G, [G.index((1, 0))])
    bottom = group_ring(L.as_group.group)
    top = trivial_sring(quotient_of(G, L).group)
    W = wreath_sring(bottom, top, G, L)
    assert L.elements <= sring_radical_3k(W).elements
    with pytest.raises(SRingError):
        sring_radical_3k(group_ring(make_group([4, 2])))


def test_is_dense():
    G = shared_group(4, 6)
    from schurkit.groups import sylow_subgroup
    H = sylow_subgroup(G, 2)
    P = sylow_subgroup(G, 3)
    assert is_dense(group_ring(G), H, P)
    assert not is_dense(trivial_sring(G), H, P)
    tensored = tensor_sring(group_ring(make_group([4, 2])),
                            trivial_sring(make_group([3])))
    G2 = tensored.group
    H2 = sylow_subgroup(G2, 2)
    P2 = sylow_subgroup(G2, 3)
    assert is_dense(tensored, H2, P2)
    with pytest.raises(SRingError):
        is_dense(group_ring(G), H, H)


def test_json_round_trip_and_recanonicalization():
    A = k1_ring()
    doc = A.to_json()
    assert sring_from_json(doc) == A
    shuffled = {"group": doc["group"], "classes": doc["classes"][::-1]}
    with pytest.warns(UserWarning):
        B = sring_from_json(shuffled)
    assert B == A
