import pytest

from schurkit.classify import automorphism_from_generator_images, table1_rings
from schurkit.constructions import (
    SubdirectSpec,
    canonical_psi,
    cosets_of,
    cyclotomic_polynomial_cached,
    cyclotomic_sring,
    decompose_outside_class,
    detect_cyclotomic,
    detect_generalized_wreath,
    detect_tensor,
    dual_sring,
    generalized_wreath_sring,
    group_ring,
    is_tensor_decomposition,
    subdirect_product_group,
    tensor_complement,
    tensor_sring,
    trivial_sring,
    wreath_sring,
)
from schurkit.groups import (
    Section,
    Subgroup,
    all_subgroups,
    automorphism_group,
    make_group,
    orthogonal_complement,
    subgroup_generated,
    sylow_subgroup,
)
from schurkit.perms import PermGroup, identity_perm
from schurkit.srings import (
    SRingError,
    a_subgroups,
    is_a_subgroup,
    quotient_of,
    restrict_sring,
    set_radical,
)

from conftest import shared_enumeration, shared_group


def test_trivial_sring():
    assert trivial_sring(make_group([2])).classes == ((0,), (1,))
    assert trivial_sring(make_group([4])).classes == ((0,), (1, 2, 3))
    assert trivial_sring(make_group([])).rank == 1


def test_cyclotomic_examples():
    G = shared_group(4, 2)
    assert cyclotomic_sring(PermGroup.trivial(8), G).is_group_ring()
    aut = automorphism_group(G)
    rational = cyclotomic_sring(aut, G)
    # oracle: orbits by direct closure over the fully enumerated group
    expected = set()
    for x in G.elements():
        expected.add(tuple(sorted({g[x] for g in aut.elements()})))
    assert set(rational.classes) == expected
    assert (G.index((2, 0)),) in rational.classes
    with pytest.raises(SRingError):
        cyclotomic_sring(PermGroup(8, [(1, 0, 2, 3, 4, 5, 6, 7)]), G)


def test_table1_k1_is_wreath_of_zc4_and_ze4():
    G = shared_group(4, 2)
    A1 = table1_rings(G)["K1"]
    a = G.index((1, 0))
    U = subgroup_generated(G, [a])
    L = subgroup_generated(G, [G.index((2, 0))])
    built = generalized_wreath_sring(
        group_ring(U.as_group.group),
        group_ring(quotient_of(G, L).group),
        G, Section(U=U, L=L))
    assert built == A1


def test_table1_k2_k3_are_iterated_wreaths():
    for factors, name in (((4, 2), "K2"), ((2, 2, 2), "K3")):
        G = shared_group(*factors)
        A = table1_rings(G)[name]
        # read the chain L < U < G off the ring's subgroup lattice
        subs = a_subgroups(A)
        L = next(H for H in subs if H.order == 2)
        U = next(H for H in subs if H.order == 4)
        inner = wreath_sring(group_ring(L.as_group.group),
                             group_ring(quotient_of(U.as_group.group,
                                                    _inside(U, L)).group),
                             U.as_group.group, _inside(U, L))
        outer = wreath_sring(inner,
                             group_ring(quotient_of(G, U).group), G, U)
        assert outer == A


def _inside(U, L):
    view = U.as_group
    return Subgroup(view.group,
                    frozenset(view.from_parent[x] for x in L.elements))


def test_tensor_examples():
    Z6 = tensor_sring(group_ring(make_group([2])), group_ring(make_group([3])))
    assert Z6.is_group_ring()
    TT = tensor_sring(trivial_sring(make_group([2])),
                      trivial_sring(make_group([2])))
    assert TT.rank == 4
    for A in shared_enumeration(4).srings:
        for B in shared_enumeration(3).srings:
            assert tensor_sring(A, B).rank == A.rank * B.rank


def test_wreath_examples():
    C4 = make_group([4])
    L = subgroup_generated(C4, [2])
    W = wreath_sring(group_ring(L.as_group.group),
                     group_ring(quotient_of(C4, L).group), C4, L)
    assert W.classes == ((0,), (1, 3), (2,))
    # every class outside L has radical containing L
    for c in W.classes:
        if not set(c) <= L.elements:
            assert L.elements <= set_radical(C4, c).elements


def test_generalized_wreath_collapses():
    C4 = make_group([4])
    L = subgroup_generated(C4, [2])
    W = generalized_wreath_sring(
        group_ring(L.as_group.group),
        group_ring(quotient_of(C4, L).group),
        C4, Section(U=L, L=L))
    assert W.classes == ((0,), (1, 3), (2,))


def test_generalized_wreath_incompatible():
    C4 = make_group([4])
    L = subgroup_generated(C4, [2])
    with pytest.raises(SRingError):
        generalized_wreath_sring(
            trivial_sring(L.as_group.group),
            group_ring(quotient_of(C4, L).group),
            C4, Section(U=L, L=L))


def test_dual_extremes():
    for factors in ([6], [4, 2], [3, 3]):
        G = make_group(factors)
        assert dual_sring(group_ring(G)).is_group_ring()
        assert dual_sring(trivial_sring(G)).is_trivial()


def test_dual_subgroup_correspondence():
    for factors in ([4, 2], [2, 2, 3], [3, 3]):
        G = shared_group(*factors)
        for A in shared_enumeration(*factors).srings:
            D = dual_sring(A)
            for H in all_subgroups(G):
                assert is_a_subgroup(A, H) == \
                    is_a_subgroup(D, orthogonal_complement(H))


def test_dual_exchanges_wreath_sections():
    for factors in ([8], [4, 2], [2, 2, 3], [12]):
        G = shared_group(*factors)
        for A in shared_enumeration(*factors).srings:
            D = dual_sring(A)
            sections = detect_generalized_wreath(A)
            dual_sections = {(s.U.elements, s.L.elements)
                             for s in detect_generalized_wreath(D)}
            for s in sections:
                flipped = (orthogonal_complement(s.L).elements,
                           orthogonal_complement(s.U).elements)
                assert flipped in dual_sections
            assert (detect_tensor(A) is None) == (detect_tensor(D) is None)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial_cached(1) == [-1, 1]
    assert cyclotomic_polynomial_cached(4) == [1, 0, 1]
    assert cyclotomic_polynomial_cached(6) == [1, -1, 1]
    assert cyclotomic_polynomial_cached(12) == [1, 0, -1, 0, 1]


def test_subdirect_product_orders():
    G4 = make_group([4])
    aut4 = automorphism_group(G4)
    triv4 = PermGroup.trivial(4)
    G3 = make_group([3])
    aut3 = automorphism_group(G3)
    triv3 = PermGroup.trivial(3)
    # trivial quotients: full direct product
    spec = SubdirectSpec(aut4, aut4, aut3, aut3,
                         canonical_psi(aut4, aut4, aut3, aut3))
    assert subdirect_product_group(spec).order() == 4
    # index-2 quotients on both sides
    spec2 = SubdirectSpec(aut4, triv4, aut3, triv3,
                          canonical_psi(aut4, triv4, aut3, triv3))
    K = subdirect_product_group(spec2)
    assert K.order() == aut4.order() * aut3.order() // 2


def test_subdirect_order7_dense_decomposition():
    # order-7 automorphism of E8 paired with the order-7 subgroup of Aut(C29)
    G = make_group([2, 2, 2, 29])
    E8 = make_group([2, 2, 2])
    s7 = automorphism_from_generator_images(E8, [(0, 1, 0), (0, 0, 1), (1, 1, 0)])
    KH = PermGroup(8, [s7])
    assert KH.order() == 7
    g = pow(2, 4, 29)
    tau = tuple((g * x) % 29 for x in range(29))
    KP = PermGroup(29, [tau])
    assert KP.order() == 7
    # coset pairing by matched powers of the generators
    pow_h, cur = {}, identity_perm(8)
    for k in range(7):
        pow_h[k] = frozenset([cur])
        cur = tuple(s7[i] for i in cur)
    pow_p, cur = {}, identity_perm(29)
    for k in range(7):
        pow_p[k] = frozenset([cur])
        cur = tuple(tau[i] for i in cur)
    psi = {pow_h[k]: pow_p[k] for k in range(7)}
    K = subdirect_product_group(
        SubdirectSpec(KH, PermGroup.trivial(8), KP, PermGroup.trivial(29), psi))
    assert K.order() == 7
    A = cyclotomic_sring(K, G)
    H = sylow_subgroup(G, 2)
    P = sylow_subgroup(G, 29)
    outside = [i for i, X in enumerate(A.classes)
               if not set(X) & (H.elements | P.elements)]
    d = decompose_outside_class(A, outside[0], H, P)
    assert d.block_size_H == 1
    assert len(d.blocks_P) == 7
    assert d.K_P.order() // d.K_P0.order() == 7


def test_decompose_product_shaped_class():
    A = tensor_sring(trivial_sring(make_group([4, 2])),
                     trivial_sring(make_group([3])))
    G = A.group
    H = sylow_subgroup(G, 2)
    P = sylow_subgroup(G, 3)
    i = next(i for i, X in enumerate(A.classes)
             if not set(X) & (H.elements | P.elements))
    d = decompose_outside_class(A, i, H, P)
    assert len(d.blocks_H) == 1
    assert d.block_size_H == 7


def test_detect_cyclotomic_examples():
    G = shared_group(4, 2)
    assert detect_cyclotomic(group_ring(G)).order() == 1
    assert detect_cyclotomic(trivial_sring(G)) is None
    for A in shared_enumeration(2, 2, 2).srings:
        assert detect_cyclotomic(A) is not None


def test_detect_tensor_examples():
    C6 = make_group([6])
    assert detect_tensor(group_ring(C6)) is not None
    assert detect_tensor(trivial_sring(C6)) is None
    A = tensor_sring(trivial_sring(make_group([2])),
                     trivial_sring(make_group([3])))
    got = detect_tensor(A)
    assert got is not None and {got[0].order, got[1].order} == {2, 3}


def test_detect_generalized_wreath_examples():
    C4 = make_group([4])
    L = subgroup_generated(C4, [2])
    W = wreath_sring(group_ring(L.as_group.group),
                     group_ring(quotient_of(C4, L).group), C4, L)
    sections = detect_generalized_wreath(W)
    assert any(s.U == L and s.L == L for s in sections)
    assert detect_generalized_wreath(group_ring(C4)) == []
    G = shared_group(4, 2)
    A1 = table1_rings(G)["K1"]
    a_span = subgroup_generated(G, [G.index((1, 0))])
    a0 = subgroup_generated(G, [G.index((2, 0))])
    assert any(s.U == a_span and s.L == a0
               for s in detect_generalized_wreath(A1))


def test_detector_round_trips():
    for fa, fb in (([4], [2]), ([2], [2, 2]), ([3], [4])):
        for A in shared_enumeration(*fa).srings:
            for B in shared_enumeration(*fb).srings:
                T = tensor_sring(A, B)
                assert detect_tensor(T) is not None
    C9 = make_group([9])
    L = subgroup_generated(C9, [3])
    for bottom in shared_enumeration(3).srings:
        for top in shared_enumeration(3).srings:
            W = wreath_sring(_over(bottom, L.as_group.group),
                             _over(top, quotient_of(C9, L).group), C9, L)
            assert any(s.L.elements <= L.elements or L.elements <= s.L.elements
                       for s in detect_generalized_wreath(W))
    G = shared_group(4, 2)
    for K_gens in ([], [automorphism_from_generator_images(G, [(1, 0), (2, 1)])]):
        K = PermGroup(8, K_gens)
        A = cyclotomic_sring(K, G)
        Kstar = detect_cyclotomic(A)
        assert Kstar is not None
        assert K.is_subgroup_of(Kstar)
        assert Kstar.orbits() == [list(c) for c in A.classes]


def _over(A, target_group):
    from schurkit.srings import SRing
    assert A.group.invariant_factors == target_group.invariant_factors
    if A.group.factors == target_group.factors:
        return SRing(target_group, A.classes, _validated=True)
    raise AssertionError("test helper needs matching factor lists")


def test_tensor_complement():
    A = tensor_sring(group_ring(make_group([4])), trivial_sring(make_group([3])))
    G = A.group
    left = sylow_subgroup(G, 2)
    right = sylow_subgroup(G, 3)
    full = Subgroup(G, frozenset(range(G.order)))
    got = tensor_complement(A, left, full)
    assert got is not None and got.elements == right.elements
    trivial = subgroup_generated(G, [])
    assert tensor_complement(A, trivial, full).elements == full.elements
    T = trivial_sring(make_group([4, 2]))
    G2 = T.group
    full2 = Subgroup(G2, frozenset(range(8)))
    assert tensor_complement(T, full2, full2) is not None
    # no proper nontrivial A-subgroups: no complement for a proper L
    with pytest.raises(SRingError):
        tensor_complement(T, subgroup_generated(G2, [G2.index((2, 0))]), full2)


def test_wreath_radical_invariant():
    for factors in ([8], [4, 2]):
        G = shared_group(*factors)
        for L in all_subgroups(G):
            if L.order in (1, G.order):
                continue
            for bottom in shared_enumeration(*L.as_group.group.factors).srings:
                Q = quotient_of(G, L)
                for top in shared_enumeration(*Q.group.factors).srings:
                    W = wreath_sring(_over(bottom, L.as_group.group),
                                     _over(top, Q.group), G, L)
                    for c in W.classes:
                        if not set(c) <= L.elements:
                            assert L.elements <= set_radical(G, c).elements
