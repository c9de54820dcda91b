"""S-ring constructions and structural-decomposition detectors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .groups import (
    AbelianGroup,
    Section,
    Subgroup,
    all_subgroups,
    automorphism_group,
    make_group,
    pairing_exponent,
    partition_stabilizer,
    subgroup_generated,
    trivial_subgroup,
)
from .perms import Perm, PermGroup, PermGroupError, compose, identity_perm
from .srings import (
    SRing,
    SRingError,
    a_subgroups,
    is_a_subgroup,
    quotient_of,
    restrict_sring,
    set_radical,
    trivial_classes,
)


# -- basic constructions -------------------------------------------------------


def trivial_sring(G: AbelianGroup) -> SRing:
    """Classes {e} and G \\ {e} (one class for the trivial group)."""
    return SRing(G, trivial_classes(G), _validated=True)


def group_ring(G: AbelianGroup) -> SRing:
    return SRing(G, [(x,) for x in G.elements()], _validated=True)


def is_automorphism(G: AbelianGroup, p: Sequence[int]) -> bool:
    if p[0] != 0:
        return False
    n = G.order
    return all(p[G.mul(a, b)] == G.mul(p[a], p[b])
               for a in range(n) for b in range(n))


def cyclotomic_sring(K: PermGroup, G: AbelianGroup) -> SRing:
    """cyc(K, G): basic sets are the orbits of K <= Aut(G)."""
    if K.degree != G.order:
        raise SRingError("non-automorphism", "degree does not match group order")
    for g in K.generators:
        if not is_automorphism(G, g):
            raise SRingError("non-automorphism",
                             "generator is not a group automorphism")
    return SRing(G, K.orbits())


def tensor_sring(A: SRing, B: SRing) -> SRing:
    """Tensor product over G1 x G2: classes are products of classes."""
    G1, G2 = A.group, B.group
    G = make_group(G1.factors + G2.factors)
    n2 = G2.order
    classes = []
    for X in A.classes:
        for Y in B.classes:
            classes.append(tuple(sorted(x * n2 + y for x in X for y in Y)))
    return SRing(G, classes)


def wreath_sring(bottom: SRing, top: SRing, G: AbelianGroup, L: Subgroup) -> SRing:
    """Wreath product over L <= G: the classes of `bottom` inside L together
    with the full preimages of the nontrivial classes of `top` over G/L."""
    view = L.as_group
    if bottom.group.factors != view.group.factors:
        raise SRingError("group-mismatch", "bottom ring is not over L")
    Q = quotient_of(G, L)
    if top.group.factors != Q.group.factors:
        raise SRingError("group-mismatch", "top ring is not over G/L")
    classes = [tuple(sorted(view.to_parent[x] for x in X))
               for X in bottom.classes]
    for Y in top.classes:
        if Y == (0,):
            continue
        classes.append(tuple(sorted(Q.preimage(Y))))
    return SRing(G, classes)


def generalized_wreath_sring(A_U: SRing, A_quot: SRing, G: AbelianGroup,
                             section: Section) -> SRing:
    """S-wreath product over the section U/L.

    The two inputs must agree on the section (restriction of the quotient ring
    to U/L equals the quotient of A_U by L).  The result is validated; the
    compatibility condition is treated as necessary, not sufficient.
    """
    U, L = section.U, section.L
    uview = U.as_group
    if A_U.group.factors != uview.group.factors:
        raise SRingError("group-mismatch", "first ring is not over U")
    Q = quotient_of(G, L)
    if A_quot.group.factors != Q.group.factors:
        raise SRingError("group-mismatch", "second ring is not over G/L")
    U_quot = Subgroup(Q.group, frozenset(Q.projection[x] for x in U.elements))
    if not is_a_subgroup(A_quot, U_quot):
        raise SRingError("incompatible-on-section",
                         "U/L is not a subgroup of the quotient ring")
    # compare the two induced partitions of U/L through canonical coset reps
    lset = L.elements
    mul = G.mul

    def coset_rep(x: int) -> int:
        return min(mul(x, l) for l in lset)

    from_A_U = {frozenset(coset_rep(uview.to_parent[x]) for x in X)
                for X in A_U.classes}
    from_quot = set()
    for Y in A_quot.classes:
        if set(Y) <= set(U_quot.elements):
            from_quot.add(frozenset(coset_rep(x) for x in Q.preimage(Y)))
    if from_A_U != from_quot:
        raise SRingError("incompatible-on-section",
                         "the two rings disagree on the section U/L")
    classes = [tuple(sorted(uview.to_parent[x] for x in X))
               for X in A_U.classes]
    u_cosets = {Q.projection[x] for x in U.elements}
    for Y in A_quot.classes:
        if set(Y) <= u_cosets:
            continue
        classes.append(tuple(sorted(Q.preimage(Y))))
    try:
        return SRing(G, classes)
    except SRingError as exc:
        raise SRingError("result-fails-axioms",
                         f"section compatibility held but closure failed: {exc}")


# -- duality ---------------------------------------------------------------------


def cyclotomic_polynomial(m: int) -> list[int]:
    """Coefficients of Phi_m (ascending), by exact division of x^m - 1."""
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_div_exact(poly, cyclotomic_polynomial_cached(d))
    return poly


_CYCLO_CACHE: dict[int, list[int]] = {}


def cyclotomic_polynomial_cached(m: int) -> list[int]:
    if m not in _CYCLO_CACHE:
        _CYCLO_CACHE[m] = cyclotomic_polynomial(m)
    return _CYCLO_CACHE[m]


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        if c % den[-1] != 0:
            raise ArithmeticError("inexact polynomial division")
        q = c // den[-1]
        out[i] = q
        for j, d in enumerate(den):
            num[i + j] -= q * d
    if any(num):
        raise ArithmeticError("nonzero remainder in exact polynomial division")
    return out


def _reduce_mod_cyclotomic(counts: Sequence[int], m: int) -> tuple[int, ...]:
    """Reduce sum_j counts[j] x^j modulo Phi_m; the result is a canonical
    representative of the cyclotomic integer sum_j counts[j] zeta^j."""
    phi = cyclotomic_polynomial_cached(m)
    deg = len(phi) - 1
    work = list(counts)
    for i in range(len(work) - 1, deg - 1, -1):
        c = work[i]
        if c == 0:
            continue
        # phi is monic: x^i = -sum_{j<deg} phi[j] x^(i-deg+j)
        work[i] = 0
        for j in range(deg):
            work[i - deg + j] -= c * phi[j]
    return tuple(work[:deg])


def character_sum_key(A: SRing, chi: int) -> tuple:
    """Exact values of chi summed over each basic set, as reduced polynomials."""
    G = A.group
    m = G.exponent
    out = []
    for X in A.classes:
        counts = [0] * max(m, 1)
        for x in X:
            counts[pairing_exponent(G, chi, x)] += 1
        out.append(_reduce_mod_cyclotomic(counts, m) if m > 1 else tuple(counts))
    return tuple(out)


def dual_sring(A: SRing) -> SRing:
    """The dual S-ring on the character group (identified with G).

    Characters share a class iff their sums agree on every basic set; equality
    of character sums is decided exactly in Z[x]/Phi_m(x).
    """
    G = A.group
    buckets: dict[tuple, list[int]] = {}
    for chi in G.elements():
        buckets.setdefault(character_sum_key(A, chi), []).append(chi)
    return SRing(G, [tuple(sorted(v)) for v in buckets.values()])


# -- subdirect products of automorphism groups -----------------------------------


@dataclass
class SubdirectSpec:
    """Data for the fibered product of K1 <= Aut(G1) and K2 <= Aut(G2) over
    isomorphic quotients K1/K1_0 and K2/K2_0 given by an explicit coset pairing."""

    K1: PermGroup
    K1_0: PermGroup
    K2: PermGroup
    K2_0: PermGroup
    psi: dict[frozenset[Perm], frozenset[Perm]]

    def validate(self) -> None:
        for K, K0, label in ((self.K1, self.K1_0, "K1"), (self.K2, self.K2_0, "K2")):
            if not K0.is_subgroup_of(K):
                raise PermGroupError(f"{label}_0 is not a subgroup of {label}")
        c1 = cosets_of(self.K1, self.K1_0)
        c2 = cosets_of(self.K2, self.K2_0)
        if len(c1) != len(c2):
            raise PermGroupError("quotients have different orders")
        if set(self.psi.keys()) != set(c1) or set(self.psi.values()) != set(c2):
            raise PermGroupError("psi is not a bijection between the cosets")
        ident1 = coset_of(identity_perm(self.K1.degree), c1)
        ident2 = coset_of(identity_perm(self.K2.degree), c2)
        if self.psi[ident1] != ident2:
            raise PermGroupError("psi does not map identity coset to identity coset")
        for a in c1:
            for b in c1:
                ab = coset_of(compose(next(iter(a)), next(iter(b))), c1)
                image = coset_of(
                    compose(next(iter(self.psi[a])), next(iter(self.psi[b]))), c2)
                if self.psi[ab] != image:
                    raise PermGroupError("psi does not respect coset products")


def cosets_of(K: PermGroup, K0: PermGroup) -> list[frozenset[Perm]]:
    """Cosets K0*g of K0 in K, identity coset first, then by sorted minimum."""
    elems = sorted(K.elements())
    done: set[Perm] = set()
    base = K0.elements()
    out = []
    ident = identity_perm(K.degree)
    for g in [ident] + elems:
        if g in done:
            continue
        coset = frozenset(compose(h, g) for h in base)
        done |= coset
        out.append(coset)
    return out


def coset_of(g: Perm, cosets: Sequence[frozenset[Perm]]) -> frozenset[Perm]:
    for c in cosets:
        if g in c:
            return c
    raise PermGroupError("element lies in no coset")


def canonical_psi(K1: PermGroup, K1_0: PermGroup,
                  K2: PermGroup, K2_0: PermGroup) -> dict:
    """A coset pairing for quotient order <= 3, where any identity-preserving
    bijection of the cyclic quotients is an isomorphism."""
    c1 = cosets_of(K1, K1_0)
    c2 = cosets_of(K2, K2_0)
    if len(c1) != len(c2) or len(c1) > 3:
        raise PermGroupError("canonical psi needs equal quotient orders <= 3")
    return dict(zip(c1, c2))


def subdirect_product_group(spec: SubdirectSpec) -> PermGroup:
    """{(s, t) : psi(s K1_0) = t K2_0} acting coordinatewise on G1 x G2."""
    spec.validate()
    n1 = spec.K1.degree
    n2 = spec.K2.degree
    c1 = cosets_of(spec.K1, spec.K1_0)
    perms = []
    for s in sorted(spec.K1.elements()):
        target = spec.psi[coset_of(s, c1)]
        for t in sorted(target):
            perms.append(tuple(s[x] * n2 + t[y]
                               for x in range(n1) for y in range(n2)))
    K = PermGroup(n1 * n2, perms)
    K._element_cache = frozenset(perms)
    return K


# -- decomposition detectors ------------------------------------------------------


@dataclass
class Decomposition:
    """Outcome of a structural detector, with re-validatable witnesses."""

    kind: str
    cyclotomic_group: Optional[PermGroup] = None
    tensor_factors: Optional[tuple[Subgroup, Subgroup]] = None
    sections: list[Section] = field(default_factory=list)
    complement: Optional[Subgroup] = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.cyclotomic_group is not None:
            out["aut_generators"] = [list(g) for g in
                                     self.cyclotomic_group.generators]
        if self.tensor_factors is not None:
            out["factors"] = [sorted(H.elements) for H in self.tensor_factors]
        if self.sections:
            out["sections"] = [{"U": sorted(s.U.elements),
                                "L": sorted(s.L.elements)} for s in self.sections]
        if self.complement is not None:
            out["complement"] = sorted(self.complement.elements)
        return out


def detect_cyclotomic(A: SRing) -> Optional[PermGroup]:
    """The largest K <= Aut(G) fixing every class; returned iff its orbits are
    exactly the classes.  Any K with orb(K) = classes lies in this stabilizer,
    so the test is exact."""
    aut = automorphism_group(A.group)
    K = partition_stabilizer(aut, A.classes)
    if [list(c) for c in A.classes] == K.orbits():
        return K
    return None


def detect_tensor(A: SRing) -> Optional[tuple[Subgroup, Subgroup]]:
    """Proper nontrivial A-subgroups G1, G2 with G = G1 x G2 and
    A = A_G1 (x) A_G2, if any; factors ordered by (order, element set)."""
    G = A.group
    subs = a_subgroups(A)
    for i, H1 in enumerate(subs):
        if H1.order in (1, G.order):
            continue
        for H2 in subs[i:]:
            if H2.order in (1, G.order):
                continue
            if H1.order * H2.order != G.order:
                continue
            if H1.elements & H2.elements != {0}:
                continue
            if is_tensor_decomposition(A, H1, H2):
                return (H1, H2)
    return None


def is_tensor_decomposition(A: SRing, H1: Subgroup, H2: Subgroup) -> bool:
    """Whether every class is X_H1 x X_H2 for classes of the restrictions."""
    G = A.group
    mul = G.mul
    pair_index: dict[tuple[int, int], int] = {}
    for a in H1.members:
        for b in H2.members:
            pair_index[(a, b)] = mul(a, b)
    decomp: dict[int, tuple[int, int]] = {v: k for k, v in pair_index.items()}
    if len(decomp) != G.order:
        return False
    for X in A.classes:
        parts = [decomp[x] for x in X]
        p1 = {a for a, _ in parts}
        p2 = {b for _, b in parts}
        if len(p1) * len(p2) != len(X):
            return False
        if {pair_index[(a, b)] for a in p1 for b in p2} != set(X):
            return False
        # projections must themselves be classes (of the restrictions)
        if set(A.classes[A.class_of[next(iter(p1))]]) != p1:
            return False
        if set(A.classes[A.class_of[next(iter(p2))]]) != p2:
            return False
    return True


def detect_generalized_wreath(A: SRing) -> list[Section]:
    """All nontrivial sections U/L ({e} < L <= U < G, both A-subgroups) with
    L <= rad(X) for every class X outside U, sorted canonically."""
    G = A.group
    subs = a_subgroups(A)
    out = []
    for L in subs:
        if L.order == 1 or L.order == G.order:
            continue
        Lset = L.elements
        hull: set[int] = {0}
        ok = True
        for i, X in enumerate(A.classes):
            if Lset <= A.class_radicals[i]:
                continue
            hull.update(X)
        hull_sub = subgroup_generated(G, hull)
        if hull_sub.order == G.order:
            continue
        for U in subs:
            if U.order == G.order:
                continue
            if hull_sub.elements <= U.elements and Lset <= U.elements:
                out.append(Section(U=U, L=L))
    out.sort(key=lambda s: (s.L.order, s.L.members, s.U.order, s.U.members))
    return out


def tensor_complement(A: SRing, L: Subgroup, U: Subgroup) -> Optional[Subgroup]:
    """M <= U with U = L x M, M an A-subgroup, and A_U = A_L (x) A_M, if any."""
    if not (is_a_subgroup(A, L) and is_a_subgroup(A, U)) or not L <= U:
        raise SRingError("not-a-subgroup", "L and U must be nested A-subgroups")
    A_U = restrict_sring(A, U)
    uview = U.as_group
    L_in_U = Subgroup(uview.group,
                      frozenset(uview.from_parent[x] for x in L.elements))
    for M_in_U in a_subgroups(A_U):
        if M_in_U.order * L_in_U.order != U.order:
            continue
        if M_in_U.elements & L_in_U.elements != {0}:
            continue
        if is_tensor_decomposition(A_U, L_in_U, M_in_U) or (
                L_in_U.order == 1 and M_in_U.order == U.order) or (
                M_in_U.order == 1 and L_in_U.order == U.order):
            return Subgroup(A.group,
                            frozenset(uview.to_parent[x]
                                      for x in M_in_U.elements))
    return None


# -- dense basic-set decomposition -------------------------------------------------


@dataclass
class OutsideClassDecomposition:
    """Fiber structure X = union of Delta x Delta^phi over uniform partitions.

    Blocks are in parent-group coordinates; K_P and K_P0 act on the abstract
    re-indexing of P (P.as_group).
    """

    blocks_H: list[list[int]]
    blocks_P: list[list[int]]
    phi: dict[tuple[int, ...], tuple[int, ...]]
    K_P: PermGroup
    K_P0: PermGroup

    @property
    def block_size_H(self) -> int:
        return len(self.blocks_H[0])


def decompose_outside_class(A: SRing, class_index: int,
                            H: Subgroup, P: Subgroup) -> OutsideClassDecomposition:
    """Decompose a basic set outside H ∪ P of a dense ring over H x P with
    |P| prime and coprime to |H|: group the fibers over the P-projection."""
    from .srings import is_dense
    G = A.group
    p = P.order
    if not _is_prime(p):
        raise SRingError("precondition", "|P| must be prime")
    if math.gcd(p, H.order) != 1:
        raise SRingError("precondition", "|P| must be coprime to |H|")
    if not is_dense(A, H, P):
        raise SRingError("precondition", "ring is not dense over H x P")
    X = set(A.classes[class_index])
    if X & (H.elements | P.elements):
        raise SRingError("precondition", "class meets H ∪ P")
    mul = G.mul
    # each x in X factors uniquely as h*g with h in H, g in P
    pair_of: dict[int, tuple[int, int]] = {}
    for h in H.members:
        for g in P.members:
            pair_of[mul(h, g)] = (h, g)
    fibers: dict[int, set[int]] = {}
    for x in X:
        h, g = pair_of[x]
        fibers.setdefault(g, set()).add(h)
    by_fiber: dict[frozenset[int], list[int]] = {}
    for g, hs in fibers.items():
        by_fiber.setdefault(frozenset(hs), []).append(g)
    blocks_H = sorted(sorted(hs) for hs in by_fiber)
    blocks_P = [sorted(by_fiber[frozenset(b)]) for b in blocks_H]
    x_h = set().union(*by_fiber)
    if sum(len(b) for b in blocks_H) != len(x_h):
        raise SRingError("decomposition-failure",
                         "fibers are neither equal nor disjoint (invalid ring)")
    if len({len(b) for b in blocks_H}) != 1 or len({len(b) for b in blocks_P}) != 1:
        raise SRingError("decomposition-failure",
                         "fiber blocks are not uniform (invalid input ring)")
    phi = {tuple(bh): tuple(bp) for bh, bp in zip(blocks_H, blocks_P)}
    # K_P with orbits = classes of A_P; K_P0 <= K_P with orbits on X_P = blocks
    A_P = restrict_sring(A, P)
    K_P = detect_cyclotomic(A_P)
    if K_P is None:
        raise SRingError("decomposition-failure",
                         "restriction to P is not cyclotomic (invalid ring)")
    pview = P.as_group
    X_P_small = sorted(pview.from_parent[g] for g in fibers)
    blocks_small = sorted(sorted(pview.from_parent[g] for g in b)
                          for b in blocks_P)
    K_P0 = partition_stabilizer(K_P, blocks_small)
    if K_P0.orbits(X_P_small) != blocks_small:
        raise SRingError("decomposition-failure",
                         "no subgroup of K_P has the blocks as orbits")
    if K_P.order() % K_P0.order() or \
            K_P.order() // K_P0.order() != len(blocks_P):
        raise SRingError("decomposition-failure",
                         "index of K_P0 in K_P does not match the block count")
    return OutsideClassDecomposition(blocks_H=blocks_H, blocks_P=blocks_P,
                                     phi=phi, K_P=K_P, K_P0=K_P0)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True
