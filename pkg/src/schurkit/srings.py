"""The S-ring data type: validation, structure constants, substructures.

An S-ring over G is stored as its basic-set partition in canonical order
(classes sorted by minimum element, class 0 = {identity}).  Validation checks
the identity-singleton, inverse-closure and module-closure axioms directly.
"""

from __future__ import annotations

import math
import warnings
from functools import cached_property
from typing import Iterable, Sequence

from .groups import (
    AbelianGroup,
    Quotient,
    Subgroup,
    all_subgroups,
    make_group,
    subgroup_generated,
)


class SRingError(ValueError):
    """Validation or precondition failure; kind names the violated axiom."""

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


def canonical_classes(classes: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    cl = [tuple(sorted(set(c))) for c in classes]
    cl.sort(key=lambda c: (c[0], c))
    return tuple(cl)


class SRing:
    """A validated S-ring; immutable after construction."""

    def __init__(self, group: AbelianGroup, classes: Sequence[Sequence[int]],
                 _validated: bool = False):
        self.group = group
        self.classes = canonical_classes(classes)
        class_of = [-1] * group.order
        for i, c in enumerate(self.classes):
            for x in c:
                if x < 0 or x >= group.order or class_of[x] != -1:
                    raise SRingError("not-a-partition",
                                     f"element {x} missing or repeated")
                class_of[x] = i
        if any(v == -1 for v in class_of):
            raise SRingError("not-a-partition", "classes do not cover the group")
        self.class_of: tuple[int, ...] = tuple(class_of)
        self._conv_cache: dict[tuple[int, int], tuple[int, ...]] = {}
        if not _validated:
            _validate(self)

    @property
    def rank(self) -> int:
        return len(self.classes)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SRing)
                and self.group.factors == other.group.factors
                and self.classes == other.classes)

    def __hash__(self) -> int:
        return hash((self.group.factors, self.classes))

    def __repr__(self) -> str:
        return f"SRing(rank={self.rank} over {self.group.name})"

    def convolution(self, i: int, j: int) -> tuple[int, ...]:
        """Counts of products: convolution(i, j)[z] = #{(x,y) in Xi x Xj : xy = z}."""
        if i > j:
            i, j = j, i
        key = (i, j)
        got = self._conv_cache.get(key)
        if got is not None:
            return got
        G = self.group
        counts = [0] * G.order
        mul = G.mul
        for x in self.classes[i]:
            for y in self.classes[j]:
                counts[mul(x, y)] += 1
        out = tuple(counts)
        self._conv_cache[key] = out
        return out

    @cached_property
    def class_radicals(self) -> tuple[frozenset[int], ...]:
        return tuple(set_radical(self.group, c).elements for c in self.classes)

    def is_trivial(self) -> bool:
        return self.rank <= 2 and self.classes == trivial_classes(self.group)

    def is_group_ring(self) -> bool:
        return self.rank == self.group.order

    def to_json(self) -> dict:
        return {"group": {"factors": list(self.group.factors)},
                "classes": [list(c) for c in self.classes]}


def trivial_classes(G: AbelianGroup) -> tuple[tuple[int, ...], ...]:
    if G.order == 1:
        return ((0,),)
    return ((0,), tuple(range(1, G.order)))


def make_sring(G: AbelianGroup, classes: Sequence[Sequence[int]]) -> SRing:
    """Validated S-ring from a partition of G; raises SRingError otherwise."""
    return SRing(G, classes)


def sring_from_json(data: dict) -> SRing:
    G = make_group(data["group"]["factors"])
    classes = [tuple(c) for c in data["classes"]]
    if list(canonical_classes(classes)) != [tuple(sorted(c)) for c in classes]:
        warnings.warn("classes not in canonical order; re-canonicalizing on load")
    return make_sring(G, classes)


def _validate(A: SRing) -> None:
    G = A.group
    if A.classes[0] != (0,):
        raise SRingError("identity-not-singleton",
                         f"class of identity is {A.classes[0]}")
    inv = G.inv
    class_sets = [frozenset(c) for c in A.classes]
    for i, c in enumerate(A.classes):
        image = frozenset(inv(x) for x in c)
        if image not in class_sets:
            raise SRingError("not-inverse-closed",
                             f"inverse image of class {i} is not a class")
    for i in range(A.rank):
        for j in range(i, A.rank):
            conv = A.convolution(i, j)
            for k, c in enumerate(A.classes):
                v = conv[c[0]]
                for z in c[1:]:
                    if conv[z] != v:
                        raise SRingError(
                            "module-closure",
                            f"product of classes {i},{j} takes values "
                            f"{v} at {c[0]} and {conv[z]} at {z} "
                            f"inside class {k}")


def structure_constant(A: SRing, i: int, j: int, k: int) -> int:
    """p^k_{ij} = #{(x,y) in Xi x Xj : xy = z} for any fixed z in Xk."""
    return A.convolution(i, j)[A.classes[k][0]]


def inverse_class(A: SRing, i: int) -> int:
    return A.class_of[A.group.inv(A.classes[i][0])]


# -- substructures -------------------------------------------------------------


def is_a_subgroup(A: SRing, H: Subgroup) -> bool:
    """Whether H is a union of basic sets."""
    elems = H.elements
    return all(set(A.classes[A.class_of[x]]) <= elems for x in elems)


def a_subgroups(A: SRing) -> list[Subgroup]:
    """All subgroups of G that are unions of basic sets, sorted by (order, set)."""
    cache = getattr(A, "_a_subgroups", None)
    if cache is not None:
        return list(cache)
    out = [H for H in all_subgroups(A.group) if is_a_subgroup(A, H)]
    A._a_subgroups = tuple(out)
    return out


def least_a_subgroup(A: SRing, seed: Iterable[int]) -> Subgroup:
    """The least A-subgroup containing the seed (A-subgroups are meet-closed)."""
    seed = set(seed)
    meet = frozenset(range(A.group.order))
    for H in a_subgroups(A):
        if seed <= H.elements:
            meet &= H.elements
    return Subgroup(A.group, meet)


def maximal_a_subgroups_in(A: SRing, H: Subgroup) -> list[Subgroup]:
    """A-subgroups contained in H not properly contained in another such."""
    inside = [K for K in a_subgroups(A) if K.elements <= H.elements]
    return [K for K in inside
            if not any(K.elements < M.elements for M in inside)]


def set_radical(G: AbelianGroup, X: Iterable[int]) -> Subgroup:
    """The stabilizer {g : gX = X}; X is a union of its cosets."""
    Xset = frozenset(X)
    if not Xset:
        raise SRingError("empty-set", "radical of an empty set")
    mul = G.mul
    rad = frozenset(g for g in G.elements()
                    if all(mul(g, x) in Xset for x in Xset))
    return Subgroup(G, rad)


def rational_conjugate(A: SRing, i: int, m: int) -> int:
    """Class index of X^(m) = {x^m : x in X}; m must be coprime to |G|."""
    G = A.group
    if G.order > 1 and math.gcd(m, G.order) != 1:
        raise SRingError("invalid-multiplier",
                         f"{m} is not coprime to {G.order}")
    image = frozenset(G.power(x, m) for x in A.classes[i])
    j = A.class_of[next(iter(image))]
    if frozenset(A.classes[j]) != image:
        raise SRingError("module-closure",
                         f"power map m={m} does not permute the classes")
    return j


def multiplier_orbit_closed(A: SRing) -> bool:
    """Whether every coprime power map permutes the classes (always true for
    a valid S-ring over an abelian group; used as a self-check)."""
    G = A.group
    for m in range(1, G.exponent + 1):
        if math.gcd(m, G.order) != 1:
            continue
        try:
            for i in range(A.rank):
                rational_conjugate(A, i, m)
        except SRingError:
            return False
    return True


# -- restriction and quotient ---------------------------------------------------


def restrict_sring(A: SRing, U: Subgroup) -> SRing:
    """The S-ring A_U over U (as a standalone group); U must be an A-subgroup."""
    if not is_a_subgroup(A, U):
        raise SRingError("not-a-subgroup", "restriction target is not an A-subgroup")
    if U.order == A.group.order:
        return A
    view = U.as_group
    into = view.from_parent
    classes = []
    seen = set()
    for x in U.members:
        i = A.class_of[x]
        if i in seen:
            continue
        seen.add(i)
        classes.append(tuple(sorted(into[y] for y in A.classes[i])))
    return SRing(view.group, classes)


def quotient_sring(A: SRing, L: Subgroup) -> SRing:
    """The quotient S-ring over G/L; L must be an A-subgroup."""
    if not is_a_subgroup(A, L):
        raise SRingError("not-a-subgroup", "quotient kernel is not an A-subgroup")
    Q = quotient_of(A.group, L)
    proj = Q.projection
    images = {tuple(sorted({proj[x] for x in c})) for c in A.classes}
    return SRing(Q.group, sorted(images))


def quotient_of(G: AbelianGroup, L: Subgroup) -> Quotient:
    """Cached quotient_group."""
    from .groups import quotient_group
    cache = G._caches.setdefault("quotients", {})
    key = L.elements
    if key not in cache:
        cache[key] = quotient_group(G, L)
    return cache[key]


# -- numeric invariants ----------------------------------------------------------


def coset_intersection_size(A: SRing, i: int, H: Subgroup) -> int:
    """The common size |X ∩ Hx| over x in X; errors if not constant."""
    X = A.classes[i]
    if not X:
        raise SRingError("empty-set", "empty class")
    G = A.group
    counts: dict[int, int] = {}
    for x in X:
        rep = min(G.mul(x, h) for h in H.elements)
        counts[rep] = counts.get(rep, 0) + 1
    values = set(counts.values())
    if len(values) != 1:
        raise SRingError("inconsistent-lambda",
                         f"|X ∩ Hx| varies over class {i}: {sorted(values)}")
    return values.pop()


def sring_radical(A: SRing) -> Subgroup:
    """Subgroup generated by the radicals of classes meeting the top order layer
    (elements of order equal to the group exponent)."""
    G = A.group
    e = G.exponent
    gens: set[int] = set()
    for i, c in enumerate(A.classes):
        if any(G.order_of(x) == e for x in c):
            gens |= A.class_radicals[i]
    return subgroup_generated(G, gens)


def sring_radical_3k(A: SRing) -> Subgroup:
    """sring_radical with the C3 x C3^k (k >= 2) shape requirement enforced."""
    invs = A.group.invariant_factors
    ok = (len(invs) == 2 and invs[0] == 3
          and _is_power_of(invs[1], 3) and invs[1] >= 9)
    if not ok:
        raise SRingError("wrong-shape",
                         f"group {A.group.name} is not of shape C3 x C3^k, k >= 2")
    return sring_radical(A)


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def is_dense(A: SRing, H: Subgroup, P: Subgroup) -> bool:
    """Whether H and P are both A-subgroups; requires G = H x P internally."""
    G = A.group
    if H.elements & P.elements != {0} or H.order * P.order != G.order:
        raise SRingError("not-a-decomposition",
                         "H and P do not give a direct decomposition of G")
    return is_a_subgroup(A, H) and is_a_subgroup(A, P)
