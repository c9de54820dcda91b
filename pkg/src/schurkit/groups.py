"""Exact arithmetic for finite abelian groups given as products of cyclic factors.

Elements are integers 0..order-1 in mixed radix over the factor list (last
factor varies fastest), so the identity is 0 and the unit vectors of the given
factors map to the literal generators used in the verification suites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Callable, Iterable, Optional, Sequence

from .perms import Perm, PermGroup

DEFAULT_ORDER_BOUND = 256
AUT_ORDER_CAP = 10**6


class GroupError(ValueError):
    pass


def _prime_factorization(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors(factors: Sequence[int]) -> tuple[int, ...]:
    """Canonical invariant-factor form d_1 | d_2 | ... of a product of cyclics."""
    by_prime: dict[int, list[int]] = {}
    for n in factors:
        for p, e in _prime_factorization(n).items():
            by_prime.setdefault(p, []).append(e)
    if not by_prime:
        return ()
    depth = max(len(v) for v in by_prime.values())
    divs = [1] * depth
    for p, exps in by_prime.items():
        exps = sorted(exps, reverse=True)
        for i, e in enumerate(exps):
            divs[i] *= p**e
    divs = [d for d in divs if d > 1]
    return tuple(sorted(divs))


class AbelianGroup:
    """Finite abelian group C_{n_1} x ... x C_{n_k}, elements 0..order-1."""

    def __init__(self, factors: Sequence[int]):
        for n in factors:
            if n <= 1:
                raise GroupError(f"cyclic factor must be >= 2, got {n}")
        self.factors: tuple[int, ...] = tuple(factors)
        self.order: int = math.prod(self.factors)
        self.exponent: int = reduce(math.lcm, self.factors, 1)
        self.invariant_factors: tuple[int, ...] = invariant_factors(self.factors)
        weights = []
        w = 1
        for n in reversed(self.factors):
            weights.append(w)
            w *= n
        self._weights = tuple(reversed(weights))

    def __repr__(self) -> str:
        return f"AbelianGroup({list(self.factors)})"

    @property
    def name(self) -> str:
        if not self.factors:
            return "C1"
        return "x".join(f"C{n}" for n in self.factors)

    def elements(self) -> range:
        return range(self.order)

    @property
    def identity(self) -> int:
        return 0

    def coords(self, x: int) -> tuple[int, ...]:
        out = []
        for n, w in zip(self.factors, self._weights):
            out.append((x // w) % n)
        return tuple(out)

    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.factors):
            raise GroupError("coordinate length mismatch")
        return sum((c % n) * w for c, n, w in
                   zip(coords, self.factors, self._weights))

    def mul(self, a: int, b: int) -> int:
        out = 0
        for n, w in zip(self.factors, self._weights):
            out += (((a // w) + (b // w)) % n) * w
        return out

    def inv(self, a: int) -> int:
        out = 0
        for n, w in zip(self.factors, self._weights):
            out += (-(a // w) % n) * w
        return out

    def power(self, a: int, m: int) -> int:
        out = 0
        for n, w in zip(self.factors, self._weights):
            out += (((a // w) % n) * m % n) * w
        return out

    def order_of(self, a: int) -> int:
        out = 1
        for n, w in zip(self.factors, self._weights):
            c = (a // w) % n
            out = math.lcm(out, n // math.gcd(n, c))
        return out

    @cached_property
    def mul_table(self) -> list[list[int]]:
        return [[self.mul(a, b) for b in range(self.order)]
                for a in range(self.order)]

    @cached_property
    def inv_table(self) -> tuple[int, ...]:
        return tuple(self.inv(a) for a in range(self.order))

    def translation(self, g: int) -> Perm:
        """Right translation x -> x*g as a permutation."""
        return tuple(self.mul(x, g) for x in range(self.order))

    def power_map(self, m: int) -> Perm:
        """The map x -> x^m; a permutation iff gcd(m, exponent) = 1."""
        return tuple(self.power(x, m) for x in range(self.order))

    def is_isomorphic_to(self, other: "AbelianGroup") -> bool:
        return self.invariant_factors == other.invariant_factors

    # internal caches filled by module-level functions
    @cached_property
    def _caches(self) -> dict:
        return {}


def make_group(factors: Sequence[int]) -> AbelianGroup:
    """Group from a list of cyclic orders; the empty list is the trivial group."""
    return AbelianGroup(factors)


def group_from_json(data: dict) -> AbelianGroup:
    return make_group(data["factors"])


def group_to_json(G: AbelianGroup) -> dict:
    return {"factors": list(G.factors)}


GROUP_ALIASES = {
    "E4": [2, 2], "E8": [2, 2, 2], "E9": [3, 3], "E16": [2, 2, 2, 2],
    "E25": [5, 5], "E27": [3, 3, 3],
}


def parse_group_spec(text: str) -> AbelianGroup:
    """Parse '4,2', 'C4xC2', or aliases like 'E8', 'E9xC4'."""
    text = text.strip()
    factors: list[int] = []
    for part in text.replace("X", "x").split("x"):
        part = part.strip()
        if not part:
            continue
        if part in GROUP_ALIASES:
            factors.extend(GROUP_ALIASES[part])
        elif part.upper().startswith("C") and part[1:].isdigit():
            factors.append(int(part[1:]))
        else:
            for tok in part.split(","):
                tok = tok.strip()
                if not tok:
                    continue
                if tok in GROUP_ALIASES:
                    factors.extend(GROUP_ALIASES[tok])
                elif tok.upper().startswith("C") and tok[1:].isdigit():
                    factors.append(int(tok[1:]))
                elif tok.isdigit():
                    factors.append(int(tok))
                else:
                    raise GroupError(f"cannot parse group spec {text!r}")
    return make_group(factors)


# -- subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """Subgroup as a closed element set; equality is by element set."""

    group: AbelianGroup
    elements: frozenset[int]

    def __post_init__(self):
        if 0 not in self.elements:
            raise GroupError("subgroup must contain the identity")

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def members(self) -> tuple[int, ...]:
        return tuple(sorted(self.elements))

    def __contains__(self, x: int) -> bool:
        return x in self.elements

    def __le__(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def __lt__(self, other: "Subgroup") -> bool:
        return self.elements < other.elements

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup)
                and self.group.factors == other.group.factors
                and self.elements == other.elements)

    def __hash__(self) -> int:
        return hash((self.group.factors, self.elements))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.group.name})"

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A generating list with no redundant member."""
        G = self.group
        gens: list[int] = []
        span: frozenset[int] = frozenset([0])
        for x in sorted(self.elements, key=lambda y: -G.order_of(y)):
            if x not in span:
                gens.append(x)
                span = _close_under(G, span | {x})
            if len(span) == self.order:
                break
        # drop members that later additions made redundant
        pruned = list(gens)
        for g in list(pruned):
            rest = [h for h in pruned if h != g]
            if len(_close_under(G, frozenset([0] + rest))) == self.order:
                pruned = rest
        return tuple(pruned)

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        return abelian_invariants_from_orders(
            [self.group.order_of(x) for x in self.elements])

    @cached_property
    def as_group(self) -> "SubgroupView":
        return SubgroupView._build(self)

    def is_characteristic(self) -> bool:
        aut = automorphism_group(self.group)
        elems = self.elements
        return all(frozenset(g[x] for x in elems) == elems
                   for g in aut.generators)


def _close_under(G: AbelianGroup, seed: frozenset[int]) -> frozenset[int]:
    elems = set(seed)
    frontier = list(seed)
    while frontier:
        nxt = []
        for x in frontier:
            for g in seed:
                y = G.mul(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


def subgroup_generated(G: AbelianGroup, gens: Iterable[int]) -> Subgroup:
    """The subgroup generated by a set of elements (closure under products)."""
    return Subgroup(G, _close_under(G, frozenset({0, *gens})))


def trivial_subgroup(G: AbelianGroup) -> Subgroup:
    return Subgroup(G, frozenset([0]))


def full_subgroup(G: AbelianGroup) -> Subgroup:
    return Subgroup(G, frozenset(range(G.order)))


def all_subgroups(G: AbelianGroup, bound: int = DEFAULT_ORDER_BOUND) -> list[Subgroup]:
    """Complete duplicate-free subgroup list, sorted by (order, element set)."""
    if G.order > bound:
        raise GroupError(f"group order {G.order} exceeds bound {bound}")
    cache = G._caches
    if "subgroups" in cache:
        return list(cache["subgroups"])
    cyclics = {frozenset(_cyclic_span(G, g)) for g in range(G.order)}
    found: set[frozenset[int]] = set(cyclics)
    worklist = list(cyclics)
    while worklist:
        H = worklist.pop()
        for C in cyclics:
            if C <= H:
                continue
            J = _close_under(G, H | C)
            if J not in found:
                found.add(J)
                worklist.append(J)
    subs = [Subgroup(G, s) for s in found]
    subs.sort(key=lambda H: (H.order, H.members))
    cache["subgroups"] = tuple(subs)
    return subs


def _cyclic_span(G: AbelianGroup, g: int) -> list[int]:
    out = [0]
    x = g
    while x != 0:
        out.append(x)
        x = G.mul(x, g)
    return out


def omega_subgroup(G: AbelianGroup, m: int) -> Subgroup:
    """The subgroup {x : x^m = e}."""
    if m < 1:
        raise GroupError("m must be >= 1")
    return Subgroup(G, frozenset(x for x in G.elements() if G.power(x, m) == 0))


def sylow_subgroup(G: AbelianGroup, p: int) -> Subgroup:
    return Subgroup(G, frozenset(
        x for x in G.elements()
        if _is_prime_power_order(G.order_of(x), p)))


def _is_prime_power_order(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def hall_coprime_subgroup(G: AbelianGroup, p: int) -> Subgroup:
    """Elements of order coprime to p (the Hall p'-subgroup)."""
    return Subgroup(G, frozenset(
        x for x in G.elements() if G.order_of(x) % p != 0))


def squares_subgroup(G: AbelianGroup) -> Subgroup:
    return Subgroup(G, frozenset(G.power(x, 2) for x in G.elements()))


@dataclass(frozen=True)
class Section:
    """A section U/L given by nested subgroups L <= U."""

    U: Subgroup
    L: Subgroup

    def __post_init__(self):
        if not self.L <= self.U:
            raise GroupError("section requires L <= U")

    @property
    def size(self) -> int:
        return self.U.order // self.L.order

    def __repr__(self) -> str:
        return f"Section(|U|={self.U.order}, |L|={self.L.order})"


# -- abstract views of subgroups and quotients -------------------------------


def abelian_invariants_from_orders(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors of an abelian group from its element-order statistics.

    The isomorphism type of a finite abelian group is determined by, for each
    prime p, the sizes of the filtration {x : x^(p^i) = e} inside its p-part.
    """
    orders = list(orders)
    n = len(orders)
    if n == 1:
        return ()
    factors: list[int] = []
    for p in _prime_factorization(n):
        logs = [0]
        i = 1
        while True:
            size = sum(1 for o in orders
                       if _is_prime_power_order(o, p) and o <= p**i)
            m, t = 0, size
            while t > 1:
                if t % p:
                    raise GroupError("order statistics not from an abelian group")
                t //= p
                m += 1
            if m == logs[-1]:
                break
            logs.append(m)
            i += 1
        counts = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
        # counts[i-1] = number of cyclic p-factors of order >= p^i
        j = 1
        while True:
            part = sum(1 for c in counts if c >= j)
            if part == 0:
                break
            factors.append(p**part)
            j += 1
    return invariant_factors(factors)


class SubgroupView:
    """A subgroup re-indexed as a standalone AbelianGroup.

    to_parent[i] is the parent element for abstract index i;
    from_parent inverts it on the subgroup's elements.
    """

    def __init__(self, group: AbelianGroup, to_parent: tuple[int, ...],
                 from_parent: dict[int, int]):
        self.group = group
        self.to_parent = to_parent
        self.from_parent = from_parent

    @staticmethod
    def _build(H: Subgroup) -> "SubgroupView":
        G = H.group
        abstract = make_group(H.invariant_factors)
        members = H.members
        pos = {x: i for i, x in enumerate(members)}
        iso = _find_isomorphism(abstract,
                                lambda a, b: pos[G.mul(members[a], members[b])],
                                [G.order_of(x) for x in members])
        if iso is None:
            raise AssertionError("subgroup failed to match its invariant type")
        to_parent = tuple(members[iso[i]] for i in range(abstract.order))
        from_parent = {x: i for i, x in enumerate(to_parent)}
        return SubgroupView(abstract, to_parent, from_parent)


class Quotient:
    """A quotient G/L re-indexed as a standalone AbelianGroup.

    projection[x] is the abstract index of the coset xL; coset_reps[i] is a
    fixed representative of the i-th coset.
    """

    def __init__(self, group: AbelianGroup, projection: tuple[int, ...],
                 coset_reps: tuple[int, ...]):
        self.group = group
        self.projection = projection
        self.coset_reps = coset_reps

    def preimage(self, classes: Iterable[int]) -> frozenset[int]:
        wanted = set(classes)
        return frozenset(x for x, c in enumerate(self.projection) if c in wanted)


def quotient_group(G: AbelianGroup, L: Subgroup) -> Quotient:
    """Quotient with a fixed coset indexing; projection is a homomorphism."""
    rep_of: dict[int, int] = {}
    reps: list[int] = []
    for x in G.elements():
        if x in rep_of:
            continue
        coset = sorted(G.mul(x, l) for l in L.elements)
        r = coset[0]
        for y in coset:
            rep_of[y] = r
        reps.append(r)
    reps.sort()
    rep_index = {r: i for i, r in enumerate(reps)}
    q = len(reps)

    def qmul(a: int, b: int) -> int:
        return rep_index[rep_of[G.mul(reps[a], reps[b])]]

    qorders = []
    for i in range(q):
        o, acc = 1, i
        while acc != 0:
            acc = qmul(acc, i)
            o += 1
        qorders.append(o)
    abstract = make_group(abelian_invariants_from_orders(qorders))
    iso = _find_isomorphism(abstract, qmul, qorders)
    if iso is None:
        raise AssertionError("quotient failed to match its invariant type")
    # iso maps abstract index -> coset position; invert for the projection
    coset_to_abstract = [0] * q
    for i, c in enumerate(iso):
        coset_to_abstract[c] = i
    projection = tuple(coset_to_abstract[rep_index[rep_of[x]]]
                       for x in G.elements())
    coset_reps = tuple(reps[iso[i]] for i in range(q))
    return Quotient(abstract, projection, coset_reps)


def _find_isomorphism(abstract: AbelianGroup, mul: Callable[[int, int], int],
                      orders: list[int]) -> Optional[list[int]]:
    """First isomorphism from `abstract` onto the table group, as an index map.

    Backtracks over images of the abstract unit vectors; a partial choice
    survives iff the images generate a subgroup of the forced size.
    """
    n = len(orders)
    if abstract.order != n:
        return None
    if n == 1:
        return [0]
    k = len(abstract.factors)

    def span_of(base: frozenset[int], g: int) -> frozenset[int]:
        out = set(base)
        cur = g
        while cur != 0:
            out.update(mul(x, cur) for x in base)
            cur = mul(cur, g)
        return frozenset(out)

    images: list[int] = []

    def extend(level: int, span: frozenset[int]) -> bool:
        if level == k:
            return True
        target = abstract.factors[level]
        for g in range(n):
            if orders[g] != target:
                continue
            new_span = span_of(span, g)
            if len(new_span) != len(span) * target:
                continue
            images.append(g)
            if extend(level + 1, new_span):
                return True
            images.pop()
        return False

    if not extend(0, frozenset([0])):
        return None
    # expand generator images to the full index map
    out = [0] * n
    for x in range(abstract.order):
        acc = 0
        for c, g in zip(abstract.coords(x), images):
            step = g
            cur = 0
            for _ in range(c):
                cur = mul(cur, step)
            acc = mul(acc, cur)
        out[x] = acc
    return out


# -- automorphisms ------------------------------------------------------------


def automorphism_group(G: AbelianGroup, bound: int = DEFAULT_ORDER_BOUND,
                       cap: int = AUT_ORDER_CAP) -> PermGroup:
    """All automorphisms, by backtracking over images of the factor generators."""
    if G.order > bound:
        raise GroupError(f"group order {G.order} exceeds bound {bound}")
    cache = G._caches
    if "aut" in cache:
        return cache["aut"]
    n = G.order
    k = len(G.factors)
    if n == 1 or k == 0:
        aut = PermGroup(max(n, 1), [])
        aut.elements()
        cache["aut"] = aut
        return aut
    orders = [G.order_of(x) for x in range(n)]
    perms: list[Perm] = []
    images: list[int] = []

    def span_of(base: frozenset[int], g: int) -> frozenset[int]:
        out = set(base)
        cur = g
        while cur != 0:
            out.update(G.mul(x, cur) for x in base)
            cur = G.mul(cur, g)
        return frozenset(out)

    def materialize() -> Perm:
        # perm[x] = sum_i coords_i(x) * images[i], built factor by factor
        vals = [0] * n
        for x in range(n):
            acc = 0
            for c, g in zip(G.coords(x), images):
                acc = G.mul(acc, G.power(g, c))
            vals[x] = acc
        return tuple(vals)

    def extend(level: int, span: frozenset[int]):
        if level == k:
            perms.append(materialize())
            if len(perms) > cap:
                raise GroupError(f"automorphism count exceeds cap {cap}")
            return
        target = G.factors[level]
        for g in range(n):
            if orders[g] != target:
                continue
            new_span = span_of(span, g)
            if len(new_span) != len(span) * target:
                continue
            images.append(g)
            extend(level + 1, new_span)
            images.pop()

    extend(0, frozenset([0]))
    aut = PermGroup(n, perms)
    aut._element_cache = frozenset(perms)
    cache["aut"] = aut
    return aut


def orbits(K: PermGroup, domain: Optional[Iterable[int]] = None) -> list[list[int]]:
    """K-orbits on the domain, each sorted, ordered by minimum element."""
    return K.orbits(domain)


def partition_stabilizer(K: PermGroup, classes: Sequence[Sequence[int]]) -> PermGroup:
    """The subgroup of K fixing every class setwise (K fully enumerated)."""
    class_sets = [frozenset(c) for c in classes]
    keep = []
    for g in K.elements():
        if all(frozenset(g[x] for x in c) == c for c in class_sets):
            keep.append(g)
    H = PermGroup(K.degree, keep)
    H._element_cache = frozenset(keep)
    return H


# -- duality -------------------------------------------------------------------


def pairing_exponent(G: AbelianGroup, chi: int, x: int) -> int:
    """Bilinear pairing t(chi, x) mod exponent; chi(x) = zeta^t."""
    e = G.exponent
    t = 0
    for c, xc, n in zip(G.coords(chi), G.coords(x), G.factors):
        t += c * xc * (e // n)
    return t % e


def orthogonal_complement(H: Subgroup) -> Subgroup:
    """Characters annihilating H, as a subgroup of the (self-identified) dual."""
    G = H.group
    members = H.members
    ann = frozenset(chi for chi in G.elements()
                    if all(pairing_exponent(G, chi, h) == 0 for h in members))
    return Subgroup(G, ann)
