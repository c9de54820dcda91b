"""Exhaustive enumeration of all S-rings over a small abelian group.

The search closes one basic set at a time.  A seed element x is fixed
deterministically; every coprime power map permutes the basic sets of a valid
S-ring, so the class of x is invariant under its exact multiplier stabilizer
M and is a union of M-orbits, disjoint from its images under units outside M.
Branching over the possible M (above the stabilizer of x) and over M-orbit
atoms, with forced closures of all power-map images and separation refinement
by convolutions of closed classes, keeps the tree small while preserving
completeness.  Leaves are fully re-validated; a brute-force oracle certifies
the search on every group of order <= 8.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from .groups import AbelianGroup, GroupError, automorphism_group
from .perms import Perm, PermGroup
from .srings import SRing, SRingError, canonical_classes, make_sring

ALGO_VERSION = 2
DEFAULT_ENUM_BOUND = 72
NAIVE_BOUND = 8


# -- the search -----------------------------------------------------------------


class _Tables:
    """Precomputed arithmetic shared by all nodes of one enumeration."""

    def __init__(self, G: AbelianGroup):
        self.G = G
        n = G.order
        self.n = n
        self.mul = [[G.mul(a, b) for b in range(n)] for a in range(n)]
        self.inv = [G.inv(a) for a in range(n)]
        e = max(G.exponent, 1)
        self.units = [m for m in range(1, e + 1) if math.gcd(m, e) == 1]
        self.power_maps = {m: [G.power(x, m) for x in range(n)]
                           for m in self.units}
        self.unit_subgroups = _multiplicative_subgroups(self.units, e)
        self.full_orbit = {x: frozenset(self.power_maps[m][x]
                                        for m in self.units)
                           for x in range(n)}
        self.stabilizer = {x: frozenset(m for m in self.units
                                        if self.power_maps[m][x] == x)
                           for x in range(n)}

    def orbit_under(self, M: frozenset[int], x: int) -> frozenset[int]:
        return frozenset(self.power_maps[m][x] for m in M)


def _multiplicative_subgroups(units: Sequence[int], e: int) -> list[frozenset[int]]:
    """All subgroups of the unit group mod e, sorted by (size, sorted elements)."""
    full = frozenset(units)
    found = {frozenset([1])}
    work = [frozenset([1])]
    cyclics = []
    for u in units:
        c = {1}
        x = u
        while x != 1:
            c.add(x)
            x = (x * u) % e if e > 1 else 1
        cyclics.append(frozenset(c))
    for c in cyclics:
        if c not in found:
            found.add(c)
            work.append(c)
    changed = True
    while changed:
        changed = False
        for a in list(found):
            for c in cyclics:
                prod = frozenset((x * y) % e if e > 1 else 1
                                 for x in a for y in c)
                if prod not in found:
                    found.add(prod)
                    changed = True
    return sorted(found, key=lambda s: (len(s), sorted(s)))


@dataclass
class _Node:
    pool: frozenset[int]
    closed: tuple[tuple[int, ...], ...]
    class_at: dict[int, int]        # element -> index into closed
    sep: list[int]                  # separation colors (refined by convolutions)


class _Enumerator:
    def __init__(self, G: AbelianGroup):
        self.G = G
        self.t = _Tables(G)
        self.results: list[SRing] = []

    def run(self) -> list[SRing]:
        n = self.t.n
        if n == 1:
            return [make_sring(self.G, [(0,)])]
        root = _Node(
            pool=frozenset(range(1, n)),
            closed=((0,),),
            class_at={0: 0},
            sep=[0] * n,
        )
        root = self._commit(root, [])
        assert root is not None
        self._search(root)
        out = sorted(self.results, key=lambda A: (A.rank, A.classes))
        return out

    # -- closing classes ---------------------------------------------------

    def _commit(self, node: _Node, queue: list[frozenset[int]]) -> Optional[_Node]:
        """Close the queued classes plus everything they force; None on conflict."""
        t = self.t
        n = t.n
        mul = t.mul
        inv = t.inv
        pool = set(node.pool)
        closed = list(node.closed)
        class_at = dict(node.class_at)
        sep = list(node.sep)
        pending = [frozenset(c) for c in queue]
        while pending:
            C = pending.pop(0)
            first = next(iter(C))
            if first in class_at:
                # already closed: must coincide with that class
                if set(closed[class_at[first]]) == C:
                    continue
                return None
            if not C <= pool:
                return None
            c0 = sep[first]
            if any(sep[x] != c0 for x in C):
                return None
            # fast precheck: |C ∩ zD| must be constant over z in C for every
            # closed D; the profile of z is the closed-class histogram of z^-1 C
            ref = None
            for z in C:
                row = mul[inv[z]]
                profile: dict[int, int] = {}
                for x in C:
                    k = class_at.get(row[x])
                    if k is not None:
                        profile[k] = profile.get(k, 0) + 1
                if ref is None:
                    ref = profile
                elif profile != ref:
                    return None
            # close C
            idx = len(closed)
            ctuple = tuple(sorted(C))
            closed.append(ctuple)
            for x in C:
                class_at[x] = idx
            pool -= C
            # power-map images (including the inverse, m = -1) are forced classes
            for m in t.units[1:]:
                pm = t.power_maps[m]
                img = frozenset(pm[x] for x in C)
                if img == C:
                    continue
                f = next(iter(img))
                if f in class_at:
                    if set(closed[class_at[f]]) != img:
                        return None
                    continue
                if img not in pending:
                    pending.append(img)
            # convolution constraints against every closed class: constant on
            # each closed class, and a separation refinement on the pool
            for D in closed:
                conv = [0] * n
                for x in ctuple:
                    row = mul[x]
                    for y in D:
                        conv[row[y]] += 1
                for E in closed:
                    v0 = conv[E[0]]
                    for z in E:
                        if conv[z] != v0:
                            return None
                if pool:
                    remap: dict[tuple[int, int], int] = {}
                    for z in pool:
                        key = (sep[z], conv[z])
                        col = remap.get(key)
                        if col is None:
                            col = len(remap)
                            remap[key] = col
                        sep[z] = col
                    for P in pending:
                        it = iter(P)
                        p0 = sep[next(it)]
                        if any(sep[z] != p0 for z in it):
                            return None
        return _Node(pool=frozenset(pool), closed=tuple(closed),
                     class_at=class_at, sep=sep)

    # -- branching ----------------------------------------------------------

    def _search(self, node: _Node) -> None:
        if not node.pool:
            self.results.append(make_sring(self.G, node.closed))
            return
        t = self.t
        seed = min(node.pool, key=lambda x: (len(t.full_orbit[x]), x))
        stab = t.stabilizer[seed]
        color = node.sep[seed]
        for M in t.unit_subgroups:
            if not stab <= M:
                continue
            atoms = self._atoms_for(node, M, color)
            seed_atom = t.orbit_under(M, seed)
            if seed_atom not in atoms:
                continue
            others = sorted((a for a in atoms if a != seed_atom),
                            key=lambda a: min(a))
            self._grow(node, M, [seed_atom], others, 0)

    def _atoms_for(self, node: _Node, M: frozenset[int],
                   color: int) -> set[frozenset[int]]:
        """M-orbits fully inside the pool, monochromatic of the seed color, and
        moved by every unit outside M (otherwise the class could not have exact
        multiplier stabilizer M)."""
        t = self.t
        out: set[frozenset[int]] = set()
        seen: set[int] = set()
        for x in node.pool:
            if x in seen or node.sep[x] != color:
                continue
            orb = t.orbit_under(M, x)
            seen |= orb
            if not orb <= node.pool:
                continue
            if any(node.sep[y] != color for y in orb):
                continue
            if any(frozenset(t.power_maps[m][y] for y in orb) == orb
                   for m in t.units if m not in M):
                continue
            out.add(orb)
        return out

    def _grow(self, node: _Node, M: frozenset[int],
              chosen: list[frozenset[int]], remaining: list[frozenset[int]],
              i: int) -> None:
        if i == len(remaining):
            C = frozenset().union(*chosen)
            new_node = self._commit(node, [C])
            if new_node is not None:
                self._search(new_node)
            return
        # branch: exclude atom i
        self._grow(node, M, chosen, remaining, i + 1)
        # branch: include atom i, if the unit-disjointness rule allows it
        t = self.t
        atom = remaining[i]
        current = frozenset().union(*chosen)
        for m in t.units:
            if m in M:
                continue
            pm = t.power_maps[m]
            img = frozenset(pm[y] for y in atom)
            if img & current or img & atom:
                return
        self._grow(node, M, chosen + [atom], remaining, i + 1)


def enumerate_srings(G: AbelianGroup, bound: int = DEFAULT_ENUM_BOUND,
                     cache_dir: Optional[str] = None) -> "EnumerationResult":
    """All S-rings over G, in canonical order; optionally disk-cached."""
    if G.order > bound:
        raise GroupError(f"group order {G.order} exceeds enumeration bound {bound}")
    cache = G._caches
    if "enumeration" in cache:
        return cache["enumeration"]
    loaded = _cache_load(G, cache_dir)
    if loaded is not None:
        result = EnumerationResult(G, tuple(loaded))
    else:
        srings = _Enumerator(G).run()
        result = EnumerationResult(G, tuple(srings))
        _cache_store(G, cache_dir, result)
    cache["enumeration"] = result
    return result


# -- the naive oracle -------------------------------------------------------------


def naive_enumerate(G: AbelianGroup) -> list[SRing]:
    """Brute force over all partitions of G with an identity singleton,
    filtered by full validation.  Certification oracle; order <= 8 only."""
    if G.order > NAIVE_BOUND:
        raise GroupError(f"group order {G.order} exceeds naive bound {NAIVE_BOUND}")
    n = G.order
    if n == 1:
        return [make_sring(G, [(0,)])]
    out = []
    rest = list(range(1, n))
    for partition in _set_partitions(rest):
        try:
            A = make_sring(G, [(0,)] + [tuple(p) for p in partition])
        except SRingError:
            continue
        out.append(A)
    return sorted(out, key=lambda A: (A.rank, A.classes))


def _set_partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


# -- canonical forms and duality pairing ------------------------------------------


def apply_perm_to_sring(A: SRing, sigma: Perm) -> SRing:
    classes = [tuple(sorted(sigma[x] for x in c)) for c in A.classes]
    return SRing(A.group, classes, _validated=True)


def canonical_form(A: SRing) -> SRing:
    """Minimum of the Aut(G)-orbit of the partition under the fixed total order."""
    aut = automorphism_group(A.group)
    best = None
    for sigma in sorted(aut.elements()):
        cand = canonical_classes(tuple(sorted(sigma[x] for x in c))
                                 for c in A.classes)
        if best is None or cand < best:
            best = cand
    return SRing(A.group, best, _validated=True)


def cayley_isomorphic(A: SRing, B: SRing) -> Optional[Perm]:
    """A group isomorphism carrying the classes of A onto the classes of B."""
    GA, GB = A.group, B.group
    if GA.invariant_factors != GB.invariant_factors or A.rank != B.rank:
        return None
    if sorted(len(c) for c in A.classes) != sorted(len(c) for c in B.classes):
        return None
    if GA.factors == GB.factors:
        b_classes = set(B.classes)
        for sigma in sorted(automorphism_group(GA).elements()):
            mapped = canonical_classes(tuple(sigma[x] for x in c)
                                       for c in A.classes)
            if set(mapped) <= b_classes:
                return sigma
        return None
    bridge = _group_isomorphism(GA, GB)
    if bridge is None:
        return None
    transported = SRing(GB, [tuple(sorted(bridge[x] for x in c))
                             for c in A.classes], _validated=True)
    sigma = cayley_isomorphic(transported, B)
    if sigma is None:
        return None
    return tuple(sigma[bridge[x]] for x in range(GA.order))


def _group_isomorphism(GA: AbelianGroup, GB: AbelianGroup) -> Optional[Perm]:
    from .groups import _find_isomorphism
    if GA.invariant_factors != GB.invariant_factors:
        return None
    iso = _find_isomorphism(GA, GB.mul, [GB.order_of(x) for x in GB.elements()])
    return tuple(iso) if iso is not None else None


def meet_sring(A: SRing, B: SRing) -> SRing:
    """The intersection S-ring: classes are the join of the two partitions."""
    if A.group.factors != B.group.factors:
        raise SRingError("group-mismatch", "meet needs a common group")
    n = A.group.order
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for ring in (A, B):
        for c in ring.classes:
            for x in c[1:]:
                union(c[0], x)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return make_sring(A.group, sorted(groups.values()))


class EnumerationResult:
    """All S-rings over a group plus Cayley classes and duality pairing."""

    def __init__(self, group: AbelianGroup, srings: tuple[SRing, ...]):
        self.group = group
        self.srings = srings

    def __len__(self) -> int:
        return len(self.srings)

    @cached_property
    def class_reps(self) -> tuple[SRing, ...]:
        reps: dict[tuple, SRing] = {}
        for A in self.srings:
            cf = canonical_form(A)
            reps.setdefault(cf.classes, cf)
        return tuple(sorted(reps.values(), key=lambda A: (A.rank, A.classes)))

    @cached_property
    def dual_paired(self) -> dict[SRing, SRing]:
        from .constructions import dual_sring
        by_classes = {A.classes: A for A in self.class_reps}
        out = {}
        for A in self.class_reps:
            d = canonical_form(dual_sring(A))
            if d.classes not in by_classes:
                raise SRingError("duality", "dual fell outside the enumerated set")
            out[A] = by_classes[d.classes]
        return out

    def to_json(self) -> dict:
        return {"group": {"factors": list(self.group.factors)},
                "algorithm_version": ALGO_VERSION,
                "count": len(self.srings),
                "srings": [[list(c) for c in A.classes] for A in self.srings]}


def classes_up_to_duality(result: EnumerationResult) -> list[tuple[SRing, SRing]]:
    """Pairs (rep, dual rep); self-dual classes pair with themselves."""
    paired = result.dual_paired
    done: set[tuple] = set()
    out = []
    for A in result.class_reps:
        if A.classes in done:
            continue
        B = paired[A]
        done.add(A.classes)
        done.add(B.classes)
        out.append((A, B))
    return out


# -- disk cache --------------------------------------------------------------------


def _cache_path(G: AbelianGroup, cache_dir: str) -> str:
    key = "-".join(str(f) for f in G.factors) or "trivial"
    return os.path.join(cache_dir, f"srings-{key}-v{ALGO_VERSION}.json")


def _cache_load(G: AbelianGroup, cache_dir: Optional[str]) -> Optional[list[SRing]]:
    if not cache_dir:
        return None
    path = _cache_path(G, cache_dir)
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        data = json.load(fh)
    if data.get("algorithm_version") != ALGO_VERSION:
        return None
    return [SRing(G, [tuple(c) for c in cl], _validated=True)
            for cl in data["srings"]]


def _cache_store(G: AbelianGroup, cache_dir: Optional[str],
                 result: EnumerationResult) -> None:
    if not cache_dir:
        return
    os.makedirs(cache_dir, exist_ok=True)
    path = _cache_path(G, cache_dir)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(result.to_json(), fh, sort_keys=True)
    os.replace(tmp, path)
