"""Permutation groups on 0..n-1 with orbit and stabilizer-chain machinery."""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Optional, Sequence

Perm = tuple[int, ...]


class PermGroupError(ValueError):
    pass


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """Return the permutation "p then q", i.e. x -> q[p[x]]."""
    return tuple(q[i] for i in p)


def inverse_perm(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def perm_power(p: Perm, k: int) -> Perm:
    n = len(p)
    if k < 0:
        return perm_power(inverse_perm(p), -k)
    out = identity_perm(n)
    while k:
        if k & 1:
            out = compose(out, p)
        p = compose(p, p)
        k >>= 1
    return out


def is_permutation(p: Sequence[int], n: int) -> bool:
    return len(p) == n and sorted(p) == list(range(n))


class PermGroup:
    """Permutation group given by generators.

    Small groups (automorphism groups of abelian groups, subdirect products)
    are enumerated in full; large ones (colored-scheme automorphism groups)
    are handled through a deterministic Schreier-Sims stabilizer chain.
    """

    def __init__(self, degree: int, generators: Iterable[Sequence[int]]):
        self.degree = degree
        seen: set[Perm] = set()
        gens: list[Perm] = []
        ident = identity_perm(degree)
        for g in generators:
            tg = tuple(g)
            if not is_permutation(tg, degree):
                raise PermGroupError(f"not a permutation of degree {degree}: {g!r}")
            if tg != ident and tg not in seen:
                seen.add(tg)
                gens.append(tg)
        self.generators: tuple[Perm, ...] = tuple(gens)
        self._element_cache: Optional[frozenset[Perm]] = None
        self._known_order: Optional[int] = None

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree, [])

    def elements(self, cap: int = 10**6) -> frozenset[Perm]:
        """All elements, by closure under composition.  Errors out past cap."""
        if self._element_cache is not None:
            return self._element_cache
        ident = identity_perm(self.degree)
        elems = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in self.generators:
                    q = compose(p, g)
                    if q not in elems:
                        elems.add(q)
                        nxt.append(q)
                        if len(elems) > cap:
                            raise PermGroupError(f"group order exceeds cap {cap}")
            frontier = nxt
        self._element_cache = frozenset(elems)
        return self._element_cache

    def order(self) -> int:
        if self._known_order is not None:
            return self._known_order
        if self._element_cache is not None:
            return len(self._element_cache)
        return self._chain.order()

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        frontier = [point]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = g[x]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def orbits(self, domain: Optional[Iterable[int]] = None) -> list[list[int]]:
        """Partition of the domain into orbits, each sorted, ordered by minimum.

        Raises if the domain is not invariant under the group.
        """
        if domain is None:
            points = list(range(self.degree))
        else:
            points = sorted(set(domain))
        point_set = set(points)
        out: list[list[int]] = []
        left = set(points)
        for x in points:
            if x not in left:
                continue
            orb = self.orbit(x)
            if not set(orb) <= point_set:
                raise PermGroupError(f"domain not invariant: orbit of {x} leaves it")
            left -= set(orb)
            out.append(orb)
        return out

    @cached_property
    def _chain(self) -> "StabilizerChain":
        return StabilizerChain(self.degree, self.generators, base_prefix=(0,))

    def contains(self, p: Sequence[int]) -> bool:
        tp = tuple(p)
        if not is_permutation(tp, self.degree):
            return False
        if self._element_cache is not None:
            return tp in self._element_cache
        return self._chain.contains(tp)

    def point_stabilizer(self, point: int) -> "PermGroup":
        """Stabilizer of a point, from the Schreier generators of a chain."""
        if point == 0:
            chain = self._chain
        else:
            chain = StabilizerChain(self.degree, self.generators,
                                    base_prefix=(point,))
        return PermGroup(self.degree, chain.stabilizer_generators())

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(other.contains(g) for g in self.generators)


class StabilizerChain:
    """Deterministic Schreier-Sims stabilizer chain.

    base[i] is the i-th base point; sgens holds the strong generators;
    transversals[i] maps each point x in the orbit of base[i] (under the
    generators fixing base[:i]) to a word u with base[i]^u = x.
    """

    def __init__(self, degree: int, generators: Sequence[Perm],
                 base_prefix: Sequence[int] = ()):
        self.degree = degree
        self.base: list[int] = []
        self.sgens: list[Perm] = []
        self.transversals: list[dict[int, Perm]] = []
        self._forced = list(base_prefix)
        ident = identity_perm(degree)
        for g in generators:
            if tuple(g) != ident:
                self._add(tuple(g))

    # -- construction ------------------------------------------------------

    def _gens_at(self, level: int) -> list[Perm]:
        pre = self.base[:level]
        return [g for g in self.sgens if all(g[b] == b for b in pre)]

    def _new_base_point(self, g: Perm) -> int:
        for b in self._forced:
            if b not in self.base:
                return b
        for x in range(self.degree):
            if g[x] != x:
                return x
        raise AssertionError("identity has no moved point")

    def _rebuild(self, level: int) -> None:
        b = self.base[level]
        gens = self._gens_at(level)
        tr = {b: identity_perm(self.degree)}
        frontier = [b]
        while frontier:
            nxt = []
            for x in frontier:
                ux = tr[x]
                for g in gens:
                    y = g[x]
                    if y not in tr:
                        tr[y] = compose(ux, g)
                        nxt.append(y)
            frontier = nxt
        self.transversals[level] = tr

    def _strip(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        h = g
        for level in range(start, len(self.base)):
            x = h[self.base[level]]
            tr = self.transversals[level]
            if x not in tr:
                return h, level
            h = compose(h, inverse_perm(tr[x]))
        return h, len(self.base)

    def _add(self, g: Perm) -> None:
        res, level = self._strip(g)
        if res == identity_perm(self.degree):
            return
        while level == len(self.base):
            b = self._new_base_point(res)
            self.base.append(b)
            self.transversals.append({b: identity_perm(self.degree)})
            if res[b] != b:
                break
            level += 1
        self.sgens.append(res)
        for lvl in range(level, -1, -1):
            self._rebuild(lvl)
        self._close(level)

    def _close(self, level: int) -> None:
        """Re-establish the Schreier condition at this level and above."""
        for lvl in range(level, -1, -1):
            satisfied = False
            while not satisfied:
                satisfied = True
                tr = self.transversals[lvl]
                gens = self._gens_at(lvl)
                for x in sorted(tr):
                    ux = tr[x]
                    for s in gens:
                        uy = tr[s[x]]
                        schreier = compose(compose(ux, s), inverse_perm(uy))
                        res, reslevel = self._strip(schreier, lvl + 1)
                        if res != identity_perm(self.degree):
                            self._add(res)
                            satisfied = False
                            break
                    if not satisfied:
                        break

    # -- queries -----------------------------------------------------------

    def order(self) -> int:
        n = 1
        for tr in self.transversals:
            n *= len(tr)
        return n

    def contains(self, g: Perm) -> bool:
        res, _ = self._strip(g)
        return res == identity_perm(self.degree)

    def stabilizer_generators(self) -> list[Perm]:
        """Generators of the stabilizer of base[0] (Schreier generators)."""
        if not self.base:
            return []
        return self._gens_at(1)
