"""Schurity testing: automorphisms of the Cayley scheme of an S-ring.

An S-ring is schurian iff the basic sets coincide with the orbits of the
identity-point stabilizer of the full color-preserving group of its scheme.
The automorphism search backtracks over point images with color refinement,
builds a stabilizer chain level by level (base point 0 = the identity), and
prunes candidate images lying in the orbit of already-found automorphisms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .groups import AbelianGroup, GroupError
from .perms import Perm, PermGroup
from .srings import SRing, SRingError, make_sring

DEFAULT_SCHEME_BOUND = 96


@dataclass
class ColorScheme:
    """Complete coloring of pairs: color(x, y) = class of y * x^-1."""

    n: int
    color: tuple[tuple[int, ...], ...]

    def check_translation_invariance(self, G: AbelianGroup) -> bool:
        return all(self.color[G.mul(x, z)][G.mul(y, z)] == self.color[x][y]
                   for x in range(self.n) for y in range(self.n)
                   for z in range(self.n))


def scheme_of(A: SRing) -> ColorScheme:
    G = A.group
    n = G.order
    class_of = A.class_of
    color = tuple(tuple(class_of[G.mul(y, G.inv(x))] for y in range(n))
                  for x in range(n))
    return ColorScheme(n=n, color=color)


@dataclass
class SchurityCertificate:
    schurian: bool
    aut_order: int
    aut_generators: list[Perm]
    stabilizer_orbits: list[list[int]]
    witness_class: Optional[int]

    def to_json(self) -> dict:
        return {"schurian": self.schurian,
                "aut_order": self.aut_order,
                "stab_orbit_count": len(self.stabilizer_orbits),
                "witness_class": self.witness_class}


class _AutSearch:
    """Exhaustive color-automorphism search with refinement and orbit pruning."""

    def __init__(self, scheme: ColorScheme):
        self.n = scheme.n
        self.color = scheme.color
        self.gens_by_level: list[list[Perm]] = []
        self.orbit_sizes: list[int] = []
        self.base: list[int] = []

    def run(self) -> tuple[list[Perm], int, list[Perm]]:
        """Returns (all generators, group order, generators fixing point 0).

        The initial partition of a scheme is a single cell, so the first base
        point is always 0 (the identity) and every generator at deeper levels
        fixes it; those generate the identity-point stabilizer.
        """
        self._stabilize([])
        gens = [g for level in self.gens_by_level for g in level]
        order = 1
        for s in self.orbit_sizes:
            order *= s
        if self.base and self.base[0] != 0:
            raise AssertionError("first base point is not the identity")
        stab0 = [g for level in self.gens_by_level[1:] for g in level]
        return gens, order, stab0

    # -- stabilizer chain --------------------------------------------------

    def _stabilize(self, prefix: list[int]) -> None:
        cells = self._refined_identity_cells(prefix)
        branch = None
        for cell in sorted(cells, key=lambda c: (len(c), c[0])):
            if len(cell) > 1:
                branch = cell
                break
        if branch is None:
            return
        b = branch[0]
        level = len(self.base)
        self.base.append(b)
        self.gens_by_level.append([])
        self.orbit_sizes.append(1)
        self._stabilize(prefix + [b])
        found: list[Perm] = [g for lvl in self.gens_by_level[level:]
                             for g in lvl]
        orbit = _orbit_of(b, found, self.n)
        for c in branch[1:]:
            if c in orbit:
                continue
            f = self._find_one(prefix, b, c)
            if f is not None:
                self.gens_by_level[level].append(f)
                found.append(f)
                orbit = _orbit_of(b, found, self.n)
        self.orbit_sizes[level] = len(orbit)

    def _refined_identity_cells(self, fixed: list[int]) -> list[list[int]]:
        cells = [list(range(self.n))]
        for p in fixed:
            cells = _individualize(cells, p)
        _refine_pair(self.color, cells, None)
        return cells

    # -- first-solution isomorphism extension --------------------------------

    def _find_one(self, prefix: list[int], b: int, c: int) -> Optional[Perm]:
        src = [list(range(self.n))]
        tgt = [list(range(self.n))]
        for p in prefix:
            src = _individualize(src, p)
            tgt = _individualize(tgt, p)
        src = _individualize(src, b)
        tgt = _individualize(tgt, c)
        if not _refine_pair(self.color, src, tgt):
            return None
        return self._extend(src, tgt)

    def _extend(self, src: list[list[int]],
                tgt: list[list[int]]) -> Optional[Perm]:
        branch_idx = -1
        best = None
        for i, cell in enumerate(src):
            if len(cell) > 1 and (best is None or len(cell) < best):
                best = len(cell)
                branch_idx = i
        if branch_idx < 0:
            perm = [0] * self.n
            for scell, tcell in zip(src, tgt):
                perm[scell[0]] = tcell[0]
            p = tuple(perm)
            return p if self._is_automorphism(p) else None
        x = min(src[branch_idx])
        for y in sorted(tgt[branch_idx]):
            new_src = _individualize(src, x)
            new_tgt = _individualize(tgt, y)
            if not _refine_pair(self.color, new_src, new_tgt):
                continue
            got = self._extend(new_src, new_tgt)
            if got is not None:
                return got
        return None

    def _is_automorphism(self, p: Perm) -> bool:
        return _preserves_colors(self.color, p)


def _preserves_colors(color: tuple[tuple[int, ...], ...], p: Perm) -> bool:
    for x in range(len(p)):
        row = color[x]
        prow = color[p[x]]
        for y in range(len(p)):
            if prow[p[y]] != row[y]:
                return False
    return True


def _orbit_of(point: int, gens: Sequence[Perm], n: int) -> set[int]:
    seen = {point}
    frontier = [point]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _individualize(cells: list[list[int]], point: int) -> list[list[int]]:
    out = []
    for cell in cells:
        if point in cell and len(cell) > 1:
            out.append([point])
            out.append([x for x in cell if x != point])
        else:
            out.append(list(cell))
    return out


def _refine_pair(color: tuple[tuple[int, ...], ...], src: list[list[int]],
                 tgt: Optional[list[list[int]]]) -> bool:
    """Refine by singleton splitters, in lockstep when tgt is given.

    Splitting keys are the color to and from each singleton cell; source and
    target must split with identical key-size statistics or the node fails.
    """
    used: set[int] = set()
    while True:
        splitter = None
        for i, cell in enumerate(src):
            if len(cell) == 1 and i not in used:
                splitter = i
                break
        if splitter is None:
            return True
        used.add(splitter)
        u = src[splitter][0]
        v = tgt[splitter][0] if tgt is not None else u
        new_src: list[list[int]] = []
        new_tgt: list[list[int]] = []
        remap: dict[int, int] = {}
        for i, cell in enumerate(src):
            if len(cell) == 1:
                remap[i] = len(new_src)
                new_src.append(cell)
                if tgt is not None:
                    new_tgt.append(tgt[i])
                continue
            groups: dict[tuple[int, int], list[int]] = {}
            for x in cell:
                groups.setdefault((color[u][x], color[x][u]), []).append(x)
            if tgt is not None:
                tgroups: dict[tuple[int, int], list[int]] = {}
                for y in tgt[i]:
                    tgroups.setdefault((color[v][y], color[y][v]), []).append(y)
                if {k: len(g) for k, g in groups.items()} != \
                        {k: len(g) for k, g in tgroups.items()}:
                    return False
            if len(groups) == 1:
                remap[i] = len(new_src)
                new_src.append(cell)
                if tgt is not None:
                    new_tgt.append(tgt[i])
                continue
            for key in sorted(groups):
                new_src.append(groups[key])
                if tgt is not None:
                    new_tgt.append(tgroups[key])
        used = {remap[i] for i in used if i in remap}
        src[:] = new_src
        if tgt is not None:
            tgt[:] = new_tgt


def scheme_automorphisms(A: SRing,
                         bound: int = DEFAULT_SCHEME_BOUND) -> PermGroup:
    """The full color-preserving group of the scheme of A.

    Always contains the right translations; raises if the (mathematically
    guaranteed) containment fails, which would signal a scheme bug.
    """
    G = A.group
    if G.order > bound:
        raise GroupError(f"group order {G.order} exceeds scheme bound {bound}")
    gens, order, stab0 = _aut_search_cached(A)
    out = PermGroup(G.order, gens)
    out._known_order = order
    color = scheme_of(A).color
    for i in range(len(G.factors)):
        coords = [0] * len(G.factors)
        coords[i] = 1
        t = G.translation(G.index(coords))
        if not _preserves_colors(color, t):
            raise SRingError("scheme-inconsistency",
                             "right translation does not preserve the coloring")
    return out


def _aut_search_cached(A: SRing) -> tuple[list[Perm], int, list[Perm]]:
    cache = getattr(A, "_aut_search", None)
    if cache is None:
        search = _AutSearch(scheme_of(A))
        cache = search.run()
        A._aut_search = cache
    return cache


def brute_force_scheme_automorphisms(A: SRing) -> list[Perm]:
    """All color-preserving permutations by filtering Sym(G); |G| <= 5 only."""
    n = A.group.order
    if n > 5:
        raise GroupError("brute-force oracle is capped at 5 points")
    scheme = scheme_of(A)
    color = scheme.color
    out = []
    for p in itertools.permutations(range(n)):
        if all(color[p[x]][p[y]] == color[x][y]
               for x in range(n) for y in range(n)):
            out.append(p)
    return out


def orbit_sring(F: PermGroup, G: AbelianGroup) -> SRing:
    """The S-ring of identity-stabilizer orbits of a transitive F >= G_r."""
    if F.degree != G.order:
        raise SRingError("degree-mismatch", "permutation degree != group order")
    if len(F.orbit(0)) != G.order:
        raise SRingError("not-transitive", "group is not transitive")
    for i in range(len(G.factors)):
        coords = [0] * len(G.factors)
        coords[i] = 1
        if not F.contains(G.translation(G.index(coords))):
            raise SRingError("missing-translations",
                             "right translations are not all contained in F")
    stab = F.point_stabilizer(0)
    return make_sring(G, stab.orbits())


def is_schurian(A: SRing, bound: int = DEFAULT_SCHEME_BOUND) -> SchurityCertificate:
    """Compare identity-stabilizer orbits of the scheme group with the classes."""
    G = A.group
    if G.order > bound:
        raise GroupError(f"group order {G.order} exceeds scheme bound {bound}")
    gens, order, stab0 = _aut_search_cached(A)
    orbits = _orbits_of_gens(stab0, G.order)
    schurian = orbits == [list(c) for c in A.classes]
    witness = None
    if not schurian:
        # stabilizer orbits refine the classes; find a class splitting into >= 2
        orbit_of = {}
        for i, orb in enumerate(orbits):
            for x in orb:
                orbit_of[x] = i
        for k, c in enumerate(A.classes):
            if len({orbit_of[x] for x in c}) > 1:
                witness = k
                break
        if witness is None:
            raise SRingError("scheme-inconsistency",
                             "orbits do not refine the classes")
    return SchurityCertificate(schurian=schurian, aut_order=order,
                               aut_generators=gens,
                               stabilizer_orbits=orbits, witness_class=witness)


def _orbits_of_gens(gens: Sequence[Perm], n: int) -> list[list[int]]:
    left = set(range(n))
    out = []
    while left:
        x = min(left)
        orb = sorted(_orbit_of(x, gens, n))
        left -= set(orb)
        out.append(orb)
    return out
