"""Command-line surface: enumeration, schurity, decomposition, verification suites."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .classify import (
    check_2odd_family,
    check_8p_family,
    check_c3xc3k,
    check_order8_classification,
    check_radical_persistence,
    check_trichotomy,
    emit_report,
    schur_group_verdict,
)
from .constructions import (
    decompose_outside_class,
    detect_cyclotomic,
    detect_generalized_wreath,
    detect_tensor,
)
from .enumeration import enumerate_srings
from .groups import GroupError, hall_coprime_subgroup, make_group, parse_group_spec, sylow_subgroup
from .schurity import is_schurian
from .srings import SRing, SRingError, sring_from_json


@dataclass
class Config:
    cache_dir: Optional[str] = None
    max_group_order: int = 72
    max_aut_order: int = 10**6
    max_scheme_order: int = 96
    threads: int = 1
    output_format: str = "text"

    def __post_init__(self):
        if self.max_group_order <= 0 or self.max_scheme_order <= 0 \
                or self.max_aut_order <= 0 or self.threads <= 0:
            raise ValueError("bounds and thread count must be positive")


def _map_ordered(fn: Callable, items: Sequence, threads: int) -> list:
    """Apply fn preserving input order; thread count never changes the output."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _write_report_fragment(cfg: Config, name: str, payload: dict) -> None:
    if not cfg.cache_dir:
        return
    frag_dir = os.path.join(cfg.cache_dir, "reports")
    os.makedirs(frag_dir, exist_ok=True)
    path = os.path.join(frag_dir, f"{name}.json")
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
    os.replace(tmp, path)


def cmd_enumerate(cfg: Config, args) -> int:
    G = parse_group_spec(args.group)
    result = enumerate_srings(G, bound=cfg.max_group_order,
                              cache_dir=cfg.cache_dir)
    doc = result.to_json()
    if cfg.output_format == "csv":
        lines = ["group,rank,classes"]
        for A in result.srings:
            lines.append(f"{G.name},{A.rank},\"{[list(c) for c in A.classes]}\"")
        print("\n".join(lines))
    else:
        print(json.dumps(doc["srings"] if cfg.output_format == "json" else doc,
                         sort_keys=True))
    _write_report_fragment(cfg, f"enumerate-{G.name}",
                           {"kind": "enumeration", "group": G.name,
                            "count": len(result.srings)})
    return 0


def _load_sring(path: str) -> SRing:
    with open(path) as fh:
        return sring_from_json(json.load(fh))


def cmd_schurity(cfg: Config, args) -> int:
    G = parse_group_spec(args.group)
    if args.sring:
        rings = [_load_sring(args.sring)]
        if rings[0].group.factors != G.factors:
            raise SRingError("group-mismatch", "S-ring file is over another group")
    else:
        rings = list(enumerate_srings(G, bound=cfg.max_group_order,
                                      cache_dir=cfg.cache_dir).srings)
    certs = _map_ordered(lambda A: is_schurian(A, bound=cfg.max_scheme_order),
                         rings, cfg.threads)
    non_schurian = sum(1 for c in certs if not c.schurian)
    payload = {"kind": "schurity", "group": G.name, "total": len(rings),
               "schurian": len(rings) - non_schurian,
               "certificates": [c.to_json() for c in certs]}
    if cfg.output_format == "csv":
        lines = ["group,rank,schurian,aut_order,stab_orbits,witness_class"]
        for A, c in zip(rings, certs):
            lines.append(f"{G.name},{A.rank},{c.schurian},{c.aut_order},"
                         f"{len(c.stabilizer_orbits)},"
                         f"{'' if c.witness_class is None else c.witness_class}")
        print("\n".join(lines))
    elif cfg.output_format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for A, c in zip(rings, certs):
            flag = "schurian" if c.schurian else "NON-SCHURIAN"
            print(f"{G.name} rank={A.rank}: {flag} "
                  f"(|Aut|={c.aut_order}, {len(c.stabilizer_orbits)} orbits)")
        print(f"{len(rings) - non_schurian}/{len(rings)} schurian")
    _write_report_fragment(cfg, f"schurity-{G.name}", payload)
    return 0


def cmd_decompose(cfg: Config, args) -> int:
    G = parse_group_spec(args.group)
    A = _load_sring(args.sring)
    if A.group.factors != G.factors:
        raise SRingError("group-mismatch", "S-ring file is over another group")
    out: dict = {"group": G.name, "rank": A.rank}
    K = detect_cyclotomic(A)
    out["cyclotomic"] = None if K is None else \
        {"aut_order": K.order(),
         "generators": [list(g) for g in K.generators]}
    factors = detect_tensor(A)
    out["tensor"] = None if factors is None else \
        [sorted(H.elements) for H in factors]
    out["generalized_wreath_sections"] = [
        {"U": sorted(s.U.elements), "L": sorted(s.L.elements)}
        for s in detect_generalized_wreath(A)]
    out["outside_class_decompositions"] = _dense_decompositions(A)
    print(json.dumps(out, sort_keys=True))
    return 0


def _dense_decompositions(A: SRing) -> Optional[list]:
    """decompose_outside_class over H x P when G has that shape and A is dense."""
    from .srings import is_dense
    G = A.group
    primes = sorted({p for p in range(2, G.order + 1)
                     if G.order % p == 0 and _is_prime(p)})
    for p in primes:
        P = sylow_subgroup(G, p)
        if P.order != p:
            continue
        H = hall_coprime_subgroup(G, p)
        if H.order * p != G.order:
            continue
        try:
            if not is_dense(A, H, P):
                continue
        except SRingError:
            continue
        items = []
        for i, X in enumerate(A.classes):
            if set(X) & (H.elements | P.elements):
                continue
            d = decompose_outside_class(A, i, H, P)
            items.append({"class": list(X),
                          "blocks_H": d.blocks_H, "blocks_P": d.blocks_P,
                          "index": len(d.blocks_P)})
        return items
    return None


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(math.isqrt(n)) + 1))


SUITE_GROUPS_CLASSIFICATION = ["4,6", "2,2,2,3", "4,4"]


def cmd_classify(cfg: Config, args) -> int:
    suite = args.suite
    verdicts: list = []
    if suite == "c4c2":
        verdicts.append(check_order8_classification(make_group([4, 2])))
    elif suite == "e8":
        verdicts.append(check_order8_classification(make_group([2, 2, 2])))
    elif suite.startswith("8p:"):
        p = int(suite.split(":", 1)[1])
        for factors in ([4, 2 * p], [2, 2, 2, p]):
            G = make_group(factors)
            rings = enumerate_srings(G, bound=cfg.max_group_order,
                                     cache_dir=cfg.cache_dir).srings
            nontrivial = [A for A in rings if not A.is_trivial()]
            verdicts.extend(_map_ordered(check_trichotomy, nontrivial,
                                         cfg.threads))
            verdicts.extend(_map_ordered(check_8p_family, nontrivial,
                                         cfg.threads))
    elif suite.startswith("2odd:"):
        v = int(suite.split(":", 1)[1])
        targets = []
        if 6 * 3**v <= cfg.max_group_order:
            targets.append([6, 3**v])
        if _is_prime(v) and 18 * v <= cfg.max_group_order:
            targets.append([3, 3, 2 * v])
        for factors in targets:
            G = make_group(factors)
            rings = enumerate_srings(G, bound=cfg.max_group_order,
                                     cache_dir=cfg.cache_dir).srings
            nontrivial = [A for A in rings if not A.is_trivial()]
            verdicts.extend(_map_ordered(check_trichotomy, nontrivial,
                                         cfg.threads))
            verdicts.extend(_map_ordered(check_2odd_family, nontrivial,
                                         cfg.threads))
        if targets and targets[0][0] == 6 and 6 * 3**v <= cfg.max_group_order \
                and v >= 2:
            G = make_group([3, 3**v])
            rings = enumerate_srings(G, bound=cfg.max_group_order,
                                     cache_dir=cfg.cache_dir).srings
            verdicts.extend(_map_ordered(check_radical_persistence,
                                         list(rings), cfg.threads))
            nontrivial = [A for A in rings if not A.is_trivial()]
            verdicts.extend(_map_ordered(check_c3xc3k, nontrivial, cfg.threads))
    elif suite == "classification":
        for spec in SUITE_GROUPS_CLASSIFICATION:
            G = parse_group_spec(spec)
            verdicts.append(schur_group_verdict(G, enum_bound=cfg.max_group_order,
                                                scheme_bound=cfg.max_scheme_order))
    else:
        print(f"unknown classify suite: {suite}", file=sys.stderr)
        return 1
    print(emit_report(verdicts, fmt=cfg.output_format), end="")
    violations = _count_violations(verdicts)
    _write_report_fragment(cfg, f"classify-{suite.replace(':', '-')}",
                           {"kind": "classify", "suite": suite,
                            "items": [v.to_json() for v in verdicts],
                            "violations": violations})
    return 2 if violations else 0


def _count_violations(verdicts: Iterable) -> int:
    bad = 0
    for v in verdicts:
        if hasattr(v, "is_schur_group"):
            expected = _in_classification_list(v.group)
            if v.is_schur_group != expected:
                bad += 1
        elif not v.holds:
            bad += 1
    return bad


def _in_classification_list(name: str) -> bool:
    """Membership in the abelian Schur-group classification, for the groups the
    classification suite runs by default."""
    G = parse_group_spec(name)
    from .classify import family_of
    if family_of(G) is not None:
        return True
    inv = G.invariant_factors
    known = {(2, 2), (2, 2, 2), (3, 3), (2, 2, 2, 2), (3, 3, 3),
             (2, 2, 2, 2, 2)}
    if inv in known:
        return True
    if len(inv) == 1:
        return _cyclic_schur(inv[0])
    if len(inv) == 2 and inv[0] == 2 and _is_power_of2(inv[1]):
        return True
    if len(inv) == 2 and inv[0] == 3 and _is_power_of3(inv[1]):
        return True
    return False


def _is_power_of2(n: int) -> bool:
    return n & (n - 1) == 0


def _is_power_of3(n: int) -> bool:
    while n % 3 == 0:
        n //= 3
    return n == 1


def _cyclic_schur(n: int) -> bool:
    """Cyclic Schur groups: orders p^k, pq^k, 2pq^k, pqr, 2pqr."""
    fac: dict[int, int] = {}
    m = n
    d = 2
    while d * d <= m:
        while m % d == 0:
            fac[d] = fac.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        fac[m] = fac.get(m, 0) + 1
    two = fac.pop(2, 0)
    odd = sorted(fac.values())
    if two >= 2:
        # 2^k alone, or p * 2^k (= pq^k with q = 2)
        return not odd or odd == [1]
    if two == 1:
        if len(odd) <= 1:
            return True                      # 2, or 2q^k
        if len(odd) == 2:
            return min(odd) == 1             # 2pq^k
        return len(odd) == 3 and all(e == 1 for e in odd)   # 2pqr
    if len(odd) <= 1:
        return True                          # p^k
    if len(odd) == 2:
        return min(odd) == 1                 # pq^k
    return len(odd) == 3 and all(e == 1 for e in odd)       # pqr


def cmd_report(cfg: Config, args) -> int:
    if not cfg.cache_dir:
        print("report requires a cache directory (set --cache-dir or "
              "SCHURKIT_CACHE)", file=sys.stderr)
        return 1
    frag_dir = os.path.join(cfg.cache_dir, "reports")
    items = []
    if os.path.isdir(frag_dir):
        for name in sorted(os.listdir(frag_dir)):
            if name.endswith(".json"):
                with open(os.path.join(frag_dir, name)) as fh:
                    items.append(json.load(fh))
    doc = {"schema_version": 1, "fragments": items}
    if cfg.output_format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    elif cfg.output_format == "csv":
        print("kind,name,summary")
        for it in items:
            kind = it.get("kind", "?")
            name = it.get("group", it.get("suite", "?"))
            if kind == "enumeration":
                print(f"{kind},{name},count={it['count']}")
            elif kind == "schurity":
                print(f"{kind},{name},{it['schurian']}/{it['total']}")
            else:
                print(f"{kind},{name},violations={it.get('violations', '?')}")
    else:
        for it in items:
            print(json.dumps(it, sort_keys=True))
    return 0


def _add_common_options(parser: argparse.ArgumentParser,
                        suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--cache-dir",
                        default=d if suppress else os.environ.get("SCHURKIT_CACHE"))
    parser.add_argument("--threads", type=int,
                        default=d if suppress else 1)
    parser.add_argument("--format", choices=["json", "csv", "text"],
                        dest="output_format",
                        default=d if suppress else "text")
    parser.add_argument("--max-group-order", type=int,
                        default=d if suppress else 72)
    parser.add_argument("--max-scheme-order", type=int,
                        default=d if suppress else 96)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schurkit",
        description="Schur rings over finite abelian groups: enumeration, "
                    "schurity, decomposition, verification suites.")
    _add_common_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list all S-rings over a group")
    p.add_argument("group")
    _add_common_options(p, suppress=True)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("schurity", help="schurity certificates")
    p.add_argument("group")
    p.add_argument("--sring", help="JSON file with one S-ring")
    _add_common_options(p, suppress=True)
    p.set_defaults(fn=cmd_schurity)

    p = sub.add_parser("decompose", help="run all structural detectors")
    p.add_argument("group")
    p.add_argument("--sring", required=True)
    _add_common_options(p, suppress=True)
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("classify",
                       help="verification suite: c4c2, e8, 8p:<p>, "
                            "2odd:<k|q>, classification")
    p.add_argument("suite")
    _add_common_options(p, suppress=True)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("report", help="aggregate cached results into a report")
    _add_common_options(p, suppress=True)
    p.set_defaults(fn=cmd_report)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        cfg = Config(cache_dir=args.cache_dir, threads=args.threads,
                     output_format=args.output_format,
                     max_group_order=args.max_group_order,
                     max_scheme_order=args.max_scheme_order)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.fn(cfg, args)
    except (GroupError, SRingError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
