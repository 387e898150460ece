"""Command-line front end.

Subcommands: order, check, relate, components, decompose, gallery, bench.
JSON outputs carry a stable ``schema: 1`` field.  Exit codes: 0 success (for
``check``: the condition holds, possibly with budgeted exceptions), 1 a
violated condition, 2 unusable input.
"""

import argparse
import json
import os
import sys
import time
from typing import List, Optional

from suppq import arith, gallery, gm
from suppq.cache import OrderCache, spec_hash
from suppq.conditions import (
    ProductPoint,
    ScanConfig,
    check_lmsp,
    check_lsp,
    check_msp,
    check_rsp,
    check_sp,
    check_wmsp,
    infer_gm_group,
    parse_group,
    parse_point,
    product_order,
    bad_reduction_reason,
)
from suppq.errors import EmptyRange, SpecSyntaxError, SuppqError
from suppq.relations import find_product_relation

CACHE_ENV = "SUPPQ_CACHE"


class _InputError(Exception):
    pass


def _parse_primes(text: str):
    parts = text.split("..")
    if len(parts) != 2:
        raise _InputError(f"prime range must be lo..hi, got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise _InputError(f"prime range must be lo..hi, got {text!r}") from None
    return lo, hi


def _resolve_point(point_text: str, group_text: Optional[str]) -> ProductPoint:
    group = parse_group(group_text) if group_text else infer_gm_group(point_text)
    return parse_point(group, point_text)


def _make_cache(args) -> Optional[OrderCache]:
    if getattr(args, "no_cache", False):
        return None
    path = getattr(args, "cache", None) or os.environ.get(CACHE_ENV)
    if path:
        return OrderCache(path)
    return None


def _emit(doc: dict) -> None:
    print(json.dumps(doc))


# ------------------------------------------------------------- subcommands

def cmd_order(args) -> int:
    lo, hi = _parse_primes(args.primes)
    point = _resolve_point(args.point, args.group)
    ells = [int(e) for e in args.ell or []]
    cache = _make_cache(args)
    gh = spec_hash(point.group.spec_string())
    ph = spec_hash(point.spec_string())
    if not args.json:
        header = ["p", "order"] + [f"v{ell}" for ell in ells]
        print("\t".join(header))
    for p in arith.prime_iterator(lo, hi):
        reason = bad_reduction_reason(point, p)
        if reason:
            if args.json:
                _emit({"schema": 1, "p": p, "skipped": reason})
            else:
                print(f"warning: skipped p={p}: {reason}", file=sys.stderr)
            continue
        order = cache.get(gh, ph, p) if cache else None
        if order is None:
            order = product_order(point, p)
            if cache:
                cache.put(gh, ph, p, order)
        vals = {ell: arith.valuation(order, ell) for ell in ells}
        if args.json:
            _emit({"schema": 1, "p": p, "order": order,
                   **{f"v{ell}": v for ell, v in vals.items()}})
        else:
            print("\t".join([str(p), str(order)] + [str(vals[ell]) for ell in ells]))
    return 0


def _vector_points(args, texts: List[str], group_text: Optional[str]) -> List[ProductPoint]:
    if group_text:
        group = parse_group(group_text)
    else:
        group = infer_gm_group(texts[0])
    return [parse_point(group, t) for t in texts]


def cmd_check(args) -> int:
    lo, hi = _parse_primes(args.primes)
    cfg = ScanConfig(
        lo=lo,
        hi=hi,
        budget=args.budget,
        box=args.box,
        force_box=args.force_box,
        cache=_make_cache(args),
    )
    cond = args.condition
    if cond in ("sp", "lsp", "rsp"):
        if len(args.p) != 1 or len(args.q) != 1:
            raise _InputError(f"{cond} takes exactly one --p and one --q")
        p_pt = _resolve_point(args.p[0], args.group_p or args.group)
        q_pt = _resolve_point(args.q[0], args.group_q or args.group)
        if cond == "sp":
            report = check_sp(p_pt, q_pt, cfg)
        elif cond == "lsp":
            if args.ell is None:
                raise _InputError("lsp needs --ell")
            report = check_lsp(p_pt, q_pt, args.ell, cfg, slack=args.slack)
        else:
            sample = tuple(int(x) for x in args.sample.split(",")) if args.sample else None
            report = check_rsp(p_pt, q_pt, sample, cfg)
    elif cond in ("msp", "lmsp"):
        if not args.p or len(args.p) != len(args.q):
            raise _InputError(f"{cond} takes equally many --p and --q")
        p_vec = _vector_points(args, args.p, args.group_p or args.group)
        q_vec = _vector_points(args, args.q, args.group_q or args.group)
        if cond == "msp":
            report = check_msp(p_vec, q_vec, cfg)
        else:
            if args.ell is None:
                raise _InputError("lmsp needs --ell")
            report = check_lmsp(p_vec, q_vec, args.ell, cfg)
    elif cond == "wmsp":
        if len(args.p) != 2 or len(args.q) != 2:
            raise _InputError("wmsp takes exactly two --p and two --q")
        p_vec = _vector_points(args, args.p, args.group_p or args.group)
        q_vec = _vector_points(args, args.q, args.group_q or args.group)
        report = check_wmsp(p_vec[0], p_vec[1], q_vec[0], q_vec[1], cfg)
    else:  # pragma: no cover - argparse restricts choices
        raise _InputError(f"unknown condition {cond}")
    _emit(report.to_json())
    return 0 if report.verdict in ("HOLDS", "HOLDS_WITH_EXCEPTIONS") else 1


def cmd_relate(args) -> int:
    p_pt = _resolve_point(args.p, args.group_p or args.group)
    q_pt = _resolve_point(args.q, args.group_q or args.group)
    rel = find_product_relation(p_pt, q_pt, args.bound)
    if rel is None:
        doc = {"schema": 1, "relation": None}
        if args.bound is not None:
            doc["note"] = f"no relation within bound {args.bound} (curve blocks are bounded search)"
        _emit(doc)
        return 0
    _emit({"schema": 1, "relation": rel.to_json()})
    return 0


def cmd_components(args) -> int:
    pt = gm.parse_gm_point(args.point)
    _emit({"schema": 1, "point": args.point, "component_count": gm.component_count(pt)})
    return 0


def cmd_decompose(args) -> int:
    pt = gm.parse_gm_point(args.point)
    dec = gm.decompose_independent(pt)
    _emit({
        "schema": 1,
        "point": args.point,
        "J": list(dec.indices),
        "d": dec.d,
        "subpoint": gm.format_gm_point(dec.subpoint),
    })
    return 0


def cmd_gallery(args) -> int:
    if args.list:
        for name, (_, summary) in sorted(gallery.CASES.items()):
            print(f"{name}\t{summary}")
        return 0
    names = list(args.cases)
    if args.all:
        names = sorted(gallery.CASES)
    if not names:
        raise _InputError("give case names, --all or --list")
    if args.primes:
        lo, hi = _parse_primes(args.primes)
    results = []
    for name in names:
        if name not in gallery.CASES:
            raise _InputError(f"unknown case {name!r}; see `suppq gallery --list`")
        kw = {}
        if name == "dichotomy":
            kw = {"trials": args.trials, "seed": args.seed}
        elif name == "c-growth" and args.h is not None:
            kw = {"hs": [args.h]}
        elif name == "cm-annihilator" and args.primes:
            kw = {"lo": lo, "hi": hi}
        elif name in ("finite-sample", "wmsp-gap", "msp-split-pairs") and args.primes:
            kw = {"cfg": ScanConfig(lo, hi, box=args.box)}
        res = gallery.run_case(name, **kw)
        results.append(res)
        _emit({"schema": 1, **res})
    width = max(len(r["case"]) for r in results)
    print("\ncase" + " " * (width - 1) + "verdict  claims", file=sys.stderr)
    for r in results:
        verdict = "PASS" if r["passed"] else "FAIL"
        print(f"{r['case']:<{width + 3}}{verdict:<9}{len(r['claims'])}", file=sys.stderr)
    return 0 if all(r["passed"] for r in results) else 1


def cmd_bench(args) -> int:
    from suppq import _pykernels

    try:
        from suppq import _ckernels
    except ImportError:
        _ckernels = None

    hi = 3000 if args.quick else 30000
    ec_hi = 500 if args.quick else 5000
    count_p = 9973 if args.quick else 99991

    def run(mod):
        t0 = time.perf_counter()
        for p in arith.prime_iterator(3, hi):
            pairs = gm.factored(p - 1).pairs()
            mod.mult_order(2, p, pairs)
        t_mult = time.perf_counter() - t0
        t0 = time.perf_counter()
        for p in arith.prime_iterator(5, ec_hi):
            if p in (2, 3):
                continue
            n = mod.ec_group_order_bsgs(2 % p, 3 % p, p)
            if n == 0:
                mod.ec_count(2 % p, 3 % p, p)
        t_order = time.perf_counter() - t0
        t0 = time.perf_counter()
        mod.ec_count(2 % count_p, 3 % count_p, count_p)
        t_count = time.perf_counter() - t0
        return t_mult, t_order, t_count

    rows = [("pure", *run(_pykernels))]
    if _ckernels is not None:
        rows.append(("compiled", *run(_ckernels)))
    else:
        print("compiled kernels unavailable; timing pure only", file=sys.stderr)
    print(f"{'backend':<10}{'mult_order':<14}{'ec_group_order':<16}{'ec_count':<12}")
    for name, t1, t2, t3 in rows:
        print(f"{name:<10}{t1:<14.4f}{t2:<16.4f}{t3:<12.4f}")
    if len(rows) == 2:
        speedups = [rows[0][i] / rows[1][i] for i in (1, 2, 3)]
        cells = [f"{s:.1f}x".ljust(w) for s, w in zip(speedups, (14, 16, 12))]
        print(f"{'speedup':<10}" + "".join(cells))
    return 0


# ------------------------------------------------------------------ main

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="suppq", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_cache_flags(p):
        p.add_argument("--cache", help=f"order cache path (or ${CACHE_ENV})")
        p.add_argument("--no-cache", action="store_true", help="bypass any cache")

    p = sub.add_parser("order", help="orders of a point mod the primes of a range")
    p.add_argument("--group", help="group spec, e.g. gm:2 or ec:0,-2 or gm:1*ec:1,0")
    p.add_argument("--point", required=True, help="point spec matching the group")
    p.add_argument("--primes", default="2..10000", help="range lo..hi")
    p.add_argument("--ell", action="append", help="also print the ell-adic valuation")
    p.add_argument("--json", action="store_true", help="JSON lines instead of TSV")
    add_cache_flags(p)
    p.set_defaults(fn=cmd_order)

    p = sub.add_parser("check", help="check a divisibility condition over a prime range")
    p.add_argument("condition", choices=["sp", "lsp", "rsp", "msp", "wmsp", "lmsp"])
    p.add_argument("--p", action="append", default=[], help="P point spec (repeat for vectors)")
    p.add_argument("--q", action="append", default=[], help="Q point spec (repeat for vectors)")
    p.add_argument("--group", help="group spec for both sides")
    p.add_argument("--group-p", help="group spec for the P side")
    p.add_argument("--group-q", help="group spec for the Q side")
    p.add_argument("--primes", default="2..10000", help="range lo..hi")
    p.add_argument("--ell", type=int, help="the prime ell (lsp, lmsp)")
    p.add_argument("--S", dest="sample", help="comma-separated prime sample (rsp)")
    p.add_argument("--box", type=int, default=20, help="coefficient box bound (multilinear)")
    p.add_argument("--budget", type=int, default=0, help="exception budget")
    p.add_argument("--slack", type=int, default=0, help="additive valuation slack (lsp)")
    p.add_argument("--force-box", action="store_true", help="skip exact mode")
    add_cache_flags(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("relate", help="find M and minimal c with M(P) = c*Q")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--group", help="group spec for both sides")
    p.add_argument("--group-p")
    p.add_argument("--group-q")
    p.add_argument("--bound", type=int, help="search bound (required with curve factors)")
    p.set_defaults(fn=cmd_relate)

    p = sub.add_parser("components", help="component count of the subgroup closure")
    p.add_argument("--point", required=True, help="gm point spec")
    p.set_defaults(fn=cmd_components)

    p = sub.add_parser("decompose", help="independent subpoint and multiplier d")
    p.add_argument("--point", required=True, help="gm point spec")
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("gallery", help="run named constructions")
    p.add_argument("cases", nargs="*", help="case names")
    p.add_argument("--all", action="store_true")
    p.add_argument("--list", action="store_true")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--h", type=int, help="single h for c-growth")
    p.add_argument("--primes", help="range lo..hi override")
    p.add_argument("--box", type=int, default=20)
    p.set_defaults(fn=cmd_gallery)

    p = sub.add_parser("bench", help="compare pure and compiled kernels")
    p.add_argument("--quick", action="store_true", help="small sizes (for tests)")
    p.set_defaults(fn=cmd_bench)

    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (_InputError, SpecSyntaxError, EmptyRange) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SuppqError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
