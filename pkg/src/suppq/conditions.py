"""Checkers for the divisibility conditions sp, lsp, rsp, msp, wmsp, lmsp.

A scan walks the primes of a range, skips primes of bad reduction (they never
count against the exception budget), and records every violation with a
witness that can be re-checked independently.  A scan certifies at most "no
violation in this range beyond the budget": verdicts are range-relative by
design, since the underlying statements quantify over all but finitely many
primes.

For the multilinear conditions there are two modes.  On pure multiplicative
groups with p below the discrete-log limit, the kernel of
m -> sum m_i * (point mod p) is computed exactly as an integer lattice via
discrete logarithms (exact mode).  Otherwise all m in a coefficient box are
tested (box mode).
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple, Union

from suppq import arith, ec, gm
from suppq.backend import kernels
from suppq.errors import (
    BadReduction,
    DiscreteLogLimitExceeded,
    FactorizationLimitExceeded,
    SpecSyntaxError,
)

DEFAULT_DLOG_LIMIT = 10**6
DEFAULT_BOX = 20

# first 25 primes: the default finite stand-in for the infinite set S of rsp
DEFAULT_RSP_SAMPLE = tuple(arith.prime_iterator(2, 97))


# ------------------------------------------------------- groups and points

@dataclass(frozen=True)
class GmFactor:
    dim: int

    def spec_string(self) -> str:
        return f"gm:{self.dim}"


@dataclass(frozen=True)
class EcFactor:
    curve: ec.CurveQ

    def spec_string(self) -> str:
        return f"ec:{self.curve.spec_string()}"


Factor = Union[GmFactor, EcFactor]


@dataclass(frozen=True)
class GroupSpec:
    factors: Tuple[Factor, ...]

    def spec_string(self) -> str:
        return "*".join(f.spec_string() for f in self.factors)

    @property
    def pure_gm(self) -> bool:
        return all(isinstance(f, GmFactor) for f in self.factors)

    @property
    def gm_dim(self) -> int:
        return sum(f.dim for f in self.factors if isinstance(f, GmFactor))


@dataclass(frozen=True)
class ProductPoint:
    group: GroupSpec
    components: Tuple[object, ...]  # per factor: tuple[Fraction,...] | PointQ

    def __post_init__(self):
        if len(self.components) != len(self.group.factors):
            raise SpecSyntaxError("point does not match the number of factors")
        for f, c in zip(self.group.factors, self.components):
            if isinstance(f, GmFactor):
                if not (isinstance(c, tuple) and len(c) == f.dim and all(isinstance(x, Fraction) and x != 0 for x in c)):
                    raise SpecSyntaxError(f"component {c!r} does not fit {f.spec_string()}")
            else:
                if not (c is None or (isinstance(c, tuple) and len(c) == 2)):
                    raise SpecSyntaxError(f"component {c!r} does not fit {f.spec_string()}")
                if not ec.on_curve(f.curve, c):
                    raise SpecSyntaxError(f"component {c!r} is not on {f.spec_string()}")

    def spec_string(self) -> str:
        parts = []
        for f, c in zip(self.group.factors, self.components):
            if isinstance(f, GmFactor):
                parts.append(gm.format_gm_point(c))
            else:
                parts.append(ec.format_ec_point(c))
        return "*".join(parts)


def parse_group(text: str) -> GroupSpec:
    factors: List[Factor] = []
    for part in text.split("*"):
        part = part.strip()
        if part.startswith("gm:"):
            try:
                dim = int(part[3:])
            except ValueError:
                raise SpecSyntaxError(f"bad gm factor {part!r}") from None
            if dim < 1:
                raise SpecSyntaxError(f"gm dimension must be >= 1: {part!r}")
            factors.append(GmFactor(dim))
        elif part.startswith("ec:"):
            try:
                factors.append(EcFactor(ec.parse_curve(part[3:])))
            except ValueError as e:
                raise SpecSyntaxError(str(e)) from None
        else:
            raise SpecSyntaxError(f"factor must start with 'gm:' or 'ec:', got {part!r}")
    if not factors:
        raise SpecSyntaxError("empty group spec")
    return GroupSpec(tuple(factors))


def parse_point(group: GroupSpec, text: str) -> ProductPoint:
    parts = [part.strip() for part in text.split("*")]
    if len(parts) != len(group.factors):
        raise SpecSyntaxError(
            f"point {text!r} has {len(parts)} components, group has {len(group.factors)}"
        )
    comps: List[object] = []
    for f, part in zip(group.factors, parts):
        try:
            if isinstance(f, GmFactor):
                comps.append(gm.parse_gm_point(part))
            else:
                comps.append(ec.parse_ec_point(part))
        except (ValueError, ZeroDivisionError) as e:
            raise SpecSyntaxError(f"bad component {part!r}: {e}") from None
    return ProductPoint(group, tuple(comps))


def infer_gm_group(point_text: str) -> GroupSpec:
    """Group for a bare point spec: n comma-separated rationals -> gm:n."""
    n = len(point_text.split(","))
    return GroupSpec((GmFactor(n),))


# ---------------------------------------------------- reduction and orders

def bad_reduction_reason(point: ProductPoint, p: int) -> Optional[str]:
    for f, c in zip(point.group.factors, point.components):
        if isinstance(f, GmFactor):
            if not gm.gm_good_reduction(c, p):
                return f"p divides a coordinate of {gm.format_gm_point(c)}"
        else:
            if not ec.ec_good_reduction(f.curve, p):
                return f"p divides 2*disc of {f.spec_string()}"
    return None


def reduce_product(point: ProductPoint, p: int) -> List[object]:
    """Per-factor reduction: int tuples for gm factors, PointFp for curves."""
    out: List[object] = []
    for f, c in zip(point.group.factors, point.components):
        if isinstance(f, GmFactor):
            out.append(gm.gm_reduce(c, p))
        else:
            out.append(ec.ec_reduce(f.curve, c, p))
    return out


def product_order(point: ProductPoint, p: int) -> int:
    """Order of (point mod p): the lcm of the component orders."""
    order = 1
    for f, c in zip(point.group.factors, point.components):
        if isinstance(f, GmFactor):
            for a in gm.gm_reduce(c, p):
                order = lcm(order, gm.mult_order(a, p))
        else:
            red = ec.ec_reduce(f.curve, c, p)
            order = lcm(order, ec.ec_point_order(f.curve, red, p))
    return order


def _flatten_gm(point: ProductPoint) -> gm.GmPoint:
    coords: List[Fraction] = []
    for c in point.components:
        coords.extend(c)
    return tuple(coords)


# ------------------------------------------------- reduced product algebra

def _red_zero(group: GroupSpec, p: int) -> Tuple[object, ...]:
    out = []
    for f in group.factors:
        out.append((1,) * f.dim if isinstance(f, GmFactor) else None)
    return tuple(out)


def _red_add(group: GroupSpec, u, v, p: int) -> Tuple[object, ...]:
    out = []
    for f, a, b in zip(group.factors, u, v):
        if isinstance(f, GmFactor):
            out.append(tuple(x * y % p for x, y in zip(a, b)))
        else:
            out.append(kernels.ec_add(a, b, f.curve.a % p, p))
    return tuple(out)


def _red_is_zero(group: GroupSpec, u) -> bool:
    for f, a in zip(group.factors, u):
        if isinstance(f, GmFactor):
            if any(x != 1 for x in a):
                return False
        elif a is not None:
            return False
    return True


def _red_mul(group: GroupSpec, k: int, u, p: int) -> Tuple[object, ...]:
    out = []
    for f, a in zip(group.factors, u):
        if isinstance(f, GmFactor):
            out.append(tuple(pow(x, k, p) for x in a))
        else:
            out.append(kernels.ec_mul(k, a, f.curve.a % p, p))
    return tuple(out)


def _red_order_coprime_to(group: GroupSpec, u, p: int, ell: int) -> bool:
    """True when the order of the reduced point is coprime to ell."""
    for f, a in zip(group.factors, u):
        if isinstance(f, GmFactor):
            m = (p - 1) // ell ** arith.valuation(p - 1, ell)
            if any(pow(x, m, p) != 1 for x in a):
                return False
        else:
            n, _ = ec.ec_group_order_factored(f.curve, p)
            m = n // ell ** arith.valuation(n, ell)
            if kernels.ec_mul(m, a, f.curve.a % p, p) is not None:
                return False
    return True


# ------------------------------------------------------- reports and scans

@dataclass
class ScanConfig:
    lo: int = 2
    hi: int = 10_000
    budget: int = 0
    box: int = DEFAULT_BOX
    sample: Optional[Tuple[int, ...]] = None  # rsp's finite stand-in for S
    dlog_limit: int = DEFAULT_DLOG_LIMIT
    force_box: bool = False
    cache: Optional[object] = None  # suppq.cache.OrderCache


@dataclass
class ConditionReport:
    condition: str
    lo: int
    hi: int
    tested: int = 0
    skipped: List[dict] = field(default_factory=list)
    violations: List[dict] = field(default_factory=list)
    budget: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def violating_primes(self) -> int:
        return len({v["p"] for v in self.violations})

    @property
    def verdict(self) -> str:
        if not self.violations:
            return "HOLDS"
        if self.violating_primes <= self.budget:
            return "HOLDS_WITH_EXCEPTIONS"
        return "VIOLATED"

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "condition": self.condition,
            "range": [self.lo, self.hi],
            "tested": self.tested,
            "skipped": self.skipped,
            "violations": self.violations,
            "verdict": self.verdict,
            "exceptions": self.violating_primes,
            "budget": self.budget,
            "notes": self.notes,
        }


def merge_reports(a: ConditionReport, b: ConditionReport) -> ConditionReport:
    """Combine reports over disjoint ranges into one over the union."""
    if a.condition != b.condition:
        raise ValueError("cannot merge reports for different conditions")
    if not (a.hi < b.lo or b.hi < a.lo):
        raise ValueError("ranges overlap")
    out = ConditionReport(
        condition=a.condition,
        lo=min(a.lo, b.lo),
        hi=max(a.hi, b.hi),
        tested=a.tested + b.tested,
        skipped=sorted(a.skipped + b.skipped, key=lambda s: s["p"]),
        violations=sorted(a.violations + b.violations, key=lambda v: (v["p"], sorted(v["witness"].items(), key=str))),
        budget=a.budget,
        notes=sorted(set(a.notes) | set(b.notes)),
    )
    return out


class _SkipPrime(Exception):
    pass


def _scan(condition: str, cfg: ScanConfig, points: Sequence[ProductPoint], per_prime, notes: List[str]) -> ConditionReport:
    report = ConditionReport(condition, cfg.lo, cfg.hi, budget=cfg.budget, notes=list(notes))
    for p in arith.prime_iterator(cfg.lo, cfg.hi):
        reason = None
        for pt in points:
            reason = bad_reduction_reason(pt, p)
            if reason:
                break
        if reason:
            report.skipped.append({"p": p, "reason": reason})
            continue
        try:
            witnesses = per_prime(p)
        except _SkipPrime as e:
            report.skipped.append({"p": p, "reason": str(e)})
            continue
        except BadReduction as e:
            report.skipped.append({"p": p, "reason": str(e)})
            continue
        except FactorizationLimitExceeded as e:
            report.skipped.append({"p": p, "reason": f"factorization limit: {e}"})
            continue
        report.tested += 1
        for w in witnesses:
            report.violations.append({"p": p, "witness": w})
    return report


class _CachedOrder:
    """Order of one (group, point) pair per prime, backed by the on-disk cache."""

    def __init__(self, point: ProductPoint, cache):
        self.point = point
        self.cache = cache
        if cache is not None:
            from suppq.cache import spec_hash

            self.gh = spec_hash(point.group.spec_string())
            self.ph = spec_hash(point.spec_string())

    def order(self, p: int) -> int:
        if self.cache is not None:
            hit = self.cache.get(self.gh, self.ph, p)
            if hit is not None:
                return hit
        o = product_order(self.point, p)
        if self.cache is not None:
            self.cache.put(self.gh, self.ph, p, o)
        return o


# ------------------------------------------------------ sp / lsp / rsp

def check_sp(p_pt: ProductPoint, q_pt: ProductPoint, cfg: ScanConfig) -> ConditionReport:
    """ord(Q mod p) divides ord(P mod p) at every good prime of the range."""
    op = _CachedOrder(p_pt, cfg.cache)
    oq = _CachedOrder(q_pt, cfg.cache)

    def per_prime(p):
        ordp, ordq = op.order(p), oq.order(p)
        if ordp % ordq:
            return [{"ord_p": ordp, "ord_q": ordq}]
        return []

    return _scan("sp", cfg, [p_pt, q_pt], per_prime, [])


def check_lsp(p_pt: ProductPoint, q_pt: ProductPoint, ell: int, cfg: ScanConfig, slack: int = 0) -> ConditionReport:
    """v_ell(ord(Q mod p)) <= v_ell(ord(P mod p)) + slack at every good prime.

    slack > 0 is the weakened form; it amounts to comparing P with ell**slack * Q.
    """
    if not arith.is_prime(ell):
        raise ValueError(f"ell must be prime, got {ell}")
    op = _CachedOrder(p_pt, cfg.cache)
    oq = _CachedOrder(q_pt, cfg.cache)
    notes = [f"ell={ell}"]
    if slack:
        notes.append(f"slack={slack}: comparing P against ell^{slack} * Q")

    def per_prime(p):
        ordp, ordq = op.order(p), oq.order(p)
        vp, vq = arith.valuation(ordp, ell), arith.valuation(ordq, ell)
        if vq > vp + slack:
            return [{"v_p": vp, "v_q": vq, "ord_p": ordp, "ord_q": ordq}]
        return []

    return _scan("lsp", cfg, [p_pt, q_pt], per_prime, notes)


def check_rsp(p_pt: ProductPoint, q_pt: ProductPoint, sample: Optional[Sequence[int]], cfg: ScanConfig) -> ConditionReport:
    """For each ell in the sample: ell | ord(Q mod p) implies ell | ord(P mod p).

    The sample is a finite stand-in for the infinite set S of the radical
    condition; the report always flags the approximation.
    """
    ells = tuple(sample) if sample else (cfg.sample or DEFAULT_RSP_SAMPLE)
    if not ells:
        raise ValueError("rsp needs a non-empty sample of primes")
    for ell in ells:
        if not arith.is_prime(ell):
            raise ValueError(f"sample must contain primes, got {ell}")
    op = _CachedOrder(p_pt, cfg.cache)
    oq = _CachedOrder(q_pt, cfg.cache)
    notes = [f"finite sample approximates an infinite S: {list(ells)}"]

    def per_prime(p):
        ordp, ordq = op.order(p), oq.order(p)
        out = []
        for ell in ells:
            if ordp % ell and ordq % ell == 0:
                out.append({"ell": ell, "ord_p": ordp, "ord_q": ordq})
        return out

    return _scan("rsp", cfg, [p_pt, q_pt], per_prime, notes)


# ------------------------------------------------- msp / wmsp / lmsp

def _dlog_rows(points: Sequence[ProductPoint], p: int, g: int) -> List[List[int]]:
    """Row t = discrete logs of coordinate t across the points (pure gm)."""
    reduced = [list(itertools.chain.from_iterable(reduce_product(pt, p))) for pt in points]
    dim = len(reduced[0])
    return [[kernels.dlog(reduced[i][t], g, p) for i in range(len(points))] for t in range(dim)]


def _mod_kernel_generators(rows: List[List[int]], modulus: int, n: int) -> List[Tuple[int, ...]]:
    """Generators of {m in Z^n : rows . m = 0 mod modulus}."""
    d = len(rows)
    # right kernel of [rows | modulus*I_d], projected to the first n coords
    mat = []
    for i in range(n + d):
        col = []
        for t in range(d):
            if i < n:
                col.append(rows[t][i])
            else:
                col.append(modulus if i - n == t else 0)
        mat.append(col)
    kern = arith.left_kernel(mat, d)
    return [tuple(v[:n]) for v in kern]


def _normalize_witness(m: Sequence[int], modulus: int) -> List[int]:
    return [x % modulus or modulus for x in m]


def _exact_available(cfg: ScanConfig, groups: Sequence[GroupSpec], p: int) -> bool:
    if cfg.force_box or not all(g.pure_gm for g in groups):
        return False
    if p > cfg.dlog_limit:
        raise DiscreteLogLimitExceeded(f"p={p} beyond the discrete-log limit")
    return True


def _box_m_vectors(n: int, box: int):
    return itertools.product(range(1, box + 1), repeat=n)


def _box_sums(group: GroupSpec, reduced_pts, box: int, p: int):
    """Yields (m, sum of m_i * pt_i) over the box, one group-add per step."""
    n = len(reduced_pts)
    zero = _red_zero(group, p)

    def rec(i, acc, m):
        if i == n:
            yield m, acc
            return
        s = acc
        for k in range(1, box + 1):
            s = _red_add(group, s, reduced_pts[i], p)
            yield from rec(i + 1, s, m + (k,))

    yield from rec(0, zero, ())


def check_msp(
    p_vec: Sequence[ProductPoint], q_vec: Sequence[ProductPoint], cfg: ScanConfig
) -> ConditionReport:
    """sum m_i Q_i = 0 mod p whenever sum m_i P_i = 0 mod p.

    Exact mode compares the kernel lattices computed by discrete logs; box
    mode tests every m in [1, box]^n.
    """
    if len(p_vec) != len(q_vec) or not p_vec:
        raise ValueError("msp needs matching non-empty point lists")
    n = len(p_vec)
    gp, gq = p_vec[0].group, q_vec[0].group
    if any(pt.group != gp for pt in p_vec) or any(pt.group != gq for pt in q_vec):
        raise ValueError("all points of one side must live on the same group")
    notes = []
    if cfg.force_box or not (gp.pure_gm and gq.pure_gm):
        notes.append(f"box mode: all m in [1,{cfg.box}]^{n}")

    fell_back = []

    def per_prime(p):
        try:
            exact = _exact_available(cfg, [gp, gq], p)
        except DiscreteLogLimitExceeded:
            exact = False
            if not fell_back:
                fell_back.append(True)
        if exact:
            pairs = gm.factored(p - 1).pairs()
            g = kernels.primitive_root(p, pairs)
            rows_p = _dlog_rows(p_vec, p, g)
            rows_q = _dlog_rows(q_vec, p, g)
            for gen in _mod_kernel_generators(rows_p, p - 1, n):
                bad = any(sum(r[i] * gen[i] for i in range(n)) % (p - 1) for r in rows_q)
                if bad:
                    m = _normalize_witness(gen, p - 1)
                    assert _msp_premise_fails_conclusion(p_vec, q_vec, m, p)
                    return [{"m": m}]
            return []
        red_p = [reduce_product(pt, p) for pt in p_vec]
        red_q = [reduce_product(pt, p) for pt in q_vec]
        for m, s in _box_sums(gp, red_p, cfg.box, p):
            if _red_is_zero(gp, s):
                qsum = _red_zero(gq, p)
                for qpt, k in zip(red_q, m):
                    qsum = _red_add(gq, qsum, _red_mul(gq, k, qpt, p), p)
                if not _red_is_zero(gq, qsum):
                    return [{"m": list(m)}]
        return []

    report = _scan("msp", cfg, list(p_vec) + list(q_vec), per_prime, notes)
    if fell_back:
        report.notes.append("discrete-log limit hit: fell back to box mode for some primes")
    return report


def _msp_premise_fails_conclusion(p_vec, q_vec, m, p) -> bool:
    gp, gq = p_vec[0].group, q_vec[0].group
    s = _red_zero(gp, p)
    for pt, k in zip(p_vec, m):
        s = _red_add(gp, s, _red_mul(gp, k, reduce_product(pt, p), p), p)
    if not _red_is_zero(gp, s):
        return False
    t = _red_zero(gq, p)
    for pt, k in zip(q_vec, m):
        t = _red_add(gq, t, _red_mul(gq, k, reduce_product(pt, p), p), p)
    return not _red_is_zero(gq, t)


def _congruence_class(a: int, b: int, modulus: int) -> Optional[Tuple[int, int]]:
    """Solutions m of a + b*m = 0 mod modulus, as (residue, step) or None."""
    g = gcd(b, modulus)
    if a % g:
        return None
    mg = modulus // g
    if mg == 1:
        return (0, 1)
    inv = pow(b // g % mg, -1, mg)
    return (-(a // g) * inv % mg, mg)


def _merge_classes(c1, c2):
    if c1 is None or c2 is None:
        return None
    r1, m1 = c1
    r2, m2 = c2
    g = gcd(m1, m2)
    if (r1 - r2) % g:
        return None
    l = lcm(m1, m2)
    t = (r2 - r1) // g * pow(m1 // g % (m2 // g), -1, m2 // g) % (m2 // g) if m2 // g > 1 else 0
    return ((r1 + m1 * t) % l, l)


def check_wmsp(
    p1: ProductPoint, p2: ProductPoint, q1: ProductPoint, q2: ProductPoint, cfg: ScanConfig
) -> ConditionReport:
    """Q1 + m*Q2 = 0 mod p whenever P1 + m*P2 = 0 mod p (m ranging).

    Exact mode intersects the per-coordinate congruences for m; box mode
    tests m in [1, box].
    """
    gp, gq = p1.group, q1.group
    if p2.group != gp or q2.group != gq:
        raise ValueError("point pairs must live on matching groups")
    notes = []
    if cfg.force_box or not (gp.pure_gm and gq.pure_gm):
        notes.append(f"box mode: m in [1,{cfg.box}]")
    fell_back = []

    def class_of(pair, p, g):
        rows = _dlog_rows(pair, p, g)  # coordinates x 2 points
        cls = (0, 1)
        for a, b in rows:
            cls = _merge_classes(cls, _congruence_class(a, b, p - 1))
            if cls is None:
                return None
        return cls

    def conclusion_holds(m, p):
        red = _red_add(
            gq,
            reduce_product(q1, p),
            _red_mul(gq, m, reduce_product(q2, p), p),
            p,
        )
        return _red_is_zero(gq, red)

    def premise_holds(m, p):
        red = _red_add(
            gp,
            reduce_product(p1, p),
            _red_mul(gp, m, reduce_product(p2, p), p),
            p,
        )
        return _red_is_zero(gp, red)

    def per_prime(p):
        try:
            exact = _exact_available(cfg, [gp, gq], p)
        except DiscreteLogLimitExceeded:
            exact = False
            if not fell_back:
                fell_back.append(True)
        if exact:
            pairs = gm.factored(p - 1).pairs()
            g = kernels.primitive_root(p, pairs)
            cls_p = class_of([p1, p2], p, g)
            if cls_p is None:
                return []
            cls_q = class_of([q1, q2], p, g)
            rp, mp = cls_p
            contained = cls_q is not None and mp % cls_q[1] == 0 and (rp - cls_q[0]) % cls_q[1] == 0
            if contained:
                return []
            m = rp if rp >= 1 else rp + mp
            if conclusion_holds(m, p):
                m += mp
            assert premise_holds(m, p) and not conclusion_holds(m, p)
            return [{"m": m}]
        red_p2 = reduce_product(p2, p)
        acc = tuple(reduce_product(p1, p))
        for m in range(1, cfg.box + 1):
            acc = _red_add(gp, acc, red_p2, p)
            if _red_is_zero(gp, acc) and not conclusion_holds(m, p):
                return [{"m": m}]
        return []

    report = _scan("wmsp", cfg, [p1, p2, q1, q2], per_prime, notes)
    if fell_back:
        report.notes.append("discrete-log limit hit: fell back to box mode for some primes")
    return report


def check_lmsp(
    p_vec: Sequence[ProductPoint], q_vec: Sequence[ProductPoint], ell: int, cfg: ScanConfig
) -> ConditionReport:
    """ord(sum m_i Q_i mod p) coprime to ell whenever ord(sum m_i P_i mod p) is.

    Exact mode compares the lattices mod ell^v(p-1); box mode tests the box.
    """
    if not arith.is_prime(ell):
        raise ValueError(f"ell must be prime, got {ell}")
    if len(p_vec) != len(q_vec) or not p_vec:
        raise ValueError("lmsp needs matching non-empty point lists")
    n = len(p_vec)
    gp, gq = p_vec[0].group, q_vec[0].group
    if any(pt.group != gp for pt in p_vec) or any(pt.group != gq for pt in q_vec):
        raise ValueError("all points of one side must live on the same group")
    notes = [f"ell={ell}"]
    if cfg.force_box or not (gp.pure_gm and gq.pure_gm):
        notes.append(f"box mode: all m in [1,{cfg.box}]^{n}")
    fell_back = []

    def per_prime(p):
        try:
            exact = _exact_available(cfg, [gp, gq], p)
        except DiscreteLogLimitExceeded:
            exact = False
            if not fell_back:
                fell_back.append(True)
        if exact:
            v = arith.valuation(p - 1, ell)
            if v == 0:
                return []  # every order is coprime to ell on both sides
            modulus = ell**v
            pairs = gm.factored(p - 1).pairs()
            g = kernels.primitive_root(p, pairs)
            rows_p = _dlog_rows(p_vec, p, g)
            rows_q = _dlog_rows(q_vec, p, g)
            for gen in _mod_kernel_generators(rows_p, modulus, n):
                bad = any(sum(r[i] * gen[i] for i in range(n)) % modulus for r in rows_q)
                if bad:
                    return [{"m": _normalize_witness(gen, modulus), "ell": ell}]
            return []
        red_p = [reduce_product(pt, p) for pt in p_vec]
        red_q = [reduce_product(pt, p) for pt in q_vec]
        for m, s in _box_sums(gp, red_p, cfg.box, p):
            if _red_order_coprime_to(gp, s, p, ell):
                qsum = _red_zero(gq, p)
                for qpt, k in zip(red_q, m):
                    qsum = _red_add(gq, qsum, _red_mul(gq, k, qpt, p), p)
                if not _red_order_coprime_to(gq, qsum, p, ell):
                    return [{"m": list(m), "ell": ell}]
        return []

    report = _scan("lmsp", cfg, list(p_vec) + list(q_vec), per_prime, notes)
    if fell_back:
        report.notes.append("discrete-log limit hit: fell back to box mode for some primes")
    return report
