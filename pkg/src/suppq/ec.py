"""Elliptic curves y^2 = x^3 + a*x + b over Q and their reductions mod p.

Group law over Q uses exact Fractions; the per-prime work (group law over
F_p, point counting, point orders) goes through the kernel backend.  Group
orders are found with point orders and baby-step giant-step inside the Hasse
interval, falling back to exhaustive counting when the sampled orders leave
more than one candidate.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from suppq.backend import kernels
from suppq.errors import (
    BadReduction,
    NoSquareRootOfMinusOne,
    PointNotOnCurve,
    PrimeTooLarge,
    WrongCurve,
)
from suppq.gm import factored

PointQ = Optional[Tuple[Fraction, Fraction]]
PointFp = Optional[Tuple[int, int]]

# Largest prime the per-prime scans will touch.
EC_SCAN_LIMIT = 10**6

# Rational torsion has order at most 12 and torsion groups have at most 16
# elements (classification taken as an engineering bound).
TORSION_MULTIPLE_BOUND = 16


@dataclass(frozen=True)
class CurveQ:
    """y^2 = x^3 + a*x + b with integer coefficients and disc != 0."""

    a: int
    b: int

    def __post_init__(self):
        if self.disc == 0:
            raise ValueError("singular curve: discriminant is 0")

    @property
    def disc(self) -> int:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    def spec_string(self) -> str:
        return f"{self.a},{self.b}"


def parse_curve(text: str) -> CurveQ:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"curve spec must be 'a,b', got {text!r}")
    return CurveQ(int(parts[0].strip()), int(parts[1].strip()))


def parse_ec_point(text: str) -> PointQ:
    """Point syntax: 'x;y' with rational coordinates, or 'inf'."""
    text = text.strip()
    if text == "inf":
        return None
    parts = text.split(";")
    if len(parts) != 2:
        raise ValueError(f"point spec must be 'x;y' or 'inf', got {text!r}")
    return (Fraction(parts[0].strip()), Fraction(parts[1].strip()))


def format_ec_point(pt: PointQ) -> str:
    if pt is None:
        return "inf"
    return f"{pt[0]};{pt[1]}"


def on_curve(curve: CurveQ, pt: PointQ) -> bool:
    if pt is None:
        return True
    x, y = pt
    return y * y == x**3 + curve.a * x + curve.b


def _require_on_curve(curve: CurveQ, pt: PointQ) -> None:
    if not on_curve(curve, pt):
        raise PointNotOnCurve(f"{format_ec_point(pt)} is not on y^2=x^3+{curve.a}x+{curve.b}")


# ------------------------------------------------------- group law over Q

def ec_neg(curve: CurveQ, pt: PointQ) -> PointQ:
    if pt is None:
        return None
    return (pt[0], -pt[1])


def ec_add(curve: CurveQ, p1: PointQ, p2: PointQ) -> PointQ:
    _require_on_curve(curve, p1)
    _require_on_curve(curve, p2)
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if y1 + y2 == 0:
            return None
        lam = (3 * x1 * x1 + curve.a) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    y3 = lam * (x1 - x3) - y1
    return (x3, y3)


def ec_mul(curve: CurveQ, k: int, pt: PointQ) -> PointQ:
    _require_on_curve(curve, pt)
    if k < 0:
        k, pt = -k, ec_neg(curve, pt)
    acc: PointQ = None
    while k:
        if k & 1:
            acc = _add_unchecked(curve, acc, pt)
        pt = _add_unchecked(curve, pt, pt)
        k >>= 1
    return acc


def _add_unchecked(curve: CurveQ, p1: PointQ, p2: PointQ) -> PointQ:
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if y1 + y2 == 0:
            return None
        lam = (3 * x1 * x1 + curve.a) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    y3 = lam * (x1 - x3) - y1
    return (x3, y3)


# ------------------------------------------------------------- reduction

def ec_good_reduction(curve: CurveQ, p: int) -> bool:
    """p does not divide 2*|disc| (denominators are handled projectively)."""
    return (2 * abs(curve.disc)) % p != 0


def ec_reduce(curve: CurveQ, pt: PointQ, p: int) -> PointFp:
    """Reduce the primitive projective representative (X:Y:Z) mod p."""
    if not ec_good_reduction(curve, p):
        raise BadReduction(f"curve {curve.spec_string()} has bad reduction at {p}")
    if pt is None:
        return None
    _require_on_curve(curve, pt)
    x, y = pt
    den = lcm(x.denominator, y.denominator)
    big_x = x.numerator * (den // x.denominator)
    big_y = y.numerator * (den // y.denominator)
    big_z = den
    g = gcd(gcd(abs(big_x), abs(big_y)), big_z)
    big_x, big_y, big_z = big_x // g, big_y // g, big_z // g
    if big_z % p == 0:
        return None
    zinv = pow(big_z, p - 2, p)
    return (big_x * zinv % p, big_y * zinv % p)


@lru_cache(maxsize=None)
def _group_order_mod(a: int, b: int, p: int) -> int:
    n = kernels.ec_group_order_bsgs(a, b, p)
    if n == 0:
        n = kernels.ec_count(a, b, p)
    return n


def ec_group_order(curve: CurveQ, p: int) -> int:
    """|E(F_p)| at a prime of good reduction, p <= 10**6."""
    if p > EC_SCAN_LIMIT:
        raise PrimeTooLarge(f"{p} exceeds the scan limit {EC_SCAN_LIMIT}")
    if not ec_good_reduction(curve, p):
        raise BadReduction(f"curve {curve.spec_string()} has bad reduction at {p}")
    return _group_order_mod(curve.a % p, curve.b % p, p)


def ec_group_order_factored(curve: CurveQ, p: int) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
    n = ec_group_order(curve, p)
    return n, factored(n).pairs()


def ec_point_order(curve: CurveQ, pt: PointFp, p: int) -> int:
    """Order of a reduced point in E(F_p)."""
    a = curve.a % p
    if pt is not None:
        x, y = pt
        if (y * y - (x * x % p * x + a * x + curve.b)) % p != 0:
            raise PointNotOnCurve(f"{pt} is not on the reduced curve mod {p}")
    n, pairs = ec_group_order_factored(curve, p)
    return kernels.ec_point_order(pt, a, p, n, pairs)


def ec_torsion_order(curve: CurveQ, pt: PointQ) -> Optional[int]:
    """Minimal k <= 16 with k*pt = O, else None (infinite order)."""
    _require_on_curve(curve, pt)
    acc: PointQ = None
    for k in range(1, TORSION_MULTIPLE_BOUND + 1):
        acc = _add_unchecked(curve, acc, pt)
        if acc is None:
            return k
    return None


# ------------------------------------------------------------- relations

def ec_find_relation(
    curve: CurveQ, points: Sequence[PointQ], q1: PointQ, bound: int
) -> Optional[Tuple[Tuple[int, ...], int]]:
    """Search |a_i| <= bound, 1 <= c <= bound for sum a_i P_i = c * q1.

    Exhaustive and exact over Q; None means no relation within the bound,
    not that none exists.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    for pt in points:
        _require_on_curve(curve, pt)
    _require_on_curve(curve, q1)
    sums: Dict[PointQ, Tuple[int, ...]] = {None: ()}
    for pt in points:
        multiples: List[PointQ] = [None] * (2 * bound + 1)
        acc: PointQ = None
        for k in range(1, bound + 1):
            acc = _add_unchecked(curve, acc, pt)
            multiples[bound + k] = acc
            multiples[bound - k] = ec_neg(curve, acc)
        new_sums: Dict[PointQ, Tuple[int, ...]] = {}
        for s, coeffs in sums.items():
            for ai in range(-bound, bound + 1):
                t = _add_unchecked(curve, s, multiples[bound + ai])
                key = t
                if key not in new_sums:
                    new_sums[key] = coeffs + (ai,)
        sums = new_sums
    target: PointQ = None
    for c in range(1, bound + 1):
        target = _add_unchecked(curve, target, q1)
        if target in sums:
            return sums[target], c
    return None


# ---------------------------------------------- CM at the reduction level

def sqrt_minus_one(p: int) -> int:
    """The smaller square root of -1 mod p, for p = 1 mod 4."""
    if p % 4 != 1:
        raise NoSquareRootOfMinusOne(f"-1 is not a square mod {p}")
    s = kernels.sqrt_mod(p - 1, p)
    return min(s, p - s)


def cm_iota(pt: PointFp, p: int) -> PointFp:
    """The order-4 automorphism (x, y) -> (-x, s*y) of y^2 = x^3 + x mod p.

    s is the smaller square root of -1; iota is a group endomorphism with
    iota(iota(R)) = -R.
    """
    s = sqrt_minus_one(p)
    if pt is None:
        return None
    x, y = pt
    if (y * y - (x * x % p * x + x)) % p != 0:
        raise WrongCurve(f"{pt} is not on y^2 = x^3 + x mod {p}")
    return ((p - x) % p, s * y % p)
