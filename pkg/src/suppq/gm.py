"""Points on Gm^n over Q: reduction mod p, orders, independence, relations.

A point is a tuple of non-zero Fractions.  Endomorphisms of Gm^n are integer
matrices acting by (M.x)_i = prod_j x_j**M[i][j].  All multiplicative
structure is handled exactly through prime exponent vectors plus a sign bit:
the torsion of Gm(Q) is {-1, 1}, so the sign lives in F_2 next to the free
exponent lattice.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from suppq import arith
from suppq.backend import KERNEL_PRIME_LIMIT, kernels
from suppq import _pykernels
from suppq.errors import BadReduction, SingularMatrix, TorsionPoint, ZeroElement

GmPoint = Tuple[Fraction, ...]
EndoMatrix = Tuple[Tuple[int, ...], ...]


def gm_point(*coords) -> GmPoint:
    """Build a point from rationals, validating that no coordinate is zero."""
    pt = tuple(Fraction(c) for c in coords)
    if not pt:
        raise ValueError("a point needs at least one coordinate")
    if any(c == 0 for c in pt):
        raise ValueError("coordinates of a Gm point must be non-zero")
    return pt


def parse_gm_point(text: str) -> GmPoint:
    """Parse the CLI syntax: comma-separated rationals like "2,-1,4/9"."""
    return gm_point(*(Fraction(part.strip()) for part in text.split(",")))


def format_gm_point(pt: GmPoint) -> str:
    return ",".join(str(c) for c in pt)


@lru_cache(maxsize=None)
def factored(n: int) -> arith.Factorization:
    """Cached factorization; scans hit the same p-1 many times."""
    return arith.factor_integer(n)


@dataclass(frozen=True)
class GmOrderRecord:
    prime: int
    order: int
    valuations: Dict[int, int] = field(default_factory=dict)


# ------------------------------------------------------------ reduction

def gm_good_reduction(pt: GmPoint, p: int) -> bool:
    """True when p divides no numerator and no denominator of pt."""
    return all(c.numerator % p and c.denominator % p for c in pt)


def gm_reduce(pt: GmPoint, p: int) -> Tuple[int, ...]:
    """Coordinatewise image in F_p*."""
    if not gm_good_reduction(pt, p):
        raise BadReduction(f"{format_gm_point(pt)} has bad reduction at {p}")
    return tuple(c.numerator * pow(c.denominator, p - 2, p) % p for c in pt)


def mult_order(a: int, p: int) -> int:
    """Order of a in F_p*."""
    if a % p == 0:
        raise ZeroElement(f"{a} is 0 mod {p}")
    pairs = factored(p - 1).pairs()
    if p < KERNEL_PRIME_LIMIT:
        return kernels.mult_order(a, p, pairs)
    return _pykernels.mult_order(a, p, pairs)


def gm_point_order(pt: GmPoint, p: int, ells: Sequence[int] = ()) -> GmOrderRecord:
    """Order of (pt mod p): the lcm of the coordinate orders."""
    reduced = gm_reduce(pt, p)
    order = 1
    for a in reduced:
        order = lcm(order, mult_order(a, p))
    vals = {ell: arith.valuation(order, ell) for ell in ells}
    return GmOrderRecord(p, order, vals)


# --------------------------------------------------------- endomorphisms

def apply_endo(mat: Sequence[Sequence[int]], pt: GmPoint) -> GmPoint:
    """(M.x)_i = prod_j x_j**M[i][j]; rows may form a k x n matrix."""
    n = len(pt)
    out = []
    for row in mat:
        if len(row) != n:
            raise ValueError("matrix width does not match point dimension")
        acc = Fraction(1)
        for c, e in zip(pt, row):
            if e:
                acc *= c**e
        out.append(acc)
    return tuple(out)


def apply_endo_mod(mat: Sequence[Sequence[int]], reduced: Sequence[int], p: int) -> Tuple[int, ...]:
    out = []
    for row in mat:
        acc = 1
        for a, e in zip(reduced, row):
            if e >= 0:
                acc = acc * pow(a, e, p) % p
            else:
                acc = acc * pow(pow(a, p - 2, p), -e, p) % p
        out.append(acc)
    return tuple(out)


def isogeny_kernel_exponent(mat: Sequence[Sequence[int]]) -> int:
    """Exponent of the kernel of a square integer matrix on Gm^n.

    This is the largest elementary divisor; it divides |det|, the degree.
    """
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise ValueError("matrix must be square")
    if arith.mat_det(mat) == 0:
        raise SingularMatrix("matrix defines no isogeny (determinant 0)")
    return arith.elementary_divisors(mat)[-1]


# ------------------------------------------- exponent-lattice structure

def _support_and_matrix(points: Sequence[GmPoint]) -> Tuple[List[int], List[List[int]], List[int]]:
    """Common prime support, exponent matrix (one row per coordinate of each
    point, flattened in order) and sign bits."""
    facs = []
    signs = []
    support = set()
    for pt in points:
        for c in pt:
            f = arith.exponent_vector(c)
            facs.append(f)
            signs.append(0 if f.sign > 0 else 1)
            support.update(f.exponents)
    primes = sorted(support)
    idx = {q: i for i, q in enumerate(primes)}
    rows = []
    for f in facs:
        row = [0] * len(primes)
        for q, e in f.exponents.items():
            row[idx[q]] = e
        rows.append(row)
    return primes, rows, signs


def relation_lattice(pt: GmPoint) -> arith.LatticeBasis:
    """The exact lattice {a in Z^n : prod pt_i**a_i = 1 in Q*}.

    The sign of each coordinate enters as a parity constraint on top of the
    kernel of the exponent matrix.
    """
    n = len(pt)
    _, rows, signs = _support_and_matrix([pt])
    kernel = arith.left_kernel(rows, len(rows[0]) if rows else 0)
    return _parity_sublattice(kernel, signs, n)


def _parity_sublattice(basis_rows: Sequence[Tuple[int, ...]], signs: Sequence[int], n: int) -> arith.LatticeBasis:
    rows = [tuple(r) for r in basis_rows]
    parities = [sum(a * s for a, s in zip(r, signs)) % 2 for r in rows]
    if not any(parities):
        return arith.lattice_from_generators(rows, n)
    i0 = parities.index(1)
    fixed = []
    for i, r in enumerate(rows):
        if i == i0:
            fixed.append(tuple(2 * a for a in r))
        elif parities[i]:
            fixed.append(tuple(a - b for a, b in zip(r, rows[i0])))
        else:
            fixed.append(r)
    return arith.lattice_from_generators(fixed, n)


def is_identity(pt: GmPoint) -> bool:
    return all(c == 1 for c in pt)


def is_torsion(pt: GmPoint) -> bool:
    """Torsion of Gm^n(Q): every coordinate is +-1."""
    return all(c == 1 or c == -1 for c in pt)


def component_count(pt: GmPoint) -> int:
    """Number of connected components of the smallest algebraic subgroup
    containing pt, as the saturation index of the relation lattice."""
    lat = relation_lattice(pt)
    if lat.rank == 0:
        return 1
    return arith.lattice_index(lat, arith.lattice_saturation(lat))


def gm_is_independent(pt: GmPoint) -> bool:
    """Multiplicatively independent coordinates (and pt not the identity)."""
    if is_identity(pt):
        return False
    return relation_lattice(pt).rank == 0


@dataclass(frozen=True)
class Decomposition:
    indices: Tuple[int, ...]  # 1-based positions kept in the subpoint
    d: int
    subpoint: GmPoint


def decompose_independent(pt: GmPoint) -> Decomposition:
    """Split pt into an independent subpoint P' and a multiplier d with
    ord(pt mod p) dividing d * ord(P' mod p) at every good prime.

    The subpoint is chosen greedily left to right.  Each dropped coordinate
    contributes the minimal r with r*(its exponent vector) in the span of
    the kept block, the relation coefficients, and a factor 2 when the
    relation only holds up to sign; torsion coordinates contribute their
    order.
    """
    if is_torsion(pt):
        raise TorsionPoint("point has finite order; nothing to decompose")
    n = len(pt)
    kept: List[int] = []
    for i in range(n):
        cand = tuple(pt[j] for j in kept + [i])
        if gm_is_independent(cand):
            kept.append(i)
    sub = tuple(pt[j] for j in kept)
    _, rows, signs = _support_and_matrix([pt])
    block = [rows[j] for j in kept]
    ncols = len(rows[0]) if rows else 0
    h, u, pivots = arith.row_hnf(block, ncols)
    hnz = h[: len(pivots)]
    d = 1
    for i in range(n):
        if i in kept:
            continue
        if pt[i] == 1:
            continue
        if pt[i] == -1:
            d = lcm(d, 2)
            continue
        y = arith.solve_in_rowspace(hnz, pivots, rows[i], rational=True)
        assert y is not None, "greedy subset must span every dropped coordinate"
        r = 1
        for c in y:
            r = lcm(r, c.denominator)
        coeffs_h = [c * r for c in y]  # integer coords in the HNF basis
        # back to coordinates in the kept block itself
        coeffs = [sum(int(coeffs_h[k]) * u[k][j] for k in range(len(coeffs_h))) for j in range(len(kept))]
        sign_match = (r * signs[i] - sum(c * signs[kept[j]] for j, c in enumerate(coeffs))) % 2 == 0
        contrib = lcm(r, *(abs(c) for c in coeffs if c)) if any(coeffs) else r
        if not sign_match:
            contrib *= 2
        d = lcm(d, contrib)
    return Decomposition(tuple(j + 1 for j in kept), d, sub)


# ---------------------------------------------------------- relations

def _row_relation_generator(
    hnz, pivots, u_rows, kernel, sp_signs, f_row, sq_sign, n
) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """Minimal c > 0 with m.E = c*f_row and matching parity, plus a witness m
    for that c.  The valid c form an ideal; this returns its generator."""
    y = arith.solve_in_rowspace(hnz, pivots, f_row, rational=True)
    if y is None:
        return None
    c0 = 1
    for coef in y:
        c0 = lcm(c0, coef.denominator)
    coords = [int(coef * c0) for coef in y]
    m0 = [sum(coords[k] * u_rows[k][j] for k in range(len(coords))) for j in range(n)]
    kernel_parities = [sum(a * s for a, s in zip(k, sp_signs)) % 2 for k in kernel]
    odd_kernel = None
    for k, par in zip(kernel, kernel_parities):
        if par:
            odd_kernel = k
            break
    a = sum(x * s for x, s in zip(m0, sp_signs)) % 2
    want = c0 * sq_sign % 2
    if odd_kernel is not None:
        if a != want:
            m0 = [x + k for x, k in zip(m0, odd_kernel)]
        return c0, tuple(m0)
    if (a - want) % 2 == 0:
        return c0, tuple(m0)
    # parity unfixable at c0: doubling c makes both sides even
    return 2 * c0, tuple(2 * x for x in m0)


def gm_find_relation(p_pt: GmPoint, q_pt: GmPoint) -> Optional[Tuple[EndoMatrix, int]]:
    """Matrix M (k x n) and minimal c >= 1 with prod_j P_j**M[i][j] = Q_i**c
    for every i, or None when no such pair exists.

    The set of valid c is an ideal of Z, so the returned c divides every
    valid one.  Everything is decided exactly on exponent vectors plus the
    sign parity over F_2.
    """
    n, k = len(p_pt), len(q_pt)
    _, rows, signs = _support_and_matrix([p_pt, q_pt])
    e_rows, f_rows = rows[:n], rows[n:]
    sp_signs, sq_signs = signs[:n], signs[n:]
    ncols = len(rows[0]) if rows else 0
    h, u, pivots = arith.row_hnf(e_rows, ncols)
    hnz = h[: len(pivots)]
    u_nz = u[: len(pivots)]
    kernel = [tuple(u[i]) for i in range(len(pivots), n)]

    per_row = []
    c_total = 1
    for i in range(k):
        got = _row_relation_generator(hnz, pivots, u_nz, kernel, sp_signs, f_rows[i], sq_signs[i], n)
        if got is None:
            return None
        per_row.append(got)
        c_total = lcm(c_total, got[0])

    mat = []
    for i in range(k):
        g, m_witness = per_row[i]
        scale = c_total // g
        row = [scale * x for x in m_witness]
        # exact check on exponents and sign
        for col in range(ncols):
            assert sum(row[j] * e_rows[j][col] for j in range(n)) == c_total * f_rows[i][col]
        assert (sum(row[j] * sp_signs[j] for j in range(n)) - c_total * sq_signs[i]) % 2 == 0
        mat.append(tuple(row))
    return tuple(mat), c_total


def verify_relation(p_pt: GmPoint, q_pt: GmPoint, mat: EndoMatrix, c: int) -> bool:
    """Check prod_j P_j**M[i][j] == Q_i**c exactly over Q."""
    img = apply_endo(mat, p_pt)
    return all(img[i] == q_pt[i] ** c for i in range(len(q_pt)))
