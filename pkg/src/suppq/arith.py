"""Exact integer and rational arithmetic, factorization, and integer lattices.

Factorization is trial division followed by Brent's variant of Pollard rho,
with deterministic Miller-Rabin primality (valid far beyond 64 bits with the
fixed base set).  Inputs whose cofactor after trial division exceeds
``COFACTOR_LIMIT`` raise :class:`FactorizationLimitExceeded` instead of
silently stalling: exactness is non-negotiable here.

The lattice layer works on tiny matrices (ambient dimension <= ~8), so all
normal forms are textbook algorithms with explicit transformation matrices.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from suppq.errors import (
    EmptyRange,
    FactorizationLimitExceeded,
    NotSublattice,
    RankMismatch,
    ZeroInput,
)

# Cofactor bound after trial division: keeps Miller-Rabin deterministic
# (valid below 3.3e24) and Pollard rho practical.
COFACTOR_LIMIT = 2**80

_TRIAL_LIMIT = 10_000
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

Matrix = Sequence[Sequence[int]]


# ------------------------------------------------------------ primality

def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n below 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_sieve = bytearray([0, 0, 1, 1])  # grown on demand
_SIEVE_CAP = 4_000_000


def _ensure_sieve(limit: int) -> None:
    global _sieve
    if limit < len(_sieve):
        return
    size = max(limit + 1, 2 * len(_sieve))
    s = bytearray([1]) * size
    s[0] = s[1] = 0
    for i in range(2, isqrt(size - 1) + 1):
        if s[i]:
            s[i * i :: i] = bytearray(len(range(i * i, size, i)))
    _sieve = s


def prime_iterator(lo: int, hi: int) -> Iterator[int]:
    """The primes in [lo, hi], ascending.  Requires 2 <= lo <= hi."""
    if lo < 2 or lo > hi:
        raise EmptyRange(f"bad prime range [{lo}, {hi}]")

    def gen():
        if hi < _SIEVE_CAP:
            _ensure_sieve(hi)
            s = _sieve
            for n in range(lo, hi + 1):
                if s[n]:
                    yield n
        else:
            for n in range(lo, hi + 1):
                if is_prime(n):
                    yield n

    return gen()


# -------------------------------------------------------- factorization

@dataclass(frozen=True)
class Factorization:
    """sign * product(p**e) with prime keys and non-zero exponents."""

    sign: int
    exponents: Dict[int, int]

    def value(self) -> Fraction:
        v = Fraction(self.sign)
        for p, e in self.exponents.items():
            v *= Fraction(p) ** e
        return v

    def primes(self) -> Tuple[int, ...]:
        return tuple(sorted(self.exponents))

    def pairs(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted(self.exponents.items()))


def _brent_rho(n: int) -> int:
    """A non-trivial factor of composite n (deterministic parameter sweep)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m = 2, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
            if r > 1 << 22:
                break
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise FactorizationLimitExceeded(f"rho gave up on {n}")


def _factor_positive(m: int, out: Dict[int, int]) -> None:
    for p in (2, 3, 5):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    d = 7
    while d <= _TRIAL_LIMIT and d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out[d] = out.get(d, 0) + e
        d += 2
    if m == 1:
        return
    if is_prime(m):
        out[m] = out.get(m, 0) + 1
        return
    if m > COFACTOR_LIMIT:
        raise FactorizationLimitExceeded(
            f"cofactor {m} exceeds the factorization limit 2**80"
        )
    g = _brent_rho(m)
    _factor_positive(g, out)
    _factor_positive(m // g, out)


def factor_integer(n: int) -> Factorization:
    """Factor a non-zero integer exactly."""
    if n == 0:
        raise ZeroInput("cannot factor 0")
    sign = 1 if n > 0 else -1
    exps: Dict[int, int] = {}
    _factor_positive(abs(n), exps)
    return Factorization(sign, exps)


def exponent_vector(q) -> Factorization:
    """Prime exponent vector (with sign) of a non-zero rational."""
    q = Fraction(q)
    if q == 0:
        raise ZeroInput("cannot take the exponent vector of 0")
    num = factor_integer(q.numerator)
    exps = dict(num.exponents)
    if q.denominator != 1:
        for p, e in factor_integer(q.denominator).exponents.items():
            exps[p] = exps.get(p, 0) - e
    exps = {p: e for p, e in exps.items() if e != 0}
    return Factorization(num.sign, exps)


def valuation(n: int, ell: int) -> int:
    """The ell-adic valuation of a non-zero integer."""
    if n == 0:
        raise ZeroInput("valuation of 0 is undefined")
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    v = 0
    n = abs(n)
    while n % ell == 0:
        n //= ell
        v += 1
    return v


# ------------------------------------------------------ integer matrices

def identity_matrix(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> List[List[int]]:
    rows_b = len(b)
    cols_b = len(b[0]) if rows_b else 0
    return [
        [sum(ra[k] * b[k][j] for k in range(rows_b)) for j in range(cols_b)]
        for ra in a
    ]


def mat_det(a: Matrix) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def mat_inverse_unimodular(m: Matrix) -> List[List[int]]:
    """Inverse of a matrix with determinant +-1, as an integer matrix."""
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    out = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    assert all(x.denominator == 1 for row in out for x in row)
    return [[int(x) for x in row] for row in out]


def _swap_rows(m, u, i, j):
    m[i], m[j] = m[j], m[i]
    u[i], u[j] = u[j], u[i]


def _add_row(m, u, i, j, k):
    """row_i += k * row_j"""
    m[i] = [a + k * b for a, b in zip(m[i], m[j])]
    u[i] = [a + k * b for a, b in zip(u[i], u[j])]


def _negate_row(m, u, i):
    m[i] = [-a for a in m[i]]
    u[i] = [-a for a in u[i]]


def row_hnf(mat: Matrix, ncols: int) -> Tuple[List[List[int]], List[List[int]], List[int]]:
    """Row Hermite form: H = U * mat with U unimodular.

    H is in row echelon form with positive pivots, entries above a pivot
    reduced into [0, pivot), and zero rows at the bottom.  Returns
    (H, U, pivot_columns).
    """
    m = len(mat)
    h = [list(r) for r in mat]
    u = identity_matrix(m)
    r = 0
    pivots: List[int] = []
    for col in range(ncols):
        while True:
            nz = [i for i in range(r, m) if h[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(h[i][col]))
            if h[i0][col] < 0:
                _negate_row(h, u, i0)
            done = True
            for i in nz:
                if i == i0:
                    continue
                q = h[i][col] // h[i0][col]
                _add_row(h, u, i, i0, -q)
                if h[i][col] != 0:
                    done = False
            if done:
                _swap_rows(h, u, r, i0)
                break
        if r < m and h[r][col] != 0:
            for i in range(r):
                q = h[i][col] // h[r][col]
                if q:
                    _add_row(h, u, i, r, -q)
            pivots.append(col)
            r += 1
    return h, u, pivots


def solve_in_rowspace(
    hnf_rows: Matrix, pivots: Sequence[int], v: Sequence, rational: bool = False
) -> Optional[list]:
    """Coefficients y with y . hnf_rows = v, or None.

    With rational=False the solve is over the integers; with rational=True
    over Q (coefficients come back as Fractions).
    """
    res = [Fraction(x) for x in v] if rational else list(v)
    y = []
    for i, col in enumerate(pivots):
        piv = hnf_rows[i][col]
        if rational:
            coef = Fraction(res[col], piv)
        else:
            if res[col] % piv:
                return None
            coef = res[col] // piv
        if coef:
            row = hnf_rows[i]
            res = [a - coef * b for a, b in zip(res, row)]
        y.append(coef)
    if any(res):
        return None
    return y


def left_kernel(mat: Matrix, ncols: int) -> List[Tuple[int, ...]]:
    """Basis of {a : a . mat = 0} as rows (a saturated lattice)."""
    h, u, pivots = row_hnf(mat, ncols)
    return [tuple(u[i]) for i in range(len(pivots), len(mat))]


def smith_normal_form(mat: Matrix) -> Tuple[List[List[int]], List[List[int]], List[List[int]]]:
    """U, D, V with U*mat*V = D, U and V unimodular, D diagonal, d_i | d_{i+1}."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    d = [list(r) for r in mat]
    u = identity_matrix(m)
    # column ops on D are tracked as row ops on V^T
    vt = identity_matrix(n)

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        vt[i], vt[j] = vt[j], vt[i]

    def add_col(j, t, k):
        for row in d:
            row[j] += k * row[t]
        vt[j] = [a + k * b for a, b in zip(vt[j], vt[t])]

    def negate_col(j):
        for row in d:
            row[j] = -row[j]
        vt[j] = [-a for a in vt[j]]

    t = 0
    while t < min(m, n):
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] != 0 and (best is None or abs(d[i][j]) < best):
                    best = abs(d[i][j])
                    piv = (i, j)
        if piv is None:
            break
        _swap_rows(d, u, t, piv[0])
        if piv[1] != t:
            swap_cols(t, piv[1])
        while True:
            changed = False
            for i in range(m):
                if i != t and d[i][t] != 0:
                    q = d[i][t] // d[t][t]
                    _add_row(d, u, i, t, -q)
                    if d[i][t] != 0:
                        _swap_rows(d, u, i, t)
                        changed = True
            if changed:
                continue
            for j in range(n):
                if j != t and d[t][j] != 0:
                    q = d[t][j] // d[t][t]
                    add_col(j, t, -q)
                    if d[t][j] != 0:
                        swap_cols(j, t)
                        changed = True
            if changed:
                continue
            bad = None
            for i in range(t + 1, m):
                if any(d[i][j] % d[t][t] for j in range(t + 1, n)):
                    bad = i
                    break
            if bad is None:
                break
            _add_row(d, u, t, bad, 1)
        if d[t][t] < 0:
            _negate_row(d, u, t)
        t += 1
    vmat = [[vt[j][i] for j in range(n)] for i in range(n)]  # V = (V^T)^T
    return u, d, vmat


def elementary_divisors(mat: Matrix) -> List[int]:
    _, d, _ = smith_normal_form(mat)
    k = min(len(d), len(d[0]) if d else 0)
    return [d[i][i] for i in range(k)]


# ------------------------------------------------------------- lattices

@dataclass(frozen=True)
class LatticeBasis:
    """Integer row basis of a sublattice of Z^n (rows Q-independent)."""

    rows: Tuple[Tuple[int, ...], ...]
    ambient_dim: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ambient_dim:
                raise ValueError("row length does not match ambient dimension")
        if self.rows:
            _, _, pivots = row_hnf(self.rows, self.ambient_dim)
            if len(pivots) != len(self.rows):
                raise ValueError("basis rows are linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.rows)

    def hnf(self) -> "LatticeBasis":
        """The canonical (Hermite form) basis of the same lattice."""
        if not self.rows:
            return self
        h, _, pivots = row_hnf(self.rows, self.ambient_dim)
        return LatticeBasis(tuple(tuple(r) for r in h[: len(pivots)]), self.ambient_dim)

    def contains(self, vec: Sequence[int]) -> bool:
        if not self.rows:
            return not any(vec)
        h, _, pivots = row_hnf(self.rows, self.ambient_dim)
        return solve_in_rowspace(h[: len(pivots)], pivots, vec) is not None

    def same_lattice(self, other: "LatticeBasis") -> bool:
        return self.hnf() == other.hnf()


def lattice_from_generators(gens: Sequence[Sequence[int]], ambient_dim: int) -> LatticeBasis:
    """The lattice spanned by arbitrary (possibly dependent) generators."""
    if not gens:
        return LatticeBasis((), ambient_dim)
    h, _, pivots = row_hnf(gens, ambient_dim)
    return LatticeBasis(tuple(tuple(r) for r in h[: len(pivots)]), ambient_dim)


def lattice_saturation(lat: LatticeBasis) -> LatticeBasis:
    """Smallest lattice containing lat with torsion-free quotient in Z^n."""
    if not lat.rows:
        return lat
    _, _, v = smith_normal_form(lat.rows)
    vinv = mat_inverse_unimodular(v)
    sat_rows = [tuple(vinv[i]) for i in range(lat.rank)]
    return lattice_from_generators(sat_rows, lat.ambient_dim)


def lattice_index(sub: LatticeBasis, sup: LatticeBasis) -> int:
    """|sup / sub| for a finite-index sublattice.

    Raises NotSublattice when sub is not contained in sup, and RankMismatch
    when the index is infinite (unequal ranks).
    """
    if sub.ambient_dim != sup.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if sub.rank == sup.rank == 0:
        return 1
    h, _, pivots = row_hnf(sup.rows, sup.ambient_dim)
    hnz = h[: len(pivots)]
    coords = []
    for r in sub.rows:
        y = solve_in_rowspace(hnz, pivots, r)
        if y is None:
            raise NotSublattice(f"{r} is not in the candidate superlattice")
        coords.append(y)
    if sub.rank != sup.rank:
        raise RankMismatch("infinite index: ranks differ")
    det = mat_det(coords)
    if det == 0:  # unreachable for a valid basis, kept as a guard
        raise RankMismatch("infinite index: degenerate coordinates")
    return abs(det)


__all__ = [
    "COFACTOR_LIMIT",
    "Factorization",
    "LatticeBasis",
    "elementary_divisors",
    "exponent_vector",
    "factor_integer",
    "identity_matrix",
    "is_prime",
    "lattice_from_generators",
    "lattice_index",
    "lattice_saturation",
    "left_kernel",
    "mat_det",
    "mat_inverse_unimodular",
    "mat_mul",
    "prime_iterator",
    "row_hnf",
    "smith_normal_form",
    "solve_in_rowspace",
    "valuation",
]
