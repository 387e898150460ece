"""Pure-Python kernels for the per-prime inner loops.

This module is the fallback twin of the compiled extension ``suppq._ckernels``;
both expose the same functions with identical results.  Everything here works
on machine-scale integers: callers guarantee p fits the documented scan limits
(p <= 10**6 for curve work, p < 2**31 in general).

Point convention for curves y^2 = x^3 + a*x + b over F_p: a point is either
``None`` (the point at infinity) or a tuple ``(x, y)`` with 0 <= x, y < p.
"""

from math import gcd, isqrt

BACKEND = "pure"

# Deterministic sampling cap for the group-order search before falling back
# to exhaustive counting.
_BSGS_MAX_POINTS = 60


def mult_order(a, p, p1_factors):
    """Order of a in F_p*, given the factorization of p-1 as (q, e) pairs."""
    a %= p
    o = p - 1
    for q, e in p1_factors:
        for _ in range(e):
            if o % q == 0 and pow(a, o // q, p) == 1:
                o //= q
            else:
                break
    return o


def primitive_root(p, p1_factors):
    """Smallest generator of F_p*."""
    if p == 2:
        return 1
    cofactors = [(p - 1) // q for q, _ in p1_factors]
    g = 2
    while True:
        if all(pow(g, c, p) != 1 for c in cofactors):
            return g
        g += 1


def dlog(a, g, p):
    """Discrete log of a to base g in F_p* (g a generator), by BSGS."""
    a %= p
    n = p - 1
    m = isqrt(n) + 1
    table = {}
    cur = 1
    for j in range(m):
        if cur not in table:
            table[cur] = j
        cur = cur * g % p
    giant = pow(g, n - (m % n), p)  # g^-m
    y = a
    for i in range(m + 1):
        j = table.get(y)
        if j is not None:
            return (i * m + j) % n
        y = y * giant % p
    raise ValueError("element not in the group generated by g")


def sqrt_mod(v, p):
    """A square root of v mod p (odd prime), or -1 if v is a non-residue."""
    v %= p
    if v == 0:
        return 0
    if pow(v, (p - 1) // 2, p) != 1:
        return -1
    if p % 4 == 3:
        return pow(v, (p + 1) // 4, p)
    # Tonelli-Shanks
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    c = pow(z, q, p)
    x = pow(v, (q + 1) // 2, p)
    t = pow(v, q, p)
    m = s
    while t != 1:
        i = 0
        t2 = t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        x = x * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return x


# ---------------------------------------------------------------- curves

def ec_neg(pt, p):
    if pt is None:
        return None
    x, y = pt
    return (x, (p - y) % p)


def ec_add(pt1, pt2, a, p):
    if pt1 is None:
        return pt2
    if pt2 is None:
        return pt1
    x1, y1 = pt1
    x2, y2 = pt2
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + a) * pow(2 * y1, p - 2, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, p - 2, p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return (x3, y3)


def ec_mul(k, pt, a, p):
    """k*pt by double-and-add; k may be negative."""
    if k < 0:
        k = -k
        pt = ec_neg(pt, p)
    acc = None
    while k:
        if k & 1:
            acc = ec_add(acc, pt, a, p)
        pt = ec_add(pt, pt, a, p)
        k >>= 1
    return acc


def ec_count(a, b, p):
    """|E(F_p)| by exhaustive counting with a residue table."""
    counts = [0] * p
    for y in range(p):
        counts[y * y % p] += 1
    n = 1
    for x in range(p):
        n += counts[(x * x % p * x + a * x + b) % p]
    return n


def ec_points(a, b, p):
    """All affine points of E(F_p), ordered by (x, y)."""
    roots = {}
    for y in range(p):
        roots.setdefault(y * y % p, []).append(y)
    pts = []
    for x in range(p):
        for y in sorted(roots.get((x * x % p * x + a * x + b) % p, ())):
            pts.append((x, y))
    return pts


def _factor_small(n):
    fac = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            fac.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        fac.append((n, 1))
    return fac


def ec_point_order(pt, a, p, n, n_factors):
    """Order of pt in E(F_p), given a multiple n of it (factored)."""
    if pt is None:
        return 1
    o = n
    for q, e in n_factors:
        for _ in range(e):
            if o % q == 0 and ec_mul(o // q, pt, a, p) is None:
                o //= q
            else:
                break
    return o


def _annihilator_in_interval(pt, a, p, lo, hi):
    """Some k in [lo, hi] with k*pt = O, by BSGS over the interval."""
    base = ec_mul(lo, pt, a, p)
    width = hi - lo + 1
    m = isqrt(width) + 1
    table = {}
    cur = None
    for j in range(m):
        if cur not in table:
            table[cur] = j
        cur = ec_add(cur, pt, a, p)
    target = ec_neg(base, p)
    step = ec_neg(ec_mul(m, pt, a, p), p)
    g = target
    for i in range(m + 1):
        j = table.get(g, -1)
        if j >= 0:
            k = lo + i * m + j
            if lo <= k <= hi:
                return k
        g = ec_add(g, step, a, p)
    raise ArithmeticError("no annihilator in the Hasse interval")


def ec_group_order_bsgs(a, b, p):
    """|E(F_p)| by point orders and BSGS in the Hasse interval.

    Returns 0 when the sampled point orders leave the candidate ambiguous;
    the caller should fall back to ec_count.
    """
    w = isqrt(4 * p)
    lo = max(1, p + 1 - w)
    hi = p + 1 + w
    e = 1
    sampled = 0
    for x in range(p):
        v = (x * x % p * x + a * x + b) % p
        y = sqrt_mod(v, p)
        if y < 0:
            continue
        pt = (x, y)
        k = _annihilator_in_interval(pt, a, p, lo, hi)
        s = ec_point_order(pt, a, p, k, _factor_small(k))
        e = e * s // gcd(e, s)
        first = ((lo + e - 1) // e) * e
        if first > hi:
            raise ArithmeticError("point order outside the Hasse interval")
        if first + e > hi:
            return first
        sampled += 1
        if sampled >= _BSGS_MAX_POINTS:
            return 0
    return 0
