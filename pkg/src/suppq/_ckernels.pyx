# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the per-prime inner loops.

Mirror of suppq._pykernels (same functions, same results).  All arithmetic
is 64-bit: callers guarantee p < 2**31, so products stay below 2**62.
Points are encoded internally as x*p + y (and -1 for infinity).
"""

from libc.stdlib cimport free, malloc

BACKEND = "compiled"

_BSGS_MAX_POINTS = 60


cdef long long _powmod(long long a, long long e, long long p) noexcept:
    cdef long long r = 1
    a %= p
    if a < 0:
        a += p
    while e > 0:
        if e & 1:
            r = r * a % p
        a = a * a % p
        e >>= 1
    return r


def mult_order(a, p, p1_factors):
    """Order of a in F_p*, given the factorization of p-1 as (q, e) pairs."""
    cdef long long pp = p
    cdef long long aa = a % pp
    cdef long long o = pp - 1
    cdef long long q
    cdef int e, i
    for q_, e_ in p1_factors:
        q = q_
        e = e_
        for i in range(e):
            if o % q == 0 and _powmod(aa, o // q, pp) == 1:
                o //= q
            else:
                break
    return o


def primitive_root(p, p1_factors):
    """Smallest generator of F_p*."""
    cdef long long pp = p
    if pp == 2:
        return 1
    cofactors = [(p - 1) // q for q, _ in p1_factors]
    cdef long long g = 2
    cdef long long c
    cdef bint ok
    while True:
        ok = True
        for c_ in cofactors:
            c = c_
            if _powmod(g, c, pp) == 1:
                ok = False
                break
        if ok:
            return g
        g += 1


def dlog(a, g, p):
    """Discrete log of a to base g in F_p* (g a generator), by BSGS."""
    cdef long long pp = p
    cdef long long aa = a % pp
    cdef long long n = pp - 1
    cdef long long m = <long long>(n**0.5) + 1
    while m * m < n:
        m += 1
    table = {}
    cdef long long cur = 1
    cdef long long j, i
    for j in range(m):
        if cur not in table:
            table[cur] = j
        cur = cur * g % pp
    cdef long long giant = _powmod(g, n - (m % n), pp)
    cdef long long y = aa
    for i in range(m + 1):
        got = table.get(y)
        if got is not None:
            return (i * m + <long long>got) % n
        y = y * giant % pp
    raise ValueError("element not in the group generated by g")


def sqrt_mod(v, p):
    """A square root of v mod p (odd prime), or -1 if v is a non-residue."""
    return _sqrt_mod(v % p, p)


cdef long long _sqrt_mod(long long v, long long p):
    cdef long long q, z, c, x, t, b, t2
    cdef long long s, m, i
    v %= p
    if v < 0:
        v += p
    if v == 0:
        return 0
    if _powmod(v, (p - 1) // 2, p) != 1:
        return -1
    if p % 4 == 3:
        return _powmod(v, (p + 1) // 4, p)
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while _powmod(z, (p - 1) // 2, p) != p - 1:
        z += 1
    c = _powmod(z, q, p)
    x = _powmod(v, (q + 1) // 2, p)
    t = _powmod(v, q, p)
    m = s
    while t != 1:
        i = 0
        t2 = t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = _powmod(c, (<long long>1) << (m - i - 1), p)
        x = x * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return x


# ---------------------------------------------------------------- curves

cdef inline long long _code(pt, long long p):
    if pt is None:
        return -1
    return <long long>pt[0] * p + <long long>pt[1]


cdef inline object _decode(long long c, long long p):
    if c < 0:
        return None
    return (c // p, c % p)


cdef long long _add_code(long long c1, long long c2, long long a, long long p):
    cdef long long x1, y1, x2, y2, lam, x3, y3
    if c1 < 0:
        return c2
    if c2 < 0:
        return c1
    x1 = c1 // p
    y1 = c1 % p
    x2 = c2 // p
    y2 = c2 % p
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return -1
        lam = ((3 * x1) % p * x1 + a) % p * _powmod(2 * y1, p - 2, p) % p
    else:
        lam = (y2 - y1 + p) % p * _powmod(x2 - x1 + p, p - 2, p) % p
    x3 = (lam * lam + 2 * p - x1 - x2) % p
    y3 = (lam * ((x1 - x3 + p) % p) + p - y1) % p
    return x3 * p + y3


cdef long long _mul_code(long long k, long long c, long long a, long long p):
    cdef long long acc = -1
    if k < 0:
        k = -k
        if c >= 0 and c % p != 0:
            c = (c // p) * p + (p - c % p)
    while k:
        if k & 1:
            acc = _add_code(acc, c, a, p)
        c = _add_code(c, c, a, p)
        k >>= 1
    return acc


def ec_neg(pt, p):
    if pt is None:
        return None
    return (pt[0], (p - pt[1]) % p)


def ec_add(pt1, pt2, a, p):
    return _decode(_add_code(_code(pt1, p), _code(pt2, p), a, p), p)


def ec_mul(k, pt, a, p):
    """k*pt by double-and-add; k may be negative."""
    return _decode(_mul_code(k, _code(pt, p), a, p), p)


def ec_count(a, b, p):
    """|E(F_p)| by exhaustive counting with a residue table."""
    cdef long long pp = p
    cdef long long aa = a
    cdef long long bb = b
    cdef int *counts = <int *> malloc(pp * sizeof(int))
    if counts == NULL:
        raise MemoryError()
    cdef long long x, y, n
    try:
        for x in range(pp):
            counts[x] = 0
        for y in range(pp):
            counts[y * y % pp] += 1
        n = 1
        for x in range(pp):
            n += counts[(x * x % pp * x + aa * x + bb) % pp]
    finally:
        free(counts)
    return n


def ec_points(a, b, p):
    """All affine points of E(F_p), ordered by (x, y)."""
    cdef long long pp = p
    cdef long long aa = a
    cdef long long bb = b
    cdef long long x, y, v
    roots = {}
    for y in range(pp):
        roots.setdefault(y * y % pp, []).append(y)
    pts = []
    for x in range(pp):
        v = (x * x % pp * x + aa * x + bb) % pp
        ys = roots.get(v)
        if ys is not None:
            for y_ in sorted(ys):
                pts.append((x, y_))
    return pts


cdef long long _point_order_code(long long c, long long a, long long p, long long n, factors):
    cdef long long o = n
    cdef long long q
    cdef int e, i
    if c < 0:
        return 1
    for q_, e_ in factors:
        q = q_
        e = e_
        for i in range(e):
            if o % q == 0 and _mul_code(o // q, c, a, p) < 0:
                o //= q
            else:
                break
    return o


def ec_point_order(pt, a, p, n, n_factors):
    """Order of pt in E(F_p), given a multiple n of it (factored)."""
    return _point_order_code(_code(pt, p), a, p, n, n_factors)


def _factor_small(n):
    fac = []
    cdef long long nn = n
    cdef long long d = 2
    cdef int e
    while d * d <= nn:
        if nn % d == 0:
            e = 0
            while nn % d == 0:
                nn //= d
                e += 1
            fac.append((d, e))
        d += 1 if d == 2 else 2
    if nn > 1:
        fac.append((nn, 1))
    return fac


cdef long long _annihilator_code(long long c, long long a, long long p, long long lo, long long hi):
    cdef long long base = _mul_code(lo, c, a, p)
    cdef long long width = hi - lo + 1
    cdef long long m = <long long>(width**0.5) + 1
    while m * m < width:
        m += 1
    table = {}
    cdef long long cur = -1
    cdef long long j, i, k
    for j in range(m):
        if cur not in table:
            table[cur] = j
        cur = _add_code(cur, c, a, p)
    cdef long long target = base
    if target >= 0 and target % p != 0:
        target = (target // p) * p + (p - target % p)
    cdef long long step = _mul_code(m, c, a, p)
    if step >= 0 and step % p != 0:
        step = (step // p) * p + (p - step % p)
    cdef long long g = target
    for i in range(m + 1):
        got = table.get(g, -1)
        if <long long>got >= 0:
            k = lo + i * m + <long long>got
            if lo <= k <= hi:
                return k
        g = _add_code(g, step, a, p)
    raise ArithmeticError("no annihilator in the Hasse interval")


def ec_group_order_bsgs(a, b, p):
    """|E(F_p)| by point orders and BSGS in the Hasse interval.

    Returns 0 when the sampled point orders leave the candidate ambiguous;
    the caller should fall back to ec_count.
    """
    cdef long long pp = p
    cdef long long aa = a
    cdef long long bb = b
    cdef long long w = <long long>((4 * pp) ** 0.5)
    while (w + 1) * (w + 1) <= 4 * pp:
        w += 1
    while w * w > 4 * pp:
        w -= 1
    cdef long long lo = pp + 1 - w
    if lo < 1:
        lo = 1
    cdef long long hi = pp + 1 + w
    cdef long long e = 1
    cdef long long x, v, y, k, s, first, g
    cdef int sampled = 0
    for x in range(pp):
        v = (x * x % pp * x + aa * x + bb) % pp
        y = _sqrt_mod(v, pp)
        if y < 0:
            continue
        k = _annihilator_code(x * pp + y, aa, pp, lo, hi)
        s = _point_order_code(x * pp + y, aa, pp, k, _factor_small(k))
        g = _gcd(e, s)
        e = e // g * s
        first = ((lo + e - 1) // e) * e
        if first > hi:
            raise ArithmeticError("point order outside the Hasse interval")
        if first + e > hi:
            return first
        sampled += 1
        if sampled >= _BSGS_MAX_POINTS:
            return 0
    return 0


cdef long long _gcd(long long a, long long b) noexcept:
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    return a
