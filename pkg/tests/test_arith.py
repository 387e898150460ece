import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from suppq import arith
from suppq.errors import EmptyRange, FactorizationLimitExceeded, NotSublattice, RankMismatch, ZeroInput


def naive_factor(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def naive_is_prime(n):
    return n >= 2 and all(n % d for d in range(2, n))


# ------------------------------------------------------------ primality

def test_is_prime_matches_naive():
    for n in range(2000):
        assert arith.is_prime(n) == naive_is_prime(n), n


@pytest.mark.parametrize("lo,hi,expect", [
    (2, 10, [2, 3, 5, 7]),
    (90, 100, [97]),
    (9973, 9973, [9973]),
])
def test_prime_iterator(lo, hi, expect):
    got = list(arith.prime_iterator(lo, hi))
    assert got == expect
    assert all(naive_is_prime(p) for p in got)


def test_prime_iterator_large_range_uses_mr():
    assert list(arith.prime_iterator(4_000_037, 4_000_037)) == [4_000_037]


@pytest.mark.parametrize("lo,hi", [(1, 10), (10, 5), (3, 2)])
def test_prime_iterator_empty_range(lo, hi):
    with pytest.raises(EmptyRange):
        arith.prime_iterator(lo, hi)


# -------------------------------------------------------- factorization

def test_factor_examples():
    f = arith.factor_integer(1)
    assert (f.sign, f.exponents) == (1, {})
    f = arith.factor_integer(-12)
    assert (f.sign, f.exponents) == (-1, {2: 2, 3: 1})
    f = arith.factor_integer(9991)
    assert f.exponents == naive_factor(9991) == {97: 1, 103: 1}


def test_factor_zero_raises():
    with pytest.raises(ZeroInput):
        arith.factor_integer(0)
    with pytest.raises(ZeroInput):
        arith.exponent_vector(Fraction(0))


def test_factor_limit():
    m = 2**89 - 1  # prime, passes through fine
    assert arith.factor_integer(m).exponents == {m: 1}
    with pytest.raises(FactorizationLimitExceeded):
        arith.factor_integer(m * m)  # composite cofactor beyond 2**80


def test_exponent_vector_examples():
    f = arith.exponent_vector(Fraction(4, 9))
    assert (f.sign, f.exponents) == (1, {2: 2, 3: -2})
    f = arith.exponent_vector(Fraction(-1))
    assert (f.sign, f.exponents) == (-1, {})
    f = arith.exponent_vector(2)
    assert (f.sign, f.exponents) == (1, {2: 1})


@settings(max_examples=80, deadline=None)
@given(
    num=st.integers(min_value=-(10**12), max_value=10**12).filter(lambda n: n != 0),
    den=st.integers(min_value=1, max_value=10**12),
)
def test_exponent_vector_round_trip(num, den):
    q = Fraction(num, den)
    assert arith.exponent_vector(q).value() == q


def test_factor_round_trip_random():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 10**12) * rng.choice([1, -1])
        assert arith.factor_integer(n).value() == n


# ----------------------------------------------------------- valuation

@pytest.mark.parametrize("n,ell,v", [(24, 2, 3), (24, 5, 0), (3**7 * 11, 3, 7)])
def test_valuation_examples(n, ell, v):
    assert arith.valuation(n, ell) == v


def test_valuation_zero_raises():
    with pytest.raises(ZeroInput):
        arith.valuation(0, 2)


@settings(max_examples=60, deadline=None)
@given(
    a=st.integers(min_value=-(10**6), max_value=10**6).filter(lambda n: n != 0),
    b=st.integers(min_value=-(10**6), max_value=10**6).filter(lambda n: n != 0),
    ell=st.sampled_from([2, 3, 5, 7, 11]),
)
def test_valuation_additive(a, b, ell):
    assert arith.valuation(a * b, ell) == arith.valuation(a, ell) + arith.valuation(b, ell)


# ------------------------------------------------------- normal forms

def snf_2x2_brute(m):
    """Brute-force search over small unimodular U, V for the 2x2 example."""
    best = None
    span = range(-3, 4)
    for u in ([a, b, c, d] for a in span for b in span for c in span for d in span):
        if u[0] * u[3] - u[1] * u[2] not in (1, -1):
            continue
        for v in ([a, b, c, d] for a in span for b in span for c in span for d in span):
            if v[0] * v[3] - v[1] * v[2] not in (1, -1):
                continue
            um = [[u[0] * m[0][0] + u[1] * m[1][0], u[0] * m[0][1] + u[1] * m[1][1]],
                  [u[2] * m[0][0] + u[3] * m[1][0], u[2] * m[0][1] + u[3] * m[1][1]]]
            d = [[um[0][0] * v[0] + um[0][1] * v[2], um[0][0] * v[1] + um[0][1] * v[3]],
                 [um[1][0] * v[0] + um[1][1] * v[2], um[1][0] * v[1] + um[1][1] * v[3]]]
            if d[0][1] or d[1][0]:
                continue
            d0, d1 = abs(d[0][0]), abs(d[1][1])
            if d1 == 0 or (d0 and d1 % d0 == 0):
                cand = (d0, d1)
                if best is None or cand < best:
                    best = cand
    return best


def test_snf_examples():
    _, d, _ = arith.smith_normal_form([[1, 0], [0, 1]])
    assert d == [[1, 0], [0, 1]]
    u, d, v = arith.smith_normal_form([[2, 0], [0, 3]])
    assert (d[0][0], d[1][1]) == snf_2x2_brute([[2, 0], [0, 3]]) == (1, 6)
    _, d, _ = arith.smith_normal_form([[2, 4], [0, 0]])
    assert (d[0][0], d[1][1]) == (2, 0)


def _check_snf(mat):
    u, d, v = arith.smith_normal_form(mat)
    assert arith.mat_mul(arith.mat_mul(u, mat), v) == d
    assert abs(arith.mat_det(u)) == 1
    assert abs(arith.mat_det(v)) == 1
    m, n = len(mat), len(mat[0])
    for i in range(m):
        for j in range(n):
            if i != j:
                assert d[i][j] == 0
    diag = [d[i][i] for i in range(min(m, n))]
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0


def test_snf_random():
    rng = random.Random(3)
    for _ in range(150):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        mat = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        _check_snf(mat)


def test_hnf_and_solve_round_trip():
    rng = random.Random(11)
    for _ in range(100):
        m, n = rng.randint(1, 4), rng.randint(1, 5)
        mat = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        h, u, pivots = arith.row_hnf(mat, n)
        assert arith.mat_mul(u, mat) == h
        assert abs(arith.mat_det(u)) == 1
        # any integer combination of rows is solvable against the HNF
        coeffs = [rng.randint(-4, 4) for _ in range(m)]
        v = [sum(coeffs[i] * mat[i][j] for i in range(m)) for j in range(n)]
        y = arith.solve_in_rowspace(h[: len(pivots)], pivots, v)
        assert y is not None
        rec = [sum(y[i] * h[i][j] for i in range(len(pivots))) for j in range(n)]
        assert rec == v


def test_left_kernel():
    rng = random.Random(5)
    for _ in range(80):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        mat = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
        kern = arith.left_kernel(mat, n)
        for vec in kern:
            assert all(sum(vec[i] * mat[i][j] for i in range(m)) == 0 for j in range(n))
        h, _, pivots = arith.row_hnf(mat, n)
        assert len(kern) == m - len(pivots)


# -------------------------------------------------------------- lattices

def test_saturation_examples():
    lat = arith.lattice_from_generators([(2, 2)], 2)
    sat = arith.lattice_saturation(lat)
    assert sat.same_lattice(arith.lattice_from_generators([(1, 1)], 2))
    assert arith.lattice_index(lat, sat) == 2

    full = arith.lattice_from_generators([(1, 0), (0, 1)], 2)
    assert arith.lattice_saturation(full).same_lattice(full)
    assert arith.lattice_index(full, full) == 1


def test_index_by_coset_enumeration():
    # cosets of span{(2,0),(0,3)} in Z^2: canonical reps (x mod 2, y mod 3)
    lat = arith.lattice_from_generators([(2, 0), (0, 3)], 2)
    reps = {(x % 2, y % 3) for x in range(6) for y in range(6)}
    assert len(reps) == 6
    assert arith.lattice_index(lat, arith.lattice_from_generators([(1, 0), (0, 1)], 2)) == 6


def test_saturation_idempotent_and_multiplicative():
    rng = random.Random(13)
    for _ in range(60):
        n = rng.randint(1, 4)
        r = rng.randint(1, n)
        gens = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(r)]
        lat = arith.lattice_from_generators(gens, n)
        if lat.rank == 0:
            continue
        sat = arith.lattice_saturation(lat)
        assert arith.lattice_saturation(sat).same_lattice(sat)
        idx = arith.lattice_index(lat, sat)
        assert idx >= 1

        # stack an independent block: the index multiplies
        m = rng.randint(1, 3)
        s = rng.randint(1, m)
        gens2 = [[rng.randint(-5, 5) for _ in range(m)] for _ in range(s)]
        lat2 = arith.lattice_from_generators(gens2, m)
        if lat2.rank == 0:
            continue
        idx2 = arith.lattice_index(lat2, arith.lattice_saturation(lat2))
        stacked = arith.lattice_from_generators(
            [tuple(row) + (0,) * m for row in lat.rows]
            + [(0,) * n + tuple(row) for row in lat2.rows],
            n + m,
        )
        sat_stacked = arith.lattice_saturation(stacked)
        assert arith.lattice_index(stacked, sat_stacked) == idx * idx2


def test_lattice_index_errors():
    sup = arith.lattice_from_generators([(2, 0), (0, 2)], 2)
    with pytest.raises(NotSublattice):
        arith.lattice_index(arith.lattice_from_generators([(1, 0)], 2), sup)
    with pytest.raises(RankMismatch):
        arith.lattice_index(arith.lattice_from_generators([(2, 0)], 2), sup)


def test_lattice_basis_rejects_dependent_rows():
    with pytest.raises(ValueError):
        arith.LatticeBasis(((1, 2), (2, 4)), 2)
