import random
from fractions import Fraction
from math import lcm

import pytest

from suppq import arith, ec, gm
from suppq.conditions import (
    EcFactor,
    GmFactor,
    GroupSpec,
    ProductPoint,
    ScanConfig,
    check_lmsp,
    check_lsp,
    check_msp,
    check_rsp,
    check_sp,
    check_wmsp,
    infer_gm_group,
    merge_reports,
    parse_group,
    parse_point,
    product_order,
)
from suppq.errors import SpecSyntaxError

F = Fraction


def gm_pt(*coords):
    pt = gm.gm_point(*coords)
    return ProductPoint(GroupSpec((GmFactor(len(pt)),)), (pt,))


# --------------------------------------------------------------- parsing

def test_parse_round_trip():
    g = parse_group("gm:2*ec:0,-2")
    assert g.spec_string() == "gm:2*ec:0,-2"
    pt = parse_point(g, "2,-1/3*3;5")
    assert pt.spec_string() == "2,-1/3*3;5"
    pt = parse_point(g, "4/9,7*inf")
    assert pt.components[1] is None


def test_parse_errors():
    with pytest.raises(SpecSyntaxError):
        parse_group("zz:1")
    with pytest.raises(SpecSyntaxError):
        parse_group("gm:0")
    g = parse_group("gm:2")
    with pytest.raises(SpecSyntaxError):
        parse_point(g, "2")  # wrong arity
    with pytest.raises(SpecSyntaxError):
        parse_point(g, "0,1")  # zero coordinate
    ge = parse_group("ec:0,-2")
    with pytest.raises(SpecSyntaxError):
        parse_point(ge, "1;1")  # not on the curve
    assert infer_gm_group("2,-1,5").spec_string() == "gm:3"


def test_product_order_mixed():
    g = parse_group("gm:1*ec:0,-2")
    pt = parse_point(g, "2*3;5")
    for p in (5, 7, 11):
        o_gm = gm.mult_order(2, p)
        o_ec = ec.ec_point_order(ec.CurveQ(0, -2), ec.ec_reduce(ec.CurveQ(0, -2), (F(3), F(5)), p), p)
        assert product_order(pt, p) == lcm(o_gm, o_ec)


# ------------------------------------------------------------ sp examples

def test_sp_holds_for_power():
    rep = check_sp(gm_pt(2), gm_pt(4), ScanConfig(2, 9999))
    assert rep.verdict == "HOLDS"
    assert rep.violations == []
    assert rep.skipped[0]["p"] == 2


def test_sp_violated():
    rep = check_sp(gm_pt(4), gm_pt(2), ScanConfig(2, 100))
    assert rep.verdict == "VIOLATED"
    ps = [v["p"] for v in rep.violations]
    assert 5 in ps
    v5 = next(v for v in rep.violations if v["p"] == 5)
    assert v5["witness"] == {"ord_p": 2, "ord_q": 4}


def test_sp_torsion_target_recorded_faithfully():
    rep = check_sp(gm_pt(2), gm_pt(-1), ScanConfig(2, 200))
    # violations exactly at primes where ord(2 mod p) is odd
    expect = [p for p in arith.prime_iterator(3, 200) if gm.mult_order(2, p) % 2 == 1]
    assert [v["p"] for v in rep.violations] == expect
    assert 7 in expect


def test_budget_gives_exceptions_verdict():
    rep = check_sp(gm_pt(2), gm_pt(-1), ScanConfig(2, 50, budget=100))
    assert rep.violations and rep.verdict == "HOLDS_WITH_EXCEPTIONS"
    assert rep.to_json()["exceptions"] == len(rep.violations)


# ----------------------------------------------------------- lsp examples

def test_lsp_power_holds():
    rep = check_lsp(gm_pt(2), gm_pt(2**16), 2, ScanConfig(2, 2000))
    assert rep.verdict == "HOLDS"


def test_lsp_fails_on_scaled_generator_but_rsp_holds():
    # (2**8, -1) vs (2, 1): the 2-part of the first coordinate's order is cut
    # by three, so the 2-adic comparison fails (first at p = 13), while the
    # radical comparison holds for every sampled prime.
    rep = check_lsp(gm_pt(2**8, -1), gm_pt(2, 1), 2, ScanConfig(2, 2000))
    assert rep.verdict == "VIOLATED"
    v = next(v for v in rep.violations if v["p"] == 13)
    assert v["witness"] == {"v_p": 1, "v_q": 2, "ord_p": 6, "ord_q": 12}
    rep = check_rsp(gm_pt(2**8, -1), gm_pt(2, 1), None, ScanConfig(2, 2000))
    assert rep.verdict == "HOLDS"


def test_lsp_violated_from_identity():
    rep = check_lsp(gm_pt(1), gm_pt(2), 2, ScanConfig(2, 100))
    assert rep.verdict == "VIOLATED"
    assert any(v["p"] == 5 for v in rep.violations)
    v5 = next(v for v in rep.violations if v["p"] == 5)
    assert v5["witness"]["v_q"] == 2 and v5["witness"]["v_p"] == 0


def test_lsp_slack_weakens():
    strict = check_lsp(gm_pt(1), gm_pt(2), 2, ScanConfig(2, 100))
    slack = check_lsp(gm_pt(1), gm_pt(2), 2, ScanConfig(2, 100), slack=10)
    assert strict.verdict == "VIOLATED" and slack.verdict == "HOLDS"
    assert any("slack" in n for n in slack.notes)


# ----------------------------------------------------------- rsp examples

def test_rsp_vacuous_premise_holds():
    rep = check_rsp(gm_pt(2, -1), gm_pt(3, 1), (2,), ScanConfig(2, 9999))
    assert rep.verdict == "HOLDS" and not rep.violations
    assert any("finite sample" in n for n in rep.notes)


def test_rsp_same_point_holds():
    rep = check_rsp(gm_pt(6, 10), gm_pt(6, 10), None, ScanConfig(2, 500))
    assert rep.verdict == "HOLDS"


def test_rsp_violated():
    rep = check_rsp(gm_pt(1), gm_pt(2), (3,), ScanConfig(2, 100))
    assert any(v["p"] == 7 and v["witness"]["ell"] == 3 for v in rep.violations)


# ------------------------------------------------------------- msp / wmsp

def test_msp_identity_pairs_hold():
    pts = [gm_pt(2), gm_pt(3)]
    rep = check_msp(pts, pts, ScanConfig(2, 500))
    assert rep.verdict == "HOLDS"


def test_msp_violation_with_witness():
    rep = check_msp([gm_pt(2)], [gm_pt(3)], ScanConfig(2, 100))
    assert rep.verdict == "VIOLATED"
    v = next(v for v in rep.violations if v["p"] == 7)
    m = v["witness"]["m"]
    # re-check the witness: 2^m = 1 but 3^m != 1 mod 7
    assert pow(2, m[0], 7) == 1 and pow(3, m[0], 7) != 1


def test_msp_exact_vs_box_agree():
    cfg_exact = ScanConfig(2, 50)
    cfg_box = ScanConfig(2, 50, box=60, force_box=True)
    for p_vec, q_vec in [
        ([gm_pt(2)], [gm_pt(3)]),
        ([gm_pt(2)], [gm_pt(4)]),
        ([gm_pt(2, 1), gm_pt(1, 3)], [gm_pt(4, 1), gm_pt(1, 9)]),
    ]:
        r1 = check_msp(p_vec, q_vec, cfg_exact)
        r2 = check_msp(p_vec, q_vec, cfg_box)
        assert r1.verdict == r2.verdict
        assert [v["p"] for v in r1.violations] == [v["p"] for v in r2.violations]


def test_msp_implies_pairwise_sp():
    # remark: with msp holding in exact mode, sp holds for each pair
    p_vec = [gm_pt(2, 1), gm_pt(1, 3)]
    q_vec = [gm_pt(4, 1), gm_pt(1, 27)]
    cfg = ScanConfig(2, 300)
    assert check_msp(p_vec, q_vec, cfg).verdict == "HOLDS"
    for pp, qq in zip(p_vec, q_vec):
        assert check_sp(pp, qq, cfg).verdict == "HOLDS"


def test_wmsp_trivial_and_violated():
    p1, p2 = gm_pt(2), gm_pt(3)
    assert check_wmsp(p1, p2, p1, p2, ScanConfig(2, 300)).verdict == "HOLDS"
    rep = check_wmsp(gm_pt(2), gm_pt(3), gm_pt(5), gm_pt(7), ScanConfig(2, 300))
    assert rep.verdict == "VIOLATED"
    v = rep.violations[0]
    p, m = v["p"], v["witness"]["m"]
    assert pow(2, 1, p) * pow(3, m, p) % p == 1
    assert pow(5, 1, p) * pow(7, m, p) % p != 1


def test_wmsp_exact_vs_box_agree():
    cfg_exact = ScanConfig(2, 60)
    cfg_box = ScanConfig(2, 60, box=70, force_box=True)
    r1 = check_wmsp(gm_pt(2), gm_pt(3), gm_pt(5), gm_pt(7), cfg_exact)
    r2 = check_wmsp(gm_pt(2), gm_pt(3), gm_pt(5), gm_pt(7), cfg_box)
    assert [v["p"] for v in r1.violations] == [v["p"] for v in r2.violations]


# ----------------------------------------------------------------- lmsp

def test_lmsp_identity_holds():
    pts = [gm_pt(2), gm_pt(3)]
    assert check_lmsp(pts, pts, 3, ScanConfig(2, 300)).verdict == "HOLDS"


def test_lmsp_violated_torsion_vs_two():
    rep = check_lmsp([gm_pt(-1)], [gm_pt(2)], 2, ScanConfig(2, 100))
    assert rep.verdict == "VIOLATED"
    v = next(v for v in rep.violations if v["p"] == 5)
    m = v["witness"]["m"][0]
    # premise: (-1)^m has odd order; conclusion: 2^m has even order mod 5
    assert m % 2 == 0
    assert gm.mult_order(pow(2, m, 5), 5) % 2 == 0


def test_lmsp_exact_vs_box_agree():
    cfg_exact = ScanConfig(2, 60)
    cfg_box = ScanConfig(2, 60, box=16, force_box=True)
    r1 = check_lmsp([gm_pt(-1)], [gm_pt(2)], 2, cfg_exact)
    r2 = check_lmsp([gm_pt(-1)], [gm_pt(2)], 2, cfg_box)
    assert {v["p"] for v in r2.violations} <= {v["p"] for v in r1.violations}
    assert r1.verdict == r2.verdict == "VIOLATED"


# ----------------------------------------------- implications and merging

def test_sp_implies_lsp_and_rsp_per_prime():
    rng = random.Random(77)
    for _ in range(8):
        a = rng.choice([2, 3, 4, 6, -2, 12])
        b = rng.choice([2, 3, 4, 5, 9, -3])
        cfg = ScanConfig(2, 300)
        sp = check_sp(gm_pt(a), gm_pt(b), cfg)
        sp_bad = {v["p"] for v in sp.violations}
        for ell in (2, 3, 5):
            lsp = check_lsp(gm_pt(a), gm_pt(b), ell, cfg)
            assert {v["p"] for v in lsp.violations} <= sp_bad
        rsp = check_rsp(gm_pt(a), gm_pt(b), (2, 3, 5, 7), cfg)
        assert {v["p"] for v in rsp.violations} <= sp_bad


def test_constructed_instances_hold_without_exceptions():
    rng = random.Random(99)
    for _ in range(10):
        n = rng.randint(1, 3)
        coords = []
        for _ in range(n):
            c = F(1)
            for q in (2, 3, 5):
                c *= F(q) ** rng.randint(-2, 2)
            coords.append(-c if rng.random() < 0.3 else c)
        pt = gm.gm_point(*coords)
        mat = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(rng.randint(1, 3)))
        img = gm.apply_endo(mat, pt)
        rep = check_sp(gm_pt(*coords), gm_pt(*img), ScanConfig(2, 500))
        assert rep.verdict == "HOLDS" and not rep.violations


def test_merge_reports():
    full = check_sp(gm_pt(4), gm_pt(2), ScanConfig(2, 400))
    left = check_sp(gm_pt(4), gm_pt(2), ScanConfig(2, 199))
    right = check_sp(gm_pt(4), gm_pt(2), ScanConfig(200, 400))
    merged = merge_reports(left, right)
    assert merged.tested == full.tested
    assert merged.violations == full.violations
    assert merged.skipped == full.skipped
    assert (merged.lo, merged.hi) == (2, 400)
    also = merge_reports(right, left)
    assert also.violations == merged.violations
    with pytest.raises(ValueError):
        merge_reports(full, right)  # overlapping ranges


def test_report_json_schema():
    rep = check_sp(gm_pt(2), gm_pt(4), ScanConfig(2, 50))
    doc = rep.to_json()
    assert doc["schema"] == 1
    assert set(doc) == {
        "schema", "condition", "range", "tested", "skipped", "violations",
        "verdict", "exceptions", "budget", "notes",
    }
    assert doc["condition"] == "sp"
    assert doc["range"] == [2, 50]


def test_msp_on_curves_box_mode():
    curve = ec.CurveQ(0, -2)
    group = GroupSpec((EcFactor(curve), EcFactor(curve)))
    r = (F(3), F(5))
    p1 = ProductPoint(group, (r, None))
    p2 = ProductPoint(group, (None, ec.ec_mul(curve, 2, r)))
    q1 = ProductPoint(group, (r, None))
    q2 = ProductPoint(group, (None, r))
    # premise: m1*R = 0 and 2*m2*R = 0; conclusion needs m2*R = 0: fails at
    # any prime where ord(R) is even and 2*m2 = ord(R) with m2 <= box
    rep = check_msp([p1, p2], [q1, q2], ScanConfig(2, 60, box=20))
    assert rep.verdict == "VIOLATED"
    assert any("box mode" in n for n in rep.notes)
    v = rep.violations[0]
    p, m = v["p"], v["witness"]["m"]
    red = ec.ec_reduce(curve, r, p)
    a = curve.a % p
    from suppq.backend import kernels
    assert kernels.ec_mul(m[0], red, a, p) is None
    assert kernels.ec_mul(2 * m[1], red, a, p) is None
    assert kernels.ec_mul(m[1], red, a, p) is not None
