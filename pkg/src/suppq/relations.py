"""Relation finding on product groups: phi(P) = c*Q blockwise.

Homomorphisms between a torus block and a curve block (or between distinct
curves) are zero, so an endomorphism decomposes into blocks: one torus block
gathering all multiplicative factors, and one block per curve.  The torus
side is decided exactly; curve blocks use bounded exhaustive search, so a
missing curve relation means "none within the bound".
"""

from dataclasses import dataclass
from math import lcm
from typing import List, Optional, Tuple

from suppq import ec, gm
from suppq.conditions import EcFactor, GmFactor, GroupSpec, ProductPoint
from suppq.errors import SpecSyntaxError


@dataclass(frozen=True)
class GmBlock:
    matrix: Tuple[Tuple[int, ...], ...]  # k x n on the flattened torus coords


@dataclass(frozen=True)
class EcBlock:
    curve: ec.CurveQ
    rows: Tuple[Tuple[int, ...], ...]  # one coefficient vector per Q point


@dataclass(frozen=True)
class ProductRelation:
    c: int
    gm_block: Optional[GmBlock]
    ec_blocks: Tuple[EcBlock, ...]
    exact: bool  # False when a bounded curve search took part

    def to_json(self) -> dict:
        out = {"c": self.c, "exact": self.exact, "blocks": []}
        if self.gm_block is not None:
            out["blocks"].append({"kind": "gm", "matrix": [list(r) for r in self.gm_block.matrix]})
        for blk in self.ec_blocks:
            out["blocks"].append({
                "kind": "ec",
                "curve": blk.curve.spec_string(),
                "rows": [list(r) for r in blk.rows],
            })
        return out


def _gm_coords(pt: ProductPoint) -> Tuple:
    coords = []
    for f, c in zip(pt.group.factors, pt.components):
        if isinstance(f, GmFactor):
            coords.extend(c)
    return tuple(coords)


def _ec_points(pt: ProductPoint, curve: ec.CurveQ) -> List:
    return [
        c
        for f, c in zip(pt.group.factors, pt.components)
        if isinstance(f, EcFactor) and f.curve == curve
    ]


def _curves(group: GroupSpec) -> List[ec.CurveQ]:
    seen: List[ec.CurveQ] = []
    for f in group.factors:
        if isinstance(f, EcFactor) and f.curve not in seen:
            seen.append(f.curve)
    return seen


def find_product_relation(
    p_pt: ProductPoint, q_pt: ProductPoint, bound: Optional[int] = None
) -> Optional[ProductRelation]:
    """Blockwise relation with overall c = lcm of the block minima."""
    has_ec = any(isinstance(f, EcFactor) for f in q_pt.group.factors) or any(
        isinstance(f, EcFactor) for f in p_pt.group.factors
    )
    if has_ec and bound is None:
        raise SpecSyntaxError("a coefficient bound is required with elliptic factors")

    block_cs: List[int] = []
    exact = True

    gm_p = _gm_coords(p_pt)
    gm_q = _gm_coords(q_pt)
    gm_rel = None
    if gm_q:
        if gm_p:
            gm_rel = gm.gm_find_relation(gm_p, gm_q)
            if gm_rel is None:
                return None
            block_cs.append(gm_rel[1])
        else:
            # no torus source: c*Q_gm must vanish, so every coordinate is +-1
            if any(abs(c) != 1 for c in gm_q):
                return None
            c_blk = 2 if any(c == -1 for c in gm_q) else 1
            gm_rel = (tuple(() for _ in gm_q), c_blk)
            block_cs.append(c_blk)

    ec_rel: List[Tuple[ec.CurveQ, List[Tuple[Tuple[int, ...], int]]]] = []
    for curve in _curves(q_pt.group):
        q_points = _ec_points(q_pt, curve)
        p_points = _ec_points(p_pt, curve)
        rows: List[Tuple[Tuple[int, ...], int]] = []
        for qp in q_points:
            if p_points:
                got = ec.ec_find_relation(curve, p_points, qp, bound) if qp is not None else ((0,) * len(p_points), 1)
                if got is None:
                    return None
                rows.append((tuple(got[0]), got[1]))
                exact = False if qp is not None else exact
            else:
                t = ec.ec_torsion_order(curve, qp)
                if t is None:
                    return None
                rows.append(((), t))
        ec_rel.append((curve, rows))
        for _, c_row in rows:
            block_cs.append(c_row)

    c_total = lcm(*block_cs) if block_cs else 1

    gm_block = None
    if gm_rel is not None:
        mat, c_blk = gm_rel
        scale = c_total // c_blk
        gm_block = GmBlock(tuple(tuple(scale * x for x in row) for row in mat))
    ec_blocks = []
    for curve, rows in ec_rel:
        scaled = []
        for vec, c_row in rows:
            scale = c_total // c_row
            scaled.append(tuple(scale * x for x in vec))
        ec_blocks.append(EcBlock(curve, tuple(scaled)))
    return ProductRelation(c_total, gm_block, tuple(ec_blocks), exact)


def verify_product_relation(p_pt: ProductPoint, q_pt: ProductPoint, rel: ProductRelation) -> bool:
    """Exact check of phi(P) = c*Q over Q, block by block."""
    gm_p = _gm_coords(p_pt)
    gm_q = _gm_coords(q_pt)
    if gm_q:
        mat = rel.gm_block.matrix if rel.gm_block else None
        if mat is None:
            return False
        img = gm.apply_endo(mat, gm_p) if gm_p else tuple(1 for _ in gm_q)
        if any(img[i] != gm_q[i] ** rel.c for i in range(len(gm_q))):
            return False
    blocks = {blk.curve: blk for blk in rel.ec_blocks}
    for curve in _curves(q_pt.group):
        q_points = _ec_points(q_pt, curve)
        p_points = _ec_points(p_pt, curve)
        blk = blocks.get(curve)
        if blk is None or len(blk.rows) != len(q_points):
            return False
        for vec, qp in zip(blk.rows, q_points):
            acc = None
            for coef, pp in zip(vec, p_points):
                acc = ec.ec_add(curve, acc, ec.ec_mul(curve, coef, pp))
            if acc != ec.ec_mul(curve, rel.c, qp):
                return False
    return True
