import json
import math
from fractions import Fraction as Q

import numpy as np
import pytest

from hilbcurve.exactalg import UniPoly
from hilbcurve.toric import (
    DegeneratePolytope,
    LatticePolytope,
    NotReflexive,
    ToricFanoRecord,
    dual_polytope,
    fano_index,
    lattice_point_array,
    lattice_points,
    load_records,
    load_table1,
    normalized_volume,
    parse_printed_poly,
    sweep,
    toric_h0,
    toric_hc,
)

P2 = LatticePolytope([(1, 0), (0, 1), (-1, -1)])
P1P1 = LatticePolytope([(1, 0), (0, 1), (-1, 0), (0, -1)])
P3 = LatticePolytope([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)])
CUBE = LatticePolytope([(a, b, c) for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)])


def test_dual_of_plane_fan():
    dual = dual_polytope(P2)
    assert set(dual.extreme_vertices) == {(2, -1), (-1, 2), (-1, -1)}
    assert dual_polytope(dual).same_as(P2)


def test_facets_are_primitive():
    for a, b in CUBE.facets:
        assert math.gcd(*a) == 1
        assert b == 1


@pytest.mark.parametrize("t", range(0, 6))
def test_dilated_triangle_counts(t):
    # 3t-dilated standard triangle has C(3t+2, 2) points
    assert lattice_points(dual_polytope(P2), t) == math.comb(3 * t + 2, 2)


@pytest.mark.parametrize("t", range(0, 5))
def test_cube_counts(t):
    assert lattice_points(CUBE, t) == (2 * t + 1) ** 3


def test_fractional_scale():
    pts = lattice_point_array(CUBE, Q(1, 2))
    assert pts.shape == (1, 3) and np.all(pts == 0)


def test_volumes():
    assert normalized_volume(P2) == 3
    assert normalized_volume(dual_polytope(P2)) == 9
    assert normalized_volume(CUBE) == 48
    assert normalized_volume(dual_polytope(P3)) == 64


def test_index_of_projective_space():
    iota, fund = fano_index(dual_polytope(P3))
    assert iota == 4
    assert normalized_volume(fund) == 1


def test_index_of_quadric_surface():
    iota, fund = fano_index(dual_polytope(P1P1))
    assert iota == 2
    assert lattice_points(fund) == 4


def test_not_reflexive():
    P = LatticePolytope([(2, 0), (0, 1), (-1, -1)])
    with pytest.raises(NotReflexive):
        dual_polytope(P)


def test_degenerate_polytope():
    flat = LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0)])
    with pytest.raises(DegeneratePolytope):
        flat.facets
    with pytest.raises(DegeneratePolytope):
        LatticePolytope([])


def test_interior_points_are_not_vertices():
    P = LatticePolytope([(1, 0), (0, 1), (-1, -1), (0, 0)])
    assert set(P.extreme_vertices) == {(1, 0), (0, 1), (-1, -1)}


def test_parse_printed():
    assert parse_printed_poly("25/3*(z+1/2)(z+2/5)(z+3/5)") == UniPoly.from_roots(
        [Q(-1, 2), Q(-2, 5), Q(-3, 5)], lead=Q(25, 3))
    assert parse_printed_poly("4*(z+1/2)^2") == 4 * UniPoly([Q(1, 2), 1]) ** 2
    assert parse_printed_poly("-1/2*(z-2)(z+1)") == UniPoly.from_roots([2, -1], lead=Q(-1, 2))
    with pytest.raises(ValueError):
        parse_printed_poly("z**2")


def test_record_hilbert_curve_of_projective_plane():
    rec = ToricFanoRecord(P2)
    hc, red = toric_hc(rec)
    assert hc.iota == 3 and red.over_Q
    assert hc.q == UniPoly.from_roots([-1, -2], lead=Q(1, 2))
    assert toric_h0(rec, 2) == 6


def test_record_index_two_gives_square_for_p1p1():
    hc, _ = toric_hc(ToricFanoRecord(P1P1))
    assert hc.q == UniPoly([1, 2, 1])
    # direct: chi(O(t, t)) = (t + 1)^2
    assert all(hc.q(t) == (t + 1) ** 2 for t in range(5))


def test_record_with_r():
    hc, _ = toric_hc(ToricFanoRecord(P3), 3)
    assert hc.r == 3 and hc.expanded(0, 1) == 20


def test_bundled_table():
    recs = load_table1()
    assert [r.id for r in recs] == [3, 4, 5, 6, 12, 17, 19, 22, 23]
    for rec in recs:
        assert rec.dual_agrees
        assert rec.iota == rec.meta["iota"]
        assert rec.degree == rec.meta["degree"]
        assert rec.vol_primal == rec.meta["vol"]


def test_sweep_orders_by_id_and_is_deterministic():
    recs = list(reversed(load_table1()))
    one = sweep(recs, jobs=1)
    many = sweep(recs, jobs=4)
    assert [r["id"] for r in one] == sorted(r.id for r in recs)
    assert [r["hc"].q for r in one] == [r["hc"].q for r in many]


def test_sweep_reports_bad_records():
    bad = ToricFanoRecord(LatticePolytope([(2, 0), (0, 1), (-1, -1)]), 99)
    rows = sweep([bad] + load_table1()[:1])
    assert rows[-1]["id"] == 99 and "not reflexive" in rows[-1]["error"]


def test_load_records_errors(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("[{\"id\": 1, \"vertices\": [[1, 0], [0, 1]]},\n {\"id\": 2 ")
    with pytest.raises(ValueError, match="line 2"):
        load_records(str(path))
    with pytest.raises(ValueError, match="id=7"):
        load_records([{"id": 7, "dim": 3, "vertices": [[1, 0], [0, 1], [-1, -1]]}])
    with pytest.raises(ValueError, match="record #0"):
        load_records([{"id": 8}])


def test_record_json_round_trip():
    rec = load_table1()[0]
    again = ToricFanoRecord.from_json(json.loads(json.dumps(rec.to_json())))
    assert again == rec and again.meta == rec.meta
