import math
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbcurve import fanocore as fc
from hilbcurve.exactalg import BiPoly, LinearSystem, UniPoly, solve_linear, top_form, vandermonde


def binom(top, k):
    return math.prod(Q(top - i, i + 1) for i in range(k))


# --- interpolation ----------------------------------------------------------


def test_quadric_surface_from_h0():
    # P1 x P1 with H = O(1,1): h0(-tK) = 1 + t(t+1)K^2/2 at K^2 = 8
    hc = fc.fano_hc(fc.FanoInput(2, 1, 1, [1, 9, 25]))
    assert hc.phi == UniPoly([1, 4, 4])
    assert hc.q == 4 * UniPoly([Q(1, 2), 1]) ** 2


def test_projective_plane_needs_only_h0_of_o():
    hc = fc.fano_hc(fc.FanoInput(2, 3, 1, [1]))
    assert hc.q == UniPoly.from_roots([-1, -2], lead=Q(1, 2))


def test_p2_times_p1_lattice_oracle():
    # h0(O(3t, 2t)) = C(3t+2, 2)(2t+1)
    h0 = [binom(3 * t + 2, 2) * (2 * t + 1) for t in range(4)]
    assert h0 == [1, 30, 140, 385]
    hc = fc.fano_hc(fc.FanoInput(3, 1, 1, h0))
    assert hc.q == UniPoly.from_roots([Q(-1, 2), Q(-1, 3), Q(-2, 3)], lead=9)


def test_inconsistent_h0_list_does_not_factor():
    # 1, 30, 126, 344 is not the section count of any polarization of P2 x P1
    hc = fc.fano_hc(fc.FanoInput(3, 1, 1, [1, 30, 126, 344]))
    assert hc.q != UniPoly.from_roots([Q(-1, 2), Q(-1, 3), Q(-2, 3)], lead=9)
    assert not fc.serre_check(hc.expanded, 3)


@pytest.mark.parametrize("kwargs", [
    dict(n=1, iota=1, r=1, h0=[1, 2, 3]),
    dict(n=3, iota=5, r=1, h0=[1]),
    dict(n=3, iota=2, r=0, h0=[1, 2, 3]),
    dict(n=3, iota=2, r=1, h0=[1, 2]),
    dict(n=3, iota=2, r=1, h0=[2, 2, 3]),
])
def test_fano_input_validation(kwargs):
    with pytest.raises(ValueError):
        fc.FanoInput(**kwargs)


def test_fano_input_json():
    inp = fc.FanoInput(3, 1, 2, [1, 30, 140, 385])
    assert fc.FanoInput.from_json(inp.to_json()) == inp
    assert fc.fano_from_json({"n": 3, "kind": "quadric", "r": 1}).iota == 3


def test_delta_values():
    assert fc.delta(0, 1) == 1
    assert fc.delta(2, 4) == 3 * 4 * 5


# --- low coindex section counts --------------------------------------------


def test_del_pezzo_sections():
    assert fc.h0_low_coindex(3, 7, 1, 2) == 9
    assert fc.h0_low_coindex(3, 7, 2, 2) == 31
    assert fc.h0_low_coindex(6, 5, 0, 3 - 1) == 1


def test_mukai_sections_start_with_one():
    assert fc.h0_low_coindex(6, 10, 0, 3) == 1


def test_mukai_sections_are_those_of_a_gushel_mukai_sixfold():
    # double cover of G(2,5) branched in a quadric: h0(sH) = h0(G, sH) + h0(G, (s-1)H)
    g25 = [1, 10, 50, 175]
    want = [g25[s] + (g25[s - 1] if s else 0) for s in range(4)]
    assert [fc.h0_low_coindex(6, 10, s, 3) for s in range(4)] == want


def test_low_coindex_errors():
    with pytest.raises(ValueError):
        fc.h0_low_coindex(6, 10, 4, 3)
    with pytest.raises(ValueError):
        fc.h0_low_coindex(6, 9, 1, 3)
    with pytest.raises(ValueError):
        fc.h0_low_coindex(4, 3, 1, 1)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("d", [1, 3, 5])
def test_del_pezzo_sections_interpolate_to_closed_form(n, d):
    h0 = [fc.h0_low_coindex(n, d, s, 2) for s in range(3)]
    assert fc.fano_hc(fc.FanoInput(n, n - 1, 1, h0)).q == fc.closed_form("delpezzo", n, 1, d).q


# --- Mukai ------------------------------------------------------------------


def test_mukai_coefficient_examples():
    a0, a1, a2, a3 = fc.mukai_coeffs(6, 2)
    assert a3 == Q(1, 360)
    assert a0 == Q(1, 6)
    assert a2 == Q(3 * 2 * 4, 2 * 720)
    with pytest.raises(ValueError):
        fc.mukai_coeffs(5, 2)


@pytest.mark.parametrize("n", range(6, 10))
@pytest.mark.parametrize("d", [2, 4, 10, 18])
def test_mukai_sections_reproduce_coefficients(n, d):
    h0 = [fc.h0_low_coindex(n, d, s, 3) for s in range(4)]
    rhs = [Q(v) / fc.delta(s, n - 2) for s, v in enumerate(h0)]
    sol = solve_linear(LinearSystem(vandermonde(range(4)), rhs)).solution
    assert sol == fc.mukai_coeffs(n, d)
    assert fc.serre_check(fc.closed_form("mukai", n, 1, d).expanded, n)


@pytest.mark.parametrize("n", range(6, 10))
def test_printed_linear_coefficient_breaks_serre_symmetry(n):
    # a1 = [(d/2 + 1) n^2 - (2d + 1) n + 2d] / n! gives a cubic not odd about -(n-2)/2
    d = 10
    a0, _, a2, a3 = fc.mukai_coeffs(n, d)
    a1 = Q((d // 2 + 1) * n * n - (2 * d + 1) * n + 2 * d, math.factorial(n))
    hc = fc.FactoredHC(n, 1, n - 2, UniPoly([a0, a1, a2, a3]))
    assert not fc.serre_check(hc.expanded, n)
    assert fc.serre_check(fc.closed_form("mukai", n, 1, d).expanded, n)


# --- closed forms -----------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 8))
@pytest.mark.parametrize("r", [1, 2, 3])
def test_projective_space_closed_form(n, r):
    hc = fc.closed_form("pn", n, r)
    for z in range(-n - 1, 2 * n):
        assert hc.q(z) == binom(z + n, n)
    assert hc.degree == 1


@pytest.mark.parametrize("n", range(2, 8))
def test_quadric_closed_form_counts_sections(n):
    q = fc.closed_form("quadric", n, 1).q
    for z in range(-n, 2 * n):
        assert q(z) == binom(z + n + 1, n + 1) - binom(z + n - 1, n + 1)
    assert fc.closed_form("quadric", n, 1).degree == 2


def test_closed_form_rejections():
    with pytest.raises(ValueError):
        fc.closed_form("delpezzo", 3, 1, 8)
    with pytest.raises(ValueError):
        fc.closed_form("delpezzo", 2, 1, 9)
    with pytest.raises(ValueError):
        fc.closed_form("delpezzo", 3, 1)
    with pytest.raises(ValueError):
        fc.closed_form("mukai", 6, 1, 3)
    with pytest.raises(ValueError):
        fc.closed_form("pn", 3, 2, strict=True)
    with pytest.raises(ValueError):
        fc.closed_form("nonsense", 3, 1)


def test_kind_aliases():
    assert fc.FanoKind.parse("dP") is fc.FanoKind.DELPEZZO
    assert fc.FanoKind.parse("P") is fc.FanoKind.PN
    assert fc.FanoKind.parse("del_pezzo") is fc.FanoKind.DELPEZZO


def _w(slope):
    return BiPoly.y() - slope * BiPoly.x()


def test_quadric_threefold_centered():
    want = Q(1, 3) * _w(3) * (_w(3) - Q(1, 2)) * (_w(3) + Q(1, 2))
    assert fc.closed_form("quadric", 3, 1).centered() == want


def test_del_pezzo_seven_centered():
    want = Q(7, 6) * _w(2) * (_w(2) ** 2 - Q(1, 7))
    assert fc.closed_form("delpezzo", 3, 1, 7).centered() == want


def test_projective_threefold_with_double_hyperplane():
    hc = fc.closed_form("pn", 3, 2)
    # chi(O(2)) = 10 at (x, y) = (0, 1)
    assert hc.expanded(0, 1) == 10
    assert hc.centered() == Q(4, 3) * (_w(2) + Q(1, 2)) * _w(2) * (_w(2) - Q(1, 2))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["pn", "quadric", "delpezzo"]), st.integers(3, 8), st.integers(1, 4),
       st.integers(1, 9))
def test_closed_forms_have_forced_roots_and_serre(kind, n, r, d):
    if kind == "delpezzo" and (n, d) == (3, 8):
        return
    hc = fc.closed_form(kind, n, r, d if kind == "delpezzo" else None)
    assert all(hc.q(j) == 0 for j in hc.forced_roots)
    assert fc.serre_check(hc.expanded, n)
    # K + (iota / r) L is trivial
    assert top_form(hc.expanded, n)(r, hc.iota) == 0


# --- surfaces ---------------------------------------------------------------


def _u(a, b):
    return a * BiPoly.x() + b * BiPoly.y()


def test_surface_plane():
    p = fc.surface_hc(fc.SurfaceInput(9, -3, 1, 1))
    assert fc.centered(p) == Q(1, 2) * (_u(3, -1) ** 2 - Q(1, 4))


def test_surface_del_pezzo_seven():
    p = fc.surface_hc(fc.SurfaceInput(7, -7, 7, 1))
    assert fc.centered(p) == Q(7, 2) * _u(1, -1) ** 2 + Q(1, 8)


def test_surface_del_pezzo_eight():
    p = fc.surface_hc(fc.SurfaceInput(8, -8, 8, 1))
    assert fc.centered(p) == 4 * _u(1, -1) ** 2


def test_surface_requires_positive_square():
    with pytest.raises(ValueError):
        fc.SurfaceInput(9, -3, 0, 1)


# --- geography and reducibility --------------------------------------------


def test_geography_values():
    assert fc.geography(3, 7).h == Q(1, 7)
    assert fc.geography(6, 5).arrangement("R") == "l1 + 2l2 + 2l3 + l4"
    assert fc.geography(5, 5).arrangement("Q") == "l1 + 3l2 + l3"
    g = fc.geography(3, 7)
    assert g.G_class_R == "two-lines" and g.G_class_Q == "empty"
    assert g.arrangement("Q") == "l1"
    assert float(g.conic[0].intercept) == pytest.approx(1 / math.sqrt(7))


def test_geography_slope_with_r():
    g = fc.geography(4, 6, 5)
    assert all(ln.slope == Q(3, 5) for ln in g.lines)
    assert fc.geography(4, 5).h < 0


def test_geography_json_keys():
    data = fc.geography(4, 6).to_json()
    assert data["arrangement_R"] == "2l1 + 2l2"
    assert data["h"] == "1/4"


def test_reducibility_of_del_pezzo_seven():
    red = fc.reducibility(fc.closed_form("delpezzo", 3, 1, 7))
    assert (red.over_C, red.over_R, red.over_Q) == (True, True, False)
    red = fc.reducibility(fc.closed_form("delpezzo", 3, 1, 5))
    assert (red.over_R, red.over_Q) == (False, False)
    red = fc.reducibility(fc.closed_form("delpezzo", 4, 1, 6))
    assert red.over_Q


def test_rational_lines():
    lines = fc.rational_lines(fc.closed_form("pn", 3, 1))
    assert [ln.intercept for ln in lines] == [Q(1), Q(0), Q(-1)]
    assert {ln.slope for ln in lines} == {Q(4)}


# --- recognition ------------------------------------------------------------


def _families(p, n, r):
    return [m.family for m in fc.match_canonical(p, n, r)]


def test_match_projective_space():
    assert _families(fc.closed_form("pn", 4, 2).expanded, 4, 2)[0] == "Pn"


def test_match_del_pezzo_extracts_degree():
    ms = fc.match_canonical(fc.closed_form("delpezzo", 4, 1, 4).expanded, 4, 1)
    dp = [m for m in ms if m.family == "DelPezzo"]
    assert dp and dp[0].params["d"] == 4


def test_match_mukai():
    ms = fc.match_canonical(fc.closed_form("mukai", 7, 1, 8).expanded, 7, 1)
    assert any(m.family == "Mukai" and m.params["d"] == 8 for m in ms)


def test_match_quadric_plane_coincidence():
    # (z+1)^2 on P1 x P1 is both the quadric surface and a scroll over P1
    fams = _families(fc.closed_form("quadric", 2, 1).expanded, 2, 1)
    assert fams[:2] == ["Quadric", "ScrollOverCurve"]


def test_no_match():
    p = BiPoly.x() ** 3 + 1
    assert fc.match_canonical(p, 3, 1) == []
