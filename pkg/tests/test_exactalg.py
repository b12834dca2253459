from fractions import Fraction as Q

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbcurve.exactalg import (
    BiPoly,
    DegenerateInterpolationError,
    LinearSystem,
    RankTwoError,
    UniPoly,
    count_real_roots,
    is_rational_square,
    nullspace,
    poly_gcd,
    rational_roots,
    rational_sqrt,
    restrict_to_line,
    solve_linear,
    squarefree_decomposition,
    substitute_affine,
    top_form,
    vandermonde,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def bipolys(draw, max_deg=4):
    deg = draw(st.integers(0, max_deg))
    terms = {}
    for i in range(deg + 1):
        for j in range(deg + 1 - i):
            if draw(st.booleans()):
                terms[(i, j)] = draw(fractions)
    return BiPoly(terms)


@st.composite
def unipolys(draw, max_deg=5):
    return UniPoly(draw(st.lists(fractions, max_size=max_deg + 1)))


X, Y = sp.symbols("x y")
Z = sp.Symbol("z")


def to_sympy(p: BiPoly):
    return sum((sp.Rational(c.numerator, c.denominator) * X**i * Y**j for (i, j), c in p.terms.items()),
               sp.Integer(0))


def uni_sympy(q: UniPoly):
    return sp.Poly(list(reversed([sp.Rational(c.numerator, c.denominator) for c in q.coeffs])) or [0], Z)


# --- BiPoly -----------------------------------------------------------------


def test_zero_terms_are_dropped():
    p = BiPoly({(1, 0): 0, (0, 0): 3})
    assert p.terms == {(0, 0): Q(3)}
    assert BiPoly().degree == -1
    assert BiPoly.const(0).is_zero()


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        BiPoly({(-1, 0): 1})


@settings(max_examples=60, deadline=None)
@given(bipolys(), bipolys())
def test_ring_operations_match_sympy(p, q):
    assert sp.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0
    assert sp.expand(to_sympy(p + q) - to_sympy(p) - to_sympy(q)) == 0
    assert sp.expand(to_sympy(p - q) - to_sympy(p) + to_sympy(q)) == 0


@settings(max_examples=60, deadline=None)
@given(bipolys(), fractions, fractions)
def test_evaluation_matches_sympy(p, a, b):
    assert p(a, b) == sp.Rational(str(to_sympy(p).subs({X: sp.Rational(str(a)), Y: sp.Rational(str(b))})))


@settings(max_examples=40, deadline=None)
@given(bipolys(3), fractions, fractions, fractions, fractions)
def test_substitute_affine_matches_sympy(p, a, b, c, d):
    got = substitute_affine(p, a, b, 1, c, d, 0)
    r = lambda f: sp.Rational(f.numerator, f.denominator)  # noqa: E731
    want = to_sympy(p).subs({X: r(a) * X + r(b) * Y + r(d), Y: X + r(c) * Y}, simultaneous=True)
    assert sp.expand(to_sympy(got) - want) == 0


@settings(max_examples=50, deadline=None)
@given(bipolys())
def test_json_round_trip(p):
    assert BiPoly.from_json(p.to_json()) == p


def test_json_shape():
    data = (BiPoly.x() * Q(1, 2) - 3).to_json()
    assert data["vars"] == ["x", "y"]
    assert {"i": 1, "j": 0, "num": "1", "den": "2"} in data["terms"]


def test_division_by_scalar_and_power():
    p = (BiPoly.x() + BiPoly.y()) ** 3 / 3
    assert p.coeff(2, 1) == 1 and p.coeff(3, 0) == Q(1, 3)
    with pytest.raises(ZeroDivisionError):
        p / 0


def test_top_form_and_degree_guard():
    p = BiPoly.linear(1, 1, 1) ** 2
    assert top_form(p, 2) == (BiPoly.x() + BiPoly.y()) ** 2
    assert top_form(p, 3).is_zero()
    with pytest.raises(ValueError):
        top_form(p, 1)


def test_equality_with_scalars():
    assert BiPoly.const(Q(5, 2)) == Q(5, 2)
    assert BiPoly() == 0
    assert hash(BiPoly.const(2)) == hash(BiPoly({(0, 0): 2}))


# --- UniPoly ----------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(unipolys(), unipolys())
def test_divmod_identity(a, b):
    if b.is_zero():
        return
    quo, rem = a.divmod(b)
    assert quo * b + rem == a
    assert rem.degree < b.degree


@settings(max_examples=60, deadline=None)
@given(unipolys(4), unipolys(4))
def test_gcd_matches_sympy(a, b):
    if a.is_zero() and b.is_zero():
        return
    g = poly_gcd(a, b)
    want = sp.gcd(uni_sympy(a), uni_sympy(b)).monic()
    assert uni_sympy(g).all_coeffs() == want.all_coeffs()


def test_compose_linear():
    q = UniPoly([1, 2, 1])
    p = q.compose_linear(1, 2)
    assert p == (BiPoly.linear(-2, 1, 1)) ** 2
    assert restrict_to_line(p, 1, 2) == q


def test_restrict_to_line_rejects_rank_two():
    with pytest.raises(RankTwoError):
        restrict_to_line(BiPoly.x() * BiPoly.y(), 1, 1)


def test_unipoly_json_round_trip():
    q = UniPoly.from_roots([Q(-1, 2), 3], lead=Q(7, 3))
    assert UniPoly.from_json(q.to_json()) == q
    with pytest.raises(ValueError):
        UniPoly.from_json({"vars": ["w"], "terms": []})


# --- roots ------------------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=5), min_size=1, max_size=5),
       st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0))
def test_rational_roots_recovers_product(roots, lead):
    q = UniPoly.from_roots(roots, lead)
    fac = rational_roots(q)
    assert fac.splits
    assert fac.lead == lead
    assert fac.expand() == q
    got = sorted(r for r, m in fac.roots for _ in range(m))
    assert got == sorted(roots)


def test_rational_roots_keeps_irreducible_cofactor():
    q = UniPoly([Q(-1, 7), 0, 1]) * UniPoly([0, 1]) * Q(7, 6)
    fac = rational_roots(q)
    assert fac.roots == ((Q(0), 1),)
    assert fac.cofactor == UniPoly([Q(-1, 7), 0, 1])
    assert not fac.splits


@settings(max_examples=40, deadline=None)
@given(unipolys(6))
def test_real_root_count_matches_sympy(q):
    if q.degree < 1:
        return
    roots = uni_sympy(q).real_roots()
    assert count_real_roots(q) == len(set(roots))
    assert count_real_roots(q, distinct=False) == len(roots)


def test_squarefree_decomposition():
    q = UniPoly.from_roots([1, 1, 1, 2, 2, -3], lead=5)
    parts = squarefree_decomposition(q)
    assert {k: f for f, k in parts} == {1: UniPoly([3, 1]), 2: UniPoly([-2, 1]), 3: UniPoly([-1, 1])}


def test_rational_sqrt():
    assert is_rational_square(Q(9, 49)) and rational_sqrt(Q(9, 49)) == Q(3, 7)
    assert not is_rational_square(Q(1, 7))
    assert not is_rational_square(Q(-4))
    with pytest.raises(ValueError):
        rational_sqrt(Q(2))


# --- linear algebra ---------------------------------------------------------


def test_solve_unique_inconsistent_underdetermined():
    res = solve_linear(LinearSystem([[1, 2], [3, 4]], [5, 6]))
    assert res.is_unique and res.solution == (Q(-4), Q(9, 2))
    res = solve_linear(LinearSystem([[1, 1], [2, 2]], [1, 3]))
    assert res.status == "inconsistent"
    res = solve_linear(LinearSystem([[1, 1], [2, 2]], [1, 2]))
    assert res.status == "underdetermined" and res.nullity == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.lists(fractions, min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(fractions, min_size=n, max_size=n))))
def test_solve_matches_sympy(data):
    mat, rhs = data
    res = solve_linear(LinearSystem(mat, rhs))
    M = sp.Matrix([[sp.Rational(str(v)) for v in row] for row in mat])
    if M.det() != 0:
        sol = M.LUsolve(sp.Matrix([sp.Rational(str(v)) for v in rhs]))
        assert res.is_unique
        assert [sp.Rational(str(v)) for v in res.solution] == list(sol)
    else:
        assert res.status != "unique"


def test_nullspace_vectors_are_killed():
    mat = [[1, 2, 3], [2, 4, 6]]
    basis = nullspace(mat)
    assert len(basis) == 2
    for vec in basis:
        assert all(sum(Q(a) * b for a, b in zip(row, vec)) == 0 for row in mat)


def test_vandermonde_rejects_duplicates():
    assert vandermonde([0, 1, 2])[2] == (1, 2, 4)
    with pytest.raises(DegenerateInterpolationError):
        vandermonde([1, 2, 1])


def test_linear_system_validation():
    with pytest.raises(ValueError):
        LinearSystem([[1, 2], [3]], [1, 2])
    with pytest.raises(ValueError):
        LinearSystem([[1, 2]], [1, 2])
