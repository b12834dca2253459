"""Hilbert curves of Fano fibrations.

The central tool is a functional equation for the residual factor ``R`` of
``p = R * prod_{j=1}^{iota_F-1} (r*y - iota_F*x + j)``: restricting to fibres
peels off one copy of the fibre polynomial at a time, so

    R(x, y) - R(x - dx, y - dy) = t * R_F(x, y).

:func:`solve_recurrence` treats the coefficients of ``R`` as unknowns and solves
that identity together with caller-supplied side conditions.  The closed-form
families below are cross-checked against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exactalg import (
    BiPoly,
    LinearSystem,
    as_rational,
    monomials,
    solve_linear,
    substitute_affine,
)

__all__ = [
    "RecurrenceError",
    "Inconsistent",
    "Underdetermined",
    "DegeneratePolarization",
    "InconsistentInvariants",
    "Constraints",
    "RecurrenceSpec",
    "CurveFibrationInput",
    "SurfaceScrollInput",
    "fiber_product",
    "solve_recurrence",
    "residual",
    "fibration_recurrence",
    "scroll_over_curve",
    "scroll_recurrence",
    "scroll_from_tautological",
    "choose_scroll_data",
    "quadric_t",
    "quadric_fibration",
    "quadric_recurrence",
    "quadric_from_tautological",
    "quadric_chi",
    "delpezzo_chi",
    "delpezzo_coefficients",
    "delpezzo_fibration",
    "delpezzo_recurrence",
    "lemma_pq",
    "polarization_transform",
    "solve_base_chain",
    "scroll_surface_coefficients",
    "scroll_over_surface",
    "scroll_over_surface_chain",
    "intersection_numbers",
    "mixed_intersection",
]

Q = Fraction


class RecurrenceError(ValueError):
    level: int | None = None


class Inconsistent(RecurrenceError):
    """The functional equation and side conditions have no common solution."""

    def __init__(self, message: str = "inconsistent constraints", level: int | None = None):
        super().__init__(message if level is None else f"level X_{level}: {message}")
        self.level = level


class Underdetermined(RecurrenceError):
    """The side conditions leave a positive-dimensional family of solutions."""

    def __init__(self, nullity: int, particular: BiPoly | None = None, level: int | None = None):
        msg = f"underdetermined: solution space has dimension {nullity}"
        super().__init__(msg if level is None else f"level X_{level}: {msg}")
        self.nullity = nullity
        self.particular = particular
        self.level = level


class DegeneratePolarization(ValueError):
    """The change of polarization would divide by zero."""


class InconsistentInvariants(ValueError):
    """Supplied invariants contradict the relation they must satisfy."""


def fiber_product(r: int, iota: int) -> BiPoly:
    """``prod_{j=1}^{iota-1} (r*y - iota*x + j)``."""
    out = BiPoly.const(1)
    for j in range(1, iota):
        out = out * BiPoly.linear(-iota, r, j)
    return out


# ---------------------------------------------------------------------------
# the recurrence engine


Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Constraints:
    """Side conditions on an unknown ``R``.

    ``points`` are ``((x0, y0), value)`` pairs meaning ``R(x0, y0) = value``;
    ``coefficients`` are ``((i, j), value)`` pairs fixing single coefficients;
    ``serre`` imposes ``R(1 - x, -y) = (-1)**deg(R) * R(x, y)``.
    """

    points: tuple[tuple[Point, Fraction], ...] = ()
    coefficients: tuple[tuple[tuple[int, int], Fraction], ...] = ()
    serre: bool = False

    def __post_init__(self):
        pts = tuple(((as_rational(x), as_rational(y)), as_rational(v))
                    for (x, y), v in self.points)
        cfs = tuple(((int(i), int(j)), as_rational(v)) for (i, j), v in self.coefficients)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "coefficients", cfs)

    @classmethod
    def for_p(cls, r: int, iota: int, points=(), coefficients=(), serre: bool = False) -> "Constraints":
        """Translate values of the full polynomial ``p`` into values of ``R``."""
        prod = fiber_product(r, iota)
        pts = []
        for (x0, y0), val in points:
            f = prod(x0, y0)
            if f == 0:
                raise ValueError(f"fibre factor vanishes at ({x0}, {y0}); cannot divide")
            pts.append(((x0, y0), as_rational(val) / f))
        return cls(tuple(pts), tuple(coefficients), serre)

    def to_json(self) -> dict:
        return {
            "points": [{"x": str(x), "y": str(y), "value": str(v)} for (x, y), v in self.points],
            "coefficients": [{"i": i, "j": j, "value": str(v)} for (i, j), v in self.coefficients],
            "serre": self.serre,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Constraints":
        return cls(
            tuple(((Q(c["x"]), Q(c["y"])), Q(c["value"])) for c in data.get("points", ())),
            tuple(((int(c["i"]), int(c["j"])), Q(c["value"])) for c in data.get("coefficients", ())),
            bool(data.get("serre", False)),
        )


@dataclass(frozen=True)
class RecurrenceSpec:
    """A functional equation for an unknown polynomial ``R`` of given degree.

    Standard form (``shift`` given)::

        R(x, y) - R(x - dx, y - dy) = scale * source(x, y)

    Pulled-back form (``pre_map = (M, v)`` given), with ``M`` acting on column
    vectors so that ``M(x, y) = (M11*x + M12*y, M21*x + M22*y)``::

        R(M(x, y)) - R(M(x, y) + v) = scale * source(x, y)
    """

    degree: int
    source: BiPoly
    scale: Fraction = Fraction(1)
    shift: Point | None = None
    pre_map: tuple[tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]], Point] | None = None
    constraints: Constraints = field(default_factory=Constraints)

    def __post_init__(self):
        object.__setattr__(self, "scale", as_rational(self.scale))
        if self.scale == 0:
            raise ValueError("scale t must be nonzero")
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if (self.shift is None) == (self.pre_map is None):
            raise ValueError("give exactly one of shift or pre_map")
        if self.shift is not None:
            object.__setattr__(self, "shift", tuple(as_rational(s) for s in self.shift))
        else:
            (m11, m12), (m21, m22) = self.pre_map[0]
            v1, v2 = self.pre_map[1]
            mat = ((as_rational(m11), as_rational(m12)), (as_rational(m21), as_rational(m22)))
            object.__setattr__(self, "pre_map", (mat, (as_rational(v1), as_rational(v2))))

    def lhs(self, R: BiPoly) -> BiPoly:
        if self.shift is not None:
            dx, dy = self.shift
            return R - substitute_affine(R, 1, 0, 0, 1, -dx, -dy)
        (m11, m12), (m21, m22) = self.pre_map[0]
        v1, v2 = self.pre_map[1]
        return (substitute_affine(R, m11, m12, m21, m22)
                - substitute_affine(R, m11, m12, m21, m22, v1, v2))

    def to_json(self) -> dict:
        out = {
            "degree": self.degree,
            "source": self.source.to_json(),
            "scale": str(self.scale),
            "constraints": self.constraints.to_json(),
        }
        if self.shift is not None:
            out["shift"] = [str(s) for s in self.shift]
        else:
            out["pre_map"] = {"M": [[str(v) for v in row] for row in self.pre_map[0]],
                              "v": [str(v) for v in self.pre_map[1]]}
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "RecurrenceSpec":
        pre = None
        if "pre_map" in data:
            pm = data["pre_map"]
            pre = (tuple(tuple(Q(v) for v in row) for row in pm["M"]), tuple(Q(v) for v in pm["v"]))
        return cls(
            degree=int(data["degree"]),
            source=BiPoly.from_json(data["source"]),
            scale=Q(data.get("scale", 1)),
            shift=tuple(Q(s) for s in data["shift"]) if "shift" in data else None,
            pre_map=pre,
            constraints=Constraints.from_json(data.get("constraints", {})),
        )


def _monomial(i: int, j: int) -> BiPoly:
    return BiPoly({(i, j): 1})


def residual(spec: RecurrenceSpec, R: BiPoly) -> BiPoly:
    """Left side minus right side of the functional equation."""
    return spec.lhs(R) - spec.source * spec.scale


def solve_recurrence(spec: RecurrenceSpec) -> BiPoly:
    """Solve the functional equation and side conditions for ``R``.

    Raises :class:`Inconsistent` or :class:`Underdetermined` rather than
    guessing when the conditions do not pin down a unique ``R``.
    """
    monos = monomials(spec.degree)
    basis = [_monomial(i, j) for i, j in monos]
    images = [spec.lhs(b) for b in basis]
    rhs_poly = spec.source * spec.scale

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    keys = sorted(set(rhs_poly.terms) | {k for im in images for k in im.terms})
    for key in keys:
        rows.append([im.coeff(*key) for im in images])
        rhs.append(rhs_poly.coeff(*key))

    c = spec.constraints
    for (x0, y0), val in c.points:
        rows.append([b(x0, y0) for b in basis])
        rhs.append(val)
    index = {m: k for k, m in enumerate(monos)}
    for (i, j), val in c.coefficients:
        row = [Fraction(0)] * len(monos)
        if (i, j) in index:
            row[index[(i, j)]] = Fraction(1)
        rows.append(row)
        rhs.append(val)
    if c.serre:
        sign = (-1) ** spec.degree
        flips = [substitute_affine(b, -1, 0, 0, -1, 1, 0) - b * sign for b in basis]
        for key in sorted({k for f in flips for k in f.terms}):
            rows.append([f.coeff(*key) for f in flips])
            rhs.append(Fraction(0))

    if not rows:
        raise Underdetermined(len(monos))
    res = solve_linear(LinearSystem(rows, rhs))
    if res.status == "inconsistent":
        raise Inconsistent()
    R = BiPoly(dict(zip(monos, res.solution)))
    if res.status == "underdetermined":
        raise Underdetermined(res.nullity, R)
    return R


def fibration_recurrence(r: int, iota_F: int, t, R_F: BiPoly, degree: int,
                         constraints: Constraints = Constraints()) -> RecurrenceSpec:
    """The fibre-peeling equation for a Fano fibration over a curve.

    Handles either sign of ``t``: ``R(x,y) - R(x - s*r, y - s*iota_F) = |t| R_F``
    with ``s = sgn(t)``.
    """
    t = as_rational(t)
    if t == 0:
        raise ValueError("t must be nonzero")
    sg = 1 if t > 0 else -1
    return RecurrenceSpec(degree=degree, source=R_F, scale=abs(t),
                          shift=(Q(sg * r), Q(sg * iota_F)), constraints=constraints)


# ---------------------------------------------------------------------------
# scrolls over curves


def _scroll_curve_raw(n: int, r: int, g, d) -> BiPoly:
    g, d = as_rational(g), as_rational(d)
    bracket = BiPoly.linear(2 * n * (g - 1), d / Q(r) ** (n - 1), n * (1 - g))
    return bracket * fiber_product(r, n) / math.factorial(n)


def scroll_over_curve(n: int, r: int, g: int, d: int) -> BiPoly:
    """Scroll of rank ``n`` over a genus ``g`` curve, polarized by ``L`` of degree ``d``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if r < 1 or math.gcd(r, n) != 1:
        raise ValueError(f"need r >= 1 with gcd(r, n) = 1, got r={r}, n={n}")
    if d < 1:
        raise ValueError("degree must be positive")
    if g < 0:
        raise ValueError("genus must be nonnegative")
    return _scroll_curve_raw(n, r, g, d)


def choose_scroll_data(n: int, r: int, g: int, d) -> tuple[Fraction, Fraction]:
    """Pick ``(e, b)`` with ``d = r**(n-1) * (n*b + e*r)`` and nonzero ``t``.

    Integral ``(e, b)`` is preferred; otherwise ``b`` is an integer and ``e``
    may be rational, which is harmless because every identity in play is
    polynomial in ``e`` and ``b``.
    """
    dp = as_rational(d) / Q(r) ** (n - 1)
    # t = (2g - 2) r + d / r^(n-1) does not depend on the split of d
    if (2 * g - 2) * r + dp == 0:
        raise DegeneratePolarization(
            "t = (2g - 2) r + d / r^(n-1) vanishes: rK + nL is trivial, not a fibration")
    span = range(-abs(int(dp)) - 3 * r, abs(int(dp)) + 3 * r + 1)
    fallback = None
    for b in sorted(span, key=lambda v: (abs(v), -v)):
        e = (dp - n * b) / r
        if (2 * g - 2 + e) == 0:
            continue
        if e.denominator == 1:
            return e, Q(b)
        if fallback is None:
            fallback = (e, Q(b))
    if fallback is None:
        raise DegeneratePolarization("no admissible (e, b) found")
    return fallback


def scroll_recurrence(n: int, r: int, g, e, b) -> BiPoly:
    """Scroll polynomial rebuilt from the fibre recurrence and two Euler characteristics.

    Uses ``chi(O_X) = 1 - g`` and ``chi(xi) = e + n(1 - g)``, where the
    tautological class is ``xi = -(b/t) K + ((2g - 2 + e)/t) L``.
    """
    g, e, b = as_rational(g), as_rational(e), as_rational(b)
    t = (2 * g - 2 + e) * r + n * b
    if t == 0:
        raise DegeneratePolarization("t = (2g - 2 + e) r + n b vanishes")
    R_F = BiPoly.const(Q(1, math.factorial(n - 1)))
    cons = Constraints.for_p(r, n, points=[
        ((0, 0), 1 - g),
        ((-b / t, (2 * g - 2 + e) / t), e + n * (1 - g)),
    ])
    R = solve_recurrence(fibration_recurrence(r, n, t, R_F, 1, cons))
    return R * fiber_product(r, n)


def scroll_from_tautological(n: int, r: int, g, e, b) -> BiPoly:
    """Scroll polynomial for ``L = r*xi + b*F`` obtained from the ``xi``-polarized one."""
    g, e, b = as_rational(g), as_rational(e), as_rational(b)
    t = (2 * g - 2 + e) * r + n * b
    den = t - n * b
    if den == 0:
        raise DegeneratePolarization("t - n b = r (2g - 2 + e) vanishes")
    p_xi = _scroll_curve_raw(n, 1, g, e)
    return substitute_affine(p_xi, 1, b * r / den, 0, r * t / den)


# ---------------------------------------------------------------------------
# quadric fibrations over curves


def quadric_t(n: int, r: int, g, e, a, b) -> Fraction:
    return r * (2 * as_rational(g) - 2 + as_rational(e) + as_rational(a)) + (n - 1) * as_rational(b)


def _quadric_fib_raw(n: int, r: int, g, e, a, b) -> BiPoly:
    g, e, a, b = (as_rational(v) for v in (g, e, a, b))
    c = 2 * g - 2
    A = (1 - n) * (2 * n * c + 2 * e + (n + 1) * a)
    B = (n * c - (n - 2) * e + a) * r - n * (n - 1) * b
    C = (2 * e + a) * r * r + 2 * n * b * r
    bracket = BiPoly({
        (2, 0): A,
        (1, 1): 2 * B,
        (0, 2): C,
        (1, 0): -A,
        (0, 1): -B,
        (0, 0): -Q(n * (n - 1), 2) * c,
    })
    return bracket * fiber_product(r, n - 1) / math.factorial(n)


def quadric_fibration(n: int, r: int, g: int, e: int, a: int, b: int) -> BiPoly:
    """Quadric fibration ``X in |2 xi + A|`` inside ``P(E)`` over a genus ``g`` curve."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if r < 1 or math.gcd(r, n - 1) != 1:
        raise ValueError(f"need r >= 1 with gcd(r, n - 1) = 1, got r={r}, n={n}")
    if g < 0:
        raise ValueError("genus must be nonnegative")
    return _quadric_fib_raw(n, r, g, e, a, b)


def quadric_chi(n: int, g, e, a, b) -> Fraction:
    """``chi(L)`` for ``r = 1``, ``L = xi + bF``, from Riemann-Roch on the curve."""
    g, e, a, b = (as_rational(v) for v in (g, e, a, b))
    return e + (n + 1) * b + (n + 1) * (1 - g)


def quadric_recurrence(n: int, g, e, a, b) -> BiPoly:
    """``r = 1`` quadric fibration rebuilt from the fibre recurrence.

    Side conditions: Serre symmetry, ``chi(O_X) = 1 - g``,
    ``chi(tF) = t + 1 - g`` at ``(1, n - 1)`` and ``chi(L)`` at ``(0, 1)``.
    """
    g, e, a, b = (as_rational(v) for v in (g, e, a, b))
    t = quadric_t(n, 1, g, e, a, b)
    if t == 0:
        raise DegeneratePolarization("t vanishes")
    z = BiPoly.linear(-(n - 1), 1)
    R_F = z * Q(2, math.factorial(n - 1)) + Q(1, math.factorial(n - 2))
    cons = Constraints.for_p(1, n - 1, serre=True, points=[
        ((0, 0), 1 - g),
        ((1, n - 1), t + 1 - g),
        ((0, 1), quadric_chi(n, g, e, a, b)),
    ])
    R = solve_recurrence(fibration_recurrence(1, n - 1, t, R_F, 2, cons))
    return R * fiber_product(1, n - 1)


def quadric_from_tautological(n: int, r: int, g, e, a, b) -> BiPoly:
    """Apply the change of polarization ``L = r*xi + b*F`` to the ``r = 1, b = 0`` form."""
    g, e, a, b = (as_rational(v) for v in (g, e, a, b))
    t = quadric_t(n, r, g, e, a, b)
    den = t - (n - 1) * b
    if den == 0:
        raise DegeneratePolarization("t - (n - 1) b vanishes")
    p_xi = _quadric_fib_raw(n, 1, g, e, a, 0)
    return substitute_affine(p_xi, 1, b * r / den, 0, t * r / den)


# ---------------------------------------------------------------------------
# del Pezzo fibrations over curves (r = 1)


def delpezzo_chi(n: int, g, d, delta, t) -> Fraction:
    g, d, delta, t = (as_rational(v) for v in (g, d, delta, t))
    return (d - t * delta + 2 * t) / 2 - n * (g - 1)


def _delpezzo_coeffs_T(n: int, g, d, T, t) -> dict[tuple[int, int], Fraction]:
    g, d, T, t = (as_rational(v) for v in (g, d, T, t))
    m = n - 2
    Tn = T / math.factorial(n - 1)
    D = d / math.factorial(n)
    f3 = Q(1, math.factorial(n - 3))
    chi = (d - T + 2 * t) / 2 - n * (g - 1)
    u = Tn - m * D
    w = 2 * Tn - 3 * m * D
    s = Tn - 3 * m * D
    return {
        (3, 0): m * m * u,
        (2, 1): -m * w,
        (1, 2): s,
        (0, 3): D,
        (2, 0): -Q(3, 2) * m * m * u,
        (1, 1): m * w,
        (0, 2): -s / 2,
        (1, 0): m * m * u / 2 + 2 * (g - 1) * f3,
        (0, 1): chi / math.factorial(n - 2) + Tn / 2 - D * (3 * n - 4) / 2 + (g - 1) * f3,
        (0, 0): -(g - 1) * f3,
    }


def _delpezzo_fib_raw(n: int, g, d, T, t) -> BiPoly:
    return BiPoly(_delpezzo_coeffs_T(n, g, d, T, t)) * fiber_product(1, n - 2)


def delpezzo_coefficients(n: int, g, d, delta, t) -> dict[tuple[int, int], Fraction]:
    """The ten ``c_ij`` of the cubic residual factor."""
    return _delpezzo_coeffs_T(n, g, d, as_rational(delta) * as_rational(t), t)


def delpezzo_fibration(n: int, g: int, d: int, delta: int, t: int, chi=None) -> BiPoly:
    """Del Pezzo fibration over a genus ``g`` curve with ``K + (n-2)L = tF``.

    ``chi``, if given, must equal ``chi(L) = (d - t*delta + 2t)/2 - n(g - 1)``.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    if t < 1:
        raise ValueError("t must be a positive integer")
    if chi is not None:
        want = delpezzo_chi(n, g, d, delta, t)
        if as_rational(chi) != want:
            raise InconsistentInvariants(f"chi(L) = {chi} but the invariants force {want}")
    return BiPoly(delpezzo_coefficients(n, g, d, delta, t)) * fiber_product(1, n - 2)


def delpezzo_recurrence(n: int, g, d, delta, t) -> BiPoly:
    """Del Pezzo fibration rebuilt from the fibre recurrence.

    Side conditions: Serre symmetry, ``chi(O_X) = 1 - g``,
    ``chi(tF) = t + 1 - g`` at ``(1, n - 2)`` and ``L^n = d``.  The value
    ``chi(L)`` is an output here, not an input.
    """
    g, d, delta, t = (as_rational(v) for v in (g, d, delta, t))
    z = BiPoly.linear(-(n - 2), 1)
    nf1 = math.factorial(n - 1)
    R_F = z * z * (delta / nf1) + z * ((n - 2) * delta / nf1) + Q(1, math.factorial(n - 3))
    cons = Constraints.for_p(
        1, n - 2, serre=True,
        points=[((0, 0), 1 - g), ((1, n - 2), t + 1 - g)],
        coefficients=[((0, 3), d / math.factorial(n))],
    )
    R = solve_recurrence(fibration_recurrence(1, n - 2, t, R_F, 3, cons))
    return R * fiber_product(1, n - 2)


# ---------------------------------------------------------------------------
# change of polarization


def lemma_pq(sigma: int, tau: int) -> tuple[int, int]:
    """Smallest positive ``p`` (and matching ``q >= 0``) with ``sigma*p - tau*q = 1``."""
    if sigma < 1 or tau < 1:
        raise ValueError("sigma and tau must be positive")
    if math.gcd(sigma, tau) != 1:
        raise ValueError(f"sigma={sigma} and tau={tau} are not coprime")
    p = pow(sigma, -1, tau) if tau > 1 else 1
    q = (sigma * p - 1) // tau
    return p, q


def polarization_transform(p: BiPoly, sigma: int, tau: int, direction: str) -> BiPoly:
    """Move between ``L`` and ``M = qK + pL`` when ``sigma*K + tau*L`` is a pull-back.

    ``to_fundamental`` returns ``chi(xK + yM)`` from ``chi(xK + yL)``;
    ``from_fundamental`` is its inverse.
    """
    pp, qq = lemma_pq(sigma, tau)
    if direction == "to_fundamental":
        return substitute_affine(p, 1, qq, 0, pp)
    if direction == "from_fundamental":
        return substitute_affine(p, 1, Q(-qq, pp), 0, Q(1, pp))
    raise ValueError(f"direction must be to_fundamental or from_fundamental, got {direction!r}")


# ---------------------------------------------------------------------------
# fibrations over higher-dimensional bases


def solve_base_chain(m: int, s: int, r: int, iota_F: int, A_top, R_F: BiPoly,
                     step_constraints: Sequence[Constraints],
                     fiber_degree: int | None = None) -> list[BiPoly]:
    """Residual factors ``[R_{X_{m-1}}, ..., R_{X_0}]`` along a chain of sections.

    ``X_j`` is cut out by ``j`` general members of ``|sA|``; ``X_{m-1}`` fibres
    over a curve and satisfies the fibre recurrence with
    ``t = s**(m-1) * (rs+1)**(m(m-1)/2) * A**m``.  Each earlier level solves
    ``R_j(M(x,y)) - R_j(M(x,y) + v) = R_{j+1}(x,y)`` with
    ``M = [[sr+1, 0], [s*iota_F, 1]]`` and ``v = (-sr, -s*iota_F)``.

    ``step_constraints[j]`` are the side conditions for ``X_j``.
    """
    if m < 2:
        raise ValueError("the base must have dimension at least 2")
    if s < 1:
        raise ValueError("s must be positive")
    if len(step_constraints) != m:
        raise ValueError(f"need {m} constraint sets, one per level, got {len(step_constraints)}")
    t = Q(s) ** (m - 1) * Q(r * s + 1) ** (m * (m - 1) // 2) * as_rational(A_top)
    deg_f = fiber_degree if fiber_degree is not None else max(R_F.degree, 0)

    def run(spec: RecurrenceSpec, level: int) -> BiPoly:
        try:
            return solve_recurrence(spec)
        except Underdetermined as exc:
            raise Underdetermined(exc.nullity, exc.particular, level) from None
        except Inconsistent:
            raise Inconsistent(level=level) from None

    if t == 0:
        raise ValueError("A^m must be nonzero")
    top = run(fibration_recurrence(r, iota_F, t, R_F, deg_f + 1, step_constraints[m - 1]), m - 1)
    chain = [top]
    M = ((Q(s * r + 1), Q(0)), (Q(s * iota_F), Q(1)))
    v = (Q(-s * r), Q(-s * iota_F))
    for j in range(m - 2, -1, -1):
        spec = RecurrenceSpec(degree=deg_f + m - j, source=chain[-1], pre_map=(M, v),
                              constraints=step_constraints[j])
        chain.append(run(spec, j))
    return chain


@dataclass(frozen=True)
class SurfaceScrollInput:
    n: int
    chi0: int
    chiL: int
    k: int
    h: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be at least 3")

    def to_json(self) -> dict:
        return {"n": self.n, "chi0": self.chi0, "chiL": self.chiL, "k": self.k, "h": self.h}

    @classmethod
    def from_json(cls, data: Mapping) -> "SurfaceScrollInput":
        return cls(int(data["n"]), int(data["chi0"]), int(data["chiL"]), int(data["k"]), int(data["h"]))


def scroll_surface_coefficients(n: int, chi0, chiL, k, h) -> dict[str, Fraction]:
    """``a00, a11, a12, a22`` of ``R = a11 x^2 + 2 a12 xy + a22 y^2 - a11 x - a12 y + a00``."""
    chi0, chiL, k, h = (as_rational(v) for v in (chi0, chiL, k, h))
    nf = math.factorial(n)
    return {
        "a00": chi0 / math.factorial(n - 2),
        "a11": Q(n - 1, 2 * nf) * (-2 * chi0 * (n - 1) ** 2 + 2 * chiL * (n - 1) + (n + 1) * k - h),
        "a12": (2 * chi0 * (n - 1) ** 2 - 2 * chiL * (n - 1) - k + h) / (2 * nf),
        "a22": (-2 * chi0 * (n - 1) + 2 * chiL - k + h) / (2 * nf),
    }


def _scroll_surface_R(n: int, chi0, chiL, k, h) -> BiPoly:
    a = scroll_surface_coefficients(n, chi0, chiL, k, h)
    return BiPoly({
        (2, 0): a["a11"], (1, 1): 2 * a["a12"], (0, 2): a["a22"],
        (1, 0): -a["a11"], (0, 1): -a["a12"], (0, 0): a["a00"],
    })


def _scroll_surface_raw(n: int, chi0, chiL, k, h) -> BiPoly:
    return _scroll_surface_R(n, chi0, chiL, k, h) * fiber_product(1, n - 1)


def scroll_over_surface(inp: SurfaceScrollInput) -> BiPoly:
    """Scroll over a surface ``S`` with ``K_X + (n-1)L = pi^* A``."""
    return _scroll_surface_raw(inp.n, inp.chi0, inp.chiL, inp.k, inp.h)


def scroll_over_surface_chain(inp: SurfaceScrollInput, s: int) -> list[BiPoly]:
    """Solve the two-level chain for a scroll over a surface using ``C in |sA|``.

    Level 1 is the scroll ``V = pi^{-1}(C)`` over a curve of genus
    ``1 + (s/2)(k + s h)`` and degree ``s(h - k)``; level 0 uses Serre symmetry,
    ``chi(O_X) = chi0`` and ``chi(L) = chiL``.
    """
    n = inp.n
    q = 1 + Q(s, 2) * (inp.k + s * inp.h)
    d_v = s * (inp.h - inp.k)
    lvl1 = Constraints.for_p(1, n - 1, points=[
        ((0, 0), 1 - q),
        ((0, 1), d_v + (n - 1) * (1 - q)),
    ])
    lvl0 = Constraints.for_p(1, n - 1, serre=True, points=[
        ((0, 0), inp.chi0),
        ((0, 1), inp.chiL),
    ])
    R_F = BiPoly.const(Q(1, math.factorial(n - 2)))
    return solve_base_chain(2, s, 1, n - 1, inp.h, R_F, [lvl0, lvl1])


# ---------------------------------------------------------------------------
# intersection numbers


def intersection_numbers(p: BiPoly, n: int) -> dict[int, Fraction]:
    """``K^i L^(n-i)`` for ``i = 0..n`` read off the degree-``n`` part of ``p``."""
    nf = math.factorial(n)
    return {i: p.coeff(i, n - i) * nf / math.comb(n, i) for i in range(n + 1)}


def mixed_intersection(p: BiPoly, n: int, a, b, k: int) -> Fraction:
    """``(aK + bL)^k L^(n-k)``."""
    a, b = as_rational(a), as_rational(b)
    nums = intersection_numbers(p, n)
    return sum((math.comb(k, i) * a**i * b ** (k - i) * nums[i] for i in range(k + 1)), Q(0))


# ---------------------------------------------------------------------------
# input records


@dataclass(frozen=True)
class CurveFibrationInput:
    """Parameters of a fibration over a curve; unused fields stay ``None``."""

    family: str  # scroll | quadric | delpezzo
    n: int
    r: int = 1
    g: int = 0
    d: int | None = None
    e: int | None = None
    a: int | None = None
    b: int | None = None
    delta: int | None = None
    t: int | None = None
    chi: int | None = None

    def build(self) -> BiPoly:
        fam = self.family.lower()
        if fam == "scroll":
            if self.d is not None:
                return scroll_over_curve(self.n, self.r, self.g, self.d)
            if self.e is None or self.b is None:
                raise ValueError("scroll needs d, or both e and b")
            d = self.r ** (self.n - 1) * (self.n * self.b + self.e * self.r)
            return scroll_over_curve(self.n, self.r, self.g, d)
        if fam == "quadric":
            if None in (self.e, self.a, self.b):
                raise ValueError("quadric fibration needs e, a and b")
            return quadric_fibration(self.n, self.r, self.g, self.e, self.a, self.b)
        if fam == "delpezzo":
            if self.r != 1:
                raise ValueError("del Pezzo fibrations are only provided for r = 1")
            if None in (self.d, self.delta, self.t):
                raise ValueError("del Pezzo fibration needs d, delta and t")
            return delpezzo_fibration(self.n, self.g, self.d, self.delta, self.t, self.chi)
        raise ValueError(f"unknown family {self.family!r}")

    def cross_check(self) -> BiPoly:
        """The same polynomial via the recurrence engine."""
        fam = self.family.lower()
        if fam == "scroll":
            if self.e is not None and self.b is not None:
                e, b = self.e, self.b
            else:
                e, b = choose_scroll_data(self.n, self.r, self.g, self.d)
            return scroll_recurrence(self.n, self.r, self.g, e, b)
        if fam == "quadric":
            if self.r == 1:
                return quadric_recurrence(self.n, self.g, self.e, self.a, self.b)
            return quadric_from_tautological(self.n, self.r, self.g, self.e, self.a, self.b)
        if fam == "delpezzo":
            return delpezzo_recurrence(self.n, self.g, self.d, self.delta, self.t)
        raise ValueError(f"unknown family {self.family!r}")

    def to_json(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}

    @classmethod
    def from_json(cls, data: Mapping) -> "CurveFibrationInput":
        keys = ("n", "r", "g", "d", "e", "a", "b", "delta", "t", "chi")
        return cls(str(data["family"]), **{k: int(data[k]) for k in keys if data.get(k) is not None})
