"""Hilbert curves of Fano polarized pairs.

Throughout, ``H`` is the fundamental divisor of a Fano manifold ``X`` of
dimension ``n`` and index ``iota``, ``L = r*H``, and ``z = r*y - iota*x``.
The Hilbert polynomial ``q(z) = chi(zH)`` factors as
``phi(z) * prod_{i=1}^{iota-1} (z + i)`` with ``deg phi = n + 1 - iota``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Mapping, NamedTuple, Sequence

from .exactalg import (
    BiPoly,
    LinearSystem,
    RootFactorization,
    UniPoly,
    as_rational,
    count_real_roots,
    is_rational_square,
    rational_roots,
    rational_sqrt,
    solve_linear,
    substitute_affine,
    vandermonde,
)

__all__ = [
    "FanoKind",
    "FanoInput",
    "FactoredHC",
    "SurfaceInput",
    "Surd",
    "Line",
    "GeographyReport",
    "Reducibility",
    "CanonicalMatch",
    "delta",
    "fano_hc",
    "h0_low_coindex",
    "closed_form",
    "mukai_coeffs",
    "surface_hc",
    "serre_check",
    "centered",
    "geography",
    "reducibility",
    "match_canonical",
    "fano_from_json",
]


class FanoKind(str, Enum):
    PN = "pn"
    QUADRIC = "quadric"
    DELPEZZO = "delpezzo"
    MUKAI = "mukai"

    @classmethod
    def parse(cls, value) -> "FanoKind":
        if isinstance(value, FanoKind):
            return value
        key = str(value).lower().replace("_", "").replace("-", "").replace(" ", "")
        aliases = {"p": "pn", "projective": "pn", "q": "quadric", "dp": "delpezzo"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown Fano kind {value!r}") from None


def delta(u, iota: int) -> Fraction:
    """``prod_{i=1}^{iota-1} (u + i)``; the empty product is 1."""
    u = as_rational(u)
    out = Fraction(1)
    for i in range(1, iota):
        out *= u + i
    return out


def _forced(iota: int) -> UniPoly:
    out = UniPoly.const(1)
    for i in range(1, iota):
        out = out * UniPoly([i, 1])
    return out


@dataclass(frozen=True)
class FanoInput:
    n: int
    iota: int
    r: int
    h0: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "h0", tuple(int(v) for v in self.h0))
        if self.n < 2:
            raise ValueError(f"dimension must be at least 2, got {self.n}")
        if not 1 <= self.iota <= self.n + 1:
            raise ValueError(f"index must lie in [1, {self.n + 1}], got {self.iota}")
        if self.r < 1:
            raise ValueError(f"r must be positive, got {self.r}")
        if len(self.h0) != self.coindex + 1:
            raise ValueError(
                f"expected {self.coindex + 1} values h0(sH) for s = 0..{self.coindex}, "
                f"got {len(self.h0)}")
        if self.h0[0] != 1:
            raise ValueError("h0(O_X) must equal 1")
        if any(v < 0 for v in self.h0):
            raise ValueError("h0 values must be nonnegative")

    @property
    def coindex(self) -> int:
        return self.n + 1 - self.iota

    def to_json(self) -> dict:
        return {"n": self.n, "iota": self.iota, "r": self.r, "h0": list(self.h0)}

    @classmethod
    def from_json(cls, data: Mapping) -> "FanoInput":
        return cls(int(data["n"]), int(data["iota"]), int(data.get("r", 1)),
                   tuple(data["h0"]))


@dataclass(frozen=True)
class FactoredHC:
    """A Fano Hilbert curve ``phi(z) * prod_{i<iota} (z + i)`` with ``z = r*y - iota*x``."""

    n: int
    r: int
    iota: int
    phi: UniPoly

    def __post_init__(self):
        if self.phi.degree != self.coindex:
            raise ValueError(
                f"residual factor must have degree {self.coindex}, got {self.phi.degree}")

    @property
    def coindex(self) -> int:
        return self.n + 1 - self.iota

    @cached_property
    def q(self) -> UniPoly:
        return self.phi * _forced(self.iota)

    @cached_property
    def expanded(self) -> BiPoly:
        return self.q.compose_linear(self.r, self.iota)

    @property
    def forced_roots(self) -> tuple[int, ...]:
        return tuple(-i for i in range(1, self.iota))

    @property
    def degree(self) -> Fraction:
        """``H^n``, read off the leading coefficient of ``q``."""
        return self.q.lead * math.factorial(self.n)

    @property
    def anticanonical_degree(self) -> Fraction:
        return self.degree * self.iota**self.n

    def centered(self) -> BiPoly:
        return centered(self.expanded)


@dataclass(frozen=True)
class SurfaceInput:
    K2: int
    KL: int
    L2: int
    chi0: int

    def __post_init__(self):
        if self.L2 <= 0:
            raise ValueError("L^2 must be positive for an ample L")


# ---------------------------------------------------------------------------
# construction


def fano_hc(inp: FanoInput) -> FactoredHC:
    """Interpolate ``phi`` from ``h0(sH)``, ``s = 0..c``."""
    c = inp.coindex
    rhs = [Fraction(inp.h0[s]) / delta(s, inp.iota) for s in range(c + 1)]
    res = solve_linear(LinearSystem(vandermonde(range(c + 1)), rhs))
    phi = UniPoly(res.solution)
    if phi.degree != c:
        raise ValueError("h0 data gives a vanishing leading coefficient")
    return FactoredHC(inp.n, inp.r, inp.iota, phi)


def h0_low_coindex(n: int, d: int, s: int, coindex: int) -> int:
    """``h0(sH)`` for del Pezzo (coindex 2) and Mukai (coindex 3) manifolds."""
    if coindex not in (2, 3):
        raise ValueError(f"coindex must be 2 or 3, got {coindex}")
    if not 0 <= s <= coindex:
        raise ValueError(f"s must lie in [0, {coindex}], got {s}")
    if d < 1:
        raise ValueError("degree must be positive")
    if coindex == 2:
        vals = [1, n - 1 + d, math.comb(n, 2) + (n + 1) * d]
        return vals[s]
    if d % 2:
        raise ValueError("Mukai degree must be even")
    half = d // 2
    # genus g = d/2 + 1, so h0(H) = g + n - 1
    vals = [
        1,
        n + half,
        math.comb(n + 1, 2) - 1 + (n + 2) * half,
        Fraction(4 * (math.comb(n + 1, 3) + math.comb(n, 2)) + (n + 1) * (n + 4) * d, 4),
    ]
    v = Fraction(vals[s])
    if v.denominator != 1:
        raise ValueError(f"h0(3H) is not an integer for n={n}, d={d}")
    return int(v)


def mukai_coeffs(n: int, d) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """``a0..a3`` of the cubic factor for index ``n - 2`` with ``d = H^n``.

    ``a1`` is fixed by Serre symmetry: the cubic must vanish at ``z = -(n-2)/2``.
    """
    if n < 6:
        raise ValueError("the Mukai closed form needs n >= 6")
    d = as_rational(d)
    nf = math.factorial(n)
    return (
        Fraction(1, math.factorial(n - 3)),
        (d / 2 * (n - 2) ** 2 + 2 * n * (n - 1)) / nf,
        3 * d * (n - 2) / (2 * nf),
        d / nf,
    )


def closed_form(kind, n: int, r: int, d=None, *, strict: bool = False) -> FactoredHC:
    """Closed-form Hilbert curves for index ``n+1``, ``n``, ``n-1`` and ``n-2``.

    The formulas hold for every ``r >= 1``.  With ``strict=True`` the coprimality
    condition between ``r`` and the index required for the converse
    characterisation is enforced as well.
    """
    kind = FanoKind.parse(kind)
    if r < 1:
        raise ValueError("r must be positive")
    iota = {FanoKind.PN: n + 1, FanoKind.QUADRIC: n,
            FanoKind.DELPEZZO: n - 1, FanoKind.MUKAI: n - 2}[kind]
    min_n = {FanoKind.PN: 1, FanoKind.QUADRIC: 2, FanoKind.DELPEZZO: 2, FanoKind.MUKAI: 6}[kind]
    if n < min_n:
        raise ValueError(f"{kind.value} needs n >= {min_n}, got {n}")
    if strict and math.gcd(r, iota) != 1:
        raise ValueError(f"gcd(r, {iota}) = {math.gcd(r, iota)} != 1 for {kind.value}")
    nf = math.factorial(n)
    if kind is FanoKind.PN:
        phi = UniPoly([Fraction(1, nf)])
    elif kind is FanoKind.QUADRIC:
        phi = UniPoly([Fraction(1, math.factorial(n - 1)), Fraction(2, nf)])
    else:
        if d is None:
            raise ValueError(f"{kind.value} needs a degree d")
        d = int(d)
        if d < 1:
            raise ValueError("degree must be positive")
        if kind is FanoKind.DELPEZZO:
            if (n, d) in ((3, 8), (2, 9)):
                raise ValueError(
                    f"(n, d) = ({n}, {d}) is excluded from the del Pezzo family: "
                    "it is a projective space case")
            phi = UniPoly([Fraction(1, math.factorial(n - 2)),
                           Fraction((n - 1) * d, nf), Fraction(d, nf)])
        else:
            if d % 2:
                raise ValueError("Mukai degree must be even")
            phi = UniPoly(mukai_coeffs(n, d))
    return FactoredHC(n, r, iota, phi)


def fano_from_json(data: Mapping) -> FactoredHC:
    """Build from either the ``h0`` form or the ``kind`` form of FanoInput JSON."""
    if "kind" in data:
        return closed_form(data["kind"], int(data["n"]), int(data.get("r", 1)), data.get("d"))
    return fano_hc(FanoInput.from_json(data))


def surface_hc(inp: SurfaceInput) -> BiPoly:
    u, v = BiPoly.x(), BiPoly.y()
    q = (inp.K2 * u * u + 2 * inp.KL * u * v + inp.L2 * v * v
         + 2 * inp.chi0 - Fraction(inp.K2, 4)) * Fraction(1, 2)
    return substitute_affine(q, 1, 0, 0, 1, Fraction(-1, 2), 0)


def centered(p: BiPoly) -> BiPoly:
    """Rewrite ``p`` in ``(u, v) = (x - 1/2, y)``."""
    return substitute_affine(p, 1, 0, 0, 1, Fraction(1, 2), 0)


def serre_check(p: BiPoly, n: int) -> bool:
    return substitute_affine(p, -1, 0, 0, -1, 1, 0) == p * (-1) ** n


# ---------------------------------------------------------------------------
# geography


class Surd(NamedTuple):
    """``coeff * sqrt(radicand)`` with a nonnegative non-square radicand."""

    coeff: Fraction
    radicand: Fraction

    def __float__(self) -> float:
        return float(self.coeff) * math.sqrt(self.radicand)

    def __str__(self) -> str:
        c = self.coeff
        sign = "-" if c < 0 else ""
        c = abs(c)
        head = "" if c == 1 else f"{c}*"
        return f"{sign}{head}sqrt({self.radicand})"


def _sqrt_over(h: Fraction, r: int, sign: int):
    if is_rational_square(h):
        return sign * rational_sqrt(h) / r
    return Surd(Fraction(sign, r), h)


@dataclass(frozen=True)
class Line:
    """``v = slope*u + intercept`` in centered coordinates."""

    label: str
    slope: Fraction
    intercept: object  # Fraction or Surd
    multiplicity: int = 1

    def to_json(self) -> dict:
        ic = self.intercept
        return {
            "label": self.label,
            "slope": str(self.slope),
            "intercept": str(ic),
            "intercept_approx": float(ic),
            "multiplicity": self.multiplicity,
        }


@dataclass(frozen=True)
class GeographyReport:
    n: int
    d: int
    r: int
    h: Fraction
    lines: tuple[Line, ...]
    conic: tuple[Line, ...]
    G_class_R: str
    G_class_Q: str
    overlaps: tuple[tuple[str, str], ...] = field(default=())

    def arrangement(self, over: str = "R") -> str:
        """Real or rational line arrangement with multiplicities, e.g. ``l1 + 2l2 + l3``."""
        mult = {ln.label: ln.multiplicity for ln in self.lines}
        alias = dict(self.overlaps)
        include_conic = self.G_class_R != "empty" if over == "R" else self.G_class_Q != "empty"
        extra = []
        if include_conic:
            for comp in self.conic:
                if comp.label in alias:
                    mult[alias[comp.label]] += comp.multiplicity
                else:
                    extra.append(comp)
        parts = [f"{m}{lab}" if m > 1 else lab for lab, m in mult.items()]
        parts += [f"{c.multiplicity}{c.label}" if c.multiplicity > 1 else c.label for c in extra]
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "r": self.r,
            "h": str(self.h),
            "lines": [ln.to_json() for ln in self.lines],
            "conic": [ln.to_json() for ln in self.conic],
            "G_class_R": self.G_class_R,
            "G_class_Q": self.G_class_Q,
            "overlaps": [list(o) for o in self.overlaps],
            "arrangement_R": self.arrangement("R"),
            "arrangement_Q": self.arrangement("Q"),
        }


def geography(n: int, d: int, r: int = 1) -> GeographyReport:
    """Line arrangement of the index ``n-1`` Hilbert curve in centered coordinates."""
    if n < 3 or d < 1 or r < 1:
        raise ValueError("need n >= 3, d >= 1, r >= 1")
    slope = Fraction(n - 1, r)
    h = Fraction(n - 1, 4 * d) * ((n - 1) * d - 4 * n)
    lines = tuple(Line(f"l{i}", slope, (Fraction(n - 1, 2) - i) / r) for i in range(1, n - 1))
    if h < 0:
        conic: tuple[Line, ...] = ()
        cls_r = cls_q = "empty"
    elif h == 0:
        conic = (Line("lambda", slope, Fraction(0), 2),)
        cls_r = cls_q = "double-line"
    else:
        conic = (Line("lambda", slope, _sqrt_over(h, r, 1)),
                 Line("lambda'", slope, _sqrt_over(h, r, -1)))
        cls_r = "two-lines"
        cls_q = "two-lines" if is_rational_square(h) else "empty"
    overlaps = []
    for comp in conic:
        if isinstance(comp.intercept, Fraction):
            for ln in lines:
                if ln.intercept == comp.intercept:
                    overlaps.append((comp.label, ln.label))
    return GeographyReport(n, d, r, h, lines, conic, cls_r, cls_q, tuple(overlaps))


def rational_lines(hc: FactoredHC) -> tuple[Line, ...]:
    """Lines of the curve coming from rational roots of ``q``, in centered coordinates.

    A root ``z0`` gives the line ``r*v - iota*u - iota/2 = z0``.
    """
    fac = rational_roots(hc.q)
    slope = Fraction(hc.iota, hc.r)
    out = []
    for k, (root, mult) in enumerate(sorted(fac.roots, key=lambda rm: -rm[0]), start=1):
        out.append(Line(f"m{k}", slope, (root + Fraction(hc.iota, 2)) / hc.r, mult))
    return tuple(out)


# ---------------------------------------------------------------------------
# reducibility


@dataclass(frozen=True)
class Reducibility:
    over_C: bool
    over_R: bool
    over_Q: bool
    factorization: RootFactorization  # of phi
    q_factorization: RootFactorization  # of the full q

    def to_json(self) -> dict:
        def fac(f: RootFactorization) -> dict:
            return {
                "lead": str(f.lead),
                "roots": [{"root": str(z), "multiplicity": m} for z, m in f.roots],
                "cofactor": f.cofactor.to_json(),
            }
        return {
            "over_C": self.over_C,
            "over_R": self.over_R,
            "over_Q": self.over_Q,
            "phi": fac(self.factorization),
            "q": fac(self.q_factorization),
        }


def reducibility(hc: FactoredHC) -> Reducibility:
    phi = hc.phi
    fac = rational_roots(phi)
    over_r = phi.degree <= 0 or count_real_roots(phi, distinct=False) == phi.degree
    return Reducibility(True, over_r, fac.splits, fac, rational_roots(hc.q))


# ---------------------------------------------------------------------------
# recognition


@dataclass(frozen=True)
class CanonicalMatch:
    family: str
    params: dict

    def to_json(self) -> dict:
        return {"family": self.family,
                "params": {k: (str(v) if isinstance(v, Fraction) else v)
                           for k, v in self.params.items()}}


def _integral(v: Fraction) -> bool:
    return as_rational(v).denominator == 1


def _fit_affine(p: BiPoly, build, names: Sequence[str], fixed: Mapping[str, Fraction] | None = None):
    """Fit ``p`` inside the affine family ``build(**params)``.

    Returns a dict of parameters with ``build(**params) == p``, or None.  If the
    parameters are not determined by the polynomial, the caller-supplied
    ``fixed`` values pin the free directions.
    """
    fixed = dict(fixed or {})
    free = [nm for nm in names if nm not in fixed]
    zero = {nm: Fraction(0) for nm in free} | fixed
    base = build(**zero)
    basis = []
    for nm in free:
        basis.append(build(**(zero | {nm: Fraction(1)})) - base)
    target = p - base
    monos = sorted(set(target.terms) | {m for b in basis for m in b.terms})
    if not monos:
        return zero
    if not free:
        return zero if target.is_zero() else None
    matrix = [[b.coeff(*m) for b in basis] for m in monos]
    res = solve_linear(LinearSystem(matrix, [target.coeff(*m) for m in monos]))
    if res.status == "inconsistent":
        return None
    if res.status == "underdetermined":
        return {"__underdetermined__": res.nullity}
    params = dict(zip(free, res.solution)) | fixed
    if build(**params) != p:
        return None
    return params


def _ints(params: Mapping, keys: Sequence[str]) -> dict | None:
    out = {}
    for k in keys:
        v = params[k]
        if not _integral(v):
            return None
        out[k] = int(v)
    return out


def match_canonical(p: BiPoly, n: int, r: int) -> list[CanonicalMatch]:
    """All canonical families containing ``p``, in a fixed order.

    Order: Pn, Quadric, Mukai, DelPezzo, ScrollOverCurve, QuadricFibration,
    DelPezzoFibration, ScrollOverSurface.  An empty list means no match.
    """
    from . import fibrations as fib

    if p.degree != n or r < 1:
        return []
    out: list[CanonicalMatch] = []
    nf = math.factorial(n)
    y_top = p.coeff(0, n)

    for kind, fam in ((FanoKind.PN, "Pn"), (FanoKind.QUADRIC, "Quadric")):
        if kind is FanoKind.QUADRIC and n < 2:
            continue
        if closed_form(kind, n, r).expanded == p:
            out.append(CanonicalMatch(fam, {"n": n, "r": r}))

    d_fano = y_top * nf / r**n
    for kind, fam, lo in ((FanoKind.MUKAI, "Mukai", 6), (FanoKind.DELPEZZO, "DelPezzo", 2)):
        if n < lo or not _integral(d_fano) or d_fano < 1:
            continue
        try:
            cand = closed_form(kind, n, r, int(d_fano))
        except ValueError:
            continue
        if cand.expanded == p:
            out.append(CanonicalMatch(fam, {"n": n, "r": r, "d": int(d_fano)}))

    if n >= 2 and math.gcd(r, n) == 1:
        prm = _fit_affine(p, lambda g, d: fib._scroll_curve_raw(n, r, g, d), ("g", "d"))
        if prm and "__underdetermined__" not in prm:
            iv = _ints(prm, ("g", "d"))
            if iv and iv["g"] >= 0 and iv["d"] >= 1:
                out.append(CanonicalMatch("ScrollOverCurve", {"n": n, "r": r} | iv))

    if n >= 3 and math.gcd(r, n - 1) == 1:
        build = lambda g, e, a, b: fib._quadric_fib_raw(n, r, g, e, a, b)  # noqa: E731
        hit = None
        for b0 in range(r):
            prm = _fit_affine(p, build, ("g", "e", "a", "b"), {"b": Fraction(b0)})
            if prm and "__underdetermined__" not in prm:
                iv = _ints(prm, ("g", "e", "a", "b"))
                if iv and iv["g"] >= 0:
                    hit = iv
                    break
        if hit:
            hit["t"] = fib.quadric_t(n, r, hit["g"], hit["e"], hit["a"], hit["b"])
            out.append(CanonicalMatch("QuadricFibration", {"n": n, "r": r} | hit))

    if n >= 3 and r == 1:
        build = lambda g, d, T, t: fib._delpezzo_fib_raw(n, g, d, T, t)  # noqa: E731
        prm = _fit_affine(p, build, ("g", "d", "T", "t"))
        if prm and "__underdetermined__" not in prm:
            iv = _ints(prm, ("g", "d", "T", "t"))
            if iv and iv["g"] >= 0 and iv["d"] >= 1 and iv["t"] >= 1 and iv["T"] % iv["t"] == 0:
                dl = iv["T"] // iv["t"]
                if dl >= 1:
                    chi = fib.delpezzo_chi(n, iv["g"], iv["d"], dl, iv["t"])
                    out.append(CanonicalMatch("DelPezzoFibration", {
                        "n": n, "r": 1, "g": iv["g"], "d": iv["d"], "delta": dl,
                        "t": iv["t"], "chi": chi}))

        build = lambda chi0, chiL, k, h: fib._scroll_surface_raw(n, chi0, chiL, k, h)  # noqa: E731
        prm = _fit_affine(p, build, ("chi0", "chiL", "k", "h"))
        if prm and "__underdetermined__" not in prm:
            iv = _ints(prm, ("chi0", "chiL", "k", "h"))
            if iv and iv["h"] > 0:
                out.append(CanonicalMatch("ScrollOverSurface", {"n": n, "r": 1} | iv))
    return out
