"""Exact arithmetic over the rationals.

Scalars are :class:`fractions.Fraction`.  Two polynomial types are provided:
:class:`BiPoly`, a sparse polynomial in ``x`` and ``y``, and :class:`UniPoly`,
a dense polynomial in a single variable ``z``.  Both are immutable and compare
structurally.

The module also carries the exact linear solver used for interpolation and for
the functional-equation engine, plus root analysis over Q and R (rational root
search and Sturm sequences).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

ExactRational = Fraction
Scalar = Union[int, Fraction]

__all__ = [
    "ExactRational",
    "BiPoly",
    "UniPoly",
    "LinearSystem",
    "SolveResult",
    "RootFactorization",
    "RankTwoError",
    "DegenerateInterpolationError",
    "as_rational",
    "solve_linear",
    "nullspace",
    "vandermonde",
    "substitute_affine",
    "top_form",
    "restrict_to_line",
    "rational_roots",
    "count_real_roots",
    "squarefree_decomposition",
    "poly_gcd",
    "is_rational_square",
]


class RankTwoError(ValueError):
    """The polynomial is not a function of ``r*y - iota*x`` alone."""


class DegenerateInterpolationError(ValueError):
    """Interpolation nodes are not pairwise distinct."""


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def is_rational_square(c: Fraction) -> bool:
    c = as_rational(c)
    if c < 0:
        return False
    return (math.isqrt(c.numerator) ** 2 == c.numerator
            and math.isqrt(c.denominator) ** 2 == c.denominator)


def rational_sqrt(c: Fraction) -> Fraction:
    if not is_rational_square(c):
        raise ValueError(f"{c} is not the square of a rational number")
    return Fraction(math.isqrt(c.numerator), math.isqrt(c.denominator))


# ---------------------------------------------------------------------------
# bivariate polynomials


class BiPoly:
    """Sparse polynomial in ``x`` and ``y`` with rational coefficients.

    ``terms`` maps an exponent pair ``(i, j)`` to the coefficient of
    ``x**i * y**j``.  Zero coefficients are never stored, so two polynomials are
    equal exactly when their term maps are.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError("negative exponent")
                c = as_rational(c)
                if c:
                    clean[(int(i), int(j))] = c
        self._terms = clean
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "BiPoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BiPoly":
        return cls({(0, 1): 1})

    @classmethod
    def linear(cls, a: Scalar, b: Scalar, c: Scalar = 0) -> "BiPoly":
        """``a*x + b*y + c``."""
        return cls({(1, 0): a, (0, 1): b, (0, 0): c})

    @classmethod
    def _coerce(cls, other) -> "BiPoly":
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, UniPoly):
            raise TypeError("cannot mix BiPoly and UniPoly")
        return cls.const(as_rational(other))

    # access -------------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def items(self):
        return sorted(self._terms.items(), reverse=True)

    @property
    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((i + j for i, j in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    def homogeneous_part(self, k: int) -> "BiPoly":
        return BiPoly({e: c for e, c in self._terms.items() if sum(e) == k})

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "BiPoly":
        other = BiPoly._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return BiPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "BiPoly":
        return self + (-BiPoly._coerce(other))

    def __rsub__(self, other) -> "BiPoly":
        return BiPoly._coerce(other) - self

    def __mul__(self, other) -> "BiPoly":
        if not isinstance(other, BiPoly):
            if isinstance(other, UniPoly):
                return NotImplemented
            c = as_rational(other)
            return BiPoly({e: c * v for e, v in self._terms.items()})
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return BiPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "BiPoly":
        c = as_rational(other)
        return BiPoly({e: v / c for e, v in self._terms.items()})

    def __pow__(self, k: int) -> "BiPoly":
        if k < 0:
            raise ValueError("negative power")
        result, base = BiPoly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, BiPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == BiPoly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __call__(self, x: Scalar, y: Scalar) -> Fraction:
        x, y = as_rational(x), as_rational(y)
        return sum((c * x**i * y**j for (i, j), c in self._terms.items()), Fraction(0))

    def compose(self, X: "BiPoly", Y: "BiPoly") -> "BiPoly":
        """Substitute polynomials ``X`` and ``Y`` for ``x`` and ``y``."""
        if not self._terms:
            return BiPoly()
        max_i = max(i for i, _ in self._terms)
        max_j = max(j for _, j in self._terms)
        xp = [BiPoly.const(1)]
        for _ in range(max_i):
            xp.append(xp[-1] * X)
        yp = [BiPoly.const(1)]
        for _ in range(max_j):
            yp.append(yp[-1] * Y)
        out = BiPoly()
        for (i, j), c in self._terms.items():
            out = out + (xp[i] * yp[j]) * c
        return out

    # display / interchange ----------------------------------------------
    def to_str(self, names: tuple[str, str] = ("x", "y")) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in self.items():
            mono = []
            if i:
                mono.append(names[0] if i == 1 else f"{names[0]}^{i}")
            if j:
                mono.append(names[1] if j == 1 else f"{names[1]}^{j}")
            mag = abs(c)
            if mono:
                body = "*".join(mono) if mag == 1 else _fmt(mag) + "*" + "*".join(mono)
            else:
                body = _fmt(mag)
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]

    def __repr__(self) -> str:
        return f"BiPoly({self.to_str()})"

    def to_json(self, names: tuple[str, str] = ("x", "y")) -> dict:
        return {
            "vars": list(names),
            "terms": [
                {"i": i, "j": j, "num": str(c.numerator), "den": str(c.denominator)}
                for (i, j), c in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "BiPoly":
        vars_ = data.get("vars", ["x", "y"])
        if len(vars_) != 2:
            raise ValueError(f"expected two variables, got {vars_!r}")
        terms: dict[tuple[int, int], Fraction] = {}
        for t in data["terms"]:
            key = (int(t["i"]), int(t.get("j", 0)))
            terms[key] = terms.get(key, 0) + Fraction(int(t["num"]), int(t.get("den", 1)))
        return cls(terms)


# ---------------------------------------------------------------------------
# univariate polynomials


class UniPoly:
    """Dense polynomial in ``z``; ``coeffs[k]`` is the coefficient of ``z**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, c: Scalar) -> "UniPoly":
        return cls([c])

    @classmethod
    def z(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar], lead: Scalar = 1) -> "UniPoly":
        out = cls.const(lead)
        for r in roots:
            out = out * cls([-as_rational(r), 1])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, BiPoly):
            raise TypeError("cannot mix UniPoly and BiPoly")
        return UniPoly.const(as_rational(other))

    def __add__(self, other) -> "UniPoly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly(u + v for u, v in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UniPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UniPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            if isinstance(other, BiPoly):
                return NotImplemented
            c = as_rational(other)
            return UniPoly(c * v for v in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "UniPoly":
        c = as_rational(other)
        return UniPoly(v / c for v in self.coeffs)

    def __pow__(self, k: int) -> "UniPoly":
        out = UniPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.coeffs == UniPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, z: Scalar) -> Fraction:
        z = as_rational(z)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.lead
        for k in range(len(quot) - 1, -1, -1):
            c = rem[k + other.degree] / lead
            quot[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] -= c * b
        return UniPoly(quot), UniPoly(rem[: other.degree] if other.degree > 0 else [])

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def derivative(self) -> "UniPoly":
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> "UniPoly":
        return self / self.lead if self.coeffs else self

    def shift(self, s: Scalar) -> "UniPoly":
        """Return ``q(z + s)``."""
        return self.compose(UniPoly([s, 1]))

    def compose(self, other: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def compose_linear(self, r: Scalar, iota: Scalar) -> BiPoly:
        """Return ``q(r*y - iota*x)`` as a :class:`BiPoly`."""
        z = BiPoly.linear(-as_rational(iota), as_rational(r))
        acc = BiPoly()
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def to_str(self, name: str = "z") -> str:
        p = BiPoly({(k, 0): c for k, c in enumerate(self.coeffs)})
        return p.to_str((name, "_"))

    def __repr__(self) -> str:
        return f"UniPoly({self.to_str()})"

    def to_json(self) -> dict:
        return {
            "vars": ["z"],
            "terms": [
                {"i": k, "num": str(c.numerator), "den": str(c.denominator)}
                for k, c in sorted(enumerate(self.coeffs), reverse=True)
                if c
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "UniPoly":
        if list(data.get("vars", ["z"])) != ["z"]:
            raise ValueError("univariate polynomial JSON must use vars ['z']")
        terms = data["terms"]
        deg = max((int(t["i"]) for t in terms), default=-1)
        cs = [Fraction(0)] * (deg + 1)
        for t in terms:
            cs[int(t["i"])] += Fraction(int(t["num"]), int(t.get("den", 1)))
        return cls(cs)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (the zero polynomial if both inputs vanish)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


# ---------------------------------------------------------------------------
# linear algebra


@dataclass(frozen=True)
class LinearSystem:
    matrix: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]

    def __init__(self, matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]):
        m = tuple(tuple(as_rational(v) for v in row) for row in matrix)
        b = tuple(as_rational(v) for v in rhs)
        if not m or not m[0]:
            raise ValueError("matrix must be nonempty")
        if any(len(row) != len(m[0]) for row in m):
            raise ValueError("ragged matrix")
        if len(b) != len(m):
            raise ValueError("rhs length does not match the number of rows")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "rhs", b)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.matrix), len(self.matrix[0])


@dataclass(frozen=True)
class SolveResult:
    """Outcome of :func:`solve_linear`.

    ``status`` is one of ``"unique"``, ``"inconsistent"`` or
    ``"underdetermined"``.  For a consistent system ``solution`` holds a
    particular solution (free variables set to zero); ``nullity`` is the
    dimension of the solution space of the homogeneous system.
    """

    status: str
    solution: tuple[Fraction, ...] | None
    rank: int
    nullity: int

    @property
    def is_unique(self) -> bool:
        return self.status == "unique"


def _cost(c: Fraction) -> int:
    return c.numerator.bit_length() + c.denominator.bit_length()


def _eliminate(rows: list[list[Fraction]], ncols: int):
    """Gauss-Jordan with full pivoting on the first ``ncols`` columns.

    Returns (rank, pivots) where pivots[k] = (row, col) in reduced form; the
    rows list is modified in place.
    """
    nrows = len(rows)
    used_cols: set[int] = set()
    pivots: list[tuple[int, int]] = []
    r = 0
    while r < nrows:
        best = None
        for i in range(r, nrows):
            row = rows[i]
            for j in range(ncols):
                if j in used_cols or not row[j]:
                    continue
                cost = _cost(row[j])
                if best is None or cost < best[0]:
                    best = (cost, i, j)
        if best is None:
            break
        _, i, j = best
        rows[r], rows[i] = rows[i], rows[r]
        prow = rows[r]
        inv = 1 / prow[j]
        for k in range(len(prow)):
            prow[k] *= inv
        for i2 in range(nrows):
            if i2 != r and rows[i2][j]:
                f = rows[i2][j]
                other = rows[i2]
                for k in range(len(prow)):
                    if prow[k]:
                        other[k] -= f * prow[k]
        used_cols.add(j)
        pivots.append((r, j))
        r += 1
    return r, pivots


def solve_linear(system: LinearSystem) -> SolveResult:
    """Solve ``matrix @ a = rhs`` exactly."""
    nrows, ncols = system.shape
    rows = [list(row) + [b] for row, b in zip(system.matrix, system.rhs)]
    rank, pivots = _eliminate(rows, ncols)
    if any(rows[i][ncols] for i in range(rank, nrows)):
        return SolveResult("inconsistent", None, rank, ncols - rank)
    sol = [Fraction(0)] * ncols
    for r, j in pivots:
        sol[j] = rows[r][ncols]
    status = "unique" if rank == ncols else "underdetermined"
    return SolveResult(status, tuple(sol), rank, ncols - rank)


def nullspace(matrix: Sequence[Sequence[Scalar]]) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel of ``matrix``."""
    rows = [[as_rational(v) for v in row] for row in matrix]
    ncols = len(rows[0]) if rows else 0
    rank, pivots = _eliminate(rows, ncols)
    pivot_cols = {j: r for r, j in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for j, r in pivot_cols.items():
            v[j] = -rows[r][free]
        basis.append(tuple(v))
    return basis


def vandermonde(nodes: Sequence[Scalar]) -> tuple[tuple[Fraction, ...], ...]:
    """Square Vandermonde matrix with entry ``(i, k) = nodes[i]**k``."""
    ns = [as_rational(v) for v in nodes]
    if len(set(ns)) != len(ns):
        raise DegenerateInterpolationError(f"duplicate interpolation nodes in {nodes!r}")
    return tuple(tuple(v**k for k in range(len(ns))) for v in ns)


# ---------------------------------------------------------------------------
# polynomial transforms


def substitute_affine(p: BiPoly, m11: Scalar, m12: Scalar, m21: Scalar, m22: Scalar,
                      s1: Scalar = 0, s2: Scalar = 0) -> BiPoly:
    """``p(m11*x + m12*y + s1, m21*x + m22*y + s2)``."""
    return p.compose(BiPoly.linear(m11, m12, s1), BiPoly.linear(m21, m22, s2))


def top_form(p: BiPoly, n: int) -> BiPoly:
    """Degree-``n`` homogeneous part, i.e. ``p0(x, y, 0)``."""
    if p.degree > n:
        raise ValueError(f"polynomial has degree {p.degree} > {n}")
    return p.homogeneous_part(n)


def restrict_to_line(p: BiPoly, r: int, iota: int) -> UniPoly:
    """Return ``q`` with ``p(x, y) == q(r*y - iota*x)``.

    Raises RankTwoError when no such ``q`` exists.
    """
    if iota == 0 and r == 0:
        raise ValueError("r and iota cannot both vanish")
    deg = max(p.degree, 0)
    # sample along the x-axis (iota != 0) or the y-axis, then interpolate
    if iota:
        pts = [(Fraction(-k, iota), Fraction(0)) for k in range(deg + 1)]
    else:
        pts = [(Fraction(0), Fraction(k, r)) for k in range(deg + 1)]
    values = [p(*pt) for pt in pts]
    res = solve_linear(LinearSystem(vandermonde(range(deg + 1)), values))
    q = UniPoly(res.solution)
    if q.compose_linear(r, iota) != p:
        raise RankTwoError(f"polynomial is not a function of {r}*y - {iota}*x")
    return q


# ---------------------------------------------------------------------------
# roots


class RootFactorization(NamedTuple):
    """``q == lead * prod((z - root)**mult) * cofactor`` with monic cofactor."""

    lead: Fraction
    roots: tuple[tuple[Fraction, int], ...]
    cofactor: UniPoly

    @property
    def splits(self) -> bool:
        return self.cofactor.degree == 0

    def expand(self) -> UniPoly:
        out = UniPoly.const(self.lead) * self.cofactor
        for root, mult in self.roots:
            out = out * UniPoly([-root, 1]) ** mult
        return out


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _primitive_integer(q: UniPoly) -> list[int]:
    den = math.lcm(*(c.denominator for c in q.coeffs))
    ints = [int(c * den) for c in q.coeffs]
    g = math.gcd(*ints)
    return [c // g for c in ints]


def rational_roots(q: UniPoly) -> RootFactorization:
    """All rational roots of ``q`` with multiplicity, plus the deflated cofactor."""
    if q.is_zero():
        raise ValueError("zero polynomial has no root factorization")
    lead = q.lead
    rest = q.monic()
    found: dict[Fraction, int] = {}
    while rest.degree >= 1 and rest.coeffs[0] == 0:
        found[Fraction(0)] = found.get(Fraction(0), 0) + 1
        rest = UniPoly(rest.coeffs[1:])
    if rest.degree >= 1:
        ints = _primitive_integer(rest)
        candidates = sorted({Fraction(s * a, b)
                             for a in _divisors(ints[0])
                             for b in _divisors(ints[-1])
                             for s in (1, -1)})
        for cand in candidates:
            lin = UniPoly([-cand, 1])
            while rest.degree >= 1 and rest(cand) == 0:
                rest = rest // lin
                found[cand] = found.get(cand, 0) + 1
            if rest.degree < 1:
                break
    roots = tuple(sorted(found.items()))
    return RootFactorization(lead, roots, rest)


def squarefree_decomposition(q: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: monic squarefree ``f_k`` with ``q = lead * prod f_k**k``."""
    if q.degree < 1:
        return []
    f = q.monic()
    fp = f.derivative()
    a = poly_gcd(f, fp)
    b = f // a
    c = fp // a
    d = c - b.derivative()
    out = []
    k = 1
    while b.degree >= 1:
        a = poly_gcd(b, d)
        b = b // a
        c = d // a
        d = c - b.derivative()
        if a.degree >= 1:
            out.append((a, k))
        k += 1
    return out


def _sign_changes(values: Iterable[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _sturm_distinct(f: UniPoly) -> int:
    """Number of distinct real roots of a squarefree ``f``."""
    if f.degree < 1:
        return 0
    chain = [f, f.derivative()]
    while chain[-1].degree > 0:
        rem = chain[-2] % chain[-1]
        if rem.is_zero():
            break
        chain.append(-rem)
    at_pos = [g.lead for g in chain]
    at_neg = [g.lead * (-1) ** g.degree for g in chain]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def count_real_roots(q: UniPoly, distinct: bool = True) -> int:
    """Exact number of real roots (distinct, or counted with multiplicity)."""
    if q.is_zero():
        raise ValueError("zero polynomial")
    parts = squarefree_decomposition(q)
    if distinct:
        sqf = UniPoly.const(1)
        for f, _ in parts:
            sqf = sqf * f
        return _sturm_distinct(sqf)
    return sum(k * _sturm_distinct(f) for f, k in parts)


def monomials(degree: int) -> list[tuple[int, int]]:
    """Exponent pairs of total degree at most ``degree``, graded order."""
    return [(i, k - i) for k in range(degree + 1) for i in range(k, -1, -1)]


def grid(*ranges: Iterable) -> Iterable[tuple]:
    return product(*ranges)
