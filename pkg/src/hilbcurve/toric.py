"""Toric Fano input data: polytopes, duals, volumes and lattice-point counts.

A smooth toric Fano ``X`` comes from a fan polytope ``Q`` with the origin in
its interior.  The anticanonical polytope is the dual
``P = {y : <y, x> >= -1 for x in Q}``; ``(-K)^n`` is its normalized volume and
``h0(-tK)`` counts lattice points of ``t*P``.  Dividing ``P`` (after a lattice
translation) by the largest possible integer gives the index and the polytope
of the fundamental divisor.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exactalg import UniPoly, as_rational, nullspace, rational_roots
from .fanocore import FactoredHC, FanoInput, Reducibility, fano_hc, reducibility

__all__ = [
    "NotReflexive",
    "DegeneratePolytope",
    "LatticePolytope",
    "ToricFanoRecord",
    "dual_polytope",
    "normalized_volume",
    "lattice_points",
    "lattice_point_array",
    "fano_index",
    "toric_h0",
    "toric_hc",
    "load_table1",
    "load_records",
    "sweep",
    "parse_printed_poly",
]

Vec = tuple[int, ...]


class NotReflexive(ValueError):
    """The dual polytope has a non-integral vertex."""


class DegeneratePolytope(ValueError):
    """The points do not span the ambient space."""


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    dim = len(vectors[0])
    return dim - len(nullspace(vectors)) if len(vectors) else 0


def _primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = math.lcm(*(Fraction(x).denominator for x in v))
    ints = [int(Fraction(x) * den) for x in v]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints)


def _facets(points: Sequence[Sequence]) -> list[tuple[tuple[int, ...], Fraction, frozenset[int]]]:
    """Facets ``a.x <= b`` of a full-dimensional point configuration.

    Returns ``(a, b, members)`` with ``a`` primitive integral and ``members``
    the indices of points lying on the facet.
    """
    dim = len(points[0])
    seen: dict[tuple, tuple] = {}
    for combo in combinations(range(len(points)), dim):
        base = points[combo[0]]
        diffs = [_sub(points[i], base) for i in combo[1:]]
        if dim > 1:
            ker = nullspace(diffs)
            if len(ker) != 1:
                continue
            a = _primitive(ker[0])
        else:
            a = (1,)
        b = _dot(a, base)
        vals = [_dot(a, p) for p in points]
        if all(v <= b for v in vals):
            pass
        elif all(v >= b for v in vals):
            a, b, vals = tuple(-x for x in a), -b, [-v for v in vals]
        else:
            continue
        if a in seen:
            continue
        members = frozenset(i for i, v in enumerate(vals) if v == b)
        if _rank([_sub(points[i], base) for i in members]) != dim - 1:
            continue
        seen[a] = (a, Fraction(b), members)
    return list(seen.values())


def _local_coords(points: Sequence[Sequence]) -> tuple[list[tuple[Fraction, ...]], int]:
    """Coordinates of ``points`` in an affine basis of their span."""
    base = points[0]
    basis: list[tuple] = []
    for p in points[1:]:
        d = _sub(p, base)
        if _rank(basis + [d]) > len(basis):
            basis.append(d)
    k = len(basis)
    if k == 0:
        return [() for _ in points], 0
    from .exactalg import LinearSystem, solve_linear
    mat = [[basis[c][row] for c in range(k)] for row in range(len(base))]
    coords = []
    for p in points:
        res = solve_linear(LinearSystem(mat, _sub(p, base)))
        coords.append(res.solution)
    return coords, k


def _triangulate(points: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Pulling triangulation from ``points[0]``; simplices as index tuples."""
    coords, k = _local_coords(points)
    if k == 0:
        return [(0,)]
    if k == 1:
        vals = [c[0] for c in coords]
        return [(vals.index(min(vals)), vals.index(max(vals)))]
    out = []
    for a, b, members in _facets(coords):
        if 0 in members:
            continue
        idx = sorted(members)
        for simplex in _triangulate([points[i] for i in idx]):
            out.append((0,) + tuple(idx[i] for i in simplex))
    return out


def _det(mat: list[list[Fraction]]) -> Fraction:
    m = [list(map(Fraction, row)) for row in mat]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


@dataclass(frozen=True)
class LatticePolytope:
    vertices: tuple[Vec, ...]

    def __init__(self, vertices: Iterable[Sequence[int]]):
        verts = tuple(tuple(int(c) for c in v) for v in vertices)
        if not verts:
            raise DegeneratePolytope("empty vertex list")
        if len({len(v) for v in verts}) != 1:
            raise ValueError("vertices have inconsistent dimensions")
        object.__setattr__(self, "vertices", verts)

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @cached_property
    def dim(self) -> int:
        base = self.vertices[0]
        return _rank([_sub(v, base) for v in self.vertices[1:]]) if len(self.vertices) > 1 else 0

    def _require_full(self):
        if self.dim != self.ambient_dim:
            raise DegeneratePolytope(
                f"polytope spans dimension {self.dim} inside dimension {self.ambient_dim}")

    @cached_property
    def facets(self) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
        """Facet inequalities ``a.x <= b`` with primitive integral ``a``."""
        self._require_full()
        return tuple(sorted((a, b) for a, b, _ in _facets(self.vertices)))

    @cached_property
    def extreme_vertices(self) -> tuple[Vec, ...]:
        """Vertices that are not convex combinations of the others."""
        self._require_full()
        faces = _facets(self.vertices)
        dim = self.ambient_dim
        out = []
        for i, v in enumerate(self.vertices):
            normals = [a for a, _, mem in faces if i in mem]
            if len(normals) >= dim and _rank(normals) == dim:
                out.append(v)
        return tuple(sorted(set(out)))

    def contains(self, point: Sequence, scale=1) -> bool:
        s = as_rational(scale)
        return all(_dot(a, point) <= s * b for a, b in self.facets)

    def origin_interior(self) -> bool:
        return all(b > 0 for _, b in self.facets)

    def translate(self, w: Sequence[int]) -> "LatticePolytope":
        return LatticePolytope(_sub(v, w) for v in self.vertices)

    def same_as(self, other: "LatticePolytope") -> bool:
        return set(self.extreme_vertices) == set(other.extreme_vertices)

    def to_json(self) -> list[list[int]]:
        return [list(v) for v in self.vertices]


def dual_polytope(P: LatticePolytope) -> LatticePolytope:
    """``{y : <y, x> >= -1 for all x in P}``; vertices are ``-a/b`` for facets ``a.x <= b``."""
    if not P.origin_interior():
        raise ValueError("the origin must lie strictly inside the polytope")
    verts = []
    for a, b in P.facets:
        v = [Fraction(-c) / b for c in a]
        if any(c.denominator != 1 for c in v):
            raise NotReflexive(f"dual vertex {tuple(str(c) for c in v)} is not integral")
        verts.append(tuple(int(c) for c in v))
    return LatticePolytope(sorted(verts))


def normalized_volume(P: LatticePolytope) -> int:
    """``dim! * (Euclidean volume)`` via an exact simplicial decomposition."""
    P._require_full()
    pts = list(P.extreme_vertices)
    total = Fraction(0)
    for simplex in _triangulate(pts):
        base = pts[simplex[0]]
        mat = [list(_sub(pts[i], base)) for i in simplex[1:]]
        total += abs(_det(mat))
    if total.denominator != 1:
        raise ArithmeticError("normalized volume of a lattice polytope must be integral")
    return int(total)


def lattice_point_array(P: LatticePolytope, scale=1) -> np.ndarray:
    """Integer points of ``scale * P`` as an ``(N, dim)`` array."""
    s = as_rational(scale)
    dim = P.ambient_dim
    if s == 0:
        return np.zeros((1, dim), dtype=np.int64)
    if s < 0:
        raise ValueError("scale must be nonnegative")
    P._require_full()
    verts = np.array(P.vertices, dtype=object)
    lo = [math.floor(min(verts[:, k]) * s) for k in range(dim)]
    hi = [math.ceil(max(verts[:, k]) * s) for k in range(dim)]
    axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    keep = np.ones(len(grid), dtype=bool)
    # a.x <= s*b  <=>  den*a.x <= num*b, all integers
    for a, b in P.facets:
        lhs = grid @ np.array(a, dtype=np.int64) * s.denominator
        keep &= lhs <= int(b * s.numerator)
    return grid[keep]


def lattice_points(P: LatticePolytope, scale=1) -> int:
    return int(len(lattice_point_array(P, scale)))


def fano_index(dual: LatticePolytope) -> tuple[int, LatticePolytope]:
    """Largest ``iota`` with ``(dual - w) / iota`` integral for a lattice point ``w``.

    Candidates ``w`` are the vertices first, then every lattice point of the
    polytope.  Returns ``iota`` and the polytope of the fundamental divisor.
    """
    verts = list(dual.extreme_vertices)
    if len(verts) < dual.ambient_dim + 1:
        raise DegeneratePolytope("need at least dim + 1 vertices")
    others = [tuple(int(c) for c in row) for row in lattice_point_array(dual, 1)]
    candidates = list(dict.fromkeys(verts + others))
    for iota in range(dual.ambient_dim + 1, 1, -1):
        for w in candidates:
            shifted = [_sub(v, w) for v in verts]
            if all(c % iota == 0 for v in shifted for c in v):
                return iota, LatticePolytope(tuple(c // iota for c in v) for v in shifted)
    return 1, LatticePolytope(verts)


MonicLinear = tuple[Fraction, int]


def parse_printed_poly(text: str) -> UniPoly:
    """Parse the compact factored notation used in the bundled table, e.g. ``25/3*(z+1/2)^2``."""
    import re

    s = text.replace(" ", "")
    m = re.fullmatch(r"([+-]?[0-9/]+)?\*?((?:\([^()]*\)(?:\^\d+)?)*)", s)
    if not m:
        raise ValueError(f"cannot parse {text!r}")
    lead = Fraction(m.group(1)) if m.group(1) not in (None, "", "+", "-") else Fraction(
        -1 if m.group(1) == "-" else 1)
    out = UniPoly.const(lead)
    for body, power in re.findall(r"\(([^()]*)\)(?:\^(\d+))?", m.group(2)):
        mm = re.fullmatch(r"z([+-][0-9/]+)?", body)
        if not mm:
            raise ValueError(f"cannot parse factor {body!r}")
        c = Fraction(mm.group(1)) if mm.group(1) else Fraction(0)
        out = out * UniPoly([c, 1]) ** int(power or 1)
    return out


@dataclass(frozen=True)
class ToricFanoRecord:
    primal: LatticePolytope
    id: int | None = None
    supplied_dual: LatticePolytope | None = None
    meta: Mapping = field(default_factory=dict, compare=False, hash=False)

    @property
    def n(self) -> int:
        return self.primal.ambient_dim

    @cached_property
    def dual(self) -> LatticePolytope:
        return dual_polytope(self.primal)

    @property
    def dual_agrees(self) -> bool | None:
        if self.supplied_dual is None:
            return None
        return self.dual.same_as(self.supplied_dual)

    @cached_property
    def index_data(self) -> tuple[int, LatticePolytope]:
        return fano_index(self.dual)

    @property
    def iota(self) -> int:
        return self.index_data[0]

    @property
    def fundamental(self) -> LatticePolytope:
        return self.index_data[1]

    @cached_property
    def degree(self) -> int:
        """``(-K)^n``."""
        return normalized_volume(self.dual)

    @cached_property
    def vol_primal(self) -> int:
        return normalized_volume(self.primal)

    @property
    def coindex(self) -> int:
        return self.n + 1 - self.iota

    @classmethod
    def from_json(cls, data: Mapping) -> "ToricFanoRecord":
        verts = data["vertices"]
        if "dim" in data and any(len(v) != int(data["dim"]) for v in verts):
            raise ValueError(f"record {data.get('id')}: vertex length does not match dim")
        dual = LatticePolytope(data["dual"]) if data.get("dual") else None
        meta = {k: v for k, v in data.items() if k not in ("id", "dim", "vertices", "dual")}
        rid = data.get("id")
        return cls(LatticePolytope(verts), int(rid) if rid is not None else None, dual, meta)

    def to_json(self) -> dict:
        out = {"dim": self.n, "vertices": self.primal.to_json()}
        if self.id is not None:
            out = {"id": self.id} | out
        if self.supplied_dual is not None:
            out["dual"] = self.supplied_dual.to_json()
        return out | dict(self.meta)


def toric_h0(record: ToricFanoRecord, t: int) -> int:
    """``h0(tH)`` with ``H`` the fundamental divisor."""
    return lattice_points(record.fundamental, t)


def toric_hc(record: ToricFanoRecord, r: int = 1) -> tuple[FactoredHC, Reducibility]:
    if record.n > 4:
        raise ValueError("toric ingestion is limited to dimension <= 4")
    h0 = tuple(toric_h0(record, t) for t in range(record.coindex + 1))
    hc = fano_hc(FanoInput(record.n, record.iota, r, h0))
    return hc, reducibility(hc)


def load_records(source) -> list[ToricFanoRecord]:
    """Records from a path, a JSON string, or already-parsed data."""
    if isinstance(source, (list, dict)):
        data = source
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{source}: line {exc.lineno}: {exc.msg}") from None
    if isinstance(data, dict):
        data = data.get("records", [data])
    out = []
    for k, item in enumerate(data):
        try:
            out.append(ToricFanoRecord.from_json(item))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"record #{k} (id={item.get('id') if isinstance(item, dict) else '?'}): {exc}") from None
    return out


def load_table1() -> list[ToricFanoRecord]:
    text = resources.files("hilbcurve").joinpath("data/table1.json").read_text(encoding="utf-8")
    return load_records(json.loads(text))


def table1_path() -> str:
    return str(resources.files("hilbcurve").joinpath("data/table1.json"))


def _row(record: ToricFanoRecord, r: int) -> dict:
    try:
        hc, red = toric_hc(record, r)
    except NotReflexive as exc:
        return {"id": record.id, "error": f"not reflexive: {exc}"}
    return {
        "id": record.id,
        "n": record.n,
        "iota": record.iota,
        "degree": record.degree,
        "vol": record.vol_primal,
        "hc": hc,
        "reducibility": red,
    }


def sweep(records: Sequence[ToricFanoRecord], r: int = 1, jobs: int | None = None) -> list[dict]:
    """Evaluate every record; results come back ordered by id whatever the completion order."""
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        rows = list(pool.map(lambda rec: _row(rec, r), records))
    return sorted(rows, key=lambda row: (row["id"] is None, row["id"] if row["id"] is not None else 0))
