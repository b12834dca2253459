"""Exact Hilbert curves of polarized manifolds."""

from .exactalg import BiPoly, UniPoly, rational_roots
from .fanocore import (
    FactoredHC,
    FanoInput,
    FanoKind,
    SurfaceInput,
    centered,
    closed_form,
    fano_hc,
    geography,
    match_canonical,
    reducibility,
    serre_check,
    surface_hc,
)
from .fibrations import (
    CurveFibrationInput,
    SurfaceScrollInput,
    delpezzo_fibration,
    quadric_fibration,
    scroll_over_curve,
    scroll_over_surface,
    solve_recurrence,
)
from .toric import LatticePolytope, fano_index, load_table1, sweep, toric_hc

__version__ = "0.1.0"

__all__ = [
    "BiPoly",
    "UniPoly",
    "rational_roots",
    "FactoredHC",
    "FanoInput",
    "FanoKind",
    "SurfaceInput",
    "centered",
    "closed_form",
    "fano_hc",
    "geography",
    "match_canonical",
    "reducibility",
    "serre_check",
    "surface_hc",
    "CurveFibrationInput",
    "SurfaceScrollInput",
    "delpezzo_fibration",
    "quadric_fibration",
    "scroll_over_curve",
    "scroll_over_surface",
    "solve_recurrence",
    "LatticePolytope",
    "fano_index",
    "load_table1",
    "sweep",
    "toric_hc",
]
