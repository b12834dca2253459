"""Command-line front end.

Subcommands ``fano``, ``fibration``, ``toric`` and ``classify`` build a
report (a plain dict) and print it as text, JSON or LaTeX.  Exit codes:
0 success, 1 usage error, 2 mathematical inconsistency, 3 unreadable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import fibrations as fib
from .exactalg import BiPoly, UniPoly
from .fanocore import (
    FactoredHC,
    FanoInput,
    FanoKind,
    centered,
    closed_form,
    fano_hc,
    geography,
    match_canonical,
    rational_lines,
    reducibility,
    serre_check,
)
from .render import centered_factored, factored_q, fiber_factor_str, fmt_rational, poly_str
from .toric import NotReflexive, ToricFanoRecord, load_records, load_table1, parse_printed_poly, sweep, toric_hc

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_PARSE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class ParseFailure(Exception):
    pass


class MathFailure(Exception):
    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# reports


def _matches(p: BiPoly, n: int, r: int) -> list[dict]:
    out = []
    for m in match_canonical(p, n, r):
        data = m.to_json()
        t = m.params.get("t")
        if m.family == "ScrollOverCurve":
            t = (2 * m.params["g"] - 2) * r + Fraction(m.params["d"], r ** (n - 1))
        # t = 0 means rK + iota_F L is trivial: the polynomial coincides, there is no fibration
        if t is not None and Fraction(t) == 0:
            data["degenerate"] = True
        out.append(data)
    return out


def fano_report(hc: FactoredHC, inp: dict, provenance: list[str]) -> dict:
    red = reducibility(hc)
    p = hc.expanded
    rep = {
        "command": "fano",
        "input": inp,
        "n": hc.n,
        "r": hc.r,
        "iota": hc.iota,
        "polynomial": {
            "expanded": p.to_json(),
            "factored": {
                "kind": "fano",
                "z": {"r": hc.r, "iota": hc.iota},
                "q": hc.q.to_json(),
                "phi": hc.phi.to_json(),
                "text": factored_q(red.q_factorization),
                "latex": factored_q(red.q_factorization, latex=True),
            },
        },
        "centered": {
            "polynomial": _json_uv(centered(p)),
            "text": centered_factored(hc),
            "latex": centered_factored(hc, latex=True),
        },
        "degree": {"H^n": str(hc.degree), "(-K)^n": str(hc.anticanonical_degree)},
        "reducibility": red.to_json(),
        "lines": [ln.to_json() for ln in rational_lines(hc)],
        "serre": serre_check(p, hc.n),
        "matches": _matches(p, hc.n, hc.r),
        "provenance": provenance,
        "notes": [],
    }
    if hc.iota == hc.n - 1 and hc.n >= 3:
        rep["geography"] = geography(hc.n, int(hc.degree), hc.r).to_json()
    return rep


def _json_uv(p: BiPoly) -> dict:
    return p.to_json(("u", "v"))


def poly_report(command: str, p: BiPoly, n: int, r: int, inp: dict, provenance: list[str],
                residual: BiPoly | None = None, fiber: tuple[int, int] | None = None) -> dict:
    rep = {
        "command": command,
        "input": inp,
        "n": n,
        "r": r,
        "polynomial": {"expanded": p.to_json()},
        "centered": {"polynomial": _json_uv(centered(p))},
        "serre": serre_check(p, n),
        "matches": _matches(p, n, r),
        "provenance": provenance,
        "notes": [],
    }
    if residual is not None and fiber is not None:
        fr, fi = fiber
        rep["polynomial"]["factored"] = {
            "kind": "fibration",
            "R": residual.to_json(),
            "fiber": {"r": fr, "iota": fi},
            "text": f"[{residual.to_str()}] * {fiber_factor_str(fr, fi)}".rstrip(" *"),
            "latex": f"\\left[{poly_str(residual, latex=True)}\\right]{fiber_factor_str(fr, fi, True)}",
        }
    return rep


def expand_factored(fact: dict) -> BiPoly:
    """Multiply a report's factored form back out."""
    if fact["kind"] == "fano":
        q = UniPoly.from_json(fact["q"])
        return q.compose_linear(fact["z"]["r"], fact["z"]["iota"])
    R = BiPoly.from_json(fact["R"])
    return R * fib.fiber_product(fact["fiber"]["r"], fact["fiber"]["iota"])


# ---------------------------------------------------------------------------
# rendering


def render(rep, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep, indent=2, ensure_ascii=False)
    if isinstance(rep, list):
        return _render_table(rep, fmt)
    return _render_latex(rep) if fmt == "latex" else _render_text(rep)


def _render_text(rep: dict) -> str:
    out = []
    p = BiPoly.from_json(rep["polynomial"]["expanded"])
    fact = rep["polynomial"].get("factored")
    head = f"{rep['command']}: n={rep['n']}, r={rep['r']}"
    if "iota" in rep:
        head += f", index={rep['iota']}"
    out.append(head)
    if rep.get("record"):
        rec = rep["record"]
        out.append(f"  record {rec.get('id')}: (-K)^n = {rec['degree']}, Vol(Q) = {rec['vol']}")
    if fact and fact["kind"] == "fano":
        z = fact["z"]
        rr = "" if z["r"] == 1 else str(z["r"])
        out.append(f"  p = {fact['text']},  z = {rr}y - {z['iota']}x")
    elif fact:
        out.append(f"  p = {fact['text']}")
    out.append(f"  expanded: {p.to_str()}")
    cen = rep.get("centered", {})
    if "text" in cen:
        out.append(f"  centered (u = x - 1/2, v = y): {cen['text']}")
    else:
        out.append(f"  centered (u = x - 1/2, v = y): {BiPoly.from_json(cen['polynomial']).to_str(('u', 'v'))}")
    if "reducibility" in rep:
        red = rep["reducibility"]
        yn = lambda b: "yes" if b else "no"  # noqa: E731
        out.append(f"  totally reducible over C: {yn(red['over_C'])}, R: {yn(red['over_R'])}, "
                   f"Q: {yn(red['over_Q'])}")
    if "geography" in rep:
        g = rep["geography"]
        out.append(f"  h = {g['h']}; G over R: {g['G_class_R']}, over Q: {g['G_class_Q']}")
        out.append(f"  Gamma_R = {g['arrangement_R']};  Gamma_Q = {g['arrangement_Q']}")
    if "coefficients" in rep:
        cs = ", ".join(f"{k}={v}" for k, v in rep["coefficients"].items())
        out.append(f"  {cs}")
    if "relations" in rep:
        ok = all(rep["relations"].values())
        out.append(f"  symmetry relations: {'all hold' if ok else 'VIOLATED'}")
    if "cross_check" in rep:
        out.append(f"  cross-check ({rep['cross_check']['path']}): "
                   f"{'equal' if rep['cross_check']['equal'] else 'MISMATCH'}")
    out.append(f"  Serre symmetry: {'ok' if rep['serre'] else 'FAILS'}")
    if rep["matches"]:
        for m in rep["matches"]:
            params = ", ".join(f"{k}={v}" for k, v in m["params"].items())
            tag = "  [t = 0, polynomial coincidence only]" if m.get("degenerate") else ""
            out.append(f"  match: {m['family']} ({params}){tag}")
    else:
        out.append("  match: none")
    for note in rep.get("notes", []):
        out.append(f"  note: {note}")
    return "\n".join(out)


def _render_latex(rep: dict) -> str:
    fact = rep["polynomial"].get("factored")
    lines = []
    if rep.get("centered", {}).get("latex"):
        lines.append(f"p\\big(\\tfrac{{1}}{{2}}+u,v\\big) = {rep['centered']['latex']}")
    if fact:
        lines.append(f"p(x,y) = {fact['latex']}")
    else:
        lines.append(f"p(x,y) = {poly_str(BiPoly.from_json(rep['polynomial']['expanded']), latex=True)}")
    if "geography" in rep:
        g = rep["geography"]
        h = Fraction(g["h"])
        n, r = rep["n"], rep["r"]
        rr = "" if r == 1 else str(r)
        lines.append(f"G:\\ \\left[{n - 1}u-{rr}v\\right]^2-{fmt_rational(h, True)}=0")
        lines.append(f"\\Gamma_{{\\mathbb{{R}}}} = {_tex_arr(g['arrangement_R'])},\\quad "
                     f"\\Gamma_{{\\mathbb{{Q}}}} = {_tex_arr(g['arrangement_Q'])}")
    return "\n".join(f"$${ln}$$" for ln in lines)


def _tex_arr(s: str) -> str:
    import re

    s = s.replace("lambda'", "\\lambda'").replace("lambda", "\\lambda")
    return re.sub(r"l(\d+)", r"\\ell_{\1}", s)


def _render_table(rows: list[dict], fmt: str) -> str:
    if fmt == "latex":
        body = [r"\begin{tabular}{ccccccc}", r"No. & $n$ & $\iota_X$ & $p$ & $(-K_X)^n$ & Vol$(Q)$ & $\mathbb{Q}$-red. \\ \hline"]
        for row in rows:
            if "error" in row:
                body.append(f"{row['id']} & \\multicolumn{{6}}{{l}}{{{row['error']}}} \\\\")
                continue
            body.append(f"{row['id']} & {row['n']} & {row['iota']} & ${row['p_latex']}$ & "
                        f"{row['degree']} & {row['vol']} & {'yes' if row['over_Q'] else 'no'} \\\\")
        body.append(r"\end{tabular}")
        return "\n".join(body)
    header = f"{'No.':>4} {'n':>2} {'iota':>4} {'(-K)^n':>7} {'Vol':>4}  {'Q-red':5}  p"
    out = [header]
    for row in rows:
        if "error" in row:
            out.append(f"{row['id']!s:>4}  error: {row['error']}")
            continue
        line = (f"{row['id']!s:>4} {row['n']:>2} {row['iota']:>4} {row['degree']:>7} {row['vol']:>4}  "
                f"{'yes' if row['over_Q'] else 'no':5}  {row['p']}")
        if row.get("discrepancy"):
            line += f"   [printed: {row['printed_p']}]"
        out.append(line)
    return "\n".join(out)


# ---------------------------------------------------------------------------
# subcommands


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace(" ", "").split(",") if v)
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def cmd_fano(args) -> dict:
    if args.kind and args.h0:
        raise UsageError("give either --kind or --h0, not both")
    if not args.kind and not args.h0:
        raise UsageError("one of --kind or --h0 is required")
    try:
        if args.kind:
            kind = FanoKind.parse(args.kind)
            hc = closed_form(kind, args.n, args.r, args.d)
            if args.index is not None and args.index != hc.iota:
                raise UsageError(f"--index {args.index} contradicts {kind.value} (index {hc.iota})")
            inp = {"n": args.n, "kind": kind.value, "r": args.r}
            if args.d is not None:
                inp["d"] = args.d
            prov = [f"closed form for {kind.value}"]
        else:
            if args.index is None:
                raise UsageError("--h0 needs --index")
            fi = FanoInput(args.n, args.index, args.r, _ints(args.h0))
            hc = fano_hc(fi)
            inp = fi.to_json()
            prov = ["interpolation of h0(sH), s = 0..c, through the Vandermonde system"]
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return fano_report(hc, inp, prov)


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")


def cmd_fibration(args) -> dict:
    if args.base == "surface":
        if args.family != "scroll":
            raise UsageError("over a surface only --family scroll is provided")
        _need(args, "n", "chi0", "chiL", "k", "h")
        try:
            inp = fib.SurfaceScrollInput(args.n, args.chi0, args.chiL, args.k, args.h)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        p = fib.scroll_over_surface(inp)
        R = fib._scroll_surface_R(inp.n, inp.chi0, inp.chiL, inp.k, inp.h)
        rep = poly_report("fibration", p, inp.n, 1, {"base": "surface", "family": "scroll"} | inp.to_json(),
                          ["closed form for scrolls over a surface"], R, (1, inp.n - 1))
        rep["coefficients"] = {k: str(v) for k, v in fib.scroll_surface_coefficients(
            inp.n, inp.chi0, inp.chiL, inp.k, inp.h).items()}
        vanish = fib.mixed_intersection(p, inp.n, 1, inp.n - 1, 3)
        rep["vanishing"] = {"(K+(n-1)L)^3 L^(n-3)": str(vanish)}
        if args.cross_check:
            s = args.s
            try:
                chain = fib.scroll_over_surface_chain(inp, s)
            except fib.RecurrenceError as exc:
                raise MathFailure(f"chain solve failed: {exc}", rep) from None
            other = chain[-1] * fib.fiber_product(1, inp.n - 1)
            rep["cross_check"] = {"path": f"two-level chain with s={s}", "equal": other == p,
                                  "other": other.to_json()}
            rep["provenance"].append(f"chain solve through a curve section in |{s}A|")
            if other != p:
                raise MathFailure("cross-check mismatch", rep)
        return rep

    fam = args.family
    try:
        cin = fib.CurveFibrationInput(fam, args.n, args.r, args.g if args.g is not None else 0,
                                      args.d, args.e, args.a, args.b, args.delta, args.t, args.chi)
        p = cin.build()
    except fib.InconsistentInvariants as exc:
        raise MathFailure(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    if fam == "scroll":
        fiber = (cin.r, cin.n)
    elif fam == "quadric":
        fiber = (cin.r, cin.n - 1)
    else:
        fiber = (1, cin.n - 2)
    prod = fib.fiber_product(*fiber)
    R = _divide_exact(p, prod)
    rep = poly_report("fibration", p, cin.n, cin.r, {"base": "curve"} | cin.to_json(),
                      [f"closed form for {fam} fibrations over a curve"], R, fiber)
    if fam == "delpezzo":
        cs = fib.delpezzo_coefficients(cin.n, cin.g, cin.d, cin.delta, cin.t)
        rep["coefficients"] = {f"c{i}{j}": str(v) for (i, j), v in sorted(cs.items(), reverse=True)}
        rep["chi"] = str(fib.delpezzo_chi(cin.n, cin.g, cin.d, cin.delta, cin.t))
        c = cs
        rep["relations"] = {
            "c30 = 4c00 + 2c10": c[(3, 0)] == 4 * c[(0, 0)] + 2 * c[(1, 0)],
            "c21 = -c11": c[(2, 1)] == -c[(1, 1)],
            "c12 = -2c02": c[(1, 2)] == -2 * c[(0, 2)],
            "c20 = -6c00 - 3c10": c[(2, 0)] == -6 * c[(0, 0)] - 3 * c[(1, 0)],
        }
        if not all(rep["relations"].values()):
            raise MathFailure("symmetry relations violated", rep)
    if fam == "quadric":
        rep["t"] = str(fib.quadric_t(cin.n, cin.r, cin.g, cin.e, cin.a, cin.b))
    if args.cross_check:
        try:
            other = cin.cross_check()
        except (fib.RecurrenceError, fib.DegeneratePolarization) as exc:
            raise MathFailure(f"cross-check path failed: {exc}", rep) from None
        path = {"scroll": "fibre recurrence", "delpezzo": "fibre recurrence",
                "quadric": "fibre recurrence" if cin.r == 1 else "change of polarization"}[fam]
        rep["cross_check"] = {"path": path, "equal": other == p, "other": other.to_json()}
        rep["provenance"].append(path)
        if other != p:
            raise MathFailure("cross-check mismatch", rep)
    return rep


def _divide_exact(p: BiPoly, f: BiPoly) -> BiPoly:
    """Quotient ``p / f`` for a product of linear forms ``f`` known to divide ``p``."""
    if f.is_constant():
        return p / f.coeff(0, 0)
    from .exactalg import LinearSystem, monomials, solve_linear

    deg = p.degree - f.degree
    monos = monomials(deg)
    images = [BiPoly({m: 1}) * f for m in monos]
    keys = sorted(set(p.terms) | {k for im in images for k in im.terms})
    res = solve_linear(LinearSystem([[im.coeff(*k) for im in images] for k in keys],
                                    [p.coeff(*k) for k in keys]))
    if res.status != "unique":
        raise ArithmeticError("fibre factor does not divide the polynomial")
    return BiPoly(dict(zip(monos, res.solution)))


def _load_toric(path: str | None) -> tuple[list[ToricFanoRecord], str]:
    if path is None:
        return load_table1(), "bundled table1.json"
    if not os.path.exists(path) and os.path.basename(path) == "table1.json":
        return load_table1(), "bundled table1.json"
    try:
        return load_records(path), path
    except OSError as exc:
        raise ParseFailure(f"{path}: {exc.strerror}") from None
    except ValueError as exc:
        raise ParseFailure(str(exc)) from None


def _printed_check(rec: ToricFanoRecord, hc: FactoredHC) -> tuple[str | None, bool]:
    printed = rec.meta.get("printed_p")
    if not printed:
        return None, False
    try:
        q_print = parse_printed_poly(printed)
    except ValueError:
        return printed, False
    return printed, q_print != hc.q


def _toric_row(row: dict, rec: ToricFanoRecord) -> dict:
    if "error" in row:
        return {"id": row["id"], "error": row["error"]}
    hc, red = row["hc"], row["reducibility"]
    printed, disc = _printed_check(rec, hc)
    out = {
        "id": row["id"], "n": row["n"], "iota": row["iota"], "degree": row["degree"],
        "vol": row["vol"], "p": factored_q(red.q_factorization),
        "p_latex": factored_q(red.q_factorization, latex=True),
        "q": hc.q.to_json(), "over_Q": red.over_Q,
    }
    if printed is not None:
        out["printed_p"] = printed
        out["discrepancy"] = disc
    return out


def cmd_toric(args):
    records, source = _load_toric(args.file)
    if args.sweep:
        by_id = {rec.id: rec for rec in records}
        rows = sweep(records, args.r, args.jobs)
        return [_toric_row(row, by_id[row["id"]]) for row in rows]
    if args.id is None:
        if len(records) != 1:
            raise UsageError("--id is required when the file holds several records (or use --sweep)")
        rec = records[0]
    else:
        found = [rec for rec in records if rec.id == args.id]
        if not found:
            raise UsageError(f"no record with id {args.id} in {source}")
        rec = found[0]
    try:
        hc, red = toric_hc(rec, args.r)
    except NotReflexive as exc:
        raise MathFailure(f"record {rec.id}: not reflexive: {exc}") from None
    inp = {"source": source} | rec.to_json() | {"r": args.r}
    rep = fano_report(hc, inp, ["lattice-point counts of the fundamental polytope", "Vandermonde interpolation"])
    rep["command"] = "toric"
    rep["record"] = {"id": rec.id, "iota": rec.iota, "degree": rec.degree, "vol": rec.vol_primal,
                     "dual": rec.dual.to_json(), "dual_agrees": rec.dual_agrees}
    printed, disc = _printed_check(rec, hc)
    if disc:
        rep["notes"].append(
            f"recorded discrepancy: the source table prints p = {printed}, but lattice-point "
            f"counting gives {factored_q(red.q_factorization)}")
    if rec.dual_agrees is False:
        rep["notes"].append("the supplied dual does not match the computed dual")
    return rep


def _read_poly_file(path: str) -> tuple[BiPoly, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseFailure(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseFailure(f"{path}: line {exc.lineno}: {exc.msg}") from None
    try:
        if isinstance(data, dict) and "polynomial" in data:
            return BiPoly.from_json(data["polynomial"]["expanded"]), data
        return BiPoly.from_json(data), {}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseFailure(f"{path}: malformed polynomial JSON ({exc})") from None


def cmd_classify(args) -> dict:
    p, meta = _read_poly_file(args.poly)
    n = args.n if args.n is not None else meta.get("n")
    r = args.r if args.r is not None else meta.get("r", 1)
    if n is None:
        raise UsageError("--n is required for a bare polynomial")
    rep = poly_report("classify", p, int(n), int(r), {"poly": args.poly, "n": n, "r": r},
                      ["exact comparison against every canonical family"])
    return rep


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    fmt_default = os.environ.get("HILBCURVE_FORMAT", "text")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "latex"), default=None,
                        help=f"output format (default {fmt_default}; env HILBCURVE_FORMAT)")

    ap = _Parser(prog="hilbcurve", description="Exact Hilbert curves of polarized manifolds.",
                 parents=[common])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("fano", parents=[common], help="Fano manifolds with L = rH")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--index", type=int)
    f.add_argument("--r", type=int, default=1)
    f.add_argument("--h0", help="h0(sH) for s = 0..c, comma separated")
    f.add_argument("--kind", choices=[k.value for k in FanoKind])
    f.add_argument("--d", type=int)
    f.set_defaults(func=cmd_fano)

    b = sub.add_parser("fibration", parents=[common], help="Fano fibrations")
    b.add_argument("--base", choices=("curve", "surface"), required=True)
    b.add_argument("--family", choices=("scroll", "quadric", "delpezzo"), required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--r", type=int, default=1)
    for name in ("g", "d", "e", "a", "b", "delta", "t", "chi", "chi0", "k", "h"):
        b.add_argument(f"--{name}", type=int)
    b.add_argument("--chiL", "--chi-l", dest="chiL", type=int)
    b.add_argument("--s", type=int, default=1, help="section multiple for the surface chain")
    b.add_argument("--cross-check", action="store_true")
    b.set_defaults(func=cmd_fibration)

    t = sub.add_parser("toric", parents=[common], help="toric Fano polytope data")
    t.add_argument("--file", help="polytope JSON (default: the bundled table)")
    t.add_argument("--id", type=int)
    t.add_argument("--r", type=int, default=1)
    t.add_argument("--sweep", action="store_true")
    t.add_argument("--jobs", type=int, default=None)
    t.set_defaults(func=cmd_toric)

    c = sub.add_parser("classify", parents=[common], help="recognise a polynomial")
    c.add_argument("--poly", required=True)
    c.add_argument("--n", type=int)
    c.add_argument("--r", type=int)
    c.set_defaults(func=cmd_classify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    fmt = args.format or os.environ.get("HILBCURVE_FORMAT", "text")
    if fmt not in ("text", "json", "latex"):
        print(f"hilbcurve: unknown format {fmt!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rep = args.func(args)
    except UsageError as exc:
        print(f"hilbcurve {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseFailure as exc:
        print(f"hilbcurve {args.command}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except MathFailure as exc:
        print(f"hilbcurve {args.command}: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(render(exc.report, fmt))
        return EXIT_MATH
    print(render(rep, fmt))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
