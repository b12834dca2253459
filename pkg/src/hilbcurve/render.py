"""Text and LaTeX rendering of polynomials and factored Hilbert curves."""

from __future__ import annotations

from fractions import Fraction

from .exactalg import BiPoly, RootFactorization, UniPoly
from .fanocore import FactoredHC

__all__ = [
    "fmt_rational",
    "poly_str",
    "factored_q",
    "centered_factored",
    "affine_factor",
]


def fmt_rational(c: Fraction, latex: bool = False) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    if latex:
        sign = "-" if c < 0 else ""
        return f"{sign}\\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"
    return f"{c.numerator}/{c.denominator}"


def _signed(c: Fraction, latex: bool) -> str:
    return ("- " if c < 0 else "+ ") + fmt_rational(abs(c), latex)


def poly_str(p: BiPoly, names: tuple[str, str] = ("x", "y"), latex: bool = False) -> str:
    if not latex:
        return p.to_str(names)
    if p.is_zero():
        return "0"
    parts = []
    for (i, j), c in p.items():
        mono = ""
        if i:
            mono += names[0] if i == 1 else f"{names[0]}^{{{i}}}"
        if j:
            mono += names[1] if j == 1 else f"{names[1]}^{{{j}}}"
        mag = abs(c)
        body = mono if (mono and mag == 1) else fmt_rational(mag, True) + mono
        parts.append(("-" if c < 0 else "+") + body)
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


def affine_factor(var: str, const: Fraction, latex: bool = False) -> str:
    """``(var + const)``; ``var`` is already a printable expression."""
    if const == 0:
        return f"({var})"
    sign = "+" if const > 0 else "-"
    return f"({var}{sign}{fmt_rational(abs(const), latex)})"


def _power(body: str, m: int, latex: bool) -> str:
    if m == 1:
        return body
    return f"{body}^{{{m}}}" if latex else f"{body}^{m}"


def _lead(c: Fraction, latex: bool) -> str:
    if c == 1:
        return ""
    if c == -1:
        return "-"
    s = fmt_rational(c, latex)
    return s if latex else s + "*"


def _factor_string(lead: Fraction, linear: list[tuple[str, int]], cofactor: str | None,
                   latex: bool) -> str:
    body = "".join(_power(f, m, latex) for f, m in linear)
    if cofactor:
        body += f"({cofactor})"
    if not body:
        return fmt_rational(lead, latex)
    return _lead(lead, latex) + body


def factored_q(fac: RootFactorization, var: str = "z", latex: bool = False) -> str:
    """``lead (z - z1)^m1 ... (cofactor)``; factors sorted by constant term."""
    linear = [(affine_factor(var, -root, latex), m)
              for root, m in sorted(fac.roots, key=lambda rm: -rm[0])]
    cof = None
    if fac.cofactor.degree >= 1:
        cof = poly_str(BiPoly({(k, 0): c for k, c in enumerate(fac.cofactor.coeffs)}),
                       (var, "_"), latex)
    return _factor_string(fac.lead, linear, cof, latex)


def _slope_var(iota: int, r: int, latex: bool) -> str:
    s = Fraction(iota, r)
    coef = "" if s == 1 else fmt_rational(s, latex)
    if not latex and coef:
        coef += "*"
    return f"v-{coef}u"


def centered_factored(hc: FactoredHC, latex: bool = False) -> str:
    """Factored form in ``(u, v)`` with ``w = v - (iota/r) u``.

    Each rational root ``z0`` of ``q`` contributes ``r (w - (iota/2 + z0)/r)``.
    """
    from .exactalg import rational_roots

    fac = rational_roots(hc.q)
    r, iota = hc.r, hc.iota
    w = _slope_var(iota, r, latex)
    lead = fac.lead
    linear = []
    for root, m in sorted(fac.roots, key=lambda rm: -rm[0]):
        lead *= Fraction(r) ** m
        linear.append((affine_factor(w, -(Fraction(iota, 2) + root) / r, latex), m))
    cof = None
    if fac.cofactor.degree >= 1:
        # cofactor(z) with z = r*w - iota/2, written as a polynomial in w
        sub = fac.cofactor.compose(UniPoly([Fraction(-iota, 2), r]))
        lead *= sub.lead
        sub = sub.monic()
        cof = poly_str(BiPoly({(k, 0): c for k, c in enumerate(sub.coeffs)}), ("(" + w + ")", "_"), latex)
    return _factor_string(lead, linear, cof, latex)


def fiber_factor_str(r: int, iota: int, latex: bool = False) -> str:
    if iota <= 1:
        return ""
    rr = "" if r == 1 else str(r)
    ii = "" if iota == 1 else str(iota)
    if latex:
        return f"\\prod_{{j=1}}^{{{iota - 1}}}({rr}y-{ii}x+j)"
    return f"prod_{{j=1..{iota - 1}}} ({rr}y - {ii}x + j)"
