"""
Curves of Fano fibrations
=========================

Scrolls, quadric fibrations and del Pezzo fibrations over curves, checked
against products where the answer is known in closed form.
"""

# %%
from math import factorial

from hilbcurve import BiPoly, delpezzo_fibration, quadric_fibration, scroll_over_curve
from hilbcurve.fibrations import SurfaceScrollInput, fiber_product, scroll_over_surface, scroll_over_surface_chain
from hilbcurve.render import poly_str

x, y = BiPoly.x(), BiPoly.y()

# %%
# P1 x P2 as a scroll over P1.
p = scroll_over_curve(3, 1, 0, 3)
print(poly_str(p))

# %%
# On a product chi is multiplicative and K = K_1 + K_2, so
# chi(xK + yL) = (y - 2x + 1) * C(y - 3x + 2, 2) for this pair.
def binom_poly(v, k):
    out = BiPoly.const(1)
    for i in range(k):
        out = out * (v + (-i))
    return out / factorial(k)


want = (y - 2 * x + 1) * binom_poly(y - 3 * x + 2, 2)
print(p == want)

# %%
# A quadric fibration over an elliptic curve.
qf = quadric_fibration(4, 2, 1, 2, 1, 1)
print(poly_str(qf))

# %%
# A del Pezzo fibration of degree 2 over P1.
dpf = delpezzo_fibration(4, 0, 3, 2, 5)
print(poly_str(dpf))

# %%
# Scrolls over P2: direct formula against the chain of recurrences.  The
# chain returns residual factors level by level, top level last.
inp = SurfaceScrollInput(4, 1, 10, -6, 4)
direct = scroll_over_surface(inp)
levels = scroll_over_surface_chain(inp, s=2)
print(levels[-1] * fiber_product(1, inp.n - 1) == direct)
