"""
Hilbert curves of Fano pairs
============================

Walk through the curve of a few Fano pairs: build it from h0 values,
factor it, look at the centered form, and see which families it matches.
"""

# %%
from fractions import Fraction

import numpy as np

from hilbcurve import FanoInput, closed_form, fano_hc, geography, match_canonical, reducibility
from hilbcurve.render import centered_factored, factored_q, poly_str

# %%
# The quadric threefold Q3 with H the hyperplane class: index 3, so only
# h0(O) and h0(H) are needed.
q3 = fano_hc(FanoInput(n=3, iota=3, r=1, h0=(1, 5)))
print(poly_str(q3.expanded))
print("H^n =", q3.degree, " (-K)^n =", q3.anticanonical_degree)

# %%
# Same curve from the closed form.
assert closed_form("quadric", 3, 1).expanded == q3.expanded
print(factored_q(reducibility(q3).q_factorization))

# %%
# A del Pezzo fourfold of degree 6.  Its residual factor is quadratic.
dp = closed_form("delpezzo", 4, 1, 6)
red = reducibility(dp)
print(factored_q(red.q_factorization))
print("split over Q:", red.over_Q, " over R:", red.over_R)
print(centered_factored(dp))

# %%
# Lines and conics through the curve in the (u, v) plane.
geo = geography(4, 6)
print(geo.arrangement("R"))
print(geo.arrangement("Q"))

# %%
# Sample the curve on a small grid, just to see the zero set.
xs = np.arange(-3, 4)
vals = np.array([[float(dp.expanded(Fraction(int(a)), Fraction(int(b)))) for b in xs] for a in xs])
print(np.sign(vals).astype(int))

# %%
# Classification picks up every family that produces the same polynomial.
for m in match_canonical(dp.expanded, 4, 1):
    print(m.family, m.params)
