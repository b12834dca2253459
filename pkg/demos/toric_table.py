"""
Toric Fano input data
=====================

Read reflexive polytopes, recover index and degree from lattice-point
counts, and tabulate the factored curves.
"""

# %%
from hilbcurve import LatticePolytope, fano_index, load_table1, sweep, toric_hc
from hilbcurve.render import factored_q
from hilbcurve.toric import dual_polytope, lattice_point_array, normalized_volume, parse_printed_poly

# %%
# P2: the fan polytope is the triangle with vertices e1, e2, -e1-e2.
tri = LatticePolytope([[1, 0], [0, 1], [-1, -1]])
dual = dual_polytope(tri)
print(dual.vertices)
print("lattice points of the dual:", len(lattice_point_array(dual)))
print("normalized volume:", normalized_volume(dual))
print("index:", fano_index(dual)[0])

# %%
records = load_table1()
records_by_id = {rec.id: rec for rec in records}
rows = sweep(records)
for row in rows:
    q = factored_q(row["reducibility"].q_factorization)
    printed = records_by_id[row["id"]].meta.get("printed_p")
    flag = f"  (printed: {printed})" if printed and parse_printed_poly(printed) != row["hc"].q else ""
    print(f'{row["id"]:>3} n={row["n"]} iota={row["iota"]} p = {q}{flag}')

# %%
# One record in detail.
hc, red = toric_hc(records[3])
print(hc.phi, red.over_Q)
