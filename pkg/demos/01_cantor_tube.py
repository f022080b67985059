"""
The Cantor tiling: complex dimensions and the tube formula
===========================================================

The gaps of the middle-thirds Cantor set tile ``[0, 1]``.  Its complex
dimensions sit on one vertical line, and summing their residues rebuilds
the length of the inner eps-neighbourhood of the gaps.
"""

import numpy as np

from fractube import catalog
from fractube.tube import tube_expansion, tube_volume_formula, tube_volume_oracle
from fractube.zeta import complex_dimensions, default_window

entry = catalog.cantor()
m = entry.model
z = m.zeta
print(f"D = {z.D:.12f}   period p = {z.lattice.period:.6f}")

# poles in the band |Im s| <= 20
for c in complex_dimensions(z, default_window(z, 20)):
    print(f"  omega = {c.omega.real:.6f} {c.omega.imag:+.6f}i   residue = {c.residue.real:.6f}")

###############################################################################
# The expansion has one term per pole plus the integer term ``-2 eps``.

exp = tube_expansion(m, 400)
print(f"{len(exp.scaling_terms)} scaling terms, integer terms {exp.integer_terms}")

###############################################################################
# Compare against the exact sum over tiles.  The partial sums ring near the
# kinks of V; Cesaro weights damp that.

eps = np.geomspace(1 / 600, 1 / 6, 8)
oracle = tube_volume_oracle(m, eps)
for avg in ("none", "cesaro"):
    f = tube_volume_formula(m, eps, 400, avg)
    print(f"{avg:>7}: max relative error {np.max(np.abs(f - oracle) / oracle):.2e}")

print("\n   eps        formula       oracle")
f = tube_volume_formula(m, eps, 400, "cesaro")
for e, a, b in zip(eps, f, oracle):
    print(f"{e:.5f}  {a:.10f}  {b:.10f}")
