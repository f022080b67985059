"""
Log-periodic oscillations in the Sierpinski gasket tube
========================================================

For a lattice tiling ``V(eps) eps**(D-2)`` is not constant as eps -> 0 but
oscillates periodically in ``log eps``.  That is why lattice tilings are
not Minkowski measurable.
"""

import numpy as np

from fractube import catalog
from fractube.tube import measurability_report, tube_volume_oracle

m = catalog.sierpinski().model
D = m.zeta.D
g = m.reps[0].g

# strip the integer terms and rescale by eps**(D-2)
eps = g * np.exp(-np.linspace(4, 4 + 2 * np.log(2), 13))  # two periods in log eps
v = tube_volume_oracle(m, eps)
scaled = (v - 1.5 * np.sqrt(3) * eps ** 2 + 3 * eps) * eps ** (D - 2)
for e, s in zip(eps, scaled):
    print(f"eps = {e:.3e}   V eps^(D-2) = {s:.8f}")
print(f"one period later the value repeats: {scaled[0]:.10f} vs {scaled[6]:.10f}")

###############################################################################
# The mean of that periodic factor is the coefficient of the real pole D.

rep = measurability_report(m)
print(rep.to_dict())
print(f"sample mean over a period {scaled[:6].mean():.6f}; D coefficient {rep.content_or_average:.6f}")
