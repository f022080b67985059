"""
A generator that is not monophase
=================================

A 2x2 square with one corner rounded off.  Its tube area changes form at
eps = 1/2, once the erosion front passes the centre of the arc.  Sampling
checks the piecewise table.
"""

import numpy as np

from fractube import catalog
from fractube.geometry2d import montecarlo_tube_area

entry = catalog.pluriphase_square()
shape, rep, published = entry.extras["sampler"], entry.extras["rep"], entry.extras["published"]

eps = np.array([0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 1.0])
ests = montecarlo_tube_area(shape, eps, 2_000_000, seed=0)
print("  eps   sampled          table     printed")
for e, est in zip(eps, ests):
    print(f"{e:5.2f}  {est.estimate:.4f}+-{est.std_error:.4f}  {rep.tube(e):.4f}    {published(e):.4f}")

###############################################################################
# Below 1/2 the printed first branch overshoots; its perimeter term 8 + pi/4
# exceeds the true perimeter 7 + pi/4 of the rounded square.

print(f"perimeter of the shape: {7 + np.pi / 4:.6f}")
