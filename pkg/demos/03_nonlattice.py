"""
A nonlattice spray: certified root finding
==========================================

With ratios 1/2 and 1/3 the logarithms are rationally independent, so the
poles of the scaling zeta function scatter quasi-periodically.  Newton's
method finds them and the argument principle certifies that none were
missed.
"""

from fractube import catalog
from fractube.geometry2d import square
from fractube.ifs import GeneratorSpec, SelfSimilarSystem
from fractube.tube import TilingModel, measurability_report, tube_volume_formula, tube_volume_oracle
from fractube.zeta import Window, argument_principle_count, complex_dimensions_nonlattice

sys = SelfSimilarSystem((0.5, 1 / 3), 2, (GeneratorSpec(polygon=square(1.0)),))
m = TilingModel.from_system(sys)
z = m.zeta
print(f"lattice structure: {z.lattice}; D = {z.D:.10f}; all poles have Re s >= {z.strip_lower_bound():.6f}")

win = Window(-2, 1, 40, 0)
roots = complex_dimensions_nonlattice(z, win)
print(f"Newton found {len(roots)} poles; the argument principle counts {argument_principle_count(z, win):.8f}")
for c in roots:
    print(f"  {c.omega.real:+.8f} {c.omega.imag:+.8f}i")

print(measurability_report(m, 200).to_dict())

###############################################################################
# A Koch-like curve with a generic apex ``xi`` is nonlattice too; its
# tube formula still matches the tile sum.

k = catalog.koch_nonlattice(0.4 + 0.3j).model
for eps in (1e-4, 1e-3, 1e-2):
    print(f"eps={eps:g}: formula {tube_volume_formula(k, eps, 300, 'cesaro'):.10f}  oracle {tube_volume_oracle(k, eps):.10f}")
