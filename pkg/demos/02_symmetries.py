"""Which transformations leave the equations alone.

A generator is a symmetry when its prolongation annihilates the equation on
the solution manifold. The engine builds prolongations symbolically and the
test is evaluated at random jets where every t-derivative is eliminated
through the equation itself.
"""

import numpy as np

from lieburgers import symmetry as Sy
from lieburgers.exact import CbkdvCoefficients, ShockSolution, burgers_residual
from lieburgers.modified import differential_representation

print("second prolongation of the projective generator L4:")
for (i, j), sigma in Sy.prolong(Sy.L4, 2).items():
    print(f"  sigma[{'x' * i}{'t' * j}] = {sigma}")


def table(title, gens, target, da=False):
    print(f"\n{title}")
    for gen in gens:
        check = Sy.da_invariance_residual if da else Sy.pde_invariance_residual
        res = check(gen, target, 100, rng=0)
        verdict = "kept" if res.max_ratio <= 1e-8 else "lost"
        print(f"  {gen.name:<4} max|res|/scale = {res.max_ratio:8.1e}   {verdict}")


table("Burgers", Sy.BURGERS_GENERATORS, "burgers")
table("compound Burgers-KdV, generic coefficients",
      (Sy.L1, Sy.L2, Sy.L3, Sy.L4, Sy.L5), CbkdvCoefficients(1.3, 0.7, 0.2, 0.4))

# The FTCS modified equation contains h and tau. Letting the dilatations act
# on them rescues those two, but nothing rescues the boost or the projective map.
ftcs = differential_representation("ftcs")
table("FTCS modified equation",
      Sy.DIFFERENTIAL_APPROXIMATION_GENERATORS + (Sy.L4, Sy.L5), ftcs, da=True)
table("semi-invariant modified equation (C = 0)", Sy.BURGERS_GENERATORS,
      differential_representation("semi"), da=True)

# Finite form: push a shock through each map and check it still solves Burgers.
shock = ShockSolution(nu=0.2)
rng = np.random.default_rng(1)
xs, ts = rng.uniform(-1, 1, 50), rng.uniform(0, 1, 50)
print("\nmapped shock, worst Burgers residual at 50 random points")
for gen, eps in ((Sy.L3, 1.4), (Sy.L4, 0.3), (Sy.L5, 0.5), (Sy.L6, 1.7)):
    field, nu_star = Sy.transform_solution(gen, eps, shock, shock.nu)
    print(f"  {gen.name}: {np.max(np.abs(burgers_residual(field, xs, ts, nu_star))):.1e}")
