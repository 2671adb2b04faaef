"""Von Neumann maps in the (CFL, S) plane.

'#' is stable by both the printed conditions and the sampled symbol, 'E' only
by the symbol. The printed Lax-Wendroff conditions turn out to be
conservative; for the semi-invariant scheme they are exact when Omega is small.
"""

import numpy as np

from lieburgers import stability as St

cfl = np.linspace(0.06, 1.2, 20)
s = np.linspace(0.04, 0.8, 20)

for scheme, om in (("ftcs", 0.0), ("lw", 0.0), ("cn", 0.0), ("semi", 0.01)):
    scan = St.scan_stability(scheme, cfl, s, om)
    print(f"\n{scheme} (omega_tau={om}); rows S from 0.04 down to 0.8, columns CFL to 1.2")
    print(scan.render())
    print(f"mismatches {int(scan.mismatch.sum())}, within one cell: "
          f"{scan.agrees_within_one_cell()}")

print()
print(St.check_conditions("ftcs", (0.5, 0.125)))
print(St.check_conditions("semi", (0.5, 0.125), omega_tau=0.01))
