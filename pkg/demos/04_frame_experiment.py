"""The same shock seen from three frames moving at 0, 0.25 and 0.5.

Time step and viscosity are fixed in the rest frame, so CFL and Re_h agree
across frames. An exact scheme would not care about the frame; FTCS does,
enough to blow up in the fastest one.
"""

from pathlib import Path

import numpy as np

from lieburgers import experiments as E

here = Path(__file__).parent
config = E.load_config(here / "configs" / "shock.cfg")
print(f"h={config.h:g} tau={config.tau:g} nu={config.nu:g} "
      f"CFL={config.cfl:g} Re_h={config.re_h:g} S={config.s:g}")

series = E.run_frame_experiment(config)
print(f"\n{'scheme':<6} {'frame':<5} {'final L2 error':>15} {'max/median':>11}")
for s in series:
    if s.blew_up:
        print(f"{s.scheme_id.value:<6} {s.frame:<5} {'blow-up at step ' + str(s.blowup_step):>15}")
        continue
    print(f"{s.scheme_id.value:<6} {s.frame:<5} {s.errors[-1]:15.3e} "
          f"{max(s.errors) / np.median(s.errors):11.2f}")

print("\ncross-frame spread of the final error")
for scheme in config.schemes:
    group = [s for s in series if s.scheme_id is scheme]
    print(f"  {scheme.value:<5} {E.spread(group):.3e}")

out = here / config.output
out.parent.mkdir(exist_ok=True)
for path in E.write_csv(series, out, config.merged):
    print("wrote", path.relative_to(here))
