"""How the traditional approximations fail at strong coupling.

Three textbook treatments of the same problem, each broken in its own
way when gamma >> lambda: the naive series diverges secularly, the
second-order memory master equation goes negative, and the time-local
resummation decays monotonically with no trace of the revivals.
"""

import numpy as np

from nml import baselines as bl, kernels, volterra

GAMMA, LAMBDA = 1.0, 0.1
cfg = volterra.SolverConfig(dt=1e-3, t_max=20.0)
exact = volterra.solve_exact(kernels.make_kernel("lorentzian", GAMMA, LAMBDA),
                             cfg)
ts = exact.times

rows = {"exact": exact.population}
for m in ("odp2", "odp6", "gme2", "tcl2", "tcl6"):
    spec = bl.BaselineSpec(m, GAMMA, LAMBDA)
    if m.startswith("odp"):
        rows[m] = bl.odp_population(spec, ts)
    elif m == "gme2":
        rows[m] = bl.gme2_population(spec, ts)
    else:
        rows[m] = bl.tcl_population(spec, ts)

print("population at selected times (gamma=1, lambda=0.1):")
print("t".rjust(5) + "".join(name.rjust(11) for name in rows))
for t in (0, 4, 8, 12, 16, 20):
    i = int(t / cfg.dt)
    print(f"{t:5.1f}" + "".join(f"{rows[name][i]:11.4f}" for name in rows))

print(f"""
failure modes on display:
  - odp2/odp6 exceed 1 and keep growing (odp6 reaches
    {rows['odp6'][-1]:.1f} at t=20): secular divergence;
  - gme2 oscillates at the wrong frequency and dips to
    {rows['gme2'].min():.3f} < 0: populations cannot be negative;
  - tcl2/tcl6 remain monotone ({bool(np.all(np.diff(rows['tcl6']) <= 1e-15))}):
    the revivals of the exact solution are invisible to them.

In the weak-coupling regime (gamma=1, lambda=10) the resummed
master-equation baselines do converge:""")

weak = volterra.solve_exact(kernels.make_kernel("lorentzian", 1.0, 10.0),
                            volterra.SolverConfig(dt=1e-3, t_max=2.0))
for m in ("gme2", "tcl2", "tcl6"):
    spec = bl.BaselineSpec(m, 1.0, 10.0)
    pop = (bl.gme2_population(spec, weak.times) if m == "gme2"
           else bl.tcl_population(spec, weak.times))
    print(f"  {m}: max deviation {np.max(np.abs(pop - weak.population)):.4f}")
