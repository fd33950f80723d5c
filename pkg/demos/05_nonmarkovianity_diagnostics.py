"""Reading non-Markovianity off a trajectory.

The exact master equation behind any amplitude trajectory has a
time-dependent decay rate Gamma(t) and shift S(t); the evolution is
Markovian exactly when Gamma stays nonnegative.  Strong coupling
produces intervals of negative rate (energy flowing back) separated by
genuine singularities at the population zeros.
"""

from nml import diagnostics as dg, kernels, volterra

cfg = volterra.SolverConfig(dt=1e-3, t_max=30.0)

print("strong coupling (gamma=1, lambda=0.1):")
strong = volterra.solve_exact(kernels.make_kernel("lorentzian", 1.0, 0.1), cfg)
coeffs = dg.master_coefficients(strong)
markovian, intervals = dg.is_markovian(coeffs, tol=1e-6)
print(f"  markovian: {markovian}")
print(f"  singularities (population zeros): "
      + ", ".join(f"{s:.4f}" for s in coeffs.singularities))
print(f"  negative-rate intervals: "
      + ", ".join(f"({a:.2f}, {b:.2f})" for a, b in intervals))
print(f"  minimal evolution time (first orthogonal state): "
      f"{dg.minimal_evolution_time(strong):.5f}")

print("\nweak coupling (gamma=0.04, lambda=0.1):")
weak = volterra.solve_exact(kernels.make_kernel("lorentzian", 0.04, 0.1),
                            volterra.SolverConfig(dt=5e-3, t_max=100.0))
markovian, intervals = dg.is_markovian(dg.master_coefficients(weak), tol=1e-6)
print(f"  markovian: {markovian}, negative intervals: {intervals}")
print(f"  minimal evolution time: {dg.minimal_evolution_time(weak)}"
      " (never reaches the orthogonal state)")

print("\ncomparing approximants against the exact run (strong coupling):")
from nml import multiscale as ms  # noqa: E402

kern = kernels.make_kernel("lorentzian", 1.0, 0.1)
for order in (ms.MS0, ms.MS1):
    traj = ms.ms_trajectory(kern, order, cfg)
    report = dg.compare(traj, strong)
    print(f"  {order}: Linf = {report.linf_population:.4f}, "
          f"l2 = {report.l2_population:.4f}, "
          f"t_hat rel err = {report.t_hat_rel_error:.4f}")
