"""Dynamics of a two-level emitter in structured reservoirs.

Exact memory-kernel integration, two-scale perturbation approximants,
traditional master-equation baselines, and non-Markovianity diagnostics
for the excited-state amplitude C(t).
"""

from .errors import (GrowingEnvelopeError, InstabilityError, ParameterError,
                     SingularityError, UnsupportedKernelError)
from .kernels import (KERNEL_KINDS, KernelTaylor, ReservoirKernel,
                      correlation, make_kernel, spectral_density,
                      taylor_coefficients)
from .volterra import (AmplitudeTrajectory, SolverConfig, TrajectoryParams,
                       closed_form_trajectory, lorentzian_closed_form,
                       solve_exact)
from .multiscale import (MsCoefficients, derive_ms_coefficients, eval_ms0,
                         eval_ms1, gamma_split, ms_singularities,
                         ms_trajectory)
from .baselines import (BaselineSpec, baseline_trajectory, gme2_population,
                        odp_population, tcl_gamma, tcl_population)
from .diagnostics import (ComparisonReport, MasterEqCoefficients, compare,
                          is_markovian, master_coefficients,
                          minimal_evolution_time)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeTrajectory", "BaselineSpec", "ComparisonReport",
    "GrowingEnvelopeError", "InstabilityError", "KERNEL_KINDS",
    "KernelTaylor", "MasterEqCoefficients", "MsCoefficients",
    "ParameterError", "ReservoirKernel", "SingularityError", "SolverConfig",
    "TrajectoryParams", "UnsupportedKernelError", "baseline_trajectory",
    "closed_form_trajectory", "compare", "correlation",
    "derive_ms_coefficients", "eval_ms0", "eval_ms1", "gamma_split",
    "gme2_population", "is_markovian", "lorentzian_closed_form",
    "make_kernel", "master_coefficients", "minimal_evolution_time",
    "ms_singularities", "ms_trajectory", "odp_population",
    "solve_exact", "spectral_density", "taylor_coefficients", "tcl_gamma",
    "tcl_population",
]
