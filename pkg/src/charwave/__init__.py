"""charwave: global conservative solutions of the nonlinear variational wave
equation v_tt - c(v)(c(v)v_x)_x + (v + v^3)/2 = 0.

The solution is built in characteristic coordinates, where the equation
becomes a semilinear system with bounded right-hand sides; physical
coordinates are recovered afterwards and every conserved quantity and bound
the construction guarantees can be verified numerically.
"""

from .wavespeed import WaveSpeed, SpeedBounds, eval_c, eval_c_prime, bounds
from .initdata import (
    InitialData, BoundaryCurve, Profile,
    sample_initial, ground_energy, build_boundary_curve,
    make_family, profile_from_csv, reflect_time,
)
from .charsolver import (
    CharGrid, SourceTerms, AprioriReport,
    solve_march, picard_global, apriori_check,
    default_k_weight, domain_for_time,
    CharSolverError, PositivityError, CellDivergenceError, ContractionError,
)
from .physmap import (
    TimeSlice, attach_coords, compatibility_residual,
    extract_time_slice, resample_uniform, jacobian, CompatibilityError,
)
from .diagnostics import (
    EnergyReport, MeasureTable, TestBump,
    energy_physical, energy_forms, closedness_residual, measures,
    interaction_potential, lambda_slope_bound, lipschitz_bound,
    lipschitz_check, holder_check, weak_residual, balance_residuals,
)
from .refsolver import FDState, FDRun, fd_solve, compare, dispersion_fit

__version__ = "0.1.0"
