"""starphase: phase-plane toolkit for integrated-density star models.

Analyses the planar system x' = y - x, y' = a(x) y - b(x) y^2 for four
coefficient families from self-gravitating matter models: Lyapunov
function construction, stationary-point stability, heteroclinic orbit
shooting, and the analytic bound on the orbit's x extent that yields
critical mass-radius ratios.
"""

__version__ = "0.1.0"

from .astro import (MassRadiusTable, PhysicalProfile, mass_radius_table,
                    to_physical)
from .bounds import (BoundReport, KappaConstants, bound_X, closed_form_X,
                     excess_E, invert_H, kappa_constants, kappa_sweep)
from .errors import (ConvergenceError, DomainError, HypothesisError,
                     StarphaseError)
from .lambertw import lambert_w
from .lyapunov import (H, LevelSetGrid, level_set_grid, lyapunov_derivative,
                       lyapunov_gradient, lyapunov_value)
from .models import (EquilibriumData, Family, ModelSpec, SystemModel,
                     equilibrium, eval_field, find_w, find_x0, find_z,
                     make_model, model, r_factor)
from .stability import (StabilityReport, jacobian_fd, linearize_interior,
                        linearize_origin, stability_report)
from .trajectory import (IntegratorConfig, Trajectory, TrapRegionReport,
                         check_trap_region, isocline_x, shoot_heteroclinic,
                         verify_lyapunov_monotone)

__all__ = [
    "BoundReport", "ConvergenceError", "DomainError", "EquilibriumData",
    "Family", "H", "HypothesisError", "IntegratorConfig", "KappaConstants",
    "LevelSetGrid", "MassRadiusTable", "ModelSpec", "PhysicalProfile",
    "StabilityReport", "StarphaseError", "SystemModel", "Trajectory",
    "TrapRegionReport", "bound_X", "check_trap_region", "closed_form_X",
    "equilibrium", "eval_field", "excess_E", "find_w", "find_x0", "find_z",
    "invert_H", "isocline_x", "jacobian_fd", "kappa_constants",
    "kappa_sweep", "lambert_w", "level_set_grid", "linearize_interior",
    "linearize_origin", "lyapunov_derivative", "lyapunov_gradient",
    "lyapunov_value", "make_model", "mass_radius_table", "model",
    "r_factor", "shoot_heteroclinic", "stability_report", "to_physical",
    "verify_lyapunov_monotone",
]
