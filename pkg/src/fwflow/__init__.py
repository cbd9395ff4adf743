"""fwflow: projection-free convex optimization.

Frank-Wolfe, its continuous-time flow, and generalized Runge-Kutta
multistep variants, with feasibility certificates, rate-constant bounds,
and zig-zag diagnostics.
"""

from . import data, diagnostics, geometry, objectives, problems, solvers, tableau

__all__ = [
    "data",
    "diagnostics",
    "geometry",
    "objectives",
    "problems",
    "solvers",
    "tableau",
]

__version__ = "0.1.0"
