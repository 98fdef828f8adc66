"""Steady 2-D lid-driven cavity flow in streamfunction-vorticity form.

Successive over-relaxation on second-order central differences, residual
monitoring, and verification diagnostics (continuity, vortex census,
core vorticity, centerline profiles, cell Peclet number).
"""

from .diagnostics import (
    FlowRateReport, PecletReport, VortexRecord, centerline_profiles,
    continuity_check, core_vorticity_gap, detect_vortices, peclet_report,
    simpson,
)
from .errors import (
    BadSampleCount, BoundaryIndex, Diverged, FormatError, NoPrimaryVortex,
    NotConverged, RejectedGridSize, UsageError,
)
from .fields import (
    BoundarySpec, FlowState, Grid, apply_boundary, jensen_wall_vorticity,
    make_grid, omega_residual_at, psi_residual_at, velocity_u, velocity_v,
)
from .solver import (
    ResidualTriad, SolveOutcome, SolverConfig, compute_residuals,
    continuation_sweep, iterate, solve, sweep_omega, sweep_psi,
)

__version__ = "0.1.0"
