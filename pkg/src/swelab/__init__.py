"""1D shallow-water finite-volume laboratory.

First-order well-balanced source-term treatments (Roe upwinding, the
FORCE/GFORCE centred-flux family, hydrostatic reconstruction and a
step-aware modification of it), exact stationary-solution oracles,
entropy diagnostics and a benchmark harness.
"""

from swelab.core import (
    PhysConstants,
    PhysState,
    ExtState,
    EntropyValues,
    physical_flux,
    eigenvalues,
    froude_squared,
    riemann_invariant,
    entropy_pair,
    exact_step_state,
    exact_smooth_profile,
)
from swelab.solver import Grid, SchemeConfig, BoundaryCondition, SimSpec, SimState, run

__all__ = [
    "PhysConstants",
    "PhysState",
    "ExtState",
    "EntropyValues",
    "physical_flux",
    "eigenvalues",
    "froude_squared",
    "riemann_invariant",
    "entropy_pair",
    "exact_step_state",
    "exact_smooth_profile",
    "Grid",
    "SchemeConfig",
    "BoundaryCondition",
    "SimSpec",
    "SimState",
    "run",
]
