"""The six benchmark configurations as SimSpec builders.

1. steep linear slope, 50 cells, slope parameter alpha in [16, 21]
2. transcritical flow with a shock over a parabolic bump, 200 cells
3. supercritical flow hitting a downward bottom step (depth H_r), probes
   h_l / h_r on each side of the step
4. flow climbing an upward bottom step (depth drops 0.8 -> H_r)
5. shallow layer running up a ramp that starts at x_l and crests at
   x = 4, partially dry initial data
6. supercritical flow down a ramp of height dH over length dl, with a
   smooth stationary exact solution used for convergence studies

All bathymetries are module-level functions bound with ``partial`` so
specs stay picklable. Bottom depth H is positive downward throughout.
"""

from __future__ import annotations

from functools import partial

import numpy as np

from swelab.core import ExtState, PhysConstants, PhysState, exact_smooth_profile, exact_step_state
from swelab.solver import BoundaryCondition, Grid, SimSpec, StopRule

__all__ = ["build_preset", "exact_profile", "DEFAULT_CELLS", "PARAM_DEFAULTS"]

DEFAULT_CELLS = {1: 50, 2: 200, 3: 200, 4: 200, 5: 200, 6: 100}

PARAM_DEFAULTS = {
    1: dict(alpha=16.0),
    2: dict(),
    3: dict(H_r=0.45, q_bc=0.1),
    4: dict(H_r=0.4),
    5: dict(x_l=3.75),
    6: dict(dH=0.3, dl=0.2),
}

_DOMAINS = {1: (0.0, 3.0), 2: (0.0, 25.0), 3: (0.0, 1.0), 4: (0.0, 1.0),
            5: (0.0, 5.0), 6: (0.0, 5.0)}

_STEADY_TOL = 1e-8


def _bathy_slope(x, alpha):
    return (alpha / 100.0) * x


def _bathy_bump(x):
    x = np.asarray(x, float)
    return np.where((x > 8.0) & (x < 12.0), -0.2 + 0.05 * (x - 10.0) ** 2, 0.0)


def _bathy_step(x, H_l, H_r, x_step):
    x = np.asarray(x, float)
    return np.where(x < x_step, H_l, H_r)


def _bathy_ramp_up(x, x_l):
    # depth 1 up to x_l, then a linear rise of the bottom (depth falls
    # to 0.2 at x = 4), flat after
    x = np.asarray(x, float)
    ramp = 1.0 - 0.8 * (x - x_l) / (4.0 - x_l)
    return np.where(x < x_l, 1.0, np.where(x < 4.0, ramp, 0.2))


def _bathy_ramp_down(x, dH, dl):
    x = np.asarray(x, float)
    x_r = 0.2 + dl
    H_r = 0.1 + dH
    if dl == 0.0:
        return np.where(x <= 0.2, 0.1, H_r)
    ramp = 0.1 + (H_r - 0.1) * (x - 0.2) / (x_r - 0.2)
    return np.where(x <= 0.2, 0.1, np.where(x <= x_r, ramp, H_r))


def _ic_const(x, H, h0, q0):
    x = np.asarray(x, float)
    return np.full_like(x, h0), np.full_like(x, q0)


def _ic_waterline(x, H, q0):
    h = np.maximum(np.asarray(H, float) - 0.9, 0.0)
    return h, np.where(h > 0.0, q0, 0.0)


def build_preset(test_id: int, n_cells: int | None = None, **params) -> SimSpec:
    """SimSpec for one benchmark; free parameters as keyword overrides."""
    if test_id not in DEFAULT_CELLS:
        raise ValueError(f"unknown test id {test_id!r}")
    defaults = dict(PARAM_DEFAULTS[test_id])
    unknown = set(params) - set(defaults)
    if unknown:
        raise ValueError(f"test {test_id} takes {sorted(defaults)}, got {sorted(unknown)}")
    p = {**defaults, **params}
    n = int(n_cells) if n_cells is not None else DEFAULT_CELLS[test_id]
    a, b = _DOMAINS[test_id]
    grid = Grid(a, b, n)
    dx = grid.dx

    if test_id == 1:
        alpha = float(p["alpha"])
        if not 0.0 < alpha <= 100.0:
            raise ValueError(f"alpha out of range: {alpha}")
        return SimSpec(
            grid=grid,
            bathymetry=partial(_bathy_slope, alpha=alpha),
            init=partial(_ic_const, h0=0.02, q0=0.01),
            bc_left=BoundaryCondition.both(0.02, 0.01),
            bc_right=BoundaryCondition.open(),
            stop=StopRule(steady_tol=_STEADY_TOL, max_time=200.0),
        )

    if test_id == 2:
        return SimSpec(
            grid=grid,
            bathymetry=_bathy_bump,
            init=partial(_ic_const, h0=0.33, q0=0.18),
            bc_left=BoundaryCondition.discharge(0.18),
            bc_right=BoundaryCondition.depth(0.33),
            stop=StopRule(steady_tol=_STEADY_TOL, max_time=600.0),
        )

    if test_id == 3:
        H_r = float(p["H_r"])
        if not 0.0 < H_r <= 1.0:
            raise ValueError(f"H_r out of range: {H_r}")
        return SimSpec(
            grid=grid,
            bathymetry=partial(_bathy_step, H_l=0.1, H_r=H_r, x_step=0.5),
            init=partial(_ic_const, h0=0.1, q0=0.15),
            bc_left=BoundaryCondition.both(0.1, float(p["q_bc"])),
            bc_right=BoundaryCondition.open(),
            stop=StopRule(steady_tol=_STEADY_TOL, max_time=100.0),
            probes=(("h_l", 0.5 - 5 * dx), ("h_r", 0.5 + 5 * dx)),
        )

    if test_id == 4:
        H_r = float(p["H_r"])
        if not 0.0 < H_r <= 1.0:
            raise ValueError(f"H_r out of range: {H_r}")
        return SimSpec(
            grid=grid,
            bathymetry=partial(_bathy_step, H_l=0.8, H_r=H_r, x_step=0.5),
            init=partial(_ic_const, h0=0.1, q0=0.15),
            bc_left=BoundaryCondition.both(0.1, 0.15),
            bc_right=BoundaryCondition.open(),
            stop=StopRule(steady_tol=_STEADY_TOL, max_time=100.0),
            probes=(("h_l", 0.5 - 5 * dx), ("h_r", 0.5 + 5 * dx)),
        )

    if test_id == 5:
        x_l = float(p["x_l"])
        if not 0.0 < x_l < 4.0:
            raise ValueError(f"x_l must lie in (0, 4), got {x_l}")
        return SimSpec(
            grid=grid,
            bathymetry=partial(_bathy_ramp_up, x_l=x_l),
            init=partial(_ic_waterline, q0=0.9),
            bc_left=BoundaryCondition.both(0.1, 0.9),
            bc_right=BoundaryCondition.open(),
            stop=StopRule(final_time=2.5),
            probes=(("h_l", x_l - 5 * dx), ("h_r", 4.0 + 5 * dx)),
        )

    # test 6
    dH = float(p["dH"])
    dl = float(p["dl"])
    if dH < 0 or dl < 0:
        raise ValueError("dH and dl must be nonnegative")
    return SimSpec(
        grid=grid,
        bathymetry=partial(_bathy_ramp_down, dH=dH, dl=dl),
        init=partial(_ic_const, h0=0.5, q0=1.2),
        bc_left=BoundaryCondition.both(0.5, 1.2),
        bc_right=BoundaryCondition.open(),
        stop=StopRule(steady_tol=_STEADY_TOL, max_time=60.0),
    )


def exact_profile(test_id: int, x, c: PhysConstants | None = None, **params):
    """Exact stationary depth at positions x, where one is known.

    Test 3/4: the stationary contact linking the inlet state to the
    far side of the step. Test 6: the smooth stationary profile sharing
    the inlet Riemann invariants.
    """
    if c is None:
        c = PhysConstants()
    x = np.asarray(x, float)
    p = {**PARAM_DEFAULTS[test_id], **params}
    if test_id in (3, 4):
        H_l = 0.1 if test_id == 3 else 0.8
        q = float(p["q_bc"]) if test_id == 3 else 0.15
        W_l = ExtState(PhysState(0.1, q), H_l)
        right = exact_step_state(W_l, float(p["H_r"]), c)
        return np.where(x < 0.5, 0.1, right.h)
    if test_id == 6:
        inlet = ExtState(PhysState(0.5, 1.2), 0.1)
        bathy = partial(_bathy_ramp_down, dH=float(p["dH"]), dl=float(p["dl"]))
        return exact_smooth_profile(bathy, inlet, x, c).h
    raise ValueError(f"no exact profile for test {test_id}")
