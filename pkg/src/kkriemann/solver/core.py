"""Lax-Friedrichs finite-volume solver for the transformed system.

The update is

    H_i <- (H_{i-1} + H_{i+1}) / 2 - dt / (2 dx) (G_{i+1} - G_{i-1})

with G evaluated at the current time and dt chosen so that
lambda_max * dt / dx equals the requested Courant number (at most 1/2).
The source never enters the update; it only shifts the flux through I(t).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np

from ..errors import ValidationError, ZeroWaveSpeed
from ..model import VACUUM_FLOOR, State, SystemParams, eigenvalues
from ..scenario import Scenario
from . import backend

RENORM_EVERY = 100
RENORM_TOL = 1e-7
RENORM_MIN_RUN = 5
# runs touching this density are vacuum, not plateaus, and are left alone
RENORM_DRY = 10 * VACUUM_FLOOR
CFL_MAX = 0.5


@dataclass(frozen=True)
class Grid:
    x0: float
    dx: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 3:
            raise ValidationError("grid needs at least 3 cells")
        if not self.dx > 0:
            raise ValidationError("dx must be positive")

    @classmethod
    def centered(cls, n_cells: int, dx: float = 1.0) -> "Grid":
        """Grid on [-n dx / 2, n dx / 2] with the origin on a cell interface."""
        n = n_cells + (n_cells % 2)
        return cls(-0.5 * n * dx, dx, n)

    @property
    def centers(self) -> np.ndarray:
        return self.x0 + (np.arange(self.n_cells) + 0.5) * self.dx


@dataclass(frozen=True)
class Field:
    grid: Grid
    rho: np.ndarray
    m: np.ndarray
    t: float = 0.0
    step_count: int = 0

    @classmethod
    def riemann(cls, grid: Grid, left: State, right: State) -> "Field":
        x = grid.centers
        rho = np.where(x < 0, left.rho, right.rho).astype(float)
        m = np.where(x < 0, left.rho * left.u_tilde, right.rho * right.u_tilde).astype(float)
        m[rho <= VACUUM_FLOOR] = 0.0
        return cls(grid, rho, m)

    @property
    def u_tilde(self) -> np.ndarray:
        wet = self.rho > VACUUM_FLOOR
        return np.where(wet, self.m / np.where(wet, self.rho, 1.0), 0.0)


@dataclass(frozen=True)
class Snapshot:
    t: float
    step: int
    x: np.ndarray
    rho: np.ndarray
    u_tilde: np.ndarray
    u_phys: np.ndarray

    @property
    def xt(self) -> np.ndarray:
        if self.t == 0:
            return np.full_like(self.x, np.nan)
        return self.x / self.t

    @classmethod
    def of(cls, field: Field, params: SystemParams) -> "Snapshot":
        u = field.u_tilde
        return cls(field.t, field.step_count, field.grid.centers.copy(),
                   field.rho.copy(), u, u + params.I(field.t))


def max_wave_speed(field: Field, params: SystemParams, kernels=None) -> float:
    k = kernels or backend.kernels
    return k.max_speed(field.rho, field.m, params.I(field.t), params.a_exp,
                       params.rho_bar, VACUUM_FLOOR)


def llf_step(field: Field, params: SystemParams, cfl_target: float = 0.45,
             dt_max: Optional[float] = None, periodic: bool = False,
             kernels=None):
    """Advance one step; returns (new field, dt).

    dt = cfl_target * dx / lambda_max, shortened to dt_max when given.
    """
    if not 0 < cfl_target <= CFL_MAX:
        raise ValidationError(f"cfl_target={cfl_target} violates 0 < cfl <= 0.5")
    k = kernels or backend.kernels
    I = params.I(field.t)
    lam = k.max_speed(field.rho, field.m, I, params.a_exp, params.rho_bar, VACUUM_FLOOR)
    if lam > 0:
        dt = cfl_target * field.grid.dx / lam
        if dt_max is not None:
            dt = min(dt, dt_max)
    elif dt_max is not None:
        dt = dt_max
    else:
        raise ZeroWaveSpeed("all wave speeds vanish and no dt_max was given")
    rho, m = k.llf_update(field.rho, field.m, I, params.a_exp, params.rho_bar,
                          VACUUM_FLOOR, dt / field.grid.dx, periodic)
    return replace(field, rho=rho, m=m, t=field.t + dt, step_count=field.step_count + 1), dt


def renormalize(rho: np.ndarray, m: np.ndarray, tol: float = RENORM_TOL,
                min_run: int = RENORM_MIN_RUN, dry: float = RENORM_DRY, kernels=None):
    """Flatten every maximal run of >= min_run cells whose total variation in
    both components stays below tol; each run is replaced by its mean.

    A run whose density dips below ``dry`` is kept as is.  Averaging there
    would carry the tiny residual mass of an opening vacuum back into its
    centre every hundred steps and the vacuum would never empty.
    """
    k = kernels or backend.kernels
    return k.renormalize(np.ascontiguousarray(rho, dtype=float),
                         np.ascontiguousarray(m, dtype=float), tol, min_run, dry)


def required_half_width(left: State, right: State, params: SystemParams, t_end: float) -> float:
    """Distance waves can travel by t_end, with a 1.5x margin.

    Speeds are bounded using the two data states and their projections onto
    rho_bar, where the fastest middle states of the catalog live.
    """
    probes = [left, right, State(params.rho_bar, left.u_tilde), State(params.rho_bar, right.u_tilde)]
    top = 0.0
    for tt in (0.0, t_end):
        for s in probes:
            if s.rho <= VACUUM_FLOOR:
                continue
            e = eigenvalues(s, tt, params)
            top = max(top, abs(e.lambda_a), abs(e.lambda_0))
    return 1.5 * top * t_end


def sized_grid(scenario: Scenario) -> Grid:
    half = required_half_width(scenario.left, scenario.right, scenario.params, scenario.t_end)
    n_needed = 2 * int(math.ceil(half / scenario.dx)) + 4
    return Grid.centered(max(scenario.n_cells, n_needed), scenario.dx)


@dataclass
class RunResult:
    snapshots: List[Snapshot]
    cfl_max: float
    steps: int
    dts: Optional[np.ndarray] = None


def simulate(scenario: Scenario, grid: Optional[Grid] = None, kernels=None,
             record_dt: bool = False) -> RunResult:
    """Run the scenario; snapshots land exactly on t_end * k / blocks.

    The inner loop calls the kernels directly; it performs the same
    arithmetic as repeated ``llf_step`` calls.
    """
    params = scenario.params
    grid = grid or sized_grid(scenario)
    field = Field.riemann(grid, scenario.left, scenario.right)
    k = kernels or backend.kernels
    snaps = [Snapshot.of(field, params)]
    if scenario.t_end == 0:
        return RunResult(snaps, 0.0, 0)
    a, rb, dx, cfl = params.a_exp, params.rho_bar, grid.dx, scenario.cfl
    I_of = params.source.integral
    rho, m, t, steps = field.rho, field.m, 0.0, 0
    cfl_seen = 0.0
    dts = []
    for b in range(scenario.blocks):
        target = scenario.t_end * (b + 1) / scenario.blocks
        while t < target * (1 - 1e-14):
            I = I_of(t)
            lam = k.max_speed(rho, m, I, a, rb, VACUUM_FLOOR)
            dt = target - t
            if lam > 0:
                dt = min(dt, cfl * dx / lam)
            rho, m = k.llf_update(rho, m, I, a, rb, VACUUM_FLOOR, dt / dx, False)
            t += dt
            steps += 1
            cfl_seen = max(cfl_seen, lam * dt / dx)
            if record_dt:
                dts.append(dt)
            if scenario.renormalize and steps % RENORM_EVERY == 0:
                rho, m = k.renormalize(rho, m, RENORM_TOL, RENORM_MIN_RUN, RENORM_DRY)
        t = target
        snaps.append(Snapshot.of(Field(grid, rho, m, t, steps), params))
    return RunResult(snaps, cfl_seen, steps, np.asarray(dts) if record_dt else None)


def run(scenario: Scenario, **kw) -> List[Snapshot]:
    return simulate(scenario, **kw).snapshots
