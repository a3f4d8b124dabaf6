"""Classical wave curves through a left state.

The a-family lives on horizontal lines u_tilde = const: along such a line the
system reduces to a scalar law with flux v * (rho - rho^(a+1) / rho_bar^a),
strictly convex or concave in rho, so every jump is either a Lax shock or a
rarefaction.  The 0-family is linearly degenerate and its contacts keep
lambda_0 fixed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import CriticalDensity, DegenerateJump
from .model import (EQ_TOL, VACUUM_FLOOR, State, SystemParams, flux, lambda_0,
                    lambda_a, ratio_power)

SHOCK = "Shock"
RAREFACTION = "Rarefaction"
CONTACT_A = "ContactA"

C0 = "C0"
MIRROR = "Mirror"
LIMITING = "Limiting"
VERTICAL = "Vertical"


@dataclass(frozen=True)
class AWave:
    """A wave of the a-family between two states on the same u_tilde line.

    ``speed`` is the shock (or contact) speed; rarefactions carry the span of
    characteristic speeds ``(lambda_a(left), lambda_a(right))`` instead.
    """

    kind: str
    left: State
    right: State
    speed: Optional[float] = None
    span: Optional[Tuple[float, float]] = None
    zero_width: bool = False

    @property
    def slowest(self) -> float:
        return self.speed if self.span is None else self.span[0]

    @property
    def fastest(self) -> float:
        return self.speed if self.span is None else self.span[1]


@dataclass(frozen=True)
class ContactBranch:
    branch: str
    left: State
    rho: np.ndarray
    u_tilde: np.ndarray
    asymptote_u: float
    vacuum_u: float = math.nan
    speed: float = math.nan


def _phi(rho, params):
    if rho == params.rho_bar:
        return 1.0
    return ratio_power(rho, params)


def shock_speed_a(left: State, rho_right: float, t: float, params: SystemParams) -> float:
    """Speed of the a-family jump from ``left`` to (rho_right, left.u_tilde)."""
    if rho_right == left.rho:
        raise DegenerateJump("a-family jump needs distinct densities")
    v = left.u_tilde + params.I(t)
    if params.a_exp == -1:
        return v
    num = left.rho * _phi(left.rho, params) - rho_right * _phi(rho_right, params)
    return v * (1.0 - num / (left.rho - rho_right))


def lax_admissible_a(left: State, right: State, t: float, params: SystemParams) -> bool:
    """Strict Lax inequality lambda_a(right) < s < lambda_a(left)."""
    s = shock_speed_a(left, right.rho, t, params)
    if params.a_exp == -1:
        return False
    return lambda_a(right, t, params) < s < lambda_a(left, t, params)


def a_wave(left: State, rho_right: float, t: float, params: SystemParams) -> AWave:
    """Shock, rarefaction or (a = -1) contact from ``left`` to rho_right."""
    right = State(rho_right, left.u_tilde)
    s = shock_speed_a(left, rho_right, t, params)
    if params.a_exp == -1:
        return AWave(CONTACT_A, left, right, speed=s)
    lam_l = lambda_a(left, t, params)
    lam_r = lambda_a(right, t, params)
    if lam_r < s < lam_l:
        return AWave(SHOCK, left, right, speed=s)
    if lam_l < lam_r:
        return AWave(RAREFACTION, left, right, span=(lam_l, lam_r))
    # only reachable on the full-degeneracy line where both speeds vanish
    return AWave(RAREFACTION, left, right, span=(lam_l, lam_r), zero_width=True)


def contact_curve_u(left: State, rho: float, t: float, params: SystemParams) -> float:
    """u_tilde on the 0-contact relation through ``left`` at density rho."""
    if abs(rho - params.rho_bar) < EQ_TOL or abs(left.rho - params.rho_bar) < EQ_TOL:
        raise CriticalDensity("contact relation has a pole at rho_bar; use contact_vertical")
    if rho == left.rho:
        return left.u_tilde
    v = left.u_tilde + params.I(t)
    if rho <= VACUUM_FLOOR:
        return vacuum_limit_u(left, t, params)
    phi = ratio_power(rho, params)
    phi_l = ratio_power(left.rho, params)
    return (phi - phi_l) / (1.0 - phi) * v + left.u_tilde


def contact_curve_array(left: State, rho: np.ndarray, t: float, params: SystemParams) -> np.ndarray:
    v = left.u_tilde + params.I(t)
    phi = ratio_power(np.asarray(rho, dtype=float), params)
    phi_l = ratio_power(left.rho, params)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (phi - phi_l) / (1.0 - phi) * v + left.u_tilde


def infinity_limit_u(left: State, t: float, params: SystemParams) -> float:
    """Horizontal asymptote of the contact relation as rho -> infinity."""
    I = params.I(t)
    if params.a_exp > 0:
        return -I
    return lambda_0(left, t, params) - I


def vacuum_limit_u(left: State, t: float, params: SystemParams) -> float:
    """Limit of the contact relation as rho -> 0."""
    I = params.I(t)
    if params.a_exp > 0:
        return lambda_0(left, t, params) - I
    return -I


def limiting_curve_array(left: State, rho: np.ndarray, t: float, params: SystemParams) -> np.ndarray:
    """Contact relation through (infinity, left.u_tilde), defined for a < 0.

    This is the limit of the C0 curve as the base density grows without
    bound: u = v_L * rho_bar^a / (rho_bar^a - rho^a) - I.
    """
    v = left.u_tilde + params.I(t)
    phi = ratio_power(np.asarray(rho, dtype=float), params)
    with np.errstate(divide="ignore", invalid="ignore"):
        return phi / (1.0 - phi) * v + left.u_tilde


def refine_near_critical(rho_grid: Sequence[float], params: SystemParams,
                         factor: float = 0.5, levels: int = 20) -> np.ndarray:
    """Sorted grid with geometric clustering on both sides of rho_bar."""
    grid = np.asarray(rho_grid, dtype=float)
    grid = grid[grid > 0]
    rb = params.rho_bar
    if grid.size and grid.min() < rb < grid.max():
        steps = 0.1 * rb * factor ** np.arange(levels)
        extra = np.concatenate([rb - steps, rb + steps])
        extra = extra[(extra >= grid.min()) & (extra <= grid.max())]
        grid = np.concatenate([grid, extra])
    return np.unique(grid[np.abs(grid - rb) >= EQ_TOL])


def contact_branches(left: State, t: float, params: SystemParams,
                     rho_grid: Sequence[float]) -> List[ContactBranch]:
    """C0 (left's side of rho_bar), its mirror and, for a < 0, the limiting curve."""
    if abs(left.rho - params.rho_bar) < EQ_TOL:
        raise CriticalDensity("left state on rho_bar; use contact_vertical")
    grid = refine_near_critical(rho_grid, params)
    own = grid < params.rho_bar if left.rho < params.rho_bar else grid > params.rho_bar
    u_all = contact_curve_array(left, grid, t, params)
    lam = lambda_0(left, t, params)
    asym = infinity_limit_u(left, t, params)
    vac = vacuum_limit_u(left, t, params)
    out = [
        ContactBranch(C0, left, grid[own], u_all[own], asym, vac, lam),
        ContactBranch(MIRROR, left, grid[~own], u_all[~own], asym, vac, lam),
    ]
    if params.a_exp < 0:
        above = grid > params.rho_bar
        lim_u = limiting_curve_array(left, grid[above], t, params)
        out.append(ContactBranch(LIMITING, left, grid[above], lim_u,
                                 left.u_tilde, -params.I(t),
                                 left.u_tilde + params.I(t)))
    return out


def contact_vertical(left: State, u_target: float, n: int = 2) -> ContactBranch:
    """Contact along rho = rho_bar between left.u_tilde and u_target (speed 0)."""
    if u_target == left.u_tilde:
        us = np.empty(0)
    else:
        us = np.linspace(left.u_tilde, u_target, max(n, 2))
    rhos = np.full(us.shape, left.rho)
    return ContactBranch(VERTICAL, left, rhos, us, math.nan, math.nan, 0.0)


def rh_residual(left: State, right: State, s: float, t: float,
                params: SystemParams) -> Tuple[float, float]:
    """Rankine-Hugoniot residuals (s[rho] - [f1], s[rho u] - [f2]), [.] = left - right."""
    fl = _flux_or_zero(left, t, params)
    fr = _flux_or_zero(right, t, params)
    d_rho = left.rho - right.rho
    d_m = left.rho * left.u_tilde - right.rho * right.u_tilde
    return s * d_rho - (fl[0] - fr[0]), s * d_m - (fl[1] - fr[1])


def _flux_or_zero(state: State, t: float, params: SystemParams):
    if state.rho <= VACUUM_FLOOR:
        return 0.0, 0.0
    return flux(state, t, params)
