"""System parameters, states, fluxes and eigenstructure.

The balance law

    rho_t + (rho u (1 - (rho/rho_bar)^a))_x = 0
    (rho u)_t + (rho u^2 (1 - (rho/rho_bar)^a))_x = a(t) rho

becomes a conservation law in (rho, u_tilde) with u_tilde = u - I(t) and
I(t) the integral of the forcing a(t).  Everything in the package works with
u_tilde; the physical velocity is only reconstructed for output.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from .errors import FullDegeneracy, ValidationError, VacuumSingularity

#: Densities at or below this value are treated as vacuum.
VACUUM_FLOOR = 1e-10

#: Absolute tolerance for membership tests (rho == rho_bar, u_tilde == A(t)).
EQ_TOL = 1e-12


@dataclass(frozen=True)
class SourceTerm:
    """Piecewise-constant forcing a(t), left-closed pieces starting at t=0."""

    pieces: Tuple[Tuple[float, float], ...] = ((0.0, 0.0),)
    _cum: Tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pieces = tuple((float(s), float(v)) for s, v in self.pieces)
        if not pieces:
            raise ValidationError("source needs at least one piece")
        if pieces[0][0] != 0.0:
            raise ValidationError("first source piece must start at t=0")
        starts = [s for s, _ in pieces]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValidationError("source start times must be strictly increasing")
        cum = [0.0]
        for (s0, v0), (s1, _) in zip(pieces, pieces[1:]):
            cum.append(cum[-1] + v0 * (s1 - s0))
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "_cum", tuple(cum))

    @classmethod
    def constant(cls, value: float) -> "SourceTerm":
        return cls(((0.0, float(value)),))

    @property
    def starts(self) -> Tuple[float, ...]:
        return tuple(s for s, _ in self.pieces)

    def _index(self, t: float) -> int:
        return bisect.bisect_right(self.starts, t) - 1

    def value(self, t: float) -> float:
        """a(t)."""
        if t < 0:
            raise ValueError("t must be nonnegative")
        return self.pieces[self._index(t)][1]

    def integral(self, t: float) -> float:
        """I(t), exact for the piecewise-constant forcing."""
        if t < 0:
            raise ValueError("t must be nonnegative")
        k = self._index(t)
        start, val = self.pieces[k]
        return self._cum[k] + val * (t - start)

    def asymptote(self, t: float) -> float:
        """A(t) = -I(t)."""
        return -self.integral(t)

    def is_zero(self) -> bool:
        return all(v == 0.0 for _, v in self.pieces)

    def level_crossings(self, level: float, horizon: float) -> list:
        """Times in (0, horizon] at which I(t) crosses ``level``."""
        out = []
        bounds = list(self.starts[1:]) + [math.inf]
        for k, ((start, val), stop) in enumerate(zip(self.pieces, bounds)):
            if start >= horizon or val == 0.0:
                continue
            t = start + (level - self._cum[k]) / val
            if start < t <= min(stop, horizon) and t > 0:
                out.append(t)
        return out


@dataclass(frozen=True)
class SystemParams:
    a_exp: float
    rho_bar: float
    source: SourceTerm = field(default_factory=SourceTerm)

    def __post_init__(self):
        if self.a_exp == 0 or not math.isfinite(self.a_exp):
            raise ValidationError("a_exp must be a nonzero finite real")
        if not self.rho_bar > 0:
            raise ValidationError("rho_bar must be positive")

    def I(self, t: float) -> float:  # noqa: E743 - matches the integral's usual name
        return self.source.integral(t)

    def A(self, t: float) -> float:
        return self.source.asymptote(t)


@dataclass(frozen=True)
class State:
    rho: float
    u_tilde: float

    def __post_init__(self):
        if not self.rho >= 0:
            raise ValidationError(f"density must be nonnegative, got {self.rho}")

    def __iter__(self):
        yield self.rho
        yield self.u_tilde


@dataclass(frozen=True)
class Conserved:
    rho: float
    m: float


@dataclass(frozen=True)
class Eigenpair:
    lambda_a: float
    lambda_0: float


def ratio_power(rho, params: SystemParams):
    """(rho/rho_bar)^a via exp(a ln(rho/rho_bar)).

    Works on floats and arrays; vacuum handling is left to callers.
    """
    a = params.a_exp
    if isinstance(rho, np.ndarray):
        with np.errstate(divide="ignore", over="ignore"):
            return np.exp(a * np.log(rho / params.rho_bar))
    return math.exp(a * math.log(rho / params.rho_bar))


def _check_vacuum(rho: float, params: SystemParams):
    if params.a_exp < 0 and rho <= VACUUM_FLOOR:
        raise VacuumSingularity(f"mobility is singular at rho={rho} for a={params.a_exp}")


def mobility(rho: float, params: SystemParams) -> float:
    """1 - (rho/rho_bar)^a."""
    if rho <= VACUUM_FLOOR:
        _check_vacuum(rho, params)
        return 1.0
    if rho == params.rho_bar:
        return 0.0
    return 1.0 - ratio_power(rho, params)


def source_integral(source: SourceTerm, t: float) -> float:
    return source.integral(t)


def physical_velocity(state: State, t: float, params: SystemParams) -> float:
    return state.u_tilde + params.I(t)


def flux(state: State, t: float, params: SystemParams) -> Tuple[float, float]:
    """(f1, f2) of the transformed system at time t."""
    mob = mobility(state.rho, params)
    f1 = state.rho * (state.u_tilde + params.I(t)) * mob
    return f1, state.u_tilde * f1


def eigenvalues(state: State, t: float, params: SystemParams) -> Eigenpair:
    """Characteristic speeds (lambda_a, lambda_0), extended-real at vacuum."""
    a = params.a_exp
    v = state.u_tilde + params.I(t)
    rho = state.rho
    if rho <= VACUUM_FLOOR:
        if a > 0:
            return Eigenpair(v, v)
        if v == 0.0:
            return Eigenpair(0.0, 0.0)
        sgn = math.copysign(math.inf, v)
        if a < -1:
            lam_a = sgn
        elif a == -1:
            lam_a = v
        else:
            lam_a = -sgn
        return Eigenpair(lam_a, sgn)
    if rho == params.rho_bar:
        return Eigenpair(v * (1.0 - (a + 1.0)), 0.0)
    phi = ratio_power(rho, params)
    return Eigenpair(v * (1.0 - (a + 1.0) * phi), v * (1.0 - phi))


def lambda_a(state: State, t: float, params: SystemParams) -> float:
    return eigenvalues(state, t, params).lambda_a


def lambda_0(state: State, t: float, params: SystemParams) -> float:
    return eigenvalues(state, t, params).lambda_0


def eigenvectors(state: State, t: float, params: SystemParams):
    """Right eigenvectors (R_a, R_0) with respect to (rho, u_tilde)."""
    if state.rho <= VACUUM_FLOOR:
        _check_vacuum(state.rho, params)
    v = state.u_tilde + params.I(t)
    phi = 0.0 if state.rho <= VACUUM_FLOOR else (
        1.0 if state.rho == params.rho_bar else ratio_power(state.rho, params))
    r_a = np.array([1.0, 0.0])
    r_0 = np.array([state.rho * (1.0 - phi), params.a_exp * phi * v])
    return r_a, r_0


def to_conserved(state: State) -> Conserved:
    if state.rho <= VACUUM_FLOOR:
        return Conserved(state.rho, 0.0)
    return Conserved(state.rho, state.rho * state.u_tilde)


def to_state(cons: Conserved) -> State:
    if cons.rho <= VACUUM_FLOOR:
        return State(cons.rho, 0.0)
    return State(cons.rho, cons.m / cons.rho)


def velocity_sign(state: State, t: float, params: SystemParams) -> int:
    """Sign of the physical velocity; raises on the full-degeneracy line."""
    v = state.u_tilde + params.I(t)
    if abs(v) < EQ_TOL:
        raise FullDegeneracy(f"u_tilde={state.u_tilde} equals A(t)={params.A(t)}")
    return 1 if v > 0 else -1


def density_side(rho: float, params: SystemParams) -> int:
    """-1 below the critical density, 0 on it, +1 above."""
    if abs(rho - params.rho_bar) < EQ_TOL:
        return 0
    return 1 if rho > params.rho_bar else -1


# Vectorized kernels used by the solver and the scanners.

def flux_arrays(rho: np.ndarray, m: np.ndarray, I: float, params: SystemParams):
    """Fluxes for arrays of conserved values, vacuum cells clamped to zero."""
    wet = rho > VACUUM_FLOOR
    safe = np.where(wet, rho, params.rho_bar)
    u = np.where(wet, m / safe, 0.0)
    mob = 1.0 - ratio_power(safe, params)
    f1 = np.where(wet, safe * (u + I) * mob, 0.0)
    return f1, u * f1


def eigen_arrays(rho: np.ndarray, u: np.ndarray, I: float, params: SystemParams):
    """(lambda_a, lambda_0) for arrays of positive densities."""
    phi = ratio_power(rho, params)
    v = u + I
    return v * (1.0 - (params.a_exp + 1.0) * phi), v * (1.0 - phi)


def regime(params: SystemParams) -> str:
    """One of 'ALessM1', 'AEqM1', 'AInM10', 'APos'."""
    a = params.a_exp
    if a < -1:
        return "ALessM1"
    if a == -1:
        return "AEqM1"
    if a < 0:
        return "AInM10"
    return "APos"


def as_state(obj) -> State:
    if isinstance(obj, State):
        return obj
    rho, u = obj
    return State(float(rho), float(u))


def states(pairs: Sequence) -> list:
    return [as_state(p) for p in pairs]
