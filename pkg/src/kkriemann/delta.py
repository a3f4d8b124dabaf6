"""Delta-shock trajectories and overcompressive admissibility.

For a < 0 the singular front carries a density mass zeta(t) moving with
internal (transformed) velocity eta(t):

    x'    = eta + I(t)
    zeta' = [f1](t) - x' [rho]
    (zeta eta)' = [f2](t) - x' [rho u]

with zeta(0) = 0 and eta(0) a root of the initial-speed quadratic.  For a > 0
the internal velocity is pinned to -I(t) and zeta solves a linear ODE.
Brackets are left minus right throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import (Inadmissible, MomentumJumpZero, NoJump, NoRealRoot,
                     StrengthNegative)
from .model import (VACUUM_FLOOR, State, SystemParams, eigen_arrays,
                    eigenvalues, ratio_power)

NEG_A = "NegA"
POS_A = "PosA"

#: Shadow-wave layer exponents (k, beta, gamma, delta) behind each ODE system.
LAYER_EXPONENTS = {NEG_A: (1, 1, 0, 0), POS_A: (1, 1, "-a", "-a")}

DEFAULT_DT = 1e-3


class AmbiguousRoot(Inadmissible):
    """Both initial-speed roots pass the overcompressive test."""

    def __init__(self, roots):
        super().__init__(f"both roots {roots} are overcompressive")
        self.roots = roots


def _mob(rho, params):
    if rho <= VACUUM_FLOOR:
        return 0.0
    if rho == params.rho_bar:
        return 0.0
    return 1.0 - ratio_power(rho, params)


@dataclass(frozen=True)
class Jumps:
    """Left-minus-right brackets needed by the delta ODEs."""

    d_rho: float
    d_m: float
    d_rho_mob: float
    d_m_mob: float
    d_mu_mob: float

    @classmethod
    def between(cls, left: State, right: State, params: SystemParams) -> "Jumps":
        ml, mr = _mob(left.rho, params), _mob(right.rho, params)
        # vacuum sides carry no flux
        ul = left.u_tilde if left.rho > VACUUM_FLOOR else 0.0
        ur = right.u_tilde if right.rho > VACUUM_FLOOR else 0.0
        return cls(
            d_rho=left.rho - right.rho,
            d_m=left.rho * ul - right.rho * ur,
            d_rho_mob=left.rho * ml - right.rho * mr,
            d_m_mob=left.rho * ul * ml - right.rho * ur * mr,
            d_mu_mob=left.rho * ul * ul * ml - right.rho * ur * ur * mr,
        )

    def f1(self, I: float) -> float:
        """[f1] at a time where the source integral equals I."""
        return self.d_m_mob + I * self.d_rho_mob

    def f2(self, I: float) -> float:
        return self.d_mu_mob + I * self.d_m_mob

    def kappa1(self, xprime: float, I: float) -> float:
        return xprime * self.d_rho - self.f1(I)

    def kappa2(self, xprime: float, I: float) -> float:
        return xprime * self.d_m - self.f2(I)


@dataclass
class DeltaTrajectory:
    times: np.ndarray
    x: np.ndarray
    zeta: np.ndarray
    eta: np.ndarray
    xprime: np.ndarray
    regime: str
    left: Optional[State] = None
    right: Optional[State] = None

    def at(self, t: float) -> Tuple[float, float, float]:
        """Linear interpolation of (x, zeta, eta) at time t."""
        return (float(np.interp(t, self.times, self.x)),
                float(np.interp(t, self.times, self.zeta)),
                float(np.interp(t, self.times, self.eta)))


def initial_speed_roots(left: State, right: State, params: SystemParams) -> Tuple[float, ...]:
    """Real roots, in descending order, of

        [rho] s^2 - ([rho u] + [rho u mob]) s + [rho u^2 mob] = 0

    evaluated at t = 0.  A vanishing density jump leaves one linear root.
    """
    if left == right:
        raise NoJump("left and right states coincide")
    j = Jumps.between(left, right, params)
    qa = j.d_rho
    qb = -(j.d_m + j.d_m_mob)
    qc = j.d_mu_mob
    if qa == 0.0:
        if qb == 0.0:
            raise NoRealRoot("density and momentum brackets both vanish")
        return (-qc / qb,)
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0:
        raise NoRealRoot(f"discriminant {disc} < 0")
    sq = math.sqrt(disc)
    # cancellation-free pair
    q = -0.5 * (qb + math.copysign(sq, qb)) if qb != 0 else 0.5 * sq
    if q == 0.0:
        roots = (0.0, 0.0)
    else:
        roots = (q / qa, qc / q)
    return tuple(sorted(roots, reverse=True))


def overcompressive_at(left: State, right: State, xprime: float, t: float,
                       params: SystemParams) -> bool:
    """max(lambda(right)) < x' < min(lambda(left)), strict."""
    el = eigenvalues(left, t, params)
    er = eigenvalues(right, t, params)
    return max(er.lambda_a, er.lambda_0) < xprime < min(el.lambda_a, el.lambda_0)


def overcompressive_bounds(left: State, right: State, t: float, params: SystemParams):
    el = eigenvalues(left, t, params)
    er = eigenvalues(right, t, params)
    return max(er.lambda_a, er.lambda_0), min(el.lambda_a, el.lambda_0)


def select_initial_speed(left: State, right: State, params: SystemParams) -> float:
    """The unique root of the initial-speed quadratic that is overcompressive at t=0."""
    roots = initial_speed_roots(left, right, params)
    good = [s for s in roots if overcompressive_at(left, right, s, 0.0, params)]
    if not good:
        raise Inadmissible(f"no overcompressive root among {roots}")
    if len(good) > 1 and good[0] != good[1]:
        raise AmbiguousRoot(tuple(good))
    return good[0]


def time_grid(t_end: float, dt: float, breaks=()) -> np.ndarray:
    """Uniform steps of size dt, with source breakpoints inserted exactly."""
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    if t_end == 0:
        return np.zeros(1)
    n = max(int(math.ceil(t_end / dt - 1e-9)), 1)
    ts = np.linspace(0.0, t_end, n + 1) if abs(n * dt - t_end) < 1e-12 * max(1.0, t_end) \
        else np.append(np.arange(n) * dt, t_end)
    extra = [b for b in breaks if 0 < b < t_end]
    if extra:
        ts = np.unique(np.concatenate([ts, extra]))
    return ts


def _rk4_step(rhs, t, y, h):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)



START_FRACTION = 1e-3
#: substep length over elapsed time, times the start stiffness, stays below this
STIFF_RATIO = 0.125
#: scans share one substep schedule; cells stiffer than this start less accurately
SCAN_STIFF_CAP = 32.0


def _series_start(d, s0, a0, t):
    """Second-order series of (x, zeta, zeta*eta) about the zeta = 0 start.

    ``d`` holds the brackets (scalars or arrays), ``a0`` the source value on
    the first interval.  With zeta = z1 t + z2 t^2 and eta = s0 + e1 t the
    first-order balance of the momentum equation fixes e1.
    """
    A, B = d["d_rho"], d["d_m"]
    G1, G2 = d["d_rho_mob"], d["d_m_mob"]
    z1 = d["d_m_mob"] - s0 * A
    with np.errstate(divide="ignore", invalid="ignore"):
        e1 = a0 * (G2 - B - s0 * G1 + s0 * A) / (2.0 * z1 + B - s0 * A)
    e1 = np.where(np.isfinite(e1), e1, 0.0)
    z2 = 0.5 * (a0 * G1 - (e1 + a0) * A)
    zeta = z1 * t + z2 * t * t
    x = s0 * t + 0.5 * (e1 + a0) * t * t
    return x, zeta, zeta * (s0 + e1 * t)


def _start_times(h, stiff):
    """Geometric substeps on (0, h]: the w/zeta quotient stiffens like 1/t."""
    ratio = STIFF_RATIO / max(stiff, 8.0)
    n = int(math.ceil(math.log(1.0 / START_FRACTION) / math.log1p(ratio)))
    return np.geomspace(START_FRACTION * h, h, n + 1)


def _start_stiffness(d, s0):
    """k in eta' ~ -k (eta - eta*) / t near the start (largest magnitude for arrays)."""
    z1 = d["d_m_mob"] - s0 * d["d_rho"]
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.abs((d["d_m"] + z1 - s0 * d["d_rho"]) / z1)
    k = np.where(np.isfinite(k), k, 0.0)
    return float(np.max(k)) if np.size(k) else 0.0


def _substeps(t0, h, stiff):
    """Substep count keeping h_sub * stiff / t below STIFF_RATIO on the early steps."""
    return max(1, int(math.ceil(max(stiff, 8.0) * h / (STIFF_RATIO * t0))))


def integrate_delta_neg(left: State, right: State, params: SystemParams,
                        t_end: float, dt: float = DEFAULT_DT,
                        s_minus: Optional[float] = None) -> DeltaTrajectory:
    """RK4 integration of the a < 0 delta system in (x, zeta, zeta*eta)."""
    if params.a_exp >= 0:
        raise ValueError("integrate_delta_neg requires a_exp < 0")
    if s_minus is None:
        s_minus = select_initial_speed(left, right, params)
    j = Jumps.between(left, right, params)
    src = params.source

    def rhs(t, y):
        _, zeta, w = y
        eta = s_minus if zeta == 0.0 else w / zeta
        I = src.integral(t)
        xp = eta + I
        return np.array([xp, j.f1(I) - xp * j.d_rho, j.f2(I) - xp * j.d_m])

    ts = time_grid(t_end, dt, src.starts)
    ys = np.zeros((ts.size, 3))
    if ts.size > 1:
        d = dict(d_rho=j.d_rho, d_m=j.d_m, d_rho_mob=j.d_rho_mob, d_m_mob=j.d_m_mob)
        stiff = _start_stiffness(d, s_minus)
        sub = _start_times(ts[1], stiff)
        y = np.array(_series_start(d, s_minus, src.value(0.0), sub[0]), dtype=float)
        for t0, t1 in zip(sub[:-1], sub[1:]):
            y = _rk4_step(rhs, t0, y, t1 - t0)
        ys[1] = y
    for k in range(ts.size - 1):
        if k:
            h = ts[k + 1] - ts[k]
            m = _substeps(ts[k], h, stiff)
            y = ys[k]
            for i in range(m):
                y = _rk4_step(rhs, ts[k] + i * h / m, y, h / m)
            ys[k + 1] = y
        if ys[k + 1, 1] < -1e-12:
            raise StrengthNegative(f"zeta={ys[k + 1, 1]} at t={ts[k + 1]}")
    zeta = ys[:, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = np.where(zeta > 0, ys[:, 2] / np.where(zeta > 0, zeta, 1.0), s_minus)
    eta[0] = s_minus
    I = np.array([src.integral(t) for t in ts])
    return DeltaTrajectory(ts, ys[:, 0], zeta, eta, eta + I, NEG_A, left, right)


def integrate_delta_pos(left: State, right: State, params: SystemParams,
                        t_end: float, dt: float = DEFAULT_DT,
                        check: bool = True) -> DeltaTrajectory:
    """RK4 integration of the a > 0 delta system in (x, zeta).

    The internal velocity is reported as -I(t) (zero physical velocity).
    """
    if params.a_exp <= 0:
        raise ValueError("integrate_delta_pos requires a_exp > 0")
    j = Jumps.between(left, right, params)
    if j.d_m == 0.0:
        raise MomentumJumpZero("[rho u] = 0")
    src = params.source
    r = j.d_rho / j.d_m

    def zeta_dot(t, zeta, a_t):
        I = src.integral(t)
        forcing = j.f1(I) - j.d_rho * j.f2(I) / j.d_m
        return (forcing - zeta * r * a_t) / (1.0 + r * I)

    def xprime(t, zeta, zdot, a_t):
        return j.f2(src.integral(t)) / j.d_m + (zdot * src.integral(t) + zeta * a_t) / j.d_m

    xp0 = j.f2(0.0) / j.d_m
    if check and not overcompressive_at(left, right, xp0, 0.0, params):
        raise Inadmissible(f"delta speed {xp0} is not overcompressive at t=0")

    ts = time_grid(t_end, dt, src.starts)

    def rhs_factory(a_t):
        def rhs(t, y):
            zd = zeta_dot(t, y[1], a_t)
            return np.array([xprime(t, y[1], zd, a_t), zd])
        return rhs

    ys = np.zeros((ts.size, 2))
    xps = np.zeros(ts.size)
    for k in range(ts.size - 1):
        a_t = src.value(ts[k])
        ys[k + 1] = _rk4_step(rhs_factory(a_t), ts[k], ys[k], ts[k + 1] - ts[k])
        if ys[k + 1, 1] < -1e-12:
            raise StrengthNegative(f"zeta={ys[k + 1, 1]} at t={ts[k + 1]}")
    for k, t in enumerate(ts):
        a_t = src.value(t)
        zd = zeta_dot(t, ys[k, 1], a_t)
        xps[k] = xprime(t, ys[k, 1], zd, a_t)
    eta = -np.array([src.integral(t) for t in ts])
    return DeltaTrajectory(ts, ys[:, 0], ys[:, 1], eta, xps, POS_A, left, right)


def integrate_delta(left: State, right: State, params: SystemParams, t_end: float,
                    dt: float = DEFAULT_DT) -> DeltaTrajectory:
    if params.a_exp < 0:
        return integrate_delta_neg(left, right, params, t_end, dt)
    return integrate_delta_pos(left, right, params, t_end, dt)


def pos_delta_internal_density(traj: DeltaTrajectory, params: SystemParams) -> np.ndarray:
    """eta_0(t) = -x'(t) (rho_bar / (zeta/2))^a, the layer velocity scale for a > 0."""
    with np.errstate(divide="ignore"):
        return -traj.xprime * (params.rho_bar / (0.5 * traj.zeta)) ** params.a_exp


# ---------------------------------------------------------------------------
# vectorized scanning

@dataclass
class ScanResult:
    rho: np.ndarray
    u_tilde: np.ndarray
    mask: np.ndarray
    flagged: np.ndarray
    t: float
    counters: dict = field(default_factory=dict)

    def lookup(self, rho: float, u: float) -> bool:
        i = int(np.argmin(np.abs(self.rho - rho)))
        k = int(np.argmin(np.abs(self.u_tilde - u)))
        return bool(self.mask[k, i])


def _eig_vec(rho, u, I, params):
    """Vectorized eigenvalues with the vacuum conventions of model.eigenvalues."""
    lam_a, lam_0 = eigen_arrays(np.maximum(rho, VACUUM_FLOOR), u, I, params)
    return lam_a, lam_0


def _bracket_arrays(left: State, rho_r: np.ndarray, u_r: np.ndarray, params: SystemParams):
    ml = _mob(left.rho, params)
    phi_r = ratio_power(np.maximum(rho_r, VACUUM_FLOOR), params)
    mr = np.where(rho_r > VACUUM_FLOOR, 1.0 - phi_r, 0.0)
    ul = left.u_tilde
    return dict(
        d_rho=left.rho - rho_r,
        d_m=left.rho * ul - rho_r * u_r,
        d_rho_mob=left.rho * ml - rho_r * mr,
        d_m_mob=left.rho * ul * ml - rho_r * u_r * mr,
        d_mu_mob=left.rho * ul * ul * ml - rho_r * u_r * u_r * mr,
    )


def _oc_mask(left, rho_r, u_r, xp, t, params):
    el = eigenvalues(left, t, params)
    lo_l = min(el.lambda_a, el.lambda_0)
    I = params.I(t)
    lam_a, lam_0 = _eig_vec(rho_r, u_r, I, params)
    return (np.maximum(lam_a, lam_0) < xp) & (xp < lo_l)


def initial_roots_vec(left: State, rho_r, u_r, params: SystemParams):
    """Vectorized descending roots (nan where absent) of the initial-speed quadratic."""
    b = _bracket_arrays(left, rho_r, u_r, params)
    qa = b["d_rho"]
    qb = -(b["d_m"] + b["d_m_mob"])
    qc = b["d_mu_mob"]
    disc = qb * qb - 4.0 * qa * qc
    with np.errstate(invalid="ignore", divide="ignore"):
        sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
        q = -0.5 * (qb + np.copysign(sq, qb))
        r1 = q / qa
        r2 = qc / q
        lin = qa == 0
        r1 = np.where(lin, -qc / qb, r1)
        r2 = np.where(lin, np.nan, r2)
    hi = np.fmax(r1, r2)
    lo = np.fmin(r1, r2)
    lo = np.where(lin, np.nan, lo)
    return hi, lo, b


def scan_overcompressive(left: State, params: SystemParams, t: float,
                         rho_range: Tuple[float, float], u_range: Tuple[float, float],
                         n, dt: float = DEFAULT_DT) -> ScanResult:
    """Boolean grid (rows: u_tilde, cols: rho) of right states reachable by an
    overcompressive delta from ``left``, checked at every integrator step in
    [0, t]."""
    nr, nu = (n, n) if np.isscalar(n) else n
    if nr < 2 or nu < 2:
        raise ValueError("scan grid needs at least 2 points per axis")
    rho = np.linspace(rho_range[0], rho_range[1], nr)
    u = np.linspace(u_range[0], u_range[1], nu)
    R, U = np.meshgrid(rho, u)
    same = (R == left.rho) & (U == left.u_tilde)
    counters = {"flagged": 0, "momentum_jump_zero": 0}
    if params.a_exp < 0:
        mask, flagged = _scan_neg(left, params, t, R, U, dt)
    else:
        mask, zero_m = _scan_pos(left, params, t, R, U, dt)
        flagged = np.zeros_like(mask)
        counters["momentum_jump_zero"] = int(zero_m.sum())
    mask &= ~same
    counters["flagged"] = int(flagged.sum())
    return ScanResult(rho, u, mask, flagged, t, counters)


def _scan_neg(left, params, t_end, R, U, dt):
    hi, lo, b = initial_roots_vec(left, R, U, params)
    ok_hi = np.isfinite(hi) & _oc_mask(left, R, U, np.nan_to_num(hi), 0.0, params)
    ok_lo = np.isfinite(lo) & _oc_mask(left, R, U, np.nan_to_num(lo), 0.0, params)
    flagged = ok_hi & ok_lo & (hi != lo)
    alive = (ok_hi ^ ok_lo) | (ok_hi & (hi == lo))
    s0 = np.where(ok_hi, hi, lo)
    if t_end == 0 or not alive.any():
        return alive, flagged
    src = params.source
    d_rho, d_m = b["d_rho"], b["d_m"]

    def rhs(t, x, z, w):
        I = src.integral(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            eta = np.where(z > 0, w / np.where(z > 0, z, 1.0), s0)
        xp = eta + I
        f1 = b["d_m_mob"] + I * b["d_rho_mob"]
        f2 = b["d_mu_mob"] + I * b["d_m_mob"]
        return xp, f1 - xp * d_rho, f2 - xp * d_m

    def step(t0, h, x, z, w):
        k1 = rhs(t0, x, z, w)
        k2 = rhs(t0 + h / 2, x + h / 2 * k1[0], z + h / 2 * k1[1], w + h / 2 * k1[2])
        k3 = rhs(t0 + h / 2, x + h / 2 * k2[0], z + h / 2 * k2[1], w + h / 2 * k2[2])
        k4 = rhs(t0 + h, x + h * k3[0], z + h * k3[1], w + h * k3[2])
        return (x + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                z + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
                w + h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]))

    ts = time_grid(t_end, dt, src.starts)
    s_safe = np.where(alive, s0, 0.0)
    stiff = min(_start_stiffness({k: v[alive] for k, v in b.items()}, s_safe[alive]), SCAN_STIFF_CAP)
    sub = _start_times(ts[1], stiff)
    x, z, w = (np.where(alive, q, 0.0) for q in _series_start(b, s_safe, src.value(0.0), sub[0]))
    for t0, t1 in zip(sub[:-1], sub[1:]):
        x, z, w = step(t0, t1 - t0, x, z, w)
    for k in range(ts.size - 1):
        if not alive.any():
            break
        if k:
            h = ts[k + 1] - ts[k]
            m = _substeps(ts[k], h, stiff)
            for i in range(m):
                x, z, w = step(ts[k] + i * h / m, h / m, x, z, w)
        t1 = ts[k + 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            eta = np.where(z > 0, w / np.where(z > 0, z, 1.0), s0)
        xp = eta + src.integral(t1)
        alive &= (z >= -1e-12) & _oc_mask(left, R, U, xp, t1, params)
    return alive, flagged


def _scan_pos(left, params, t_end, R, U, dt):
    b = _bracket_arrays(left, R, U, params)
    d_rho, d_m = b["d_rho"], b["d_m"]
    zero_m = d_m == 0
    safe_m = np.where(zero_m, 1.0, d_m)
    r = d_rho / safe_m
    src = params.source

    def parts(t):
        I = src.integral(t)
        f1 = b["d_m_mob"] + I * b["d_rho_mob"]
        f2 = b["d_mu_mob"] + I * b["d_m_mob"]
        return I, f1, f2

    def zdot(t, z, a_t):
        I, f1, f2 = parts(t)
        return (f1 - d_rho * f2 / safe_m - z * r * a_t) / (1.0 + r * I)

    def xprime(t, z, a_t):
        I, _, f2 = parts(t)
        return f2 / safe_m + (zdot(t, z, a_t) * I + z * a_t) / safe_m

    z = np.zeros_like(R)
    alive = ~zero_m & _oc_mask(left, R, U, xprime(0.0, z, src.value(0.0)), 0.0, params)
    if t_end == 0:
        return alive, zero_m
    ts = time_grid(t_end, dt, src.starts)
    # cells whose ODE hits 1 + r I = 0 go NaN and drop out through the mask
    with np.errstate(divide="ignore", invalid="ignore"):
        for k in range(ts.size - 1):
            if not alive.any():
                break
            t0, h = ts[k], ts[k + 1] - ts[k]
            a_t = src.value(t0)
            k1 = zdot(t0, z, a_t)
            k2 = zdot(t0 + h / 2, z + h / 2 * k1, a_t)
            k3 = zdot(t0 + h / 2, z + h / 2 * k2, a_t)
            k4 = zdot(t0 + h, z + h * k3, a_t)
            z = z + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t1 = ts[k + 1]
            alive &= (z >= -1e-12) & _oc_mask(left, R, U, xprime(t1, z, src.value(t1)), t1, params)
    return alive, zero_m


def delta_admissible(left: State, right: State, params: SystemParams, t: float,
                     dt: float = DEFAULT_DT) -> bool:
    """Single-pair version of the scan: overcompressive at every step of [0, t]."""
    if left == right:
        return False
    R = np.array([[right.rho]])
    U = np.array([[right.u_tilde]])
    if params.a_exp < 0:
        mask, flagged = _scan_neg(left, params, t, R, U, dt)
        return bool(mask[0, 0] and not flagged[0, 0])
    mask, _ = _scan_pos(left, params, t, R, U, dt)
    return bool(mask[0, 0])


def restart_speed_roots(left: State, right: State, params: SystemParams, t: float) -> np.ndarray:
    """Delta speeds x' for a jump created at time t with zero initial strength.

    With zeta(t) = 0 and eta momentarily constant the a < 0 system gives

        [rho] eta^2 + (I [rho] - [f1] - [rho u]) eta + ([f2] - I [rho u]) = 0,

    which reduces to the initial-speed quadratic at I = 0; x' = eta + I.
    For a > 0 the single speed is [f2]/[rho u].  Returns speeds in descending
    order (possibly empty).
    """
    j = Jumps.between(left, right, params)
    I = params.I(t)
    if params.a_exp > 0:
        return np.array([j.f2(I) / j.d_m]) if j.d_m != 0 else np.empty(0)
    qa = j.d_rho
    qb = I * j.d_rho - j.f1(I) - j.d_m
    qc = j.f2(I) - I * j.d_m
    if qa == 0:
        return np.array([-qc / qb + I]) if qb != 0 else np.empty(0)
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return np.empty(0)
    return np.sort(np.roots([qa, qb, qc]).real)[::-1] + I


def restart_roots_vec(rho_l: np.ndarray, u_l: np.ndarray, right: State,
                      params: SystemParams, t: float):
    """Vectorized ``restart_speed_roots`` over left states; (hi, lo) with nan gaps.

    For a > 0 both arrays hold the single speed [f2]/[rho u].
    """
    ml = np.where(rho_l > VACUUM_FLOOR, 1.0 - ratio_power(np.maximum(rho_l, VACUUM_FLOOR), params), 0.0)
    mr = _mob(right.rho, params)
    ur = right.u_tilde
    d_rho = rho_l - right.rho
    d_m = rho_l * u_l - right.rho * ur
    d_rho_mob = rho_l * ml - right.rho * mr
    d_m_mob = rho_l * u_l * ml - right.rho * ur * mr
    d_mu_mob = rho_l * u_l * u_l * ml - right.rho * ur * ur * mr
    I = params.I(t)
    f1 = d_m_mob + I * d_rho_mob
    f2 = d_mu_mob + I * d_m_mob
    with np.errstate(invalid="ignore", divide="ignore"):
        if params.a_exp > 0:
            s = np.where(d_m != 0, f2 / d_m, np.nan)
            return s, s
        qa, qb, qc = d_rho, I * d_rho - f1 - d_m, f2 - I * d_m
        disc = qb * qb - 4.0 * qa * qc
        sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
        q = -0.5 * (qb + np.copysign(sq, qb))
        r1, r2 = q / qa, qc / q
    return np.fmax(r1, r2) + I, np.fmin(r1, r2) + I
