"""Case identification and Riemann-solution construction in state space.

Constructions are attempted in a fixed order and the first admissible one
wins: classical two-wave patterns (Regions I-III), the three-wave path
through the critical line (Region VI), a delta shock (Region IV, possibly
after an a-rarefaction), and finally a vacuum composite (Region V).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import delta as dl
from .errors import FullDegeneracy, NoIntersection, RiemannError
from .model import (EQ_TOL, VACUUM_FLOOR, State, SystemParams, density_side, eigenvalues,
                    lambda_0, lambda_a, ratio_power, regime, velocity_sign)
from .waves import (CONTACT_A, RAREFACTION, SHOCK, a_wave, contact_branches,
                    infinity_limit_u, vacuum_limit_u)

# wave descriptor kinds
SHOCK_A = "Shock_a"
RAREFACTION_A = "Rarefaction_a"
CONTACT_A_W = "Contact_a"
CONTACT_0 = "Contact_0"
VERTICAL_C0 = "Vertical_C0"
DELTA = "Delta"
VACUUM = "VacuumSegment"

SHORT = {SHOCK_A: "S_a", RAREFACTION_A: "R_a", CONTACT_A_W: "C_a", CONTACT_0: "C_0",
         VERTICAL_C0: "C_0", DELTA: "S_delta", VACUUM: "V"}
_TAG = {"S_a": "Sa", "R_a": "Ra", "C_a": "Ca", "C_0": "C0", "V": "V", "S_delta": "D"}
_AWAVE_KIND = {SHOCK: SHOCK_A, RAREFACTION: RAREFACTION_A, CONTACT_A: CONTACT_A_W}

A_FIRST = "AFirst"
ZERO_FIRST = "ZeroFirst"

UNCLASSIFIABLE = "Unclassifiable"

_BASE = {"ALessM1": 1, "AEqM1": 7, "AInM10": 13, "APos": 19}
SCAN_POINTS = 512
ROOT_TOL = 1e-12
# speed comparisons tolerate rounding in the curve algebra
SPEED_TOL = 1e-9


@dataclass(frozen=True)
class CaseId:
    index: int
    regime: str
    velocity_side: str
    density_side: str

    def __str__(self):
        return f"Case {self.index}"


def case_id(params: SystemParams, left: State, t: float) -> CaseId:
    """Which of the 24 cases the left state falls in at time t."""
    sgn = velocity_sign(left, t, params)
    side = density_side(left.rho, params)
    reg = regime(params)
    index = _BASE[reg] + (3 if sgn > 0 else 0) + (side + 1)
    return CaseId(index, reg, "Above" if sgn > 0 else "Below",
                  ("Below", "Equal", "Above")[side + 1])


def case_transitions(params: SystemParams, left: State, horizon: float) -> List[Tuple[float, int]]:
    """Times in (0, horizon] where the case changes, with the new case index.

    The case only changes when A(t) = -I(t) crosses u_tilde_L.
    """
    out = []
    for tc in params.source.level_crossings(-left.u_tilde, horizon):
        # look just past the crossing; the next piece decides the new side
        probe = tc + 1e-9 * max(1.0, tc)
        try:
            out.append((tc, case_id(params, left, probe).index))
        except FullDegeneracy:
            continue
    return out


@dataclass(frozen=True)
class Wave:
    kind: str
    left: State
    right: State
    slowest: float
    fastest: float

    @property
    def short(self) -> str:
        return SHORT[self.kind]


@dataclass(frozen=True)
class WavePattern:
    region: str
    waves: Tuple[Wave, ...]
    middle_states: Tuple[Optional[State], ...]
    subregion: str = ""
    diagnostics: Dict[str, str] = field(default_factory=dict)

    @property
    def sequence(self) -> Tuple[str, ...]:
        return tuple(w.short for w in self.waves)

    @property
    def label(self) -> str:
        return f"{self.region}_{{{self.subregion}}}" if self.subregion else self.region

    @property
    def ok(self) -> bool:
        return self.region != UNCLASSIFIABLE

    def __str__(self):
        return " + ".join(self.sequence) if self.waves else "(no waves)"


# ---------------------------------------------------------------------------
# root finding on the contact relation

def _bisect(f, lo: float, hi: float, flo: float) -> float:
    # relative stop: densities near vacuum need their own significant digits
    while hi - lo > ROOT_TOL * max(abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bracket_roots(f, grid: np.ndarray, vectorized: bool = False) -> List[float]:
    """Roots of f on a sorted grid: scan for sign changes, then bisect each.

    With ``vectorized`` the scan evaluates f once on the whole grid.
    """
    vals = np.asarray(f(grid), dtype=float) if vectorized else np.array([f(x) for x in grid])
    a, b = vals[:-1], vals[1:]
    finite = np.isfinite(a) & np.isfinite(b)
    roots = [float(x) for x in grid[np.nonzero(vals == 0.0)[0]]]
    for k in np.nonzero(finite & (a * b < 0))[0]:
        roots.append(_bisect(f, float(grid[k]), float(grid[k + 1]), float(a[k])))
    return sorted(set(roots))


_UNIT_BELOW = np.concatenate([np.geomspace(1e-9, 0.5, SCAN_POINTS // 2),
                              1.0 - np.geomspace(0.5, 1e-12, SCAN_POINTS // 2)[1:]])
_UNIT_ABOVE = np.concatenate([1.0 + np.geomspace(1e-12, 1.0, SCAN_POINTS // 2),
                              np.geomspace(2.0, 1e9, SCAN_POINTS // 2)[1:]])
# sonic-attachment search, in units of the left density
_UNIT_SONIC = np.concatenate([np.geomspace(1e-9, 1.0, SCAN_POINTS // 2)[:-1],
                              np.geomspace(1.0, 1e9, SCAN_POINTS // 2)[1:]])


def _branch_grid(params: SystemParams, below: bool) -> np.ndarray:
    """Geometric grid on one side of rho_bar, clustered at both ends."""
    return params.rho_bar * (_UNIT_BELOW if below else _UNIT_ABOVE)


def _level_root(base: State, u_line: float, t: float, params: SystemParams) -> List[float]:
    """Densities on base's side of rho_bar where the 0-contact through base meets
    the horizontal line u_tilde = u_line."""
    lam = lambda_0(base, t, params)
    v = u_line + params.I(t)

    def f(rho):
        return v * (1.0 - ratio_power(rho, params)) - lam

    return bracket_roots(f, _branch_grid(params, base.rho < params.rho_bar), vectorized=True)


def classical_middle_state(left: State, right: State, order: str, t: float,
                           params: SystemParams) -> List[State]:
    """Middle state(s) of the two-wave classical patterns.

    AFirst: M = (rho_M, u_L) with M on the 0-contact through ``right``.
    ZeroFirst: M = (rho_M, u_R) on the 0-contact through ``left``.
    Only the branch on the base state's side of rho_bar is searched; if the
    base lies on rho_bar the contact is the vertical line there.
    """
    if order == A_FIRST:
        base, line = right, left.u_tilde
    elif order == ZERO_FIRST:
        base, line = left, right.u_tilde
    else:
        raise ValueError(f"unknown order {order!r}")
    if min(left.rho, right.rho) <= VACUUM_FLOOR:
        raise NoIntersection("classical patterns need wet end states")
    if abs(line - base.u_tilde) <= EQ_TOL * max(1.0, abs(line)):
        return [base]
    if abs(base.rho - params.rho_bar) < EQ_TOL:
        return [State(params.rho_bar, line)]
    roots = _level_root(base, line, t, params)
    if not roots:
        raise NoIntersection(f"0-contact through {base} never reaches u_tilde={line}")
    return [State(r, line) for r in roots]


# ---------------------------------------------------------------------------
# wave builders

def _a(left: State, rho_right: float, t: float, params: SystemParams) -> Optional[Wave]:
    if abs(rho_right - left.rho) <= EQ_TOL * max(1.0, left.rho):
        return None
    w = a_wave(left, rho_right, t, params)
    return Wave(_AWAVE_KIND[w.kind], w.left, w.right, w.slowest, w.fastest)


def _c0(left: State, right: State, t: float, params: SystemParams) -> Optional[Wave]:
    if left == right:
        return None
    if abs(left.rho - params.rho_bar) < EQ_TOL and abs(right.rho - params.rho_bar) < EQ_TOL:
        return Wave(VERTICAL_C0, left, right, 0.0, 0.0)
    s = lambda_0(left if left.rho > VACUUM_FLOOR else right, t, params)
    return Wave(CONTACT_0, left, right, s, s)


def _ordered(waves: Sequence[Wave]) -> bool:
    return all(p.fastest <= q.slowest + SPEED_TOL * max(1.0, abs(q.slowest))
               for p, q in zip(waves, waves[1:]))


def _strip(waves) -> Tuple[Wave, ...]:
    return tuple(w for w in waves if w is not None)


def _classical(left, right, t, params) -> Optional[WavePattern]:
    for order in (A_FIRST, ZERO_FIRST):
        try:
            mids = classical_middle_state(left, right, order, t, params)
        except NoIntersection:
            continue
        for m in mids:
            if order == A_FIRST:
                aw, cw = _a(left, m.rho, t, params), _c0(m, right, t, params)
                waves = _strip([aw, cw])
            else:
                cw, aw = _c0(left, m, t, params), _a(m, right.rho, t, params)
                waves = _strip([cw, aw])
            if not _ordered(waves):
                continue
            kind = aw.kind if aw is not None else None
            roman = {SHOCK_A: "I", RAREFACTION_A: "II", CONTACT_A_W: "III", None: "I"}[kind]
            region = f"{roman}_{'a' if order == A_FIRST else '0'}"
            return WavePattern(region, waves, (m,) if 0 < len(waves) else ())
    return None


def _through_critical(left, right, t, params) -> Optional[WavePattern]:
    """Region VI: a-wave to rho_bar, vertical contact, a-wave to the right state."""
    vl, vr = left.u_tilde + params.I(t), right.u_tilde + params.I(t)
    if vl * vr >= 0:
        return None
    rb = params.rho_bar
    m1, m2 = State(rb, left.u_tilde), State(rb, right.u_tilde)
    waves = _strip([_a(left, rb, t, params), Wave(VERTICAL_C0, m1, m2, 0.0, 0.0),
                    _a(m2, right.rho, t, params)])
    if not _ordered(waves):
        return None
    return WavePattern("VI", waves, (m1, m2))


def _delta_speed(left, right, t, params) -> Optional[float]:
    try:
        if params.a_exp < 0:
            roots = dl.restart_speed_roots(left, right, params, t)
            good = [s for s in roots if dl.overcompressive_at(left, right, s, t, params)]
            return good[0] if len(good) == 1 else None
        roots = dl.restart_speed_roots(left, right, params, t)
        return float(roots[0]) if roots.size else None
    except RiemannError:
        return None


def _direct_delta(left, right, t, params, ok: Optional[bool]) -> Optional[WavePattern]:
    if ok is None:
        ok = dl.delta_admissible(left, right, params, t)
    if not ok:
        return None
    s = _delta_speed(left, right, t, params)
    if s is None:
        s = math.nan
    return WavePattern("IV", (Wave(DELTA, left, right, s, s),), ())


def _sonic_delta(left, right, t, params) -> Optional[Tuple[State, float]]:
    """Middle state M on u_tilde = u_L where an a-rarefaction from ``left`` ends
    with speed equal to an overcompressive delta from M to ``right``.

    Overcompressivity asks for x' < lambda_a(M) and speed ordering for
    lambda_a(M) <= x', so the attachment is sonic; the remaining strict
    inequalities max(lambda(R)) < x' < lambda_0(M) are checked there.
    """
    er = eigenvalues(right, t, params)
    lo = max(er.lambda_a, er.lambda_0)
    lam_l = lambda_a(left, t, params)
    I = params.I(t)
    u = left.u_tilde

    def speed(rho):
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        hi_s, lo_s = dl.restart_roots_vec(rho, np.full_like(rho, u), right, params, t)
        lam0 = (u + I) * (1.0 - ratio_power(rho, params))
        pick = np.where((lo < hi_s) & (hi_s < lam0), hi_s, np.nan)
        return np.where(np.isnan(pick) & (lo < lo_s) & (lo_s < lam0), lo_s, pick)

    def g(rho):
        lam_m = (u + I) * (1.0 - (params.a_exp + 1.0) * ratio_power(np.asarray(rho, dtype=float), params))
        out = speed(rho) - lam_m
        return out if np.ndim(rho) else float(out[0])

    grid = left.rho * _UNIT_SONIC
    for rho in bracket_roots(g, grid, vectorized=True):
        m = State(rho, u)
        if not lam_l < lambda_a(m, t, params):
            continue  # not reached by a rarefaction
        s = float(speed(rho)[0])
        if np.isfinite(s):
            return m, s
    return None


def _prefixed_delta(left, right, t, params) -> Optional[WavePattern]:
    found = _sonic_delta(left, right, t, params)
    if found is None:
        return None
    m, s = found
    ra = _a(left, m.rho, t, params)
    return WavePattern("IV_a", (ra, Wave(DELTA, m, right, s, s)), (m,))


def _vacuum_a_kind(wet: State, wet_on_left: bool, t: float, params: SystemParams) -> Optional[str]:
    """Kind of the a-wave joining vacuum and a state on the far side of rho_bar.

    The jump travels at lambda_0 of the wet state for any middle state on
    its 0-contact, and the sign of the physical velocity is the same all
    along that branch, so the Lax test with the extended vacuum speeds
    decides the kind without fixing the middle state.
    """
    if params.a_exp == -1:
        return CONTACT_A_W
    s = lambda_0(wet, t, params)
    lam_wet = lambda_a(wet, t, params)
    lam_vac = eigenvalues(State(0.0, wet.u_tilde), t, params).lambda_a
    if wet_on_left:
        shock = lam_vac < s < lam_wet
        fan = lam_wet < lam_vac
    else:
        shock = lam_wet < s < lam_vac
        fan = lam_vac < lam_wet
    if shock:
        return SHOCK_A
    if fan:
        return RAREFACTION_A
    return None


def _vacuum(left, right, t, params) -> Optional[WavePattern]:
    """Region V: left part into vacuum, empty gap, right part out of vacuum."""
    rb = params.rho_bar
    vl = left.u_tilde + params.I(t)
    # a state on rho_bar joins vacuum like the limit from below: a zero-speed
    # contact to (0, -I), the only point of its contact set at rho = 0
    if left.rho < rb + EQ_TOL:
        if params.a_exp > 0 and vl > 0:
            # finite-speed fan straight into vacuum
            edge_l = State(0.0, left.u_tilde)
            part_l = [Wave(RAREFACTION_A, left, edge_l, lambda_a(left, t, params), vl)]
        else:
            edge_l = State(0.0, vacuum_limit_u(left, t, params))
            part_l = [_c0(left, edge_l, t, params)]
        mid_l = [edge_l]
    else:
        kind = _vacuum_a_kind(left, True, t, params)
        if kind is None:
            return None
        s = lambda_0(left, t, params)
        part_l = [Wave(CONTACT_0, left, left, s, s), Wave(kind, left, State(0.0, left.u_tilde), s, s)]
        mid_l = [None, None]
    if right.rho < rb + EQ_TOL:
        edge_r = State(0.0, vacuum_limit_u(right, t, params))
        part_r = [_c0(edge_r, right, t, params)]
        mid_r = [edge_r]
    else:
        kind = _vacuum_a_kind(right, False, t, params)
        if kind is None:
            return None
        s = lambda_0(right, t, params)
        part_r = [Wave(kind, State(0.0, right.u_tilde), right, s, s), Wave(CONTACT_0, right, right, s, s)]
        mid_r = [None, None]
    gap_l = part_l[-1].fastest
    gap_r = part_r[0].slowest
    gap = Wave(VACUUM, State(0.0, 0.0), State(0.0, 0.0), gap_l, gap_r)
    waves = tuple(part_l) + (gap,) + tuple(part_r)
    if not _ordered(waves):
        return None
    tag = "".join(_TAG[w.short] for w in waves)
    return WavePattern("V", waves, tuple(mid_l + mid_r), subregion=tag)


def classify_region(left: State, right: State, params: SystemParams, t: float = 0.0,
                    delta_ok: Optional[bool] = None) -> WavePattern:
    """Riemann solution pattern from ``left`` to ``right`` at time t.

    ``delta_ok`` lets a caller that already ran the overcompressive scan
    pass its verdict for this cell instead of integrating again.
    """
    case_id(params, left, t)  # raises on full degeneracy
    if left == right:
        return WavePattern("I_a", (), ())
    tried = {}
    for name, build in (("classical", lambda: _classical(left, right, t, params)),
                        ("critical", lambda: _through_critical(left, right, t, params)),
                        ("delta", lambda: _direct_delta(left, right, t, params, delta_ok)),
                        ("sonic-delta", lambda: _prefixed_delta(left, right, t, params)),
                        ("vacuum", lambda: _vacuum(left, right, t, params))):
        try:
            pat = build()
        except RiemannError as exc:
            tried[name] = f"{type(exc).__name__}: {exc}"
            continue
        if pat is not None:
            return pat
        tried[name] = "not admissible"
    return WavePattern(UNCLASSIFIABLE, (), (), diagnostics=tried)


# ---------------------------------------------------------------------------
# state-space maps

@dataclass
class RegionMap:
    rho: np.ndarray
    u_tilde: np.ndarray
    labels: np.ndarray  # rows: u_tilde, cols: rho
    subregions: np.ndarray
    overlays: Dict[str, Tuple[np.ndarray, np.ndarray]]
    case: Optional[CaseId] = None

    def regions(self) -> set:
        return set(np.unique(self.labels).tolist())


def _frontier(scan: dl.ScanResult) -> Tuple[np.ndarray, np.ndarray]:
    """Cell centres on the edge of the overcompressive set."""
    m = scan.mask
    edge = np.zeros_like(m)
    edge[:, 1:] |= m[:, 1:] != m[:, :-1]
    edge[1:, :] |= m[1:, :] != m[:-1, :]
    edge &= m
    k, i = np.nonzero(edge)
    return scan.rho[i], scan.u_tilde[k]


def boundary_overlays(left: State, params: SystemParams, t: float,
                      window: Tuple[float, float, float], n: int = 400) -> Dict[str, Tuple[np.ndarray, np.ndarray]]:
    """Polylines of the curves that bound the regions, clipped to the window."""
    rho_max, u_min, u_max = window
    rb = params.rho_bar
    rho = np.linspace(rho_max / n, rho_max, n)
    out = {"S/R": (np.array([0.0, rho_max]), np.array([left.u_tilde] * 2)),
           "rho_bar": (np.array([rb, rb]), np.array([u_min, u_max])),
           "A(t)": (np.array([0.0, rho_max]), np.array([params.A(t)] * 2))}
    if abs(left.rho - rb) >= EQ_TOL:
        for br in contact_branches(left, t, params, rho):
            keep = (br.u_tilde >= u_min) & (br.u_tilde <= u_max) & (br.rho <= rho_max)
            out[br.branch] = (br.rho[keep], br.u_tilde[keep])
        asym = infinity_limit_u(left, t, params)
        out["asymptote"] = (np.array([0.0, rho_max]), np.array([asym] * 2))
    return out


def region_map(left: State, params: SystemParams, t: float,
               window: Tuple[float, float, float], n) -> RegionMap:
    """Classify every cell centre of an n-by-n grid over (0, rho_max] x [u_min, u_max]."""
    rho_max, u_min, u_max = window
    if rho_max <= 0:
        raise ValueError("window must include positive densities")
    nr, nu = (n, n) if np.isscalar(n) else n
    rho = (np.arange(nr) + 0.5) * rho_max / nr
    u = u_min + (np.arange(nu) + 0.5) * (u_max - u_min) / nu if nu > 1 else np.array([0.5 * (u_min + u_max)])
    R, U = np.meshgrid(rho, u)
    if params.a_exp < 0:
        dmask, dflag = dl._scan_neg(left, params, t, R, U, dl.DEFAULT_DT)
        dmask &= ~dflag
    else:
        dmask, _ = dl._scan_pos(left, params, t, R, U, dl.DEFAULT_DT)
    labels = np.empty(R.shape, dtype=object)
    subs = np.empty(R.shape, dtype=object)
    for k in range(nu):
        for i in range(nr):
            pat = classify_region(left, State(R[k, i], U[k, i]), params, t,
                                  delta_ok=bool(dmask[k, i]))
            labels[k, i] = pat.region
            subs[k, i] = pat.subregion
    overlays = boundary_overlays(left, params, t, window)
    scan = dl.ScanResult(rho, u, dmask, np.zeros_like(dmask), t)
    overlays["overcompressive"] = _frontier(scan)
    return RegionMap(rho, u, labels.astype(str), subs.astype(str), overlays,
                     case_id(params, left, t))
