"""Read a wave structure off a computed profile.

Each inter-cell difference is split between the two families using their
Riemann invariants: u_tilde is constant across a-waves, lambda_0 across
0-contacts.  Runs of differences dominated by one family become segments;
segments are then labelled with the jump / ramp / contact tests below.

Thresholds
----------
jump
    largest inter-cell density difference exceeds ``JUMP_FACTOR`` times the
    mean difference over a window of ``JUMP_WINDOW`` cells on either side.
rarefaction
    monotone density ramp with u_tilde varying by less than ``RAMP_TOL``
    (relative) and no jump.
contact
    0-family segment whose end states share lambda_0 within ``LAMBDA_TOL``;
    an a-family segment with lambda_a shared the same way is ``Contact_a``.
vacuum
    density below ``10 * VACUUM_FLOOR``.
delta candidate
    peak density above ``DELTA_FACTOR * max(rho_L, rho_R, rho_bar)``;
    growth under refinement is checked by :func:`refine_study`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..model import VACUUM_FLOOR, State, SystemParams, eigen_arrays, ratio_power

SHOCK_A = "Shock_a"
RAREFACTION_A = "Rarefaction_a"
CONTACT_0 = "Contact_0"
CONTACT_A = "Contact_a"
VACUUM = "Vacuum"
DELTA = "DeltaCandidate"
UNKNOWN = "Unknown"

#: segment kind -> figure notation
SHORT = {SHOCK_A: "S_a", RAREFACTION_A: "R_a", CONTACT_0: "C_0", CONTACT_A: "C_a",
         VACUUM: "V", DELTA: "S_delta", UNKNOWN: "?"}

JUMP_FACTOR = 10.0
JUMP_WINDOW = 100
RAMP_TOL = 0.05
LAMBDA_TOL = 0.05
VACUUM_FACTOR = 10.0
DELTA_FACTOR = 5.0
NOISE = 1e-6
SIGNIFICANCE = 0.01
DELTA_BASE = 1.01
DRY = 1e-3
MAX_GAP = 4
TAIL = 0.005


@dataclass(frozen=True)
class Segment:
    kind: str
    start: int
    stop: int
    xi_left: float
    xi_right: float
    left: State
    right: State
    strength: float = 0.0
    family: str = ""

    @property
    def short(self) -> str:
        return SHORT[self.kind]


@dataclass
class WaveReport:
    t: float
    segments: List[Segment] = field(default_factory=list)
    plateaus: List[State] = field(default_factory=list)
    max_rho: float = 0.0
    delta_x: Optional[float] = None

    @property
    def sequence(self) -> Tuple[str, ...]:
        return tuple(s.short for s in self.segments)

    @property
    def kinds(self) -> Tuple[str, ...]:
        return tuple(s.kind for s in self.segments)

    def __str__(self) -> str:
        return " + ".join(self.sequence) if self.segments else "(none)"


@dataclass
class _Run:
    family: str
    start: int           # first interface index
    stop: int            # last interface index (inclusive)
    strength: float


def _family_split(rho, u, I, params, u_scale, rho_scale):
    """Per-interface (a-strength, 0-strength) from Riemann-invariant changes."""
    rm = 0.5 * (rho[1:] + rho[:-1])
    um = 0.5 * (u[1:] + u[:-1])
    d_rho = np.diff(rho)
    d_u = np.diff(u)
    phi = ratio_power(rm, params)
    denom = params.a_exp * phi * (um + I)
    tiny = np.abs(denom) < 1e-300
    # slope d rho / d u_tilde along a 0-contact
    slope = np.where(tiny, 0.0, rm * (1.0 - phi) / np.where(tiny, 1.0, denom))
    a_part = d_rho - slope * d_u
    return np.abs(a_part) / rho_scale, np.abs(d_u) / u_scale


def _runs(fam: np.ndarray, active: np.ndarray, strength: np.ndarray,
          barrier: np.ndarray) -> List[_Run]:
    runs: List[_Run] = []
    cur: Optional[_Run] = None
    gap = 0
    for i in range(fam.size):
        if barrier[i]:
            if cur is not None:
                runs.append(cur)
            cur, gap = None, 0
            continue
        if not active[i]:
            gap += 1
            if cur is not None and gap > MAX_GAP:
                runs.append(cur)
                cur = None
            continue
        f = "a" if fam[i] else "0"
        if cur is not None and cur.family == f:
            cur.stop = i
            cur.strength += strength[i]
        else:
            if cur is not None:
                runs.append(cur)
            cur = _Run(f, i, i, strength[i])
        gap = 0
    if cur is not None:
        runs.append(cur)
    return runs


def _merge(runs: List[_Run], barrier: np.ndarray) -> List[_Run]:
    """Drop insignificant runs, then fuse neighbours of the same family."""
    kept = [r for r in runs if r.strength >= SIGNIFICANCE]
    out: List[_Run] = []
    for r in kept:
        if out and out[-1].family == r.family and not barrier[out[-1].stop:r.start + 1].any():
            out[-1].stop = r.stop
            out[-1].strength += r.strength
        else:
            out.append(_Run(r.family, r.start, r.stop, r.strength))
    return out


def _trim(run: _Run, strength: np.ndarray, fam_a: np.ndarray) -> _Run:
    """Shrink a run to the core carrying all but TAIL of its own-family strength."""
    own = strength[run.start:run.stop + 1] * (fam_a[run.start:run.stop + 1] == (run.family == "a"))
    c = np.cumsum(own)
    total = c[-1]
    lo = int(np.searchsorted(c, TAIL * total))
    hi = int(np.searchsorted(c, (1.0 - TAIL) * total))
    return _Run(run.family, run.start + lo, run.start + min(hi, own.size - 1), run.strength)


def _is_jump(rho: np.ndarray, start: int, stop: int, barrier: np.ndarray) -> bool:
    """Largest difference in [start, stop] against the window mean.

    Interfaces touching vacuum or a delta candidate are left out of the mean.
    """
    d = np.abs(np.diff(rho))
    k = start + int(np.argmax(d[start:stop + 1]))
    lo, hi = max(0, k - JUMP_WINDOW), min(d.size, k + JUMP_WINDOW + 1)
    window = d[lo:hi][~barrier[lo:hi]]
    mean = window.mean() if window.size else 0.0
    return mean > 0 and d[k] > JUMP_FACTOR * mean


def _same(x: float, y: float, scale: float) -> bool:
    return abs(x - y) <= LAMBDA_TOL * max(abs(x), abs(y), scale)


def extract_wave_structure(snapshot, left: State, right: State,
                           params: SystemParams, coarse=None) -> WaveReport:
    """Segment a snapshot into waves; see the module docstring for the rules.

    Parameters
    ----------
    snapshot : Snapshot
        Profile to read.
    left, right : State
        Riemann data; they set the scales for the significance tests.
    params : SystemParams
    coarse : Snapshot, optional
        The same problem at half the resolution.  When given, a delta
        candidate must also have grown relative to it.  For zero-source data
        the snapshot at t/2 of the same run is exactly this level, since the
        solution is self-similar and the grid spacing is fixed.
    """
    rho = np.asarray(snapshot.rho, dtype=float)
    u = np.asarray(snapshot.u_tilde, dtype=float)
    x = np.asarray(snapshot.x, dtype=float)
    t = float(snapshot.t)
    I = params.I(t)
    xi = x / t if t > 0 else x
    report = WaveReport(t=t, max_rho=float(rho.max()) if rho.size else 0.0)
    if rho.size < 2:
        return report

    rho_scale = max(left.rho, right.rho)
    u_scale = max(abs(left.u_tilde), abs(right.u_tilde), abs(left.u_tilde - right.u_tilde), 1e-12)
    lam_l = eigen_arrays(np.array([max(left.rho, VACUUM_FLOOR)]), np.array([left.u_tilde]), I, params)
    lam_r = eigen_arrays(np.array([max(right.rho, VACUUM_FLOOR)]), np.array([right.u_tilde]), I, params)
    speed_scale = max(float(np.max(np.abs(np.r_[lam_l, lam_r]))), 1e-12)

    vac = rho < VACUUM_FACTOR * VACUUM_FLOOR
    cap = DELTA_FACTOR * max(left.rho, right.rho, params.rho_bar)
    delta = np.zeros_like(vac)
    grew = coarse is None or report.max_rho > float(np.max(coarse.rho))
    if report.max_rho > cap and grew:
        k = int(np.argmax(rho))
        base = DELTA_BASE * max(left.rho, right.rho)
        lo = k
        while lo > 0 and rho[lo - 1] > base:
            lo -= 1
        hi = k
        while hi < rho.size - 1 and rho[hi + 1] > base:
            hi += 1
        delta[lo:hi + 1] = True
        report.delta_x = float(x[k])

    # interface i joins cells i and i+1
    barrier = vac[1:] | vac[:-1] | delta[1:] | delta[:-1]
    safe = np.where(vac, params.rho_bar, rho)
    sa, s0 = _family_split(safe, u, I, params, u_scale, rho_scale)
    sa[barrier] = 0.0
    s0[barrier] = 0.0
    fam_a = sa >= s0
    strength = np.where(fam_a, sa, s0)
    active = strength > NOISE
    runs = [_trim(r, strength, fam_a) for r in _merge(_runs(fam_a, active, strength, barrier), barrier)]

    items = []  # (start cell, stop cell, kind or run)
    for r in runs:
        items.append((r.start, r.stop + 1, r))
    for mask, kind in ((vac, VACUUM), (delta, DELTA)):
        idx = np.flatnonzero(mask)
        if idx.size:
            splits = np.flatnonzero(np.diff(idx) > 1)
            for seg in np.split(idx, splits + 1):
                items.append((int(seg[0]), int(seg[-1]), kind))
    items.sort(key=lambda it: it[0])

    def state_at(i):
        i = min(max(i, 0), rho.size - 1)
        return State(float(rho[i]), float(u[i]))

    segments: List[Segment] = []
    for n, (i0, i1, what) in enumerate(items):
        lstate, rstate = state_at(i0), state_at(i1)
        if isinstance(what, str):
            segments.append(Segment(what, i0, i1, float(xi[i0]), float(xi[i1]),
                                    state_at(i0 - 1), state_at(i1 + 1)))
            continue
        run = what
        if run.family == "0":
            la = eigen_arrays(np.array([max(lstate.rho, VACUUM_FLOOR), max(rstate.rho, VACUUM_FLOOR)]),
                              np.array([lstate.u_tilde, rstate.u_tilde]), I, params)[1]
            kind = CONTACT_0 if _same(la[0], la[1], 1e-3 * speed_scale) else UNKNOWN
        else:
            kind = _label_a(rho, i0, i1, lstate, rstate, I, params, u_scale, speed_scale, barrier)
        segments.append(Segment(kind, i0, i1, float(xi[i0]), float(xi[i1]), lstate, rstate,
                                run.strength, run.family))

    segments = _vacuum_edges(_absorb_delta_feet(segments), params, DRY * rho_scale)
    report.segments = segments
    report.plateaus = _plateaus(segments, rho, u, left, right)
    return report


def _label_a(rho, i0, i1, lstate, rstate, I, params, u_scale, speed_scale, barrier) -> str:
    """Label an a-family segment.

    A weak shock can be smeared over more cells than the jump window
    resolves, so a ramp that fails the jump test is still called a shock
    when its measured end states are compressive (lambda_a drops across it).
    """
    if abs(rstate.u_tilde - lstate.u_tilde) / u_scale >= RAMP_TOL:
        return UNKNOWN
    lam = eigen_arrays(np.array([max(lstate.rho, VACUUM_FLOOR), max(rstate.rho, VACUUM_FLOOR)]),
                       np.array([lstate.u_tilde, rstate.u_tilde]), I, params)[0]
    if _same(lam[0], lam[1], 1e-3 * speed_scale):
        return CONTACT_A
    if _is_jump(rho, i0, max(i0, i1 - 1), barrier) or lam[0] > lam[1]:
        return SHOCK_A
    d = np.diff(rho[i0:i1 + 1])
    if np.all(d >= -1e-12) or np.all(d <= 1e-12):
        return RAREFACTION_A
    return UNKNOWN


def _absorb_delta_feet(segments: List[Segment]) -> List[Segment]:
    """Fold into a delta candidate the neighbours narrower than its core.

    The smeared delta carries a steep foot on each side whose width is set
    by the scheme, not by the solution; anything of that width or less next
    to the concentration cannot be resolved as a separate wave.
    """
    out = list(segments)
    k = 0
    while k < len(out):
        seg = out[k]
        if seg.kind != DELTA:
            k += 1
            continue
        width = seg.stop - seg.start + 1
        lo, hi = seg.start, seg.stop
        while k > 0 and out[k - 1].kind not in (DELTA, VACUUM) \
                and out[k - 1].stop - out[k - 1].start < width and lo - out[k - 1].stop <= width:
            lo = out[k - 1].start
            out.pop(k - 1)
            k -= 1
        while k + 1 < len(out) and out[k + 1].kind not in (DELTA, VACUUM) \
                and out[k + 1].stop - out[k + 1].start < width and out[k + 1].start - hi <= width:
            hi = out[k + 1].stop
            out.pop(k + 1)
        out[k] = Segment(DELTA, lo, hi, seg.xi_left, seg.xi_right, seg.left, seg.right)
        k += 1
    return out


def _absorb_dry(segments: List[Segment], dry: float) -> List[Segment]:
    # u_tilde is meaningless in near-empty cells; swallow waves living there
    out: List[Segment] = []
    for seg in segments:
        is_dry = seg.kind != VACUUM and max(seg.left.rho, seg.right.rho) < dry
        if out and out[-1].kind == VACUUM and is_dry:
            v = out[-1]
            out[-1] = Segment(VACUUM, v.start, seg.stop, v.xi_left, seg.xi_right, v.left, seg.right)
        elif out and seg.kind == VACUUM and out[-1].kind != VACUUM \
                and max(out[-1].left.rho, out[-1].right.rho) < dry:
            p = out.pop()
            out.append(Segment(VACUUM, p.start, seg.stop, p.xi_left, seg.xi_right, p.left, seg.right))
        else:
            out.append(seg)
    return out


def _vacuum_edges(segments: List[Segment], params: SystemParams, dry: float) -> List[Segment]:
    """Relabel the mixing layer between a wet state and vacuum.

    A jump to vacuum satisfies the jump conditions at speed lambda_0 of its
    wet side, whatever the family; averaging with empty cells keeps u_tilde
    fixed, so the invariant test always sees it as a-family.  The wet state
    reaches vacuum along its own 0-contact only when it lies on the vacuum
    side of rho_bar; otherwise an a-wave (a contact when a = -1) is needed.
    """
    out = _absorb_dry(list(segments), dry)
    for k, seg in enumerate(out):
        if seg.family != "a" or seg.kind == RAREFACTION_A:
            continue
        touches = (k > 0 and out[k - 1].kind == VACUUM) or (k + 1 < len(out) and out[k + 1].kind == VACUUM)
        if not touches:
            continue
        wet = seg.right if k > 0 and out[k - 1].kind == VACUUM else seg.left
        if wet.rho < params.rho_bar:
            kind = CONTACT_0
        else:
            kind = CONTACT_A if params.a_exp == -1 else SHOCK_A
        out[k] = Segment(kind, seg.start, seg.stop, seg.xi_left, seg.xi_right,
                         seg.left, seg.right, seg.strength, seg.family)
    merged: List[Segment] = []
    for seg in out:
        if merged and merged[-1].kind == seg.kind == CONTACT_0:
            prev = merged[-1]
            merged[-1] = Segment(CONTACT_0, prev.start, seg.stop, prev.xi_left, seg.xi_right,
                                 prev.left, seg.right, prev.strength + seg.strength, prev.family)
        else:
            merged.append(seg)
    return merged


def _plateaus(segments: Sequence[Segment], rho, u, left: State, right: State) -> List[State]:
    """Median state of the cells strictly between consecutive segments."""
    out = []
    edges = [-1] + [v for s in segments for v in (s.start, s.stop)] + [rho.size]
    for a, b in zip(edges[::2], edges[1::2]):
        lo, hi = a + 1, b
        if hi > lo:
            out.append(State(float(np.median(rho[lo:hi])), float(np.median(u[lo:hi]))))
        else:
            out.append(State(float(rho[min(max(lo, 0), rho.size - 1)]),
                             float(u[min(max(lo, 0), rho.size - 1)])))
    return out
