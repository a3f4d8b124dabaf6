import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from kkriemann.delta import (LAYER_EXPONENTS, NEG_A, POS_A, AmbiguousRoot, Jumps,
                             delta_admissible, initial_roots_vec, initial_speed_roots,
                             integrate_delta, integrate_delta_neg, integrate_delta_pos,
                             overcompressive_at, overcompressive_bounds,
                             pos_delta_internal_density, restart_speed_roots,
                             scan_overcompressive, select_initial_speed, time_grid)
from kkriemann.errors import Inadmissible, MomentumJumpZero, NoJump, NoRealRoot
from kkriemann.model import SourceTerm, State, SystemParams

import oracles

P4 = SystemParams(-1.5, 5.0)
L4, R4 = State(3.0, 3.0), State(9.0, -8.0)

# frozen from oracles.delta_quadratic and a bisection on the polynomial
S_MINUS = -4.209192387840913
S_OTHER = -14.594281540320042


def test_quadratic_coefficients_by_direct_brackets():
    qa, qb, qc = oracles.delta_quadratic((3.0, 3.0), (9.0, -8.0), -1.5, 5.0)
    # the listed polynomial is the same one multiplied by -1
    assert (-qa, -qb, -qc) == pytest.approx((6.0, 112.8208, 368.581), abs=5e-4)


def test_initial_roots_example():
    roots = initial_speed_roots(L4, R4, P4)
    assert roots == pytest.approx((-4.2092, -14.594), abs=1e-3)
    qa, qb, qc = oracles.delta_quadratic((3.0, 3.0), (9.0, -8.0), -1.5, 5.0)
    poly = lambda s: qa * s * s + qb * s + qc
    hi = oracles.bisect_root(poly, -10.0, 0.0)
    lo = oracles.bisect_root(poly, -30.0, -10.0)
    assert roots == pytest.approx((hi, lo), rel=1e-12)
    assert (hi, lo) == pytest.approx((S_MINUS, S_OTHER), rel=1e-12)


def test_root_errors_and_linear_case():
    with pytest.raises(NoJump):
        initial_speed_roots(L4, L4, P4)
    roots = initial_speed_roots(State(3.0, 3.0), State(3.0, -2.0), P4)
    assert len(roots) == 1
    qa, qb, qc = oracles.delta_quadratic((3.0, 3.0), (3.0, -2.0), -1.5, 5.0)
    assert qa == 0.0 and roots[0] == pytest.approx(-qc / qb, rel=1e-14)
    # [rho] = 6 > 0 with tiny opposing momentum: discriminant negative
    with pytest.raises(NoRealRoot):
        initial_speed_roots(State(9.0, 0.0), State(3.0, 6.0), SystemParams(-1.5, 5.0))


def test_overcompressive_examples():
    lo, hi = overcompressive_bounds(L4, R4, 0.0, P4)
    assert (lo, hi) == pytest.approx((-4.6873, -3.4550), abs=1e-4)
    # second route: four oracle eigenvalues
    assert lo == pytest.approx(max(oracles.eigen(9.0, -8.0, -1.5, 5.0)), rel=1e-14)
    assert hi == pytest.approx(min(oracles.eigen(3.0, 3.0, -1.5, 5.0)), rel=1e-14)
    assert overcompressive_at(L4, R4, -4.2092, 0.0, P4)
    assert not overcompressive_at(L4, R4, -14.594, 0.0, P4)
    assert not overcompressive_at(L4, L4, 1.0, 0.0, P4)
    assert select_initial_speed(L4, R4, P4) == pytest.approx(S_MINUS, rel=1e-13)


def test_layer_exponents_documented():
    assert LAYER_EXPONENTS[NEG_A] == (1, 1, 0, 0)
    assert LAYER_EXPONENTS[POS_A] == (1, 1, "-a", "-a")


# trajectories ------------------------------------------------------------------

def test_neg_closed_form_zero_source():
    tr = integrate_delta_neg(L4, R4, P4, t_end=10.0, dt=1e-3)
    assert tr.times.size == 10001
    j = Jumps.between(L4, R4, P4)
    k1 = j.kappa1(S_MINUS, 0.0)
    assert np.allclose(tr.x, S_MINUS * tr.times, rtol=1e-10, atol=1e-14)
    assert np.allclose(tr.zeta, -k1 * tr.times, rtol=1e-10, atol=1e-14)
    assert np.allclose(tr.eta, S_MINUS, rtol=1e-10)
    assert j.kappa2(S_MINUS, 0.0) / k1 == pytest.approx(S_MINUS, rel=1e-10)


def test_initial_strength_growth():
    tr = integrate_delta_neg(L4, R4, P4, t_end=0.01, dt=1e-3)
    slope = (tr.zeta[1] - tr.zeta[0]) / tr.times[1]
    assert slope == pytest.approx(6.5656, abs=1e-3)
    d = oracles.delta_brackets((3.0, 3.0), (9.0, -8.0), -1.5, 5.0)
    assert slope == pytest.approx(-(S_MINUS * d[0] - d[2]), rel=1e-10)


def test_case4_position_at_three():
    tr = integrate_delta(L4, R4, P4, 3.0)
    assert tr.at(3.0)[0] == pytest.approx(-12.6276, abs=1e-4)


def test_t_end_zero_single_point():
    tr = integrate_delta_neg(L4, R4, P4, 0.0)
    assert (tr.times.tolist(), tr.x.tolist(), tr.zeta.tolist()) == ([0.0], [0.0], [0.0])
    assert tr.eta[0] == pytest.approx(S_MINUS)
    pp = SystemParams(0.5, 5.0)
    tr = integrate_delta_pos(State(3.0, 3.0), State(7.0, -1.0), pp, 0.0, check=False)
    assert (tr.x.tolist(), tr.zeta.tolist()) == ([0.0], [0.0])


def test_neg_rejects_inadmissible_and_wrong_regime():
    with pytest.raises(Inadmissible):
        integrate_delta_neg(R4, L4, P4, 1.0)
    with pytest.raises(ValueError):
        integrate_delta_neg(L4, R4, SystemParams(0.5, 5.0), 1.0)
    with pytest.raises(ValueError):
        integrate_delta_pos(L4, R4, P4, 1.0)


def _pos_pair():
    pp = SystemParams(0.5, 5.0)
    left = State(3.0, -3.0)
    for rho in np.linspace(5.5, 15.0, 40):
        for u in np.linspace(0.5, 10.0, 40):
            right = State(float(rho), float(u))
            j = Jumps.between(left, right, pp)
            if j.d_m != 0 and overcompressive_at(left, right, j.f2(0.0) / j.d_m, 0.0, pp):
                return pp, left, right
    raise AssertionError("no overcompressive a > 0 pair found")


def test_pos_closed_form_zero_source():
    pp, left, right = _pos_pair()
    tr = integrate_delta_pos(left, right, pp, 10.0)
    d = oracles.delta_brackets(tuple(left), tuple(right), 0.5, 5.0)
    xp = d[3] / d[1]
    zp = d[2] - d[0] * d[3] / d[1]
    assert zp > 0
    assert np.allclose(tr.x, xp * tr.times, rtol=1e-10, atol=1e-14)
    assert np.allclose(tr.zeta, zp * tr.times, rtol=1e-10, atol=1e-14)
    assert np.all(tr.eta == 0.0)
    # only the second jump condition holds at the delta speed
    assert xp * d[1] - d[3] == pytest.approx(0.0, abs=1e-12)
    assert abs(xp * d[0] - d[2]) > 1e-3
    eta0 = pos_delta_internal_density(tr, pp)
    assert np.all(np.isfinite(eta0[1:]))


def test_pos_internal_velocity_tracks_source():
    pp, left, right = _pos_pair()
    src = SystemParams(0.5, 5.0, SourceTerm.constant(0.01))
    tr = integrate_delta_pos(left, right, src, 2.0, check=False)
    assert np.allclose(tr.eta, -0.01 * tr.times)


def test_pos_momentum_jump_zero():
    with pytest.raises(MomentumJumpZero):
        integrate_delta_pos(State(3.0, 2.0), State(6.0, 1.0), SystemParams(0.5, 5.0), 1.0)


def test_time_grid():
    assert time_grid(0.0, 0.1).tolist() == [0.0]
    g = time_grid(1.0, 0.3)
    assert g[-1] == 1.0 and np.all(np.diff(g) > 0) and np.all(np.diff(g) <= 0.3 + 1e-15)
    assert 0.45 in time_grid(1.0, 0.1, breaks=(0.45,)).tolist()
    with pytest.raises(ValueError):
        time_grid(-1.0, 0.1)


# system equivalence and properties -------------------------------------------------

def _residuals(tr, p):
    j = Jumps.between(tr.left, tr.right, p)
    t, h = tr.times, np.diff(tr.times)
    w = tr.zeta * tr.eta
    dz = (tr.zeta[2:] - tr.zeta[:-2]) / (h[1:] + h[:-1])
    dw = (w[2:] - w[:-2]) / (h[1:] + h[:-1])
    I = np.array([p.I(s) for s in t])[1:-1]
    xp = tr.xprime[1:-1]
    k1 = xp * j.d_rho - (j.d_m_mob + I * j.d_rho_mob)
    k2 = xp * j.d_m - (j.d_mu_mob + I * j.d_m_mob)
    return np.abs(dz + k1), np.abs(dw + k2)


@pytest.mark.parametrize("a0", [0.05, -0.2, 0.1])
def test_ode_residuals_with_source(a0):
    p = SystemParams(-1.5, 5.0, SourceTerm.constant(a0))
    tr = integrate_delta_neg(L4, R4, p, 2.0, dt=1e-3)
    r1, r2 = _residuals(tr, p)
    assert r1.max() < 1e-6 and r2.max() < 1e-6
    assert np.all(tr.zeta >= 0)


def test_start_is_resolved():
    # the first stored steps agree with a run ten times finer
    p = SystemParams(-1.5, 5.0, SourceTerm.constant(-0.2))
    a = integrate_delta_neg(L4, R4, p, 0.01, dt=1e-3)
    b = integrate_delta_neg(L4, R4, p, 0.01, dt=1e-4)
    assert np.allclose(a.eta, b.eta[::10], rtol=0, atol=1e-9)
    assert np.allclose(a.zeta, b.zeta[::10], rtol=0, atol=1e-11)


def test_piecewise_source_converges():
    p = SystemParams(-1.5, 5.0, SourceTerm(((0.0, 0.05), (1.0, -0.02))))
    a = integrate_delta_neg(L4, R4, p, 2.0, dt=1e-3)
    b = integrate_delta_neg(L4, R4, p, 2.0, dt=1e-4)
    assert 1.0 in a.times.tolist()
    assert np.allclose(a.x, b.x[::10], atol=1e-11)
    assert np.allclose(a.zeta, b.zeta[::10], atol=1e-11)


pair = st.tuples(st.floats(0.2, 15.0), st.floats(-10.0, 10.0))


@settings(max_examples=500)
@given(st.sampled_from([-2.0, -1.5, -0.5]), pair, pair)
def test_at_most_one_root_is_overcompressive(a, l, r):
    left, right = State(*l), State(*r)
    assume(left != right and abs(l[0] - 5.0) > 1e-6 and abs(r[0] - 5.0) > 1e-6)
    p = SystemParams(a, 5.0)
    try:
        roots = initial_speed_roots(left, right, p)
    except NoRealRoot:
        return
    good = [s for s in roots if overcompressive_at(left, right, s, 0.0, p)]
    if len(good) > 1 and good[0] != good[1]:
        with pytest.raises(AmbiguousRoot):
            select_initial_speed(left, right, p)
    assert len(set(good)) <= 1


def test_root_selection_sample():
    rng = np.random.default_rng(20261016)
    p = SystemParams(-1.5, 5.0)
    rho_l, u_l = rng.uniform(0.2, 15, 10_000), rng.uniform(-10, 10, 10_000)
    rho_r, u_r = rng.uniform(0.2, 15, 10_000), rng.uniform(-10, 10, 10_000)
    both = 0
    for i in range(10_000):
        left = State(rho_l[i], u_l[i])
        hi, lo, _ = initial_roots_vec(left, np.array([rho_r[i]]), np.array([u_r[i]]), p)
        ok = [np.isfinite(s[0]) and overcompressive_at(left, State(rho_r[i], u_r[i]), s[0], 0.0, p)
              for s in (hi, lo)]
        both += ok[0] and ok[1] and hi[0] != lo[0]
    assert both == 0


def test_vectorized_roots_match_scalar():
    rng = np.random.default_rng(3)
    R = rng.uniform(0.2, 15, 200)
    U = rng.uniform(-10, 10, 200)
    hi, lo, _ = initial_roots_vec(L4, R, U, P4)
    for k in range(200):
        try:
            roots = initial_speed_roots(L4, State(R[k], U[k]), P4)
        except NoRealRoot:
            assert np.isnan(hi[k])
            continue
        assert hi[k] == pytest.approx(roots[0], rel=1e-12, abs=1e-12)
        assert lo[k] == pytest.approx(roots[-1], rel=1e-12, abs=1e-12)


def test_restart_roots_reduce_to_initial_quadratic():
    assert restart_speed_roots(L4, R4, P4, 0.0) == pytest.approx(initial_speed_roots(L4, R4, P4))


# scans ---------------------------------------------------------------------------

def test_scan_at_zero_is_root_test():
    res = scan_overcompressive(L4, P4, 0.0, (0.5, 14.0), (-12.0, 12.0), 25)
    for k, u in enumerate(res.u_tilde):
        for i, rho in enumerate(res.rho):
            right = State(float(rho), float(u))
            if right == L4:
                assert not res.mask[k, i]
                continue
            try:
                expect = any(overcompressive_at(L4, right, s, 0.0, P4)
                             for s in initial_speed_roots(L4, right, P4))
            except (NoRealRoot, NoJump):
                expect = False
            assert res.mask[k, i] == expect
    assert res.lookup(9.0, -8.0) == delta_admissible(L4, R4, P4, 0.0)


def test_scan_excludes_left_state():
    res = scan_overcompressive(State(3.0, 3.0), P4, 0.0, (3.0, 9.0), (3.0, 9.0), 2)
    assert not res.mask[0, 0]
    with pytest.raises(ValueError):
        scan_overcompressive(L4, P4, 0.0, (1, 2), (1, 2), 1)


def test_scan_refinement_consistency():
    p = SystemParams(-0.5, 5.0, SourceTerm.constant(0.1))
    left = State(3.0, -4.0)
    rr, ur = (0.25, 14.75), (-12.25, 11.75)
    coarse = scan_overcompressive(left, p, 5.0, rr, ur, 30, dt=1e-2)
    fine = scan_overcompressive(left, p, 5.0, rr, ur, 59, dt=1e-2)
    # fine grid nodes 2k coincide with coarse nodes k; children are the
    # fine nodes around each coarse node
    checked = 0
    for k in range(1, 29):
        for i in range(1, 29):
            kids = fine.mask[2 * k - 1:2 * k + 2, 2 * i - 1:2 * i + 2]
            if kids.all() or not kids.any():
                checked += 1
                assert coarse.mask[k, i] == kids[1, 1]
    assert checked > 500


def test_scan_pos_counts_zero_momentum_cells():
    res = scan_overcompressive(State(2.0, 3.0), SystemParams(0.5, 5.0), 0.0, (0.0, 6.0), (0.0, 6.0), 7)
    # (3, 2) and (6, 1) have the same momentum as (2, 3)
    assert res.counters["momentum_jump_zero"] >= 2
    assert not res.lookup(3.0, 2.0) and not res.lookup(6.0, 1.0)


def test_admissible_in_time_shrinks():
    p = SystemParams(0.5, 5.0, SourceTerm.constant(0.1))
    left = State(3.0, -4.0)
    masks = [scan_overcompressive(left, p, t, (0.0, 12.0), (-12.0, 12.0), 25, dt=1e-2).mask
             for t in (0.0, 15.0, 30.0)]
    assert masks[0].sum() > 0
    for a, b in zip(masks, masks[1:]):
        assert not np.any(b & ~a)
