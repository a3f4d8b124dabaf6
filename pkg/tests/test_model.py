import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kkriemann.errors import FullDegeneracy, ValidationError, VacuumSingularity
from kkriemann.model import (Conserved, SourceTerm, State, SystemParams, density_side,
                             eigenvalues, eigenvectors, flux, lambda_0, mobility,
                             physical_velocity, regime, source_integral, to_conserved,
                             to_state, velocity_sign)

import oracles

P1 = SystemParams(-1.5, 5.0)
P19 = SystemParams(0.5, 5.0)

exponents = st.sampled_from([-2.5, -1.5, -1.0, -0.5, 0.5, 1.5])
densities = st.floats(0.05, 20.0)
velocities = st.floats(-10.0, 10.0)


# source term ---------------------------------------------------------------

def test_constant_source_integral():
    assert source_integral(SourceTerm.constant(0.1), 3.0) == pytest.approx(0.3, abs=1e-15)


def test_integral_at_zero_is_zero():
    assert source_integral(SourceTerm(((0, 0.3), (2, -1.0))), 0.0) == 0.0


def test_piecewise_integral_by_hand():
    src = SourceTerm(((0.0, 0.1), (10.0, -0.2)))
    assert source_integral(src, 15.0) == pytest.approx(0.1 * 10 - 0.2 * 5, abs=1e-15)


@pytest.mark.parametrize("pieces", [(), ((1.0, 0.1),), ((0.0, 0.1), (0.0, 0.2))])
def test_bad_pieces_rejected(pieces):
    with pytest.raises(ValidationError):
        SourceTerm(pieces)


@given(st.lists(st.tuples(st.floats(0.01, 5.0), st.floats(-1.0, 1.0)), min_size=1, max_size=5),
       st.floats(0.0, 30.0))
def test_integral_matches_quadrature(steps, t):
    starts = np.concatenate([[0.0], np.cumsum([d for d, _ in steps])[:-1]])
    src = SourceTerm(tuple(zip(starts, [v for _, v in steps])))
    # midpoint sums are exact on each piece once the breakpoints are on the grid
    grid = np.unique(np.concatenate([np.linspace(0, t, 2001), starts[starts < t], [t]]))
    mids = 0.5 * (grid[1:] + grid[:-1])
    ref = float(np.sum([src.value(m) for m in mids] * np.diff(grid)))
    assert src.integral(t) == pytest.approx(ref, abs=1e-9)


@given(st.floats(0.0, 50.0), st.floats(0.0, 50.0))
def test_integral_continuous_and_piecewise_linear(t, dt):
    src = SourceTerm(((0.0, 0.3), (5.0, -0.7), (12.5, 0.05)))
    lo, hi = sorted((t, t + dt * 1e-6))
    assert abs(src.integral(hi) - src.integral(lo)) <= 0.7 * (hi - lo) + 1e-12
    assert src.asymptote(t) == -src.integral(t)


# mobility and flux -----------------------------------------------------------

def test_mobility_values():
    assert mobility(5.0, P1) == 0.0
    assert mobility(3.0, P1) == pytest.approx(-1.151657, abs=1e-6)
    assert mobility(3.0, P19) == pytest.approx(0.225403, abs=1e-6)
    assert mobility(3.0, P1) == pytest.approx(1 - oracles.phi(3.0, -1.5, 5.0), rel=1e-14)


def test_mobility_vacuum_guard():
    with pytest.raises(VacuumSingularity):
        mobility(0.0, P1)
    assert mobility(0.0, P19) == 1.0


def test_flux_values():
    f1, f2 = flux(State(3.0, -3.0), 0.0, P1)
    # the listed values carry the 7-digit rounding of the mobility, so compare at 1e-6 relative
    assert f1 == pytest.approx(10.364913, rel=1e-6)
    assert f2 == pytest.approx(-31.094739, rel=1e-6)
    assert (f1, f2) == pytest.approx(oracles.flux(3.0, -3.0, -1.5, 5.0), rel=1e-14)
    assert flux(State(5.0, 2.0), 0.0, P1) == (0.0, 0.0)
    src = SystemParams(-1.5, 5.0, SourceTerm.constant(0.1))
    assert flux(State(3.0, -3.0), 30.0, src) == pytest.approx((0.0, 0.0), abs=1e-14)


@given(exponents, densities, velocities, st.floats(-3.0, 3.0))
def test_flux_against_oracle(a, rho, u, I):
    p = SystemParams(a, 5.0, SourceTerm.constant(I / 10.0))
    f1, f2 = flux(State(rho, u), 10.0, p)
    g1, g2 = oracles.flux(rho, u, a, 5.0, p.I(10.0))
    assert f1 == pytest.approx(g1, rel=1e-12, abs=1e-12)
    assert f2 == u * f1


# eigenstructure ---------------------------------------------------------------

def test_eigenvalue_examples():
    e = eigenvalues(State(3.0, -3.0), 0.0, P1)
    assert (e.lambda_a, e.lambda_0) == pytest.approx((-6.227486, 3.454971), rel=1e-6)
    assert (e.lambda_a, e.lambda_0) == pytest.approx(oracles.eigen(3.0, -3.0, -1.5, 5.0), rel=1e-14)
    assert e.lambda_a < 0 < e.lambda_0
    e = eigenvalues(State(3.0, -3.0), 0.0, P19)
    # last listed digit is off by one from rounding a rounded phi
    assert (e.lambda_a, e.lambda_0) == pytest.approx((0.485686, -0.676209), abs=2e-6)
    assert (e.lambda_a, e.lambda_0) == pytest.approx(oracles.eigen(3.0, -3.0, 0.5, 5.0), rel=1e-14)
    assert e.lambda_0 < 0 < e.lambda_a
    assert lambda_0(State(5.0, 7.3), 0.0, P1) == 0.0


def test_eigenvalues_vanish_at_zero_velocity():
    p = SystemParams(-1.5, 5.0, SourceTerm.constant(0.1))
    e = eigenvalues(State(3.0, -3.0), 30.0, p)
    assert e.lambda_a == pytest.approx(0.0, abs=1e-14) and e.lambda_0 == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("a, v, lam_a, lam_0", [
    (-1.5, 1.0, math.inf, math.inf), (-1.5, -1.0, -math.inf, -math.inf),
    (-0.5, 1.0, -math.inf, math.inf), (-0.5, -1.0, math.inf, -math.inf),
])
def test_vacuum_eigenvalues_are_extended_reals(a, v, lam_a, lam_0):
    e = eigenvalues(State(0.0, v), 0.0, SystemParams(a, 5.0))
    assert (e.lambda_a, e.lambda_0) == (lam_a, lam_0)


def test_eigenvector_examples():
    r_a, r_0 = eigenvectors(State(3.0, -3.0), 0.0, P1)
    assert list(r_a) == [1.0, 0.0]
    assert r_0 == pytest.approx([-3.454971, 9.682457], rel=1e-6)
    _, r_0 = eigenvectors(State(5.0, -3.0), 0.0, P1)
    assert r_0 == pytest.approx([0.0, -1.5 * -3.0])


def test_eigenvectors_vacuum_guard():
    with pytest.raises(VacuumSingularity):
        eigenvectors(State(0.0, 1.0), 0.0, P1)


def test_complex_step_jacobian_matches_hand_derivation():
    for a in (-1.5, -1.0, -0.5, 0.5):
        dg1, dh1 = oracles.jacobians(3.3, -2.1, a, 5.0, 0.4)
        dg2, dh2 = oracles.jacobians_closed(3.3, -2.1, a, 5.0, 0.4)
        assert np.allclose(dg1, dg2, rtol=1e-13, atol=1e-13)
        assert np.array_equal(dh1, dh2)


@settings(max_examples=300)
@given(exponents, densities, velocities, st.floats(-2.0, 2.0))
def test_eigenpairs_solve_generalized_problem(a, rho, u, I):
    p = SystemParams(a, 5.0, SourceTerm.constant(I))
    s = State(rho, u)
    dg, dh = oracles.jacobians(rho, u, a, 5.0, I)
    e = eigenvalues(s, 1.0, p)
    for lam, r in zip((e.lambda_a, e.lambda_0), eigenvectors(s, 1.0, p)):
        res = (dg - lam * dh) @ np.asarray(r)
        scale = max(1.0, float(np.abs(dg).max() * np.abs(r).max()))
        assert np.abs(res).max() <= 1e-9 * scale


@given(exponents, densities, velocities)
def test_zero_family_linearly_degenerate(a, rho, u):
    p = SystemParams(a, 5.0)
    _, r0 = eigenvectors(State(rho, u), 0.0, p)
    h = 1e-6 * max(1.0, rho)
    g_rho = (lambda_0(State(rho + h, u), 0.0, p) - lambda_0(State(rho - h, u), 0.0, p)) / (2 * h)
    g_u = (lambda_0(State(rho, u + 1e-6), 0.0, p) - lambda_0(State(rho, u - 1e-6), 0.0, p)) / 2e-6
    scale = max(1.0, abs(g_rho * r0[0]), abs(g_u * r0[1]))
    assert abs(g_rho * r0[0] + g_u * r0[1]) < 1e-7 * scale


@given(exponents.filter(lambda a: a != -1.0), densities, velocities.filter(lambda u: abs(u) > 1e-3))
def test_a_family_genuinely_nonlinear(a, rho, u):
    p = SystemParams(a, 5.0)
    h = 1e-5 * rho
    lam = lambda r: eigenvalues(State(r, u), 0.0, p).lambda_a
    fd = (lam(rho + h) - lam(rho - h)) / (2 * h)
    closed = oracles.grad_lambda_a_dot_ra(rho, u, a, 5.0)
    assert closed != 0.0
    assert fd == pytest.approx(closed, rel=1e-6)


@given(exponents, densities, velocities)
def test_eigenvalues_coincide_only_when_degenerate(a, rho, u):
    e = eigenvalues(State(rho, u), 0.0, SystemParams(a, 5.0))
    gap = a * oracles.phi(rho, a, 5.0) * u
    assert e.lambda_0 - e.lambda_a == pytest.approx(gap, rel=1e-9, abs=1e-12)
    assert (e.lambda_a == e.lambda_0) == (u == 0.0)


# conversions and predicates ------------------------------------------------------

def test_conserved_round_trip():
    assert to_conserved(State(3.0, -3.0)) == Conserved(3.0, -9.0)
    assert to_state(Conserved(3.0, -9.0)) == State(3.0, -3.0)
    assert to_conserved(State(0.0, 7.0)) == Conserved(0.0, 0.0)
    assert to_state(Conserved(0.0, 0.0)) == State(0.0, 0.0)
    assert to_conserved(State(5.0, 0.2)).m == pytest.approx(1.0)


@given(densities, velocities)
def test_conserved_round_trip_property(rho, u):
    back = to_state(to_conserved(State(rho, u)))
    assert back.rho == rho and back.u_tilde == pytest.approx(u, rel=1e-15, abs=1e-15)


def test_physical_velocity():
    assert physical_velocity(State(3.0, -3.0), 0.0, P1) == -3.0
    p = SystemParams(-1.5, 5.0, SourceTerm.constant(0.1))
    assert physical_velocity(State(3.0, -3.0), 30.0, p) == pytest.approx(0.0, abs=1e-14)


def test_predicates():
    assert density_side(5.0, P1) == 0 and density_side(4.0, P1) == -1 and density_side(6.0, P1) == 1
    assert velocity_sign(State(3.0, -3.0), 0.0, P1) == -1
    with pytest.raises(FullDegeneracy):
        velocity_sign(State(3.0, 0.0), 0.0, P1)
    assert [regime(SystemParams(a, 5.0)) for a in (-2, -1, -0.5, 0.5)] == \
        ["ALessM1", "AEqM1", "AInM10", "APos"]


@pytest.mark.parametrize("a, rho_bar", [(0.0, 5.0), (1.0, 0.0), (math.inf, 5.0)])
def test_params_validated(a, rho_bar):
    with pytest.raises(ValidationError):
        SystemParams(a, rho_bar)


def test_negative_density_rejected():
    with pytest.raises(ValidationError):
        State(-1.0, 0.0)
