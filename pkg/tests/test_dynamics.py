"""Coupled system-bath dynamics tests: arrowhead normal modes, symplectic
propagation, equilibrium mode sums, relaxation from displaced states and the
operator-valued fluctuating force.

The heavy N = 2000 oracle comparisons live in the acceptance suite; here the
baths are small enough that every identity can also be checked against dense
linear algebra.
"""

import numpy as np
import pytest

from qbrownian.bath import discretize_bath, noise_correlation
from qbrownian.damping import DrudeDamping
from qbrownian.dynamics import (
    GaussianState,
    build_hamiltonian,
    correlation_from_propagator,
    equilibrium_covariance,
    equilibrium_system_moments,
    flip_momenta,
    fluctuating_force_row,
    noise_position_correlation,
    normal_modes,
    propagate,
    propagate_trajectory,
    propagator,
    relaxation_run,
    symplectic_form,
    thermal_state,
    two_time_correlation,
)
from qbrownian.errors import DomainError
from qbrownian.numerics import HBAR, ThermalParams, coth_weight
from qbrownian.oscillator import OscillatorSpec

OSC = OscillatorSpec(mass=1.0, omega0=1.0)


def small_model(n_modes=40, gamma=0.5, omega_d=4.0):
    # a tight band edge keeps the gamma(0) coverage honest even for the
    # very small baths used in the algebraic-identity tests
    bath = discretize_bath(DrudeDamping(gamma, omega_d), n_modes,
                           omega_max=8.0 * omega_d, coverage_rtol=0.12)
    return build_hamiltonian(OSC, bath)


# ---------------------------------------------------------------------------
# phase-space scaffolding
# ---------------------------------------------------------------------------

def test_symplectic_form_properties():
    j = symplectic_form(3)
    np.testing.assert_allclose(j.T, -j, atol=0.0)
    np.testing.assert_allclose(j @ j, -np.eye(6), atol=0.0)


def test_flip_momenta_targets_odd_slots():
    z = np.arange(6.0)
    out = flip_momenta(z)
    np.testing.assert_allclose(out[0::2], z[0::2])
    np.testing.assert_allclose(out[1::2], -z[1::2])
    np.testing.assert_allclose(z, np.arange(6.0))     # input untouched


def test_build_hamiltonian_counterterm_and_blocks():
    ham = small_model(10)
    bath = ham.bath
    a = ham.a_matrix
    assert a[0, 0] == pytest.approx(1.0 + bath.strength.sum(), rel=1e-15)
    assert a[1, 1] == pytest.approx(1.0)
    ix = 2 + 2 * np.arange(10)
    np.testing.assert_allclose(a[0, ix], -bath.coupling, rtol=1e-15)
    np.testing.assert_allclose(np.diag(a)[ix], bath.mass * bath.omega ** 2,
                               rtol=1e-15)
    # stiffness stays positive definite thanks to the counterterm
    pos = np.concatenate(([0], ix))
    k = a[np.ix_(pos, pos)]
    assert np.linalg.eigvalsh(k).min() > 0.0


def test_build_hamiltonian_rejects_mass_mismatch():
    bath = discretize_bath(DrudeDamping(0.5, 4.0), 10, system_mass=2.0,
                           omega_max=32.0, coverage_rtol=0.12)
    with pytest.raises(DomainError):
        build_hamiltonian(OSC, bath)


# ---------------------------------------------------------------------------
# normal modes vs dense linear algebra
# ---------------------------------------------------------------------------

def test_normal_modes_match_dense_eigensolver():
    ham = small_model(40)
    modes = normal_modes(ham)
    # dense reference: mass-weighted stiffness eigenproblem
    pos = np.arange(0, ham.dim, 2)
    k = ham.a_matrix[np.ix_(pos, pos)]
    m = np.concatenate(([OSC.mass], ham.bath.mass))
    b = k / np.sqrt(np.outer(m, m))
    lam_ref = np.sort(np.linalg.eigvalsh(b))
    np.testing.assert_allclose(np.sort(modes.frequencies ** 2), lam_ref,
                               rtol=1e-10)
    # mass-weighted orthonormality of the returned transform
    u = np.sqrt(m)[:, None] * modes.position_transform
    np.testing.assert_allclose(u.T @ u, np.eye(41), atol=1e-10)


def test_normal_modes_zero_coupling_is_exact():
    # counterterm cancellation: f(0) = omega0^2 exactly, so the lowest
    # coupled frequency never collapses no matter how soft the bath grid is
    ham = small_model(200, gamma=1.0, omega_d=4.0)
    modes = normal_modes(ham)
    assert modes.frequencies.min() > 0.0
    assert np.all(np.isfinite(modes.position_transform))


# ---------------------------------------------------------------------------
# propagation
# ---------------------------------------------------------------------------

def test_propagator_is_symplectic_and_a_group():
    ham = small_model(12)
    j = symplectic_form(ham.n_oscillators)
    s1 = propagator(ham, 0.7)
    s2 = propagator(ham, 1.4)
    np.testing.assert_allclose(s1.T @ j @ s1, j, atol=1e-12)
    np.testing.assert_allclose(s1 @ s1, s2, atol=1e-11)
    np.testing.assert_allclose(propagator(ham, 0.0), np.eye(ham.dim),
                               atol=1e-15)


def test_time_reversal_conjugates_the_propagator():
    ham = small_model(8)
    f = np.diag([1.0, -1.0] * ham.n_oscillators)
    s = propagator(ham, 0.9)
    s_back = propagator(ham, -0.9)
    np.testing.assert_allclose(f @ s @ f, s_back, atol=1e-12)


def test_thermal_state_is_stationary():
    ham = small_model(16)
    state = thermal_state(ham, ThermalParams(temperature=0.7))
    moved = propagate(ham, state, 2.3)
    np.testing.assert_allclose(moved.cov, state.cov,
                               atol=1e-10 * np.abs(state.cov).max())
    np.testing.assert_allclose(moved.mean, 0.0, atol=1e-14)


def test_propagate_trajectory_grid_validation():
    ham = small_model(4)
    state = thermal_state(ham, ThermalParams(temperature=1.0))
    with pytest.raises(DomainError):
        propagate_trajectory(ham, state, [0.0])
    with pytest.raises(DomainError):
        propagate_trajectory(ham, state, [0.0, 0.1, 0.3])


def test_gaussian_state_validation():
    with pytest.raises(DomainError):
        GaussianState(mean=np.zeros(3), cov=np.eye(2))


# ---------------------------------------------------------------------------
# equilibrium correlation routes
# ---------------------------------------------------------------------------

def test_correlation_routes_agree_on_a_small_bath():
    ham = small_model(30)
    th = ThermalParams(temperature=1.0)
    t = np.linspace(0.0, 5.0, 26)
    analytic = two_time_correlation(ham, th, t)
    ladder = correlation_from_propagator(ham, th, t)
    np.testing.assert_allclose(ladder, analytic,
                               atol=1e-12 * abs(analytic[0]))


def test_two_time_correlation_starts_at_the_variance():
    ham = small_model(60)
    th = ThermalParams(temperature=0.5)
    mom = equilibrium_system_moments(ham, th)
    assert two_time_correlation(ham, th, 0.0) == pytest.approx(mom.q2,
                                                               rel=1e-12)
    assert mom.uncertainty_product >= 0.25 * HBAR ** 2


def test_equilibrium_covariance_diagonal_matches_mode_sums():
    ham = small_model(25)
    th = ThermalParams(temperature=0.8)
    cov = equilibrium_covariance(ham, th)
    mom = equilibrium_system_moments(ham, th)
    assert cov[0, 0] == pytest.approx(mom.q2, rel=1e-12)
    assert cov[1, 1] == pytest.approx(mom.p2, rel=1e-12)
    # a passive equilibrium state carries no q-p correlations
    assert abs(cov[0, 1]) < 1e-14


# ---------------------------------------------------------------------------
# relaxation runs vs dense covariance propagation
# ---------------------------------------------------------------------------

def test_relaxation_run_matches_dense_propagation_factorized():
    ham = small_model(30)
    th = ThermalParams(temperature=1.0)
    times = np.linspace(0.0, 6.0, 31)
    q0, p0, vq0, vp0 = 1.2, -0.3, 0.5, 0.5

    res = relaxation_run(ham, th, times, q0=q0, p0=p0, var_q0=vq0,
                         var_p0=vp0, preparation="factorized")

    bath = ham.bath
    wgt = coth_weight(bath.omega, th)
    mean = np.zeros(ham.dim)
    mean[0], mean[1] = q0, p0
    cov = np.zeros((ham.dim, ham.dim))
    cov[0, 0], cov[1, 1] = vq0, vp0
    ix = 2 + 2 * np.arange(bath.n_modes)
    cov[ix, ix] = wgt / (2.0 * bath.mass * bath.omega ** 2)
    cov[ix + 1, ix + 1] = 0.5 * bath.mass * wgt

    states = propagate_trajectory(ham, GaussianState(mean=mean, cov=cov),
                                  times)
    np.testing.assert_allclose(res.mean_q, [s.mean[0] for s in states],
                               atol=1e-10)
    np.testing.assert_allclose(res.var_q, [s.cov[0, 0] for s in states],
                               rtol=1e-9)
    np.testing.assert_allclose(res.var_p, [s.cov[1, 1] for s in states],
                               rtol=1e-9)
    np.testing.assert_allclose(res.cov_qp, [s.cov[0, 1] for s in states],
                               atol=1e-10)


def test_relaxation_shifted_bath_removes_the_initial_slip():
    # under the shifted preparation the mean relaxes like the closed-form
    # damped oscillator; factorized preparation feels an extra transient
    # kick from the counterterm mismatch
    ham = small_model(600, gamma=0.8, omega_d=4.0)
    th = ThermalParams(temperature=1.0)
    times = np.linspace(0.0, 8.0, 81)
    shifted = relaxation_run(ham, th, times, q0=1.0, preparation="shifted")
    assert abs(shifted.mean_q[-1]) < 0.05
    # envelope of the displaced mean decays at roughly gamma/2
    peak = np.max(np.abs(shifted.mean_q[times > 4.0]))
    assert peak < np.exp(-0.5 * 0.8 * 4.0) * 1.5

    factorized = relaxation_run(ham, th, times, q0=1.0,
                                preparation="factorized")
    assert np.max(np.abs(factorized.mean_q - shifted.mean_q)) > 0.01

    # Heisenberg holds along the whole trajectory
    assert np.all(shifted.uncertainty_product >= 0.25 * HBAR ** 2 - 1e-12)
    with pytest.raises(DomainError):
        relaxation_run(ham, th, times, preparation="adiabatic")


# ---------------------------------------------------------------------------
# fluctuating force
# ---------------------------------------------------------------------------

def test_force_rows_reproduce_stationary_noise_statistics():
    # contracting the force coefficient rows against a shifted-preparation
    # covariance must give the stationary kernel noise correlation: the
    # q(0) coefficient cancels exactly against the displaced bath cosines
    ham = small_model(20)
    bath = ham.bath
    th = ThermalParams(temperature=0.9)
    times = np.linspace(0.0, 4.0, 21)

    shift = bath.coupling / (bath.mass * bath.omega ** 2)
    lmat = np.eye(ham.dim)
    ix = 2 + 2 * np.arange(bath.n_modes)
    lmat[ix, 0] = shift
    wgt = coth_weight(bath.omega, th)
    dvec = np.zeros(ham.dim)
    dvec[0], dvec[1] = 0.37, 1.4          # arbitrary system variances
    dvec[ix] = wgt / (2.0 * bath.mass * bath.omega ** 2)
    dvec[ix + 1] = 0.5 * bath.mass * wgt
    sigma = lmat @ np.diag(dvec) @ lmat.T

    rows = fluctuating_force_row(ham, times)
    row0 = fluctuating_force_row(ham, 0.0)
    got = rows @ sigma @ row0
    expect = noise_correlation(bath, th, times)
    np.testing.assert_allclose(got, expect, rtol=1e-10)


def test_noise_position_correlation_against_covariance_route():
    ham = small_model(25)
    th = ThermalParams(temperature=0.6)
    times = np.linspace(0.0, 3.0, 16)
    direct = noise_position_correlation(ham, th, times)
    # independent route: rows contracted with the full equilibrium covariance
    cov = equilibrium_covariance(ham, th)
    rows = fluctuating_force_row(ham, times)
    via_cov = rows @ cov[:, 0]
    np.testing.assert_allclose(direct, via_cov, atol=1e-12)
    # zero-point correlations die off in the classical regime
    hot = noise_position_correlation(ham, ThermalParams(temperature=50.0),
                                     times)
    cold_scale = np.max(np.abs(direct))
    assert np.max(np.abs(hot)) < 5.0 * cold_scale   # no kT growth in <xi q>
