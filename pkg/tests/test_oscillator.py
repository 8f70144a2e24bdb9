"""Damped-oscillator observable tests: susceptibility, position
autocorrelation (closed form and quadrature), equilibrium second moments,
the reduced density matrix and the weak-coupling variance correction.
"""

import numpy as np
import pytest

from qbrownian.damping import DrudeDamping, OhmicDamping
from qbrownian.errors import DivergentMomentError, DomainError
from qbrownian.numerics import HBAR, KBOLTZ, ThermalParams
from qbrownian.oscillator import (
    OscillatorSpec,
    position_variance,
    reduced_density_matrix,
    second_moments,
    spectral_density,
    sqq_ohmic_closed_form,
    sqq_ohmic_zero_t_parts,
    sqq_quadrature,
    susceptibility,
    weak_coupling_correction,
)

OSC = OscillatorSpec(mass=1.0, omega0=1.0)


# ---------------------------------------------------------------------------
# susceptibility and spectral density
# ---------------------------------------------------------------------------

def test_susceptibility_static_and_odd_parts():
    damp = OhmicDamping(0.4)
    # static response 1 / M omega0^2
    assert susceptibility(OSC, damp, 0.0) == pytest.approx(1.0, rel=1e-14)
    w = np.linspace(0.1, 5.0, 23)
    chi = susceptibility(OSC, damp, w)
    chi_neg = susceptibility(OSC, damp, -w)
    np.testing.assert_allclose(chi_neg, np.conj(chi), rtol=1e-14)
    # exact ohmic form
    exact = 1.0 / (1.0 - w ** 2 - 1j * 0.4 * w)
    np.testing.assert_allclose(chi, exact, rtol=1e-13)


def test_spectral_density_detailed_balance_weight():
    damp = OhmicDamping(0.4)
    th = ThermalParams(temperature=0.8)
    w = np.array([0.3, 1.0, 2.5])
    s = spectral_density(OSC, damp, th, w)
    # S(w) = hbar coth(hbar w / 2kT) Im chi(w)
    expect = (HBAR / np.tanh(HBAR * w / (2.0 * KBOLTZ * 0.8))
              * np.imag(susceptibility(OSC, damp, w)))
    np.testing.assert_allclose(s, expect, rtol=1e-12)
    # even in w and finite at w = 0
    np.testing.assert_allclose(spectral_density(OSC, damp, th, -w), s,
                               rtol=1e-12)
    assert np.isfinite(spectral_density(OSC, damp, th, 0.0))


# ---------------------------------------------------------------------------
# position autocorrelation
# ---------------------------------------------------------------------------

def test_closed_form_undamped_limit():
    th = ThermalParams(temperature=0.7)
    t = np.linspace(0.0, 12.0, 25)
    got = sqq_ohmic_closed_form(OSC, 0.0, th, t)
    expect = (HBAR / 2.0) / np.tanh(HBAR * th.beta / 2.0) * np.cos(t)
    np.testing.assert_allclose(got, expect, rtol=1e-12)


def test_closed_form_at_zero_time_is_the_variance():
    th = ThermalParams(temperature=0.5)
    for gamma in (0.1, 0.8, 1.5):
        s0 = sqq_ohmic_closed_form(OSC, gamma, th, 0.0)
        q2 = position_variance(OSC, OhmicDamping(gamma), th)
        assert s0 == pytest.approx(q2, rel=1e-9)


def test_closed_form_is_even_in_time():
    th = ThermalParams(temperature=0.5)
    t = np.linspace(0.2, 8.0, 11)
    np.testing.assert_allclose(sqq_ohmic_closed_form(OSC, 0.6, th, t),
                               sqq_ohmic_closed_form(OSC, 0.6, th, -t),
                               rtol=1e-13)


def test_closed_form_rejects_overdamped():
    th = ThermalParams(temperature=1.0)
    with pytest.raises(DomainError):
        sqq_ohmic_closed_form(OSC, 2.0, th, 0.0)
    with pytest.raises(DomainError):
        sqq_ohmic_closed_form(OSC, -0.1, th, 0.0)


def test_quadrature_routes_match_closed_form():
    th = ThermalParams(temperature=0.8)
    t = np.array([0.0, 0.7, 3.0])
    closed = sqq_ohmic_closed_form(OSC, 0.5, th, t)
    filon = sqq_quadrature(OSC, OhmicDamping(0.5), th, t, method="filon")
    np.testing.assert_allclose(filon, closed, rtol=1e-7, atol=1e-9)
    with pytest.raises(DomainError):
        sqq_quadrature(OSC, DrudeDamping(0.5, 8.0), th, 0.0, method="filon")
    with pytest.raises(DomainError):
        sqq_quadrature(OSC, OhmicDamping(0.5), th, 0.0, method="simpson")


def test_adaptive_quadrature_zero_time_matches_matsubara_variance():
    damp = DrudeDamping(gamma=0.5, omega_d=8.0)
    th = ThermalParams(temperature=1.0)
    s0 = sqq_quadrature(OSC, damp, th, 0.0)
    q2 = position_variance(OSC, damp, th)
    assert s0 == pytest.approx(q2, rel=1e-8)


def test_zero_temperature_parts_reassemble():
    t = np.array([0.0, 1.0, 5.0])
    ring, alg = sqq_ohmic_zero_t_parts(OSC, 0.3, t)
    cold = ThermalParams(temperature=0.0)
    np.testing.assert_allclose(
        ring + alg, sqq_ohmic_closed_form(OSC, 0.3, cold, t), rtol=1e-13)
    # the algebraic part is negative and t=0 reassembles the variance
    assert np.all(alg < 0.0)
    q2 = position_variance(OSC, OhmicDamping(0.3), cold)
    assert ring[0] + alg[0] == pytest.approx(q2, rel=1e-9)


# ---------------------------------------------------------------------------
# second moments
# ---------------------------------------------------------------------------

def test_second_moments_undamped_textbook():
    th = ThermalParams(temperature=0.8)
    mom = second_moments(OSC, OhmicDamping(0.0), th)
    coth = 1.0 / np.tanh(HBAR * th.beta / 2.0)
    assert mom.q2 == pytest.approx(0.5 * HBAR * coth, rel=1e-10)
    assert mom.p2 == pytest.approx(0.5 * HBAR * coth, rel=1e-10)


def test_second_moments_strictly_ohmic_momentum_diverges():
    th = ThermalParams(temperature=1.0)
    with pytest.raises(DivergentMomentError):
        second_moments(OSC, OhmicDamping(0.5), th)
    # the position variance alone stays finite
    assert position_variance(OSC, OhmicDamping(0.5), th) > 0.0


def test_damping_squeezes_position_and_spreads_momentum_at_t0():
    cold = ThermalParams(temperature=0.0)
    free = second_moments(OSC, OhmicDamping(0.0), cold)
    damped = second_moments(OSC, DrudeDamping(1.0, 8.0), cold)
    assert damped.q2 < free.q2
    assert damped.p2 > free.p2
    assert damped.uncertainty_product >= 0.25 * HBAR ** 2


def test_position_variance_grows_with_temperature():
    damp = DrudeDamping(0.5, 8.0)
    q2 = [position_variance(OSC, damp, ThermalParams(temperature=t))
          for t in (0.0, 0.5, 1.0, 2.0, 5.0)]
    assert np.all(np.diff(q2) > 0.0)


# ---------------------------------------------------------------------------
# reduced density matrix
# ---------------------------------------------------------------------------

def test_density_matrix_normalization_and_purity():
    damp = DrudeDamping(0.5, 8.0)
    th = ThermalParams(temperature=0.5)
    mom = second_moments(OSC, damp, th)
    q = np.linspace(-8.0, 8.0, 801)
    rho = reduced_density_matrix(OSC, damp, th, q, moments=mom)
    dq = q[1] - q[0]
    # unit trace
    assert np.trapezoid(np.diag(rho), dx=dq) == pytest.approx(1.0, rel=1e-8)
    # purity tr rho^2 = hbar / (2 sqrt(<q^2><p^2>))
    purity = np.trapezoid(np.trapezoid(rho * rho.T, dx=dq), dx=dq)
    expect = HBAR / (2.0 * np.sqrt(mom.q2 * mom.p2))
    assert purity == pytest.approx(expect, rel=1e-7)


def test_density_matrix_undamped_purity_is_tanh():
    # gamma = 0: tr rho^2 = tanh(hbar beta omega0 / 2) exactly
    th = ThermalParams(temperature=0.7)
    damp = OhmicDamping(0.0)
    mom = second_moments(OSC, damp, th)
    q = np.linspace(-9.0, 9.0, 901)
    rho = reduced_density_matrix(OSC, damp, th, q, moments=mom)
    dq = q[1] - q[0]
    purity = np.trapezoid(np.trapezoid(rho * rho.T, dx=dq), dx=dq)
    assert purity == pytest.approx(np.tanh(HBAR * th.beta / 2.0), rel=1e-7)


def test_density_matrix_scalar_and_hermitian():
    damp = DrudeDamping(0.5, 8.0)
    th = ThermalParams(temperature=1.0)
    mom = second_moments(OSC, damp, th)
    val = reduced_density_matrix(OSC, damp, th, 0.3, qprime=-0.2, moments=mom)
    swapped = reduced_density_matrix(OSC, damp, th, -0.2, qprime=0.3,
                                     moments=mom)
    assert isinstance(val, float)
    assert val == pytest.approx(swapped, rel=1e-14)


# ---------------------------------------------------------------------------
# weak-coupling variance correction
# ---------------------------------------------------------------------------

def test_weak_coupling_correction_ground_state_limit():
    assert weak_coupling_correction(OSC, ThermalParams(temperature=0.0)) == -1.0
    # very cold but finite temperature approaches the same limit smoothly
    assert weak_coupling_correction(
        OSC, ThermalParams(temperature=1e-4)) == pytest.approx(-1.0, abs=1e-6)


def test_weak_coupling_correction_predicts_variance_slope():
    # <q^2>(gamma) = <q^2>(0) [1 + (gamma / pi omega0) Delta + O(gamma^2)]
    gamma = 1e-3
    for temp in (0.3, 1.0, 4.0):
        th = ThermalParams(temperature=temp)
        delta = weak_coupling_correction(OSC, th)
        q2_0 = 0.5 * HBAR / np.tanh(HBAR * th.beta / 2.0)
        q2_g = position_variance(OSC, OhmicDamping(gamma), th)
        slope = (q2_g / q2_0 - 1.0) / (gamma / np.pi)
        assert slope == pytest.approx(delta, rel=1e-2)
