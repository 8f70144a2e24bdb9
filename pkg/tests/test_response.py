"""Fluctuation-dissipation tests in the generic response and circuit
languages: spectra from the dissipative response, Johnson-Nyquist noise,
vacuum/thermal decomposition and the classical white limit.
"""

import numpy as np
import pytest

from qbrownian.damping import OhmicDamping
from qbrownian.errors import DomainError
from qbrownian.numerics import HBAR, KBOLTZ, ThermalParams
from qbrownian.oscillator import OscillatorSpec
from qbrownian.response import (
    Admittance,
    charge_current_cross_spectrum,
    current_noise,
    current_noise_parts,
    fdt_spectrum,
    johnson_nyquist_classical,
    oscillator_response,
    resistor,
    series_rlc,
)


# ---------------------------------------------------------------------------
# generic dissipative response
# ---------------------------------------------------------------------------

def test_oscillator_response_is_odd():
    resp = oscillator_response(OscillatorSpec(mass=1.0, omega0=1.0),
                               OhmicDamping(0.4))
    w = np.linspace(0.1, 5.0, 23)
    np.testing.assert_allclose(resp.chi_d(w), -resp.chi_d(-w), rtol=1e-14)


def test_fdt_spectrum_zero_frequency_is_classical_diffusive_level():
    # Im chi ~ gamma w / (M w0^4) near w = 0, so S(0) = 2 kT gamma / M w0^4
    m, w0, gamma, temp = 1.0, 1.2, 0.4, 0.8
    resp = oscillator_response(OscillatorSpec(mass=m, omega0=w0),
                               OhmicDamping(gamma))
    th = ThermalParams(temperature=temp)
    exact = 2.0 * KBOLTZ * temp * gamma / (m * w0 ** 4)
    assert fdt_spectrum(resp, th, 0.0) == pytest.approx(exact, rel=1e-6)


def test_fdt_spectrum_is_even_and_positive():
    resp = oscillator_response(OscillatorSpec(mass=1.0, omega0=1.0),
                               OhmicDamping(0.4))
    th = ThermalParams(temperature=0.5)
    w = np.linspace(0.05, 6.0, 41)
    s = fdt_spectrum(resp, th, w)
    np.testing.assert_allclose(s, fdt_spectrum(resp, th, -w), rtol=1e-13)
    assert np.all(s > 0.0)


# ---------------------------------------------------------------------------
# circuit admittances
# ---------------------------------------------------------------------------

def test_resistor_noise_levels():
    r = 50.0
    adm = resistor(r)
    th = ThermalParams(temperature=2.0)
    # classical white level at w = 0
    assert current_noise(adm, th, 0.0) == pytest.approx(
        2.0 * KBOLTZ * 2.0 / r, rel=1e-12)
    # zero-point line at T = 0
    cold = ThermalParams(temperature=0.0)
    w = np.array([-3.0, 1.0, 7.5])
    np.testing.assert_allclose(current_noise(adm, cold, w),
                               HBAR * np.abs(w) / r, rtol=1e-13)
    with pytest.raises(DomainError):
        resistor(0.0)


def test_series_rlc_real_part_identity():
    adm = series_rlc(resistance=0.3, inductance=1.0, capacitance=1.0)
    w = np.linspace(0.2, 3.0, 29)
    y = adm.y(w)
    # Re Y = R |Y|^2 for a series branch
    np.testing.assert_allclose(adm.real_part(w), 0.3 * np.abs(y) ** 2,
                               rtol=1e-13)
    # resonance of Re Y at w = 1/sqrt(LC)
    wfine = np.linspace(0.5, 1.5, 2001)
    peak = wfine[np.argmax(adm.real_part(wfine))]
    assert peak == pytest.approx(1.0, abs=1e-3)
    # the series capacitor blocks DC
    assert adm.real_part(0.0) == 0.0
    with pytest.raises(DomainError):
        series_rlc(-1.0, 1.0, 1.0)


def test_vacuum_thermal_parts_sum_to_the_total():
    adm = series_rlc(resistance=0.3, inductance=1.0, capacitance=1.0)
    th = ThermalParams(temperature=1.0)
    w = np.linspace(-10.0, 10.0, 81)
    w = w[w != 0.0]
    vac, therm = current_noise_parts(adm, th, w)
    np.testing.assert_allclose(vac + therm, current_noise(adm, th, w),
                               rtol=1e-12)
    # the vacuum part alone is the T = 0 spectrum (for w > 0)
    pos = w[w > 0.0]
    vac_pos, _ = current_noise_parts(adm, th, pos)
    cold = ThermalParams(temperature=0.0)
    np.testing.assert_allclose(vac_pos, current_noise(adm, cold, pos),
                               rtol=1e-12)
    with pytest.raises(DomainError):
        current_noise_parts(adm, th, 0.0)


def test_classical_limit_and_quantum_crossover():
    adm = resistor(2.0)
    th = ThermalParams(temperature=1.0)
    # hbar w / kT = 0.01: within (x^2/12) of the classical white level
    w_cl = 0.01 * KBOLTZ * 1.0 / HBAR
    assert current_noise(adm, th, w_cl) == pytest.approx(
        johnson_nyquist_classical(adm, th, w_cl), rel=1e-4)
    # hbar w / kT = 40: quantum line hbar w Re Y
    w_q = 40.0 * KBOLTZ * 1.0 / HBAR
    assert current_noise(adm, th, w_q) == pytest.approx(
        HBAR * w_q * adm.real_part(w_q), rel=1e-12)


def test_charge_current_cross_spectrum():
    adm = resistor(1.0)
    th = ThermalParams(temperature=1.0)
    w = np.array([0.5, 2.0])
    cross = charge_current_cross_spectrum(adm, th, w)
    np.testing.assert_allclose(cross,
                               current_noise(adm, th, w) / (1j * w),
                               rtol=1e-14)
    np.testing.assert_allclose(cross.real, 0.0, atol=1e-30)
    with pytest.raises(DomainError):
        charge_current_cross_spectrum(adm, th, 0.0)
