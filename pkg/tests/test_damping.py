"""Damping-model protocol tests: Laplace transforms, retarded continuations,
friction spectra and time-domain kernels for the ohmic and Drude models.
"""

import numpy as np
import pytest
from scipy.integrate import quad

from qbrownian.damping import DrudeDamping, OhmicDamping
from qbrownian.errors import DomainError


# ---------------------------------------------------------------------------
# strictly ohmic
# ---------------------------------------------------------------------------

def test_ohmic_is_constant_in_every_representation():
    d = OhmicDamping(gamma=0.8)
    z = np.array([0.1 + 0.0j, 1.0 + 2.0j, 50.0 - 7.0j])
    np.testing.assert_allclose(d.laplace(z), 0.8, rtol=1e-15)
    np.testing.assert_allclose(d.laplace_derivative(z), 0.0, atol=0.0)
    w = np.linspace(-30.0, 30.0, 11)
    np.testing.assert_allclose(d.freq_response(w), 0.8, rtol=1e-15)
    np.testing.assert_allclose(d.spectral(w), 0.8, rtol=1e-15)


def test_ohmic_kernel_is_distributional():
    d = OhmicDamping(gamma=0.8)
    assert np.isinf(d.kernel_at_zero)
    with pytest.raises(DomainError):
        d.kernel(0.3)
    # gamma = 0 is the undamped oscillator, with a genuinely zero kernel
    assert OhmicDamping(gamma=0.0).kernel_at_zero == 0.0


def test_ohmic_rejects_bad_gamma():
    with pytest.raises(DomainError):
        OhmicDamping(gamma=-0.1)
    with pytest.raises(DomainError):
        OhmicDamping(gamma=np.inf)


def test_laplace_requires_right_half_plane():
    for d in (OhmicDamping(0.5), DrudeDamping(0.5, 4.0)):
        with pytest.raises(DomainError):
            d.laplace(-1.0 + 0j)
        with pytest.raises(DomainError):
            d.laplace(0.0 + 3.0j)


# ---------------------------------------------------------------------------
# Drude
# ---------------------------------------------------------------------------

def test_drude_closed_forms():
    gamma, wd = 0.6, 5.0
    d = DrudeDamping(gamma=gamma, omega_d=wd)
    z = np.array([0.3 + 0.0j, 2.0 + 1.0j, 10.0 - 4.0j])
    np.testing.assert_allclose(d.laplace(z), gamma * wd / (wd + z), rtol=1e-15)
    w = np.linspace(-20.0, 20.0, 81)
    np.testing.assert_allclose(d.freq_response(w),
                               gamma * wd / (wd - 1j * w), rtol=1e-15)
    np.testing.assert_allclose(d.spectral(w),
                               gamma * wd ** 2 / (wd ** 2 + w * w), rtol=1e-15)
    t = np.linspace(-2.0, 2.0, 41)
    np.testing.assert_allclose(d.kernel(t),
                               gamma * wd * np.exp(-wd * np.abs(t)), rtol=1e-15)
    assert d.kernel_at_zero == pytest.approx(gamma * wd, rel=1e-15)


def test_drude_spectral_is_real_part_of_retarded_response():
    d = DrudeDamping(gamma=1.1, omega_d=3.0)
    w = np.linspace(-15.0, 15.0, 121)
    np.testing.assert_allclose(d.spectral(w), np.real(d.freq_response(w)),
                               rtol=1e-14)


def test_drude_laplace_derivative_matches_finite_difference():
    d = DrudeDamping(gamma=0.9, omega_d=2.5)
    h = 1e-6
    for z in (0.5 + 0.0j, 1.5 + 2.0j, 8.0 - 1.0j):
        fd = (d.laplace(z + h) - d.laplace(z - h)) / (2.0 * h)
        assert abs(d.laplace_derivative(z) - fd) < 1e-8 * abs(fd)


def test_drude_kernel_and_spectrum_are_a_cosine_pair():
    # gamma(t) = (2/pi) int_0^inf spectral(w) cos(w t) dw
    d = DrudeDamping(gamma=0.7, omega_d=4.0)
    val0, _ = quad(d.spectral, 0.0, np.inf, limit=400)
    assert 2.0 * val0 / np.pi == pytest.approx(d.kernel(0.0), rel=1e-10)
    for t in (0.2, 1.0):
        val, _ = quad(d.spectral, 0.0, np.inf, weight="cos", wvar=t,
                      limit=400, limlst=200)
        assert 2.0 * val / np.pi == pytest.approx(d.kernel(t), rel=1e-9)


def test_drude_approaches_ohmic_below_the_cutoff():
    ohmic = OhmicDamping(gamma=0.5)
    drude = DrudeDamping(gamma=0.5, omega_d=1e4)
    z = np.array([0.5 + 0.0j, 1.0 + 1.0j])
    np.testing.assert_allclose(drude.laplace(z), ohmic.laplace(z), rtol=2e-4)
    w = np.linspace(-3.0, 3.0, 13)
    np.testing.assert_allclose(drude.spectral(w), ohmic.spectral(w), rtol=1e-7)


def test_drude_rejects_bad_parameters():
    with pytest.raises(DomainError):
        DrudeDamping(gamma=-0.1, omega_d=1.0)
    with pytest.raises(DomainError):
        DrudeDamping(gamma=0.5, omega_d=0.0)
    with pytest.raises(DomainError):
        DrudeDamping(gamma=0.5, omega_d=np.nan)
