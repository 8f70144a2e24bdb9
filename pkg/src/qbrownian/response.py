"""Fluctuation-dissipation relations for generic linear response.

Connects the dissipative (odd, imaginary) part of any equilibrium response
function to the symmetrized fluctuation spectrum of the corresponding
observable, and specializes to electrical circuits where the response is
an admittance and the spectrum is current noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .numerics import HBAR, KBOLTZ, ThermalParams, bose_occupation, coth_weight
from .oscillator import OscillatorSpec, susceptibility


@dataclass(frozen=True)
class DissipativeResponse:
    """The odd dissipative part chi''(w) of a linear response function.

    chi_d must be vectorized and odd; omega_scale sets the step used for
    the numerical w -> 0 slope in fdt_spectrum.
    """

    chi_d: Callable[[np.ndarray], np.ndarray]
    omega_scale: float = 1.0


def oscillator_response(osc: OscillatorSpec, damp) -> DissipativeResponse:
    """Dissipative position response Im chi(w) of the damped oscillator."""
    def chi_d(w):
        return np.imag(susceptibility(osc, damp, w))
    return DissipativeResponse(chi_d=chi_d, omega_scale=osc.omega0)


def fdt_spectrum(resp: DissipativeResponse, thermal: ThermalParams, omega):
    """Symmetrized spectrum S(w) = hbar coth(hbar w / 2 k_B T) chi''(w).

    Evaluated as [hbar w coth(hbar w/2kT)] * [chi''(w)/w] so the w = 0
    value is finite: the second factor is replaced there by the numerical
    slope of chi'' (central difference with step 1e-6 * omega_scale),
    giving S(0) = 2 k_B T * d(chi'')/dw|_0.
    """
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    ratio = np.empty_like(w)
    nz = w != 0.0
    ratio[nz] = np.asarray(resp.chi_d(w[nz])) / w[nz]
    if np.any(~nz):
        h = 1e-6 * resp.omega_scale
        slope = (resp.chi_d(np.array([h]))[0]
                 - resp.chi_d(np.array([-h]))[0]) / (2.0 * h)
        ratio[~nz] = slope
    out = coth_weight(w, thermal) * ratio
    return out if np.ndim(omega) else float(out[0])


# ---------------------------------------------------------------------------
# circuit language: admittance and current noise
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Admittance:
    """Electrical admittance Y(w) (complex, vectorized callable)."""

    y: Callable[[np.ndarray], np.ndarray]

    def real_part(self, omega):
        return np.real(self.y(np.asarray(omega, dtype=float)))


def resistor(resistance: float) -> Admittance:
    """Admittance of an ideal resistor, Y = 1/R."""
    if resistance <= 0.0:
        raise DomainError(f"resistance must be > 0, got {resistance}")
    g = 1.0 / resistance

    def y(w):
        w = np.asarray(w, dtype=float)
        return np.full(w.shape, complex(g)) if w.ndim else complex(g)

    return Admittance(y=y)


def series_rlc(resistance: float, inductance: float,
               capacitance: float) -> Admittance:
    """Admittance of a series RLC branch, Y = 1/(R + i w L + 1/(i w C))."""
    if min(resistance, inductance, capacitance) <= 0.0:
        raise DomainError("R, L, C must all be > 0")

    def y(w):
        w = np.asarray(w, dtype=float)
        wa = np.atleast_1d(w)
        out = np.zeros(wa.shape, dtype=complex)   # the capacitor blocks DC
        nz = wa != 0.0
        z = (resistance + 1j * wa[nz] * inductance
             + 1.0 / (1j * wa[nz] * capacitance))
        out[nz] = 1.0 / z
        return out if w.ndim else complex(out[0])

    return Admittance(y=y)


def current_noise(adm: Admittance, thermal: ThermalParams, omega):
    """Symmetrized current noise S_II(w) = hbar w coth(hbar w/2kT) Re Y(w).

    Reduces to the classical white value 2 k_B T Re Y at w = 0 and to the
    zero-point spectrum hbar |w| Re Y at T = 0.
    """
    w = np.asarray(omega, dtype=float)
    out = coth_weight(w, thermal) * adm.real_part(w)
    return out if w.ndim else float(out)


def current_noise_parts(adm: Admittance, thermal: ThermalParams, omega):
    """Vacuum / thermal decomposition of the current noise.

        S_II(w) = [hbar w + 2 hbar w n_B(w)] Re Y(w)

    Returns (vacuum, thermal) with vacuum = hbar w Re Y(w) and thermal the
    Bose-occupation piece.  Both parts are signed for w < 0 although the
    total is positive; their sum reproduces current_noise exactly.
    w = 0 is a pole of n_B and raises; use current_noise there.
    """
    w = np.asarray(omega, dtype=float)
    rey = adm.real_part(w)
    vac = HBAR * w * rey
    th = 2.0 * HBAR * w * bose_occupation(w, thermal) * rey
    if w.ndim:
        return vac, th
    return float(vac), float(th)


def charge_current_cross_spectrum(adm: Admittance, thermal: ThermalParams,
                                  omega):
    """Cross-spectrum S_IQ(w) = S_II(w) / (i w) of current and charge.

    Purely imaginary for a symmetric spectrum; w = 0 is excluded.  Thinly
    validated: provided for completeness of the circuit dictionary, with
    only its defining relation to S_II guaranteed.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w == 0.0):
        raise DomainError("cross-spectrum is undefined at omega = 0")
    out = current_noise(adm, thermal, w) / (1j * w)
    return out if w.ndim else complex(out)


def johnson_nyquist_classical(adm: Admittance, thermal: ThermalParams, omega):
    """Classical white-noise level 2 k_B T Re Y(w), for comparison plots."""
    w = np.asarray(omega, dtype=float)
    out = 2.0 * KBOLTZ * thermal.temperature * adm.real_part(w)
    return out if w.ndim else float(out)
