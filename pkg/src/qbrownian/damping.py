"""Damping models for the dissipative harmonic oscillator.

A damping model describes the memory friction gamma(t) through its Laplace
transform gammahat(z).  All models expose the same small protocol:

    laplace(z)        gammahat(z) for Re z > 0 (real or complex z)
    freq_response(w)  gammahat(-i w + 0+), the retarded continuation
    spectral(w)       Re freq_response(w) >= 0, the friction spectrum
    kernel(t)         gamma(t), the time-domain memory kernel
    kernel_at_zero    gamma(0) = lim_{z->inf} z*gammahat(z); inf flags a
                      memoryless (delta-correlated) kernel whose momentum
                      variance and free-energy shift are UV divergent

Discrete-bath-backed damping lives in the bath module; it satisfies the
same protocol.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def _require_right_half_plane(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if np.any(z.real <= 0.0):
        raise DomainError("Laplace transform requires Re z > 0; use "
                          "freq_response for the retarded continuation")
    return z


@dataclass(frozen=True)
class OhmicDamping:
    """Strictly ohmic (memoryless) friction, gammahat(z) = gamma.

    The kernel is gamma(t) = 2*gamma*delta(t), so `kernel` is undefined and
    `kernel_at_zero` is infinite for gamma > 0.  Quantities sensitive to the
    ultraviolet behaviour (momentum variance, partition function) diverge
    for this model and raise instead of silently truncating.

    gamma = 0 is allowed and describes the undamped oscillator.
    """

    gamma: float

    def __post_init__(self) -> None:
        if self.gamma < 0.0 or not np.isfinite(self.gamma):
            raise DomainError(f"gamma must be finite and >= 0, got {self.gamma}")

    def laplace(self, z):
        z = _require_right_half_plane(z)
        out = np.full(z.shape, complex(self.gamma))
        return out if z.ndim else complex(self.gamma)

    def freq_response(self, omega):
        w = np.asarray(omega, dtype=float)
        out = np.full(w.shape, complex(self.gamma))
        return out if w.ndim else complex(self.gamma)

    def spectral(self, omega):
        w = np.asarray(omega, dtype=float)
        out = np.full(w.shape, float(self.gamma))
        return out if w.ndim else float(self.gamma)

    def kernel(self, t):
        raise DomainError("the strictly ohmic kernel is 2*gamma*delta(t); "
                          "evaluate a cutoff model (e.g. Drude) instead")

    def laplace_derivative(self, z):
        z = _require_right_half_plane(z)
        out = np.zeros(z.shape, dtype=complex)
        return out if z.ndim else 0j

    @property
    def kernel_at_zero(self) -> float:
        return np.inf if self.gamma > 0.0 else 0.0


@dataclass(frozen=True)
class DrudeDamping:
    """Drude-regularized friction, gammahat(z) = gamma*omega_d / (omega_d + z).

    gamma(t) = gamma*omega_d*exp(-omega_d*|t|): ohmic behaviour below the
    cutoff omega_d with a finite memory time 1/omega_d.  For omega_d >>
    all other frequencies this reproduces ohmic results while keeping
    ultraviolet-sensitive quantities finite.
    """

    gamma: float
    omega_d: float

    def __post_init__(self) -> None:
        if self.gamma < 0.0 or not np.isfinite(self.gamma):
            raise DomainError(f"gamma must be finite and >= 0, got {self.gamma}")
        if self.omega_d <= 0.0 or not np.isfinite(self.omega_d):
            raise DomainError(f"omega_d must be finite and > 0, got {self.omega_d}")

    def laplace(self, z):
        z = _require_right_half_plane(z)
        out = self.gamma * self.omega_d / (self.omega_d + z)
        return out if out.ndim else complex(out)

    def freq_response(self, omega):
        w = np.asarray(omega, dtype=float)
        out = self.gamma * self.omega_d / (self.omega_d - 1j * w)
        return out if out.ndim else complex(out)

    def spectral(self, omega):
        w = np.asarray(omega, dtype=float)
        out = self.gamma * self.omega_d ** 2 / (self.omega_d ** 2 + w * w)
        return out if out.ndim else float(out)

    def kernel(self, t):
        t = np.asarray(t, dtype=float)
        out = self.gamma * self.omega_d * np.exp(-self.omega_d * np.abs(t))
        return out if out.ndim else float(out)

    def laplace_derivative(self, z):
        z = _require_right_half_plane(z)
        out = -self.gamma * self.omega_d / (self.omega_d + z) ** 2
        return out if out.ndim else complex(out)

    @property
    def kernel_at_zero(self) -> float:
        return self.gamma * self.omega_d
