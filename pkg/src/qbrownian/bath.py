"""Discrete oscillator bath: construction, kernels, and noise statistics.

The system-plus-reservoir Hamiltonian couples the central oscillator
bilinearly to N independent bath oscillators (with the usual potential
counterterm, so the coupling only renormalizes dynamics, not statics):

    H = p^2/2M + M w0^2 q^2/2
        + sum_i [ p_i^2/2m_i + m_i w_i^2 (x_i - c_i q / (m_i w_i^2))^2 / 2 ]

Everything the reduced dynamics can know about the bath is the memory
kernel gamma(t) = (1/M) sum_i (c_i^2 / m_i w_i^2) cos(w_i t) and the
fluctuating-force statistics carried by the same coefficients.  This
module builds mode sets (c_i, w_i, m_i) that reproduce a smooth target
damping model, and evaluates those kernels and noise correlators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import CoverageError, DomainError
from .numerics import HBAR, ThermalParams, coth_weight


@dataclass(frozen=True, eq=False)
class BathSpec:
    """A concrete set of bath oscillators coupled to a system of mass M.

    Attributes
    ----------
    omega : (N,) ndarray
        Mode frequencies, strictly positive and ascending.
    coupling : (N,) ndarray
        Bilinear coupling constants c_i.
    mass : (N,) ndarray
        Bath oscillator masses m_i.
    system_mass : float
        Mass M of the central oscillator (normalizes gamma(t)).
    omega_max : float
        Band edge covered by the discretization; kernel-integral
        comparisons are limited to this band.
    source : object or None
        The smooth damping model this bath was built from, if any.
    """

    omega: np.ndarray
    coupling: np.ndarray
    mass: np.ndarray
    system_mass: float
    omega_max: float
    source: object | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        w = np.asarray(self.omega, dtype=float)
        c = np.asarray(self.coupling, dtype=float)
        m = np.asarray(self.mass, dtype=float)
        if w.ndim != 1 or w.shape != c.shape or w.shape != m.shape:
            raise DomainError("omega, coupling, mass must be 1-d arrays of equal length")
        if w.size == 0:
            raise DomainError("bath needs at least one mode")
        if np.any(w <= 0.0) or np.any(np.diff(w) <= 0.0):
            raise DomainError("mode frequencies must be positive and strictly ascending")
        if np.any(m <= 0.0):
            raise DomainError("bath masses must be positive")
        if self.system_mass <= 0.0:
            raise DomainError("system mass must be positive")
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "coupling", c)
        object.__setattr__(self, "mass", m)

    @property
    def n_modes(self) -> int:
        return self.omega.size

    @property
    def strength(self) -> np.ndarray:
        """c_i^2 / (m_i w_i^2), the kernel weight of each mode."""
        return self.coupling ** 2 / (self.mass * self.omega ** 2)


# ---------------------------------------------------------------------------
# discretization of a smooth damping model
# ---------------------------------------------------------------------------

def discretize_bath(damp, n_modes: int, *, system_mass: float = 1.0,
                    omega_max: float | None = None, grid: str = "linear",
                    omega_min: float | None = None, mode_mass: float = 1.0,
                    coverage_rtol: float = 0.05) -> BathSpec:
    """Build an N-mode bath reproducing a smooth damping model.

    The friction spectrum S(w) = Re gammahat(-i w + 0+) is sampled on a
    frequency grid and each node receives the spectral mass of its cell,

        c_i^2 / (m_i w_i^2) = (2 M / pi) * weight_i * S(w_i),

    with trapezoid cell weights.  The half cell touching w = 0 (and, on a
    log grid, the stub below omega_min) is folded into the lowest node so
    the reconstruction is second-order accurate in the grid spacing and
    refining the grid shrinks the kernel error against the band-limited
    target quadratically.

    Parameters
    ----------
    damp : damping model
        Must have a smooth `spectral`; a Drude model is typical.  The
        default band edge is 64 * omega_d for Drude models, which leaves
        about 1% of the kernel weight outside the band.  Strictly ohmic
        input has no intrinsic cutoff: omega_max is then mandatory and no
        full-kernel coverage check is possible.
    n_modes : int
        Number of bath oscillators.
    grid : {"linear", "log"}
        Node layout.  The log grid (geometric from omega_min to omega_max)
        resolves sub-omega_0 structure needed at low temperatures.
    coverage_rtol : float
        Allowed relative deviation of the reconstructed gamma(0) from the
        target kernel's gamma(0).

    Raises
    ------
    CoverageError
        If the reconstructed zero-time kernel misses the target by more
        than coverage_rtol (cutoff too low or grid too coarse).
    """
    if n_modes < 2:
        raise DomainError(f"need at least 2 modes, got {n_modes}")
    if isinstance(damp, DiscreteBathDamping):
        raise DomainError("input damping is already a discrete bath")
    if omega_max is None:
        omega_d = getattr(damp, "omega_d", None)
        if omega_d is None:
            raise DomainError("omega_max is required for damping models "
                              "without an intrinsic cutoff frequency")
        omega_max = 64.0 * omega_d
    if omega_max <= 0.0:
        raise DomainError(f"omega_max must be positive, got {omega_max}")

    if grid == "linear":
        delta = omega_max / n_modes
        w = delta * np.arange(1, n_modes + 1)
        weights = np.full(n_modes, delta)
        weights[-1] = 0.5 * delta
        mass_weight = weights * np.asarray(damp.spectral(w), dtype=float)
        # fold the w = 0 half cell into the lowest node
        mass_weight[0] += 0.5 * delta * float(damp.spectral(0.0))
    elif grid == "log":
        if omega_min is None:
            omega_min = 1e-6 * omega_max
        if not 0.0 < omega_min < omega_max:
            raise DomainError("need 0 < omega_min < omega_max for the log grid")
        u = np.linspace(np.log(omega_min), np.log(omega_max), n_modes)
        du = u[1] - u[0]
        w = np.exp(u)
        weights = np.full(n_modes, du) * w          # trapezoid in log space
        weights[0] *= 0.5
        weights[-1] *= 0.5
        mass_weight = weights * np.asarray(damp.spectral(w), dtype=float)
        # rectangle stub covering [0, omega_min)
        mass_weight[0] += omega_min * float(damp.spectral(0.0))
    else:
        raise DomainError(f"unknown grid {grid!r}; use 'linear' or 'log'")

    strength = (2.0 * system_mass / np.pi) * mass_weight  # = c^2/(m w^2)
    masses = np.full(n_modes, float(mode_mass))
    coupling = w * np.sqrt(masses * strength)
    bath = BathSpec(omega=w, coupling=coupling, mass=masses,
                    system_mass=system_mass, omega_max=float(omega_max),
                    source=damp)

    target = damp.kernel_at_zero
    if np.isfinite(target) and target > 0.0:
        got = float(np.sum(bath.strength)) / system_mass
        rel = abs(got - target) / target
        if rel > coverage_rtol:
            raise CoverageError(
                f"reconstructed gamma(0) = {got:.6g} misses target {target:.6g} "
                f"by {100 * rel:.2f}% (> {100 * coverage_rtol:.0f}%); raise "
                "omega_max or refine the grid")
    return bath


# ---------------------------------------------------------------------------
# kernels and noise statistics of a given bath
# ---------------------------------------------------------------------------

def damping_kernel(bath: BathSpec, t):
    """gamma(t) = (1/M) sum_i (c_i^2 / m_i w_i^2) cos(w_i t)."""
    t = np.asarray(t, dtype=float)
    out = (bath.strength @ np.cos(np.outer(bath.omega, t))) / bath.system_mass
    return out if t.ndim else float(out)


def gamma_laplace(bath: BathSpec, z):
    """gammahat(z) = (1/M) sum_i (c_i^2 / m_i w_i^2) z / (z^2 + w_i^2).

    Defined for Re z > 0 only: the transform has poles on the imaginary
    axis at +-i w_i, so evaluation there is refused rather than returning
    a formula value that no longer represents the Laplace integral.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z.real <= 0.0):
        raise DomainError("gammahat(z) of a discrete bath requires Re z > 0 "
                          "(poles at +-i w_i on the imaginary axis)")
    zz = z[..., None] if z.ndim else z
    out = np.sum(bath.strength * zz / (zz * zz + bath.omega ** 2), axis=-1)
    out = out / bath.system_mass
    return out if z.ndim else complex(out)


def noise_correlation(bath: BathSpec, thermal: ThermalParams, t,
                      method: str = "bath_sum"):
    """Symmetrized equilibrium force-force correlation S_xx(t).

    S(t) = (hbar/2) sum_i (c_i^2 / m_i w_i) coth(hbar w_i / 2 k_B T) cos(w_i t)
         = (1/2) sum_i strength_i * [hbar w_i coth(hbar w_i / 2 k_B T)] * cos(w_i t)

    method="kernel_integral" instead integrates the smooth source model,

        S(t) = (M/pi) * int_0^omega_max Re gammahat(-i w) *
               hbar w coth(hbar w / 2 k_B T) * cos(w t) dw,

    band-limited to the bath's own cutoff so the two routes estimate the
    same quantity.  (The unbounded strictly-ohmic-like integral would
    diverge at T = 0; the band keeps everything finite and comparable.)
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if method == "bath_sum":
        amp = 0.5 * bath.strength * coth_weight(bath.omega, thermal)
        out = amp @ np.cos(np.outer(bath.omega, t_arr))
    elif method == "kernel_integral":
        if bath.source is None:
            raise DomainError("kernel_integral needs a bath built from a "
                              "smooth damping model")
        spectral = bath.source.spectral
        m_over_pi = bath.system_mass / np.pi

        def f(w):
            return spectral(w) * coth_weight(w, thermal)

        out = np.empty_like(t_arr)
        for k, tk in enumerate(t_arr):
            if tk == 0.0:
                val, _ = quad(f, 0.0, bath.omega_max, limit=400)
            else:
                val, _ = quad(f, 0.0, bath.omega_max, weight="cos",
                              wvar=abs(tk), limit=400)
            out[k] = m_over_pi * val
    else:
        raise DomainError(f"unknown method {method!r}")
    return out if np.ndim(t) else float(out[0])


def noise_commutator(bath: BathSpec, t):
    """Force-force commutator [xi(t), xi(0)] = -i hbar sum_i (c_i^2/m_i w_i) sin(w_i t).

    State-independent: it carries no temperature argument because the
    commutator of the bath force is a c-number fixed by the coupling
    alone.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    amp = HBAR * bath.strength * bath.omega
    out = -1j * (amp @ np.sin(np.outer(bath.omega, t_arr)))
    return out if np.ndim(t) else complex(out[0])


@dataclass(frozen=True)
class NoiseStatistics:
    """Noise correlation and commutator sampled on a time grid."""

    times: np.ndarray
    correlation: np.ndarray
    commutator: np.ndarray
    stationary: bool = True


def noise_statistics(bath: BathSpec, thermal: ThermalParams,
                     times) -> NoiseStatistics:
    """Evaluate equilibrium noise correlation and commutator on a grid."""
    times = np.asarray(times, dtype=float)
    return NoiseStatistics(
        times=times,
        correlation=noise_correlation(bath, thermal, times),
        commutator=noise_commutator(bath, times),
    )


# ---------------------------------------------------------------------------
# damping-model facade over a discrete bath
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DiscreteBathDamping:
    """Damping-model protocol backed by an explicit bath.

    `spectral` is refused (the exact spectrum is a delta comb; use
    `bath.strength` directly), and `freq_response` evaluates the retarded
    transform a small distance epsilon into the right half plane, which
    Lorentz-broadens the comb.
    """

    bath: BathSpec

    def laplace(self, z):
        return gamma_laplace(self.bath, z)

    def freq_response(self, omega, epsilon: float | None = None):
        w = np.asarray(omega, dtype=float)
        if epsilon is None:
            gaps = np.diff(self.bath.omega)
            epsilon = 0.1 * float(gaps.min()) if gaps.size else 0.1 * self.bath.omega[0]
        out = gamma_laplace(self.bath, epsilon - 1j * w)
        return out if w.ndim else complex(out)

    def spectral(self, omega):
        raise DomainError("a discrete bath's friction spectrum is a delta "
                          "comb; use bath.strength and bath.omega")

    def kernel(self, t):
        return damping_kernel(self.bath, t)

    def laplace_derivative(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(z.real <= 0.0):
            raise DomainError("Laplace transform requires Re z > 0")
        w2 = self.bath.omega ** 2
        s = self.bath.strength
        zz = z[..., None] ** 2
        out = np.sum(s * (w2 - zz) / (w2 + zz) ** 2, axis=-1) \
            / self.bath.system_mass
        return out if z.ndim else complex(out)

    @property
    def kernel_at_zero(self) -> float:
        return float(np.sum(self.bath.strength)) / self.bath.system_mass
