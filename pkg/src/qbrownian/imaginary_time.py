"""Imaginary-time machinery for dissipative tunneling.

Eliminating the bath from the equilibrium path integral leaves a nonlocal
self-interaction of periodic paths q(tau), tau in [0, hbar beta],

    S_eff[q] = -(1/4) int_0^hb int_0^hb k(tau - sigma) [q(tau) - q(sigma)]^2

with the kernel

    k(tau) = (M / hbar beta) sum_n |nu_n| gammahat(|nu_n|) exp(i nu_n tau)

over all Matsubara frequencies.  This module evaluates the kernel, the
action (by two independent routes), the fluctuation eigenvalues about the
barrier of a cubic metastable potential, and the crossover temperature
separating thermally activated decay from quantum tunneling.

Units: hbar = k_B = 1 as everywhere in the package; `beta_hbar` names the
imaginary-time period hbar*beta to keep the formulas literal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .bath import DiscreteBathDamping
from .damping import DrudeDamping, OhmicDamping
from .errors import DomainError, RouteMismatchError
from .numerics import HBAR, KBOLTZ, TWO_PI, ThermalParams


# ---------------------------------------------------------------------------
# cubic metastable potential
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CubicPotentialSpec:
    """Metastable cubic potential V(q) = (M/2) omega0^2 q^2 (1 - q/q0).

    The well sits at q = 0 with curvature M omega0^2, the barrier at
    q_b = 2 q0 / 3 with height V_b = (2/27) M omega0^2 q0^2.  For this
    potential the barrier frequency omega_b (from |V''(q_b)| = M omega_b^2)
    equals the well frequency omega0.
    """

    mass: float
    omega0: float
    q0: float

    def __post_init__(self) -> None:
        if self.mass <= 0.0 or self.omega0 <= 0.0 or self.q0 <= 0.0:
            raise DomainError("mass, omega0 and q0 must all be positive")

    @property
    def barrier_position(self) -> float:
        return 2.0 * self.q0 / 3.0

    @property
    def barrier_height(self) -> float:
        return (2.0 / 27.0) * self.mass * self.omega0 ** 2 * self.q0 ** 2

    @property
    def omega_b(self) -> float:
        """Barrier frequency; coincides with omega0 for the cubic form."""
        return self.omega0

    @property
    def well_curvature(self) -> float:
        return self.mass * self.omega0 ** 2

    @property
    def barrier_curvature(self) -> float:
        return -self.mass * self.omega_b ** 2

    def potential(self, q):
        q = np.asarray(q, dtype=float)
        v = 0.5 * self.mass * self.omega0 ** 2 * q * q * (1.0 - q / self.q0)
        return v if v.ndim else float(v)

    def gradient(self, q):
        q = np.asarray(q, dtype=float)
        g = self.mass * self.omega0 ** 2 * q * (1.0 - 1.5 * q / self.q0)
        return g if g.ndim else float(g)

    def curvature(self, q):
        q = np.asarray(q, dtype=float)
        c = self.mass * self.omega0 ** 2 * (1.0 - 3.0 * q / self.q0)
        return c if c.ndim else float(c)


@dataclass(frozen=True)
class PotentialReport:
    """Potential, gradient and curvature on a grid, plus landmarks."""

    q: np.ndarray
    value: np.ndarray
    gradient: np.ndarray
    curvature: np.ndarray
    barrier_position: float
    barrier_height: float
    well_curvature: float
    barrier_curvature: float


def potential_report(pot: CubicPotentialSpec, q) -> PotentialReport:
    """Tabulate V, V', V'' and the metastability landmarks."""
    q = np.atleast_1d(np.asarray(q, dtype=float))
    return PotentialReport(
        q=q,
        value=pot.potential(q),
        gradient=pot.gradient(q),
        curvature=pot.curvature(q),
        barrier_position=pot.barrier_position,
        barrier_height=pot.barrier_height,
        well_curvature=pot.well_curvature,
        barrier_curvature=pot.barrier_curvature,
    )


# ---------------------------------------------------------------------------
# periodic path discretization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PathGrid:
    """A periodic imaginary-time path sampled on a uniform grid.

    Attributes
    ----------
    beta_hbar : float
        Period hbar*beta of the path.
    samples : (J,) ndarray
        Path values q(tau_j) at tau_j = j * beta_hbar / J; the point
        tau = beta_hbar is identified with tau = 0 and not stored.
        J must be even so the Fourier modes split cleanly into +-n pairs
        plus a single Nyquist mode.
    """

    beta_hbar: float
    samples: np.ndarray

    def __post_init__(self) -> None:
        if self.beta_hbar <= 0.0 or not np.isfinite(self.beta_hbar):
            raise DomainError("beta_hbar must be positive and finite")
        q = np.asarray(self.samples, dtype=float)
        if q.ndim != 1 or q.size < 2 or q.size % 2:
            raise DomainError("samples must be a 1-d array of even length >= 2")
        if not np.all(np.isfinite(q)):
            raise DomainError("path samples must be finite")
        object.__setattr__(self, "samples", q)

    @property
    def n_samples(self) -> int:
        return self.samples.size

    @property
    def spacing(self) -> float:
        return self.beta_hbar / self.samples.size

    @property
    def tau(self) -> np.ndarray:
        return self.spacing * np.arange(self.samples.size)

    @classmethod
    def from_callable(cls, beta_hbar: float, n_samples: int, fn) -> "PathGrid":
        """Sample q(tau) = fn(tau) on n_samples uniform grid points."""
        tau = (beta_hbar / n_samples) * np.arange(n_samples)
        return cls(beta_hbar=beta_hbar, samples=np.asarray(fn(tau), dtype=float))


# ---------------------------------------------------------------------------
# influence kernel k(tau)
# ---------------------------------------------------------------------------

def _require_interior_tau(tau: np.ndarray, beta_hbar: float) -> None:
    if np.any(tau <= 0.0) or np.any(tau >= beta_hbar):
        raise DomainError(
            "the influence kernel is defined (and finite) only for "
            "0 < tau < hbar*beta; tau = 0 is the singular diagonal")


def _clausen_remainder(theta: np.ndarray, a: float, n_max: int) -> np.ndarray:
    """R(theta) = sum_{n>=1} cos(n theta) / (n^2 (n + a)), accelerated.

    The first n_max terms are summed explicitly; the tail is closed with
    two exact Abel summations by parts, using the closed-form partial sums
    of cos(n theta) and of sin((n+1/2)theta)/(2 sin(theta/2)).  The
    neglected remainder is O(d2b/sin^2(theta/2)) with d2b ~ n_max^-5,
    negligible for the n_max used here even at theta ~ 1e-4.
    """
    total = np.zeros_like(theta)
    chunk_n = 4096
    chunk_t = 2048
    for n0 in range(1, n_max + 1, chunk_n):
        n = np.arange(n0, min(n0 + chunk_n, n_max + 1), dtype=float)
        b = 1.0 / (n * n * (n + a))
        for t0 in range(0, theta.size, chunk_t):
            sl = slice(t0, min(t0 + chunk_t, theta.size))
            total[sl] += b @ np.cos(np.outer(n, theta[sl]))

    m = float(n_max)
    b1 = 1.0 / ((m + 1.0) ** 2 * (m + 1.0 + a))
    b2 = 1.0 / ((m + 2.0) ** 2 * (m + 2.0 + a))
    half = 0.5 * theta
    s_part = np.sin((m + 0.5) * theta) / (2.0 * np.sin(half))
    q_part = (np.cos(theta) - np.cos((m + 1.0) * theta)) / (4.0 * np.sin(half) ** 2)
    return total - b1 * s_part - (b1 - b2) * q_part


def ohmic_influence_kernel(gamma: float, thermal: ThermalParams, tau,
                           mass: float = 1.0):
    """Closed-form kernel for strictly ohmic friction.

    The Matsubara comb sum(|nu_n| gamma e^{i nu_n tau}) only converges in
    the Abel sense; its regularized value is

        k(tau) = -pi M gamma / [(hbar beta)^2 sin^2(pi tau / hbar beta)]

    for tau in (0, hbar beta), which decays as -M gamma / (pi tau^2) well
    inside the period -- the long-range self-interaction of ohmic paths.
    """
    if thermal.is_zero:
        raise DomainError("the influence kernel needs a finite period (T > 0)")
    beta_h = HBAR * thermal.beta
    t = np.atleast_1d(np.asarray(tau, dtype=float))
    _require_interior_tau(t, beta_h)
    out = -np.pi * mass * gamma / (beta_h ** 2 * np.sin(np.pi * t / beta_h) ** 2)
    return out if np.ndim(tau) else float(out[0])


def influence_kernel(damp, thermal: ThermalParams, tau, n_max: int = 20000,
                     mass: float = 1.0):
    """Kernel k(tau) of the nonlocal effective action.

        k(tau) = (M / hbar beta) sum_{n = -inf}^{inf}
                 |nu_n| gammahat(|nu_n|) e^{i nu_n tau}

    The result is real and even about hbar beta / 2.  Supported damping
    models:

    * DrudeDamping -- the comb is resummed through the exactly summable
      log/Bernoulli combs, leaving an absolutely convergent n^-3 remainder
      series (n_max explicit terms plus a summed-by-parts tail).
    * DiscreteBathDamping -- exact closed form: each bath mode contributes
      -(1/2) s_i w_i cosh(w_i (hbar beta/2 - tau)) / sinh(w_i hbar beta/2),
      evaluated in an overflow-safe exponential form.
    * OhmicDamping is refused (the comb requires Abel regularization); use
      ohmic_influence_kernel for the closed-form regularized kernel.

    Parameters
    ----------
    damp : damping model
    thermal : ThermalParams
        Must have T > 0 (finite period).
    tau : float or ndarray
        Imaginary times, strictly inside (0, hbar beta).
    n_max : int
        Explicit terms of the Drude remainder series.
    mass : float
        System mass M; for a discrete bath this must equal the bath's
        system mass (the kernel is a property of the coupled Hamiltonian).
    """
    if thermal.is_zero:
        raise DomainError("the influence kernel needs a finite period (T > 0)")
    beta_h = HBAR * thermal.beta
    t = np.atleast_1d(np.asarray(tau, dtype=float))
    _require_interior_tau(t, beta_h)

    if isinstance(damp, OhmicDamping):
        raise DomainError(
            "the strictly ohmic comb converges only after regularization; "
            "use ohmic_influence_kernel for its closed form")

    if isinstance(damp, DiscreteBathDamping):
        bath = damp.bath
        if abs(mass - bath.system_mass) > 1e-12 * max(mass, bath.system_mass):
            raise DomainError(
                f"mass = {mass} disagrees with the bath's system mass "
                f"{bath.system_mass}; the kernel belongs to one Hamiltonian")
        w = bath.omega
        sw = bath.strength * w
        # cosh/sinh ratio written with decaying exponentials only
        num = np.exp(-np.outer(t, w)) + np.exp(-np.outer(beta_h - t, w))
        out = -0.5 * (num / (1.0 - np.exp(-beta_h * w))) @ sw
        return out if np.ndim(tau) else float(out[0])

    if isinstance(damp, DrudeDamping):
        nu1 = TWO_PI / beta_h
        theta = nu1 * t
        a = damp.omega_d / nu1
        remainder = _clausen_remainder(theta, a, n_max)
        bracket = (-0.5 + a * np.log(2.0 * np.sin(0.5 * theta))
                   + a * a * (np.pi ** 2 / 6.0 - 0.5 * np.pi * theta
                              + 0.25 * theta * theta)
                   - a ** 3 * remainder)
        out = (2.0 * mass * damp.gamma * damp.omega_d / beta_h) * bracket
        return out if np.ndim(tau) else float(out[0])

    raise DomainError(
        f"no influence-kernel evaluation for {type(damp).__name__}; "
        "supported: DrudeDamping, DiscreteBathDamping")


# ---------------------------------------------------------------------------
# effective action, two routes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ActionResult:
    """Effective action of one path.

    `action` is the Fourier-route value (Mass hbar beta / 2)
    sum_n |nu_n| gammahat |q_n|^2, the quantity used downstream;
    `quadrature` is the independent double-sum evaluation with the real
    kernel, kept as a diagnostic of kernel and grid consistency.
    """

    action: float
    quadrature: float
    n_modes: int
    kernel_samples: int


def _kernel_scale(damp) -> float:
    """Frequency above which the kernel comb stops varying (0 = exact)."""
    if isinstance(damp, OhmicDamping):
        # the aliased ohmic comb telescopes exactly; no refinement needed
        return 0.0
    if isinstance(damp, DrudeDamping):
        return damp.omega_d
    if isinstance(damp, DiscreteBathDamping):
        return float(damp.bath.omega.max())
    raise DomainError(
        f"no influence-kernel evaluation for {type(damp).__name__}; "
        "supported: OhmicDamping, DrudeDamping, DiscreteBathDamping")


def effective_action(path: PathGrid, damp, thermal: ThermalParams,
                     mass: float = 1.0, rtol: float = 1e-6,
                     kernel_resolution: int | None = None) -> ActionResult:
    """Nonlocal dissipative action of a periodic path, evaluated two ways.

    Route (a), the returned value: discrete Fourier modes
    q_n = (1/J) sum_j q_j e^{-i nu_n tau_j} weighted by the exact comb,

        S_eff = (M hbar beta / 2) sum_n |nu_n| gammahat(|nu_n|) |q_n|^2 ,

    summed over 0 < |n| < J/2 (the self-paired Nyquist mode is excluded
    from both routes; refine J until its weight is negligible).

    Route (b), the diagnostic: the literal double Riemann sum
    -(1/4) h^2 sum_{jl} k(tau_j - tau_l)(q_j - q_l)^2 with the real-space
    kernel, evaluated through circular correlation.  The path is first
    supersampled trigonometrically so the grid resolves the kernel's
    short-time structure (set `kernel_resolution` to override the
    automatic grid size).  The diagonal j = l contributes exactly zero and
    the kernel is never evaluated at tau = 0.

    Raises RouteMismatchError if the routes disagree beyond rtol; a
    constant path short-circuits to zero, which is its exact action.
    """
    if thermal.is_zero:
        raise DomainError("the effective action needs a finite period (T > 0)")
    beta_h = HBAR * thermal.beta
    if abs(beta_h - path.beta_hbar) > 1e-9 * beta_h:
        raise DomainError(
            f"path period {path.beta_hbar} and thermal state period "
            f"{beta_h} disagree")
    j_count = path.n_samples
    if j_count < 8:
        raise DomainError("need at least J = 8 path samples")

    if np.ptp(path.samples) == 0.0:
        # q(tau) - q(sigma) vanishes identically; report the exact zero
        # rather than summation dust.
        return ActionResult(action=0.0, quadrature=0.0,
                            n_modes=j_count // 2 - 1, kernel_samples=j_count)

    # --- route (a): exact comb weights on the discrete Fourier modes ----
    modes = np.fft.rfft(path.samples) / j_count
    n = np.arange(1, j_count // 2)
    nu = (TWO_PI / beta_h) * n
    weights = nu * np.real(damp.laplace(nu + 0j))
    s_fourier = mass * beta_h * float(weights @ np.abs(modes[1:-1]) ** 2)

    # --- route (b): double sum with the real-space kernel ---------------
    scale = _kernel_scale(damp)
    if kernel_resolution is None:
        target = max(32 * j_count, 64 * int(np.ceil(beta_h * scale)))
        j_fine = 1 << int(np.ceil(np.log2(target)))
        j_fine = min(j_fine, 1 << 17)
    else:
        j_fine = int(kernel_resolution)
        if j_fine < j_count or j_fine % 2:
            raise DomainError("kernel_resolution must be even and >= J")

    fine = np.zeros(j_fine // 2 + 1, dtype=complex)
    fine[:j_count // 2] = modes[:-1]          # Nyquist dropped in both routes
    q_fine = np.fft.irfft(fine, j_fine) * j_fine

    h = beta_h / j_fine
    tau_d = h * np.arange(1, j_fine)
    if isinstance(damp, OhmicDamping):
        kernel = ohmic_influence_kernel(damp.gamma, thermal, tau_d, mass=mass)
    else:
        kernel = influence_kernel(damp, thermal, tau_d, mass=mass)
    k = np.concatenate(([0.0], kernel))

    corr = np.fft.irfft(np.abs(np.fft.rfft(q_fine)) ** 2, j_fine)
    s_quad = -0.5 * h * h * float(k.sum() * (q_fine @ q_fine) - k @ corr)
    if isinstance(damp, OhmicDamping):
        # Singularity subtraction.  The strictly ohmic kernel behaves as
        # -M gamma / (pi u^2) at short separation u, so the integrand
        # k(u) [q(tau+u) - q(tau)]^2 tends to the finite value
        # -(M gamma / pi) qdot(tau)^2 on the diagonal.  The lattice sum
        # zeroes that cell (k_0 := 0) and would be low by exactly n/J per
        # Fourier mode; restoring the diagonal band analytically leaves
        # only an O((n/J)^3) residual.
        dq = np.diff(q_fine, append=q_fine[0])
        s_quad += 0.25 * (mass * damp.gamma / np.pi) * float(dq @ dq)

    defect = abs(s_fourier - s_quad) / max(abs(s_fourier), abs(s_quad), 1e-300)
    if defect > rtol:
        raise RouteMismatchError(
            f"effective-action routes disagree: Fourier {s_fourier!r} vs "
            f"quadrature {s_quad!r} (relative defect {defect:.2e} > {rtol})")
    return ActionResult(action=s_fourier, quadrature=s_quad,
                        n_modes=j_count // 2 - 1, kernel_samples=j_fine)


# ---------------------------------------------------------------------------
# barrier fluctuation modes and the crossover temperature
# ---------------------------------------------------------------------------

def fluctuation_eigenvalue(pot: CubicPotentialSpec, damp,
                           thermal: ThermalParams, n):
    """Eigenvalue of the n-th fluctuation mode about the barrier top.

        Lambda_n = nu_n^2 + |nu_n| gammahat(|nu_n|) - omega_b^2

    Positive eigenvalues mean the constant barrier path is a local minimum
    of the Euclidean action in that mode; Lambda_1 crossing zero as the
    temperature drops marks the appearance of the oscillating tunneling
    path and defines the crossover temperature.
    """
    if thermal.is_zero:
        raise DomainError("fluctuation modes are defined for T > 0")
    n_arr = np.atleast_1d(np.asarray(n))
    if np.any(n_arr < 1) or not np.issubdtype(n_arr.dtype, np.integer):
        raise DomainError("mode index n must be a positive integer")
    nu = (TWO_PI / (HBAR * thermal.beta)) * n_arr.astype(float)
    lam = nu * nu + nu * np.real(damp.laplace(nu + 0j)) - pot.omega_b ** 2
    return lam if np.ndim(n) else float(lam[0])


def crossover_temperature(pot: CubicPotentialSpec, damp) -> float:
    """Temperature T0 at which the first barrier fluctuation mode softens.

    Solves nu^2 + nu gammahat(nu) = omega_b^2 for the positive root nu and
    returns T0 = hbar nu / (2 pi k_B).  Since nu gammahat(nu) >= 0 for any
    passive damping model, the root always lies in (0, omega_b]; damping
    only pushes T0 downward (the system turns classical earlier).
    """
    wb = pot.omega_b

    def softening(x: float) -> float:
        return x * x + x * float(np.real(damp.laplace(x + 0j))) - wb * wb

    lo = 1e-12 * wb
    f_hi = softening(wb)
    if softening(lo) >= 0.0 or f_hi < 0.0:
        raise DomainError(
            "no crossover root in (0, omega_b]; the damping model's "
            "Laplace transform must be nonnegative on the real axis")
    if f_hi == 0.0:
        root = wb
    else:
        root = brentq(softening, lo, wb, xtol=1e-15, rtol=8.9e-16)
    return HBAR * root / (TWO_PI * KBOLTZ)


def crossover_temperature_ohmic(pot: CubicPotentialSpec, gamma: float) -> float:
    """Closed-form crossover temperature for strictly ohmic damping,

        T0 = (hbar / 2 pi k_B) [ sqrt(gamma^2/4 + omega_b^2) - gamma/2 ].
    """
    if gamma < 0.0:
        raise DomainError("friction must be nonnegative")
    wb = pot.omega_b
    return (HBAR / (TWO_PI * KBOLTZ)) * (
        np.sqrt(0.25 * gamma * gamma + wb * wb) - 0.5 * gamma)
