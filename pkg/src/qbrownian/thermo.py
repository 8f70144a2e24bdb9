"""Thermodynamics of the damped oscillator and its density of states.

The reduced partition function (coupled system over bare bath) has the
Matsubara product representation

    Z(beta) = [hbar beta omega0]^-1
              prod_{n>=1} nu_n^2 / (nu_n^2 + nu_n gammahat(nu_n) + omega0^2),

with nu_n = 2 pi n / hbar beta.  The product converges whenever
nu gammahat(nu) stays bounded, i.e. for every finite-memory damping
model; strictly ohmic friction makes it diverge, and every function here
raises DivergentProductError for it rather than truncating silently.

Z extends analytically to complex beta in the right half plane, which is
what the density-of-states routine exploits: rho(epsilon) is recovered by
inverting the Laplace transform along a Bromwich contour, after peeling
off the ground-state delta and the flat large-energy background.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import zeta

from .errors import (ContourError, DivergentProductError, DomainError,
                     ExtrapolationError)
from .numerics import HBAR, ThermalParams, tail_corrected_sum
from .oscillator import OscillatorSpec


def _require_finite_product(damp) -> None:
    if np.isinf(damp.kernel_at_zero):
        raise DivergentProductError(
            "the Matsubara product diverges for strictly ohmic damping; "
            "use a finite-memory model (e.g. Drude)")


def _gammahat(damp, nu):
    """gammahat on the positive real axis (real there for any real kernel)."""
    return np.real(damp.laplace(nu + 0j))


# ---------------------------------------------------------------------------
# partition function and energies on the real axis
# ---------------------------------------------------------------------------

def log_partition(osc: OscillatorSpec, damp, thermal: ThermalParams,
                  n_max: int = 20000) -> float:
    """ln Z(beta) by tail-corrected Matsubara summation."""
    _require_finite_product(damp)
    if thermal.is_zero:
        raise DomainError("ln Z ~ -beta E_0 has no T = 0 value; "
                          "use ground_state_energy")
    beta = thermal.beta
    nu1 = 2.0 * np.pi / (HBAR * beta)
    w0sq = osc.omega0 ** 2

    def term(n):
        nu = nu1 * n
        return np.log1p((nu * _gammahat(damp, nu) + w0sq) / (nu * nu))

    s = tail_corrected_sum(term, power=2, n_max=n_max)
    return float(-np.log(HBAR * beta * osc.omega0) - s)


def partition_function(osc: OscillatorSpec, damp, thermal: ThermalParams,
                       n_max: int = 20000) -> float:
    """Z(beta) = exp(log_partition)."""
    return float(np.exp(log_partition(osc, damp, thermal, n_max=n_max)))


def free_energy(osc: OscillatorSpec, damp, thermal: ThermalParams,
                n_max: int = 20000) -> float:
    """F = -ln Z / beta."""
    return -log_partition(osc, damp, thermal, n_max=n_max) / thermal.beta


def internal_energy(osc: OscillatorSpec, damp, thermal: ThermalParams,
                    n_max: int = 20000) -> float:
    """U = -d ln Z / d beta, with the beta-derivative taken analytically.

    Differentiating each Matsubara factor (the frequencies nu_n move with
    beta) gives

        U = (1/beta) [ 1 + sum_n (nu gh + 2 omega0^2 - nu^2 gh') / D_n ],
        D_n = nu^2 + nu gh(nu) + omega0^2,   gh' = d gammahat / d nu,

    with every contribution individually positive for the usual models --
    written this way the sum has no large-n cancellation and converges
    like 1/n^2.  No finite differencing in beta, whose step would fight
    the 1/beta^2 curvature at low temperature.  At gamma = 0 the sum
    telescopes to the textbook (hbar omega0/2) coth(hbar beta omega0 / 2);
    at T = 0 it reduces to the ground-state energy.
    """
    _require_finite_product(damp)
    if thermal.is_zero:
        return ground_state_energy(osc, damp)
    beta = thermal.beta
    nu1 = 2.0 * np.pi / (HBAR * beta)
    w0sq = osc.omega0 ** 2

    def term(n):
        nu = nu1 * n
        gh = _gammahat(damp, nu)
        ghp = np.real(damp.laplace_derivative(nu + 0j))
        den = nu * nu + nu * gh + w0sq
        return (nu * gh + 2.0 * w0sq - nu * nu * ghp) / den

    s = tail_corrected_sum(term, power=2, n_max=n_max)
    return float((1.0 + s) / beta)


def q2_from_partition(osc: OscillatorSpec, damp, thermal: ThermalParams,
                      rel_step: float = 1e-5, n_max: int = 20000) -> float:
    """<q^2> = -(1 / M beta omega0) d ln Z / d omega0.

    The position variance is thermodynamic: stiffening the trap by
    d(omega0^2) costs free energy M <q^2> d(omega0^2) / 2.  Evaluated by
    central differencing of ln Z in omega0, it provides a route to <q^2>
    that never mentions the Matsubara sum for the variance itself.
    """
    h = rel_step * osc.omega0
    lp = log_partition(OscillatorSpec(osc.mass, osc.omega0 + h), damp,
                       thermal, n_max=n_max)
    lm = log_partition(OscillatorSpec(osc.mass, osc.omega0 - h), damp,
                       thermal, n_max=n_max)
    return float(-(lp - lm) / (2.0 * h) / (osc.mass * thermal.beta * osc.omega0))


def ground_state_energy(osc: OscillatorSpec, damp) -> float:
    """E_0 = (hbar / 2 pi) int_0^inf ln[1 + (nu gammahat(nu) + omega0^2)/nu^2] dnu.

    The T -> 0 limit of -ln Z / beta, with the Matsubara sum turned into
    an integral.  The logarithmic divergence of the integrand at nu = 0
    is split off and integrated in closed form; gamma = 0 reproduces
    hbar omega0 / 2 and any damping raises E_0 above it.
    """
    _require_finite_product(damp)
    w0sq = osc.omega0 ** 2
    s = osc.omega0

    def low(nu):
        return np.log(nu * nu + nu * _gammahat(damp, nu) + w0sq)

    def high(nu):
        return np.log1p((nu * _gammahat(damp, nu) + w0sq) / (nu * nu))

    i_low, _ = quad(low, 0.0, s, limit=200)
    i_low -= 2.0 * s * (np.log(s) - 1.0)        # subtracted int_0^s 2 ln nu
    i_high, _ = quad(high, s, np.inf, limit=200)
    return float(HBAR * (i_low + i_high) / (2.0 * np.pi))


def ground_state_weight(osc: OscillatorSpec, damp, beta0: float | None = None,
                        ratio: float = 2.0, n_max: int = 20000,
                        rtol: float = 1e-6) -> float:
    """Weight w_0 of the ground-state peak, lim e^{beta E_0} Z(beta).

    ln[e^{beta E_0} Z] approaches ln w_0 with corrections analytic in
    1/beta (the Laplace transform of the smooth spectrum above E_0), so a
    four-point geometric ladder in beta fitted to 1 + 1/beta + 1/beta^2 +
    1/beta^3 extrapolates to the limit; two staggered ladders must agree
    to rtol or the extrapolation is rejected.

    For a gapless bath continuum the limit is exactly 1: the level shift
    of the continuum contributes only O(1/beta) to ln[e^{beta E_0} Z].
    Computing it anyway is a sharp consistency check on E_0 -- an error
    there leaves a linear-in-beta piece that the ladders cannot agree on
    -- and the subtraction in the density-of-states transform uses the
    computed value rather than trusting the theoretical one.
    """
    eps0 = ground_state_energy(osc, damp)
    if beta0 is None:
        beta0 = 20.0 / (HBAR * osc.omega0)

    def extrapolate(b0):
        betas = b0 * ratio ** np.arange(4)
        lnw = np.array([
            log_partition(osc, damp, ThermalParams(1.0 / b), n_max=n_max)
            + b * eps0 for b in betas])
        basis = np.vander(1.0 / betas, 4, increasing=True)
        return np.linalg.solve(basis, lnw)[0]

    first = extrapolate(beta0)
    second = extrapolate(1.5 * beta0)
    # `first` is ln w_0, so absolute agreement at scale 1 means relative
    # agreement of w_0 itself; w_0 <= 1 makes |ln w_0| a poor yardstick.
    if abs(first - second) > rtol * max(abs(first), 1.0):
        raise ExtrapolationError(
            f"ground-state weight ladders disagree: {first!r} vs {second!r}")
    return float(np.exp(first))


# ---------------------------------------------------------------------------
# analytic continuation to complex beta and the density of states
# ---------------------------------------------------------------------------

def partition_on_contour(osc: OscillatorSpec, damp, betas,
                         n_explicit: int = 2048) -> np.ndarray:
    """Z(beta) for complex beta with Re beta > 0, vectorized.

    Sums n_explicit Matsubara log-terms per beta and closes the series
    with an inverse-power tail fitted to the last 32 terms (the terms
    decay like 1/n^2 uniformly on the contour).  Branch cuts of the
    complex logarithm are harmless: the result is exponentiated, and
    exp eats any 2 pi i miscount.
    """
    _require_finite_product(damp)
    b = np.atleast_1d(np.asarray(betas, dtype=complex))
    if np.any(b.real <= 0.0):
        raise DomainError("the partition function requires Re beta > 0")
    w0sq = osc.omega0 ** 2
    n = np.arange(1, n_explicit + 1)
    window = 32
    n_fit = n[-window:].astype(float)
    basis = np.stack([n_fit ** (-(2.0 + j)) for j in range(3)], axis=1)
    pinv = np.linalg.pinv(basis)
    zeta_tail = np.array([zeta(2.0 + j, n_explicit + 1) for j in range(3)])

    out = np.empty(b.shape, dtype=complex)
    chunk = max(1, int(2e6) // n_explicit)
    for start in range(0, b.size, chunk):
        sl = slice(start, min(start + chunk, b.size))
        nu = (2.0 * np.pi / (HBAR * b[sl]))[None, :] * n[:, None]
        vals = np.log1p((nu * damp.laplace(nu) + w0sq) / (nu * nu))
        total = vals.sum(axis=0) + zeta_tail @ (pinv @ vals[-window:])
        out[sl] = np.exp(-total) / (HBAR * b[sl] * osc.omega0)
    return out if np.ndim(betas) else complex(out[0])


@dataclass(frozen=True)
class DensityOfStates:
    """Smeared spectral density of the damped oscillator.

    energies are absolute (ground energy included); rho is the smooth
    part of the density of states, with the ground-state delta of weight
    ground_weight peeled off and reported separately.  plateau is the
    mean level density 1 / hbar omega0 that rho approaches once the
    broadened levels overlap.
    """

    energies: np.ndarray
    rho: np.ndarray
    ground_energy: float
    ground_weight: float
    plateau: float
    smearing: float


def _dos_transform(osc, damp, eps0, w0g, energies_rel, c, y_w,
                   n_explicit) -> np.ndarray:
    """Re-part Bromwich integral of the regularized transform at one c."""
    plateau = 1.0 / (HBAR * osc.omega0)
    # the final exp(c E) amplifies every quadrature defect at the top of
    # the energy window, so the Gaussian cutoff must be taken deep
    # (exp(-16) at y_max) and the grid must keep cos(y E_top) well
    # resolved; both margins are sized for ~1e-6 transform accuracy.
    y_max = 4.0 * y_w
    e_top = float(energies_rel[-1])
    dy = min(0.15 / max(e_top, 1e-12), y_w / 200.0)
    n_y = int(np.ceil(y_max / dy))
    n_y += n_y % 2                      # even panel count for Simpson
    y = np.linspace(0.0, y_max, n_y + 1)
    beta = c + 1j * y

    z = partition_on_contour(osc, damp, beta, n_explicit=n_explicit)
    z_reg = np.exp(beta * eps0) * z - w0g - plateau / beta
    f = z_reg * np.exp(-((y / y_w) ** 2))

    simpson = np.ones(n_y + 1)
    simpson[1:-1:2] = 4.0
    simpson[2:-1:2] = 2.0
    simpson *= (y[1] - y[0]) / 3.0
    fw = f * simpson

    rho = np.empty(energies_rel.size)
    chunk = max(1, int(4e6) // (n_y + 1))
    for start in range(0, energies_rel.size, chunk):
        sl = slice(start, min(start + chunk, energies_rel.size))
        phase = np.outer(energies_rel[sl], y)
        rho[sl] = np.cos(phase) @ fw.real - np.sin(phase) @ fw.imag
    return plateau + np.exp(c * energies_rel) * rho / np.pi


def density_of_states(osc: OscillatorSpec, damp, e_max: float | None = None,
                      n_energy: int = 1201, smearing_width: float | None = None,
                      contour_real: float | None = None,
                      n_explicit: int = 2048,
                      contour_rtol: float = 1e-3) -> DensityOfStates:
    """Invert Z(beta) into the density of states by Bromwich contour.

    After removing the ground-state delta (weight from
    ground_state_weight) and the flat background 1/hbar omega0, what is
    left of e^{beta E_0} Z(beta) is the Laplace transform of a decaying
    function, inverted along beta = c + iy with a Gaussian window
    exp(-(y/y_w)^2).  The window smears rho with a Gaussian of width
    sqrt(2)/y_w, reported as `smearing`; it must stay well below the
    physical level broadening for the peaks to come out unbiased.

    The abscissa c is arbitrary by Cauchy's theorem, so the whole
    transform is recomputed at 0.7 c and the two results must agree to
    contour_rtol relative to the plateau -- a strong end-to-end check on
    the analytic continuation, the tail fits, and the inversion.
    """
    _require_finite_product(damp)
    eps0 = ground_state_energy(osc, damp)
    w0g = ground_state_weight(osc, damp)
    if e_max is None:
        e_max = 14.0 * HBAR * osc.omega0
    if smearing_width is None:
        gamma_eff = float(np.real(damp.spectral(osc.omega0)))
        if gamma_eff <= 0.0:
            raise DomainError("smearing_width must be given for undamped "
                              "spectra (delta peaks)")
        smearing_width = gamma_eff / 18.0
    y_w = np.sqrt(2.0) / smearing_width
    if contour_real is None:
        # keep exp(c E) <= exp(4.5) across the window: larger c amplifies
        # inversion noise at high E, smaller c drags the contour into the
        # slowly-decaying region near beta = 0.
        contour_real = 4.5 / e_max

    energies_rel = np.linspace(0.0, e_max, n_energy)
    rho = _dos_transform(osc, damp, eps0, w0g, energies_rel,
                         contour_real, y_w, n_explicit)
    rho_alt = _dos_transform(osc, damp, eps0, w0g, energies_rel,
                             0.7 * contour_real, y_w, n_explicit)
    plateau = 1.0 / (HBAR * osc.omega0)
    defect = float(np.max(np.abs(rho - rho_alt))) / plateau
    if defect > contour_rtol:
        raise ContourError(
            f"density of states depends on the contour abscissa "
            f"(relative defect {defect:.2e}); the continuation or the "
            f"ground-state subtraction is inconsistent")
    return DensityOfStates(energies=eps0 + energies_rel, rho=rho,
                           ground_energy=eps0, ground_weight=w0g,
                           plateau=plateau, smearing=float(smearing_width))
