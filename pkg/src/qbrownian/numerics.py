"""Shared numerical kernels.

Thermal parameters, Matsubara frequency sets, an overflow-safe thermal
weight function, a complex trigamma, and a tail-corrected summator for
slowly convergent series.  Everything downstream builds on these.

Units: hbar = k_B = 1 throughout the package.  Temperatures are energies,
frequencies are inverse times.  The HBAR constant below is kept symbolic
so formulas read like the physics they implement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import zeta

from .errors import DomainError, SummationError

HBAR = 1.0
KBOLTZ = 1.0

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# thermal state parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThermalParams:
    """Equilibrium temperature, with T = 0 allowed.

    Attributes
    ----------
    temperature : float
        k_B T in energy units.  Must be >= 0; zero selects the ground
        state limit in every routine that accepts ThermalParams.
    """

    temperature: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.temperature) or self.temperature < 0.0:
            raise DomainError(
                f"temperature must be finite and >= 0, got {self.temperature}"
            )

    @property
    def beta(self) -> float:
        """Inverse temperature 1/k_B T (inf at T = 0)."""
        if self.temperature == 0.0:
            return np.inf
        return 1.0 / (KBOLTZ * self.temperature)

    @property
    def is_zero(self) -> bool:
        return self.temperature == 0.0

    def matsubara(self, n_max: int) -> "MatsubaraSet":
        """Bosonic Matsubara frequencies nu_n = 2 pi n / (hbar beta), n = 1..n_max."""
        if self.is_zero:
            raise DomainError("Matsubara frequencies are undefined at T = 0 "
                              "(the sum becomes an integral)")
        return MatsubaraSet(beta=self.beta, n_max=n_max)


@dataclass(frozen=True)
class MatsubaraSet:
    """A finite set of positive bosonic Matsubara frequencies.

    nu_n = 2 pi n / (hbar beta) for n = 1 .. n_max.  The n = 0 term of any
    particular sum is the caller's business; tails beyond n_max are handled
    by tail_corrected_sum.
    """

    beta: float
    n_max: int

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {self.n_max}")
        if not (np.isfinite(self.beta) and self.beta > 0.0):
            raise DomainError(f"beta must be finite and > 0, got {self.beta}")

    @property
    def spacing(self) -> float:
        """nu_1, the spacing of the frequency comb."""
        return TWO_PI / (HBAR * self.beta)

    @property
    def nu(self) -> np.ndarray:
        """Array of nu_n for n = 1..n_max."""
        return self.spacing * np.arange(1, self.n_max + 1)

    def nu_n(self, n: int) -> float:
        if n < 1:
            raise DomainError(f"index must be >= 1, got {n}")
        return self.spacing * n


# ---------------------------------------------------------------------------
# thermal weight  hbar*omega*coth(hbar*omega / 2 k_B T)
# ---------------------------------------------------------------------------

def coth_weight(omega, thermal: ThermalParams):
    """Return hbar*omega*coth(hbar*omega / 2 k_B T), elementwise.

    This is the weight that turns a dissipative response into a symmetrized
    equilibrium spectrum.  It is even in omega, equals 2 k_B T at omega = 0,
    and approaches hbar*|omega| for hbar*|omega| >> k_B T (and everywhere at
    T = 0).  Small arguments use the series x*coth(x) = 1 + x^2/3 - x^4/45
    to avoid 0/0; large arguments are safe because tanh saturates.
    """
    w = np.asarray(omega, dtype=float)
    if thermal.is_zero:
        out = HBAR * np.abs(w)
        return out if out.ndim else float(out)

    kt = KBOLTZ * thermal.temperature
    x = HBAR * w / (2.0 * kt)
    small = np.abs(x) < 1e-3
    xs = np.where(small, x, 1.0)        # dummy where the real branch is used
    xl = np.where(small, 1.0, x)
    series = 2.0 * kt * (1.0 + xs * xs / 3.0 - xs ** 4 / 45.0)
    direct = HBAR * w / np.tanh(xl)
    out = np.where(small, series, direct)
    return out if out.ndim else float(out)


def bose_occupation(omega, thermal: ThermalParams):
    """Bose-Einstein occupation 1/(exp(hbar*omega/k_B T) - 1), elementwise.

    Negative frequencies give -1 - n(|omega|) as usual.  At T = 0 the
    occupation is 0 for omega > 0 and -1 for omega < 0.  omega = 0 is a
    pole and must be avoided by the caller.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w == 0.0):
        raise DomainError("Bose occupation diverges at omega = 0")
    if thermal.is_zero:
        out = np.where(w > 0.0, 0.0, -1.0)
        return out if out.ndim else float(out)
    x = HBAR * w * thermal.beta
    with np.errstate(over="ignore"):
        out = 1.0 / np.expm1(x)
    out = np.where(x > 700.0, 0.0, out)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# trigamma for complex arguments
# ---------------------------------------------------------------------------

_TRIGAMMA_BERNOULLI = (
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0,
)


def trigamma(z):
    """psi'(z), the trigamma function, for real or complex arguments.

    Uses the recurrence psi'(z) = psi'(z+1) + 1/z^2 to push Re z above 12,
    then the asymptotic series

        psi'(w) ~ 1/w + 1/(2 w^2) + sum_k B_{2k} / w^{2k+1}

    with Bernoulli numbers through B_12, which is full double precision for
    |w| >= 12.  scipy's polygamma only covers the real line; the complex
    plane is needed for analytic tails of Matsubara sums along rotated
    contours and for the weak-damping variance correction.
    """
    z_in = np.asarray(z)
    scalar = z_in.ndim == 0
    w = np.atleast_1d(z_in).astype(complex)

    on_pole = (w.imag == 0.0) & (w.real <= 0.0) & (w.real == np.round(w.real))
    if np.any(on_pole):
        raise DomainError("trigamma has poles at nonpositive integers")

    acc = np.zeros_like(w)
    # upward recurrence; terminates after at most ~12 - min(Re z) steps
    while True:
        mask = w.real < 12.0
        if not mask.any():
            break
        acc[mask] += 1.0 / (w[mask] * w[mask])
        w[mask] += 1.0

    iw2 = 1.0 / (w * w)
    b2, b4, b6, b8, b10, b12 = _TRIGAMMA_BERNOULLI
    poly = b2 - iw2 * (-b4 + iw2 * (-b6 + iw2 * (-b8 + iw2 * (-b10 + iw2 * (-b12)))))
    out = acc + 1.0 / w + 0.5 * iw2 + (iw2 / w) * poly

    if not np.iscomplexobj(z_in):
        out = out.real
    return out[0] if scalar else out.reshape(z_in.shape)


# ---------------------------------------------------------------------------
# tail-corrected summation of sum_{n=1}^inf term(n)
# ---------------------------------------------------------------------------

def _tail_estimate(term_vals: np.ndarray, m: int, power: float, window: int):
    """Least-squares inverse-power tail beyond n = m.

    Fits term(n) ~ c0 n^-p + c1 n^-(p+1) + c2 n^-(p+2) on the last `window`
    computed terms and returns sum_{n>m} of the fit via Hurwitz zeta.
    """
    n_fit = np.arange(m - window + 1, m + 1, dtype=float)
    basis = np.stack([n_fit ** (-(power + j)) for j in range(3)], axis=1)
    vals = term_vals[m - window:m]
    coef, *_ = np.linalg.lstsq(basis.astype(vals.dtype), vals, rcond=None)
    tail = sum(coef[j] * zeta(power + j, m + 1) for j in range(3))
    return tail


def _tail_integral(term, m: int, complex_valued: bool):
    """Euler-Maclaurin tail sum_{n > m} term(n) for a smooth scalar term.

    Uses the midpoint form

        sum_{n=m+1}^inf f(n) = int_{m+1/2}^inf f(x) dx + f'(m+1/2)/24 + ...

    with f'(m+1/2) replaced by the central difference f(m+1) - f(m), whose
    error is of the same order as the first neglected Euler-Maclaurin term
    (~ f''' at the boundary, utterly negligible for m in the thousands).
    Unlike a fitted inverse-power tail this makes no assumption about the
    asymptotic form, so it stays accurate for series whose terms cross over
    between decay regimes far beyond the truncation point.
    """
    def component(part):
        def f(x):
            return part(np.asarray(term(np.asarray([x])))[0])
        # full_output swallows the (harmless) round-off warning quad emits
        # for extreme tolerance demands; the two-window consistency check
        # in tail_corrected_sum is the actual accuracy guard.
        return quad(f, m + 0.5, np.inf, epsabs=0.0, epsrel=1e-11,
                    limit=400, full_output=1)[0]

    integral = component(np.real)
    if complex_valued:
        integral = integral + 1j * component(np.imag)
    f_m, f_m1 = np.asarray(term(np.asarray([m, m + 1]))).ravel()
    return integral + (f_m1 - f_m) / 24.0


def tail_corrected_sum(term, power: float, n_max: int = 20000,
                       rtol: float = 1e-9, window: int = 32):
    """Sum term(n) for n = 1..infinity, assuming term(n) ~ n^-power asymptotically.

    Parameters
    ----------
    term : callable
        Vectorized: maps an ndarray (m,) of indices to term values, either
        shape (m,) or shape (m, K) to sum K series sharing an index range
        in one call (each column is corrected and checked separately).
        Scalar series must be smooth functions of a *real* argument (every
        Matsubara-type series is): their truncation tail is computed by
        Euler-Maclaurin integration of term itself, which is insensitive
        to crossovers between decay regimes beyond the truncation point.
        Matrix series use a fitted inverse-power tail instead, since
        columnwise quadrature would defeat the point of batching.
    power : float
        Leading asymptotic decay exponent; must exceed 1 or the series has
        no finite sum.  Faster-than-power decay (e.g. exponential) is fine.
    n_max : int
        Number of explicitly evaluated terms.
    rtol : float
        Relative agreement demanded between two independent estimates
        (truncation at n_max vs n_max // 2, each with its own tail).
    window : int
        Trailing terms used in the matrix-case tail fit.

    Raises
    ------
    SummationError
        If the two estimates disagree, which catches wrong `power` values,
        non-smooth terms, and genuinely divergent series.
    """
    if power <= 1.0:
        raise DomainError(f"tail power must exceed 1, got {power}")
    if n_max < 4 * window:
        raise DomainError(f"n_max = {n_max} too small for window = {window}")

    n = np.arange(1, n_max + 1)
    vals = np.asarray(term(n))
    matrix = vals.ndim == 2
    if vals.shape[0] != n.shape[0] or vals.ndim > 2:
        raise DomainError("term(n) must return one value (or one row) per index")
    if not np.all(np.isfinite(vals)):
        raise SummationError("series terms are not finite")

    half_m = n_max // 2
    if matrix:
        full = vals.sum(axis=0) + _tail_estimate(vals, n_max, power, window)
        half = vals[:half_m].sum(axis=0) + _tail_estimate(vals, half_m, power, window)
    else:
        cplx = np.iscomplexobj(vals)
        full = vals.sum() + _tail_integral(term, n_max, cplx)
        half = vals[:half_m].sum() + _tail_integral(term, half_m, cplx)

    scale = np.maximum(np.maximum(np.abs(full), np.abs(half)),
                       np.abs(vals).max(axis=0))
    if np.any(np.abs(full - half) > rtol * scale + 1e-300):
        raise SummationError(
            "tail-corrected sum did not converge: estimates "
            f"{full!r} (n_max={n_max}) vs {half!r} (n_max={half_m}) "
            f"differ by more than rtol={rtol}"
        )
    return full if matrix else complex(full) if np.iscomplexobj(full) else float(full)


# ---------------------------------------------------------------------------
# Filon quadrature: int f(w) cos(t w) dw on a uniform grid, exact in t
# ---------------------------------------------------------------------------

def _filon_coefficients(theta: np.ndarray):
    """Filon-Simpson weights (alpha, beta, gamma) for cosine-weighted panels.

    theta = t * h.  Direct trigonometric expressions amplify rounding like
    theta^-3, so small arguments switch to the Taylor series; both branches
    agree to ~1e-12 at the crossover.
    """
    th = np.asarray(theta, dtype=float)
    small = np.abs(th) < 0.3
    ts = np.where(small, th, 1.0)
    tl = np.where(small, 1.0, th)

    t2 = ts * ts
    alpha_s = ts * t2 * (2.0 / 45.0 - t2 * (2.0 / 315.0 - t2 * (2.0 / 4725.0)))
    beta_s = 2.0 / 3.0 + t2 * (2.0 / 15.0 - t2 * (4.0 / 105.0 - t2 * (2.0 / 567.0)))
    gamma_s = 4.0 / 3.0 - t2 * (2.0 / 15.0 - t2 * (1.0 / 210.0 - t2 / 11340.0))

    s = np.sin(tl)
    c = np.cos(tl)
    s2 = np.sin(2.0 * tl)
    il = 1.0 / tl
    il2 = il * il
    il3 = il2 * il
    alpha_l = il + 0.5 * s2 * il2 - 2.0 * s * s * il3
    beta_l = 2.0 * ((1.0 + c * c) * il2 - s2 * il3)
    gamma_l = 4.0 * (s * il3 - c * il2)

    return (np.where(small, alpha_s, alpha_l),
            np.where(small, beta_s, beta_l),
            np.where(small, gamma_s, gamma_l))


def filon_cos(omega: np.ndarray, fvals: np.ndarray, t):
    """int f(w) cos(t w) dw over a uniform grid, vectorized over t.

    omega must be uniformly spaced with an odd number of points (an even
    number of Simpson panels); fvals are the integrand samples.  The
    cosine factor is integrated exactly, so accuracy is O(h^4) in the
    smooth factor regardless of how fast cos(t w) oscillates -- the whole
    point of using Filon weights for spectra that must be transformed at
    many times at once.
    """
    omega = np.asarray(omega, dtype=float)
    fvals = np.asarray(fvals, dtype=float)
    if omega.ndim != 1 or omega.size < 3 or omega.size % 2 == 0:
        raise DomainError("need an odd number (>= 3) of uniform grid points")
    h = omega[1] - omega[0]
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    alpha, beta, gamma = _filon_coefficients(t_arr * h)

    cos_grid = np.cos(np.outer(t_arr, omega))
    even = cos_grid[:, ::2] @ fvals[::2] \
        - 0.5 * (fvals[0] * cos_grid[:, 0] + fvals[-1] * cos_grid[:, -1])
    odd = cos_grid[:, 1::2] @ fvals[1::2]
    ends = fvals[-1] * np.sin(t_arr * omega[-1]) \
        - fvals[0] * np.sin(t_arr * omega[0])
    out = h * (alpha * ends + beta * even + gamma * odd)
    return out if np.ndim(t) else float(out[0])
