"""Exact Gaussian dynamics of the oscillator-plus-bath Hamiltonian.

The coupled system of N+1 oscillators is quadratic, so everything --
normal modes, thermal states, real-time propagation -- is exact linear
algebra.  This module is the brute-force oracle for the reduced
descriptions: correlations and moments computed here from the full
microscopic model must reproduce the closed forms and Matsubara sums
built elsewhere in the package.

Phase space is interleaved, z = (q, p, x_1, p_1, ..., x_N, p_N), with
H = z^T A z / 2 and Hamilton's equations zdot = J A z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .bath import BathSpec, damping_kernel
from .errors import DomainError
from .numerics import HBAR, ThermalParams, coth_weight
from .oscillator import OscillatorSpec, SecondMoments


def symplectic_form(n_oscillators: int) -> np.ndarray:
    """The block-diagonal symplectic matrix J for interleaved (q, p) pairs."""
    dim = 2 * n_oscillators
    j = np.zeros((dim, dim))
    idx = np.arange(0, dim, 2)
    j[idx, idx + 1] = 1.0
    j[idx + 1, idx] = -1.0
    return j


def flip_momenta(z: np.ndarray) -> np.ndarray:
    """Negate every momentum component (time-reversal in phase space)."""
    out = np.array(z, dtype=float, copy=True)
    out[..., 1::2] *= -1.0
    return out


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """H = z^T A z / 2 for the central oscillator coupled to its bath."""

    osc: OscillatorSpec
    bath: BathSpec
    a_matrix: np.ndarray

    @property
    def n_oscillators(self) -> int:
        return 1 + self.bath.n_modes

    @property
    def dim(self) -> int:
        return 2 * self.n_oscillators


def build_hamiltonian(osc: OscillatorSpec, bath: BathSpec) -> QuadraticHamiltonian:
    """Assemble the phase-space quadratic form of system plus bath.

    The potential counterterm sum_i c_i^2 q^2 / (2 m_i w_i^2) is included,
    so the bare oscillator frequency keeps its meaning and the coupled
    stiffness matrix is positive definite by construction.
    """
    if abs(bath.system_mass - osc.mass) > 1e-12 * max(abs(osc.mass), 1.0):
        raise DomainError(
            f"bath was discretized for system mass {bath.system_mass}, "
            f"not {osc.mass}")
    n = bath.n_modes
    dim = 2 * (n + 1)
    a = np.zeros((dim, dim))
    a[0, 0] = osc.mass * osc.omega0 ** 2 + bath.strength.sum()
    a[1, 1] = 1.0 / osc.mass
    ix = 2 + 2 * np.arange(n)
    a[ix, ix] = bath.mass * bath.omega ** 2
    a[ix + 1, ix + 1] = 1.0 / bath.mass
    a[0, ix] = -bath.coupling
    a[ix, 0] = -bath.coupling
    return QuadraticHamiltonian(osc=osc, bath=bath, a_matrix=a)


# ---------------------------------------------------------------------------
# normal modes of the coupled system (arrowhead secular equation)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalModes:
    """Eigenmodes of the mass-weighted stiffness matrix.

    positions transform as x = V Q and momenta as p = diag(masses) V Qdot,
    where Q_k are unit-mass mode coordinates oscillating at frequencies[k].
    """

    frequencies: np.ndarray
    position_transform: np.ndarray
    masses: np.ndarray

    @property
    def momentum_transform(self) -> np.ndarray:
        return self.masses[:, None] * self.position_transform


def normal_modes(ham: QuadraticHamiltonian,
                 chunk: int = 512) -> NormalModes:
    """Diagonalize the coupled stiffness matrix without forming it.

    In mass-weighted coordinates the stiffness matrix is an arrowhead:
    diagonal d_i = w_i^2 with arms s_i = -c_i / sqrt(M m_i) attached to
    the head d_0 = w0^2 + sum_i s_i^2 / d_i.  Its eigenvalues interlace
    the d_i -- one in each gap, one below d_1, one above d_N -- and are
    the roots of

        f(lam) = w0^2 - lam - lam * sum_i s_i^2 / (d_i (d_i - lam)).

    This form makes the counterterm cancellation explicit: f(0) = w0^2
    exactly, so the spectrum stays positive no matter how disparate the
    bath frequencies are, where a generic dense eigensolver would lose
    the small eigenvalues to cancellation between the head and the arms.
    Bisection on each bracket (vectorized across roots) is branch-free
    and converges to rounding level in 100 halvings.
    """
    osc, bath = ham.osc, ham.bath
    d = bath.omega ** 2
    arm = -bath.coupling / np.sqrt(osc.mass * bath.mass)
    arm_sq = arm * arm
    arm_sq_over_d = arm_sq / d
    w0sq = osc.omega0 ** 2

    upper = max(w0sq + np.sum(arm_sq_over_d) + np.sum(np.abs(arm)),
                float(np.max(d + np.abs(arm)))) * (1.0 + 1e-12) + w0sq
    lo = np.concatenate(([0.0], d))
    hi = np.concatenate((d, [upper]))

    lam = np.empty_like(lo)
    for start in range(0, lo.size, chunk):
        sl = slice(start, min(start + chunk, lo.size))
        lo_c = lo[sl].copy()
        hi_c = hi[sl].copy()
        for _ in range(100):
            mid = 0.5 * (lo_c + hi_c)
            with np.errstate(divide="ignore"):
                f = w0sq - mid - mid * np.sum(
                    arm_sq_over_d[:, None] / (d[:, None] - mid[None, :]),
                    axis=0)
            pos = f > 0.0
            lo_c = np.where(pos, mid, lo_c)
            hi_c = np.where(pos, hi_c, mid)
        lam[sl] = 0.5 * (lo_c + hi_c)

    # eigenvector k: head u0, arms -s_i u0 / (d_i - lam_k), normalized
    with np.errstate(divide="ignore"):
        arms = -arm[:, None] / (d[:, None] - lam[None, :])
    u0 = 1.0 / np.sqrt(1.0 + np.sum(arms * arms, axis=0))
    n = bath.n_modes
    u = np.empty((n + 1, n + 1))
    u[0, :] = u0
    u[1:, :] = arms * u0[None, :]

    masses = np.concatenate(([osc.mass], bath.mass))
    v = u / np.sqrt(masses)[:, None]
    return NormalModes(frequencies=np.sqrt(lam), position_transform=v,
                       masses=masses)


def _mode_variances(modes: NormalModes, thermal: ThermalParams):
    """Thermal <Q_k^2> and <Qdot_k^2> of the unit-mass mode coordinates."""
    om = modes.frequencies
    w = coth_weight(om, thermal)
    return w / (2.0 * om * om), 0.5 * w


# ---------------------------------------------------------------------------
# equilibrium statistics from the mode sum
# ---------------------------------------------------------------------------

def two_time_correlation(ham: QuadraticHamiltonian, thermal: ThermalParams,
                         times, modes: NormalModes | None = None):
    """Symmetrized equilibrium <q(t) q(0)> of the full coupled model.

        C(t) = sum_k V_qk^2 (hbar / 2 Omega_k) coth(hbar Omega_k / 2kT)
               cos(Omega_k t)

    For a finite bath this is quasi-periodic: with N modes spaced Delta w
    apart the initial decay is followed by a revival near t = 2 pi/Delta w,
    which is the honest microscopic statement that irreversibility only
    emerges in the dense-spectrum limit.
    """
    if modes is None:
        modes = normal_modes(ham)
    q2_modes, _ = _mode_variances(modes, thermal)
    weights = modes.position_transform[0, :] ** 2 * q2_modes
    t_arr = np.atleast_1d(np.asarray(times, dtype=float))
    out = weights @ np.cos(np.outer(modes.frequencies, t_arr))
    return out if np.ndim(times) else float(out[0])


def equilibrium_system_moments(ham: QuadraticHamiltonian,
                               thermal: ThermalParams,
                               modes: NormalModes | None = None) -> SecondMoments:
    """<q^2> and <p^2> of the central oscillator from the mode sum.

    This is the microscopic, finite-N counterpart of the Matsubara-sum
    moments: agreement between the two validates both the bath
    discretization and the analytic continuum formulas.
    """
    if modes is None:
        modes = normal_modes(ham)
    q2m, qd2m = _mode_variances(modes, thermal)
    v0 = modes.position_transform[0, :]
    q2 = float(np.sum(v0 * v0 * q2m))
    p2 = float(ham.osc.mass ** 2 * np.sum(v0 * v0 * qd2m))
    return SecondMoments(q2=q2, p2=p2, temperature=thermal.temperature,
                         n_terms=modes.frequencies.size)


def equilibrium_covariance(ham: QuadraticHamiltonian, thermal: ThermalParams,
                           modes: NormalModes | None = None) -> np.ndarray:
    """Full phase-space covariance of the global thermal state."""
    if modes is None:
        modes = normal_modes(ham)
    q2m, qd2m = _mode_variances(modes, thermal)
    v = modes.position_transform
    w = modes.momentum_transform
    sig_x = (v * q2m) @ v.T
    sig_p = (w * qd2m) @ w.T
    dim = ham.dim
    pos = np.arange(0, dim, 2)
    cov = np.zeros((dim, dim))
    cov[np.ix_(pos, pos)] = sig_x
    cov[np.ix_(pos + 1, pos + 1)] = sig_p
    return cov


# ---------------------------------------------------------------------------
# states and propagation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianState:
    """First and second moments of a Gaussian phase-space distribution."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise DomainError("mean must be (d,) and cov (d, d)")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def system_variances(self) -> tuple[float, float, float]:
        """(var q, var p, cov qp) of the central oscillator."""
        return float(self.cov[0, 0]), float(self.cov[1, 1]), float(self.cov[0, 1])

    @property
    def uncertainty_product(self) -> float:
        """var(q) var(p), to compare against (hbar/2)^2."""
        return float(self.cov[0, 0] * self.cov[1, 1])


def thermal_state(ham: QuadraticHamiltonian,
                  thermal: ThermalParams) -> GaussianState:
    """Global Gibbs state of the coupled model (zero mean)."""
    return GaussianState(mean=np.zeros(ham.dim),
                         cov=equilibrium_covariance(ham, thermal))


def propagator(ham: QuadraticHamiltonian, t: float) -> np.ndarray:
    """S(t) = exp(t J A), the exact symplectic phase-space flow."""
    a = ham.a_matrix
    ja = np.empty_like(a)
    ja[0::2] = a[1::2]
    ja[1::2] = -a[0::2]
    return expm(float(t) * ja)


def propagate(ham: QuadraticHamiltonian, state: GaussianState,
              t: float) -> GaussianState:
    """Evolve a Gaussian state for time t: mean -> S mean, cov -> S cov S^T."""
    s = propagator(ham, t)
    return GaussianState(mean=s @ state.mean, cov=s @ state.cov @ s.T)


def propagate_trajectory(ham: QuadraticHamiltonian, state: GaussianState,
                         times) -> list[GaussianState]:
    """States along a uniform time grid, reusing one single-step propagator.

    Cost is one matrix exponential plus two dense matrix products per
    step, so this is meant for modest bath sizes; use relaxation_run for
    the system-block statistics of large baths.
    """
    t_arr = np.asarray(times, dtype=float)
    if t_arr.ndim != 1 or t_arr.size < 2:
        raise DomainError("need a 1-d grid of at least two times")
    steps = np.diff(t_arr)
    if not np.allclose(steps, steps[0], rtol=1e-12, atol=1e-15):
        raise DomainError("time grid must be uniform")
    out = []
    cur = propagate(ham, state, t_arr[0]) if t_arr[0] != 0.0 else state
    out.append(cur)
    s = propagator(ham, steps[0])
    for _ in range(steps.size):
        cur = GaussianState(mean=s @ cur.mean, cov=s @ cur.cov @ s.T)
        out.append(cur)
    return out


def correlation_from_propagator(ham: QuadraticHamiltonian,
                                thermal: ThermalParams, times,
                                modes: NormalModes | None = None) -> np.ndarray:
    """Equilibrium <q(t) q(0)> via the matrix-exponential ladder.

    For a Gaussian stationary state, <z_a(t) z_b(0)>_sym = [S(t) Sigma]_ab,
    so the position autocorrelation is row q of S(t) applied to the
    q-column of the equilibrium covariance.  The column is built from the
    normal modes, but every phase that actually moves is generated by the
    Pade matrix exponential, making the time dependence an independent
    check on the mode frequencies and on the propagation scheme itself
    (one exponential for the uniform step, then matrix-vector products).
    """
    t_arr = np.asarray(times, dtype=float)
    if t_arr.ndim != 1 or t_arr.size < 2:
        raise DomainError("need a 1-d grid of at least two times")
    steps = np.diff(t_arr)
    if not np.allclose(steps, steps[0], rtol=1e-12, atol=1e-15):
        raise DomainError("time grid must be uniform")
    if modes is None:
        modes = normal_modes(ham)
    q2m, _ = _mode_variances(modes, thermal)
    v = modes.position_transform
    col_x = v @ (q2m * v[0, :])
    col = np.zeros(ham.dim)
    col[0::2] = col_x

    if t_arr[0] != 0.0:
        col = propagator(ham, t_arr[0]) @ col
    s = propagator(ham, steps[0])
    out = np.empty(t_arr.size)
    out[0] = col[0]
    for k in range(1, t_arr.size):
        col = s @ col
        out[k] = col[0]
    return out


# ---------------------------------------------------------------------------
# relaxation from a displaced initial state (mode-route contraction)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RelaxationResult:
    """System-block statistics along a relaxation trajectory."""

    times: np.ndarray
    mean_q: np.ndarray
    mean_p: np.ndarray
    var_q: np.ndarray
    var_p: np.ndarray
    cov_qp: np.ndarray

    @property
    def uncertainty_product(self) -> np.ndarray:
        """var(q) var(p) along the trajectory."""
        return self.var_q * self.var_p


def _system_rows(modes: NormalModes, mass: float, times: np.ndarray):
    """Coefficient rows of q(t) and p(t) over the initial (x, p) variables.

    q(t) = sum_k V_qk [cos(Om t) Q_k(0) + sin(Om t)/Om Qdot_k(0)] with
    Q_k(0) = sum_j m_j V_jk x_j(0) and Qdot_k(0) = sum_j V_jk p_j(0);
    the returned arrays have shape (n_times, n_oscillators).
    """
    om = modes.frequencies
    v = modes.position_transform
    w = modes.momentum_transform
    v0 = v[0, :]
    cos_t = np.cos(np.outer(times, om))
    sin_t = np.sin(np.outer(times, om))
    rq_x = (cos_t * v0) @ w.T
    rq_p = ((sin_t / om) * v0) @ v.T
    rp_x = mass * ((-sin_t * om) * v0) @ w.T
    rp_p = mass * (cos_t * v0) @ v.T
    return rq_x, rq_p, rp_x, rp_p


def relaxation_run(ham: QuadraticHamiltonian, thermal: ThermalParams, times,
                   q0: float = 1.0, p0: float = 0.0,
                   var_q0: float | None = None, var_p0: float | None = None,
                   preparation: str = "shifted",
                   modes: NormalModes | None = None) -> RelaxationResult:
    """Relax a displaced Gaussian system state against a thermal bath.

    The system starts with mean (q0, p0) and variances (var_q0, var_p0)
    (bare ground-state values by default); each bath oscillator starts
    thermal.  preparation selects where the bath sits:

    * "shifted": bath displaced to its potential minimum for the actual
      initial position, x_i = c_i q / (m_i w_i^2) + thermal fluctuation.
      The bath then has no initial slip to absorb and only the system
      displacement relaxes.
    * "factorized": bath centered at x_i = 0 regardless of q.  The
      mismatch with the counterterm produces an initial transient kick.

    Only system-block statistics are returned, contracted mode-by-mode
    without ever materializing the (2N+2)^2 covariance, so N in the
    thousands is cheap.
    """
    if preparation not in ("shifted", "factorized"):
        raise DomainError(f"unknown preparation {preparation!r}")
    if modes is None:
        modes = normal_modes(ham)
    osc, bath = ham.osc, ham.bath
    if var_q0 is None:
        var_q0 = HBAR / (2.0 * osc.mass * osc.omega0)
    if var_p0 is None:
        var_p0 = HBAR * osc.mass * osc.omega0 / 2.0
    t_arr = np.atleast_1d(np.asarray(times, dtype=float))
    rq_x, rq_p, rp_x, rp_p = _system_rows(modes, osc.mass, t_arr)

    shift = bath.coupling / (bath.mass * bath.omega ** 2)
    if preparation == "factorized":
        shift = np.zeros_like(shift)

    mean_x = np.concatenate(([q0], shift * q0))
    mean_p = np.zeros(ham.n_oscillators)
    mean_p[0] = p0
    mq = rq_x @ mean_x + rq_p @ mean_p
    mp = rp_x @ mean_x + rp_p @ mean_p

    # independent blocks: system fluctuation (dq, dp) and per-mode thermal
    # bath fluctuations; under the shifted preparation x_i rides on dq.
    wgt = coth_weight(bath.omega, thermal)
    bath_var_x = wgt / (2.0 * bath.mass * bath.omega ** 2)
    bath_var_p = 0.5 * bath.mass * wgt

    aq_q = rq_x[:, 0] + rq_x[:, 1:] @ shift
    ap_q = rp_x[:, 0] + rp_x[:, 1:] @ shift
    aq_p = rq_p[:, 0]
    ap_p = rp_p[:, 0]

    var_q = (aq_q ** 2 * var_q0 + aq_p ** 2 * var_p0
             + (rq_x[:, 1:] ** 2) @ bath_var_x + (rq_p[:, 1:] ** 2) @ bath_var_p)
    var_p = (ap_q ** 2 * var_q0 + ap_p ** 2 * var_p0
             + (rp_x[:, 1:] ** 2) @ bath_var_x + (rp_p[:, 1:] ** 2) @ bath_var_p)
    cov_qp = (aq_q * ap_q * var_q0 + aq_p * ap_p * var_p0
              + (rq_x[:, 1:] * rp_x[:, 1:]) @ bath_var_x
              + (rq_p[:, 1:] * rp_p[:, 1:]) @ bath_var_p)
    return RelaxationResult(times=t_arr, mean_q=mq, mean_p=mp,
                            var_q=var_q, var_p=var_p, cov_qp=cov_qp)


# ---------------------------------------------------------------------------
# fluctuating force seen by the system
# ---------------------------------------------------------------------------

def fluctuating_force_row(ham: QuadraticHamiltonian, times) -> np.ndarray:
    """Coefficient rows of the Langevin force over initial phase space.

    Eliminating the bath from the Heisenberg equations leaves

        xi(t) = -M gamma(t) q(0)
                + sum_i c_i [cos(w_i t) x_i(0) + sin(w_i t) p_i(0)/(m_i w_i)]

    as the inhomogeneity; this returns its coefficient row(s), shape
    (n_times, dim).  Contracting two rows against an initial covariance
    whose bath is displaced to the initial position (so x_i(0) rides on
    q(0)) reproduces the stationary noise correlation of the kernel: the
    q(0) coefficient then cancels exactly against the bath cosines.
    """
    t_arr = np.atleast_1d(np.asarray(times, dtype=float))
    bath = ham.bath
    rows = np.zeros((t_arr.size, ham.dim))
    rows[:, 0] = -ham.osc.mass * damping_kernel(bath, t_arr)
    phase = np.outer(t_arr, bath.omega)
    rows[:, 2::2] = np.cos(phase) * bath.coupling
    rows[:, 3::2] = np.sin(phase) * (bath.coupling / (bath.mass * bath.omega))
    return rows if np.ndim(times) else rows[0]


def noise_position_correlation(ham: QuadraticHamiltonian,
                               thermal: ThermalParams, times,
                               modes: NormalModes | None = None) -> np.ndarray:
    """Equilibrium symmetrized <xi(t) q(0)> of force and position.

    Classically the force driving the equilibrium state is independent of
    the instantaneous position; quantum mechanically the shared zero-point
    fluctuations correlate them.  Evaluated as the mode-sum contraction

        <xi(t) q(0)> = sum_i c_i <x_i q> cos(w_i t) - M gamma(t) <q^2>

    with the equilibrium cross covariances <x_i q> from the normal modes.
    """
    if modes is None:
        modes = normal_modes(ham)
    bath = ham.bath
    q2m, _ = _mode_variances(modes, thermal)
    v = modes.position_transform
    cross = v[1:, :] @ (q2m * v[0, :])      # <x_i q>
    q2 = float(np.sum(v[0, :] ** 2 * q2m))
    t_arr = np.atleast_1d(np.asarray(times, dtype=float))
    out = np.cos(np.outer(t_arr, bath.omega)) @ (bath.coupling * cross) \
        - ham.osc.mass * damping_kernel(bath, t_arr) * q2
    return out if np.ndim(times) else float(out[0])
