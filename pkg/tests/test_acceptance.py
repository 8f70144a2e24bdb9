"""End-to-end acceptance checks.

Each test pins one advertised guarantee of the package at its stated
tolerance and runtime budget, so ``pytest -v tests/test_acceptance.py``
prints a single pass/fail line per criterion.  Shared expensive artifacts
(the 2000-mode reference baths and their normal modes) are built once in
module-scoped fixtures that record their own wall time; the budget
assertions include that time.
"""

import time
from pathlib import Path

import numpy as np
import pytest

from qbrownian.bath import DiscreteBathDamping, discretize_bath, noise_correlation
from qbrownian.cli import main
from qbrownian.damping import DrudeDamping, OhmicDamping
from qbrownian.dynamics import (
    build_hamiltonian,
    correlation_from_propagator,
    equilibrium_system_moments,
    flip_momenta,
    normal_modes,
    propagator,
    relaxation_run,
    symplectic_form,
    two_time_correlation,
)
from qbrownian.imaginary_time import (
    CubicPotentialSpec,
    PathGrid,
    crossover_temperature,
    crossover_temperature_ohmic,
    effective_action,
)
from qbrownian.numerics import ThermalParams
from qbrownian.oscillator import (
    OscillatorSpec,
    position_variance,
    second_moments,
    sqq_ohmic_closed_form,
    sqq_ohmic_zero_t_parts,
    sqq_quadrature,
    weak_coupling_correction,
)
from qbrownian.response import (
    current_noise,
    current_noise_parts,
    resistor,
    series_rlc,
)
from qbrownian.thermo import density_of_states, partition_function, q2_from_partition

OSC = OscillatorSpec(mass=1.0, omega0=1.0)


def reference_bath(gamma):
    """The 2000-mode logarithmic Drude bath used by the oracle checks."""
    return discretize_bath(DrudeDamping(gamma, 8.0), 2000,
                           grid="log", omega_min=1e-4)


@pytest.fixture(scope="module")
def moment_grid():
    start = time.perf_counter()
    records = []
    for gamma in (0.1, 0.5, 1.0):
        damp = DrudeDamping(gamma, 8.0)
        ham = build_hamiltonian(OSC, reference_bath(gamma))
        modes = normal_modes(ham)
        for temp in (0.1, 1.0, 10.0):
            thermal = ThermalParams(temperature=temp)
            analytic = second_moments(OSC, damp, thermal)
            microscopic = equilibrium_system_moments(ham, thermal,
                                                     modes=modes)
            records.append((gamma, temp, analytic, microscopic))
    return records, time.perf_counter() - start


@pytest.fixture(scope="module")
def dynamics_oracle():
    start = time.perf_counter()
    thermal = ThermalParams(temperature=1.0)
    times = np.linspace(0.0, 10.0, 101)
    ham = build_hamiltonian(OSC, reference_bath(0.5))
    modes = normal_modes(ham)
    mode_route = two_time_correlation(ham, thermal, times, modes=modes)
    ladder_route = correlation_from_propagator(ham, thermal, times,
                                               modes=modes)
    continuum = sqq_quadrature(OSC, DrudeDamping(0.5, 8.0), thermal, times)

    # the step matrix that generates every simulated trajectory above
    s = propagator(ham, times[1] - times[0])
    jmat = symplectic_form(ham.a_matrix.shape[0] // 2)
    symplectic_defect = float(np.max(np.abs(s.T @ jmat @ s - jmat)))
    rng = np.random.default_rng(7)
    z0 = rng.standard_normal(ham.a_matrix.shape[0])
    z = z0
    for _ in range(13):                        # out to t = 1.3 ...
        z = s @ z
    z = flip_momenta(z)
    for _ in range(13):                        # ... and back again
        z = s @ z
    z_back = flip_momenta(z)
    roundtrip = float(np.max(np.abs(z_back - z0))) / float(np.max(np.abs(z0)))

    relax = relaxation_run(ham, thermal, times, modes=modes)
    return {
        "times": times,
        "mode_route": np.asarray(mode_route),
        "ladder_route": np.asarray(ladder_route),
        "continuum": np.asarray(continuum),
        "symplectic_defect": symplectic_defect,
        "roundtrip": roundtrip,
        "relax": relax,
        "elapsed": time.perf_counter() - start,
    }


def test_criterion_01_fdt_decomposition_and_limits():
    start = time.perf_counter()
    omega = np.linspace(-10.0, 10.0, 800)        # even count: omega = 0 absent
    for adm in (resistor(1.0), series_rlc(0.5, 1.0, 1.0)):
        for temp in (0.01, 1.0, 100.0):
            thermal = ThermalParams(temperature=temp)
            total = current_noise(adm, thermal, omega)
            vac, th = current_noise_parts(adm, thermal, omega)
            assert np.allclose(total, vac + th, rtol=1e-12, atol=1e-12)

    adm = resistor(1.0)
    for temp in (0.01, 1.0, 100.0):
        thermal = ThermalParams(temperature=temp)
        w_cl, w_qm = 0.05 * temp, 20.0 * temp
        classical = current_noise(adm, thermal, w_cl)
        assert classical == pytest.approx(2.0 * temp * adm.real_part(w_cl),
                                          rel=0.01)
        quantum = current_noise(adm, thermal, w_qm)
        assert quantum == pytest.approx(w_qm * adm.real_part(w_qm), rel=0.01)
    elapsed = time.perf_counter() - start
    print(f"fdt decomposition exact to 1e-12; both limits within 1% "
          f"({elapsed:.2f} s)")
    assert elapsed < 1.0


def test_criterion_02_ohmic_correlation_two_routes():
    start = time.perf_counter()
    t = np.linspace(0.0, 10.0, 20)
    worst = 0.0
    for gamma in np.linspace(0.1, 1.9, 20):
        for temp in np.logspace(-2.0, 2.0, 20):
            thermal = ThermalParams(temperature=temp)
            closed = sqq_ohmic_closed_form(OSC, gamma, thermal, t)
            quad = sqq_quadrature(OSC, OhmicDamping(gamma), thermal, t)
            scale = float(np.max(np.abs(closed)))
            worst = max(worst, float(np.max(np.abs(closed - quad))) / scale)
    elapsed = time.perf_counter() - start
    print(f"closed form vs quadrature, 8000 points: worst {worst:.3e} "
          f"({elapsed:.1f} s)")
    assert worst < 1e-6
    assert elapsed < 30.0


def test_criterion_03_zero_temperature_algebraic_tail():
    start = time.perf_counter()
    gamma = 0.2
    t = np.linspace(30.0, 100.0, 141)
    _, algebraic = sqq_ohmic_zero_t_parts(OSC, gamma, t)
    slope, intercept = np.polyfit(np.log(t), np.log(-algebraic), 1)
    amplitude = float(np.exp(intercept))
    elapsed = time.perf_counter() - start
    print(f"tail power {slope:.4f} (want -2 +- 0.05), amplitude "
          f"{amplitude:.5f} vs gamma/pi = {gamma / np.pi:.5f} "
          f"({elapsed:.2f} s)")
    assert slope == pytest.approx(-2.0, abs=0.05)
    assert amplitude == pytest.approx(gamma / np.pi, rel=0.05)
    assert elapsed < 10.0


def test_criterion_04_matsubara_vs_microscopic_moments(moment_grid):
    records, elapsed = moment_grid
    worst = 0.0
    for gamma, temp, analytic, microscopic in records:
        rq = abs(microscopic.q2 - analytic.q2) / analytic.q2
        rp = abs(microscopic.p2 - analytic.p2) / analytic.p2
        worst = max(worst, rq, rp)
    print(f"moments across 3 gammas x 3 temperatures: worst relative "
          f"deviation {worst:.3e} ({elapsed:.1f} s)")
    assert worst < 1e-3
    assert elapsed < 120.0


def test_criterion_05_heisenberg_bound_everywhere(moment_grid,
                                                  dynamics_oracle):
    records, _ = moment_grid
    bound = 0.25 - 1e-12                       # hbar^2 / 4, hbar = 1
    for gamma, temp, analytic, microscopic in records:
        assert analytic.q2 * analytic.p2 >= bound
        assert microscopic.q2 * microscopic.p2 >= bound
    product = dynamics_oracle["relax"].uncertainty_product
    assert np.all(product >= bound)
    print(f"uncertainty product >= 1/4 at all {len(records)} grid points "
          f"and {product.size} trajectory samples "
          f"(trajectory min {float(product.min()):.6f})")


def test_criterion_06_weak_coupling_correction_endpoints():
    start = time.perf_counter()
    hot = weak_coupling_correction(OSC, ThermalParams(temperature=100.0))
    cold = weak_coupling_correction(OSC, ThermalParams(temperature=0.001))
    assert abs(hot) < 0.01
    assert abs(cold + 1.0) < 0.01

    gamma = 1e-3
    for temp in (0.3, 1.0, 4.0):
        thermal = ThermalParams(temperature=temp)
        delta = weak_coupling_correction(OSC, thermal)
        q2_free = 0.5 / np.tanh(0.5 / temp)
        q2_damped = position_variance(OSC, OhmicDamping(gamma), thermal)
        slope = (q2_damped / q2_free - 1.0) / (gamma / np.pi)
        assert slope == pytest.approx(delta, rel=0.01)

    shape = np.array([weak_coupling_correction(
        OSC, ThermalParams(temperature=temp))
        for temp in np.logspace(-2.0, 1.0, 30)])
    assert np.all(shape >= -1.0 - 1e-9)
    assert np.all(shape <= 1e-9)
    assert np.all(np.diff(shape) >= -1e-9)     # monotone rise from -1 to 0
    elapsed = time.perf_counter() - start
    print(f"endpoints {hot:.4f} / {cold:.4f}, finite-gamma slope within 1% "
          f"({elapsed:.2f} s)")
    assert elapsed < 1.0


def test_criterion_07_dynamics_oracle_and_recurrence(dynamics_oracle):
    d = dynamics_oracle
    scale = float(np.max(np.abs(d["continuum"])))
    sim_vs_modes = float(np.max(np.abs(d["ladder_route"] - d["mode_route"])))
    sim_vs_continuum = float(
        np.max(np.abs(d["ladder_route"] - d["continuum"]))) / scale
    assert sim_vs_modes / scale < 1e-2
    assert sim_vs_continuum < 1e-2
    assert d["symplectic_defect"] < 1e-10
    assert d["roundtrip"] < 1e-8

    # a 10-mode bath cannot truly dissipate: the energy returns
    small = discretize_bath(DrudeDamping(1.5, 2.0), 10, omega_max=10.0,
                            coverage_rtol=0.25)
    ham = build_hamiltonian(OSC, small)
    times = np.linspace(0.0, 20.0, 2001)
    corr = np.asarray(two_time_correlation(
        ham, ThermalParams(temperature=1.0), times))
    revival = float(np.max(np.abs(corr[times >= 3.0]))) / abs(float(corr[0]))
    print(f"ladder vs modes {sim_vs_modes / scale:.2e}, vs continuum "
          f"{sim_vs_continuum:.2e}; symplectic {d['symplectic_defect']:.2e}, "
          f"round trip {d['roundtrip']:.2e}; revival {revival:.2f} "
          f"({d['elapsed']:.1f} s)")
    assert revival > 0.5
    assert d["elapsed"] < 300.0


def test_criterion_08_noise_routes_and_classical_limit():
    start = time.perf_counter()
    omega_d = 4.0
    bath = discretize_bath(DrudeDamping(0.5, omega_d), 2000,
                           system_mass=1.0)
    t = np.linspace(0.0, 5.0, 201)
    thermal = ThermalParams(temperature=1.0)
    s_sum = noise_correlation(bath, thermal, t, method="bath_sum")
    s_int = noise_correlation(bath, thermal, t, method="kernel_integral")
    scale = float(np.max(np.abs(s_sum)))
    routes = float(np.max(np.abs(s_sum - s_int))) / scale
    assert routes < 1e-2

    temp_cl = 100.0 * omega_d                  # k_B T = 100 hbar omega_d
    s_cl = noise_correlation(bath, ThermalParams(temperature=temp_cl), t,
                             method="bath_sum").real
    white = temp_cl * DrudeDamping(0.5, omega_d).kernel(t)
    classical = float(np.max(np.abs(s_cl - white))) / float(np.max(white))
    elapsed = time.perf_counter() - start
    print(f"bath sum vs kernel integral {routes:.2e}; classical limit "
          f"{classical:.2e} ({elapsed:.1f} s)")
    assert classical < 1e-2
    assert elapsed < 30.0


def test_criterion_09_partition_function_and_density_of_states():
    start = time.perf_counter()
    for temp in (0.2, 1.0, 5.0):
        z = partition_function(OSC, OhmicDamping(0.0),
                               ThermalParams(temperature=temp))
        ref = 0.5 / np.sinh(0.5 / temp)
        assert z == pytest.approx(ref, rel=1e-10)

    damp = DrudeDamping(0.5, 8.0)
    for temp in (0.5, 2.0):
        thermal = ThermalParams(temperature=temp)
        q2_thermo = q2_from_partition(OSC, damp, thermal)
        q2_ref = second_moments(OSC, damp, thermal).q2
        assert q2_thermo == pytest.approx(q2_ref, rel=1e-6)

    dos = density_of_states(OSC, DrudeDamping(0.1, 8.0))
    e0 = dos.ground_energy
    offsets = []
    for n in range(1, 6):
        sel = np.abs(dos.energies - (e0 + n)) <= 0.45
        peak = float(dos.energies[sel][np.argmax(dos.rho[sel])])
        offsets.append(peak - (e0 + n))
        assert abs(peak - (e0 + n)) <= 0.1     # within hbar * gamma
    plateau = float(np.mean(dos.rho[dos.energies >= e0 + 12.0]))
    elapsed = time.perf_counter() - start
    print(f"undamped partition exact; thermodynamic q2 to 1e-6; peak "
          f"offsets {np.max(np.abs(offsets)):.3f} <= 0.1, plateau "
          f"{plateau:.4f} ({elapsed:.1f} s)")
    assert plateau == pytest.approx(dos.plateau, rel=0.05)
    assert elapsed < 180.0


def test_criterion_10_crossover_and_action_identity():
    start = time.perf_counter()
    pot = CubicPotentialSpec(mass=1.0, omega0=1.0, q0=3.0)
    for gamma in (0.3, 1.0, 2.5):
        root = crossover_temperature(pot, OhmicDamping(gamma))
        closed = crossover_temperature_ohmic(pot, gamma)
        assert root == pytest.approx(closed, rel=1e-10)

    sweep = [crossover_temperature(pot, DrudeDamping(g, 4.0))
             for g in np.linspace(0.1, 3.0, 10)]
    assert np.all(np.diff(sweep) < 0.0)

    beta_h = 2.0
    thermal = ThermalParams(temperature=0.5)
    nu1 = 2.0 * np.pi / beta_h
    amp = 0.8
    path = PathGrid.from_callable(beta_h, 64,
                                  lambda tau: amp * np.cos(nu1 * tau))
    small = DiscreteBathDamping(discretize_bath(
        DrudeDamping(0.5, 4.0), 200, omega_max=32.0, coverage_rtol=0.12))
    worst = 0.0
    for damp in (OhmicDamping(0.7), DrudeDamping(0.8, 5.0), small):
        res = effective_action(path, damp, thermal)
        pred = beta_h * nu1 * float(np.real(damp.laplace(nu1 + 0j))) \
            * amp ** 2 / 4.0
        worst = max(worst, abs(res.quadrature - pred) / pred)
        assert res.quadrature == pytest.approx(pred, rel=1e-6)
        assert res.action == pytest.approx(pred, rel=1e-6)

    flat = effective_action(PathGrid(beta_h, np.full(16, 1.3)),
                            OhmicDamping(0.7), thermal)
    assert flat.action == 0.0 and flat.quadrature == 0.0
    elapsed = time.perf_counter() - start
    print(f"crossover closed form to 1e-10, monotone sweep; single-mode "
          f"action worst {worst:.2e}; flat path exactly zero "
          f"({elapsed:.1f} s)")
    assert elapsed < 60.0


def test_criterion_11_cli_determinism(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    assert main(["validate", "--out", str(first), "--quiet"]) == 0
    assert main(["validate", "--out", str(second), "--quiet"]) == 0
    for name in ("validate.csv", "validate.manifest.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
    table = (first / "validate.csv").read_text()
    assert "fail" not in table.splitlines()[2:]
    print("validate passed twice with byte-identical artifacts")
