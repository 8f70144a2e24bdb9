"""Equilibrium quantum Brownian motion.

Spectra, correlation functions, thermodynamics, and decay machinery of a
harmonic oscillator damped by a linear heat bath, together with an exact
N-oscillator Gaussian simulator that serves as a brute-force oracle for
every analytic route.  Natural units hbar = k_B = 1 throughout.

The modules split along the physics:

``numerics``
    Thermal parameters, Matsubara frequencies, tail-corrected sums,
    trigamma, and a Filon cosine transform.
``response``
    The fluctuation-dissipation theorem for a generic dissipative
    response, plus the electric-circuit (Johnson-Nyquist) dictionary.
``damping``
    Memory-friction models: strictly ohmic and Drude-regularized.
``oscillator``
    The damped oscillator itself: susceptibility, position spectra and
    correlation functions, second moments, the reduced density matrix.
``bath``
    Discretization of a smooth damping model into an explicit oscillator
    bath, quantum noise statistics, and the bath-backed damping facade.
``dynamics``
    Exact Gaussian dynamics of system plus bath: normal modes, two-time
    correlations, symplectic propagation, relaxation runs.
``thermo``
    Partition function, energies, and the density of states by Bromwich
    inversion.
``imaginary_time``
    Influence kernel, effective action of periodic paths, fluctuation
    eigenvalues, and the crossover temperature for thermally assisted
    decay.
``cli``
    Reproducible command-line runs writing CSV data plus JSON manifests.
"""

from .numerics import ThermalParams, MatsubaraSet, coth_weight, bose_occupation, trigamma
from .errors import (QBrownianError, DomainError, DivergentMomentError,
                     DivergentProductError, SummationError, CoverageError,
                     ContourError, RouteMismatchError, ExtrapolationError)
from .damping import OhmicDamping, DrudeDamping
from .response import (DissipativeResponse, Admittance, oscillator_response,
                       fdt_spectrum, resistor, series_rlc, current_noise,
                       current_noise_parts, charge_current_cross_spectrum,
                       johnson_nyquist_classical)
from .oscillator import (OscillatorSpec, SecondMoments, susceptibility,
                         spectral_density, sqq_ohmic_closed_form,
                         sqq_ohmic_zero_t_parts, sqq_quadrature,
                         position_variance, second_moments,
                         reduced_density_matrix, weak_coupling_correction)
from .bath import (BathSpec, DiscreteBathDamping, discretize_bath,
                   damping_kernel, gamma_laplace, noise_correlation,
                   noise_commutator, NoiseStatistics, noise_statistics)
from .dynamics import (QuadraticHamiltonian, NormalModes, GaussianState,
                       RelaxationResult, build_hamiltonian, normal_modes,
                       two_time_correlation, equilibrium_system_moments,
                       equilibrium_covariance, thermal_state, propagator,
                       propagate, propagate_trajectory,
                       correlation_from_propagator, relaxation_run,
                       fluctuating_force_row, noise_position_correlation,
                       symplectic_form, flip_momenta)
from .thermo import (log_partition, partition_function, free_energy,
                     internal_energy, q2_from_partition, ground_state_energy,
                     ground_state_weight, partition_on_contour,
                     DensityOfStates, density_of_states)
from .imaginary_time import (CubicPotentialSpec, PotentialReport,
                             potential_report, PathGrid, influence_kernel,
                             ohmic_influence_kernel, ActionResult,
                             effective_action, fluctuation_eigenvalue,
                             crossover_temperature, crossover_temperature_ohmic)

__version__ = "0.1.0"

__all__ = [
    "ThermalParams", "MatsubaraSet", "coth_weight", "bose_occupation",
    "trigamma",
    "QBrownianError", "DomainError", "DivergentMomentError",
    "DivergentProductError", "SummationError", "CoverageError",
    "ContourError", "RouteMismatchError", "ExtrapolationError",
    "OhmicDamping", "DrudeDamping",
    "DissipativeResponse", "Admittance", "oscillator_response",
    "fdt_spectrum", "resistor", "series_rlc", "current_noise",
    "current_noise_parts", "charge_current_cross_spectrum",
    "johnson_nyquist_classical",
    "OscillatorSpec", "SecondMoments", "susceptibility", "spectral_density",
    "sqq_ohmic_closed_form", "sqq_ohmic_zero_t_parts", "sqq_quadrature",
    "position_variance", "second_moments", "reduced_density_matrix",
    "weak_coupling_correction",
    "BathSpec", "DiscreteBathDamping", "discretize_bath", "damping_kernel",
    "gamma_laplace", "noise_correlation", "noise_commutator",
    "NoiseStatistics", "noise_statistics",
    "QuadraticHamiltonian", "NormalModes", "GaussianState",
    "RelaxationResult", "build_hamiltonian", "normal_modes",
    "two_time_correlation", "equilibrium_system_moments",
    "equilibrium_covariance", "thermal_state", "propagator", "propagate",
    "propagate_trajectory", "correlation_from_propagator", "relaxation_run",
    "fluctuating_force_row", "noise_position_correlation", "symplectic_form",
    "flip_momenta",
    "log_partition", "partition_function", "free_energy", "internal_energy",
    "q2_from_partition", "ground_state_energy", "ground_state_weight",
    "partition_on_contour", "DensityOfStates", "density_of_states",
    "CubicPotentialSpec", "PotentialReport", "potential_report", "PathGrid",
    "influence_kernel", "ohmic_influence_kernel", "ActionResult",
    "effective_action", "fluctuation_eigenvalue", "crossover_temperature",
    "crossover_temperature_ohmic",
    "__version__",
]
