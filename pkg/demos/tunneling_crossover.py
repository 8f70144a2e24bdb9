# Where thermal activation ends and quantum tunneling begins -- and how
# friction moves the border.
#
# For a metastable cubic well the constant path over the barrier top
# dominates decay at high temperature.  Cooling stretches the
# imaginary-time period hbar*beta until the first periodic fluctuation
# mode about the barrier softens (Lambda_1 = 0): below that T0 the
# bounce takes over and decay is tunneling.  Friction enters only
# through nu_1 gammahat(nu_1) >= 0, so it always lowers T0 -- a damped
# system stays "classical" to lower temperatures.

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from qbrownian.damping import DrudeDamping, OhmicDamping
from qbrownian.imaginary_time import (
    CubicPotentialSpec,
    PathGrid,
    crossover_temperature,
    crossover_temperature_ohmic,
    effective_action,
    fluctuation_eigenvalue,
)
from qbrownian.numerics import ThermalParams

pot = CubicPotentialSpec(mass=1.0, omega0=1.0, q0=3.0)
print(f"cubic well: barrier at q = {pot.barrier_position:g}, "
      f"height {pot.barrier_height:g} hbar*omega0")

fig, axes = plt.subplots(1, 3, figsize=(13.0, 4.0))

# --- the potential itself --------------------------------------------------
q = np.linspace(-1.0, 4.2, 300)
axes[0].plot(q, pot.potential(q), "C0")
axes[0].axvline(pot.barrier_position, color="0.8", lw=0.8)
axes[0].axhline(pot.barrier_height, color="0.8", lw=0.8)
axes[0].set_xlabel("q")
axes[0].set_ylabel("V(q)")
axes[0].set_title("metastable cubic potential")

# --- the soft mode ---------------------------------------------------------
temps = np.linspace(0.05, 0.4, 200)
for gamma, color in [(0.0, "C0"), (1.0, "C1"), (3.0, "C2")]:
    damp = OhmicDamping(gamma)
    lam = [fluctuation_eigenvalue(pot, damp,
                                  ThermalParams(temperature=t), 1)
           for t in temps]
    t0 = crossover_temperature_ohmic(pot, gamma)
    axes[1].plot(temps, lam, color=color,
                 label=f"gamma = {gamma:g}, T0 = {t0:.3f}")
    axes[1].axvline(t0, color=color, ls=":", lw=0.8)
axes[1].axhline(0.0, color="k", lw=0.6)
axes[1].set_xlabel(r"$k_BT/\hbar\omega_0$")
axes[1].set_ylabel(r"$\Lambda_1 / \omega_0^2$")
axes[1].set_title("first barrier mode softens at $T_0$")
axes[1].legend(frameon=False, fontsize=8)

# --- friction pushes T0 down ------------------------------------------------
gammas = np.linspace(0.0, 4.0, 60)
axes[2].plot(gammas, [crossover_temperature_ohmic(pot, g) for g in gammas],
             "C0", label="ohmic, closed form")
for omega_d, ls in [(8.0, "--"), (2.0, ":")]:
    axes[2].plot(gammas[1:],
                 [crossover_temperature(pot, DrudeDamping(g, omega_d))
                  for g in gammas[1:]],
                 "C1" + ls, label=f"Drude, omega_d = {omega_d:g}")
axes[2].set_xlabel(r"$\gamma/\omega_0$")
axes[2].set_ylabel(r"$k_BT_0/\hbar\omega_0$")
axes[2].set_title("crossover temperature vs friction")
axes[2].legend(frameon=False, fontsize=8)

# --- and the machinery underneath: one path, two routes to its action ------
thermal = ThermalParams(temperature=0.5)
beta_h = 2.0
nu1 = 2.0 * np.pi / beta_h
path = PathGrid.from_callable(beta_h, 64,
                              lambda tau: 0.8 * np.cos(nu1 * tau))
res = effective_action(path, DrudeDamping(1.0, 8.0), thermal)
pred = beta_h * nu1 * (1.0 * 8.0 / (8.0 + nu1)) * 0.8 ** 2 / 4.0
print(f"single-mode dissipative action: Fourier {res.action:.9f}, "
      f"double quadrature {res.quadrature:.9f}, "
      f"closed form {pred:.9f}")

fig.tight_layout()
fig.savefig("tunneling_crossover.png", dpi=150)
print("wrote tunneling_crossover.png")
