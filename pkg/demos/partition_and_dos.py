"""Thermodynamics of the damped oscillator, and what friction does to its
spectrum.

Friction leaves the partition function well defined (the Matsubara
product converges for any finite cutoff) but reshapes everything derived
from it: the ground state energy rises, low-temperature heat capacity
turns algebraic, and the sharp oscillator lines acquire widths.  The
density of states here is recovered numerically from Z(beta) on a
Bromwich contour -- no spectral information goes in by hand.

Writes partition_and_dos.png into the working directory.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from qbrownian.damping import DrudeDamping, OhmicDamping
from qbrownian.numerics import ThermalParams
from qbrownian.oscillator import OscillatorSpec
from qbrownian.thermo import (
    density_of_states,
    free_energy,
    ground_state_energy,
    internal_energy,
)

osc = OscillatorSpec(mass=1.0, omega0=1.0)
models = [("undamped", OhmicDamping(0.0), "C0"),
          ("gamma = 0.5", DrudeDamping(0.5, 8.0), "C1"),
          ("gamma = 2.0", DrudeDamping(2.0, 8.0), "C2")]

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.5, 4.2))

# --- energies over a temperature sweep ------------------------------------
temps = np.linspace(0.02, 3.0, 120)
for label, damp, color in models:
    u = [internal_energy(osc, damp, ThermalParams(temperature=t))
         for t in temps]
    f = [free_energy(osc, damp, ThermalParams(temperature=t))
         for t in temps]
    e0 = ground_state_energy(osc, damp)
    ax1.plot(temps, u, color=color, label=f"U, {label}")
    ax1.plot(temps, f, color=color, ls="--", lw=1)
    ax1.axhline(e0, color=color, ls=":", lw=0.8)
    print(f"{label:12s}  E0 = {e0:.6f}   U(T=0.1) - E0 = "
          f"{internal_energy(osc, damp, ThermalParams(temperature=0.1)) - e0:.5f}")
ax1.set_xlabel(r"$k_BT / \hbar\omega_0$")
ax1.set_ylabel(r"energy  [$\hbar\omega_0$]")
ax1.set_title("internal (solid) and free (dashed) energy")
ax1.legend(frameon=False, fontsize=9)

# --- density of states from the partition function ------------------------
damp = DrudeDamping(0.1, 8.0)
dos = density_of_states(osc, damp, e_max=10.0, n_energy=801)
ax2.plot(dos.energies, dos.rho, "C0")
ax2.axhline(dos.plateau, color="k", ls=":", lw=0.8, label="plateau $1/\\hbar\\omega_0$")
for n in range(6):
    ax2.axvline(dos.ground_energy + n, color="0.8", lw=0.6, zorder=0)
ax2.set_xlabel(r"$E$  [$\hbar\omega_0$]")
ax2.set_ylabel(r"$\rho(E)$ (continuum part)  [$1/\hbar\omega_0$]")
ax2.set_title("density of states, gamma = 0.1")
ax2.legend(frameon=False, fontsize=9)
print(f"gamma = 0.1:  ground energy {dos.ground_energy:.6f} "
      f"(undamped 0.5), ground weight {dos.ground_weight:.6f}")
print(f"mean rho over the top plateau: "
      f"{np.mean(dos.rho[dos.energies >= dos.ground_energy + 8.0]):.4f} "
      f"(expected {dos.plateau:g})")

fig.tight_layout()
fig.savefig("partition_and_dos.png", dpi=150)
print("wrote partition_and_dos.png")
