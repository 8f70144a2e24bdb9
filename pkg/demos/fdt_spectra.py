"""Fluctuation-dissipation at work: one response function, every temperature.

The symmetrized position noise of a damped oscillator is fixed entirely by
its susceptibility and the temperature,

    S_qq(w) = hbar * coth(hbar w / 2 kT) * Im chi(w),

so a single damping model generates the whole family of spectra: a
classical Lorentzian pair at high T, asymmetry-free zero-point wings at
T = 0.  The same theorem applied to a resistor gives Johnson-Nyquist
noise with its quantum crossover at hbar w ~ kT.

Writes fdt_spectra.png into the working directory.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from qbrownian.damping import DrudeDamping
from qbrownian.numerics import ThermalParams
from qbrownian.oscillator import OscillatorSpec, spectral_density
from qbrownian.response import current_noise, resistor

osc = OscillatorSpec(mass=1.0, omega0=1.0)
damp = DrudeDamping(0.5, 8.0)        # moderate friction, high cutoff

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.5, 4.2))

# --- oscillator spectra across temperatures -------------------------------
w = np.linspace(-4.0, 4.0, 1201)
for temp, color in [(0.0, "C0"), (0.5, "C1"), (2.0, "C2"), (10.0, "C3")]:
    s = spectral_density(osc, damp, ThermalParams(temperature=temp), w)
    label = "T = 0 (zero point)" if temp == 0.0 else f"T = {temp:g}"
    ax1.plot(w, s, color=color, label=label)
    print(f"T = {temp:5.1f}:  S(w0) = {spectral_density(osc, damp, ThermalParams(temperature=temp), 1.0):8.4f}"
          f"   S(0) = {spectral_density(osc, damp, ThermalParams(temperature=temp), 0.0):8.4f}")
ax1.set_xlabel(r"$\omega / \omega_0$")
ax1.set_ylabel(r"$S_{qq}(\omega)$  [$\hbar/M\omega_0^2$]")
ax1.set_title("damped oscillator, all temperatures from one $\\chi$")
ax1.legend(frameon=False, fontsize=9)

# --- Johnson-Nyquist crossover for a resistor -----------------------------
adm = resistor(1.0)
thermal = ThermalParams(temperature=1.0)
wr = np.logspace(-2, 2, 400)
s_ii = current_noise(adm, thermal, wr)
ax2.loglog(wr, s_ii, "C0", label=r"$\hbar\omega\,\coth(\hbar\omega/2kT)/R$")
ax2.loglog(wr, np.full_like(wr, 2.0), "k:", label=r"classical $2kT/R$")
ax2.loglog(wr, wr, "k--", label=r"zero point $\hbar\omega/R$")
ax2.set_xlabel(r"$\hbar\omega / k_BT$")
ax2.set_ylabel(r"$S_{II}(\omega) \cdot R$")
ax2.set_title("resistor noise: classical to quantum")
ax2.legend(frameon=False, fontsize=9)

fig.tight_layout()
fig.savefig("fdt_spectra.png", dpi=150)
print("wrote fdt_spectra.png")
