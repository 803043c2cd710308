"""Physical constants and the package-wide units convention.

Convention used everywhere: energies, frequencies, and damping rates are
angular and expressed in Grad/s (1e9 rad/s, with hbar = 1 so energy and
angular frequency coincide). Time is in ns, so omega * t is in radians.
Lengths, masses, capacitances, and temperatures stay in SI units.

A config value labelled "GHz" therefore means Grad/s, and a rate labelled
"kHz" means 1e3 rad/s = 1e-6 Grad/s.
"""

import scipy.constants as _const

E_CHARGE = _const.e          # elementary charge, C
HBAR = _const.hbar           # reduced Planck constant, J s
K_B = _const.k               # Boltzmann constant, J/K

# von Klitzing resistance 2*pi*hbar/e^2, ohms
R_K = _const.h / _const.e**2

GRAD = 1e9                   # rad/s per Grad/s

# k_B / hbar in Grad/s per kelvin; 0.13092 Grad/s per mK
KB_OVER_HBAR_GRAD = K_B / HBAR / GRAD


def joules_to_grad(energy_j):
    """Convert an energy in joules to angular Grad/s."""
    return energy_j / (HBAR * GRAD)


def charging_energy_from_capacitance(c_total_farad):
    """e^2 / (2 C) expressed in Grad/s."""
    return joules_to_grad(E_CHARGE**2 / (2.0 * c_total_farad))


def capacitance_from_charging_energy(e_c_grad):
    """Total capacitance in farads giving charging energy ``e_c_grad``."""
    return E_CHARGE**2 / (2.0 * e_c_grad * HBAR * GRAD)
