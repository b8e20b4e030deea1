"""Physical constants and unit conversions.

Spectroscopic CGS conventions throughout: wavenumbers in cm^-1, number
densities in molecules/cm^3, pressures in atm unless a function name says
otherwise.
"""

# Speed of light, cm/s.
C_LIGHT = 2.99792458e10

# Second radiation constant hc/k_B, cm*K.
C2_RADIATION = 1.4387769

# Reference temperature of line-list quantities, K.
T_REF = 296.0

# Loschmidt constant: molecules per cm^3 at 1 amagat.
AMAGAT = 2.6867811e19

# Boltzmann constant, J/K.
K_BOLTZMANN = 1.380649e-23

# 1 atm in Pa and in Torr.
ATM_PA = 101325.0
TORR_PER_ATM = 760.0


def torr_to_atm(pressure_torr: float) -> float:
    return pressure_torr / TORR_PER_ATM


def amagat_to_number_density(density_amagat: float) -> float:
    """Amagat -> molecules/cm^3 (temperature-independent by definition)."""
    return density_amagat * AMAGAT


def amagat_to_atm(density_amagat: float, temperature: float) -> float:
    """Ideal-gas pressure (atm) of a gas at `density_amagat` and `temperature` (K)."""
    n_m3 = density_amagat * AMAGAT * 1e6
    return n_m3 * K_BOLTZMANN * temperature / ATM_PA


def pressure_to_number_density(pressure_atm: float, temperature: float) -> float:
    """Ideal-gas number density (molecules/cm^3) at `pressure_atm` and `temperature` (K)."""
    return pressure_atm * ATM_PA / (K_BOLTZMANN * temperature) / 1e6
