"""Single-line profile pieces: Lorentz shape, population scaling, wing hook.

The absorption sum multiplies, per line, a population factor (number density
times Boltzmann/stimulated-emission temperature scaling), the Lorentz shape
carrying the line intensity, an optional wing-damping hook, and the
narrowing factor. This module owns the first three; all are pure functions
and numpy-broadcastable in the wavenumber argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .constants import C2_RADIATION, T_REF
from .linelist import SpectralLine


def lorentz(omega, line_center: float, gamma: float, intensity: float):
    """Lorentz profile S * (gamma/pi) / ((omega - line_center)^2 + gamma^2).

    Integrates to `intensity` over the full axis; peak value
    intensity/(pi*gamma). `omega` may be a scalar or ndarray.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if intensity < 0.0:
        raise ValueError("intensity must be non-negative")
    d = omega - line_center
    return intensity * (gamma / math.pi) / (d * d + gamma * gamma)


def population_factor(line: SpectralLine, temperature: float, number_density: float) -> float:
    """Absorber column scaling: density times temperature rescaling from 296 K.

    Combines the Boltzmann factor of the lower state, the stimulated-emission
    correction at the transition wavenumber, and a linear-rotor partition
    ratio Q(296)/Q(T) = 296/T. Identically `number_density` at 296 K.
    """
    if temperature <= 0.0:
        raise ValueError("temperature must be positive")
    c2 = C2_RADIATION
    boltzmann = math.exp(-c2 * line.lower_state_energy / temperature) / math.exp(
        -c2 * line.lower_state_energy / T_REF
    )
    stimulated = (1.0 - math.exp(-c2 * line.position / temperature)) / (
        1.0 - math.exp(-c2 * line.position / T_REF)
    )
    return number_density * boltzmann * stimulated * (T_REF / temperature)


def wing_factor_fermi(omega, line_center: float, temperature: float,
                      slope_steps: float = 5.0, width_scale: float = 1.0):
    """Optional stand-in for an exponential wing-damping factor.

    A symmetric logistic step: 1/(1 + exp((|omega - line_center| -
    slope_steps*width_scale)/width_scale)); 1 at line center, 1/2 at
    slope_steps half-widths out. `temperature` is accepted for hook-signature
    compatibility and unused — the stand-in is temperature-independent.
    OFF by default everywhere; enable via ProfileHooks.
    """
    if slope_steps <= 0.0 or width_scale <= 0.0:
        raise ValueError("slope_steps and width_scale must be positive")
    detuning = np.abs(omega - line_center)
    return 1.0 / (1.0 + np.exp((detuning - slope_steps * width_scale) / width_scale))


@dataclass(frozen=True)
class ProfileHooks:
    """Pluggable wing factor. wing_factor=None means hooks off (identity).

    A hook is called as wing_factor(omega, line_center, temperature,
    slope_steps) with omega an ndarray; bind any extra parameters (e.g.
    width_scale of wing_factor_fermi) with functools.partial.
    """

    wing_factor: Optional[Callable] = None
    slope_steps: float = 5.0

    @property
    def active(self) -> bool:
        return self.wing_factor is not None
