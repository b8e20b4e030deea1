"""Piecewise narrowing factor applied to the Lorentz profile above saturation.

At pressures beyond the critical value the collisional width is pinned at
gamma_sat, and observed band shapes deviate from the plain Lorentzian in a
characteristic way: extra absorption near line centers, depleted far wings.
This module implements that redistribution as a multiplicative factor

    factor(detuning) = base ** x(detuning)

with a piecewise-linear exponent x over four detuning regions delimited by
``core_mult * gamma``, ``neutral_mult * gamma`` and ``wing_mult * gamma``:

    x = min_exponent                                   detuning <= core
    x = min_exponent * (neutral - d)/(neutral - core)  core < d <= neutral
    x = max_exponent * (d - neutral)/(wing - neutral)  neutral < d < wing
    x = max_exponent                                   d >= wing

With the defaults (base 1/4, min_exponent -1) the factor is 4 in the core,
exactly 1 at the neutral radius, and decays to the wing floor. The wing
exponent is chosen so the far-wing level equals ``wing_floor`` times the
ratio of the conventional (linear-in-pressure) width to the saturated one:

    max_exponent = ln(wing_floor * gamma / gamma_sat) / ln(base)

so the suppressed wing keeps tracking the conventional width while the core
is evaluated at the saturated width. Below the critical pressure no
parametrization is attempted and the factor is identically 1; the regime
switch is explicit so a moderate-pressure model can slot in later.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class Regime(str, Enum):
    ABOVE_PS = "above_ps"
    BELOW_PS = "below_ps"


class DegenerateWingError(ValueError):
    """wing_floor * gamma / gamma_sat >= 1: the wing would not decay."""


@dataclass(frozen=True)
class NarrowingParams:
    """Region bounds (as multiples of the halfwidth) and exponent limits.

    Attributes:
        core_mult: end of the enhanced core region.
        neutral_mult: radius where the factor crosses exactly 1.
        wing_mult: start of the fully suppressed far wing.
        min_exponent: exponent in the core (negative; -1 gives a 4x core
            with the default base 1/4).
        base: base of the exponential factor, in (0, 1).
        wing_floor: far-wing suppression level when the conventional and
            saturated widths coincide.
    """

    core_mult: float = 0.72
    neutral_mult: float = 1.2
    wing_mult: float = 3.92
    min_exponent: float = -1.0
    base: float = 0.25
    wing_floor: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.core_mult < self.neutral_mult < self.wing_mult:
            raise ValueError(
                "region bounds must satisfy 0 < core_mult < neutral_mult < wing_mult"
            )
        if not 0.0 < self.base < 1.0:
            raise ValueError("base must lie in (0, 1)")
        if not 0.0 < self.wing_floor < 1.0:
            raise ValueError("wing_floor must lie in (0, 1)")
        if self.min_exponent >= 0.0:
            raise ValueError("min_exponent must be negative")


def wing_exponent(gamma: float, gamma_sat: float, params: NarrowingParams) -> float:
    """Far-wing exponent ln(wing_floor * gamma/gamma_sat) / ln(base).

    gamma is the conventional (linear-in-pressure) halfwidth; gamma_sat the
    saturation ceiling. Raises DegenerateWingError when the implied wing
    level reaches 1, i.e. the factor would not decay — that only happens for
    misconfigured inputs (conventional width >= gamma_sat/wing_floor).
    """
    if gamma <= 0.0 or gamma_sat <= 0.0:
        raise ValueError("widths must be positive")
    ratio = params.wing_floor * gamma / gamma_sat
    if ratio >= 1.0:
        raise DegenerateWingError(
            f"wing level {ratio:g} >= 1 (gamma={gamma:g}, gamma_sat={gamma_sat:g})"
        )
    return math.log(ratio) / math.log(params.base)


def narrowing_exponent(
    detuning: float, gamma: float, max_exponent: float, params: NarrowingParams
) -> float:
    """Piecewise exponent x(detuning) for boundary width gamma.

    Continuous in detuning, exactly 0 at the neutral radius
    ``neutral_mult * gamma``.
    """
    if detuning < 0.0:
        raise ValueError("detuning must be non-negative")
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    core = params.core_mult * gamma
    neutral = params.neutral_mult * gamma
    wing = params.wing_mult * gamma
    if detuning <= core:
        return params.min_exponent
    if detuning >= wing:
        return max_exponent
    if detuning > neutral:
        return max_exponent * (detuning - neutral) / ((params.wing_mult - params.neutral_mult) * gamma)
    return params.min_exponent * (neutral - detuning) / ((params.neutral_mult - params.core_mult) * gamma)


def narrowing_factor(
    omega: float,
    line_center: float,
    gamma: float,
    gamma_sat: float,
    params: NarrowingParams,
    regime: Regime = Regime.ABOVE_PS,
) -> float:
    """Multiplicative line-shape factor at wavenumber omega.

    Args:
        omega, line_center: evaluation point and line position, cm-1.
        gamma: conventional (linear-in-pressure) halfwidth — sets the wing
            level through the wing exponent.
        gamma_sat: saturated halfwidth — sets the region boundaries, per the
            above-critical regime where the profile width is pinned there.
        params: region bounds and exponent limits.
        regime: BELOW_PS returns 1.0 (no parametrization below critical).

    The core and far-wing branches return base**exponent directly, so the
    documented extremes (4 and wing_floor * gamma/gamma_sat with defaults)
    are exact; the two interpolation branches use exp(x * ln base).
    """
    if Regime(regime) is Regime.BELOW_PS:
        return 1.0
    max_exponent = wing_exponent(gamma, gamma_sat, params)
    detuning = abs(omega - line_center)
    if detuning <= params.core_mult * gamma_sat:
        return params.base ** params.min_exponent
    if detuning >= params.wing_mult * gamma_sat:
        return params.base ** max_exponent
    x = narrowing_exponent(detuning, gamma_sat, max_exponent, params)
    return math.exp(x * math.log(params.base))
