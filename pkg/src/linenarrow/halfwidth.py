"""Pressure-dependent Lorentz halfwidths with an optional saturation ceiling.

Three regimes for the collisional halfwidth of a line:

* ``linear`` — the conventional law, width proportional to broadener
  pressure with the usual (296/T)^n temperature scaling;
* ``saturating`` — the width stops growing once collisions are fast enough
  that rotational structure blurs; the ceiling is a fixed multiple of the
  mean rotational line spacing. The approach to the ceiling is a smooth
  tanh clamp by default, or a hard min() when ``hard_clamp`` is set;
* ``combined`` — the harmonic interpolation
  ``gamma_c * gamma_sat / (gamma_c + gamma_sat)``, halfway between the two
  at the crossover.

The pressure at which the linear width reaches the ceiling is the critical
pressure; above it the narrowed line-shape machinery (see the narrowing
module) becomes active.

Only one dominant broadener enters each width; a mixture generalizes
additively (sum the linear contribution per broadener) but no scenario here
needs it — the absorber partial pressure is Torr-scale against a broadener
at tens to hundreds of atm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .constants import C_LIGHT, T_REF
from .linelist import SpectralLine

HALFWIDTH_MODES = ("linear", "saturating", "combined")


class NoSaturationError(ValueError):
    """The linear width never reaches the ceiling (zero pressure slope)."""


@dataclass(frozen=True)
class HalfwidthModel:
    """Halfwidth regime and saturation parameters.

    Attributes:
        mode: one of "linear", "saturating", "combined".
        gamma0: zero-pressure width floor, cm-1.
        line_spacing: mean rotational line separation, cm-1. The saturation
            ceiling is ``saturation_multiplier * line_spacing``.
        saturation_multiplier: dimensionless factor on line_spacing
            (default 3.919).
        broadener_scale: informational default for a broadener block that
            carries no explicit scale; the width computation itself always
            reads the scale from the BroadenerSpec.
        hard_clamp: saturating mode uses min(gamma_c, gamma_sat) instead of
            the smooth tanh clamp.
        critical_pressure: explicit override, atm. When set, it wins over
            the derived value in critical_pressure().
        quasi_linear_range: informational (p_lo, p_hi) pressure interval in
            which the linear law is trusted; not used in any computation.
    """

    mode: str = "saturating"
    gamma0: float = 0.0
    line_spacing: float = 1.2
    saturation_multiplier: float = 3.919
    broadener_scale: Optional[float] = None
    hard_clamp: bool = False
    critical_pressure: Optional[float] = None
    quasi_linear_range: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.mode not in HALFWIDTH_MODES:
            raise ValueError(f"unknown halfwidth mode {self.mode!r}")
        if self.line_spacing <= 0.0:
            raise ValueError("line_spacing must be positive")
        if self.saturation_multiplier <= 0.0:
            raise ValueError("saturation_multiplier must be positive")
        if self.gamma0 < 0.0:
            raise ValueError("gamma0 must be non-negative")
        if self.broadener_scale is not None and not 0.0 < self.broadener_scale <= 2.0:
            raise ValueError("broadener_scale outside (0, 2]")


@dataclass(frozen=True)
class BroadenerSpec:
    """The perturbing gas: identity, width scale relative to N2, and amount.

    partial_density (amagat) is informational; the width laws consume
    partial_pressure (atm).
    """

    broadener_id: str = "He"
    scale_vs_n2: float = 1.0
    partial_pressure: float = 0.0
    partial_density: Optional[float] = None

    def __post_init__(self):
        if self.scale_vs_n2 <= 0.0:
            raise ValueError("scale_vs_n2 must be positive")
        if self.partial_pressure < 0.0:
            raise ValueError("partial_pressure must be non-negative")


def saturated_halfwidth(model: HalfwidthModel) -> float:
    """Saturation ceiling gamma_sat = multiplier * line_spacing, cm-1."""
    return model.saturation_multiplier * model.line_spacing


def conventional_halfwidth(
    line: SpectralLine,
    broadener: BroadenerSpec,
    temperature: float,
    model: HalfwidthModel,
) -> float:
    """Linear-in-pressure width: gamma0 + scale * gamma_ref * (296/T)^n * p."""
    if temperature <= 0.0:
        raise ValueError("temperature must be positive")
    t_factor = (T_REF / temperature) ** line.temp_exponent
    return (
        model.gamma0
        + broadener.scale_vs_n2
        * line.gamma_foreign_ref
        * t_factor
        * broadener.partial_pressure
    )


def effective_halfwidth(gamma_c: float, model: HalfwidthModel) -> float:
    """Width after applying the model's saturation regime to a linear width."""
    if gamma_c < 0.0:
        raise ValueError("gamma_c must be non-negative")
    if model.mode == "linear":
        return gamma_c
    gamma_sat = saturated_halfwidth(model)
    if model.mode == "saturating":
        if model.hard_clamp:
            return min(gamma_c, gamma_sat)
        return gamma_sat * math.tanh(gamma_c / gamma_sat)
    # combined: gamma_c*gamma_sat/(gamma_c+gamma_sat), arranged so the
    # equal-width case rounds to exactly gamma_c/2 in floating point.
    if gamma_c == 0.0:
        return 0.0
    return gamma_c / (1.0 + gamma_c / gamma_sat)


def critical_pressure(
    line: SpectralLine,
    broadener: BroadenerSpec,
    temperature: float,
    model: HalfwidthModel,
) -> float:
    """Pressure (atm) at which the linear width reaches the saturation ceiling.

    Honors an explicit model.critical_pressure override; otherwise solves
    gamma_c(p) = gamma_sat. A width floor at or above the ceiling means the
    line is saturated at any pressure (returns 0).
    """
    if model.critical_pressure is not None:
        return model.critical_pressure
    if temperature <= 0.0:
        raise ValueError("temperature must be positive")
    slope = (
        broadener.scale_vs_n2
        * line.gamma_foreign_ref
        * (T_REF / temperature) ** line.temp_exponent
    )
    if slope <= 0.0:
        raise NoSaturationError("linear width has zero pressure slope")
    return max(0.0, (saturated_halfwidth(model) - model.gamma0) / slope)


def relaxation_time(gamma: float) -> float:
    """Collisional relaxation time 1/(2 c gamma), seconds. Diagnostic only."""
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    return 1.0 / (2.0 * C_LIGHT * gamma)
