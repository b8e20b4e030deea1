"""Line-by-line molecular absorption with pressure-saturated line narrowing.

The package models what happens to rotational line shapes when the broadening
halfwidth stops growing linearly with perturber pressure: above a critical
pressure the width saturates near the rotational line spacing, cores sharpen
(up to 4x the saturated-Lorentzian peak) and far wings fall below the
conventional profile. Three spectra come out of every run — the conventional
Lorentzian reference, the narrowed variant, and a nonlinear-path effective
absorption — so the regimes can be compared point by point.
"""

from .constants import (
    AMAGAT,
    C2_RADIATION,
    C_LIGHT,
    T_REF,
    amagat_to_atm,
    amagat_to_number_density,
    pressure_to_number_density,
    torr_to_atm,
)
from .engine import (
    DEFAULT_CUTOFF,
    GasConditions,
    NarrowingInterval,
    ResidualReport,
    SpectralGrid,
    Spectrum,
    absorption_spectrum,
    compare_to_reference,
    effective_absorption,
    gamma_factor_profile,
)
from .halfwidth import (
    HALFWIDTH_MODES,
    BroadenerSpec,
    HalfwidthModel,
    NoSaturationError,
    conventional_halfwidth,
    critical_pressure,
    effective_halfwidth,
    relaxation_time,
    saturated_halfwidth,
)
from .linelist import (
    BranchTag,
    LineTable,
    ParseDiagnostic,
    Severity,
    SpectralLine,
    format_record,
    parse_csv_line,
    parse_linelist,
    parse_record,
    serialize_record,
)
from .narrowing import (
    DegenerateWingError,
    NarrowingParams,
    Regime,
    narrowing_exponent,
    narrowing_factor,
    wing_exponent,
)
from .profile import (
    ProfileHooks,
    lorentz,
    population_factor,
    wing_factor_fermi,
)
from .scenario import (
    CombRecipe,
    Scenario,
    ScenarioError,
    builtin_scenarios,
    generate_comb,
    get_scenario,
    load_scenario,
    save_scenario,
    with_broadener_pressure,
)

__version__ = "0.1.0"

__all__ = [
    "AMAGAT",
    "C2_RADIATION",
    "C_LIGHT",
    "T_REF",
    "amagat_to_atm",
    "amagat_to_number_density",
    "pressure_to_number_density",
    "torr_to_atm",
    "DEFAULT_CUTOFF",
    "GasConditions",
    "NarrowingInterval",
    "ResidualReport",
    "SpectralGrid",
    "Spectrum",
    "absorption_spectrum",
    "compare_to_reference",
    "effective_absorption",
    "gamma_factor_profile",
    "HALFWIDTH_MODES",
    "BroadenerSpec",
    "HalfwidthModel",
    "NoSaturationError",
    "conventional_halfwidth",
    "critical_pressure",
    "effective_halfwidth",
    "relaxation_time",
    "saturated_halfwidth",
    "BranchTag",
    "LineTable",
    "ParseDiagnostic",
    "Severity",
    "SpectralLine",
    "format_record",
    "parse_csv_line",
    "parse_linelist",
    "parse_record",
    "serialize_record",
    "DegenerateWingError",
    "NarrowingParams",
    "Regime",
    "narrowing_exponent",
    "narrowing_factor",
    "wing_exponent",
    "ProfileHooks",
    "lorentz",
    "population_factor",
    "wing_factor_fermi",
    "CombRecipe",
    "Scenario",
    "ScenarioError",
    "builtin_scenarios",
    "generate_comb",
    "get_scenario",
    "load_scenario",
    "save_scenario",
    "with_broadener_pressure",
    "__version__",
]
