"""Declarative experiment configurations and their file formats.

A Scenario bundles everything one absorption run needs: spectral window and
grid, gas conditions, halfwidth model, per-interval narrowing parameters,
and a line-list source (a file path, a synthetic comb recipe, or none —
meaning the caller supplies the path at run time). Builtin scenarios cover
the published CO2–He comparisons (nu3 band at ~135.6/658 atm equivalent
densities, nu2 Q-branch at 49.6 and 9.85 atm, 3nu3 at ~131.8/645 atm) plus
a synthetic comb used by the property tests and CI.

Two on-disk spellings are supported and round-trip exactly:

* JSON — one object mirroring Scenario.to_dict() (see below);
* INI — sections [scenario], [window], [grid], [conditions], [broadener],
  [halfwidth], [narrowing.<k>] (one per interval), [linelist]; keys match
  the JSON field names one-to-one; floats are written with full round-trip
  precision.

JSON schema sketch::

    {
      "name": str, "description": str, "cutoff": float,
      "spectral_window": [lo, hi],
      "grid": {"start": f, "stop": f, "step": f},
      "conditions": {
        "temperature": f, "path_length": f,
        "absorber_density": f | null, "absorber_pressure": f | null,
        "nonlinear_coefficient": f,
        "broadener": {"broadener_id": s, "scale_vs_n2": f,
                       "partial_pressure": f, "partial_density": f | null}
      },
      "halfwidth": {"mode": s, "gamma0": f, "line_spacing": f,
                     "saturation_multiplier": f, "broadener_scale": f | null,
                     "hard_clamp": bool, "critical_pressure": f | null,
                     "quasi_linear_range": [f, f] | null},
      "narrowing_map": [{"lo": f, "hi": f, "broadener_scale": f | null,
                          "params": {"core_mult": f, "neutral_mult": f,
                                      "wing_mult": f, "min_exponent": f,
                                      "base": f, "wing_floor": f}}],
      "linelist": null | {"path": str} | {"comb": {"center": f, "count": i,
          "spacing": f, "intensity_profile": s, "intensity": f,
          "gamma_foreign_ref": f, "gamma_self_ref": f,
          "lower_state_energy": f, "temp_exponent": f}}
    }
"""

from __future__ import annotations

import configparser
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from .constants import amagat_to_atm, torr_to_atm
from .engine import GasConditions, NarrowingInterval, SpectralGrid
from .halfwidth import BroadenerSpec, HalfwidthModel
from .linelist import BranchTag, LineTable, SpectralLine
from .narrowing import NarrowingParams

INTENSITY_PROFILES = ("flat", "gaussian-envelope")

# Mean rotational line spacing for the nu2 Q-branch, cm-1: never published
# directly; derived from the quoted critical pressure 37.2 atm of the
# 0.35-scaled fit, line_spacing = p_s * scale * gamma_ref / multiplier.
Q_BRANCH_LINE_SPACING = 37.2 * 0.35 * 0.07 / 3.919

# 3nu3 band origin, cm-1: splits the P-branch interval from the R-branch
# (with its head) interval.
THREE_NU3_ORIGIN = 6972.6


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class CombRecipe:
    """Synthetic evenly spaced comb of identical (or enveloped) lines."""

    center: float
    count: int
    spacing: float
    intensity_profile: str = "flat"
    intensity: float = 3e-19
    gamma_foreign_ref: float = 0.07
    gamma_self_ref: float = 0.09
    lower_state_energy: float = 0.0
    temp_exponent: float = 0.75

    def __post_init__(self):
        if self.count < 1:
            raise ScenarioError("comb count must be at least 1")
        if self.spacing <= 0.0:
            raise ScenarioError("comb spacing must be positive")
        if self.intensity_profile not in INTENSITY_PROFILES:
            raise ScenarioError(
                f"intensity_profile must be one of {INTENSITY_PROFILES}"
            )


def generate_comb(recipe: CombRecipe) -> LineTable:
    """Materialize a comb recipe as a sorted LineTable."""
    offsets = (np.arange(recipe.count) - (recipe.count - 1) / 2.0) * recipe.spacing
    positions = recipe.center + offsets
    if recipe.intensity_profile == "flat":
        intensities = np.full(recipe.count, recipe.intensity)
    else:
        sigma = recipe.count * recipe.spacing / 6.0
        intensities = recipe.intensity * np.exp(-0.5 * (offsets / sigma) ** 2)
    lines = tuple(
        SpectralLine(
            molecule_id=2,
            isotopologue_id=1,
            position=float(p),
            intensity_ref=float(s),
            gamma_foreign_ref=recipe.gamma_foreign_ref,
            gamma_self_ref=recipe.gamma_self_ref,
            lower_state_energy=recipe.lower_state_energy,
            temp_exponent=recipe.temp_exponent,
            branch_tag=BranchTag.UNKNOWN,
        )
        for p, s in zip(positions, intensities)
    )
    descriptor = (
        f"comb(center={recipe.center:g}, count={recipe.count}, "
        f"spacing={recipe.spacing:g}, profile={recipe.intensity_profile})"
    )
    return LineTable(lines=lines, source_descriptor=descriptor)


@dataclass(frozen=True)
class Scenario:
    """One fully parameterized absorption run."""

    name: str
    spectral_window: Tuple[float, float]
    grid: SpectralGrid
    conditions: GasConditions
    halfwidth: HalfwidthModel
    narrowing_map: Tuple[NarrowingInterval, ...]
    linelist_source: Union[str, CombRecipe, None] = None
    cutoff: float = 600.0
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "narrowing_map", tuple(self.narrowing_map))
        self.validate()

    def validate(self):
        lo, hi = self.spectral_window
        if not lo < hi:
            raise ScenarioError("spectral_window lower bound must lie below upper")
        if self.cutoff <= 0.0:
            raise ScenarioError("cutoff must be positive")
        if not self.narrowing_map:
            raise ScenarioError("narrowing_map must contain at least one interval")
        ivs = sorted(self.narrowing_map, key=lambda iv: iv.lo)
        for prev, cur in zip(ivs, ivs[1:]):
            if cur.lo < prev.hi:
                raise ScenarioError("narrowing_map intervals overlap")
            if cur.lo > prev.hi:
                raise ScenarioError("narrowing_map leaves a gap inside the window")
        if ivs[0].lo > lo or ivs[-1].hi < hi:
            raise ScenarioError("narrowing_map does not cover the spectral window")

    def line_table(self, override_path: Optional[str] = None) -> LineTable:
        """Resolve the scenario's line list (override wins over the recipe/path)."""
        from .linelist import parse_linelist  # local import to avoid cycle noise

        source = override_path if override_path is not None else self.linelist_source
        if source is None:
            raise ScenarioError(
                f"scenario {self.name!r} has no line-list source; supply a path"
            )
        if isinstance(source, CombRecipe):
            return generate_comb(source)
        lo, hi = self.spectral_window
        return parse_linelist(source, window=(lo - self.cutoff, hi + self.cutoff))


def with_broadener_pressure(scenario: Scenario, pressure_atm: float) -> Scenario:
    """Copy of a scenario at a different broadener partial pressure."""
    if pressure_atm <= 0.0:
        raise ScenarioError("pressure must be positive")
    broadener = replace(
        scenario.conditions.broadener,
        partial_pressure=pressure_atm,
        partial_density=None,
    )
    conditions = replace(scenario.conditions, broadener=broadener)
    return replace(scenario, conditions=conditions)


# ---------------------------------------------------------------------------
# Builtins

_NU3_PARAMS = NarrowingParams(core_mult=0.72, neutral_mult=1.2, wing_mult=3.92)
_Q_PARAMS = NarrowingParams(core_mult=0.6, neutral_mult=1.2, wing_mult=8.0)
_3NU3_P_PARAMS = NarrowingParams(core_mult=0.72, neutral_mult=1.6, wing_mult=8.0)
_3NU3_R_PARAMS = NarrowingParams(core_mult=0.72, neutral_mult=1.2, wing_mult=8.0)


def _nu3_scenario(name, description, n_absorber_am, n_broadener_am, temperature):
    window = (2200.0, 2500.0)
    return Scenario(
        name=name,
        description=description,
        spectral_window=window,
        grid=SpectralGrid(window[0], window[1], 0.05),
        conditions=GasConditions(
            temperature=temperature,
            absorber_density=n_absorber_am,
            broadener=BroadenerSpec(
                broadener_id="He",
                scale_vs_n2=0.52,
                partial_pressure=amagat_to_atm(n_broadener_am, temperature),
                partial_density=n_broadener_am,
            ),
        ),
        halfwidth=HalfwidthModel(mode="saturating", line_spacing=1.2, broadener_scale=0.52),
        narrowing_map=(NarrowingInterval(window[0], window[1], _NU3_PARAMS),),
    )


def _q_branch_scenario(name, description, p_absorber_torr, p_broadener_atm, scale):
    window = (620.0, 700.0)
    return Scenario(
        name=name,
        description=description,
        spectral_window=window,
        grid=SpectralGrid(window[0], window[1], 0.02),
        conditions=GasConditions(
            temperature=296.0,
            absorber_pressure=torr_to_atm(p_absorber_torr),
            broadener=BroadenerSpec(
                broadener_id="He", scale_vs_n2=scale, partial_pressure=p_broadener_atm
            ),
            path_length=3.85,
        ),
        halfwidth=HalfwidthModel(
            mode="saturating", line_spacing=Q_BRANCH_LINE_SPACING, broadener_scale=scale
        ),
        narrowing_map=(NarrowingInterval(window[0], window[1], _Q_PARAMS),),
    )


def _3nu3_scenario(name, description, n_absorber_am, n_broadener_am):
    window = (6800.0, 7100.0)
    temperature = 297.0
    return Scenario(
        name=name,
        description=description,
        spectral_window=window,
        grid=SpectralGrid(window[0], window[1], 0.05),
        conditions=GasConditions(
            temperature=temperature,
            absorber_density=n_absorber_am,
            broadener=BroadenerSpec(
                broadener_id="He",
                scale_vs_n2=0.52,
                partial_pressure=amagat_to_atm(n_broadener_am, temperature),
                partial_density=n_broadener_am,
            ),
        ),
        halfwidth=HalfwidthModel(mode="saturating", line_spacing=1.2, broadener_scale=0.52),
        narrowing_map=(
            NarrowingInterval(window[0], THREE_NU3_ORIGIN, _3NU3_P_PARAMS),
            # R-branch (with the band head): lines saturate ~2.6x earlier.
            NarrowingInterval(THREE_NU3_ORIGIN, window[1], _3NU3_R_PARAMS, broadener_scale=0.2),
        ),
    )


def comb_demo_scenario() -> Scenario:
    window = (2280.0, 2420.0)
    return Scenario(
        name="comb_demo",
        description=(
            "Synthetic 41-line flat comb at 1.2 cm-1 spacing about 2349 cm-1, "
            "He-broadened well above the critical pressure; drives the "
            "morphology and determinism checks without external data."
        ),
        spectral_window=window,
        grid=SpectralGrid(window[0], window[1], 0.02),
        conditions=GasConditions(
            temperature=296.0,
            absorber_density=1.63e-5,
            broadener=BroadenerSpec(
                broadener_id="He", scale_vs_n2=0.52, partial_pressure=271.6
            ),
        ),
        halfwidth=HalfwidthModel(mode="saturating", line_spacing=1.2, broadener_scale=0.52),
        narrowing_map=(NarrowingInterval(window[0], window[1], _NU3_PARAMS),),
        linelist_source=CombRecipe(center=2349.0, count=41, spacing=1.2),
    )


def builtin_scenarios() -> list:
    """All shipped scenarios, fully parameterized."""
    return [
        _nu3_scenario(
            "nu3_135atm",
            "CO2 nu3 band in He near the critical pressure: n_CO2=1.63e-5 Am, "
            "n_He=124.3 Am (quoted as 135.8 atm) at 298 K.",
            1.63e-5,
            124.3,
            298.0,
        ),
        _nu3_scenario(
            "nu3_657atm",
            "CO2 nu3 band in He far above the critical pressure: "
            "n_CO2=2.73e-5 Am, n_He=603.4 Am (quoted as 657.1 atm) at 298 K.",
            2.73e-5,
            603.4,
            298.0,
        ),
        _q_branch_scenario(
            "nu2Q_49atm",
            "CO2 nu2 Q-branch: 4.2 Torr CO2 in 49.6 atm He at 296 K over "
            "3.85 cm, width scale 0.52 vs N2.",
            4.2,
            49.6,
            0.52,
        ),
        _q_branch_scenario(
            "nu2Q_49atm_fit035",
            "Variant of nu2Q_49atm with the fitted width scale 0.35 vs N2 "
            "(the value behind the 37.2 atm critical-pressure prediction).",
            4.2,
            49.6,
            0.35,
        ),
        _q_branch_scenario(
            "nu2Q_9.85atm",
            "CO2 nu2 Q-branch at low broadening: 1.0 Torr CO2 in 9.85 atm He "
            "at 296 K over 3.85 cm, width scale 0.52 vs N2.",
            1.0,
            9.85,
            0.52,
        ),
        _q_branch_scenario(
            "nu2Q_9.85atm_x064",
            "Variant of nu2Q_9.85atm with width scale 0.64 vs N2 (the value "
            "reported to double the Q-branch absorption); unreconciled "
            "alternative to 0.52.",
            1.0,
            9.85,
            0.64,
        ),
        _3nu3_scenario(
            "3nu3_131atm",
            "CO2 3nu3 band: n_CO2=4.62 Am, n_He=121.2 Am (quoted as "
            "131.86 atm) at 297 K; P-branch scale 0.52, R-branch (head) 0.2.",
            4.62,
            121.2,
        ),
        _3nu3_scenario(
            "3nu3_645atm",
            "CO2 3nu3 band: n_CO2=4.66 Am, n_He=598.7 Am (quoted as "
            "645.41 atm) at 297 K; P-branch scale 0.52, R-branch (head) 0.2.",
            4.66,
            598.7,
        ),
        comb_demo_scenario(),
    ]


def get_scenario(name: str) -> Scenario:
    for s in builtin_scenarios():
        if s.name == name:
            return s
    known = ", ".join(s.name for s in builtin_scenarios())
    raise ScenarioError(f"unknown scenario {name!r}; builtins: {known}")


# ---------------------------------------------------------------------------
# Serialization

def _params_to_dict(p: NarrowingParams) -> dict:
    return {
        "core_mult": p.core_mult,
        "neutral_mult": p.neutral_mult,
        "wing_mult": p.wing_mult,
        "min_exponent": p.min_exponent,
        "base": p.base,
        "wing_floor": p.wing_floor,
    }


def to_dict(scenario: Scenario) -> dict:
    c = scenario.conditions
    if callable(c.nonlinear_coefficient):
        raise ScenarioError("cannot serialize a callable nonlinear coefficient")
    h = scenario.halfwidth
    d = {
        "name": scenario.name,
        "description": scenario.description,
        "cutoff": scenario.cutoff,
        "spectral_window": list(scenario.spectral_window),
        "grid": {
            "start": scenario.grid.start,
            "stop": scenario.grid.stop,
            "step": scenario.grid.step,
        },
        "conditions": {
            "temperature": c.temperature,
            "path_length": c.path_length,
            "absorber_density": c.absorber_density,
            "absorber_pressure": c.absorber_pressure,
            "nonlinear_coefficient": c.nonlinear_coefficient,
            "broadener": {
                "broadener_id": c.broadener.broadener_id,
                "scale_vs_n2": c.broadener.scale_vs_n2,
                "partial_pressure": c.broadener.partial_pressure,
                "partial_density": c.broadener.partial_density,
            },
        },
        "halfwidth": {
            "mode": h.mode,
            "gamma0": h.gamma0,
            "line_spacing": h.line_spacing,
            "saturation_multiplier": h.saturation_multiplier,
            "broadener_scale": h.broadener_scale,
            "hard_clamp": h.hard_clamp,
            "critical_pressure": h.critical_pressure,
            "quasi_linear_range": list(h.quasi_linear_range) if h.quasi_linear_range else None,
        },
        "narrowing_map": [
            {
                "lo": iv.lo,
                "hi": iv.hi,
                "broadener_scale": iv.broadener_scale,
                "params": _params_to_dict(iv.params),
            }
            for iv in scenario.narrowing_map
        ],
    }
    src = scenario.linelist_source
    if src is None:
        d["linelist"] = None
    elif isinstance(src, CombRecipe):
        d["linelist"] = {
            "comb": {
                "center": src.center,
                "count": src.count,
                "spacing": src.spacing,
                "intensity_profile": src.intensity_profile,
                "intensity": src.intensity,
                "gamma_foreign_ref": src.gamma_foreign_ref,
                "gamma_self_ref": src.gamma_self_ref,
                "lower_state_energy": src.lower_state_energy,
                "temp_exponent": src.temp_exponent,
            }
        }
    else:
        d["linelist"] = {"path": str(src)}
    return d


def from_dict(d: dict) -> Scenario:
    try:
        grid = SpectralGrid(**d["grid"])
        cond_d = dict(d["conditions"])
        broadener = BroadenerSpec(**cond_d.pop("broadener"))
        conditions = GasConditions(broadener=broadener, **cond_d)
        hw_d = dict(d["halfwidth"])
        if hw_d.get("quasi_linear_range") is not None:
            hw_d["quasi_linear_range"] = tuple(hw_d["quasi_linear_range"])
        halfwidth = HalfwidthModel(**hw_d)
        narrowing_map = tuple(
            NarrowingInterval(
                lo=iv["lo"],
                hi=iv["hi"],
                params=NarrowingParams(**iv["params"]),
                broadener_scale=iv.get("broadener_scale"),
            )
            for iv in d["narrowing_map"]
        )
        src_d = d.get("linelist")
        if src_d is None:
            source = None
        elif "comb" in src_d:
            source = CombRecipe(**src_d["comb"])
        else:
            source = src_d["path"]
        return Scenario(
            name=d["name"],
            description=d.get("description", ""),
            cutoff=d.get("cutoff", 600.0),
            spectral_window=tuple(d["spectral_window"]),
            grid=grid,
            conditions=conditions,
            halfwidth=halfwidth,
            narrowing_map=narrowing_map,
            linelist_source=source,
        )
    except (KeyError, TypeError) as err:
        raise ScenarioError(f"malformed scenario definition: {err}") from err


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_ini(d: dict, path: Path):
    cp = configparser.ConfigParser(interpolation=None)
    cp["scenario"] = {
        "name": d["name"],
        "description": d["description"],
        "cutoff": _fmt(d["cutoff"]),
    }
    cp["window"] = {"lo": _fmt(d["spectral_window"][0]), "hi": _fmt(d["spectral_window"][1])}
    cp["grid"] = {k: _fmt(v) for k, v in d["grid"].items()}
    cond = d["conditions"]
    cond_sec = {
        "temperature": _fmt(cond["temperature"]),
        "path_length": _fmt(cond["path_length"]),
        "nonlinear_coefficient": _fmt(cond["nonlinear_coefficient"]),
    }
    if cond["absorber_density"] is not None:
        cond_sec["absorber_density"] = _fmt(cond["absorber_density"])
    if cond["absorber_pressure"] is not None:
        cond_sec["absorber_pressure"] = _fmt(cond["absorber_pressure"])
    cp["conditions"] = cond_sec
    br = cond["broadener"]
    br_sec = {
        "broadener_id": br["broadener_id"],
        "scale_vs_n2": _fmt(br["scale_vs_n2"]),
        "partial_pressure": _fmt(br["partial_pressure"]),
    }
    if br["partial_density"] is not None:
        br_sec["partial_density"] = _fmt(br["partial_density"])
    cp["broadener"] = br_sec
    hw = d["halfwidth"]
    hw_sec = {
        "mode": hw["mode"],
        "gamma0": _fmt(hw["gamma0"]),
        "line_spacing": _fmt(hw["line_spacing"]),
        "saturation_multiplier": _fmt(hw["saturation_multiplier"]),
        "hard_clamp": _fmt(hw["hard_clamp"]),
    }
    if hw["broadener_scale"] is not None:
        hw_sec["broadener_scale"] = _fmt(hw["broadener_scale"])
    if hw["critical_pressure"] is not None:
        hw_sec["critical_pressure"] = _fmt(hw["critical_pressure"])
    if hw["quasi_linear_range"] is not None:
        hw_sec["quasi_linear_lo"] = _fmt(hw["quasi_linear_range"][0])
        hw_sec["quasi_linear_hi"] = _fmt(hw["quasi_linear_range"][1])
    cp["halfwidth"] = hw_sec
    for k, iv in enumerate(d["narrowing_map"]):
        sec = {"lo": _fmt(iv["lo"]), "hi": _fmt(iv["hi"])}
        if iv["broadener_scale"] is not None:
            sec["broadener_scale"] = _fmt(iv["broadener_scale"])
        sec.update({key: _fmt(val) for key, val in iv["params"].items()})
        cp[f"narrowing.{k}"] = sec
    src = d["linelist"]
    if src is None:
        cp["linelist"] = {"kind": "none"}
    elif "path" in src:
        cp["linelist"] = {"kind": "path", "path": src["path"]}
    else:
        sec = {"kind": "comb"}
        sec.update({key: _fmt(val) for key, val in src["comb"].items()})
        cp["linelist"] = sec
    with open(path, "w") as fh:
        cp.write(fh)


def _read_ini(path: Path) -> dict:
    cp = configparser.ConfigParser(interpolation=None)
    with open(path) as fh:
        cp.read_file(fh)
    try:
        hw = cp["halfwidth"]
        halfwidth = {
            "mode": hw["mode"],
            "gamma0": float(hw["gamma0"]),
            "line_spacing": float(hw["line_spacing"]),
            "saturation_multiplier": float(hw["saturation_multiplier"]),
            "broadener_scale": float(hw["broadener_scale"]) if "broadener_scale" in hw else None,
            "hard_clamp": hw.getboolean("hard_clamp", fallback=False),
            "critical_pressure": float(hw["critical_pressure"]) if "critical_pressure" in hw else None,
            "quasi_linear_range": (
                [float(hw["quasi_linear_lo"]), float(hw["quasi_linear_hi"])]
                if "quasi_linear_lo" in hw
                else None
            ),
        }
        cond = cp["conditions"]
        br = cp["broadener"]
        conditions = {
            "temperature": float(cond["temperature"]),
            "path_length": float(cond["path_length"]),
            "absorber_density": float(cond["absorber_density"]) if "absorber_density" in cond else None,
            "absorber_pressure": float(cond["absorber_pressure"]) if "absorber_pressure" in cond else None,
            "nonlinear_coefficient": float(cond["nonlinear_coefficient"]),
            "broadener": {
                "broadener_id": br["broadener_id"],
                "scale_vs_n2": float(br["scale_vs_n2"]),
                "partial_pressure": float(br["partial_pressure"]),
                "partial_density": float(br["partial_density"]) if "partial_density" in br else None,
            },
        }
        narrowing = []
        for section in sorted(s for s in cp.sections() if s.startswith("narrowing.")):
            sec = cp[section]
            narrowing.append(
                {
                    "lo": float(sec["lo"]),
                    "hi": float(sec["hi"]),
                    "broadener_scale": float(sec["broadener_scale"]) if "broadener_scale" in sec else None,
                    "params": {
                        "core_mult": float(sec["core_mult"]),
                        "neutral_mult": float(sec["neutral_mult"]),
                        "wing_mult": float(sec["wing_mult"]),
                        "min_exponent": float(sec["min_exponent"]),
                        "base": float(sec["base"]),
                        "wing_floor": float(sec["wing_floor"]),
                    },
                }
            )
        ll = cp["linelist"]
        kind = ll.get("kind", "none")
        if kind == "none":
            linelist = None
        elif kind == "path":
            linelist = {"path": ll["path"]}
        elif kind == "comb":
            linelist = {
                "comb": {
                    "center": float(ll["center"]),
                    "count": int(ll["count"]),
                    "spacing": float(ll["spacing"]),
                    "intensity_profile": ll["intensity_profile"],
                    "intensity": float(ll["intensity"]),
                    "gamma_foreign_ref": float(ll["gamma_foreign_ref"]),
                    "gamma_self_ref": float(ll["gamma_self_ref"]),
                    "lower_state_energy": float(ll["lower_state_energy"]),
                    "temp_exponent": float(ll["temp_exponent"]),
                }
            }
        else:
            raise ScenarioError(f"unknown linelist kind {kind!r}")
        return {
            "name": cp["scenario"]["name"],
            "description": cp["scenario"].get("description", ""),
            "cutoff": float(cp["scenario"]["cutoff"]),
            "spectral_window": [float(cp["window"]["lo"]), float(cp["window"]["hi"])],
            "grid": {
                "start": float(cp["grid"]["start"]),
                "stop": float(cp["grid"]["stop"]),
                "step": float(cp["grid"]["step"]),
            },
            "conditions": conditions,
            "halfwidth": halfwidth,
            "narrowing_map": narrowing,
            "linelist": linelist,
        }
    except (KeyError, configparser.Error) as err:
        raise ScenarioError(f"malformed scenario file {path}: {err}") from err


def save_scenario(scenario: Scenario, path) -> None:
    """Write a scenario file; format chosen by extension (.json vs INI)."""
    path = Path(path)
    d = to_dict(scenario)
    if path.suffix == ".json":
        with open(path, "w") as fh:
            json.dump(d, fh, indent=2)
            fh.write("\n")
    else:
        _write_ini(d, path)


def load_scenario(path) -> Scenario:
    """Read a scenario file written by save_scenario (or by hand)."""
    path = Path(path)
    if path.suffix == ".json":
        with open(path) as fh:
            return from_dict(json.load(fh))
    return from_dict(_read_ini(path))
