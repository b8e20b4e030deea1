"""Line-by-line absorption over a spectral grid.

For every grid point the engine sums, over all lines within the wing cutoff
(600 cm-1 by convention), the product of population factor, Lorentz shape,
optional wing hook, and narrowing factor. Three spectra come out of one
pass:

* ``alpha_lorentz`` — the conventional reference: plain Lorentzians at the
  linear-in-pressure width, no narrowing, no hooks;
* ``alpha_narrowed`` — the saturation model: above the critical pressure the
  Lorentzian is evaluated at the saturated width and multiplied by the
  piecewise narrowing factor (region boundaries at the saturated width, wing
  level tracking the conventional width); below it the factor is 1 and the
  width follows the halfwidth model's regime;
* ``alpha_effective`` — ``alpha_narrowed`` corrected for weak nonlinear
  absorption along the path.

Summation is performed in fixed ascending-position order with compensated
(Neumaier) accumulation, each grid point independently, so results are
bit-identical for any worker count or grid partitioning. Worker threads
share read-only inputs and write disjoint output slices.

Lines within the cutoff of the grid but outside every narrowing-map interval
take the parameters of the nearest interval.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import _kernel
from .constants import (
    C2_RADIATION,
    T_REF,
    amagat_to_number_density,
    pressure_to_number_density,
)
from .halfwidth import BroadenerSpec, HalfwidthModel, saturated_halfwidth
from .linelist import LineTable
from .narrowing import DegenerateWingError, NarrowingParams
from .profile import ProfileHooks

REGIMES = ("auto", "above_ps", "below_ps")

DEFAULT_CUTOFF = 600.0


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform wavenumber grid: start + k*step, k = 0 .. floor((stop-start)/step)."""

    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not self.start < self.stop:
            raise ValueError("grid start must lie below stop")
        if self.step <= 0.0:
            raise ValueError("grid step must be positive")

    @property
    def n_points(self) -> int:
        return int(math.floor((self.stop - self.start) / self.step)) + 1

    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.n_points, dtype=np.float64)


@dataclass(frozen=True)
class GasConditions:
    """Sample state: temperature, absorber amount, broadener, path.

    Exactly one of absorber_density (amagat) and absorber_pressure (atm)
    must be given. nonlinear_coefficient is the b(omega) of the effective-
    absorption correction: a constant (cm-1) or a callable of wavenumber;
    the default 0 disables the correction.
    """

    temperature: float
    broadener: BroadenerSpec
    absorber_density: Optional[float] = None
    absorber_pressure: Optional[float] = None
    path_length: float = 1.0
    nonlinear_coefficient: Union[float, Callable] = 0.0

    def __post_init__(self):
        if self.temperature <= 0.0:
            raise ValueError("temperature must be positive")
        if self.path_length <= 0.0:
            raise ValueError("path_length must be positive")
        if (self.absorber_density is None) == (self.absorber_pressure is None):
            raise ValueError(
                "specify exactly one of absorber_density (amagat) and "
                "absorber_pressure (atm)"
            )
        amount = self.absorber_density if self.absorber_pressure is None else self.absorber_pressure
        if amount < 0.0:
            raise ValueError("absorber amount must be non-negative")

    def absorber_number_density(self) -> float:
        """Absorber molecules per cm^3."""
        if self.absorber_density is not None:
            return amagat_to_number_density(self.absorber_density)
        return pressure_to_number_density(self.absorber_pressure, self.temperature)


@dataclass(frozen=True)
class NarrowingInterval:
    """Narrowing parameters (and optional broadener-scale override) for one
    wavenumber interval [lo, hi)."""

    lo: float
    hi: float
    params: NarrowingParams
    broadener_scale: Optional[float] = None

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("interval lo must lie below hi")
        if self.broadener_scale is not None and self.broadener_scale <= 0.0:
            raise ValueError("broadener_scale must be positive")


@dataclass
class Spectrum:
    """Grid plus the three absorption variants (cm-1) and a parameter echo."""

    grid: SpectralGrid
    omega: np.ndarray
    alpha_lorentz: np.ndarray
    alpha_narrowed: np.ndarray
    alpha_effective: np.ndarray
    metadata: dict = field(default_factory=dict)


@dataclass
class ResidualReport:
    """Pointwise comparison of a spectrum against a reference curve."""

    omega: np.ndarray
    ratio: np.ndarray
    difference: np.ndarray
    max_abs_rel_dev: float
    mean_abs_rel_dev: float


def effective_absorption(alpha: float, nonlinear_b: float, path_length: float) -> float:
    """Nonlinear-path correction of an absorption coefficient.

    alpha + (1/(2x)) * ln(1 + b/(2 alpha) * (1 - exp(-2 alpha x))) with
    x = path_length; evaluated via expm1/log1p so the small-alpha regime
    keeps full precision, and via the analytic limit
    alpha + (1/(2x)) * ln(1 + b x) below alpha = 1e-30. b = 0 returns alpha
    exactly.
    """
    if alpha < 0.0:
        raise ValueError("alpha must be non-negative")
    if nonlinear_b < 0.0:
        raise ValueError("nonlinear coefficient must be non-negative")
    if path_length <= 0.0:
        raise ValueError("path_length must be positive")
    if nonlinear_b == 0.0:
        return alpha
    if alpha < 1e-30:
        return alpha + 0.5 / path_length * math.log1p(nonlinear_b * path_length)
    grown = -math.expm1(-2.0 * alpha * path_length)
    return alpha + 0.5 / path_length * math.log1p(nonlinear_b / (2.0 * alpha) * grown)


def _effective_absorption_array(alpha: np.ndarray, b: np.ndarray, path_length: float) -> np.ndarray:
    if np.any(b < 0.0):
        raise ValueError("nonlinear coefficient must be non-negative")
    tiny = alpha < 1e-30
    safe = np.where(tiny, 1.0, alpha)
    grown = -np.expm1(-2.0 * safe * path_length)
    full = alpha + 0.5 / path_length * np.log1p(b / (2.0 * safe) * grown)
    limit = alpha + 0.5 / path_length * np.log1p(b * path_length)
    out = np.where(tiny, limit, full)
    return np.where(b == 0.0, alpha, out)


def _as_intervals(narrowing) -> tuple:
    if isinstance(narrowing, NarrowingParams):
        return (NarrowingInterval(-math.inf, math.inf, narrowing),)
    intervals = tuple(narrowing)
    if not intervals:
        raise ValueError("narrowing map must contain at least one interval")
    intervals = tuple(sorted(intervals, key=lambda iv: iv.lo))
    for prev, cur in zip(intervals, intervals[1:]):
        if cur.lo < prev.hi:
            raise ValueError(
                f"narrowing intervals overlap: [{prev.lo}, {prev.hi}) and "
                f"[{cur.lo}, {cur.hi})"
            )
    return intervals


@dataclass
class _LineArrays:
    """Per-line quantities consumed by the summation kernel."""

    pos: np.ndarray
    pref_l: np.ndarray
    g2_l: np.ndarray
    pref_n: np.ndarray
    g2_n: np.ndarray
    active: np.ndarray
    r_core: np.ndarray
    r_neutral: np.ndarray
    r_wing: np.ndarray
    slope_core: np.ndarray
    slope_mid: np.ndarray
    ln_base: np.ndarray
    core_level: np.ndarray
    wing_level: np.ndarray
    gamma_c: np.ndarray
    gamma_n: np.ndarray


def _resolve_regime(regime) -> str:
    name = getattr(regime, "value", regime)
    if name not in REGIMES:
        raise ValueError(f"regime must be one of {REGIMES}, got {regime!r}")
    return name


def _precompute(lines, conditions, model, intervals, regime: str) -> _LineArrays:
    n = len(lines)
    pos = np.array([ln.position for ln in lines])
    intensity = np.array([ln.intensity_ref for ln in lines])
    gamma_ref = np.array([ln.gamma_foreign_ref for ln in lines])
    lower_e = np.array([ln.lower_state_energy for ln in lines])
    temp_exp = np.array([ln.temp_exponent for ln in lines])

    temperature = conditions.temperature
    broadener = conditions.broadener

    # Narrowing-map interval per line, clamped to the nearest interval for
    # lines that sit outside the mapped range (they can still be inside the
    # wing cutoff of the grid).
    interval_lo = np.array([iv.lo for iv in intervals])
    idx = np.clip(np.searchsorted(interval_lo, pos, side="right") - 1, 0, len(intervals) - 1)

    scale_by_interval = np.array(
        [
            iv.broadener_scale if iv.broadener_scale is not None else broadener.scale_vs_n2
            for iv in intervals
        ]
    )
    scales = scale_by_interval[idx]

    t_pow = (T_REF / temperature) ** temp_exp
    gamma_c = model.gamma0 + scales * gamma_ref * t_pow * broadener.partial_pressure
    gamma_sat = saturated_halfwidth(model)

    if regime == "above_ps":
        above = np.ones(n, dtype=bool)
    elif regime == "below_ps":
        above = np.zeros(n, dtype=bool)
    elif model.critical_pressure is not None:
        above = np.full(n, broadener.partial_pressure >= model.critical_pressure)
    else:
        above = gamma_c >= gamma_sat

    # Population scaling (identically the number density at 296 K).
    density = conditions.absorber_number_density()
    c2 = C2_RADIATION
    boltzmann = np.exp(-c2 * lower_e / temperature) / np.exp(-c2 * lower_e / T_REF)
    stimulated = (1.0 - np.exp(-c2 * pos / temperature)) / (1.0 - np.exp(-c2 * pos / T_REF))
    population = density * boltzmann * stimulated * (T_REF / temperature)
    strength = population * intensity

    # Width of the narrowed variant: pinned at gamma_sat above critical,
    # the model's effective width below.
    if model.mode == "linear":
        gamma_sub = gamma_c.copy()
    elif model.mode == "saturating":
        if model.hard_clamp:
            gamma_sub = np.minimum(gamma_c, gamma_sat)
        else:
            gamma_sub = gamma_sat * np.tanh(gamma_c / gamma_sat)
    else:  # combined; arranged so equal widths round to exactly gamma_c/2
        gamma_sub = gamma_c / (1.0 + gamma_c / gamma_sat)
    gamma_n = np.where(above, gamma_sat, gamma_sub)

    core_mult = np.array([intervals[k].params.core_mult for k in idx])
    neutral_mult = np.array([intervals[k].params.neutral_mult for k in idx])
    wing_mult = np.array([intervals[k].params.wing_mult for k in idx])
    min_exp = np.array([intervals[k].params.min_exponent for k in idx])
    base = np.array([intervals[k].params.base for k in idx])
    wing_floor = np.array([intervals[k].params.wing_floor for k in idx])

    ln_base = np.log(base)
    x_max = np.zeros(n)
    wing_level = np.ones(n)
    if above.any():
        ratio = wing_floor[above] * gamma_c[above] / gamma_sat
        worst = ratio.max() if ratio.size else 0.0
        if worst >= 1.0:
            raise DegenerateWingError(
                f"wing level {worst:g} >= 1 for at least one line "
                f"(conventional width {gamma_c[above].max():g} vs ceiling {gamma_sat:g})"
            )
        x_max[above] = np.log(ratio) / ln_base[above]
        wing_level[above] = np.power(base[above], x_max[above])

    return _LineArrays(
        pos=pos,
        pref_l=strength * gamma_c / math.pi,
        g2_l=gamma_c * gamma_c,
        pref_n=strength * gamma_n / math.pi,
        g2_n=gamma_n * gamma_n,
        active=above.astype(np.uint8),
        r_core=core_mult * gamma_sat,
        r_neutral=neutral_mult * gamma_sat,
        r_wing=wing_mult * gamma_sat,
        slope_core=min_exp / ((neutral_mult - core_mult) * gamma_sat),
        slope_mid=x_max / ((wing_mult - neutral_mult) * gamma_sat),
        ln_base=ln_base,
        core_level=np.power(base, min_exp),
        wing_level=wing_level,
        gamma_c=gamma_c,
        gamma_n=gamma_n,
    )


def _run_kernel(omega, lo, hi, arrays: _LineArrays, threads: int):
    n_points = omega.size
    out_l = np.zeros(n_points)
    out_n = np.zeros(n_points)
    args = (
        omega,
        lo,
        hi,
        arrays.pos,
        arrays.pref_l,
        arrays.g2_l,
        arrays.pref_n,
        arrays.g2_n,
        arrays.active,
        arrays.r_core,
        arrays.r_neutral,
        arrays.r_wing,
        arrays.slope_core,
        arrays.slope_mid,
        arrays.ln_base,
        arrays.core_level,
        arrays.wing_level,
        out_l,
        out_n,
    )

    def run_slice(j0, j1):
        _kernel.sum_lines(args[0], args[1], args[2], j0, j1, *args[3:])

    if threads <= 1 or n_points < 2 * threads:
        run_slice(0, n_points)
        return out_l, out_n

    chunk = -(-n_points // threads)  # ceil division
    spans = [
        (k * chunk, min((k + 1) * chunk, n_points))
        for k in range(threads)
        if k * chunk < n_points
    ]
    with ThreadPoolExecutor(max_workers=len(spans)) as pool:
        futures = [pool.submit(run_slice, j0, j1) for j0, j1 in spans]
        for f in futures:
            f.result()
    return out_l, out_n


def _sum_with_hooks(omega, lo, hi, arrays: _LineArrays, hooks: ProfileHooks, temperature: float):
    """Reference path used when a wing hook is attached: vectorized per grid
    point over the line window, exact (fsum) accumulation in the same
    ascending-position order as the kernel."""
    n_points = omega.size
    out_l = np.zeros(n_points)
    out_n = np.zeros(n_points)
    active = arrays.active.astype(bool)
    for j in range(n_points):
        i0, i1 = lo[j], hi[j]
        if i0 == i1:
            continue
        w = omega[j]
        window = slice(i0, i1)
        pos = arrays.pos[window]
        d = np.abs(w - pos)
        d2 = d * d
        contrib_l = arrays.pref_l[window] / (d2 + arrays.g2_l[window])
        contrib_n = arrays.pref_n[window] / (d2 + arrays.g2_n[window])

        act = active[window]
        if act.any():
            factor = np.ones_like(d)
            r1 = arrays.r_core[window]
            r2 = arrays.r_neutral[window]
            r3 = arrays.r_wing[window]
            core = act & (d <= r1)
            wing = act & (d >= r3)
            mid = act & (d > r2) & (d < r3)
            inner = act & (d > r1) & (d <= r2)
            factor[core] = arrays.core_level[window][core]
            factor[wing] = arrays.wing_level[window][wing]
            factor[mid] = np.exp(
                arrays.slope_mid[window][mid] * (d[mid] - r2[mid]) * arrays.ln_base[window][mid]
            )
            factor[inner] = np.exp(
                arrays.slope_core[window][inner]
                * (r2[inner] - d[inner])
                * arrays.ln_base[window][inner]
            )
            contrib_n = contrib_n * factor

        damping = hooks.wing_factor(w, pos, temperature, hooks.slope_steps)
        contrib_n = contrib_n * damping

        out_l[j] = math.fsum(contrib_l)
        out_n[j] = math.fsum(contrib_n)
    return out_l, out_n


def absorption_spectrum(
    table: LineTable,
    conditions: GasConditions,
    model: HalfwidthModel,
    narrowing,
    grid: SpectralGrid,
    *,
    hooks: Optional[ProfileHooks] = None,
    cutoff: float = DEFAULT_CUTOFF,
    regime="auto",
    threads: Optional[int] = None,
) -> Spectrum:
    """Sum line contributions over the grid; see the module docstring.

    Args:
        table: sorted line table.
        conditions: gas state (temperature, absorber amount, broadener, path).
        model: halfwidth regime parameters.
        narrowing: a single NarrowingParams or a sequence of
            NarrowingInterval covering the band structure.
        grid: output wavenumber grid.
        hooks: optional wing-damping hook; None keeps the fast compiled path.
        cutoff: wing cutoff, cm-1 (math.inf allowed). Lines farther than this
            from a grid point contribute nothing there.
        regime: "auto" decides per line (conventional width >= ceiling, or
            the model's critical_pressure override when set); "above_ps" /
            "below_ps" force it.
        threads: worker count for the compiled path (default: all cores).
            Results are bit-identical for every value.
    """
    if cutoff <= 0.0:
        raise ValueError("cutoff must be positive")
    regime = _resolve_regime(regime)
    intervals = _as_intervals(narrowing)
    omega = grid.points()
    n_points = omega.size

    positions = table.positions
    i0 = int(np.searchsorted(positions, grid.start - cutoff, side="left"))
    i1 = int(np.searchsorted(positions, grid.stop + cutoff, side="right"))
    lines = table.lines[i0:i1]

    metadata = {
        "source": table.source_descriptor,
        "n_lines_in_reach": len(lines),
        "cutoff": cutoff,
        "regime": regime,
        "halfwidth_mode": model.mode,
        "gamma_sat": saturated_halfwidth(model),
        "temperature": conditions.temperature,
        "broadener_pressure_atm": conditions.broadener.partial_pressure,
        "absorber_number_density": conditions.absorber_number_density(),
        "path_length": conditions.path_length,
    }

    if not lines:
        zeros = np.zeros(n_points)
        b_arr = _nonlinear_array(conditions, omega)
        return Spectrum(
            grid=grid,
            omega=omega,
            alpha_lorentz=zeros,
            alpha_narrowed=zeros.copy(),
            alpha_effective=_effective_absorption_array(
                zeros, b_arr, conditions.path_length
            ),
            metadata=metadata,
        )

    arrays = _precompute(lines, conditions, model, intervals, regime)
    lo = np.searchsorted(arrays.pos, omega - cutoff, side="left").astype(np.int64)
    hi = np.searchsorted(arrays.pos, omega + cutoff, side="right").astype(np.int64)

    if hooks is not None and hooks.active:
        out_l, out_n = _sum_with_hooks(omega, lo, hi, arrays, hooks, conditions.temperature)
    else:
        n_workers = threads if threads is not None else (os.cpu_count() or 1)
        if n_workers < 1:
            raise ValueError("threads must be at least 1")
        out_l, out_n = _run_kernel(omega, lo, hi, arrays, n_workers)

    b_arr = _nonlinear_array(conditions, omega)
    alpha_eff = _effective_absorption_array(out_n, b_arr, conditions.path_length)
    return Spectrum(
        grid=grid,
        omega=omega,
        alpha_lorentz=out_l,
        alpha_narrowed=out_n,
        alpha_effective=alpha_eff,
        metadata=metadata,
    )


def _nonlinear_array(conditions: GasConditions, omega: np.ndarray) -> np.ndarray:
    b = conditions.nonlinear_coefficient
    if callable(b):
        return np.array([float(b(w)) for w in omega])
    return np.full(omega.shape, float(b))


def gamma_factor_profile(
    table: LineTable,
    conditions: GasConditions,
    model: HalfwidthModel,
    narrowing,
    omega: np.ndarray,
    *,
    regime="auto",
) -> np.ndarray:
    """Diagnostic: the narrowing factor at each wavenumber for its nearest
    line (1.0 where the table is empty or the nearest line is sub-critical)."""
    regime = _resolve_regime(regime)
    intervals = _as_intervals(narrowing)
    if not len(table):
        return np.ones(omega.size)
    arrays = _precompute(table.lines, conditions, model, intervals, regime)
    pos = arrays.pos
    right = np.searchsorted(pos, omega).clip(0, pos.size - 1)
    left = np.maximum(right - 1, 0)
    nearest = np.where(
        np.abs(pos[right] - omega) < np.abs(omega - pos[left]), right, left
    )
    d = np.abs(omega - pos[nearest])
    act = arrays.active.astype(bool)[nearest]
    factor = np.ones(omega.size)
    r1 = arrays.r_core[nearest]
    r2 = arrays.r_neutral[nearest]
    r3 = arrays.r_wing[nearest]
    core = act & (d <= r1)
    wing = act & (d >= r3)
    mid = act & (d > r2) & (d < r3)
    inner = act & (d > r1) & (d <= r2)
    factor[core] = arrays.core_level[nearest][core]
    factor[wing] = arrays.wing_level[nearest][wing]
    factor[mid] = np.exp(
        arrays.slope_mid[nearest][mid] * (d[mid] - r2[mid]) * arrays.ln_base[nearest][mid]
    )
    factor[inner] = np.exp(
        arrays.slope_core[nearest][inner] * (r2[inner] - d[inner]) * arrays.ln_base[nearest][inner]
    )
    return factor


def compare_to_reference(spectrum: Spectrum, reference, field: str = "alpha_narrowed") -> ResidualReport:
    """Pointwise ratio/difference of `spectrum` against a reference.

    `reference` is another Spectrum or an (omega, values) pair. Mismatched
    grids are handled by linear interpolation of the reference onto the
    overlapping part of the spectrum's grid; disjoint ranges raise.
    Ratio convention: spectrum/reference, with 0/0 counted as 1.
    """
    values = np.asarray(getattr(spectrum, field), dtype=float)
    omega = spectrum.omega
    if isinstance(reference, Spectrum):
        ref_omega = reference.omega
        ref_values = np.asarray(getattr(reference, field), dtype=float)
    else:
        ref_omega, ref_values = reference
        ref_omega = np.asarray(ref_omega, dtype=float)
        ref_values = np.asarray(ref_values, dtype=float)

    if np.array_equal(ref_omega, omega):
        sel_omega, sel_values, ref_on_grid = omega, values, ref_values
    else:
        lo = max(omega[0], ref_omega[0])
        hi = min(omega[-1], ref_omega[-1])
        if hi < lo:
            raise ValueError("spectral ranges are disjoint")
        mask = (omega >= lo) & (omega <= hi)
        sel_omega = omega[mask]
        sel_values = values[mask]
        ref_on_grid = np.interp(sel_omega, ref_omega, ref_values)

    difference = sel_values - ref_on_grid
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(
            (ref_on_grid == 0.0) & (sel_values == 0.0),
            1.0,
            sel_values / ref_on_grid,
        )
    nonzero = ref_on_grid != 0.0
    if nonzero.any():
        rel = np.abs(difference[nonzero]) / np.abs(ref_on_grid[nonzero])
        max_dev = float(rel.max())
        mean_dev = float(rel.mean())
    else:
        max_dev = 0.0 if not np.abs(difference).any() else math.inf
        mean_dev = max_dev
    return ResidualReport(
        omega=sel_omega,
        ratio=ratio,
        difference=difference,
        max_abs_rel_dev=max_dev,
        mean_abs_rel_dev=mean_dev,
    )
