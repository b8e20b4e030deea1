"""Command-line surface: validate line lists, run scenarios, sweep pressure.

Subcommands
-----------
validate   parse a line list, print diagnostics, exit 0 iff none are fatal
compute    run one scenario (builtin name or scenario file) and write the
           spectrum as CSV (plus a JSON metadata sidecar) or as one JSON file
sweep      run a scenario at several broadener pressures; one output per
           pressure plus a summary table of peak absorption and peak ratio
scenarios  list the builtin scenarios

Exit codes: 0 success, 1 validation/parameter error, 2 I/O error.

Output files use full round-trip ``repr`` precision — rounding for display is
the plotting tool's job, and byte-stable output is what makes the determinism
guarantee testable. The sidecar (``<output>.meta.json``) echoes every
parameter that affects the numbers: the fully resolved scenario, the line-list
digest, cutoff, regime, and engine version. Two runs with identical sidecars
produce byte-identical CSVs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .engine import Spectrum, absorption_spectrum, gamma_factor_profile
from .halfwidth import HALFWIDTH_MODES
from .linelist import parse_linelist
from .narrowing import DegenerateWingError
from .scenario import (
    Scenario,
    ScenarioError,
    builtin_scenarios,
    get_scenario,
    load_scenario,
    to_dict,
    with_broadener_pressure,
)

# --set keys accepted by compute/sweep, and where each lands.
_CONDITION_KEYS = ("temperature", "path_length", "nonlinear_coefficient")
_HALFWIDTH_KEYS = (
    "gamma0",
    "line_spacing",
    "saturation_multiplier",
    "critical_pressure",
)
_NARROWING_KEYS = (
    "core_mult",
    "neutral_mult",
    "wing_mult",
    "min_exponent",
    "base",
    "wing_floor",
)
_SPECIAL_KEYS = (
    "absorber_density",
    "absorber_pressure",
    "broadener_pressure",
    "broadener_scale",
    "hard_clamp",
    "cutoff",
)
VALID_OVERRIDE_KEYS = _CONDITION_KEYS + _HALFWIDTH_KEYS + _NARROWING_KEYS + _SPECIAL_KEYS


class UsageError(ValueError):
    """Bad flag/override/parameter — maps to exit code 1."""


def _parse_window(text: str):
    try:
        lo_s, hi_s = text.split(":")
        lo, hi = float(lo_s), float(hi_s)
    except ValueError:
        raise UsageError(f"--window expects LO:HI, got {text!r}") from None
    if not lo < hi:
        raise UsageError("--window lower bound must lie below the upper bound")
    return lo, hi


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def _apply_overrides(scenario: Scenario, assignments) -> Scenario:
    """Apply --set key=value assignments to a scenario copy."""
    for item in assignments:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        key, _, raw = item.partition("=")
        key = key.strip()
        if key not in VALID_OVERRIDE_KEYS:
            raise UsageError(
                f"unknown override key {key!r}; valid keys: "
                + ", ".join(VALID_OVERRIDE_KEYS)
            )
        try:
            if key == "hard_clamp":
                value = _parse_bool(raw)
            else:
                value = float(raw)
        except ValueError:
            raise UsageError(f"override {key}={raw!r}: not a number") from None

        if key in _CONDITION_KEYS:
            scenario = replace(scenario, conditions=replace(scenario.conditions, **{key: value}))
        elif key in _HALFWIDTH_KEYS:
            scenario = replace(scenario, halfwidth=replace(scenario.halfwidth, **{key: value}))
        elif key in _NARROWING_KEYS:
            new_map = tuple(
                replace(iv, params=replace(iv.params, **{key: value}))
                for iv in scenario.narrowing_map
            )
            scenario = replace(scenario, narrowing_map=new_map)
        elif key == "absorber_density":
            scenario = replace(
                scenario,
                conditions=replace(
                    scenario.conditions, absorber_density=value, absorber_pressure=None
                ),
            )
        elif key == "absorber_pressure":
            scenario = replace(
                scenario,
                conditions=replace(
                    scenario.conditions, absorber_density=None, absorber_pressure=value
                ),
            )
        elif key == "broadener_pressure":
            scenario = with_broadener_pressure(scenario, value)
        elif key == "broadener_scale":
            broadener = replace(scenario.conditions.broadener, scale_vs_n2=value)
            scenario = replace(
                scenario,
                conditions=replace(scenario.conditions, broadener=broadener),
                halfwidth=replace(scenario.halfwidth, broadener_scale=value),
            )
        elif key == "hard_clamp":
            scenario = replace(scenario, halfwidth=replace(scenario.halfwidth, hard_clamp=value))
        elif key == "cutoff":
            scenario = replace(scenario, cutoff=value)
    return scenario


def _resolve_scenario(token: str) -> Scenario:
    """Builtin name, or a path to a scenario file (.json / INI)."""
    path = Path(token)
    looks_like_file = path.suffix in (".json", ".ini", ".cfg", ".scenario") or os.sep in token
    if looks_like_file or path.exists():
        if not path.exists():
            raise FileNotFoundError(f"scenario file not found: {token}")
        return load_scenario(path)
    return get_scenario(token)


def _apply_flag_overrides(scenario: Scenario, args) -> Scenario:
    if getattr(args, "window", None):
        lo, hi = _parse_window(args.window)
        scenario = replace(
            scenario,
            spectral_window=(lo, hi),
            grid=replace(scenario.grid, start=lo, stop=hi),
        )
    if getattr(args, "grid_step", None) is not None:
        scenario = replace(scenario, grid=replace(scenario.grid, step=args.grid_step))
    if getattr(args, "cutoff", None) is not None:
        scenario = replace(scenario, cutoff=args.cutoff)
    if getattr(args, "halfwidth_mode", None):
        scenario = replace(
            scenario, halfwidth=replace(scenario.halfwidth, mode=args.halfwidth_mode)
        )
    if getattr(args, "set", None):
        scenario = _apply_overrides(scenario, args.set)
    return scenario


def _sha256_of(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _run_metadata(scenario, table, linelist_path, regime, threads, gamma_column):
    from . import __version__

    linelist_meta = {
        "descriptor": table.source_descriptor,
        "records": len(table),
        "fatal_diagnostics": table.fatal_count,
        "sha256": _sha256_of(linelist_path) if linelist_path else None,
    }
    return {
        "scenario": to_dict(scenario),
        "linelist": linelist_meta,
        "regime": regime,
        "threads": threads,
        "gamma_column": bool(gamma_column),
        "engine": {"package": "linenarrow", "version": __version__},
    }


def _columns(spectrum: Spectrum, gamma=None):
    names = ["omega", "alpha_lorentz", "alpha_narrowed", "alpha_effective"]
    cols = [spectrum.omega, spectrum.alpha_lorentz, spectrum.alpha_narrowed,
            spectrum.alpha_effective]
    if gamma is not None:
        names.append("gamma_factor")
        cols.append(gamma)
    return names, cols


def write_spectrum_csv(path, spectrum: Spectrum, gamma=None) -> None:
    names, cols = _columns(spectrum, gamma)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in zip(*cols):
            writer.writerow([repr(float(v)) for v in row])


def write_spectrum_json(path, spectrum: Spectrum, metadata, gamma=None) -> None:
    names, cols = _columns(spectrum, gamma)
    payload = {"metadata": metadata}
    payload.update({n: [float(v) for v in c] for n, c in zip(names, cols)})
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _compute_one(scenario: Scenario, args, table):
    regime = args.regime.replace("-", "_")
    spectrum = absorption_spectrum(
        table,
        scenario.conditions,
        scenario.halfwidth,
        scenario.narrowing_map,
        scenario.grid,
        cutoff=scenario.cutoff,
        regime=regime,
        threads=args.threads,
    )
    gamma = None
    if getattr(args, "gamma_column", False):
        gamma = gamma_factor_profile(
            table,
            scenario.conditions,
            scenario.halfwidth,
            scenario.narrowing_map,
            spectrum.omega,
            regime=regime,
        )
    return spectrum, gamma


def cmd_validate(args) -> int:
    window = _parse_window(args.window) if args.window else None
    table = parse_linelist(args.linelist, window=window)
    for diag in table.diagnostics:
        print(str(diag), file=sys.stderr)
    warnings = len(table.diagnostics) - table.fatal_count
    print(
        f"{len(table)} records parsed, {warnings} warnings, "
        f"{table.fatal_count} fatal"
    )
    return 0 if table.fatal_count == 0 else 1


def cmd_compute(args) -> int:
    scenario = _apply_flag_overrides(_resolve_scenario(args.scenario), args)
    table = scenario.line_table(args.linelist)
    if table.fatal_count:
        print(
            f"warning: skipped {table.fatal_count} unparseable records "
            f"(run 'validate' for details)",
            file=sys.stderr,
        )
    spectrum, gamma = _compute_one(scenario, args, table)
    metadata = _run_metadata(
        scenario, table, args.linelist, args.regime.replace("-", "_"),
        args.threads, getattr(args, "gamma_column", False),
    )
    suffix = ".json" if args.format == "json" else ".csv"
    out = Path(args.output) if args.output else Path(f"{scenario.name}{suffix}")
    if args.format == "json":
        write_spectrum_json(out, spectrum, metadata, gamma)
    else:
        write_spectrum_csv(out, spectrum, gamma)
        sidecar = Path(str(out) + ".meta.json")
        with open(sidecar, "w") as fh:
            json.dump(metadata, fh, indent=2)
            fh.write("\n")
    print(f"wrote {out} ({spectrum.grid.n_points} rows)")
    return 0


def cmd_sweep(args) -> int:
    try:
        pressures = [float(tok) for tok in args.pressures.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"--pressures expects comma-separated numbers, got {args.pressures!r}") from None
    if not pressures:
        raise UsageError("--pressures lists no values")
    if any(p <= 0.0 for p in pressures):
        raise UsageError("all sweep pressures must be positive")

    base = _apply_flag_overrides(_resolve_scenario(args.scenario), args)
    out_dir = Path(args.output_dir) if args.output_dir else Path(f"{base.name}_sweep")
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    for pressure in pressures:
        scenario = with_broadener_pressure(base, pressure)
        table = scenario.line_table(args.linelist)
        spectrum, gamma = _compute_one(scenario, args, table)
        metadata = _run_metadata(
            scenario, table, args.linelist, args.regime.replace("-", "_"),
            args.threads, getattr(args, "gamma_column", False),
        )
        suffix = ".json" if args.format == "json" else ".csv"
        out = out_dir / f"{base.name}_{pressure:g}atm{suffix}"
        if args.format == "json":
            write_spectrum_json(out, spectrum, metadata, gamma)
        else:
            write_spectrum_csv(out, spectrum, gamma)
            with open(Path(str(out) + ".meta.json"), "w") as fh:
                json.dump(metadata, fh, indent=2)
                fh.write("\n")
        peak_l = float(np.max(spectrum.alpha_lorentz))
        peak_n = float(np.max(spectrum.alpha_narrowed))
        peak_e = float(np.max(spectrum.alpha_effective))
        ratio = peak_n / peak_l if peak_l > 0.0 else float("nan")
        rows.append((pressure, peak_l, peak_n, peak_e, ratio))

    summary = out_dir / "summary.csv"
    with open(summary, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["pressure_atm", "peak_alpha_lorentz", "peak_alpha_narrowed",
             "peak_alpha_effective", "peak_ratio"]
        )
        for row in rows:
            writer.writerow([repr(float(v)) for v in row])

    header = f"{'p (atm)':>10}  {'peak Lorentz':>13}  {'peak narrowed':>13}  {'peak effective':>14}  {'ratio':>8}"
    print(header)
    for pressure, peak_l, peak_n, peak_e, ratio in rows:
        print(f"{pressure:>10.4g}  {peak_l:>13.6g}  {peak_n:>13.6g}  {peak_e:>14.6g}  {ratio:>8.4f}")
    print(f"wrote {summary}")
    return 0


def cmd_scenarios(args) -> int:
    for s in builtin_scenarios():
        print(f"{s.name:20s} {s.description}")
    return 0


def _add_compute_flags(sub):
    sub.add_argument("--linelist", metavar="PATH", help="line-list file (overrides the scenario's source)")
    sub.add_argument("--window", metavar="LO:HI", help="spectral window in cm-1 (also re-bounds the grid)")
    sub.add_argument("--grid-step", type=float, metavar="F", help="grid spacing in cm-1")
    sub.add_argument("--cutoff", type=float, metavar="F", help="wing cutoff in cm-1 (default: scenario value, 600)")
    sub.add_argument("--threads", type=int, default=os.cpu_count(), metavar="N",
                     help="worker threads (default: available cores)")
    sub.add_argument("--output", metavar="PATH", help="output file (default: <scenario>.csv)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--regime", choices=("auto", "above-ps", "below-ps"), default="auto",
                     help="force the narrowing regime instead of comparing against the critical pressure")
    sub.add_argument("--halfwidth-mode", choices=HALFWIDTH_MODES,
                     help="override the scenario's halfwidth saturation mode")
    sub.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                     help="override a scenario parameter (repeatable); see docs for keys")
    sub.add_argument("--gamma-column", action="store_true",
                     help="append the narrowing factor at the nearest line as a diagnostic column")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linenarrow",
        description="Line-by-line molecular absorption with pressure-saturated line-shape narrowing.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_val = subs.add_parser("validate", help="parse a line list and report diagnostics")
    p_val.add_argument("--linelist", required=True, metavar="PATH")
    p_val.add_argument("--window", metavar="LO:HI", help="only keep lines inside LO:HI cm-1")
    p_val.set_defaults(func=cmd_validate)

    p_cmp = subs.add_parser("compute", help="run one scenario and write the spectrum")
    p_cmp.add_argument("scenario", help="builtin scenario name or scenario file path")
    _add_compute_flags(p_cmp)
    p_cmp.set_defaults(func=cmd_compute)

    p_swp = subs.add_parser("sweep", help="run a scenario across broadener pressures")
    p_swp.add_argument("scenario", help="builtin scenario name or scenario file path")
    p_swp.add_argument("--pressures", required=True, metavar="P1,P2,...",
                       help="comma-separated broadener partial pressures in atm")
    p_swp.add_argument("--output-dir", metavar="DIR", help="directory for per-pressure outputs (default: <scenario>_sweep)")
    _add_compute_flags(p_swp)
    p_swp.set_defaults(func=cmd_sweep)

    p_lst = subs.add_parser("scenarios", help="list builtin scenarios")
    p_lst.set_defaults(func=cmd_scenarios)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; our contract
        # reserves 2 for I/O problems.
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except (UsageError, ScenarioError, DegenerateWingError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
