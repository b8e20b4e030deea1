#!/usr/bin/env python3
"""Regenerate the frozen regression fixtures under tests/data/.

Run from the repository root after an intentional numerical change, then
review the diff before committing — these files define the regression
baseline:

* nu3_sample.par            synthetic two-branch CO2-like line list (fixed
                            construction, no randomness)
* nu3_sample_spectrum.csv   CLI `compute nu3_135atm` over that list
* comb_snapshot.csv         engine output for the comb scenario, small grid
* sweep_peak_ratios.json    peak-ratio curve at {0.5, 1, 2} x critical pressure
"""

import json
import math
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "tests" / "data"

from linenarrow import (  # noqa: E402
    BranchTag,
    SpectralGrid,
    SpectralLine,
    absorption_spectrum,
    critical_pressure,
    format_record,
    get_scenario,
    with_broadener_pressure,
)
from linenarrow.cli import main as cli_main  # noqa: E402


def build_nu3_sample():
    """A plausible nu3-band stand-in: P and R branches, smooth envelope."""
    lines = []
    origin = 2349.0
    rot = 0.39  # cm-1, rotational constant scale for lower-state energies
    for k in range(1, 41):
        e_low = rot * k * (k + 1)
        envelope = math.exp(-e_low / 450.0) * (k / 8.0 if k < 8 else 1.0)
        s = 3.0e-19 * envelope
        lines.append(
            SpectralLine(
                molecule_id=2, isotopologue_id=1,
                position=origin - 0.8 - 1.56 * k + 0.002 * k * k,
                intensity_ref=s, gamma_foreign_ref=0.07, gamma_self_ref=0.09,
                lower_state_energy=e_low, temp_exponent=0.75,
                branch_tag=BranchTag.P,
            )
        )
        lines.append(
            SpectralLine(
                molecule_id=2, isotopologue_id=1,
                position=origin + 0.8 + 1.52 * k - 0.003 * k * k,
                intensity_ref=s, gamma_foreign_ref=0.07, gamma_self_ref=0.09,
                lower_state_energy=e_low, temp_exponent=0.75,
                branch_tag=BranchTag.R,
            )
        )
    lines.sort(key=lambda l: l.position)
    return lines


def write_nu3_sample():
    path = DATA / "nu3_sample.par"
    with open(path, "w") as fh:
        for line in build_nu3_sample():
            fh.write(format_record(line) + "\n")
    print(f"wrote {path}")
    return path


def write_nu3_spectrum(par_path):
    out = DATA / "nu3_sample_spectrum.csv"
    rc = cli_main([
        "compute", "nu3_135atm",
        "--linelist", str(par_path),
        "--grid-step", "0.5",
        "--threads", "1",
        "--output", str(out),
    ])
    if rc != 0:
        sys.exit(f"compute failed with exit code {rc}")
    # the sidecar is a run artifact, not a fixture
    (DATA / "nu3_sample_spectrum.csv.meta.json").unlink(missing_ok=True)
    print(f"wrote {out}")


def write_comb_snapshot():
    sc = get_scenario("comb_demo")
    table = sc.line_table()
    grid = SpectralGrid(2330.0, 2370.0, 0.02)
    spec = absorption_spectrum(
        table, sc.conditions, sc.halfwidth, sc.narrowing_map, grid,
        cutoff=sc.cutoff, regime="auto", threads=1,
    )
    out = DATA / "comb_snapshot.csv"
    with open(out, "w") as fh:
        fh.write("omega,alpha_lorentz,alpha_narrowed,alpha_effective\n")
        for row in zip(spec.omega, spec.alpha_lorentz, spec.alpha_narrowed,
                       spec.alpha_effective):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    print(f"wrote {out}")


def write_sweep_ratios():
    sc = get_scenario("comb_demo")
    table = sc.line_table()
    mid = table[len(table) // 2]
    ps = critical_pressure(mid, sc.conditions.broadener, sc.conditions.temperature,
                           sc.halfwidth)
    pressures = [0.5 * ps, ps, 2.0 * ps]
    ratios = []
    for p in pressures:
        variant = with_broadener_pressure(sc, p)
        spec = absorption_spectrum(
            table, variant.conditions, variant.halfwidth, variant.narrowing_map,
            variant.grid, cutoff=variant.cutoff, regime="auto", threads=1,
        )
        ratios.append(float(spec.alpha_narrowed.max() / spec.alpha_lorentz.max()))
    out = DATA / "sweep_peak_ratios.json"
    with open(out, "w") as fh:
        json.dump({"pressures_atm": pressures, "peak_ratio": ratios}, fh, indent=2)
        fh.write("\n")
    print(f"wrote {out}: ratios {ratios}")


if __name__ == "__main__":
    DATA.mkdir(parents=True, exist_ok=True)
    par = write_nu3_sample()
    write_nu3_spectrum(par)
    write_comb_snapshot()
    write_sweep_ratios()
