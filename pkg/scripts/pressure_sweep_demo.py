#!/usr/bin/env python3
"""Sweep the comb scenario through the critical pressure and watch the
peak-to-Lorentzian ratio turn on.

Prints a table of peak absorption versus pressure and, when matplotlib is
importable, drops comb_sweep.png with the spectra overlaid.  The engine and
scenario plumbing are exercised exactly the way the CLI uses them.

Usage: python scripts/pressure_sweep_demo.py [--plot FILE.png]
"""

import argparse

import numpy as np

from linenarrow import (
    absorption_spectrum,
    critical_pressure,
    get_scenario,
    with_broadener_pressure,
)


def run(scenario, pressure):
    s = with_broadener_pressure(scenario, pressure)
    table = s.line_table()
    return absorption_spectrum(
        table, s.conditions, s.halfwidth, s.narrowing_map, s.grid,
        cutoff=s.cutoff, threads=1,
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--plot", default=None, metavar="FILE.png",
                    help="write an overlay plot (needs matplotlib)")
    args = ap.parse_args()

    base = get_scenario("comb_demo")
    mid_line = base.line_table()[20]
    p_s = critical_pressure(mid_line, base.conditions.broadener,
                            base.conditions.temperature, base.halfwidth)
    pressures = [round(m * p_s, 1) for m in (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0)]

    print(f"comb of 41 lines, spacing 1.2 /cm, critical pressure {p_s:.1f} atm")
    print(f"{'p (atm)':>9} {'peak Lorentz':>13} {'peak narrowed':>14} {'ratio':>7}")
    spectra = []
    for pressure in pressures:
        spec = run(base, pressure)
        peak_l = float(spec.alpha_lorentz.max())
        peak_n = float(spec.alpha_narrowed.max())
        spectra.append((pressure, spec))
        print(f"{pressure:>9.1f} {peak_l:>13.4e} {peak_n:>14.4e} "
              f"{peak_n / peak_l:>7.3f}")

    if args.plot:
        try:
            import matplotlib
            matplotlib.use("Agg")
            import matplotlib.pyplot as plt
        except ImportError:
            print("matplotlib not installed; skipping the plot")
            return
        fig, axes = plt.subplots(2, 1, figsize=(9, 7), sharex=True)
        for pressure, spec in spectra[::2]:
            axes[0].plot(spec.omega, spec.alpha_lorentz, lw=0.8,
                         label=f"{pressure:.0f} atm")
            axes[1].plot(spec.omega, spec.alpha_narrowed, lw=0.8,
                         label=f"{pressure:.0f} atm")
        axes[0].set_ylabel("conventional α (1/cm)")
        axes[1].set_ylabel("narrowed α (1/cm)")
        axes[1].set_xlabel("wavenumber (1/cm)")
        for ax in axes:
            ax.legend(fontsize=8)
            ax.set_yscale("log")
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"wrote {args.plot}")


if __name__ == "__main__":
    main()
