import csv
import math
import random
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linenarrow.constants import AMAGAT, T_REF, torr_to_atm
from linenarrow.engine import (
    GasConditions,
    NarrowingInterval,
    SpectralGrid,
    absorption_spectrum,
    compare_to_reference,
    effective_absorption,
    gamma_factor_profile,
)
from linenarrow.halfwidth import (
    BroadenerSpec,
    HalfwidthModel,
    conventional_halfwidth,
    critical_pressure,
    saturated_halfwidth,
)
from linenarrow.linelist import LineTable, SpectralLine, parse_linelist
from linenarrow.narrowing import NarrowingParams
from linenarrow.profile import ProfileHooks, wing_factor_fermi
from linenarrow.scenario import get_scenario

DATA = Path(__file__).parent / "data"

NU3_PARAMS = NarrowingParams(core_mult=0.72, neutral_mult=1.2, wing_mult=3.92)
MODEL = HalfwidthModel(mode="saturating", line_spacing=1.2)
HE = BroadenerSpec(broadener_id="He", scale_vs_n2=0.52, partial_pressure=271.6)


def make_line(position=2349.0, intensity=3e-19, **overrides):
    fields = dict(
        molecule_id=2, isotopologue_id=1, position=position, intensity_ref=intensity,
        gamma_foreign_ref=0.07, gamma_self_ref=0.09, lower_state_energy=100.0,
        temp_exponent=0.75,
    )
    fields.update(overrides)
    return SpectralLine(**fields)


def make_table(positions, intensity=3e-19, **overrides):
    lines = tuple(make_line(p, intensity, **overrides) for p in sorted(positions))
    return LineTable(lines=lines, source_descriptor="synthetic")


def make_conditions(pressure=271.6, temperature=296.0, **overrides):
    fields = dict(
        temperature=temperature,
        absorber_density=1.63e-5,
        broadener=BroadenerSpec(broadener_id="He", scale_vs_n2=0.52, partial_pressure=pressure),
    )
    fields.update(overrides)
    return GasConditions(**fields)


# ---------------------------------------------------------------------------
# grids and conditions


def test_grid_points():
    grid = SpectralGrid(2200.0, 2500.0, 0.05)
    assert grid.n_points == 6001
    pts = grid.points()
    assert pts[0] == 2200.0
    assert pts[-1] == pytest.approx(2500.0, abs=1e-9)
    assert np.all(np.diff(pts) > 0.0)


def test_grid_validation():
    with pytest.raises(ValueError):
        SpectralGrid(2500.0, 2200.0, 0.05)
    with pytest.raises(ValueError):
        SpectralGrid(2200.0, 2500.0, 0.0)


def test_conditions_one_amount_only():
    br = BroadenerSpec(broadener_id="He", scale_vs_n2=0.52, partial_pressure=10.0)
    with pytest.raises(ValueError):
        GasConditions(temperature=296.0, broadener=br)
    with pytest.raises(ValueError):
        GasConditions(temperature=296.0, broadener=br, absorber_density=1.0,
                      absorber_pressure=1.0)


def test_absorber_number_density():
    br = BroadenerSpec(broadener_id="He", scale_vs_n2=0.52, partial_pressure=10.0)
    dens = GasConditions(temperature=296.0, broadener=br, absorber_density=1.0)
    assert dens.absorber_number_density() == AMAGAT
    pres = GasConditions(temperature=296.0, broadener=br,
                         absorber_pressure=torr_to_atm(4.2))
    assert pres.absorber_number_density() == pytest.approx(1.3701790307870418e17, rel=1e-12)


# ---------------------------------------------------------------------------
# effective absorption


def test_effective_absorption_zero_b_is_identity():
    for alpha in (0.0, 1e-20, 1e-6, 1.0, 50.0):
        assert effective_absorption(alpha, 0.0, 3.85) == alpha


def test_effective_absorption_small_alpha_limit():
    b, x = 0.1, 3.85
    limit = 0.5 / x * math.log1p(b * x)
    val = effective_absorption(1e-12, b, x)
    assert abs(val - limit) / limit < 1e-9


def test_effective_absorption_oracle():
    assert effective_absorption(1.0, 0.1, 3.85) == pytest.approx(
        1.0063335845113972, rel=1e-13
    )


def test_effective_absorption_validation():
    with pytest.raises(ValueError):
        effective_absorption(-1.0, 0.1, 3.85)
    with pytest.raises(ValueError):
        effective_absorption(1.0, -0.1, 3.85)
    with pytest.raises(ValueError):
        effective_absorption(1.0, 0.1, 0.0)


@given(
    st.floats(min_value=1e-35, max_value=1e3),
    st.floats(min_value=0.0, max_value=10.0),
    st.floats(min_value=0.01, max_value=100.0),
)
def test_effective_absorption_bounds(alpha, b, x):
    val = effective_absorption(alpha, b, x)
    assert val >= alpha  # the correction only adds
    # and the addition never exceeds the optically-thin bound ln(1+b/(2a)*2ax)/(2x)
    assert val <= alpha + 0.5 / x * math.log1p(b * x) + 1e-15


@given(st.floats(min_value=1e-30, max_value=10.0), st.floats(min_value=0.0, max_value=5.0))
def test_effective_absorption_monotone_in_b(alpha, b):
    lo = effective_absorption(alpha, b, 3.85)
    hi = effective_absorption(alpha, b + 0.1, 3.85)
    assert hi > lo or (hi == lo == alpha)


# ---------------------------------------------------------------------------
# engine vs closed forms


def test_single_line_matches_closed_form():
    # linear widths, forced sub-critical regime: both outputs are one plain
    # Lorentzian; compare against the hand-written expression
    line = make_line()
    table = LineTable(lines=(line,), source_descriptor="one")
    cond = make_conditions(pressure=50.0)
    model = HalfwidthModel(mode="linear", line_spacing=1.2)
    grid = SpectralGrid(2149.0, 2549.0, 0.04)
    spec = absorption_spectrum(
        table, cond, model, NU3_PARAMS, grid,
        cutoff=math.inf, regime="below_ps", threads=1,
    )
    assert spec.grid.n_points == 10001

    gamma = conventional_halfwidth(line, cond.broadener, cond.temperature, model)
    strength = cond.absorber_number_density() * line.intensity_ref
    d = spec.omega - line.position
    expected = strength * gamma / math.pi / (d * d + gamma * gamma)
    rel = np.abs(spec.alpha_lorentz - expected) / expected
    assert rel.max() < 1e-14
    assert np.array_equal(spec.alpha_narrowed, spec.alpha_lorentz)


def test_quadrature_recovers_line_strength():
    # trapezoid over a wide window: poles at +-i*gamma make the rule
    # spectrally accurate, so truncation dominates
    line = make_line()
    table = LineTable(lines=(line,), source_descriptor="one")
    cond = make_conditions(pressure=50.0)
    model = HalfwidthModel(mode="linear", line_spacing=1.2)
    gamma = conventional_halfwidth(line, cond.broadener, cond.temperature, model)
    half_span = 13000.0 * gamma
    grid = SpectralGrid(line.position - half_span, line.position + half_span, gamma / 4.0)
    spec = absorption_spectrum(
        table, cond, model, NU3_PARAMS, grid,
        cutoff=math.inf, regime="below_ps", threads=1,
    )
    area = np.trapezoid(spec.alpha_lorentz, spec.omega)
    expected = cond.absorber_number_density() * line.intensity_ref
    assert abs(area - expected) / expected < 1e-4


def test_narrowed_peak_up_wing_down():
    # one line far above critical pressure: sharper core, depressed far wing
    line = make_line()
    table = LineTable(lines=(line,), source_descriptor="one")
    cond = make_conditions(pressure=2.0 * 129.1978021978022)
    grid = SpectralGrid(2345.25, 2352.75, 0.0625)  # hits 2349.0 exactly
    spec = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, grid, threads=1)
    center = np.argmax(spec.alpha_narrowed)
    assert spec.omega[center] == line.position
    assert spec.alpha_narrowed[center] > spec.alpha_lorentz[center]

    far = SpectralGrid(2449.0, 2549.0, 0.5)
    spec_far = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, far, threads=1)
    assert np.all(spec_far.alpha_narrowed < spec_far.alpha_lorentz)
    # far-wing ratio approaches wing_floor * gamma_c/gamma_sat times the
    # width-swap factor, i.e. about 0.1 at large detuning
    ratio = spec_far.alpha_narrowed / spec_far.alpha_lorentz
    assert np.all(ratio > 0.09) and np.all(ratio < 0.13)


def test_below_critical_pressure_no_narrowing():
    line = make_line()
    table = LineTable(lines=(line,), source_descriptor="one")
    cond = make_conditions(pressure=30.0)  # well below ~129 atm
    grid = SpectralGrid(2340.0, 2358.0, 0.05)
    spec = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, grid, threads=1)
    gamma_prof = gamma_factor_profile(table, cond, MODEL, NU3_PARAMS, spec.omega)
    assert np.all(gamma_prof == 1.0)
    # saturating mode still bends the width slightly below the linear value,
    # so the narrowed curve is the taller of the two at the peak
    assert spec.alpha_narrowed.max() >= spec.alpha_lorentz.max()


def test_empty_reach_gives_zeros():
    table = make_table([5000.0])
    cond = make_conditions()
    grid = SpectralGrid(2200.0, 2300.0, 0.5)
    spec = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, grid, cutoff=600.0, threads=1)
    assert np.all(spec.alpha_lorentz == 0.0)
    assert np.all(spec.alpha_narrowed == 0.0)
    assert np.all(spec.alpha_effective == 0.0)
    assert spec.metadata["n_lines_in_reach"] == 0


def test_cutoff_excludes_far_lines_exactly():
    near, far = 2400.0, 3100.0
    table = make_table([near, far])
    only_near = make_table([near])
    cond = make_conditions()
    grid = SpectralGrid(2395.0, 2405.0, 0.1)
    with_far = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, grid, cutoff=600.0, threads=1)
    without = absorption_spectrum(only_near, cond, MODEL, NU3_PARAMS, grid, cutoff=600.0, threads=1)
    # the far line is more than 600 cm-1 from every grid point
    assert np.array_equal(with_far.alpha_lorentz, without.alpha_lorentz)
    wide = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, grid, cutoff=800.0, threads=1)
    assert np.all(wide.alpha_lorentz > without.alpha_lorentz)


def test_cutoff_monotone():
    table = make_table(np.arange(2300.0, 2400.0, 1.2))
    cond = make_conditions()
    grid = SpectralGrid(2340.0, 2360.0, 0.2)
    prev = None
    for cutoff in (5.0, 50.0, 600.0, math.inf):
        spec = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, grid, cutoff=cutoff, threads=1)
        if prev is not None:
            assert np.all(spec.alpha_lorentz >= prev)
        prev = spec.alpha_lorentz


def test_thread_count_never_changes_bits():
    sc = get_scenario("comb_demo")
    table = sc.line_table()
    results = []
    for threads in (1, 2, 8):
        spec = absorption_spectrum(
            table, sc.conditions, sc.halfwidth, sc.narrowing_map, sc.grid,
            cutoff=sc.cutoff, threads=threads,
        )
        results.append(spec)
    for spec in results[1:]:
        assert np.array_equal(spec.alpha_lorentz, results[0].alpha_lorentz)
        assert np.array_equal(spec.alpha_narrowed, results[0].alpha_narrowed)
        assert np.array_equal(spec.alpha_effective, results[0].alpha_effective)


def test_input_order_never_changes_bits(tmp_path):
    rng = random.Random(7)
    rows = [
        f"{2300.0 + 2.5 * k},{(1.0 + (k % 5)) * 1e-19},0.07,0.09,{10.0 * k},0.75"
        for k in range(40)
    ]
    header = "position,intensity,gamma_foreign,gamma_self,lower_energy,temp_exponent"
    sorted_file = tmp_path / "sorted.csv"
    sorted_file.write_text("\n".join([header] + rows) + "\n")
    shuffled = rows[:]
    rng.shuffle(shuffled)
    shuffled_file = tmp_path / "shuffled.csv"
    shuffled_file.write_text("\n".join([header] + shuffled) + "\n")

    cond = make_conditions()
    grid = SpectralGrid(2320.0, 2380.0, 0.1)
    spec_a = absorption_spectrum(parse_linelist(sorted_file), cond, MODEL, NU3_PARAMS, grid, threads=1)
    spec_b = absorption_spectrum(parse_linelist(shuffled_file), cond, MODEL, NU3_PARAMS, grid, threads=1)
    assert np.array_equal(spec_a.alpha_lorentz, spec_b.alpha_lorentz)
    assert np.array_equal(spec_a.alpha_narrowed, spec_b.alpha_narrowed)


def test_narrowing_map_segments_lines():
    # two widely separated lines, different core depths per interval
    table = make_table([2300.0, 2400.0])
    cond = make_conditions()
    deep = NarrowingParams(core_mult=0.72, neutral_mult=1.2, wing_mult=3.92, min_exponent=-1.0)
    shallow = NarrowingParams(core_mult=0.72, neutral_mult=1.2, wing_mult=3.92, min_exponent=-0.5)
    intervals = (
        NarrowingInterval(2250.0, 2350.0, deep),
        NarrowingInterval(2350.0, 2450.0, shallow),
    )
    omega = np.array([2300.0, 2400.0])
    factors = gamma_factor_profile(table, cond, MODEL, intervals, omega)
    assert factors[0] == 4.0  # 0.25 ** -1
    assert factors[1] == 2.0  # 0.25 ** -0.5


def test_interval_scale_override_changes_regime():
    # a small interval scale keeps its line sub-critical while the other saturates
    table = make_table([2300.0, 2400.0])
    cond = make_conditions(pressure=150.0)
    params = NU3_PARAMS
    intervals = (
        NarrowingInterval(2250.0, 2350.0, params),  # default scale 0.52: above p_s
        NarrowingInterval(2350.0, 2450.0, params, broadener_scale=0.1),  # below
    )
    omega = np.array([2300.0, 2400.0])
    factors = gamma_factor_profile(table, cond, MODEL, intervals, omega)
    assert factors[0] == 4.0
    assert factors[1] == 1.0


def test_wing_hook_damps_narrowed_only():
    table = make_table([2349.0])
    cond = make_conditions()
    grid = SpectralGrid(2250.0, 2450.0, 0.25)
    plain = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, grid, threads=1)
    hooked = absorption_spectrum(
        table, cond, MODEL, NU3_PARAMS, grid,
        hooks=ProfileHooks(wing_factor=wing_factor_fermi, slope_steps=5.0),
    )
    assert np.array_equal(hooked.alpha_lorentz, plain.alpha_lorentz)
    assert np.all(hooked.alpha_narrowed <= plain.alpha_narrowed)
    # far wing strongly damped, core essentially untouched
    far = np.abs(grid.points() - 2349.0) > 50.0
    assert np.all(hooked.alpha_narrowed[far] < 1e-3 * plain.alpha_narrowed[far])
    center = np.argmin(np.abs(grid.points() - 2349.0))
    assert hooked.alpha_narrowed[center] > 0.99 * plain.alpha_narrowed[center]


def test_nonlinear_coefficient_callable():
    table = make_table([2349.0])
    mid = 2349.0
    cond = make_conditions(
        nonlinear_coefficient=lambda w: 0.1 if w < mid else 0.0,
        path_length=3.85,
    )
    grid = SpectralGrid(2344.0, 2354.0, 0.5)
    spec = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, grid, threads=1)
    left = spec.omega < mid
    assert np.all(spec.alpha_effective[left] > spec.alpha_narrowed[left])
    assert np.array_equal(spec.alpha_effective[~left], spec.alpha_narrowed[~left])


def test_metadata_echo():
    sc = get_scenario("comb_demo")
    table = sc.line_table()
    grid = SpectralGrid(2340.0, 2360.0, 0.5)
    spec = absorption_spectrum(
        table, sc.conditions, sc.halfwidth, sc.narrowing_map, grid,
        cutoff=sc.cutoff, regime="auto", threads=1,
    )
    md = spec.metadata
    assert md["cutoff"] == 600.0
    assert md["regime"] == "auto"
    assert md["halfwidth_mode"] == "saturating"
    assert md["gamma_sat"] == pytest.approx(4.7028)
    assert md["n_lines_in_reach"] == 41
    assert md["broadener_pressure_atm"] == 271.6


def test_compare_to_reference_identical_grid():
    table = make_table([2349.0])
    cond = make_conditions()
    grid = SpectralGrid(2340.0, 2358.0, 0.1)
    a = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, grid, threads=1)
    report = compare_to_reference(a, a)
    assert report.max_abs_rel_dev == 0.0
    assert np.all(report.ratio == 1.0)


def test_compare_to_reference_interpolates():
    table = make_table([2349.0])
    cond = make_conditions()
    a = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, SpectralGrid(2340.0, 2358.0, 0.1), threads=1)
    b = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, SpectralGrid(2344.0, 2354.0, 0.05), threads=1)
    smooth = compare_to_reference(b, a, field="alpha_lorentz")
    assert smooth.omega[0] >= 2344.0 and smooth.omega[-1] <= 2354.0
    assert smooth.max_abs_rel_dev < 1e-3  # interpolation error only
    # the narrowed curve has slope kinks at the region seams, so linear
    # interpolation across them is an order louder
    kinked = compare_to_reference(b, a, field="alpha_narrowed")
    assert kinked.max_abs_rel_dev < 1e-2
    with pytest.raises(ValueError):
        compare_to_reference(
            b, (np.array([100.0, 200.0]), np.array([1.0, 2.0]))
        )


def test_gamma_factor_profile_morphology():
    sc = get_scenario("comb_demo")
    table = sc.line_table()
    centers = np.array([l.position for l in table])
    factors = gamma_factor_profile(
        table, sc.conditions, sc.halfwidth, sc.narrowing_map, centers
    )
    assert np.all(factors == 4.0)
    far = np.array([2325.0 - 30.0, 2373.0 + 30.0])
    wing = gamma_factor_profile(table, sc.conditions, sc.halfwidth, sc.narrowing_map, far)
    gc = conventional_halfwidth(table[0], sc.conditions.broadener,
                                sc.conditions.temperature, sc.halfwidth)
    expected = 0.1 * gc / saturated_halfwidth(sc.halfwidth)
    assert wing == pytest.approx([expected, expected], rel=1e-12)


def test_snapshot_regression():
    """Frozen comb spectrum; regenerate via scripts/regenerate_test_data.py
    only after an intentional numerical change."""
    sc = get_scenario("comb_demo")
    table = sc.line_table()
    grid = SpectralGrid(2330.0, 2370.0, 0.02)
    spec = absorption_spectrum(
        table, sc.conditions, sc.halfwidth, sc.narrowing_map, grid,
        cutoff=sc.cutoff, regime="auto", threads=1,
    )
    with open(DATA / "comb_snapshot.csv") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        frozen = np.array([[float(v) for v in row] for row in reader])
    assert header == ["omega", "alpha_lorentz", "alpha_narrowed", "alpha_effective"]
    assert frozen.shape[0] == spec.grid.n_points
    np.testing.assert_allclose(spec.omega, frozen[:, 0], rtol=0.0, atol=1e-12)
    np.testing.assert_allclose(spec.alpha_lorentz, frozen[:, 1], rtol=1e-12, atol=0.0)
    np.testing.assert_allclose(spec.alpha_narrowed, frozen[:, 2], rtol=1e-12, atol=0.0)
    np.testing.assert_allclose(spec.alpha_effective, frozen[:, 3], rtol=1e-12, atol=0.0)


def test_regime_forcing():
    table = make_table([2349.0])
    cond = make_conditions(pressure=271.6)  # naturally above p_s
    grid = SpectralGrid(2345.25, 2352.75, 0.0625)
    omega = grid.points()
    assert np.all(
        gamma_factor_profile(table, cond, MODEL, NU3_PARAMS, omega, regime="auto") > 1.0
    )
    assert np.all(
        gamma_factor_profile(table, cond, MODEL, NU3_PARAMS, omega, regime="below_ps") == 1.0
    )
    # with the factor forced off, the peak drops back to a plain Lorentzian level
    auto = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, grid, regime="auto", threads=1)
    off = absorption_spectrum(table, cond, MODEL, NU3_PARAMS, grid, regime="below_ps", threads=1)
    center = np.argmin(np.abs(omega - 2349.0))
    assert off.alpha_narrowed[center] < auto.alpha_narrowed[center]
    with pytest.raises(ValueError):
        absorption_spectrum(table, cond, MODEL, NU3_PARAMS, grid, regime="sideways")
