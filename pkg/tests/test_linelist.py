import gzip

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linenarrow.linelist import (
    RECORD_LENGTH,
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


def make_line(**overrides):
    fields = dict(
        molecule_id=2,
        isotopologue_id=1,
        position=2349.123456,
        intensity_ref=3.123e-19,
        gamma_foreign_ref=0.07,
        gamma_self_ref=0.09,
        lower_state_energy=245.5,
        temp_exponent=0.75,
    )
    fields.update(overrides)
    return SpectralLine(**fields)


# Field values snapped to the precision each fixed-width column can carry,
# so formatting is idempotent after one round trip.
def snapped_lines():
    return st.builds(
        make_line,
        molecule_id=st.integers(1, 99),
        isotopologue_id=st.integers(1, 36),
        position=st.integers(1, 99_999_999_999).map(lambda k: k / 1e6),
        intensity_ref=st.tuples(
            st.integers(1000, 9999), st.integers(-40, -15)
        ).map(lambda t: float(f"{t[0] / 1000:.3f}E{t[1]}")),
        gamma_foreign_ref=st.integers(1, 9_999).map(lambda k: k / 1e4),
        gamma_self_ref=st.integers(0, 9_999).map(lambda k: k / 1e4),
        lower_state_energy=st.integers(0, 999_999_999).map(lambda k: k / 1e4),
        temp_exponent=st.integers(0, 999).map(lambda k: k / 100),
    )


def test_parse_known_record():
    rec = format_record(make_line())
    assert len(rec) == RECORD_LENGTH
    line = parse_record(rec)
    assert isinstance(line, SpectralLine)
    assert line.molecule_id == 2
    assert line.isotopologue_id == 1
    assert line.position == pytest.approx(2349.123456, abs=1e-9)
    assert line.intensity_ref == pytest.approx(3.123e-19, rel=1e-12)
    assert line.gamma_foreign_ref == pytest.approx(0.07)
    assert line.lower_state_energy == pytest.approx(245.5)
    assert line.temp_exponent == pytest.approx(0.75)
    assert line.raw_record == rec


def test_serialize_prefers_raw_record():
    # A record with unusual-but-valid spacing must survive byte-for-byte.
    rec = format_record(make_line())
    modified = rec[:128] + "XYZ unusual junk" + rec[144:]
    assert len(modified) == RECORD_LENGTH
    line = parse_record(modified)
    assert isinstance(line, SpectralLine)
    assert serialize_record(line) == modified


@given(snapped_lines())
@settings(max_examples=200)
def test_format_parse_round_trip(line):
    rec = format_record(line)
    assert len(rec) == RECORD_LENGTH
    parsed = parse_record(rec)
    assert isinstance(parsed, SpectralLine), parsed
    # value equality (raw_record is excluded from comparison)
    assert parsed == line
    # byte stability
    assert serialize_record(parsed) == rec
    assert format_record(parsed) == rec


@pytest.mark.parametrize("iso_char,iso_id", [("1", 1), ("9", 9), ("0", 10), ("A", 11), ("Z", 36)])
def test_isotopologue_char_mapping(iso_char, iso_id):
    rec = format_record(make_line(isotopologue_id=iso_id))
    assert rec[2] == iso_char
    parsed = parse_record(rec)
    assert parsed.isotopologue_id == iso_id


@pytest.mark.parametrize(
    "quanta,expected",
    [
        ("      P 12e    ", BranchTag.P),
        ("      R  2f    ", BranchTag.R),
        ("      Q  5     ", BranchTag.Q),
        ("               ", BranchTag.UNKNOWN),
    ],
)
def test_branch_tag_from_quanta(quanta, expected):
    rec = format_record(make_line())
    assert len(quanta) == 15
    rec = rec[:112] + quanta + rec[127:]
    parsed = parse_record(rec)
    assert parsed.branch_tag == expected


def _corrupt(rec, what):
    if what == "short":
        return rec[:-1]
    if what == "long":
        return rec + " "
    if what == "position_text":
        return rec[:3] + "  abc.defghi" + rec[15:]
    if what == "position_zero":
        return rec[:3] + "    0.000000" + rec[15:]
    if what == "negative_intensity":
        return rec[:15] + "-1.000E-19" + rec[25:]
    if what == "gamma_zero":
        return rec[:35] + ".0000" + rec[40:]
    if what == "negative_energy":
        return rec[:45] + "  -10.0000" + rec[55:]
    raise AssertionError(what)


@pytest.mark.parametrize(
    "what",
    ["short", "long", "position_text", "position_zero", "negative_intensity",
     "gamma_zero", "negative_energy"],
)
def test_fatal_diagnostics(what):
    rec = format_record(make_line())
    result = parse_record(_corrupt(rec, what), record_index=7)
    assert isinstance(result, ParseDiagnostic)
    assert result.severity is Severity.FATAL
    assert result.record_index == 7
    assert "record 7" in str(result)


def test_csv_line_parsing():
    line = parse_csv_line("2349.5,3e-19,0.07,0.09,100.0,0.75,P")
    assert isinstance(line, SpectralLine)
    assert line.position == 2349.5
    assert line.branch_tag == BranchTag.P
    head = parse_csv_line("700.0,1e-20,0.06,0.08,0.0,0.5,head")
    assert head.branch_tag == BranchTag.HEAD
    bad = parse_csv_line("oops,3e-19,0.07,0.09,100.0,0.75", record_index=3)
    assert isinstance(bad, ParseDiagnostic) and bad.is_fatal
    short = parse_csv_line("2349.5,3e-19", record_index=4)
    assert isinstance(short, ParseDiagnostic) and short.is_fatal


def _write_par(path, lines, extra_text=()):
    recs = [format_record(l) for l in lines]
    body = list(extra_text) + recs
    path.write_text("\n".join(body) + "\n")
    return recs


def test_parse_linelist_sorts_and_reports(tmp_path):
    lines = [make_line(position=p) for p in (2360.0, 2340.0, 2350.0)]
    p = tmp_path / "sample.par"
    recs = _write_par(p, lines, extra_text=["# comment header", ""])
    # append one broken record
    with open(p, "a") as fh:
        fh.write(recs[0][:-1] + "\n")
    table = parse_linelist(p)
    assert len(table) == 3
    assert [l.position for l in table] == [2340.0, 2350.0, 2360.0]
    assert table.fatal_count == 1
    assert table.diagnostics[0].record_index == 4  # comments/blanks not counted


def test_parse_linelist_window(tmp_path):
    lines = [make_line(position=p) for p in (2300.0, 2345.0, 2355.0, 2400.0)]
    p = tmp_path / "sample.par"
    _write_par(p, lines)
    table = parse_linelist(p, window=(2345.0, 2355.0))
    assert [l.position for l in table] == [2345.0, 2355.0]  # inclusive bounds


def test_parse_linelist_gzip(tmp_path):
    lines = [make_line(position=p) for p in (2340.0, 2350.0)]
    recs = [format_record(l) for l in lines]
    p = tmp_path / "sample.par.gz"
    with gzip.open(p, "wt") as fh:
        fh.write("\n".join(recs) + "\n")
    table = parse_linelist(p)
    assert len(table) == 2
    assert table[0].raw_record == recs[0]


def test_parse_linelist_csv(tmp_path):
    p = tmp_path / "lines.csv"
    p.write_text(
        "position,intensity,gamma_foreign,gamma_self,lower_energy,temp_exponent\n"
        "2350.0,3e-19,0.07,0.09,100.0,0.75\n"
        "2340.0,1e-19,0.06,0.08,50.0,0.70\n"
    )
    table = parse_linelist(p)
    assert [l.position for l in table] == [2340.0, 2350.0]


def test_parse_linelist_missing_file(tmp_path):
    with pytest.raises(OSError):
        parse_linelist(tmp_path / "absent.par")


def test_linetable_requires_sorted():
    a, b = make_line(position=2350.0), make_line(position=2340.0)
    with pytest.raises(ValueError):
        LineTable(lines=(a, b), source_descriptor="x")


def test_linetable_select_window():
    lines = tuple(make_line(position=2300.0 + 10.0 * k) for k in range(11))
    table = LineTable(lines=lines, source_descriptor="x")
    sub = table.select_window(2325.0, 2355.0)
    assert [l.position for l in sub] == [2330.0, 2340.0, 2350.0]
