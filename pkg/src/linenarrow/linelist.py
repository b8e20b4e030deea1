"""Fixed-width spectroscopic line-list parsing and validation.

Records follow the public 160-character layout used by the major molecular
line databases (the HITRAN-2004 format; its peers are column-compatible for
the subset consumed here). Only the columns needed for pressure-broadened
absorption are decoded; everything else is preserved verbatim so a parsed
record re-serializes byte-identically.

Column map of the consumed subset (0-based end-exclusive slices):

    ========  =======================  ======  =================================
    slice     field                    layout  unit / note
    ========  =======================  ======  =================================
    [0:2]     molecule id              I2
    [2:3]     isotopologue code        A1      1-9, '0' -> 10, 'A' -> 11, ...
    [3:15]    transition wavenumber    F12.6   cm-1
    [15:25]   line intensity           E10.3   cm-1/(molecule cm-2) at 296 K
    [25:35]   Einstein A coefficient   E10.3   preserved, not consumed
    [35:40]   foreign-gas halfwidth    F5.4    cm-1/atm at 296 K (HWHM)
    [40:45]   self-broadened halfwidth F5.4    cm-1/atm
    [45:55]   lower-state energy       F10.4   cm-1
    [55:59]   temperature exponent     F4.2    dimensionless
    [59:67]   pressure shift           F8.6    preserved, not consumed
    [67:112]  global quanta (up/low)           preserved, not consumed
    [112:127] lower-state local quanta         branch-tag heuristic only
    [127:160] error/ref codes, flags, weights  preserved, not consumed
    ========  =======================  ======  =================================

A CSV fallback is accepted for hand-made fixtures, one line per row:
``omega, intensity, gamma_foreign, gamma_self, lower_state_energy,
temp_exponent[, branch_tag]``. Files ending in ``.gz`` are transparently
decompressed in either format.
"""

from __future__ import annotations

import bisect
import gzip
import io
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Optional, Union

import numpy as np

RECORD_LENGTH = 160

# Local lower-state quanta carry the rotational assignment for linear
# molecules, e.g. "       P 16e". O/S appear for quadrupole branches.
_BRANCH_RE = re.compile(r"([OPQRS])\s{0,2}(\d{1,3})")


class BranchTag(str, Enum):
    P = "P"
    Q = "Q"
    R = "R"
    HEAD = "head"
    UNKNOWN = "unknown"


class Severity(str, Enum):
    WARNING = "warning"
    FATAL = "fatal"


@dataclass(frozen=True)
class ParseDiagnostic:
    """One validation finding for one input record."""

    record_index: int
    severity: Severity
    message: str

    def __str__(self) -> str:
        return f"record {self.record_index}: {self.severity.value}: {self.message}"

    @property
    def is_fatal(self) -> bool:
        return self.severity is Severity.FATAL


@dataclass(frozen=True)
class SpectralLine:
    """One transition: position, intensity, width coefficients, lower state.

    Attributes:
        molecule_id: database molecule number.
        isotopologue_id: decoded isotopologue ordinal (1-based).
        position: transition wavenumber, cm-1 (> 0).
        intensity_ref: line intensity at 296 K, cm-1/(molecule cm-2) (>= 0).
        gamma_foreign_ref: foreign-broadened halfwidth coefficient at 296 K,
            cm-1/atm (> 0).
        gamma_self_ref: self-broadened halfwidth coefficient, cm-1/atm.
        lower_state_energy: lower-state term value, cm-1 (>= 0).
        temp_exponent: exponent of the (296/T)^n width scaling.
        branch_tag: rotational branch when recognizable from the record.
        raw_record: the verbatim 160-char source record, when parsed from one.
    """

    molecule_id: int
    isotopologue_id: int
    position: float
    intensity_ref: float
    gamma_foreign_ref: float
    gamma_self_ref: float
    lower_state_energy: float
    temp_exponent: float
    branch_tag: BranchTag = BranchTag.UNKNOWN
    raw_record: Optional[str] = field(default=None, compare=False, repr=False)


class _FieldError(ValueError):
    pass


def _float_field(record: str, sl: slice, name: str) -> float:
    text = record[sl]
    try:
        return float(text)
    except ValueError:
        raise _FieldError(f"non-numeric {name} field {text!r}") from None


def _decode_isotopologue(ch: str) -> int:
    if ch.isdigit():
        return 10 if ch == "0" else int(ch)
    if "A" <= ch <= "Z":
        return 11 + ord(ch) - ord("A")
    raise _FieldError(f"non-numeric isotopologue field {ch!r}")


def _encode_isotopologue(iso: int) -> str:
    if 1 <= iso <= 9:
        return str(iso)
    if iso == 10:
        return "0"
    if 11 <= iso <= 36:
        return chr(ord("A") + iso - 11)
    raise ValueError(f"isotopologue id {iso} not encodable in one column")


def branch_from_local_quanta(quanta: str) -> BranchTag:
    m = _BRANCH_RE.search(quanta)
    if m is None:
        return BranchTag.UNKNOWN
    letter = m.group(1)
    if letter in ("P", "Q", "R"):
        return BranchTag(letter)
    return BranchTag.UNKNOWN


def parse_record(record: str, record_index: int = 1) -> Union[SpectralLine, ParseDiagnostic]:
    """Decode one fixed-width record; return the line or a fatal diagnostic.

    `record` may carry a trailing newline. Any malformed field needed by the
    absorption sum is fatal and the record is rejected as a whole.
    """
    body = record.rstrip("\r\n")
    if len(body) != RECORD_LENGTH:
        return ParseDiagnostic(
            record_index, Severity.FATAL, f"wrong record length ({len(body)} chars)"
        )
    try:
        molecule = int(body[0:2])
        isotopologue = _decode_isotopologue(body[2])
        position = _float_field(body, slice(3, 15), "wavenumber")
        intensity = _float_field(body, slice(15, 25), "intensity")
        gamma_foreign = _float_field(body, slice(35, 40), "foreign halfwidth")
        gamma_self = _float_field(body, slice(40, 45), "self halfwidth")
        lower_energy = _float_field(body, slice(45, 55), "lower-state energy")
        temp_exp = _float_field(body, slice(55, 59), "temperature exponent")
    except _FieldError as err:
        return ParseDiagnostic(record_index, Severity.FATAL, str(err))
    except ValueError:
        return ParseDiagnostic(
            record_index, Severity.FATAL, f"non-numeric molecule field {body[0:2]!r}"
        )

    if position <= 0.0:
        return ParseDiagnostic(record_index, Severity.FATAL, "non-positive wavenumber")
    if intensity < 0.0:
        return ParseDiagnostic(record_index, Severity.FATAL, "negative intensity")
    if gamma_foreign <= 0.0:
        return ParseDiagnostic(
            record_index, Severity.FATAL, "non-positive foreign-broadening halfwidth"
        )
    if lower_energy < 0.0:
        return ParseDiagnostic(record_index, Severity.FATAL, "negative lower-state energy")

    return SpectralLine(
        molecule_id=molecule,
        isotopologue_id=isotopologue,
        position=position,
        intensity_ref=intensity,
        gamma_foreign_ref=gamma_foreign,
        gamma_self_ref=gamma_self,
        lower_state_energy=lower_energy,
        temp_exponent=temp_exp,
        branch_tag=branch_from_local_quanta(body[112:127]),
        raw_record=body,
    )


def _format_fwidth(value: float) -> str:
    """F5.4-style halfwidth field: '.0700' below 1, fewer decimals above."""
    if value < 0:
        raise ValueError("halfwidth fields are non-negative")
    if value < 1.0:
        return ("%.4f" % value)[1:]
    if value < 10.0:
        return "%.3f" % value
    return "%5.2f" % value


def format_record(line: SpectralLine) -> str:
    """Render a canonical 160-char record from decoded fields.

    Used for synthetic lines; parsed lines keep their verbatim source (see
    serialize_record). Unconsumed columns receive neutral filler.
    """
    if line.branch_tag in (BranchTag.P, BranchTag.Q, BranchTag.R):
        local_lower = "      %s%3de    " % (line.branch_tag.value, 12)
    else:
        local_lower = " " * 15
    parts = [
        "%2d" % line.molecule_id,
        _encode_isotopologue(line.isotopologue_id),
        "%12.6f" % line.position,
        "%10.3E" % line.intensity_ref,
        "%10.3E" % 0.0,  # Einstein A, not carried
        _format_fwidth(line.gamma_foreign_ref),
        _format_fwidth(line.gamma_self_ref),
        "%10.4f" % line.lower_state_energy,
        "%4.2f" % line.temp_exponent,
        "%8.6f" % 0.0,  # pressure shift, not carried
        " " * 15,  # upper global quanta
        " " * 15,  # lower global quanta
        " " * 15,  # upper local quanta
        local_lower,
        " " * 6,  # error codes
        " " * 12,  # reference codes
        " ",  # line-mixing flag
        "%7.1f" % 0.0,
        "%7.1f" % 0.0,
    ]
    record = "".join(parts)
    if len(record) != RECORD_LENGTH:
        raise ValueError(
            f"field values do not fit the fixed-width layout ({len(record)} chars)"
        )
    return record


def serialize_record(line: SpectralLine) -> str:
    """Inverse of parse_record: byte-identical for parsed records."""
    if line.raw_record is not None:
        return line.raw_record
    return format_record(line)


def parse_csv_line(row: str, record_index: int = 1) -> Union[SpectralLine, ParseDiagnostic]:
    """Decode one CSV fallback row (see module docstring for the field order)."""
    fields = [f.strip() for f in row.strip().split(",")]
    if len(fields) < 6:
        return ParseDiagnostic(
            record_index, Severity.FATAL, f"too few fields ({len(fields)} of 6)"
        )
    try:
        position = float(fields[0])
        intensity = float(fields[1])
        gamma_foreign = float(fields[2])
        gamma_self = float(fields[3])
        lower_energy = float(fields[4])
        temp_exp = float(fields[5])
    except ValueError:
        return ParseDiagnostic(record_index, Severity.FATAL, "non-numeric field")
    branch = BranchTag.UNKNOWN
    if len(fields) >= 7 and fields[6]:
        tag = fields[6]
        try:
            branch = BranchTag(tag.upper() if len(tag) == 1 else tag.lower())
        except ValueError:
            return ParseDiagnostic(
                record_index, Severity.FATAL, f"unknown branch tag {tag!r}"
            )
    if position <= 0.0:
        return ParseDiagnostic(record_index, Severity.FATAL, "non-positive wavenumber")
    if intensity < 0.0:
        return ParseDiagnostic(record_index, Severity.FATAL, "negative intensity")
    if gamma_foreign <= 0.0:
        return ParseDiagnostic(
            record_index, Severity.FATAL, "non-positive foreign-broadening halfwidth"
        )
    if lower_energy < 0.0:
        return ParseDiagnostic(record_index, Severity.FATAL, "negative lower-state energy")
    return SpectralLine(
        molecule_id=0,
        isotopologue_id=1,
        position=position,
        intensity_ref=intensity,
        gamma_foreign_ref=gamma_foreign,
        gamma_self_ref=gamma_self,
        lower_state_energy=lower_energy,
        temp_exponent=temp_exp,
        branch_tag=branch,
    )


def _line_sort_key(line: SpectralLine):
    return (
        line.position,
        line.intensity_ref,
        line.molecule_id,
        line.isotopologue_id,
        line.lower_state_energy,
    )


@dataclass(frozen=True)
class LineTable:
    """Immutable, wavenumber-sorted collection of lines plus parse diagnostics."""

    lines: tuple = ()
    source_descriptor: str = ""
    diagnostics: tuple = ()

    def __post_init__(self):
        for prev, cur in zip(self.lines, self.lines[1:]):
            if cur.position < prev.position:
                raise ValueError("LineTable requires lines sorted by position")

    def __len__(self) -> int:
        return len(self.lines)

    def __iter__(self) -> Iterator[SpectralLine]:
        return iter(self.lines)

    def __getitem__(self, i):
        return self.lines[i]

    @cached_property
    def positions(self) -> np.ndarray:
        return np.array([line.position for line in self.lines], dtype=np.float64)

    @property
    def fatal_count(self) -> int:
        return sum(1 for d in self.diagnostics if d.is_fatal)

    def select_window(self, lo: float, hi: float) -> "LineTable":
        """Sub-table with lo <= position <= hi (binary search on the sorted table)."""
        if hi < lo:
            raise ValueError("window upper bound below lower bound")
        i0 = bisect.bisect_left(self.positions, lo)
        i1 = bisect.bisect_right(self.positions, hi)
        return replace(self, lines=self.lines[i0:i1])


def _open_source(source) -> Iterable[str]:
    if hasattr(source, "read"):
        return source
    path = Path(source)
    if path.suffix == ".gz":
        return gzip.open(path, "rt")
    return open(path, "r")


def _sniff_format(first_line: str) -> str:
    body = first_line.rstrip("\r\n")
    if len(body) == RECORD_LENGTH:
        try:
            float(body[3:15])
            return "fixed"
        except ValueError:
            pass
    return "csv"


def parse_linelist(source, window=None, fmt: Optional[str] = None) -> LineTable:
    """Parse a line-list file or stream into a sorted LineTable.

    Args:
        source: path (optionally .gz) or an open text stream of records.
        window: optional (lo, hi) wavenumber interval; well-formed lines
            outside it are dropped without diagnostic.
        fmt: "fixed", "csv", or None to sniff from the first record (a
            ".csv"/".csv.gz" path forces CSV).

    Unreadable sources raise OSError — that is a whole-table failure, not a
    per-record diagnostic. Blank lines and lines starting with '#' are
    skipped and do not advance the record index.
    """
    descriptor = "<stream>"
    if not hasattr(source, "read"):
        descriptor = str(source)
        name = descriptor[:-3] if descriptor.endswith(".gz") else descriptor
        if fmt is None and name.endswith(".csv"):
            fmt = "csv"

    lines = []
    diagnostics = []
    stream = _open_source(source)
    try:
        index = 0
        for raw in stream:
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            index += 1
            if fmt is None:
                fmt = _sniff_format(raw)
            parsed = (
                parse_record(raw, index) if fmt == "fixed" else parse_csv_line(raw, index)
            )
            if isinstance(parsed, ParseDiagnostic):
                diagnostics.append(parsed)
                continue
            if window is not None and not (window[0] <= parsed.position <= window[1]):
                continue
            lines.append(parsed)
    finally:
        if stream is not source:
            stream.close()

    lines.sort(key=_line_sort_key)
    return LineTable(
        lines=tuple(lines),
        source_descriptor=descriptor,
        diagnostics=tuple(diagnostics),
    )
