"""Throughput lookup tables over the <AA, MF> grid, one surface per MCS index.

The optimizer never evaluates a closed-form rate model: every candidate
schedule's throughput comes from a dense table keyed by (mcs, aa_percent,
mf).  Tables are normally measured offline and ingested from CSV; a
deterministic synthetic generator provides a desk-scale stand-in shaped
like measured behaviour (throughput grows with AA, and drops off at high
MF when the AA is large).  Lookups never interpolate: the search space is
the grid, and off-grid keys are an error.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    DuplicateKeyError,
    SparseTableError,
    TableLookupError,
    TableParseError,
)
from .ioutil import atomic_write_text
from .schedule import ScheduleTuple

CSV_HEADER = ("mcs", "aa_percent", "mf", "throughput_mbps")

# AA sampled every 5% in [10, 95]; MF capped where throughput deteriorates.
DEFAULT_AA_SET: tuple[float, ...] = tuple(float(v) for v in range(10, 100, 5))
DEFAULT_MF_SET: tuple[float, ...] = (
    1.0, 1.25, 1.5, 1.7, 1.9, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0,
    8.0, 10.0, 12.75, 15.0, 17.0, 20.0, 25.5, 30.0, 40.0, 51.0,
)
DEFAULT_MCS_SET: tuple[int, ...] = tuple(range(12))

# 20 MHz, single stream, 0.8us GI nominal PHY rates [Mbps].
DEFAULT_PHY_RATE_MBPS: dict[int, float] = {
    0: 8.6, 1: 17.2, 2: 25.8, 3: 34.4, 4: 51.6, 5: 68.8,
    6: 77.4, 7: 86.0, 8: 103.2, 9: 114.7, 10: 129.0, 11: 143.4,
}


@dataclass(frozen=True)
class SyntheticModelParams:
    """Knobs for the synthetic throughput surface.

    beta is the slope of the high-MF penalty, gamma the exponent coupling
    that penalty to the AA (larger gamma confines the drop-off to high AAs).
    """

    phy_rate_mbps: dict[int, float] = field(
        default_factory=lambda: dict(DEFAULT_PHY_RATE_MBPS)
    )
    beta: float = 0.01
    gamma: float = 2.0

    def __post_init__(self) -> None:
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.gamma < 1:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")
        rates = [self.phy_rate_mbps[m] for m in sorted(self.phy_rate_mbps)]
        if any(b <= a for a, b in zip(rates, rates[1:])):
            raise ValueError("phy_rate_mbps must be strictly increasing in MCS index")


@dataclass(frozen=True)
class ThroughputTable:
    """Dense throughput map over mcs_set x aa_set x mf_set."""

    mcs_set: tuple[int, ...]
    aa_set: tuple[float, ...]
    mf_set: tuple[float, ...]
    entries: dict[tuple[int, float, float], float]

    def __post_init__(self) -> None:
        expected = len(self.mcs_set) * len(self.aa_set) * len(self.mf_set)
        if not self.entries:
            raise SparseTableError("table has no entries")
        for mcs in self.mcs_set:
            for aa in self.aa_set:
                for mf in self.mf_set:
                    if (mcs, aa, mf) not in self.entries:
                        raise SparseTableError(
                            f"table is missing cell (mcs={mcs}, aa={aa}, mf={mf})"
                        )
        if len(self.entries) != expected:
            raise SparseTableError(
                f"table has {len(self.entries)} entries, expected {expected} "
                "(keys outside the declared grid)"
            )
        for key, value in self.entries.items():
            if value < 0:
                raise ValueError(f"throughput must be >= 0, got {value} at {key}")

    def lookup(self, mcs: int, aa_percent: float, mf: float) -> float:
        """Exact stored value; off-grid keys raise rather than interpolate."""
        try:
            return self.entries[(mcs, aa_percent, mf)]
        except KeyError:
            raise TableLookupError(
                f"(mcs={mcs}, aa={aa_percent}, mf={mf}) is not on the table grid"
            ) from None

    def lookup_tuple(self, mcs: int, t: ScheduleTuple) -> float:
        return self.lookup(mcs, t.aa_percent, t.mf)

    def grid_tuples(self) -> list[ScheduleTuple]:
        """All <AA, MF> tuples of the grid, ordered by (aa, mf) ascending."""
        return [ScheduleTuple(aa, mf) for aa in self.aa_set for mf in self.mf_set]


def generate_synthetic_table(
    params: SyntheticModelParams | None = None,
    aa_set: Sequence[float] = DEFAULT_AA_SET,
    mf_set: Sequence[float] = DEFAULT_MF_SET,
    mcs_set: Sequence[int] = DEFAULT_MCS_SET,
) -> ThroughputTable:
    """Deterministic stand-in surface:

    T(mcs, aa, mf) = phy_rate(mcs) * (aa/100) * max(0, 1 - beta*(mf-1)*(aa/100)**gamma)
    """
    params = params or SyntheticModelParams()
    entries: dict[tuple[int, float, float], float] = {}
    for mcs in mcs_set:
        rate = params.phy_rate_mbps[mcs]
        for aa in aa_set:
            share = aa / 100.0
            for mf in mf_set:
                penalty = max(0.0, 1.0 - params.beta * (mf - 1.0) * share**params.gamma)
                entries[(mcs, float(aa), float(mf))] = rate * share * penalty
    return ThroughputTable(
        mcs_set=tuple(sorted(mcs_set)),
        aa_set=tuple(sorted(float(a) for a in aa_set)),
        mf_set=tuple(sorted(float(m) for m in mf_set)),
        entries=entries,
    )


def _parse_rows(rows: Iterable[list[str]], source: str) -> dict[tuple[int, float, float], float]:
    entries: dict[tuple[int, float, float], float] = {}
    header_seen = False
    for lineno, row in enumerate(rows, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if not header_seen:
            if tuple(cell.strip() for cell in row) != CSV_HEADER:
                raise TableParseError(
                    f"{source}:{lineno}: expected header {','.join(CSV_HEADER)}"
                )
            header_seen = True
            continue
        if len(row) != 4:
            raise TableParseError(f"{source}:{lineno}: expected 4 columns, got {len(row)}")
        try:
            mcs = int(row[0])
            aa = float(row[1])
            mf = float(row[2])
            value = float(row[3])
        except ValueError as exc:
            raise TableParseError(f"{source}:{lineno}: {exc}") from None
        key = (mcs, aa, mf)
        if key in entries:
            raise DuplicateKeyError(f"{source}:{lineno}: duplicate cell {key}")
        if value < 0:
            raise TableParseError(f"{source}:{lineno}: negative throughput {value}")
        entries[key] = value
    if not header_seen:
        raise TableParseError(f"{source}: empty table file")
    if not entries:
        raise TableParseError(f"{source}: table file has a header but no rows")
    return entries


def load_table(path: str | Path) -> ThroughputTable:
    """Read a dense table from CSV; rejects duplicates and missing grid cells."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        entries = _parse_rows(csv.reader(fh), path.name)
    mcs_set = tuple(sorted({k[0] for k in entries}))
    aa_set = tuple(sorted({k[1] for k in entries}))
    mf_set = tuple(sorted({k[2] for k in entries}))
    return ThroughputTable(mcs_set=mcs_set, aa_set=aa_set, mf_set=mf_set, entries=entries)


def dump_table_csv(table: ThroughputTable) -> str:
    """Render a table in the CSV interchange format, rows sorted by key."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for mcs in table.mcs_set:
        for aa in table.aa_set:
            for mf in table.mf_set:
                writer.writerow([mcs, repr(aa), repr(mf), repr(table.entries[(mcs, aa, mf)])])
    return buf.getvalue()


def save_table(table: ThroughputTable, path: str | Path) -> None:
    atomic_write_text(path, dump_table_csv(table))
