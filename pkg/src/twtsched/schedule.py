"""Standard-compliant TWT schedule values: quantization, encoding, validation.

A TWT schedule is a <waketime, sleeptime, offset> triplet in microseconds.
Waketimes are multiples of 256us and capped at 65280us; sleeptimes must be
exactly expressible as mantissa * 2**exponent with a 16-bit mantissa and a
5-bit exponent.  The <aa_percent, mf> pair (active-airtime percentage and
wake multiplication factor) identifies a schedule shape up to its offset:
the MF fixes the waketime as a fraction of the cap, the AA then fixes the
sleeptime.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import QuantizationError, ScheduleError

WT_MAX_US = 65280        # largest allowed waketime [us]
WT_QUANTUM_US = 256      # waketimes are multiples of this [us]
MANTISSA_MAX = 65535
EXPONENT_MAX = 31
AA_TOLERANCE_PP = 1.0    # allowed drift between requested and achieved AA [pp]


@dataclass(frozen=True)
class TwtSchedule:
    """One client's wake pattern, all fields in microseconds."""

    waketime_us: int
    sleeptime_us: int
    offset_us: int = 0

    @property
    def cycle_us(self) -> int:
        return self.waketime_us + self.sleeptime_us


@dataclass(frozen=True)
class ScheduleTuple:
    """The <AA, MF> pair identifying a schedule shape (offset excluded)."""

    aa_percent: float
    mf: float


@dataclass(frozen=True)
class WakeIntervalEncoding:
    """Mantissa/exponent representation of a sleeptime."""

    mantissa: int
    exponent: int

    @property
    def value_us(self) -> int:
        return self.mantissa << self.exponent


def aa_of(schedule: TwtSchedule) -> float:
    """Active airtime of a schedule as a percentage of its cycle."""
    total = schedule.waketime_us + schedule.sleeptime_us
    if total <= 0:
        raise ScheduleError("degenerate schedule: waketime + sleeptime must be positive")
    return 100.0 * schedule.waketime_us / total


def wt_from_mf(mf: float) -> int:
    """Waketime for a multiplication factor.

    WT_max / mf rounded to the nearest 256us multiple and clamped to
    [256, 65280].  Ties round half-to-even.
    """
    if not 1.0 <= mf <= 255.0:
        raise ValueError(f"mf must be in [1, 255], got {mf}")
    quanta = round(WT_MAX_US / mf / WT_QUANTUM_US)
    return min(max(quanta * WT_QUANTUM_US, WT_QUANTUM_US), WT_MAX_US)


def encode_wake_interval(st_us: int) -> WakeIntervalEncoding:
    """Mantissa/exponent encoding of a sleeptime, minimizing the exponent.

    Picks the smallest exponent whose rounded mantissa fits 16 bits; the
    decoded value then differs from st_us by at most 2**(exponent - 1).
    """
    if st_us < 1:
        raise QuantizationError(f"sleeptime of {st_us}us cannot be encoded (mantissa >= 1)")
    for exponent in range(EXPONENT_MAX + 1):
        if exponent == 0:
            mantissa = st_us
        else:
            mantissa = (st_us + (1 << (exponent - 1))) >> exponent
        if mantissa <= MANTISSA_MAX:
            return WakeIntervalEncoding(mantissa, exponent)
    raise QuantizationError(f"sleeptime {st_us}us exceeds the encodable range")


def is_encodable_sleeptime(st_us: int) -> bool:
    """True when st_us equals some mantissa * 2**exponent exactly."""
    if st_us < 1:
        return False
    trailing_zeros = (st_us & -st_us).bit_length() - 1
    return (st_us >> min(trailing_zeros, EXPONENT_MAX)) <= MANTISSA_MAX


def schedule_from_tuple(t: ScheduleTuple) -> TwtSchedule:
    """Materialize the canonical zero-offset schedule for an <AA, MF> tuple.

    The sleeptime is rounded to the nearest exactly-encodable value; the
    achieved AA must stay within 1 percentage point of the request.
    """
    if not 0.0 < t.aa_percent <= 100.0:
        raise ValueError(f"aa_percent must be in (0, 100], got {t.aa_percent}")
    wt = wt_from_mf(t.mf)
    raw_st = wt * (100.0 - t.aa_percent) / t.aa_percent
    st = round(raw_st)
    if st < 1:
        # covers aa == 100: a zero sleeptime has no mantissa encoding
        raise QuantizationError(
            f"aa={t.aa_percent}% at mf={t.mf} needs a sleeptime of {raw_st:.2f}us, "
            "which the wake-interval encoding cannot express"
        )
    st = encode_wake_interval(st).value_us
    achieved = 100.0 * wt / (wt + st)
    if abs(achieved - t.aa_percent) > AA_TOLERANCE_PP:
        raise QuantizationError(
            f"aa={t.aa_percent}% at mf={t.mf} quantizes to {achieved:.3f}%, "
            f"more than {AA_TOLERANCE_PP} pp away"
        )
    return TwtSchedule(waketime_us=wt, sleeptime_us=st, offset_us=0)


def validate_schedule(s: TwtSchedule) -> list[str]:
    """Check a schedule against the standard's field constraints; [] means valid."""
    problems: list[str] = []
    if s.waketime_us % WT_QUANTUM_US != 0:
        problems.append(f"waketime {s.waketime_us}us is not a multiple of {WT_QUANTUM_US}us")
    if s.waketime_us < WT_QUANTUM_US:
        problems.append(f"waketime {s.waketime_us}us is below the minimum of {WT_QUANTUM_US}us")
    if s.waketime_us > WT_MAX_US:
        problems.append(f"waketime {s.waketime_us}us exceeds the maximum of {WT_MAX_US}us")
    if s.sleeptime_us < 0:
        problems.append(f"sleeptime {s.sleeptime_us}us is negative")
    elif not is_encodable_sleeptime(s.sleeptime_us):
        problems.append(
            f"sleeptime {s.sleeptime_us}us is not expressible as mantissa * 2**exponent"
        )
    if s.offset_us < 0:
        problems.append(f"offset {s.offset_us}us is negative")
    return problems
