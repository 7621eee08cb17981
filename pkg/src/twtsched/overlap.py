"""Wake-interval expansion and exact contention-loss accounting.

Schedules are replayed over a fixed horizon (1 s by default) as half-open
wake intervals.  Wherever two or more clients are awake at once, the one
with the lowest MCS index transmits (ties go to the lowest client id) and
every other awake client loses airtime at its per-wake-microsecond rate
r_i = unimpaired_i / (its scheduled wake time in the horizon).  That makes
a fully-shadowed schedule lose its whole rate, which is the intended lower
bound on contended throughput.

The computation is an exact boundary sweep in integer microseconds: the
horizon is partitioned at every interval start/end, coverage is constant
inside each segment, and each covered segment is charged to exactly one
winner.  It therefore handles any number of mutually overlapping clients
without double counting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import ScheduleError
from .schedule import ScheduleTuple, TwtSchedule
from .throughput import ThroughputTable

HORIZON_US = 1_000_000  # one second [us]

_NO_WINNER = np.int64(1) << 62


@dataclass(frozen=True)
class WakeInterval:
    """One wake window of one client, half-open [start_us, end_us)."""

    start_us: int
    end_us: int
    client_id: Any
    mcs: int


@dataclass(frozen=True)
class OverlapLossReport:
    """Per-client contention accounting over one horizon."""

    per_client_loss_mbps: dict[Any, float]
    effective_throughput_mbps: dict[Any, float]
    total_overlap_us: int
    won_airtime_us: dict[Any, int]
    lost_airtime_us: dict[Any, int]
    wake_airtime_us: dict[Any, int]
    idle_us: int
    horizon_us: int


def _expand_arrays(
    wt: int, st: int, offset: int, horizon_us: int, truncate: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Start/end arrays of one schedule's wake intervals within the horizon."""
    cycle = wt + st
    if offset >= horizon_us:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    count = 1 + (horizon_us - 1 - offset) // cycle  # starts strictly inside horizon
    starts = offset + cycle * np.arange(count, dtype=np.int64)
    ends = starts + wt
    if truncate:
        ends = np.minimum(ends, horizon_us)
    else:
        keep = ends <= horizon_us
        starts, ends = starts[keep], ends[keep]
    return starts, ends


def expand_intervals(
    schedules: Iterable[tuple[Hashable, int, TwtSchedule]],
    horizon_us: int = HORIZON_US,
    truncate: bool = True,
) -> list[WakeInterval]:
    """Expand (client_id, mcs, schedule) records into sorted wake intervals.

    With truncate=True (default) an interval crossing the horizon is clipped
    at the horizon; with truncate=False it is dropped entirely.
    """
    out: list[WakeInterval] = []
    for client_id, mcs, sched in schedules:
        if sched.waketime_us <= 0 or sched.sleeptime_us <= 0:
            raise ScheduleError(
                f"client {client_id}: waketime and sleeptime must both be nonzero"
            )
        if sched.offset_us < 0:
            raise ScheduleError(f"client {client_id}: negative offset")
        starts, ends = _expand_arrays(
            sched.waketime_us, sched.sleeptime_us, sched.offset_us, horizon_us, truncate
        )
        out.extend(
            WakeInterval(int(s), int(e), client_id, mcs) for s, e in zip(starts, ends)
        )
    out.sort(key=lambda iv: (iv.start_us, _sort_key(iv.client_id)))
    return out


def _sort_key(client_id: Any) -> tuple:
    # Stable ordering for ids of mixed renderable types (ints, strings).
    return (str(type(client_id).__name__), client_id)


@dataclass(frozen=True)
class _ClientShare:
    wake_us: int
    won_us: int
    lost_us: int


def _winner_shares(
    clients: Sequence[tuple[np.ndarray, np.ndarray, int]],
    horizon_us: int,
) -> tuple[list[_ClientShare], int, int]:
    """Sweep the horizon once and split airtime by the lowest-(mcs, rank) rule.

    clients holds (starts, ends, winner_key) per client, intervals sorted by
    start and non-overlapping within a client.  Returns per-client shares,
    the total time covered by >= 2 clients, and the idle time.
    """
    all_bounds = [c[0] for c in clients] + [c[1] for c in clients]
    bounds = np.unique(np.concatenate(all_bounds)) if all_bounds else np.empty(0, np.int64)
    if bounds.size < 2:
        shares = [_ClientShare(0, 0, 0) for _ in clients]
        return shares, 0, horizon_us

    seg_start = bounds[:-1]
    seg_len = np.diff(bounds)
    covered_masks: list[np.ndarray] = []
    winner = np.full(seg_start.shape, _NO_WINNER, dtype=np.int64)
    coverage = np.zeros(seg_start.shape, dtype=np.int64)
    for starts, ends, key in clients:
        if starts.size == 0:
            covered_masks.append(np.zeros(seg_start.shape, dtype=bool))
            continue
        idx = np.searchsorted(starts, seg_start, side="right") - 1
        safe = np.maximum(idx, 0)
        covered = (idx >= 0) & (seg_start < ends[safe])
        covered_masks.append(covered)
        coverage += covered
        winner = np.where(covered & (key < winner), np.int64(key), winner)

    shares: list[_ClientShare] = []
    for (starts, ends, key), covered in zip(clients, covered_masks):
        wake = int((ends - starts).sum())
        won = int(seg_len[covered & (winner == key)].sum())
        shares.append(_ClientShare(wake_us=wake, won_us=won, lost_us=wake - won))
    total_overlap = int(seg_len[coverage >= 2].sum())
    idle = horizon_us - int(seg_len[coverage >= 1].sum())
    return shares, total_overlap, idle


def overlap_loss(
    intervals: Sequence[WakeInterval],
    unimpaired: Mapping[Any, float],
    horizon_us: int = HORIZON_US,
) -> OverlapLossReport:
    """Throughput loss of each client under the lowest-MCS-wins rule.

    Every client in `unimpaired` must own at least one interval (a client
    with zero scheduled wake time has no per-microsecond rate).
    """
    ids = sorted(unimpaired, key=_sort_key)
    rank = {cid: i for i, cid in enumerate(ids)}
    per_client: dict[Any, tuple[list[int], list[int], int]] = {
        cid: ([], [], -1) for cid in ids
    }
    for iv in intervals:
        if iv.client_id not in per_client:
            raise ScheduleError(f"interval for unknown client {iv.client_id!r}")
        if not 0 <= iv.start_us < iv.end_us <= horizon_us:
            raise ScheduleError(f"interval {iv} outside [0, {horizon_us})")
        starts, ends, _ = per_client[iv.client_id]
        starts.append(iv.start_us)
        ends.append(iv.end_us)
        per_client[iv.client_id] = (starts, ends, iv.mcs)

    packed = []
    for cid in ids:
        starts, ends, mcs = per_client[cid]
        if not starts:
            raise ScheduleError(f"client {cid!r} has zero scheduled wake time")
        order = np.argsort(np.asarray(starts, dtype=np.int64), kind="stable")
        s = np.asarray(starts, dtype=np.int64)[order]
        e = np.asarray(ends, dtype=np.int64)[order]
        key = (mcs << 20) | rank[cid]
        packed.append((s, e, key))

    shares, total_overlap, idle = _winner_shares(packed, horizon_us)
    loss: dict[Any, float] = {}
    effective: dict[Any, float] = {}
    won_us: dict[Any, int] = {}
    lost_us: dict[Any, int] = {}
    wake_us: dict[Any, int] = {}
    for cid, share in zip(ids, shares):
        rate = unimpaired[cid] / share.wake_us  # [Mbps per wake-us]
        client_loss = share.lost_us * rate
        loss[cid] = client_loss
        effective[cid] = max(0.0, unimpaired[cid] - client_loss)
        won_us[cid] = share.won_us
        lost_us[cid] = share.lost_us
        wake_us[cid] = share.wake_us
    return OverlapLossReport(
        per_client_loss_mbps=loss,
        effective_throughput_mbps=effective,
        total_overlap_us=total_overlap,
        won_airtime_us=won_us,
        lost_airtime_us=lost_us,
        wake_airtime_us=wake_us,
        idle_us=idle,
        horizon_us=horizon_us,
    )


def effective_throughputs(
    entries: Iterable[tuple[Hashable, int, ScheduleTuple, TwtSchedule]],
    table: ThroughputTable,
    horizon_us: int = HORIZON_US,
    truncate: bool = True,
) -> OverlapLossReport:
    """Look up unimpaired rates, expand schedules, and charge overlap losses."""
    entries = list(entries)
    unimpaired = {
        cid: table.lookup_tuple(mcs, tup) for cid, mcs, tup, _ in entries
    }
    intervals = expand_intervals(
        ((cid, mcs, sched) for cid, mcs, _, sched in entries),
        horizon_us=horizon_us,
        truncate=truncate,
    )
    return overlap_loss(intervals, unimpaired, horizon_us=horizon_us)
