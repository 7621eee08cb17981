"""Deterministic airtime replays and a slotted CSMA/CA (DCF) baseline.

Two independent engines live here.  The TWT replay walks the horizon on a
1 us grid and applies the same lowest-MCS-wins rule as the analytical
overlap engine, giving an oracle the sweep must agree with exactly.  The
DCF engine is a seeded slotted simulation of saturated stations: uniform
backoff in [0, CW], countdown on idle slots only, freeze while the medium
is busy, collision on simultaneous zero counters with binary exponential
growth of CW.  A masked variant lets legacy stations contend only in the
gaps a TWT schedule leaves free, which is how mixed TWT/CSMA systems are
compared.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Sequence

import numpy as np

from .errors import ConfigurationError, ScheduleError
from .overlap import _expand_arrays
from .schedule import ScheduleTuple, TwtSchedule
from .throughput import ThroughputTable

_CHUNK_US = 1_000_000
_NO_WINNER = np.int64(1) << 62

DEFAULT_PAYLOAD_BITS = 262_144  # one aggregated exchange carries 32 KiB
DEFAULT_ACK_US = 44             # legacy-rate block ACK [us]


@dataclass(frozen=True)
class DcfParams:
    """Slotted DCF timing and backoff parameters (802.11 OFDM conventions)."""

    frame_airtime_us: dict[int, int]      # MCS -> one full frame exchange incl. ACK [us]
    slot_us: int = 9
    difs_us: int = 34
    sifs_us: int = 16
    cw_min: int = 15
    cw_max: int = 1023
    payload_bits: int = DEFAULT_PAYLOAD_BITS  # delivered per successful exchange
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.cw_min > self.cw_max:
            raise ValueError(f"cw_min {self.cw_min} exceeds cw_max {self.cw_max}")
        if self.cw_min < 0:
            raise ValueError("cw_min must be >= 0")
        for name in ("slot_us", "difs_us", "sifs_us", "payload_bits"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for mcs, airtime in self.frame_airtime_us.items():
            if airtime <= 0:
                raise ValueError(f"frame airtime for MCS {mcs} must be positive")

    @classmethod
    def from_table(
        cls,
        table: ThroughputTable,
        *,
        payload_bits: int = DEFAULT_PAYLOAD_BITS,
        ack_us: int = DEFAULT_ACK_US,
        rng_seed: int = 0,
        **kwargs,
    ) -> "DcfParams":
        """Derive per-MCS frame airtimes from the table's best-case efficiency.

        Uses the lowest-MF, highest-AA cell: throughput there divided by the
        AA share is the per-airtime rate, which sizes one aggregated exchange.
        """
        aa = max(table.aa_set)
        mf = min(table.mf_set)
        frames: dict[int, int] = {}
        sifs = kwargs.get("sifs_us", 16)
        for mcs in table.mcs_set:
            per_airtime = table.lookup(mcs, aa, mf) / (aa / 100.0)  # [Mbps of airtime]
            if per_airtime <= 0:
                raise ConfigurationError(f"table gives zero airtime rate for MCS {mcs}")
            frames[mcs] = round(payload_bits / per_airtime) + sifs + ack_us
        return cls(frame_airtime_us=frames, payload_bits=payload_bits,
                   rng_seed=rng_seed, **kwargs)


@dataclass(frozen=True)
class ClientSim:
    """Per-client outcome of one simulation run."""

    airtime_us: int
    throughput_mbps: float
    collisions: int
    wins: int
    drawn_slots: int = 0
    counted_slots: int = 0
    pending_slots: int = 0


@dataclass(frozen=True)
class SimResult:
    per_client: dict[Any, ClientSim]
    idle_us: int
    collision_us: int
    horizon_us: int
    seed: int | None = None

    def airtime_total_us(self) -> int:
        return sum(c.airtime_us for c in self.per_client.values())


def simulate_twt(
    entries: Iterable[tuple[Hashable, int, ScheduleTuple, TwtSchedule]],
    table: ThroughputTable,
    horizon_us: int = 1_000_000,
) -> SimResult:
    """Microsecond-grid replay of TWT schedules under lowest-MCS-wins.

    Independent of the analytical sweep: awake sets are evaluated per
    microsecond straight from the schedule arithmetic.
    """
    entries = list(entries)
    if not entries:
        raise ValueError("no schedules to replay")
    ids = [e[0] for e in entries]
    if len(set(ids)) != len(ids):
        raise ValueError("client ids must be unique")
    order = sorted(range(len(entries)), key=lambda i: _id_key(ids[i]))
    for cid, mcs, tup, sched in entries:
        if sched.waketime_us <= 0 or sched.sleeptime_us <= 0:
            raise ScheduleError(f"client {cid}: degenerate schedule")
        if sched.cycle_us > horizon_us:
            raise ValueError(
                f"horizon {horizon_us}us is shorter than client {cid}'s cycle "
                f"{sched.cycle_us}us"
            )

    unimpaired = {cid: table.lookup_tuple(mcs, tup) for cid, mcs, tup, _ in entries}
    keys = {}
    for rank, idx in enumerate(order):
        cid, mcs, _, _ = entries[idx]
        keys[cid] = np.int64((mcs << 20) | rank)

    wake_us = {cid: 0 for cid in ids}
    won_us = {cid: 0 for cid in ids}
    won_cycles: dict[Any, set[int]] = {cid: set() for cid in ids}
    contested_cycles: dict[Any, set[int]] = {cid: set() for cid in ids}

    for chunk_start in range(0, horizon_us, _CHUNK_US):
        chunk_end = min(chunk_start + _CHUNK_US, horizon_us)
        t = np.arange(chunk_start, chunk_end, dtype=np.int64)
        winner = np.full(t.shape, _NO_WINNER, dtype=np.int64)
        awake_masks = {}
        cycle_index = {}
        for cid, mcs, tup, sched in entries:
            rel = t - sched.offset_us
            awake = (rel >= 0) & (rel % sched.cycle_us < sched.waketime_us)
            awake_masks[cid] = awake
            cycle_index[cid] = rel // sched.cycle_us
            winner = np.where(awake & (keys[cid] < winner), keys[cid], winner)
        for cid, _, _, _ in entries:
            awake = awake_masks[cid]
            won = awake & (winner == keys[cid])
            lost = awake & ~won
            wake_us[cid] += int(awake.sum())
            won_us[cid] += int(won.sum())
            won_cycles[cid].update(np.unique(cycle_index[cid][won]).tolist())
            contested_cycles[cid].update(np.unique(cycle_index[cid][lost]).tolist())

    per_client: dict[Any, ClientSim] = {}
    total_won = 0
    for cid in ids:
        if wake_us[cid] == 0:
            raise ScheduleError(f"client {cid} never wakes within the horizon")
        throughput = unimpaired[cid] * won_us[cid] / wake_us[cid]
        per_client[cid] = ClientSim(
            airtime_us=won_us[cid],
            throughput_mbps=throughput,
            collisions=len(contested_cycles[cid]),
            wins=len(won_cycles[cid]),
        )
        total_won += won_us[cid]
    return SimResult(
        per_client=per_client,
        idle_us=horizon_us - total_won,
        collision_us=0,
        horizon_us=horizon_us,
    )


def _id_key(cid: Any) -> tuple:
    return (str(type(cid).__name__), cid)


@dataclass
class _Station:
    cid: Any
    mcs: int
    frame_us: int
    cw: int
    backoff: int = 0
    wins: int = 0
    collisions: int = 0
    drawn: int = 0
    counted: int = 0


def _merged_busy(intervals: Sequence[tuple[int, int]], horizon_us: int) -> list[tuple[int, int]]:
    merged: list[tuple[int, int]] = []
    for start, end in sorted(intervals):
        start, end = max(0, start), min(end, horizon_us)
        if start >= end:
            continue
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def _run_dcf(
    stations: list[_Station],
    params: DcfParams,
    horizon_us: int,
    busy: Sequence[tuple[int, int]],
    rng: random.Random,
) -> tuple[int, int]:
    """Slotted DCF over the idle gaps between busy intervals.

    Returns (success_airtime_us, collision_us).  Stations freeze across busy
    periods, resume countdown after a DIFS, and only transmit frames that fit
    inside the current gap.
    """
    slot = params.slot_us
    gaps: list[tuple[int, int]] = []
    cursor = 0
    for b_start, b_end in busy:
        if cursor < b_start:
            gaps.append((cursor, b_start))
        cursor = max(cursor, b_end)
    if cursor < horizon_us:
        gaps.append((cursor, horizon_us))

    for st in stations:
        st.backoff = rng.randint(0, st.cw)
        st.drawn += st.backoff

    success_us = 0
    collision_us = 0
    for gap_start, gap_end in gaps:
        t = gap_start + params.difs_us
        while True:
            if not stations:
                break
            need = min(st.backoff for st in stations)
            avail = (gap_end - t) // slot
            if avail < 0:
                break
            if need > avail:
                for st in stations:
                    st.backoff -= avail
                    st.counted += avail
                break
            t += need * slot
            for st in stations:
                st.backoff -= need
                st.counted += need
            ready = [st for st in stations if st.backoff == 0]
            fits = [st for st in ready if t + st.frame_us <= gap_end]
            if not fits:
                # heads of line wait for a longer gap; idle out this one
                break
            if len(fits) == 1:
                st = fits[0]
                st.wins += 1
                success_us += st.frame_us
                t += st.frame_us + params.difs_us
                st.cw = params.cw_min
                st.backoff = rng.randint(0, st.cw)
                st.drawn += st.backoff
            else:
                busy_span = max(st.frame_us for st in fits)
                collision_us += busy_span
                t += busy_span + params.difs_us
                for st in fits:
                    st.collisions += 1
                    st.cw = min(2 * st.cw + 1, params.cw_max)
                    st.backoff = rng.randint(0, st.cw)
                    st.drawn += st.backoff
    return success_us, collision_us


def simulate_csma(
    clients: Sequence[tuple[Hashable, int, bool]],
    params: DcfParams,
    horizon_us: int = 1_000_000,
) -> SimResult:
    """Saturated-station DCF baseline; (id, mcs, saturated) per client.

    Unsaturated clients never contend and simply report zero activity.
    """
    if not any(sat for _, _, sat in clients):
        raise ValueError("at least one client must be saturated")
    return _simulate_csma_masked(clients, params, horizon_us, busy=[])


def _simulate_csma_masked(
    clients: Sequence[tuple[Hashable, int, bool]],
    params: DcfParams,
    horizon_us: int,
    busy: Sequence[tuple[int, int]],
) -> SimResult:
    rng = random.Random(params.rng_seed)
    stations = []
    for cid, mcs, saturated in sorted(clients, key=lambda c: _id_key(c[0])):
        if not saturated:
            continue
        if mcs not in params.frame_airtime_us:
            raise ConfigurationError(f"no frame airtime configured for MCS {mcs}")
        stations.append(_Station(cid=cid, mcs=mcs,
                                 frame_us=params.frame_airtime_us[mcs],
                                 cw=params.cw_min))
    merged = _merged_busy(busy, horizon_us)
    success_us, collision_us = _run_dcf(stations, params, horizon_us, merged, rng)

    per_client: dict[Any, ClientSim] = {}
    by_id = {st.cid: st for st in stations}
    for cid, mcs, saturated in clients:
        st = by_id.get(cid)
        if st is None:
            per_client[cid] = ClientSim(0, 0.0, 0, 0)
            continue
        airtime = st.wins * st.frame_us
        throughput = st.wins * params.payload_bits / horizon_us  # [bits/us == Mbps]
        per_client[cid] = ClientSim(
            airtime_us=airtime,
            throughput_mbps=throughput,
            collisions=st.collisions,
            wins=st.wins,
            drawn_slots=st.drawn,
            counted_slots=st.counted,
            pending_slots=st.backoff,
        )
    masked_us = sum(e - s for s, e in merged)
    idle = horizon_us - sum(c.airtime_us for c in per_client.values()) \
        - collision_us - masked_us
    return SimResult(
        per_client=per_client,
        idle_us=idle,
        collision_us=collision_us,
        horizon_us=horizon_us,
        seed=params.rng_seed,
    )


@dataclass(frozen=True)
class ComparisonRow:
    client_id: Any
    csma_mbps: float
    twt_mbps: float


@dataclass(frozen=True)
class ComparisonReport:
    """Per-client throughput under all-CSMA vs TWT operation."""

    rows: tuple[ComparisonRow, ...]
    total_csma_mbps: float
    total_twt_mbps: float
    seed: int
    horizon_us: int


def compare(
    spec,
    sol,
    params: DcfParams | None = None,
    horizon_us: int = 1_000_000,
) -> ComparisonReport:
    """All-CSMA baseline vs the solved TWT deployment.

    Step one runs every client as a saturated CSMA station.  Step two replays
    the scheduled clients' TWT windows and lets the remaining legacy clients
    contend only in the airtime those windows leave free.
    """
    if params is None:
        params = DcfParams.from_table(spec.table)
    if sol.per_client and not sol.feasible:
        raise ValueError("cannot compare an infeasible solution")

    all_clients = [(c.id, c.mcs, True) for c in spec.clients]
    csma = simulate_csma(all_clients, params, horizon_us)

    scheduled_ids = set(sol.per_client)
    twt_mbps: dict[Any, float] = {}
    busy: list[tuple[int, int]] = []
    if scheduled_ids:
        by_id = {c.id: c for c in spec.clients}
        entries = [
            (cid, by_id[cid].mcs, sol.per_client[cid].tuple, sol.per_client[cid].schedule)
            for cid in sorted(scheduled_ids, key=_id_key)
        ]
        replay = simulate_twt(entries, spec.table, horizon_us)
        for cid in scheduled_ids:
            twt_mbps[cid] = replay.per_client[cid].throughput_mbps
        for cid, mcs, tup, sched in entries:
            starts, ends = _expand_arrays(
                sched.waketime_us, sched.sleeptime_us, sched.offset_us, horizon_us, True
            )
            busy.extend(zip(starts.tolist(), ends.tolist()))

    legacy = [(c.id, c.mcs, True) for c in spec.clients if c.id not in scheduled_ids]
    if legacy:
        masked = _simulate_csma_masked(legacy, params, horizon_us, busy)
        for cid, _, _ in legacy:
            twt_mbps[cid] = masked.per_client[cid].throughput_mbps

    rows = tuple(
        ComparisonRow(
            client_id=c.id,
            csma_mbps=csma.per_client[c.id].throughput_mbps,
            twt_mbps=twt_mbps[c.id],
        )
        for c in sorted(spec.clients, key=lambda c: _id_key(c.id))
    )
    return ComparisonReport(
        rows=rows,
        total_csma_mbps=sum(r.csma_mbps for r in rows),
        total_twt_mbps=sum(r.twt_mbps for r in rows),
        seed=params.rng_seed,
        horizon_us=horizon_us,
    )
