"""Proportionally fair TWT schedule synthesis over a discrete <AA, MF> grid.

One tuple per TWT-capable client is picked from the table grid to maximize
sum(log(1 + T_i)) of the clients' overlap-adjusted throughputs, subject to
per-class throughput constraints and the pseudo-client structure: a virtual
top-priority client whose sleep time PC_ST anchors every real client's
sleep time to within the overlap threshold OTh, and must cover the sum of
all waketimes so each client gets one transmit opportunity per round.
Offsets lay the clients out back to back in ascending id order.

The search is exact: pseudo-client sleep candidates are the distinct grid
sleeptimes, each candidate's assignment space is searched depth first with
admissible pruning (an unimpaired-rate bound plus an airtime-budget bound,
neither of which can cut an optimal branch), and results merge under a
deterministic tie-break, so any number of worker threads returns the same
solution bit for bit.
"""

from __future__ import annotations

import os
import threading
from bisect import bisect_left
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from math import log1p
from typing import Any, Iterable, Mapping, Sequence

from .errors import ConfigurationError, QuantizationError
from .overlap import _expand_arrays, _winner_shares, effective_throughputs
from .schedule import ScheduleTuple, TwtSchedule, schedule_from_tuple, validate_schedule
from .throughput import ThroughputTable

DIRECTIONS = ("uplink", "downlink")
PROTECTIONS = ("protected", "best_effort")


@dataclass(frozen=True)
class ClientSpec:
    """One station of the optimization instance."""

    id: Any
    mcs: int
    direction: str
    protection: str
    t_th_mbps: float = 0.0
    t_csma_mbps: float = 0.0
    twt_capable: bool = True

    def __post_init__(self) -> None:
        if not 0 <= self.mcs <= 11:
            raise ValueError(f"client {self.id}: mcs must be in [0, 11], got {self.mcs}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"client {self.id}: direction must be one of {DIRECTIONS}")
        if self.protection not in PROTECTIONS:
            raise ValueError(f"client {self.id}: protection must be one of {PROTECTIONS}")
        if self.protection == "protected" and self.t_th_mbps <= 0:
            raise ValueError(f"client {self.id}: protected clients need t_th_mbps > 0")
        if self.t_csma_mbps < 0:
            raise ValueError(f"client {self.id}: t_csma_mbps must be >= 0")

    @property
    def is_protected(self) -> bool:
        return self.protection == "protected"


@dataclass(frozen=True)
class ProblemSpec:
    """A full optimization instance."""

    clients: tuple[ClientSpec, ...]
    table: ThroughputTable
    oth_us: int
    max_mf: float = 40.0
    horizon_us: int = 1_000_000

    def __post_init__(self) -> None:
        object.__setattr__(self, "clients", tuple(self.clients))
        ids = [c.id for c in self.clients]
        if len(set(ids)) != len(ids):
            raise ValueError("client ids must be unique")
        if not any(c.twt_capable for c in self.clients):
            raise ValueError("at least one client must be twt_capable")
        if self.oth_us < 0:
            raise ValueError(f"oth_us must be >= 0, got {self.oth_us}")
        if not 1.0 <= self.max_mf <= 255.0:
            raise ValueError(f"max_mf must be in [1, 255], got {self.max_mf}")
        if self.horizon_us <= 0:
            raise ValueError("horizon_us must be positive")

    def scheduled(self) -> list[ClientSpec]:
        """TWT-capable clients in ascending id order (the scheduling order)."""
        return sorted((c for c in self.clients if c.twt_capable), key=lambda c: _id_key(c.id))

    def vanilla(self) -> list[ClientSpec]:
        return [c for c in self.clients if not c.twt_capable]

    def t_avg_mbps(self) -> float | None:
        """Mean CSMA throughput of downlink vanilla clients; None if there are none."""
        base = [c.t_csma_mbps for c in self.vanilla() if c.direction == "downlink"]
        if not base:
            return None
        return sum(base) / len(base)


@dataclass(frozen=True)
class ClientAssignment:
    tuple: ScheduleTuple
    schedule: TwtSchedule
    t_unimpaired_mbps: float
    t_effective_mbps: float
    loss_mbps: float


@dataclass(frozen=True)
class Solution:
    feasible: bool
    oth_us: int
    objective: float | None = None
    pc_st_us: int | None = None
    per_client: dict[Any, ClientAssignment] = field(default_factory=dict)
    infeasibility_reason: str | None = None
    mode: str = "exact"

    def tuple_vector(self) -> tuple[tuple[Any, float, float], ...]:
        """Per-client (id, aa, mf) in id order; the identity of a schedule set."""
        return tuple(
            (cid, self.per_client[cid].tuple.aa_percent, self.per_client[cid].tuple.mf)
            for cid in sorted(self.per_client, key=_id_key)
        )

    def twt_throughput_mbps(self) -> float:
        return sum(a.t_effective_mbps for a in self.per_client.values())


@dataclass(frozen=True)
class Violation:
    kind: str
    client_id: Any
    message: str

    def __str__(self) -> str:
        return self.message


def _id_key(cid: Any):
    return (str(type(cid).__name__), cid)


def objective(t_effective: Iterable[float]) -> float:
    """Proportional-fairness utility: sum of log(1 + T) over scheduled clients."""
    total = 0.0
    for value in t_effective:
        if value < 0:
            raise ValueError(f"throughput must be >= 0, got {value}")
        total += log1p(value)
    return total


def assign_offsets(chosen: Mapping[Any, TwtSchedule]) -> dict[Any, TwtSchedule]:
    """Round-robin layout: each client starts after the waketimes of lower ids."""
    out: dict[Any, TwtSchedule] = {}
    offset = 0
    for cid in sorted(chosen, key=_id_key):
        sched = chosen[cid]
        out[cid] = replace(sched, offset_us=offset)
        offset += sched.waketime_us
    return out


def check_constraints(sol: Solution, spec: ProblemSpec) -> list[Violation]:
    """All constraint violations of a populated solution; [] means feasible."""
    if not sol.per_client:
        raise ValueError("solution has no per-client assignments to check")
    violations: list[Violation] = []
    by_id = {c.id: c for c in spec.clients}
    t_avg = spec.t_avg_mbps()
    ids = sorted(sol.per_client, key=_id_key)

    for cid in ids:
        a = sol.per_client[cid]
        client = by_id[cid]
        eff = a.t_effective_mbps
        if client.is_protected:
            if eff < client.t_th_mbps:
                violations.append(Violation(
                    "min-throughput", cid,
                    f"client {cid}: {eff:.4f} Mbps below guarantee {client.t_th_mbps} Mbps"))
        elif client.direction == "downlink":
            if eff < client.t_csma_mbps:
                violations.append(Violation(
                    "csma-floor", cid,
                    f"client {cid}: {eff:.4f} Mbps below CSMA baseline {client.t_csma_mbps} Mbps"))
        else:
            if t_avg is not None and eff > t_avg:
                violations.append(Violation(
                    "uplink-cap", cid,
                    f"client {cid}: {eff:.4f} Mbps above downlink average {t_avg:.4f} Mbps"))

    total_wt = sum(sol.per_client[cid].schedule.waketime_us for cid in ids)
    if sol.pc_st_us is None or sol.pc_st_us < total_wt:
        violations.append(Violation(
            "round-robin", None,
            f"pseudo-client sleep {sol.pc_st_us} us does not cover total waketime {total_wt} us"))
    for cid in ids:
        st = sol.per_client[cid].schedule.sleeptime_us
        if sol.pc_st_us is None or abs(sol.pc_st_us - st) > spec.oth_us:
            violations.append(Violation(
                "overlap-threshold", cid,
                f"client {cid}: sleeptime {st} us deviates from PC_ST {sol.pc_st_us} us "
                f"by more than OTh {spec.oth_us} us"))
    for cid in ids:
        if sol.per_client[cid].tuple.mf > spec.max_mf:
            violations.append(Violation(
                "mf-cap", cid,
                f"client {cid}: mf {sol.per_client[cid].tuple.mf} exceeds cap {spec.max_mf}"))
        for problem in validate_schedule(sol.per_client[cid].schedule):
            violations.append(Violation("schedule-invalid", cid, f"client {cid}: {problem}"))
    return violations


# -- exact search -----------------------------------------------------------


@dataclass(frozen=True)
class _GridPoint:
    index: int
    tup: ScheduleTuple
    wt: int
    st: int
    cycle: int


@dataclass(frozen=True)
class _Cand:
    grid: _GridPoint
    unimp: float


class _Incumbent:
    """Best feasible objective seen so far, shared across partitions."""

    __slots__ = ("value", "lock")

    def __init__(self) -> None:
        self.value = float("-inf")
        self.lock = threading.Lock()

    def raise_to(self, value: float) -> None:
        with self.lock:
            if value > self.value:
                self.value = value


def _budget_bound(terms: Sequence[tuple[float, float]], budget: float) -> float:
    """Upper bound on sum(log1p(min(r_i * w_i, u_i))) with sum(w_i) <= budget.

    Concave waterfilling; evaluated on the over-budget side of the bisection
    so rounding can only loosen the bound, never cut a feasible branch.
    """
    live = [(r, u) for r, u in terms if r > 0.0 and u > 0.0]
    unconstrained = sum(log1p(u) for _, u in live)
    if not live or sum(u / r for r, u in live) <= budget:
        return unconstrained
    lo, hi = 0.0, max(r for r, _ in live)
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        used = 0.0
        for r, u in live:
            used += min(u / r, max(0.0, 1.0 / mid - 1.0 / r))
        if used > budget:
            lo = mid
        else:
            hi = mid
    if lo == 0.0:
        return unconstrained
    bound = 0.0
    for r, u in live:
        w = min(u / r, max(0.0, 1.0 / lo - 1.0 / r))
        bound += log1p(min(u, r * w))
    return bound


class _Search:
    """Shared state for one instance: grid, per-client rates, leaf cache."""

    def __init__(self, spec: ProblemSpec, cache: dict | None = None):
        self.spec = spec
        self.horizon = spec.horizon_us
        self.t_avg = spec.t_avg_mbps()
        self.scheduled = spec.scheduled()
        self.grid = self._build_grid(spec.table)
        self.unimpaired = self._build_rates()
        # leaf cache key: grid index per scheduled client in id order
        self.cache: dict[tuple[int, ...], tuple[bool, float, tuple[float, ...]]] = (
            cache if cache is not None else {}
        )
        # search best-effort clients first and protected uplink last, so the
        # most constrained choices are made against a settled context
        def rank(c: ClientSpec) -> int:
            if not c.is_protected:
                return 0
            return 2 if c.direction == "uplink" else 1
        self.search_order = sorted(
            range(len(self.scheduled)),
            key=lambda i: (rank(self.scheduled[i]), _id_key(self.scheduled[i].id)),
        )

    def _build_grid(self, table: ThroughputTable) -> list[_GridPoint]:
        grid: list[_GridPoint] = []
        for index, tup in enumerate(table.grid_tuples()):
            try:
                sched = schedule_from_tuple(tup)
            except QuantizationError as exc:
                raise ConfigurationError(
                    f"table grid tuple (aa={tup.aa_percent}, mf={tup.mf}) "
                    f"cannot be quantized: {exc}"
                ) from exc
            grid.append(_GridPoint(index, tup, sched.waketime_us, sched.sleeptime_us,
                                   sched.cycle_us))
        return grid

    def _build_rates(self) -> dict[Any, list[float]]:
        rates: dict[Any, list[float]] = {}
        for client in self.scheduled:
            if client.mcs not in self.spec.table.mcs_set:
                raise ConfigurationError(
                    f"client {client.id}: MCS {client.mcs} is not in the table"
                )
            rates[client.id] = [
                self.spec.table.lookup_tuple(client.mcs, g.tup) for g in self.grid
            ]
        return rates

    def base_candidates(
        self, aa_windows: Mapping[Any, tuple[float, float]] | None = None
    ) -> list[list[_Cand]]:
        """Grid points each scheduled client may use, before the PC_ST window.

        Keeps tuples under the MF cap and drops tuples whose unimpaired rate
        already violates a lower-bound constraint (contention only lowers
        throughput, so those can never become feasible).
        """
        out: list[list[_Cand]] = []
        for client in self.scheduled:
            rates = self.unimpaired[client.id]
            floor = 0.0
            if client.is_protected:
                floor = client.t_th_mbps
            elif client.direction == "downlink":
                floor = client.t_csma_mbps
            window = None if aa_windows is None else aa_windows.get(client.id)
            cands = []
            for g in self.grid:
                if g.tup.mf > self.spec.max_mf:
                    continue
                if window is not None and not window[0] <= g.tup.aa_percent <= window[1]:
                    continue
                if rates[g.index] < floor:
                    continue
                cands.append(_Cand(g, rates[g.index]))
            out.append(cands)
        return out

    def pc_candidates(self) -> list[int]:
        return sorted({g.st for g in self.grid if g.tup.mf <= self.spec.max_mf})

    def evaluate(self, key: tuple[int, ...]) -> tuple[bool, float, tuple[float, ...]]:
        """Effective throughputs, throughput-constraint verdict, and objective
        of one assignment (grid index per scheduled client, id order)."""
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        packed = []
        offset = 0
        points = [self.grid[i] for i in key]
        for rank_, (client, g) in enumerate(zip(self.scheduled, points)):
            starts, ends = _expand_arrays(g.wt, g.st, offset, self.horizon, True)
            packed.append((starts, ends, (client.mcs << 20) | rank_))
            offset += g.wt
        shares, _, _ = _winner_shares(packed, self.horizon)
        ok = True
        total = 0.0
        effs = []
        for client, g, share in zip(self.scheduled, points, shares):
            unimp = self.unimpaired[client.id][g.index]
            rate = unimp / share.wake_us
            loss = share.lost_us * rate
            eff = max(0.0, unimp - loss)
            effs.append(eff)
            if client.is_protected:
                if eff < client.t_th_mbps:
                    ok = False
            elif client.direction == "downlink":
                if eff < client.t_csma_mbps:
                    ok = False
            else:
                if self.t_avg is not None and eff > self.t_avg:
                    ok = False
            total += log1p(eff)
        result = (ok, total, tuple(effs))
        self.cache[key] = result
        return result


@dataclass
class _PartitionResult:
    best: tuple[float, int, tuple[int, ...]] | None  # (objective, pc_st, key)
    had_window: bool
    evaluated: bool


def _solve_partition(
    search: _Search,
    pc: int,
    base: list[list[_Cand]],
    incumbent: _Incumbent,
) -> _PartitionResult:
    spec = search.spec
    oth = spec.oth_us
    horizon = search.horizon
    n = len(search.scheduled)

    # candidate window per client (search order), sorted best-unimpaired first
    windows: list[list[_Cand]] = []
    rates_ub: list[list[float]] = []
    for pos in search.search_order:
        cands = [c for c in base[pos] if abs(c.grid.st - pc) <= oth]
        if not cands:
            return _PartitionResult(None, had_window=False, evaluated=False)
        cands.sort(key=lambda c: (-c.unimp, c.grid.index))
        windows.append(cands)
        rub = []
        for c in cands:
            wake_lb = c.grid.wt * ((horizon - pc) // c.grid.cycle)
            rub.append(c.unimp / max(wake_lb, 1))
        rates_ub.append(rub)

    min_wt_suf = [0] * (n + 1)
    logu_suf = [0.0] * (n + 1)
    cap_suf = [0.0] * (n + 1)
    term_suf: list[tuple[float, float]] = [(0.0, 0.0)] * n
    for d in range(n - 1, -1, -1):
        min_wt_suf[d] = min_wt_suf[d + 1] + min(c.grid.wt for c in windows[d])
        u_max = max(c.unimp for c in windows[d])
        r_max = max(rates_ub[d])
        logu_suf[d] = logu_suf[d + 1] + log1p(u_max)
        cap_suf[d] = cap_suf[d + 1] + (u_max / r_max if r_max > 0 else 0.0)
        term_suf[d] = (r_max, u_max)

    # search-depth -> position of that client in the id-ordered key
    depth_to_slot = list(search.search_order)
    chosen: list[_Cand | None] = [None] * n
    best: list[tuple[float, int, tuple[int, ...]] | None] = [None]
    evaluated = [False]

    def dfs(depth: int, sum_wt: int, sum_logu: float, sum_cap: float,
            terms: list[tuple[float, float]]) -> None:
        cutoff = incumbent.value
        if sum_logu + logu_suf[depth] < cutoff:
            return
        if sum_cap + cap_suf[depth] > horizon:
            bound = _budget_bound(terms + term_suf[depth:], float(horizon))
            if bound < cutoff:
                return
        if depth == n:
            if sum_wt > pc:
                return
            key_slots = [0] * n
            for d, cand in enumerate(chosen):
                key_slots[depth_to_slot[d]] = cand.grid.index
            key = tuple(key_slots)
            ok, obj, _ = search.evaluate(key)
            evaluated[0] = True
            if not ok:
                return
            cur = best[0]
            if cur is None or obj > cur[0] or (obj == cur[0] and key < cur[2]):
                best[0] = (obj, pc, key)
                incumbent.raise_to(obj)
            return
        for i, cand in enumerate(windows[depth]):
            if sum_wt + cand.grid.wt + min_wt_suf[depth + 1] > pc:
                continue
            chosen[depth] = cand
            terms.append((rates_ub[depth][i], cand.unimp))
            dfs(depth + 1, sum_wt + cand.grid.wt, sum_logu + log1p(cand.unimp),
                sum_cap + cand.unimp / max(rates_ub[depth][i], 1e-300), terms)
            terms.pop()
        chosen[depth] = None

    dfs(0, 0, 0.0, 0.0, [])
    return _PartitionResult(best[0], had_window=True, evaluated=evaluated[0])


def _warm_start(
    search: _Search,
    base: list[list[_Cand]],
    pcs: list[int],
    incumbent: _Incumbent,
) -> tuple[float, int, tuple[int, ...]] | None:
    """Evaluate every all-clients-on-one-tuple assignment that fits some PC_ST.

    Homogeneous layouts tile the round exactly and are frequent optima, so
    they make strong initial incumbents for the branch-and-bound.
    """
    n = len(search.scheduled)
    shared = set(c.grid.index for c in base[0]) if base else set()
    for cands in base[1:]:
        shared &= {c.grid.index for c in cands}
    best: tuple[float, int, tuple[int, ...]] | None = None
    for gi in sorted(shared):
        g = search.grid[gi]
        lo = max(n * g.wt, g.st - search.spec.oth_us)
        hi = g.st + search.spec.oth_us
        i = bisect_left(pcs, lo)
        if i == len(pcs) or pcs[i] > hi:
            continue
        pc = pcs[i]
        ok, obj, _ = search.evaluate((gi,) * n)
        if not ok:
            continue
        key = (gi,) * n
        if best is None or obj > best[0] or (obj == best[0] and (pc, key) < (best[1], best[2])):
            best = (obj, pc, key)
            incumbent.raise_to(obj)
    return best


def _materialize(search: _Search, pc: int, key: tuple[int, ...], oth_us: int) -> Solution:
    """Build the full Solution for a winning assignment via the public engine."""
    spec = search.spec
    chosen = {
        client.id: schedule_from_tuple(search.grid[gi].tup)
        for client, gi in zip(search.scheduled, key)
    }
    placed = assign_offsets(chosen)
    entries = [
        (client.id, client.mcs, search.grid[gi].tup, placed[client.id])
        for client, gi in zip(search.scheduled, key)
    ]
    report = effective_throughputs(entries, spec.table, horizon_us=search.horizon)
    per_client: dict[Any, ClientAssignment] = {}
    for client, gi in zip(search.scheduled, key):
        unimp = search.unimpaired[client.id][gi]
        eff = report.effective_throughput_mbps[client.id]
        per_client[client.id] = ClientAssignment(
            tuple=search.grid[gi].tup,
            schedule=placed[client.id],
            t_unimpaired_mbps=unimp,
            t_effective_mbps=eff,
            loss_mbps=report.per_client_loss_mbps[client.id],
        )
    obj = objective(per_client[c.id].t_effective_mbps for c in search.scheduled)
    return Solution(
        feasible=True,
        oth_us=oth_us,
        objective=obj,
        pc_st_us=pc,
        per_client=per_client,
    )


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        raw = os.environ.get("TWT_SCHED_THREADS", "").strip()
        threads = int(raw) if raw else 0
    if threads == 0:
        threads = min(8, os.cpu_count() or 1)
    return max(1, threads)


def solve(
    spec: ProblemSpec,
    *,
    threads: int | None = None,
    heuristic_refine: bool = False,
    _search: _Search | None = None,
) -> Solution:
    """Exact optimum of the instance; deterministic for any thread count.

    With heuristic_refine the search first runs on a 10-percentage-point AA
    subgrid and then refines on the full grid within one coarse step of the
    coarse optimum; the result is labeled "heuristic" because the restriction
    can miss the true optimum.
    """
    search = _search if _search is not None else _Search(spec)
    workers = _resolve_threads(threads)

    if heuristic_refine:
        coarse_aas = [aa for aa in spec.table.aa_set if float(aa) % 10.0 == 0.0]
        coarse = _solve_exact(
            search,
            workers,
            aa_allowed=set(coarse_aas) if coarse_aas else None,
        )
        if coarse.feasible and coarse_aas:
            windows = {
                cid: (a.tuple.aa_percent - 10.0, a.tuple.aa_percent + 10.0)
                for cid, a in coarse.per_client.items()
            }
            refined = _solve_exact(search, workers, aa_windows=windows)
            return replace(refined, mode="heuristic")
        # coarse pass found nothing to anchor on: run the full search
        return replace(_solve_exact(search, workers), mode="heuristic")

    return _solve_exact(search, workers)


def _solve_exact(
    search: _Search,
    workers: int,
    aa_windows: Mapping[Any, tuple[float, float]] | None = None,
    aa_allowed: set[float] | None = None,
) -> Solution:
    spec = search.spec
    base = search.base_candidates(aa_windows)
    if aa_allowed is not None:
        base = [
            [c for c in cands if c.grid.tup.aa_percent in aa_allowed] for cands in base
        ]
    pcs = search.pc_candidates()
    incumbent = _Incumbent()

    starved = [
        client.id for client, cands in zip(search.scheduled, base) if not cands
    ]
    if starved:
        pcs = []

    warm = _warm_start(search, base, pcs, incumbent) if pcs else None

    partition_results: list[_PartitionResult] = []
    if pcs:
        if workers <= 1 or len(pcs) <= 1:
            partition_results = [
                _solve_partition(search, pc, base, incumbent) for pc in pcs
            ]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(_solve_partition, search, pc, base, incumbent)
                    for pc in pcs
                ]
                partition_results = [f.result() for f in futures]

    results = [warm] + [r.best for r in partition_results]
    best: tuple[float, int, tuple[int, ...]] | None = None
    for item in results:
        if item is None:
            continue
        if best is None or item[0] > best[0] or (
            item[0] == best[0] and (item[1], item[2]) < (best[1], best[2])
        ):
            best = item

    if best is not None:
        return _materialize(search, best[1], best[2], spec.oth_us)

    if starved:
        reason = (
            f"client(s) {starved} have no admissible grid tuple under the MF cap "
            "and unimpaired-throughput floors"
        )
    elif not any(r.had_window for r in partition_results):
        reason = (
            f"no pseudo-client sleep candidate leaves every client a grid tuple "
            f"within OTh={spec.oth_us} us"
        )
    else:
        reason = (
            f"every candidate assignment violates the throughput or round-robin "
            f"constraints at OTh={spec.oth_us} us"
        )
    return Solution(feasible=False, oth_us=spec.oth_us, infeasibility_reason=reason)


@dataclass(frozen=True)
class SweepPoint:
    oth_us: int
    objective: float | None
    total_throughput_mbps: float | None
    feasible: bool
    plateau: bool
    solution: Solution


def oth_sweep(
    spec: ProblemSpec,
    oth_values: Sequence[int],
    *,
    threads: int | None = None,
) -> list[SweepPoint]:
    """Solve once per OTh value, flagging plateaus of identical schedules.

    Leaf evaluations are shared across the sweep: an assignment's overlap
    losses do not depend on OTh, only its admissibility does.
    """
    if not oth_values:
        raise ValueError("oth_values must not be empty")
    if list(oth_values) != sorted(oth_values):
        raise ValueError("oth_values must be ascending")
    cache: dict = {}
    points: list[SweepPoint] = []
    previous: Solution | None = None
    for oth in oth_values:
        sub = replace(spec, oth_us=int(oth))
        search = _Search(sub, cache=cache)
        sol = solve(sub, threads=threads, _search=search)
        plateau = bool(
            previous is not None
            and previous.feasible
            and sol.feasible
            and previous.tuple_vector() == sol.tuple_vector()
        )
        total = system_throughput_mbps(sol, sub) if sol.feasible else None
        points.append(SweepPoint(
            oth_us=int(oth),
            objective=sol.objective,
            total_throughput_mbps=total,
            feasible=sol.feasible,
            plateau=plateau,
            solution=sol,
        ))
        previous = sol
    return points


def system_throughput_mbps(sol: Solution, spec: ProblemSpec) -> float:
    """Scheduled effective throughput plus the vanilla clients' CSMA baselines."""
    return sol.twt_throughput_mbps() + sum(c.t_csma_mbps for c in spec.vanilla())
