"""Delimited reports and companion matplotlib figures.

Every report the CLI writes has a machine-readable CSV/JSON form; the
figure renderers draw the same data to PNG files next to the delimited
output so a sweep or comparison can be eyeballed without extra tooling.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .ioutil import atomic_write_text
from .optimizer import ProblemSpec, Solution, SweepPoint
from .schedule import encode_wake_interval
from .simulator import ComparisonReport

SWEEP_CSV_HEADER = ("oth_us", "objective", "total_throughput_mbps", "feasible", "plateau")
COMPARISON_CSV_HEADER = ("client_id", "mode", "throughput_mbps")


def solution_to_dict(sol: Solution, spec: ProblemSpec) -> dict:
    """Solution JSON shape: schedule records plus throughput totals."""
    clients = []
    for cid in sorted(sol.per_client, key=lambda c: (str(type(c).__name__), c)):
        a = sol.per_client[cid]
        enc = encode_wake_interval(a.schedule.sleeptime_us)
        clients.append({
            "client_id": cid,
            "wt_us": a.schedule.waketime_us,
            "st_us": a.schedule.sleeptime_us,
            "offset_us": a.schedule.offset_us,
            "mantissa": enc.mantissa,
            "exponent": enc.exponent,
            "aa_percent": a.tuple.aa_percent,
            "mf": a.tuple.mf,
            "t_unimpaired_mbps": a.t_unimpaired_mbps,
            "t_effective_mbps": a.t_effective_mbps,
            "loss_mbps": a.loss_mbps,
        })
    vanilla_total = sum(c.t_csma_mbps for c in spec.vanilla())
    return {
        "feasible": sol.feasible,
        "objective": sol.objective,
        "pc_st_us": sol.pc_st_us,
        "oth_us": sol.oth_us,
        "mode": sol.mode,
        "infeasibility_reason": sol.infeasibility_reason,
        "clients": clients,
        "totals": {
            "twt_throughput_mbps": sol.twt_throughput_mbps(),
            "system_throughput_mbps": sol.twt_throughput_mbps() + vanilla_total,
        },
    }


def dump_solution_json(sol: Solution, spec: ProblemSpec) -> str:
    return json.dumps(solution_to_dict(sol, spec), indent=2) + "\n"


def write_solution_json(sol: Solution, spec: ProblemSpec, path: str | Path) -> None:
    atomic_write_text(path, dump_solution_json(sol, spec))


def dump_sweep_csv(points: Sequence[SweepPoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER)
    for p in points:
        writer.writerow([
            p.oth_us,
            "" if p.objective is None else repr(p.objective),
            "" if p.total_throughput_mbps is None else repr(p.total_throughput_mbps),
            str(p.feasible).lower(),
            str(p.plateau).lower(),
        ])
    return buf.getvalue()


def write_sweep_csv(points: Sequence[SweepPoint], path: str | Path) -> None:
    atomic_write_text(path, dump_sweep_csv(points))


def render_sweep_figure(points: Sequence[SweepPoint], path: str | Path) -> None:
    """Objective and system throughput against the overlap threshold."""
    fig, ax_obj = plt.subplots(figsize=(7, 4))
    feasible = [p for p in points if p.feasible]
    infeasible = [p for p in points if not p.feasible]
    if feasible:
        xs = [p.oth_us for p in feasible]
        ax_obj.plot(xs, [p.objective for p in feasible], "o-", color="tab:blue",
                    label="objective")
        plateau = [p for p in feasible if p.plateau]
        if plateau:
            ax_obj.plot([p.oth_us for p in plateau], [p.objective for p in plateau],
                        "s", color="tab:red", markerfacecolor="none", markersize=10,
                        label="plateau")
        ax_tp = ax_obj.twinx()
        ax_tp.plot(xs, [p.total_throughput_mbps for p in feasible], "^--",
                   color="tab:green", label="system throughput")
        ax_tp.set_ylabel("system throughput [Mbps]")
        lines, labels = ax_obj.get_legend_handles_labels()
        lines2, labels2 = ax_tp.get_legend_handles_labels()
        ax_obj.legend(lines + lines2, labels + labels2, loc="lower right")
    for p in infeasible:
        ax_obj.axvline(p.oth_us, color="0.8", linestyle=":")
    ax_obj.set_xlabel("overlap threshold OTh [us]")
    ax_obj.set_ylabel("objective  sum log(1+T)")
    ax_obj.set_title("Schedule quality vs allowed overlap")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def dump_comparison_csv(report: ComparisonReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COMPARISON_CSV_HEADER)
    for row in report.rows:
        writer.writerow([row.client_id, "csma", repr(row.csma_mbps)])
    for row in report.rows:
        writer.writerow([row.client_id, "twt", repr(row.twt_mbps)])
    writer.writerow(["total", "csma", repr(report.total_csma_mbps)])
    writer.writerow(["total", "twt", repr(report.total_twt_mbps)])
    return buf.getvalue()


def write_comparison_csv(report: ComparisonReport, path: str | Path) -> None:
    atomic_write_text(path, dump_comparison_csv(report))


def comparison_to_dict(report: ComparisonReport) -> dict:
    return {
        "seed": report.seed,
        "horizon_us": report.horizon_us,
        "clients": [
            {"client_id": r.client_id, "csma_mbps": r.csma_mbps, "twt_mbps": r.twt_mbps}
            for r in report.rows
        ],
        "totals": {"csma_mbps": report.total_csma_mbps, "twt_mbps": report.total_twt_mbps},
    }


def write_comparison_json(report: ComparisonReport, path: str | Path) -> None:
    atomic_write_text(path, json.dumps(comparison_to_dict(report), indent=2) + "\n")


def render_comparison_figure(report: ComparisonReport, path: str | Path) -> None:
    """Grouped bars: per-client and total throughput, CSMA vs TWT."""
    labels = [str(r.client_id) for r in report.rows] + ["total"]
    csma = [r.csma_mbps for r in report.rows] + [report.total_csma_mbps]
    twt = [r.twt_mbps for r in report.rows] + [report.total_twt_mbps]
    x = range(len(labels))
    width = 0.38
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar([i - width / 2 for i in x], csma, width, label="CSMA/CA", color="tab:gray")
    ax.bar([i + width / 2 for i in x], twt, width, label="TWT", color="tab:blue")
    ax.set_xticks(list(x), labels)
    ax.set_xlabel("client")
    ax.set_ylabel("throughput [Mbps]")
    ax.set_title(f"CSMA/CA vs TWT (seed {report.seed}, {report.horizon_us/1e6:.0f} s)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
