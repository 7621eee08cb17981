"""Command-line front end: gen-table, solve, sweep, simulate, encode.

Exit codes: 0 success/feasible, 2 infeasible instance, 1 bad input.
Reports land as CSV/JSON; sweep and simulate also render a PNG figure
next to the delimited output (disable with --no-plot).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import TwtSchedError
from .ioutil import atomic_write_text
from .optimizer import (
    ClientSpec,
    ProblemSpec,
    Solution,
    ClientAssignment,
    oth_sweep,
    solve,
)
from .schedule import (
    ScheduleTuple,
    TwtSchedule,
    aa_of,
    encode_wake_interval,
    schedule_from_tuple,
    validate_schedule,
)
from . import reports
from .simulator import DcfParams, compare
from .throughput import (
    DEFAULT_PHY_RATE_MBPS,
    SyntheticModelParams,
    ThroughputTable,
    dump_table_csv,
    generate_synthetic_table,
    load_table,
    save_table,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for infeasible instances
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(_fail(message))


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT


def load_clients_file(path: str | Path) -> list[ClientSpec]:
    """Read the clients JSON file: a list of ClientSpec records."""
    with Path(path).open(encoding="utf-8") as fh:
        raw = json.load(fh)
    if isinstance(raw, dict):
        raw = raw.get("clients")
    if not isinstance(raw, list) or not raw:
        raise ValueError(f"{path}: expected a non-empty list of client records")
    clients = []
    for i, rec in enumerate(raw):
        try:
            clients.append(ClientSpec(
                id=rec["id"],
                mcs=int(rec["mcs"]),
                direction=rec["direction"],
                protection=rec["protection"],
                t_th_mbps=float(rec.get("t_th_mbps", 0.0)),
                t_csma_mbps=float(rec.get("t_csma_mbps", 0.0)),
                twt_capable=bool(rec.get("twt_capable", True)),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}: client record {i}: {exc}") from exc
    return clients


def _load_spec(args) -> ProblemSpec:
    clients = load_clients_file(args.clients)
    table = load_table(args.table)
    return ProblemSpec(
        clients=tuple(clients),
        table=table,
        oth_us=args.oth,
        max_mf=args.max_mf,
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    spec = _load_spec(args)
    sol = solve(spec, heuristic_refine=args.heuristic_refine)
    _emit(reports.dump_solution_json(sol, spec), args.out)
    if not sol.feasible:
        print(f"infeasible: {sol.infeasibility_reason}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.step <= 0:
        return _fail("--step must be positive")
    if args.oth_max < args.oth_min:
        return _fail("--oth-max must be >= --oth-min")
    clients = load_clients_file(args.clients)
    table = load_table(args.table)
    spec = ProblemSpec(clients=tuple(clients), table=table, oth_us=args.oth_min,
                       max_mf=args.max_mf)
    values = list(range(args.oth_min, args.oth_max + 1, args.step))
    points = oth_sweep(spec, values)
    _emit(reports.dump_sweep_csv(points), args.out)
    plot = _plot_path(args)
    if plot:
        reports.render_sweep_figure(points, plot)
    return EXIT_OK


def _plot_path(args) -> Path | None:
    if args.no_plot:
        return None
    if args.plot:
        return Path(args.plot)
    if args.out:
        return Path(args.out).with_suffix(".png")
    return None


def cmd_simulate(args) -> int:
    clients = load_clients_file(args.clients)
    with Path(args.solution).open(encoding="utf-8") as fh:
        sol_doc = json.load(fh)
    table = load_table(args.table) if args.table else generate_synthetic_table()
    spec = ProblemSpec(
        clients=tuple(clients),
        table=table,
        oth_us=int(sol_doc.get("oth_us") or 0),
    )
    per_client = {}
    for rec in sol_doc.get("clients", []):
        per_client[rec["client_id"]] = ClientAssignment(
            tuple=ScheduleTuple(float(rec["aa_percent"]), float(rec["mf"])),
            schedule=TwtSchedule(int(rec["wt_us"]), int(rec["st_us"]), int(rec["offset_us"])),
            t_unimpaired_mbps=float(rec["t_unimpaired_mbps"]),
            t_effective_mbps=float(rec["t_effective_mbps"]),
            loss_mbps=float(rec["loss_mbps"]),
        )
    if sol_doc.get("clients") and not sol_doc.get("feasible", False):
        return _fail("solution file is marked infeasible")
    sol = Solution(
        feasible=True,
        oth_us=spec.oth_us,
        objective=sol_doc.get("objective"),
        pc_st_us=sol_doc.get("pc_st_us"),
        per_client=per_client,
    )
    params = DcfParams.from_table(table, rng_seed=args.seed)
    report = compare(spec, sol, params, horizon_us=args.horizon_s * 1_000_000)
    _emit(reports.dump_comparison_csv(report), args.out)
    if args.out:
        reports.write_comparison_json(report, Path(args.out).with_suffix(".json"))
    plot = _plot_path(args)
    if plot:
        reports.render_comparison_figure(report, plot)
    return EXIT_OK


def cmd_gen_table(args) -> int:
    try:
        mcs_set = sorted({int(v) for v in args.mcs.split(",") if v.strip()})
    except ValueError:
        return _fail(f"bad --mcs list: {args.mcs!r}")
    if not mcs_set or any(not 0 <= m <= 11 for m in mcs_set):
        return _fail("--mcs must list indices in [0, 11]")
    rates = dict(DEFAULT_PHY_RATE_MBPS)
    if args.phy_rates:
        try:
            for pair in args.phy_rates.split(","):
                mcs, rate = pair.split(":")
                rates[int(mcs)] = float(rate)
        except ValueError:
            return _fail(f"bad --phy-rates, expected 'mcs:mbps,...': {args.phy_rates!r}")
    params = SyntheticModelParams(phy_rate_mbps=rates, beta=args.beta, gamma=args.gamma)
    table = generate_synthetic_table(params, mcs_set=mcs_set)
    if args.out:
        save_table(table, args.out)
    else:
        sys.stdout.write(dump_table_csv(table))
    return EXIT_OK


def cmd_encode(args) -> int:
    by_tuple = args.aa is not None or args.mf is not None
    by_fields = args.wt is not None or args.st is not None
    if by_tuple == by_fields:
        return _fail("give either --aa with --mf, or --wt with --st")
    if by_tuple:
        if args.aa is None or args.mf is None:
            return _fail("--aa and --mf go together")
        schedule = schedule_from_tuple(ScheduleTuple(args.aa, args.mf))
    else:
        if args.wt is None or args.st is None:
            return _fail("--wt and --st go together")
        schedule = TwtSchedule(args.wt, args.st, 0)
    problems = validate_schedule(schedule)
    print(f"wt_us: {schedule.waketime_us}")
    print(f"st_us: {schedule.sleeptime_us}")
    if not problems:
        enc = encode_wake_interval(schedule.sleeptime_us)
        print(f"mantissa: {enc.mantissa}")
        print(f"exponent: {enc.exponent}")
        print(f"achieved_aa_percent: {aa_of(schedule):.4f}")
        print("valid: true")
        return EXIT_OK
    print("valid: false")
    for problem in problems:
        print(f"violation: {problem}")
    return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twtsched", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[], help="solve one instance to JSON")
    p.add_argument("--clients", required=True)
    p.add_argument("--table", required=True)
    p.add_argument("--oth", required=True, type=int, help="overlap threshold [us]")
    p.add_argument("--max-mf", type=float, default=40.0)
    p.add_argument("--out")
    p.add_argument("--heuristic-refine", action="store_true",
                   help="coarse-to-fine AA search (faster, not exact)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="solve across a range of OTh values")
    p.add_argument("--clients", required=True)
    p.add_argument("--table", required=True)
    p.add_argument("--oth-min", required=True, type=int)
    p.add_argument("--oth-max", required=True, type=int)
    p.add_argument("--step", required=True, type=int)
    p.add_argument("--max-mf", type=float, default=40.0)
    p.add_argument("--out")
    p.add_argument("--plot", help="figure path (default: next to --out)")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="CSMA baseline vs a solved TWT deployment")
    p.add_argument("--solution", required=True)
    p.add_argument("--clients", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon-s", type=int, default=1)
    p.add_argument("--table", help="throughput table (default: synthetic)")
    p.add_argument("--out")
    p.add_argument("--plot")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gen-table", help="emit a synthetic throughput table CSV")
    p.add_argument("--mcs", required=True, help="comma list of MCS indices")
    p.add_argument("--beta", type=float, default=0.01)
    p.add_argument("--gamma", type=float, default=2.0)
    p.add_argument("--phy-rates", help="overrides, e.g. '7:86.0,8:103.2'")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_table)

    p = sub.add_parser("encode", help="quantize and encode one schedule")
    p.add_argument("--aa", type=float)
    p.add_argument("--mf", type=float)
    p.add_argument("--wt", type=int)
    p.add_argument("--st", type=int)
    p.set_defaults(func=cmd_encode)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except (TwtSchedError, ValueError, OSError, json.JSONDecodeError) as exc:
        return _fail(str(exc))


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
