"""Command-line front end.

Exit status: 0 on success/pass, 1 on a domain failure (unschedulable system,
failed check, queue collision), 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Optional

from . import bench, gen, model, pdq, sched

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_system(path: str) -> model.MCSystem:
    system = model.loads_system(_read(path))
    problems = model.validate(system)
    if problems:
        raise ValueError(f"invalid system: {problems[0]}")
    return system


def _cmd_gen(args: argparse.Namespace) -> int:
    params = gen.GenParams(
        u_target=Fraction(args.u),
        n_dags=args.dags,
        n_vertices_per_dag=args.vertices,
        rho=Fraction(args.rho),
        f=Fraction(args.f),
        e=args.e,
        cores=args.cores,
        seed=args.seed,
        periods=tuple(int(p) for p in args.periods.split(","))
        if args.periods else gen.PERIOD_MENU,
    )
    system = gen.generate_system(params)
    if args.format == "dot":
        _write(args.output, model.to_dot(system))
    else:
        _write(args.output, model.dumps_system(system))
    return EXIT_OK


def _cmd_sched(args: argparse.Namespace) -> int:
    system = _load_system(args.system)
    policy = sched.SchedPolicy(args.policy)
    hi = sched.build_hi_table(system, policy)
    lo = sched.build_lo_table(system, policy, hi)
    if model.has_lo_to_hi_edges(system):
        print("note: system has LO->HI precedence edges; they are ignored "
              "in HI mode", file=sys.stderr)
    if args.format == "gantt":
        sys.stdout.write(sched.gantt(lo))
        sys.stdout.write(sched.gantt(hi))
    else:
        _write(args.lo, sched.dumps_table(lo))
        _write(args.hi, sched.dumps_table(hi))
    if args.plot:
        from . import plots
        plots.save_gantt_figure([lo, hi], args.plot)
    return EXIT_OK


def _load_tables(args: argparse.Namespace):
    system = _load_system(args.system)
    lo = sched.loads_table(_read(args.lo))
    hi = sched.loads_table(_read(args.hi))
    return system, lo, hi


def _cmd_check(args: argparse.Namespace) -> int:
    system, lo, hi = _load_tables(args)
    if model.has_lo_to_hi_edges(system):
        print("note: system has LO->HI precedence edges; they are ignored "
              "in HI mode", file=sys.stderr)
    violations = sched.check_mc_correct(lo, hi, system)
    if violations:
        print("MC-correct: FAIL")
        print(violations[0])
        return EXIT_DOMAIN
    print("MC-correct: PASS")
    return EXIT_OK


def _cmd_switch_sim(args: argparse.Namespace) -> int:
    system, lo, hi = _load_tables(args)
    horizon = lo.horizon
    instants = [args.tfe] if args.tfe is not None else range(horizon)
    for t in instants:
        miss = sched.simulate_switch(lo, hi, system, t)
        if miss is not None:
            job = miss.job
            print(f"switch at t={t}: dag {job.dag} vertex {job.vertex} "
                  f"job {job.job} needs {miss.required} slots, "
                  f"only {miss.available} remain")
            return EXIT_DOMAIN
    span = f"t={args.tfe}" if args.tfe is not None else f"all t in [0, {horizon})"
    print(f"switch simulation: PASS ({span})")
    return EXIT_OK


def _cmd_pdq_sim(args: argparse.Namespace) -> int:
    queue = pdq.loads_queue(_read(args.queue))
    horizon = args.horizon if args.horizon is not None else \
        2 * queue.hyperperiod()
    rng = random.Random(args.seed) if args.jitter else None
    trace = pdq.simulate(queue, horizon, rng)
    _write(args.output, pdq.trace_to_csv(trace))
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    config = bench.parse_config(_read(args.config))
    if args.no_time:
        from dataclasses import replace
        config = replace(config, measure_time=False)
    records = bench.run_sweep(config, jobs=args.jobs)
    _write(args.output, bench.records_to_csv(records))
    if args.plot:
        from . import plots
        plots.save_acceptance_figure(records, args.plot)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="mcsched",
        description="Mixed-criticality DAG scheduling tables, periodic-delayed "
                    "queues, and acceptance-rate benchmarks.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random MC system")
    p.add_argument("--u", required=True, help="total utilization (both modes)")
    p.add_argument("--dags", type=int, required=True)
    p.add_argument("--vertices", type=int, required=True,
                   help="vertices per dag")
    p.add_argument("--rho", required=True, help="HI-task ratio in (0,1]")
    p.add_argument("--f", required=True, help="LO-mode reduction factor >= 1")
    p.add_argument("--e", type=float, required=True, help="edge probability")
    p.add_argument("--cores", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--periods", default=None,
                   help="comma-separated period menu override")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("sched", help="synthesize LO+HI scheduling tables")
    p.add_argument("system", help="system JSON ('-' for stdin)")
    p.add_argument("--policy", choices=("llf", "edf"), required=True)
    p.add_argument("--lo", default="lo.json", help="LO table output path")
    p.add_argument("--hi", default="hi.json", help="HI table output path")
    p.add_argument("--format", choices=("json", "gantt"), default="json")
    p.add_argument("--plot", default=None, help="also render a Gantt figure")
    p.set_defaults(func=_cmd_sched)

    p = sub.add_parser("check", help="verify tables against a system")
    p.add_argument("system")
    p.add_argument("lo")
    p.add_argument("hi")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("switch-sim",
                       help="mode-switch oracle over every failure instant")
    p.add_argument("system")
    p.add_argument("lo")
    p.add_argument("hi")
    p.add_argument("--tfe", type=int, default=None,
                   help="single instant instead of the exhaustive sweep")
    p.set_defaults(func=_cmd_switch_sim)

    p = sub.add_parser("pdq-sim",
                       help="simulate a periodic-delayed queue, emit trace CSV")
    p.add_argument("queue", help="queue JSON ('-' for stdin)")
    p.add_argument("--horizon", type=int, default=None,
                   help="default: two hyperperiods")
    p.add_argument("--jitter", action="store_true",
                   help="randomize sender completion instants")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_pdq_sim)

    p = sub.add_parser("bench", help="acceptance-rate sweep, emit CSV")
    p.add_argument("--config", required=True,
                   help="key = value config file ('-' for stdin)")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.add_argument("--plot", default=None,
                   help="also render the acceptance-rate figure")
    p.add_argument("--no-time", action="store_true",
                   help="omit wall times for byte-reproducible CSV")
    p.set_defaults(func=_cmd_bench)
    return top


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except sched.UnschedulableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except pdq.QueueCollisionError as exc:
        print(f"error: queue collision: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except gen.GenerationError as exc:
        print(f"error: generation failed: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OverflowError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
