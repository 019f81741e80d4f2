"""
File: "src/kairos/cli/main.py"
Context: `kairos` command line - solve, gen, verify and bench.

Exit codes: 0 success, 1 unreadable input, 2 guard or parameter violation,
3 failed verification, 4 internal error (a broken runtime invariant).
"""
import argparse
import json
import sys

from pathlib import Path
from typing import Any, Dict, Sequence

from ..adats.monitor import DefaultMonitor
from ..adats.report import DefaultReport
from ..adats.session import DefaultSession, Limits
from ..aspects.benchmarks.harness import run_bench
from ..core.bifrost import bifrost_sync
from ..schedule.model import check_feasible
from ..solvers import SOLVERS
from ..solvers.subexp import parse_lambda
from .formats import dump_schedule, load_dks, load_instance, load_schedule
from .generators import FAMILIES, dks, generate
from ..errors import BadParams, CycleDetected, InvariantViolation, KairosError, ParseError, PreconditionViolated

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_GUARD = 2
EXIT_VERIFY = 3
EXIT_INTERNAL = 4

WITNESS_ALGOS = ('subexp', 'subsetconv', 'auto')
LAMBDA_ALGOS = ('subexp', 'auto')


def _limits(args: argparse.Namespace) -> Limits:
    return Limits() if args.max_jobs is None else Limits(max_jobs=args.max_jobs)


def _exit_code(e: Exception) -> int:
    if isinstance(e, InvariantViolation):
        return EXIT_INTERNAL
    if isinstance(e, (ParseError, CycleDetected, PreconditionViolated, OSError)):
        return EXIT_PARSE
    return EXIT_GUARD


def cmd_solve(args: argparse.Namespace) -> int:
    report = DefaultReport(log_level=args.log_level)
    session = DefaultSession(name=f"solve:{Path(args.instance).name}", limits=_limits(args))
    with bifrost_sync(session=session, monitor=DefaultMonitor(), report=report) as (session, monitor, _):
        session.add_tag(f"algo:{args.algo}")
        inst = load_instance(args.instance).build()
        kwargs: Dict[str, Any] = {}
        if args.algo in LAMBDA_ALGOS:
            kwargs['lam'] = None if args.lam is None else parse_lambda(args.lam)
        elif args.lam is not None:
            raise BadParams(f"[CLI] --lambda only applies to {', '.join(LAMBDA_ALGOS)}")
        if args.witness and args.algo in WITNESS_ALGOS:
            kwargs['witness'] = True
        result = SOLVERS[args.algo](inst, **kwargs)

        print(f"makespan {result.makespan}")

        if args.witness:
            verdict = result.verify(inst)
            if not verdict:
                report.error("Witness failed verification", condition=verdict.condition, detail=verdict.detail)
                return EXIT_VERIFY
            Path(args.witness).write_text(dump_schedule(result.witness))
        if args.stats:
            stats = {
                'algorithm': result.algorithm,
                'makespan': result.makespan,
                'n': inst.n,
                'm': inst.m,
                'generating_arcs': inst.graph.generating_arcs,
                'closure_arcs': inst.graph.closure_arcs,
                'wall_time': result.wall_time,
                'counters': dict(result.counters),
                'metrics': monitor.get_metrics(),
                'dispatch': session.get("dispatch"),
                'tags': session.get_tags(),
                'session': session.get_state_snapshot(),
                'monitor': monitor.get_summary(),
            }
            Path(args.stats).write_text(json.dumps(stats, indent=2, default=str) + "\n")
        if args.trace:
            Path(args.trace).write_bytes(monitor.serialize_events())
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    if args.family == 'dks':
        if args.dks_file is None:
            raise BadParams("[CLI] --family dks needs --dks-file")
        with bifrost_sync(session=DefaultSession(name="gen", limits=_limits(args))):
            instance_file = dks(load_dks(args.dks_file))
    else:
        instance_file = generate(args.family, args.params, m=args.machines, seed=args.seed)
    comments = [f"family {args.family} {' '.join(args.params)}".rstrip()]
    if args.family == 'random':
        comments.append(f"seed {args.seed}")
    sys.stdout.write(instance_file.dumps(comments=comments))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    with bifrost_sync(session=DefaultSession(name="verify", limits=_limits(args)),
                      report=DefaultReport(log_level=args.log_level)):
        inst = load_instance(args.instance).build()
        schedule = load_schedule(args.schedule, inst.m, n=inst.n)
        verdict = check_feasible(inst.graph, schedule)
    if verdict:
        print(f"ok makespan {schedule.makespan}")
        return EXIT_OK
    print(f"infeasible {verdict.condition}: {verdict.detail}")
    return EXIT_VERIFY


def cmd_bench(args: argparse.Namespace) -> int:
    run_bench(
        args.manifest,
        sys.stdout,
        jobs=args.jobs,
        limits=_limits(args),
        report=DefaultReport(log_level=args.log_level),
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kairos", description="Exact makespan for unit jobs with precedence constraints")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default="WARNING", choices=sorted(DefaultReport.LEVELS, key=DefaultReport.LEVELS.get))
    common.add_argument("--max-jobs", type=int, default=None, help="JobSet capacity (default 128)")

    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common], help="Solve an instance file")
    solve.add_argument("instance")
    solve.add_argument("--algo", default="auto", choices=list(SOLVERS))
    solve.add_argument("--lambda", dest="lam", default=None, help="Integer λ or a rule: sqrt (default), proportional")
    solve.add_argument("--witness", default=None, help="Write an optimal schedule here")
    solve.add_argument("--stats", default=None, help="Write JSON counters here")
    solve.add_argument("--trace", default=None, help="Write the msgpack event trace here")
    solve.set_defaults(handler=cmd_solve)

    gen = sub.add_parser("gen", parents=[common], help="Generate an instance file")
    gen.add_argument("--family", required=True, choices=[*FAMILIES, 'dks'])
    gen.add_argument("params", nargs="*")
    gen.add_argument("--machines", "-m", type=int, default=3)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--dks-file", default=None)
    gen.set_defaults(handler=cmd_gen)

    verify = sub.add_parser("verify", parents=[common], help="Check a schedule against an instance")
    verify.add_argument("instance")
    verify.add_argument("schedule")
    verify.set_defaults(handler=cmd_verify)

    bench = sub.add_parser("bench", parents=[common], help="Run a benchmark manifest, CSV on stdout")
    bench.add_argument("manifest")
    bench.add_argument("--jobs", type=int, default=1)
    bench.set_defaults(handler=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (KairosError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return _exit_code(e)


if __name__ == "__main__":
    sys.exit(main())
