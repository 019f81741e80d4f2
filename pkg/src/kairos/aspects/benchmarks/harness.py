"""
File: "src/kairos/aspects/benchmarks/harness.py"
Context: Benchmark harness - solve manifest rows and emit one CSV row each.

Manifest rows read `<instance path> <algo> [lambda]`, where lambda is an
integer or a rule name (`sqrt`, `proportional`); paths are relative to the
manifest, `#` starts a comment. Every row runs in its own session and
monitor, so counters never mix between rows. Failures are recorded in the
row and the run continues.
"""
import csv
import time

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, TextIO

from ...adats.monitor import DefaultMonitor
from ...adats.report import DefaultReport
from ...adats.session import DefaultSession, Limits
from ...core.bifrost import bifrost_sync
from ...core.paragon import _PARAGON
from ...solvers import SOLVERS
from ...solvers.subexp import Lambda, TreeBounds, parse_lambda, resolve_lambda
from ...errors import BadParams, KairosError, ParseError

COLUMNS = (
    'instance', 'n', 'm', 'algo', 'lambda', 'makespan', 'wall_ms',
    'memo_hits', 'tree_nodes', 'red_nonleaves', 'bound_red_nonleaves',
    'max_tree_height', 'bound_height', 'events',
)

LAMBDA_ALGOS = ('subexp', 'auto')


@dataclass(frozen=True, slots=True)
class BenchRow:
    instance: str
    path: Path
    algo: str
    lam: Lambda = None


def read_manifest(path: str | Path) -> List[BenchRow]:
    """
    Raises:
        ParseError: a row with the wrong field count, an unknown algorithm or a bad λ.
    """
    manifest = Path(path)
    rows: List[BenchRow] = []
    for line_no, raw in enumerate(manifest.read_text().splitlines(), start=1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        if len(parts) not in (2, 3):
            raise ParseError("Manifest rows read '<instance> <algo> [lambda]'", line_no)
        if parts[1] not in SOLVERS:
            raise ParseError(f"Unknown algorithm {parts[1]!r}", line_no)
        lam = None
        if len(parts) == 3:
            try:
                lam = parse_lambda(parts[2])
            except BadParams as e:
                raise ParseError(str(e), line_no) from None
        rows.append(BenchRow(instance=parts[0], path=manifest.parent / parts[0], algo=parts[1], lam=lam))
    return rows


def run_row(row: BenchRow, limits: Limits, report: DefaultReport) -> Dict[str, Any]:
    """Solve one row in a fresh session and monitor."""
    # Local import: the cli package imports this module.
    from ...cli.formats import load_instance

    out: Dict[str, Any] = {c: '' for c in COLUMNS}
    out.update(instance=row.instance, algo=row.algo)
    session = DefaultSession(name=f"bench:{row.instance}:{row.algo}", limits=limits)
    session.add_tag("bench")
    monitor = DefaultMonitor()
    with bifrost_sync(session=session, monitor=monitor, report=report):
        try:
            inst = load_instance(row.path).build()
            out.update(n=inst.n, m=inst.m)
            kwargs: Dict[str, Any] = {}
            if row.algo in LAMBDA_ALGOS:
                kwargs['lam'] = row.lam
                out['lambda'] = resolve_lambda(row.lam, inst.n, inst.m)
            elif row.lam is not None:
                raise BadParams(f"[Bench] {row.algo} takes no λ")
            start = time.perf_counter()
            result = SOLVERS[row.algo](inst, **kwargs)
            out['wall_ms'] = round((time.perf_counter() - start) * 1000, 3)
            out['makespan'] = result.makespan
            out['events'] = monitor.get_summary()['total_events']
        except (KairosError, OSError) as e:
            report.error(f"Bench row failed: {e}", instance=row.instance, algo=row.algo)
            out['makespan'] = f"error:{type(e).__name__}"
            return out

    counters = result.counters
    if 'total_calls' in counters:
        jobs, lam = counters['jobs'], counters['lambda']
        bounds = TreeBounds.of(jobs, inst.m, lam)
        out.update(
            memo_hits=counters['memo_hits'],
            tree_nodes=counters['total_calls'],
            red_nonleaves=counters['red_nonleaves'],
            bound_red_nonleaves=bounds.red_nonleaves,
            max_tree_height=counters['max_tree_height'],
            bound_height=bounds.tree_height,
        )
        out['lambda'] = lam
    return out


def run_bench(
        manifest: str | Path,
        stream: TextIO,
        jobs: int = 1,
        limits: Limits | None = None,
        report: DefaultReport | None = None,
) -> List[Dict[str, Any]]:
    """
    Run every manifest row and write the CSV (header first, rows in manifest order).

    Args:
        manifest: Path to the manifest.
        stream: Where the CSV goes.
        jobs: Rows evaluated concurrently.
        limits: Size guards for every row.
        report: Shared report for diagnostics.
    """
    rows = read_manifest(manifest)
    limits = limits or Limits()
    report = report or DefaultReport()

    if jobs <= 1:
        results = [run_row(row, limits, report) for row in rows]
    else:
        with ThreadPoolExecutor(max_workers=jobs, thread_name_prefix="kairos-bench") as pool:
            futures = [
                pool.submit(_PARAGON.copy_current_context().run, run_row, row, limits, report)
                for row in rows
            ]
            results = [f.result() for f in futures]

    writer = csv.DictWriter(stream, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(results)
    return results
