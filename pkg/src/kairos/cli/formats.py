"""
File: "src/kairos/cli/formats.py"
Context: Line-oriented text formats for instances, schedules and DκS inputs.

Job and vertex IDs are 1-based in files and 0-based in memory.

    instance:  p usched <n> <m>     a <u> <v>  (u before v)    c <comment>
    schedule:  one timeslot per line, blank line ends the schedule
    dks:       p dks <N> <M> <kappa> <ell>    e <u> <v>        c <comment>
"""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple

from ..graph.jobset import members
from ..graph.poset import build_graph
from ..reductions.dks import DksInstance
from ..schedule.model import Schedule
from ..solvers.base import Instance
from ..errors import ParseError

Arc = Tuple[int, int]


@dataclass(frozen=True, slots=True)
class InstanceFile:
    """A parsed instance file: the generating arcs as written, 0-based and sorted."""
    n: int
    m: int
    arcs: Tuple[Arc, ...]

    @classmethod
    def of(cls, n: int, m: int, arcs: Sequence[Arc]) -> "InstanceFile":
        return cls(n, m, tuple(sorted(set(arcs))))

    def build(self) -> Instance:
        """Close the relation and wrap it as an Instance."""
        return Instance(build_graph(self.n, self.arcs), self.m)

    def dumps(self, comments: Sequence[str] = ()) -> str:
        lines = [f"c {c}" for c in comments]
        lines.append(f"p usched {self.n} {self.m}")
        lines.extend(f"a {u + 1} {v + 1}" for u, v in self.arcs)
        return "\n".join(lines) + "\n"


def _tokens(text: str):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        yield line_no, parts


def _ints(parts: Sequence[str], count: int, line_no: int) -> List[int]:
    if len(parts) != count:
        raise ParseError(f"Expected {count} fields, got {len(parts)}", line_no)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"Non-integer field in {' '.join(parts)!r}", line_no) from None


def _job(value: int, n: int, line_no: int) -> int:
    if not 1 <= value <= n:
        raise ParseError(f"ID {value} outside 1..{n}", line_no)
    return value - 1


def parse_instance(text: str) -> InstanceFile:
    """
    Parse `p usched` text.

    Raises:
        ParseError: missing or repeated header, malformed lines, IDs out of range or m < 1.
    """
    header: Tuple[int, int] | None = None
    arcs: List[Arc] = []
    for line_no, parts in _tokens(text):
        kind = parts[0]
        if kind == "p":
            if header is not None:
                raise ParseError("Repeated header", line_no)
            if len(parts) != 4 or parts[1] != "usched":
                raise ParseError("Header must read 'p usched <n> <m>'", line_no)
            n, m = _ints(parts[2:], 2, line_no)
            if n < 0 or m < 1:
                raise ParseError(f"Invalid header values n={n}, m={m}", line_no)
            header = (n, m)
        elif kind == "a":
            if header is None:
                raise ParseError("Arc before header", line_no)
            u, v = _ints(parts[1:], 2, line_no)
            arcs.append((_job(u, header[0], line_no), _job(v, header[0], line_no)))
        else:
            raise ParseError(f"Unknown line type {kind!r}", line_no)
    if header is None:
        raise ParseError("Missing 'p usched' header")
    return InstanceFile.of(header[0], header[1], arcs)


def load_instance(path: str | Path) -> InstanceFile:
    return parse_instance(Path(path).read_text())


def parse_schedule(text: str, m: int, n: int | None = None) -> Schedule:
    """
    One timeslot per line; stops at the first blank line.

    Args:
        text: The schedule file contents.
        m: Machine count.
        n: Job count of the instance; IDs above it are rejected.

    Raises:
        ParseError: malformed or out-of-range IDs, or a job listed twice.
    """
    slots = []
    seen = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            break
        mask = 0
        for part in parts:
            try:
                job = int(part)
            except ValueError:
                raise ParseError(f"Non-integer job {part!r}", line_no) from None
            if job < 1:
                raise ParseError(f"Job IDs are 1-based, got {job}", line_no)
            if n is not None and job > n:
                raise ParseError(f"Job {job} outside 1..{n}", line_no)
            if job in seen:
                raise ParseError(f"Job {job} scheduled twice", line_no)
            seen.add(job)
            mask |= 1 << (job - 1)
        slots.append(mask)
    return Schedule(tuple(slots), m)


def load_schedule(path: str | Path, m: int, n: int | None = None) -> Schedule:
    return parse_schedule(Path(path).read_text(), m, n)


def dump_schedule(s: Schedule) -> str:
    return "".join(" ".join(str(v + 1) for v in members(slot)) + "\n" for slot in s.slots)


def parse_dks(text: str) -> DksInstance:
    """
    Parse `p dks` text.

    Raises:
        ParseError: malformed lines, or an edge count that disagrees with the header.
    """
    header: List[int] | None = None
    edges: List[Arc] = []
    for line_no, parts in _tokens(text):
        kind = parts[0]
        if kind == "p":
            if header is not None:
                raise ParseError("Repeated header", line_no)
            if len(parts) != 6 or parts[1] != "dks":
                raise ParseError("Header must read 'p dks <N> <M> <kappa> <ell>'", line_no)
            header = _ints(parts[2:], 4, line_no)
        elif kind == "e":
            if header is None:
                raise ParseError("Edge before header", line_no)
            u, v = _ints(parts[1:], 2, line_no)
            edges.append((_job(u, header[0], line_no), _job(v, header[0], line_no)))
        else:
            raise ParseError(f"Unknown line type {kind!r}", line_no)
    if header is None:
        raise ParseError("Missing 'p dks' header")
    vertices, count, kappa, ell = header
    if count != len(edges):
        raise ParseError(f"Header announces {count} edges, found {len(edges)}")
    return DksInstance(vertices=vertices, edges=tuple(edges), kappa=kappa, ell=ell)


def load_dks(path: str | Path) -> DksInstance:
    return parse_dks(Path(path).read_text())


def dump_dks(d: DksInstance) -> str:
    lines = [f"p dks {d.vertices} {len(d.edges)} {d.kappa} {d.ell}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in sorted(d.edges))
    return "\n".join(lines) + "\n"
