import io
import json

import pytest

from kairos.adats.monitor import DefaultMonitor
from kairos.adats.report import DefaultReport
from kairos.adats.session import DefaultSession, Limits
from kairos.aspects.events import deserialize_event


def test_monitor_counters():
    monitor = DefaultMonitor()
    monitor.increment_metric("states")
    monitor.increment_metric("states", 4)
    monitor.set_max_metric("height", 3)
    monitor.set_max_metric("height", 2)
    assert monitor.get_metric("states") == 5
    assert monitor.get_metric("height") == 3
    assert monitor.get_metric("absent", default=-1) == -1
    assert monitor.get_metrics() == {'states': 5, 'height': 3}


def test_monitor_events_round_trip_through_msgpack():
    monitor = DefaultMonitor()
    monitor.track("dispatch", branch="subexp", n=9)
    start = monitor.start_timer("phase")
    monitor.stop_timer("phase", start, slots=3)
    data = deserialize_event(monitor.serialize_events())
    assert [e['etype'] for e in data['events']] == ["dispatch", "phase_started", "phase_completed"]
    assert data['events'][0]['metadata'] == {'branch': "subexp", 'n': 9}
    assert data['events'][2]['metadata']['slots'] == 3
    assert data['event_count'] == 3


def test_monitor_buffer_is_bounded():
    monitor = DefaultMonitor(max_buffer_size=2)
    for i in range(5):
        monitor.track("tick", i=i)
    summary = monitor.get_summary()
    assert summary['total_events'] == 2
    assert summary['dropped_events'] == 3
    assert summary['events_by_type'] == {'tick': 2}
    assert summary['buffer_usage'] == 1.0


def test_report_filters_by_level():
    stream = io.StringIO()
    report = DefaultReport(output_stream=stream, log_level="INFO")
    report.debug("hidden")
    report.info("shown", n=3)
    report.error("failed")
    lines = stream.getvalue().splitlines()
    assert len(lines) == 2
    assert "INFO: shown" in lines[0]
    assert json.loads(lines[0].split(" | ", 1)[1]) == {'n': 3}
    assert "ERROR: failed" in lines[1]


def test_report_solve_line():
    stream = io.StringIO()
    report = DefaultReport(output_stream=stream, log_level="DEBUG")
    report.log_solve(algorithm="subexp", makespan=4, wall_time=0.5, n=9, m=3)
    payload = json.loads(stream.getvalue().split(" | ", 1)[1])
    assert payload['algorithm'] == "subexp"
    assert payload['makespan'] == 4


def test_report_warn_uses_the_warning_level():
    stream = io.StringIO()
    report = DefaultReport(output_stream=stream)
    report.info("hidden")
    report.warn("Racer dropped out", racer="subsetconv")
    (line,) = stream.getvalue().splitlines()
    assert "WARNING: Racer dropped out" in line


def test_report_rejects_unknown_levels():
    with pytest.raises(ValueError):
        DefaultReport(log_level="LOUD")


def test_session_state_and_snapshot():
    session = DefaultSession(name="run", limits=Limits(max_jobs=32))
    session.set("dispatch", "subexp")
    session.add_tag("bench")
    session.add_tag("bench")
    snap = session.get_state_snapshot()
    assert snap['session_name'] == "run"
    assert snap['tags'] == ["bench"]
    assert snap['limits']['max_jobs'] == 32
    assert snap['state'] == {'dispatch': "subexp"}
    assert session.get("missing", 7) == 7
