import json

import msgpack
import pytest

from kairos.cli.formats import dump_dks
from kairos.cli.generators import chains, outstar
from kairos.cli.main import EXIT_GUARD, EXIT_INTERNAL, EXIT_OK, EXIT_PARSE, EXIT_VERIFY, main
from kairos.errors import InvariantViolation
from kairos.reductions.dks import DksInstance
from kairos.solvers import SOLVERS


@pytest.fixture
def outstar_file(tmp_path):
    path = tmp_path / "outstar.txt"
    path.write_text(outstar(6, m=3).dumps())
    return path


def test_solve_prints_the_makespan(outstar_file, capsys):
    assert main(["solve", str(outstar_file)]) == EXIT_OK
    assert capsys.readouterr().out == "makespan 3\n"


@pytest.mark.parametrize("algo", ["brute", "antichain-dp", "subexp", "subsetconv", "auto"])
def test_every_algorithm_writes_a_valid_witness(outstar_file, tmp_path, capsys, algo):
    witness = tmp_path / f"{algo}.sched"
    assert main(["solve", str(outstar_file), "--algo", algo, "--witness", str(witness)]) == EXIT_OK
    assert capsys.readouterr().out == "makespan 3\n"
    assert main(["verify", str(outstar_file), str(witness)]) == EXIT_OK
    assert capsys.readouterr().out == "ok makespan 3\n"


def test_stats_and_trace(outstar_file, tmp_path, capsys):
    stats, trace = tmp_path / "stats.json", tmp_path / "trace.bin"
    code = main(["solve", str(outstar_file), "--algo", "subexp", "--lambda", "2",
                 "--stats", str(stats), "--trace", str(trace)])
    assert code == EXIT_OK
    data = json.loads(stats.read_text())
    assert set(data) == {'algorithm', 'makespan', 'n', 'm', 'generating_arcs', 'closure_arcs',
                         'wall_time', 'counters', 'metrics', 'dispatch', 'tags', 'session', 'monitor'}
    assert (data['algorithm'], data['makespan'], data['n'], data['m']) == ("subexp", 3, 7, 3)
    assert data['generating_arcs'] == data['closure_arcs'] == 6
    assert data['counters']['lambda'] == 2
    assert data['dispatch'] is None
    assert data['tags'] == ["algo:subexp"]
    assert data['session']['session_name'] == "solve:outstar.txt"
    assert data['monitor']['total_events'] > 0

    events = msgpack.unpackb(trace.read_bytes(), raw=False)
    assert any(e['etype'] == "subexp_completed" for e in events['events'])


def test_stats_record_the_dispatch(outstar_file, tmp_path):
    stats = tmp_path / "stats.json"
    assert main(["solve", str(outstar_file), "--stats", str(stats)]) == EXIT_OK
    assert json.loads(stats.read_text())['dispatch'] == "subsetconv"


def test_lambda_accepts_a_rule_name(outstar_file, tmp_path, capsys):
    stats = tmp_path / "stats.json"
    code = main(["solve", str(outstar_file), "--algo", "subexp", "--lambda", "proportional", "--stats", str(stats)])
    assert code == EXIT_OK
    assert capsys.readouterr().out == "makespan 3\n"
    assert json.loads(stats.read_text())['counters']['lambda'] == 1


def test_unknown_lambda_rule(outstar_file, capsys):
    assert main(["solve", str(outstar_file), "--algo", "subexp", "--lambda", "bogus"]) == EXIT_GUARD
    assert "error:" in capsys.readouterr().err


def test_lambda_is_rejected_for_other_algorithms(outstar_file, capsys):
    assert main(["solve", str(outstar_file), "--algo", "brute", "--lambda", "2"]) == EXIT_GUARD
    assert "error:" in capsys.readouterr().err


def test_exit_codes_for_bad_input(tmp_path, capsys):
    missing = tmp_path / "missing.txt"
    assert main(["solve", str(missing)]) == EXIT_PARSE

    malformed = tmp_path / "malformed.txt"
    malformed.write_text("p usched 2 1\na 1 9\n")
    assert main(["solve", str(malformed)]) == EXIT_PARSE

    cyclic = tmp_path / "cyclic.txt"
    cyclic.write_text("p usched 2 1\na 1 2\na 2 1\n")
    assert main(["solve", str(cyclic)]) == EXIT_PARSE


def test_exit_code_for_a_size_guard(tmp_path):
    path = tmp_path / "big.txt"
    path.write_text(chains(2, 10, m=2).dumps())
    assert main(["solve", str(path), "--max-jobs", "10"]) == EXIT_GUARD
    assert main(["solve", str(path), "--algo", "brute"]) == EXIT_GUARD


@pytest.mark.parametrize("schedule,condition", [
    ("1\n2 3 4 5\n6 7\n", "capacity"),
    ("2 3\n1\n4 5 6\n7\n", "precedence"),
    ("1\n2 3 4\n", "coverage"),
])
def test_verify_reports_the_failed_condition(outstar_file, tmp_path, capsys, schedule, condition):
    path = tmp_path / "bad.sched"
    path.write_text(schedule)
    assert main(["verify", str(outstar_file), str(path)]) == EXIT_VERIFY
    assert capsys.readouterr().out.startswith(f"infeasible {condition}:")


def test_gen_solve_verify_pipeline(tmp_path, capsys):
    assert main(["gen", "--family", "chains", "3", "3", "--machines", "3"]) == EXIT_OK
    instance = tmp_path / "chains.txt"
    instance.write_text(capsys.readouterr().out)
    assert instance.read_text().startswith("c family chains 3 3\np usched 9 3\n")

    witness = tmp_path / "chains.sched"
    assert main(["solve", str(instance), "--witness", str(witness)]) == EXIT_OK
    assert capsys.readouterr().out == "makespan 3\n"
    assert main(["verify", str(instance), str(witness)]) == EXIT_OK
    assert capsys.readouterr().out == "ok makespan 3\n"


def test_gen_random_records_the_seed(capsys):
    assert main(["gen", "--family", "random", "6", "0.5", "--seed", "4"]) == EXIT_OK
    first = capsys.readouterr().out
    assert "c seed 4\n" in first
    assert main(["gen", "--family", "random", "6", "0.5", "--seed", "4"]) == EXIT_OK
    assert capsys.readouterr().out == first


def test_gen_dks(tmp_path, capsys):
    source = tmp_path / "triangle.dks"
    source.write_text(dump_dks(DksInstance(3, ((0, 1), (1, 2), (0, 2)), kappa=3, ell=3)))
    assert main(["gen", "--family", "dks", "--dks-file", str(source)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "p usched 39 13\n" in out

    instance = tmp_path / "triangle.txt"
    instance.write_text(out)
    assert main(["solve", str(instance), "--algo", "antichain-dp", "--max-jobs", "64"]) == EXIT_OK
    assert capsys.readouterr().out == "makespan 3\n"


def test_gen_dks_needs_a_file():
    assert main(["gen", "--family", "dks"]) == EXIT_GUARD


def test_gen_bad_family_parameters():
    assert main(["gen", "--family", "chains", "3"]) == EXIT_GUARD


def test_internal_errors_have_their_own_exit_code(outstar_file, monkeypatch, capsys):
    def broken(inst, **kwargs):
        raise InvariantViolation("[Test] broken solver")

    monkeypatch.setitem(SOLVERS, "subsetconv", broken)
    assert main(["solve", str(outstar_file), "--algo", "subsetconv"]) == EXIT_INTERNAL
    assert "broken solver" in capsys.readouterr().err


def test_verify_rejects_unknown_jobs(outstar_file, tmp_path, capsys):
    path = tmp_path / "stray.sched"
    path.write_text("1\n2 3 4\n5 6 99\n")
    assert main(["verify", str(outstar_file), str(path)]) == EXIT_PARSE
    assert "99" in capsys.readouterr().err
