import json

import pytest
from click.testing import CliRunner
from hypothesis import given, settings
from hypothesis import strategies as st

from frobkit.cli import (Report, RunOptions, SessionError, emit, execute, format_session, main,
                         parse_session)

HYPERSURFACE = """\
char 2
ring S vars x:1 ideal { x^2 }
cmd test-kunz S
cmd betti k --cutoff 4
"""

CORPUS = [
    HYPERSURFACE,
    "char 2\nring G vars x, y ideal { x^2; x*y; y^2 }\ncmd betti k --cutoff 5\ncmd deviations G\n",
    "char 2\nring R vars u\nring S vars v\nmap phi : R -> S { u = v^2 }\n"
    "cmd test-regular phi --cutoff 4\ncmd relfrob phi\n",
    "char 3\nring W vars u:2, v:1 ideal { v^2 + u }\nmodule M over W gens 0, 1 rels { [v, 2] }\n"
    "cmd hilbert M --cutoff 3\ncmd pushforward W --e 2\n",
    "char 2\nring R vars u\nring S vars u, v\nmap inc : R -> S { u = u }\ncmd test-regular inc\n",
]


def run(tmp_path, text, *args):
    path = tmp_path / "session.frk"
    path.write_text(text)
    return CliRunner().invoke(main, [str(path), *args], catch_exceptions=False)


@pytest.mark.parametrize("text", CORPUS)
def test_print_parse_round_trip(text):
    s = parse_session(text)
    again = parse_session(format_session(s))
    assert again.statements == s.statements and again.char == s.char
    assert format_session(again) == format_session(s)


def test_kunz_on_hypersurface(tmp_path):
    res = run(tmp_path, HYPERSURFACE)
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    kunz, betti = doc["results"]
    assert kunz["verdict"] == "NOT_REGULAR" and kunz["data"]["evidence"]["beta1"] == 2
    assert betti["data"]["poincare"] == [1, 1, 1, 1, 1]
    assert list(doc) == ["input_sha256", "results", "version"]


def test_golod_betti_totals():
    report = execute(parse_session(CORPUS[1]), RunOptions())
    assert report.results[0]["data"]["poincare"] == [1, 2, 4, 8, 16, 32]
    assert report.results[1]["data"]["deviations"][:3] == [2, 3, 2]


def test_json_is_byte_identical_across_runs_and_jobs(tmp_path):
    text = "".join(CORPUS[0].splitlines(True)[:2]) + "cmd betti S --cutoff 3\ncmd betti F*S\n"
    outs = {run(tmp_path, text).stdout_bytes for _ in range(2)}
    outs.add(run(tmp_path, text, "--jobs", "2").stdout_bytes)
    assert len(outs) == 1


def test_timings_are_opt_in(tmp_path):
    plain = json.loads(run(tmp_path, HYPERSURFACE).stdout)
    timed = json.loads(run(tmp_path, HYPERSURFACE, "--timings").stdout)
    assert all(r["ms"] is None for r in plain["results"])
    assert all(isinstance(r["ms"], int) for r in timed["results"])


def test_csv_rows(tmp_path):
    res = run(tmp_path, HYPERSURFACE, "--format", "csv")
    lines = res.stdout.splitlines()
    assert lines[0] == "object,n,internal_degree,beta"
    assert "k,3,3,1" in lines


def test_text_format_has_aligned_table(tmp_path):
    out = run(tmp_path, HYPERSURFACE, "--format", "text").stdout
    assert "betti k: COMPUTED" in out
    assert "total" in out and "poincare: [1, 1, 1, 1, 1]" in out


def test_out_file(tmp_path):
    target = tmp_path / "report.json"
    res = run(tmp_path, HYPERSURFACE, "--out", str(target))
    assert res.stdout == "" and json.loads(target.read_text())["results"]


def test_rationals_print_as_fractions():
    report = execute(parse_session("char 2\nring S vars x ideal { x^3 }\ncmd pushforward S\n"),
                     RunOptions())
    body = emit(report).decode()
    assert '"degrees":["0","1/2"]' in body


def test_empty_session(tmp_path):
    res = run(tmp_path, "char 2\n")
    assert res.exit_code == 0
    assert json.loads(res.stdout)["results"] == []
    assert emit(execute(parse_session(""), RunOptions())).startswith(b'{"input_sha256"')


def test_default_cutoff_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("FROBKIT_DEFAULT_CUTOFF", "3")
    doc = json.loads(run(tmp_path, "char 2\nring S vars x ideal { x^2 }\ncmd betti k\n").stdout)
    assert doc["results"][0]["data"]["poincare"] == [1, 1, 1, 1]


@pytest.mark.parametrize("text,code,line,col", [
    ("char 2\nring S vars x:1 ideal { x^2 + x }\n", "NONHOMOGENEOUS", 2, 25),
    ("char 4\n", "CHARACTERISTIC", 1, 6),
    ("char 2\nchar 3\n", "CHARACTERISTIC", 2, 1),
    ("char 2\nring S vars x\ncmd betti T\n", "UNKNOWN_IDENTIFIER", 3, 11),
    ("char 2\nring S vars x\ncmd frobnicate S\n", "UNKNOWN_COMMAND", 3, 5),
    ("char 2\nring S vars x\ncmd check-eth S\n", "ARITY", 3, 1),
    ("char 2\nring S vars x\nmap f : S -> T { x = x }\n", "UNKNOWN_IDENTIFIER", 3, 14),
    ("char 2\nmatrix M\n", "SYNTAX", 2, 1),
])
def test_parse_errors_carry_position(text, code, line, col):
    with pytest.raises(SessionError) as info:
        parse_session(text)
    assert (info.value.code, info.value.line, info.value.column) == (code, line, col)


def test_parse_error_exit_code_and_message(tmp_path):
    res = run(tmp_path, "char 2\nring S vars x:1 ideal { x^2 + x }\n")
    assert res.exit_code == 2
    assert ":2:25: NONHOMOGENEOUS:" in res.stderr


NON_FLAT = "char 2\nring R vars u ideal { u^2 }\nring K vars t\nmap pt : R -> K { u = 0 }\n"


def test_inconclusive_exit_codes(tmp_path):
    text = NON_FLAT + "cmd test-regular pt --cutoff 3\n"
    assert run(tmp_path, text).exit_code == 3
    assert run(tmp_path, text, "--strict").exit_code == 2


def test_command_errors_are_recorded_and_run_continues(tmp_path):
    text = ("char 2\nring S vars x ideal { x^2 }\nring T vars y\n"
            "cmd check-eth S T\ncmd test-kunz S\n")
    res = run(tmp_path, text)
    assert res.exit_code == 2
    first, second = json.loads(res.stdout)["results"]
    assert first["verdict"] == "ERROR" and second["verdict"] == "NOT_REGULAR"
    stopped = json.loads(run(tmp_path, text, "--fail-fast").stdout)["results"]
    assert len(stopped) == 1


def test_map_report_names_the_verdict():
    report = execute(parse_session(CORPUS[4]), RunOptions(cutoff=4))
    body = emit(report).decode()
    assert '{"command":"test-regular","cutoffs"' in body
    assert report.results[0]["verdict"] == "REGULAR_MAP"


OUTCOMES = ["PASS", "FAIL", "INCONCLUSIVE", "ERROR"]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(OUTCOMES), max_size=6), st.booleans())
def test_exit_code_contract(outcomes, strict):
    report = Report("0", "0" * 64, [{"outcome": o} for o in outcomes])
    code = report.exit_code(strict)
    if "FAIL" in outcomes or "ERROR" in outcomes:
        assert code == 2
    elif "INCONCLUSIVE" in outcomes:
        assert code == (2 if strict else 3)
    else:
        assert code == 0
