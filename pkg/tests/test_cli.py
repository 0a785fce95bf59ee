import io
import json
from pathlib import Path

import pytest

from blockscope.cli import DuplicateName, ParseError, dispatch, emit, ingest, parse_corpus
from blockscope.perm import MalformedPermutation

from conftest import DATA

GOLDEN = Path(__file__).parent / "golden"
TRIO = str(DATA / "paper_7_3.json")
EMPTY = str(DATA / "empty.json")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_ingest_trivial(tmp_path):
    p = tmp_path / "one.json"
    p.write_text('{"groups": [{"name": "1", "degree": 1, "generators": []}]}')
    (e,) = ingest(p)
    assert e.degree == 1 and e.generators == []


def test_ingest_fixture():
    es = ingest(TRIO)
    assert [e.name for e in es] == ["SmallGroup(24,4)", "SmallGroup(48,5)", "SmallGroup(108,19)"]
    assert [e.group().order for e in es] == [24, 48, 108]


def test_ingest_errors():
    with pytest.raises(MalformedPermutation):
        parse_corpus('{"groups": [{"name": "x", "degree": 3, "generators": [[0, 0, 1]]}]}')
    with pytest.raises(DuplicateName):
        parse_corpus('{"groups": [{"name": "x", "degree": 1, "generators": []},'
                     ' {"name": "x", "degree": 1, "generators": []}]}')
    with pytest.raises(ParseError) as info:
        parse_corpus('{"groups": [\n  {"name": }\n]}')
    assert info.value.line == 2 and info.value.column > 1


def test_emit_roundtrip():
    es = ingest(TRIO)
    assert parse_corpus(emit(es)) == es


def test_verify_empty():
    code, out, _ = run("verify", EMPTY)
    assert code == 0
    assert json.loads(out)["outcomes"] == []


def test_verify_golden():
    code, out, _ = run("verify", TRIO)
    assert code == 0
    assert out == (GOLDEN / "paper_7_3_report.json").read_text()
    again = run("verify", TRIO)[1]
    assert again == out


def test_verify_prime_filter_findings():
    code, out, _ = run("verify", TRIO, "--prime", "2")
    assert code == 0
    report = json.loads(out)
    hits = [f for f in report["findings"] if f["group"] == "SmallGroup(24,4)"
            and f["kind"] == "level_differs_on_defect_group"]
    assert hits and all((f["level"], f["level_D"]) == (2, 0) for f in hits)
    assert {o["prime"] for o in report["outcomes"]} == {2}


def test_verify_statement_filter_and_text():
    code, out, _ = run("verify", TRIO, "--statement", "thm_A", "--text")
    assert code == 0
    assert "thm_A" in out and "conj_main" not in out


def test_exit_code_two_for_findings(monkeypatch):
    from blockscope import verify

    def always_finding(ctx):
        return verify.CheckOutcome("conj_main", ctx.name, ctx.p, "finding", [{}])

    monkeypatch.setitem(verify.CHECKS, "conj_main", always_finding)
    code, _, _ = run("verify", TRIO, "--statement", "conj_main")
    assert code == 2


def test_exit_code_one_for_violation(monkeypatch):
    from blockscope import verify

    def broken(ctx):
        return verify._outcome("thm_A", ctx, [{}], False)

    monkeypatch.setitem(verify.CHECKS, "thm_A", broken)
    code, _, err = run("verify", TRIO, "--statement", "thm_A")
    assert code == 1 and "thm_A violated" in err


def test_errors_exit_one(tmp_path):
    assert run("nonsense")[0] == 1
    assert run("verify", str(tmp_path / "missing.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"groups": [{"name": "x", "degree": 2, "generators": [[1, 1]]}]}')
    code, _, err = run("verify", str(bad))
    assert code == 1 and "MalformedPermutation" in err
    assert run("verify", TRIO, "--statement", "no_such")[0] == 1


def test_table_and_blocks():
    code, out, _ = run("table", TRIO, "--group", "SmallGroup(24,4)")
    assert code == 0 and out.startswith("SmallGroup(24,4)  order 24")
    code, out, _ = run("blocks", TRIO, "--prime", "2", "--group", "SmallGroup(24,4)")
    assert code == 0 and "principal" in out and "level 2" in out


def test_weil_and_sl2():
    code, out, _ = run("weil", "--n", "3", "--q", "2", "--p", "3")
    assert code == 0 and json.loads(out)["verdict"] == "pass"
    assert run("weil", "--n", "3", "--q", "2")[0] == 0
    code, out, _ = run("sl2", "--q", "8")
    assert code == 0 and all(o["verdict"] == "pass" for o in json.loads(out))


def test_seed_flag():
    a = run("--seed", "3", "verify", TRIO, "--statement", "conj_main")
    b = run("verify", TRIO, "--statement", "conj_main", "--seed", "3")
    assert a[0] == b[0] == 0 and a[1] == b[1]
    assert json.loads(a[1])["metadata"]["seed"] == 3
