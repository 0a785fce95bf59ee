import json

import pytest

from blockscope.chartab import char_level, character_table, level_witness
from blockscope.cli import CorpusEntry, parse_corpus
from blockscope.cyclo import level
from blockscope.perm import group_from_generators
from blockscope.verify import (
    CHECKS,
    STATEMENTS,
    PrimeContext,
    ProvenStatementViolated,
    _outcome,
    check_amn_consequence,
    check_consequences,
    check_conjecture_main,
    check_conjecture_ntC,
    check_lemma_suite,
    check_theorem_A,
    run_corpus,
    verify_group,
)

from conftest import DATA, build, load_corpus


def ctx_for(name, G, p):
    return PrimeContext(name, G, p)


@pytest.fixture(scope="module")
def sl28_3(SL28):
    return ctx_for("SL(2,8)", SL28, 3)


def test_conj_main_not_applicable(S3):
    out = check_conjecture_main(ctx_for("S3", S3, 3))
    assert out.verdict == "not_applicable" and out.scope == []


def test_conj_main_sl28(sl28_3):
    out = check_conjecture_main(sl28_3)
    assert out.verdict == "pass"
    assert {r["level"] for r in out.scope} == {2}
    assert all(r["level_N"] == 2 for r in out.scope)


def test_conj_main_fixture_24_4(trio):
    G = build(trio["SmallGroup(24,4)"])
    ctx = ctx_for("SmallGroup(24,4)", G, 2)
    out = check_conjecture_main(ctx)
    assert out.verdict == "pass"
    deg2 = [r for r in out.scope if r["degree"] == 2]
    assert deg2 and all((r["level"], r["level_D"], r["level_N"]) == (2, 0, 2) for r in deg2)
    kinds = {f["kind"] for f in ctx.findings}
    assert "level_differs_on_defect_group" in kinds


def test_ntC(sl28_3, S4):
    out = check_conjecture_ntC(sl28_3)
    assert out.verdict == "pass"
    assert any(r["level"] == 2 and r["degree"] == 7 for r in out.scope)
    assert check_conjecture_ntC(ctx_for("S4", S4, 2)).verdict == "not_applicable"


def test_theorem_A(sl28_3, S4):
    assert check_theorem_A(sl28_3).verdict == "pass"
    out = check_theorem_A(ctx_for("S4", S4, 3))
    assert out.verdict == "pass" and len(out.scope) == 5


def test_lemma_suite_trivial_group():
    G = group_from_generators(1, [])
    outs = verify_group("trivial", G)[0]
    assert outs == []  # no prime divides 1


def test_lemma_suite_s3(S3):
    outs = {o.statement_id: o for o in check_lemma_suite(ctx_for("S3", S3, 3))}
    assert set(outs) == {"lem_3_1", "cor_3_2", "lem_3_3", "lem_4_2", "lem_4_3", "lem_6_3"}
    assert all(o.verdict in ("pass", "not_applicable") for o in outs.values())
    rec = [r for r in outs["lem_4_3"].scope if r["subgroup_order"] == 3]
    assert rec and all(r["agree"] for r in rec)


def test_lemma_3_1_tight_on_sl28(sl28_3):
    out = CHECKS["lem_3_1"](sl28_3)
    assert max(r["level"] for r in out.scope) == 2
    assert {r["bound"] for r in out.scope if r["level"] == 2} == {2}


def test_amn(S4, sl28_3):
    out = check_amn_consequence(ctx_for("S4", S4, 3))
    assert out.verdict == "pass"
    assert all(r["count_equal"] for r in out.scope)
    assert check_amn_consequence(sl28_3).verdict == "pass"


def test_consequences(S3, sl28_3, trio):
    assert all(o.verdict == "not_applicable" for o in check_consequences(ctx_for("S3", S3, 3)))
    c73 = check_consequences(sl28_3)[1]
    assert c73.verdict == "pass" and c73.scope
    G = build(trio["SmallGroup(24,4)"])
    c74 = check_consequences(ctx_for("SmallGroup(24,4)", G, 2))[2]
    assert c74.verdict == "pass" and c74.scope


def test_verdict_routing(S3):
    ctx = ctx_for("S3", S3, 3)
    assert _outcome("conj_main", ctx, [{"x": 1}], False).verdict == "finding"
    with pytest.raises(ProvenStatementViolated):
        _outcome("thm_A", ctx, [{"x": 1}], False)


def test_level_witness(named_groups):
    # every level is attained on a single class
    for name in ("SL(2,8)", "SmallGroup(243,26)", "SmallGroup(96,64)"):
        G = build(named_groups[name])
        for chi in character_table(G):
            for p in (2, 3):
                w = level_witness(chi, p)
                assert level([chi.values[w]], p) == char_level(chi, p)


def entries(name):
    return parse_corpus((DATA / name).read_text())


def test_empty_corpus():
    report = run_corpus([])
    assert report.outcomes == [] and report.exit_code == 0


def test_every_requested_check_once():
    es = entries("paper_7_3.json")
    report = run_corpus(es, primes=[2])
    keys = [(o.group_name, o.prime, o.statement_id) for o in report.outcomes]
    assert len(keys) == len(set(keys)) == 3 * len(STATEMENTS)
    assert all(o.prime == 2 for o in report.outcomes)
    one = run_corpus(es, statements=["thm_A"])
    assert {o.statement_id for o in one.outcomes} == {"thm_A"}


def test_deterministic_across_jobs():
    es = entries("paper_7_3.json")
    a = json.dumps(run_corpus(es, jobs=1).to_dict(), sort_keys=True)
    b = json.dumps(run_corpus(es, jobs=3).to_dict(), sort_keys=True)
    assert a == b


def test_small_corpus_has_no_violations():
    es = [e for e in entries("small_groups.json") if e.expected["order"] <= 24]
    report = run_corpus(es)
    assert report.summary["fail"] == 0
    assert report.exit_code in (0, 2)


def test_fixture_trio_reproduces_levels(trio):
    report = run_corpus(entries("paper_7_3.json"))
    found = {}
    for f in report.findings:
        if f["kind"] == "level_differs_on_defect_group":
            found.setdefault(f["group"], set()).add((f["prime"], f["degree"], f["level"],
                                                     f["level_D"], f["level_N"]))
    for name, entry in trio.items():
        for p, exp in entry["expected"].items():
            if not p.isdigit():
                continue
            want = exp["conj_main"]
            assert (int(p), want["degree"], want["level"], want["level_D"],
                    want["level_N"]) in found[name]


def test_corpus_entry_roundtrip():
    es = entries("paper_7_3.json")
    assert all(isinstance(e, CorpusEntry) for e in es)
    again = parse_corpus(json.dumps({"groups": [e.to_dict() for e in es]}))
    assert again == es


def test_named_corpus_slow_checks_pass():
    outs = verify_group("A6", build({e["name"]: e for e in load_corpus("named_groups.json")}["A6"]))[0]
    assert not [o for o in outs if o.verdict in ("fail", "finding")]
