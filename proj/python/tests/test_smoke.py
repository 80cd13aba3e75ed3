import pathlib

import pytest

import cclnc

PROGRAMS = pathlib.Path(__file__).resolve().parents[2] / "programs"


@pytest.fixture(scope="module")
def bothin():
    return cclnc.Program.load(str(PROGRAMS / "bothin.toy"))


def test_goal2(bothin):
    r = cclnc.solve(bothin, cclnc.goal_text("goal2", 4))
    assert r["answers"] == ["{X -> 2, Y -> 2}"]
    assert r["counters"]["label_choices"] <= 2


def test_goal2_without_projections(bothin):
    r = cclnc.solve(bothin, cclnc.goal_text("goal2", 100), projections=False, answers=0)
    assert r["answers"] == ["{X -> 50, Y -> 50}"]
    assert r["counters"]["label_choices"] >= 100


def test_goal3_all_answers(bothin):
    on = cclnc.solve(bothin, cclnc.goal_text("goal3", 4), answers=0)["answers"]
    off = cclnc.solve(bothin, cclnc.goal_text("goal3", 4), projections=False, answers=0)["answers"]
    assert len(on) == 5 and set(on) == set(off)


def test_goal5_trace(bothin):
    r = cclnc.solve(bothin, cclnc.goal_text("goal5"), answers=0, trace=True)
    assert sorted(r["answers"]) == ["{X -> 1, Y -> 1}", "{X -> 4, Y -> 4}"]
    assert any(rule == "IE" for _, rule, _, _ in r["trace"])


def test_inline_program_and_errors():
    p = cclnc.Program("double :: int -> int.\ndouble X = X #+ X.\n")
    assert cclnc.solve(p, "double 3 == Y")["answers"] == ["{Y -> 6}"]
    with pytest.raises(cclnc.SyntaxError):
        cclnc.Program("f X = (X.\n")
    with pytest.raises(cclnc.TypeError):
        cclnc.solve(p, "double true == Y")
    with pytest.raises(ValueError):
        cclnc.solve(p, "double 3 == Y", labeling="random")


def test_bench_smm():
    r = cclnc.bench("smm", labeling="ff")
    assert r["correct"] and len(r["answers"]) == 1
