import pytest

from oracles import random_acyclic_program, rng
from ptsem.search import (Clause, Cutoff, Fail, Program, ProgramSyntaxError, Succeed,
                          SwapContinuation, TryClause, event_json, parse_program, solve,
                          solve_agrees_with_derivability)

GAMMA = Program.of(["a1 -> a", "a2 -> a", "a2"])


def test_worked_example_trace():
    ok, trace = solve(GAMMA, "a")
    assert ok is True
    assert trace == [TryClause("a", 0), Fail("a1"), SwapContinuation(0, 1), TryClause("a", 1),
                     TryClause("a2", 2), Succeed("a2"), Succeed("a")]


def test_fact_and_missing_goal():
    ok, trace = solve(GAMMA, "a2")
    assert ok and [e for e in trace if isinstance(e, Succeed)] == [Succeed("a2")]
    ok, trace = solve(GAMMA, "b")
    assert ok is False and trace == [Fail("b")]


def test_backtracking_into_earlier_goal():
    # when c fails, the saved alternative for b is resumed before a gives up
    p = Program.of(["b & c -> a", "b", "d -> b"])
    res = solve(p, "a")
    assert res.value is False
    assert SwapContinuation(1, 2) in res.trace


def test_cycles_hit_the_cap():
    p = Program.of(["a -> a"])
    res = solve(p, "a", depth_cap=5)
    assert res.value is None and res.status == "unknown"
    assert any(isinstance(e, Cutoff) for e in res.trace)
    rep = solve_agrees_with_derivability(p, depth_cap=5)
    assert not rep.acyclic and rep.unknown == [{"goal": "a", "derives": False}]
    assert rep.ok


def test_agreement_examples():
    rep = solve_agrees_with_derivability(GAMMA)
    assert rep.ok and rep.agree == ["a", "a1", "a2"]
    empty = solve_agrees_with_derivability(Program(()), ["a", "b"])
    assert empty.ok and empty.agree == ["a", "b"]


def test_random_acyclic_programs_agree_and_are_deterministic():
    r = rng(91)
    for _ in range(100):
        p, names = random_acyclic_program(r)
        rep = solve_agrees_with_derivability(p, names)
        assert rep.ok and not rep.unknown
        for g in names:
            assert solve(p, g).trace == solve(p, g).trace


def test_fail_is_followed_by_swap_or_propagation():
    r = rng(92)
    for _ in range(50):
        p, names = random_acyclic_program(r)
        for g in names:
            trace = solve(p, g).trace
            for i, e in enumerate(trace[:-1]):
                if isinstance(e, Fail):
                    nxt = trace[i + 1]
                    assert isinstance(nxt, (SwapContinuation, Fail))
                if isinstance(e, SwapContinuation):
                    assert p.clauses[e.from_clause].head == p.clauses[e.to_clause].head
                    assert trace[i + 1] == TryClause(p.clauses[e.to_clause].head, e.to_clause)


def test_program_parsing():
    p = parse_program("# comment\na1 -> a\na2, b -> a  # trailing\nb & c -> a\na2\n")
    assert p.clauses[1] == Clause(("a2", "b"), "a")
    assert p.clauses[2] == Clause(("b", "c"), "a")
    assert p.clauses[3] == Clause((), "a2")
    with pytest.raises(ProgramSyntaxError, match="line 1"):
        parse_program("a ->")
    assert event_json(SwapContinuation(0, 1)) == {"event": "SwapContinuation", "from_clause": 0, "to_clause": 1}
