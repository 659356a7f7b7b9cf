import pytest

from oracles import random_formula, rng
from ptsem.syntax import (BOT, TOP, And, Atom, FormulaSyntaxError, Imp, Or, Sequent, depth,
                          formulas_up_to_depth, parse_formula, parse_sequent, print_formula,
                          print_sequent, size, subformulas)

a, b, c = Atom("a"), Atom("b"), Atom("c")


@pytest.mark.parametrize("text, expected", [
    ("a -> b -> a", Imp(a, Imp(b, a))),
    ("a & b | c", Or(And(a, b), c)),
    ("bot -> a", Imp(BOT, a)),
    ("(a -> b) -> a", Imp(Imp(a, b), a)),
    ("a | b | c", Or(Or(a, b), c)),
    ("a & (b | c)", And(a, Or(b, c))),
    ("top", TOP),
])
def test_parse(text, expected):
    assert parse_formula(text) == expected


@pytest.mark.parametrize("f, text", [
    (Imp(a, Imp(b, a)), "a -> b -> a"),
    (And(a, b), "a & b"),
    (Or(And(a, b), c), "a & b | c"),
    (Imp(Imp(a, b), a), "(a -> b) -> a"),
    (And(a, Or(b, c)), "a & (b | c)"),
    (Or(a, Or(b, c)), "a | (b | c)"),
])
def test_print(f, text):
    assert print_formula(f) == text


@pytest.mark.parametrize("bad", ["a ->", "(a", "a b", "#0", "A", "a & & b", ""])
def test_syntax_errors(bad):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(bad)


def test_reserved_prefix_message():
    with pytest.raises(FormulaSyntaxError, match="reserved"):
        parse_formula("a -> #3")


def test_round_trip_random():
    r = rng(11)
    for _ in range(500):
        f = random_formula(r, ["a", "b", "c"], r.randint(0, 8))
        assert parse_formula(print_formula(f)) == f


def test_round_trip_exhaustive_depth_2():
    for f in formulas_up_to_depth(2, ["a", "b"]):
        assert parse_formula(print_formula(f)) == f


@pytest.mark.parametrize("text, expected", [
    ("a |- a | a", ["a", "a | a"]),
    ("|- (a->b)->a", ["a", "b", "a -> b", "(a -> b) -> a"]),
    ("a&b |- b", ["a", "b", "a & b"]),
])
def test_subformulas(text, expected):
    assert [print_formula(f) for f in subformulas(parse_sequent(text))] == expected


def test_subformulas_subterm_closed():
    r = rng(12)
    for _ in range(200):
        s = Sequent((random_formula(r, ["a", "b"], 3),), random_formula(r, ["a", "b"], 4))
        xs = subformulas(s)
        assert len(xs) == len(set(xs))
        for f in xs:
            for child in getattr(f, "left", None), getattr(f, "right", None):
                if child is not None:
                    assert child in xs


def test_sequent_parsing_and_printing():
    s = parse_sequent("a, a & b |- b")
    assert s.antecedents == (a, And(a, b)) and s.succedent == b
    assert print_sequent(parse_sequent("|- a")) == "|- a"
    assert parse_sequent("a, a |- a").antecedents == (a,)


def test_size_and_depth():
    f = parse_formula("(a -> b) & c")
    assert size(f) == 2
    assert depth(f) == 3
    assert depth(a) == 1


def test_formula_count_depth_3():
    # leaves a, b, top, bot: n1 = 4, n2 = 4 + 3*4^2 = 52, n3 = 4 + 3*52^2 = 8116
    fs = formulas_up_to_depth(3, ["a", "b"])
    assert len(fs) == 8116 == len(set(fs))
    assert max(depth(f) for f in fs) == 3
