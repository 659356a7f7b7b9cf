import itertools

import pytest

from oracles import BruteSupport, random_rule, rng
from ptsem.bases import AtomicRule, UnknownAtomError, derives
from ptsem.support import (UniverseError, WorldUniverse, atomic_collapse, format_universe, infers,
                           parse_universe, support_extent, supports, valid)
from ptsem.syntax import BOT, Atom, formulas_up_to_depth, parse_formula

F = parse_formula


@pytest.fixture
def W1():
    return WorldUniverse(["a"], ["=> a"])


def test_support_examples(W1):
    assert supports(W1, [0], Atom("a"))
    assert not supports(W1, [], F("a | a"))
    assert supports(W1, [0], F("a | a"))
    assert supports(W1, [0], BOT)
    assert not supports(W1, [], BOT)


def test_infers_examples(W1):
    assert infers(W1, [], [Atom("a")], Atom("a"))
    assert infers(W1, [], [Atom("a")], F("a | a"))
    # empty premises read as support at every extension
    for B, exts in (([], [[], [0]]), ([0], [[0]])):
        for phi in formulas_up_to_depth(2, ["a"]):
            assert infers(W1, B, [], phi) == all(supports(W1, C, phi) for C in exts)


def test_valid_examples(W1):
    assert valid(W1, [Atom("a")], Atom("a"))
    assert valid(W1, [], F("a -> a"))
    assert not valid(W1, [], Atom("a"))


def test_errors(W1):
    with pytest.raises(UnknownAtomError):
        supports(W1, [], Atom("zz"))
    with pytest.raises(UniverseError):
        supports(W1, [5], Atom("a"))
    with pytest.raises(UniverseError, match="upward closed"):
        WorldUniverse(["a", "b"], ["=> a", "=> b"], [[0]])
    names = [f"p{i}" for i in range(21)]
    with pytest.raises(UniverseError, match="limit"):
        WorldUniverse(names, [AtomicRule.axiom(p) for p in names])
    with pytest.raises(UniverseError, match="duplicate"):
        WorldUniverse(["a"], ["=> a", "=> a"])


def test_explicit_universe_without_bottom():
    W = WorldUniverse(["a", "b"], ["=> a", "=> b"], [[0], [0, 1]])
    assert len(W) == 2
    assert supports(W, [0], Atom("a"))
    with pytest.raises(UniverseError):
        supports(W, [], Atom("a"))
    # every world derives a, so a | b holds even at {0}
    assert supports(W, [0], F("a | b"))


def test_universe_file_round_trip():
    text = "atoms: a, b\nrules:\n  0: => a\n  1: ([a] => b) => b\nbases: all-subsets\n"
    W = parse_universe(text)
    assert len(W) == 4 and format_universe(W) == text
    explicit = parse_universe("atoms: a\nrules:\n 0: => a\nbases:\n {0}\n")
    assert explicit.mode == "explicit" and len(explicit) == 1
    assert parse_universe(format_universe(explicit)).worlds == explicit.worlds


@pytest.mark.parametrize("bad", [
    "atoms: a\nrules:\n 0: => a\n",
    "atoms: a\nrules:\n 1: => a\nbases: all-subsets\n",
    "atoms: a\nrules:\n 0: => a\nbases:\n {0,\n",
    "atoms: a\nrules:\n 0: => z\nbases: all-subsets\n",
])
def test_universe_file_errors(bad):
    with pytest.raises((UniverseError, UnknownAtomError)):
        parse_universe(bad)


def _random_universes(seed_salt, count, names=("a", "b"), max_rules=4):
    r = rng(seed_salt)
    for _ in range(count):
        rules = []
        while len(rules) < r.randint(0, max_rules):
            rule = random_rule(r, list(names), 2, 2)
            if rule not in rules:
                rules.append(rule)
        yield WorldUniverse(names, rules)


def test_agrees_with_brute_force_evaluator():
    fs = formulas_up_to_depth(2, ["a", "b"])
    for W in _random_universes(41, 25):
        brute = BruteSupport(W)
        for phi in fs:
            ext = W.cache.extent(phi)
            for i in range(len(W)):
                assert bool(ext >> i & 1) == brute.supports(i, phi), (format_universe(W), phi, i)


def test_monotone_and_extension_idempotent():
    fs = formulas_up_to_depth(2, ["a", "b"])
    for W in _random_universes(42, 25):
        for phi in fs:
            ext = set(support_extent(W, phi))
            for i in range(len(W)):
                ups = W.extensions(i)
                if i in ext:
                    assert set(ups) <= ext
                assert (i in ext) == all(j in ext for j in ups)


def test_atomic_collapse_with_promotion_axioms():
    r = rng(43)
    names = ["a", "b"]
    for _ in range(60):
        extra = [random_rule(r, names, 2, 2) for _ in range(r.randint(0, 2))]
        rules = [AtomicRule.axiom(p) for p in names] + [x for x in dict.fromkeys(extra)
                                                         if x.clauses or x.conclusion not in names]
        W = WorldUniverse(names, rules)
        for i in range(len(W)):
            for k in range(3):
                for ps in itertools.combinations(names, k):
                    for g in names:
                        sem, syn = atomic_collapse(W, i, ps, g)
                        assert sem == syn


def test_atomic_collapse_needs_promotion():
    # no rules: {a} supports b vacuously since no world derives a, yet b is not derivable from a
    W = WorldUniverse(["a", "b"], [])
    assert infers(W, [], [Atom("a")], Atom("b"))
    assert not derives(W.base(0), {"a"}, "b")
    with pytest.raises(UniverseError, match="not a world"):
        atomic_collapse(W, [], ["a"], "b")
    # derivability from P always implies support from P
    for W in _random_universes(44, 40):
        for i in range(len(W)):
            for ps in (["a"], ["b"], ["a", "b"]):
                for g in ("a", "b"):
                    if derives(W.base(i), set(ps), g):
                        assert infers(W, i, [Atom(p) for p in ps], Atom(g))
