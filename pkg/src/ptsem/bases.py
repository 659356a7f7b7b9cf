"""Atomic rules, bases and atomic derivability.

A rule ``((P1 => a1), ..., (Pn => an) => b)`` is written in text as::

    ([p1, p2] => a1), ([] => a2) => b
    => b                                  # n = 0, an axiom

Derivability ``P |-_B a`` is the least relation closed under

* Ref: ``P, a |-_B a``
* App: for a rule as above, if ``Q, Pi |-_B ai`` for every i then ``Q |-_B b``.

It is computed bottom-up over the finitely many contexts reachable from the
query context by adding rule premise sets.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Union

ATOM_TOKEN = r"(?:[a-z][a-zA-Z0-9_]*|#\d+)"
_ATOM_RE = re.compile(ATOM_TOKEN)


class RuleSyntaxError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = -1):
        self.text = text
        self.pos = pos
        where = f" at position {pos}" if pos >= 0 else ""
        super().__init__(f"{message}{where}")


class UnknownAtomError(ValueError):
    pass


def _atom_key(a: str):
    # original atoms sort before fresh '#k' atoms, fresh atoms numerically
    if a.startswith("#"):
        return (1, int(a[1:]), a)
    return (0, 0, a)


def sort_atoms(atoms: Iterable[str]) -> list[str]:
    return sorted(atoms, key=_atom_key)


Clause = tuple[frozenset, str]


def _clause_key(c: Clause):
    premises, concl = c
    return ([_atom_key(p) for p in sort_atoms(premises)], _atom_key(concl))


@dataclass(frozen=True)
class AtomicRule:
    clauses: tuple[Clause, ...]
    conclusion: str

    def __post_init__(self):
        canon = {(frozenset(p), a) for p, a in self.clauses}
        clauses = tuple(sorted(canon, key=_clause_key))
        object.__setattr__(self, "clauses", clauses)
        # rules are sorted and hashed constantly during saturation
        object.__setattr__(self, "_key", (_atom_key(self.conclusion), len(clauses),
                                          [_clause_key(c) for c in clauses]))
        object.__setattr__(self, "_hash", hash((clauses, self.conclusion)))

    def __hash__(self):
        return self._hash

    @classmethod
    def axiom(cls, atom: str) -> AtomicRule:
        return cls((), atom)

    @classmethod
    def make(cls, clauses: Iterable[tuple[Iterable[str], str]], conclusion: str) -> AtomicRule:
        return cls(tuple((frozenset(p), a) for p, a in clauses), conclusion)

    def atoms(self) -> frozenset[str]:
        out = {self.conclusion}
        for p, a in self.clauses:
            out |= p
            out.add(a)
        return frozenset(out)

    def sort_key(self):
        return self._key

    def __str__(self):
        return format_rule(self)


def format_rule(rule: AtomicRule) -> str:
    parts = [f"([{', '.join(sort_atoms(p))}] => {a})" for p, a in rule.clauses]
    return f"{', '.join(parts)} => {rule.conclusion}" if parts else f"=> {rule.conclusion}"


_RULE_TOKEN = re.compile(r"\s*(?:(=>)|([\[\](),])|(" + ATOM_TOKEN + r")|(\S))")


def parse_rule(text: str) -> AtomicRule:
    toks = []
    pos = 0
    while True:
        m = _RULE_TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        arrow, punct, atom, junk = m.groups()
        if junk:
            raise RuleSyntaxError(f"unexpected character {junk!r}", text, start)
        toks.append((arrow or punct or "atom", arrow or punct or atom, start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    i = 0

    def take(kind):
        nonlocal i
        k, v, p = toks[i]
        if k != kind:
            raise RuleSyntaxError(f"expected {kind!r}, found {v or 'end of input'!r}", text, p)
        i += 1
        return v

    clauses = []
    if toks[0][0] != "=>":
        while True:
            take("(")
            take("[")
            premises = []
            if toks[i][0] != "]":
                premises.append(take("atom"))
                while toks[i][0] == ",":
                    take(",")
                    premises.append(take("atom"))
            take("]")
            take("=>")
            concl = take("atom")
            take(")")
            clauses.append((premises, concl))
            if toks[i][0] != ",":
                break
            take(",")
    take("=>")
    b = take("atom")
    take("eof")
    return AtomicRule.make(clauses, b)


@dataclass(frozen=True)
class Base:
    rules: frozenset
    atom_universe: frozenset

    def __post_init__(self):
        object.__setattr__(self, "rules", frozenset(self.rules))
        object.__setattr__(self, "atom_universe", frozenset(self.atom_universe))
        for r in self.rules:
            missing = r.atoms() - self.atom_universe
            if missing:
                raise UnknownAtomError(
                    f"rule {format_rule(r)!r} mentions atoms outside the universe: "
                    f"{', '.join(sort_atoms(missing))}")

    @classmethod
    def of(cls, rules: Iterable[AtomicRule | str], atoms: Iterable[str] = ()) -> Base:
        rs = [parse_rule(r) if isinstance(r, str) else r for r in rules]
        universe = set(atoms)
        for r in rs:
            universe |= r.atoms()
        return cls(frozenset(rs), frozenset(universe))

    def sorted_rules(self) -> list[AtomicRule]:
        return sorted(self.rules, key=AtomicRule.sort_key)

    def __le__(self, other: Base) -> bool:
        return self.rules <= other.rules

    def check_atoms(self, atoms: Iterable[str]):
        missing = set(atoms) - self.atom_universe
        if missing:
            raise UnknownAtomError(f"unknown atom(s): {', '.join(sort_atoms(missing))}")


# -- derivation trees --------------------------------------------------------

@dataclass(frozen=True)
class RefNode:
    atom: str
    context: frozenset

    @property
    def conclusion(self) -> str:
        return self.atom


@dataclass(frozen=True)
class AppNode:
    rule: AtomicRule
    context: frozenset
    subtrees: tuple = ()

    @property
    def conclusion(self) -> str:
        return self.rule.conclusion


DerivationTree = Union[RefNode, AppNode]


def check_tree(base: Base, tree: DerivationTree, context=None, goal=None) -> bool:
    """Structural validity of a derivation tree in ``base``."""
    if context is not None and frozenset(context) != tree.context:
        return False
    if goal is not None and tree.conclusion != goal:
        return False
    if isinstance(tree, RefNode):
        return tree.atom in tree.context
    if tree.rule not in base.rules or len(tree.subtrees) != len(tree.rule.clauses):
        return False
    return all(
        check_tree(base, sub, tree.context | premises, concl)
        for sub, (premises, concl) in zip(tree.subtrees, tree.rule.clauses))


def tree_depth(tree: DerivationTree) -> int:
    if isinstance(tree, RefNode):
        return 1
    return 1 + max((tree_depth(s) for s in tree.subtrees), default=0)


# -- derivability ------------------------------------------------------------

class _Saturation:
    """Least fixpoint of Ref/App over the contexts reachable from ``roots``."""

    def __init__(self, rules: frozenset, roots: Iterable[frozenset]):
        self.rules = sorted(rules, key=AtomicRule.sort_key)
        premise_sets = sorted({p for r in self.rules for p, _ in r.clauses if p}, key=sorted)
        # ext[s][p] = s | p, for every reachable context s
        empty = frozenset()
        ext: dict[frozenset, dict] = {r: {} for r in roots}
        stack = list(ext)
        while stack:
            s = stack.pop()
            row = ext[s]
            row[empty] = s
            for p in premise_sets:
                t = s | p
                row[p] = t
                if t not in ext:
                    ext[t] = {}
                    stack.append(t)
        self.contexts = list(ext)
        self.derived = derived = {s: set(s) for s in self.contexts}
        self.why: dict[tuple[frozenset, str], AtomicRule] = {}
        changed = True
        while changed:
            changed = False
            for r in self.rules:
                b = r.conclusion
                clauses = r.clauses
                for s in self.contexts:
                    known = derived[s]
                    if b in known:
                        continue
                    row = ext[s]
                    if all(a in derived[row[p]] for p, a in clauses):
                        known.add(b)
                        self.why[(s, b)] = r
                        changed = True

    def tree(self, context: frozenset, goal: str) -> Optional[DerivationTree]:
        if goal not in self.derived[context]:
            return None
        if goal in context:
            return RefNode(goal, context)
        r = self.why[(context, goal)]
        subs = tuple(self.tree(context | p, a) for p, a in r.clauses)
        return AppNode(r, context, subs)


@lru_cache(maxsize=65536)
def _saturate(rules: frozenset, root: frozenset) -> _Saturation:
    return _Saturation(rules, (root,))


def derivable_atoms(base: Base, context: Iterable[str] = ()) -> frozenset[str]:
    return derivable_from_rules(base.rules, frozenset(context))


def derivable_from_rules(rules: frozenset, context: frozenset = frozenset()) -> frozenset[str]:
    """As :func:`derivable_atoms`, for rule sets whose atoms were already checked."""
    return frozenset(_saturate(rules, context).derived[context])


def derivable_in_contexts(rules: frozenset, contexts: Iterable[frozenset]) -> list[frozenset[str]]:
    """Derivable atoms from each context in turn, sharing one fixpoint computation."""
    contexts = [frozenset(c) for c in contexts]
    sat = _Saturation(frozenset(rules), contexts)
    return [frozenset(sat.derived[c]) for c in contexts]


def derives(base: Base, context: Iterable[str], goal: str) -> bool:
    ctx = frozenset(context)
    base.check_atoms(ctx | {goal})
    return goal in _saturate(base.rules, ctx).derived[ctx]


def derive_tree(base: Base, context: Iterable[str], goal: str) -> Optional[DerivationTree]:
    ctx = frozenset(context)
    base.check_atoms(ctx | {goal})
    return _saturate(base.rules, ctx).tree(ctx, goal)


def promote_context(base: Base, atoms: Iterable[str]) -> Base:
    """``B ∪ {(=> p) | p in atoms}``."""
    ps = frozenset(atoms)
    base.check_atoms(ps)
    return Base(base.rules | {AtomicRule.axiom(p) for p in ps}, base.atom_universe)


# -- base file format --------------------------------------------------------

def _split_atom_list(text: str) -> list[str]:
    names = [a.strip() for a in text.split(",") if a.strip()]
    for a in names:
        if not _ATOM_RE.fullmatch(a):
            raise RuleSyntaxError(f"invalid atom name {a!r}")
    return names


def parse_base(text: str) -> Base:
    """``atoms: a, b`` followed by one rule per line; ``#`` starts a comment line."""
    atoms: list[str] = []
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("atoms:"):
            atoms.extend(_split_atom_list(line[len("atoms:"):]))
            continue
        try:
            rules.append(parse_rule(line))
        except RuleSyntaxError as e:
            raise RuleSyntaxError(f"line {lineno}: {e}") from None
    if atoms:
        return Base(frozenset(rules), frozenset(atoms))
    return Base.of(rules)


def format_base(base: Base, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines.append(f"atoms: {', '.join(sort_atoms(base.atom_universe))}")
    lines += [format_rule(r) for r in base.sorted_rules()]
    return "\n".join(lines) + "\n"
