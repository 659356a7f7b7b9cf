"""Depth-first proof search for propositional definite clauses, written with
explicit success and failure continuations.

A success continuation receives the failure continuation that is current when
its goal succeeds, so a later failure can resume inside an earlier goal.  A
failure continuation is the saved alternative: invoking it discards whatever
was being built and tries the next clause.  Every continuation call returns a
thunk and a small driver loop runs them, so deep searches do not grow the
Python stack.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from .bases import AtomicRule, Base, derives, sort_atoms


class ProgramSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Clause:
    body: tuple[str, ...]
    head: str

    def __str__(self):
        return " & ".join(self.body) + " -> " + self.head if self.body else self.head


@dataclass(frozen=True)
class Program:
    clauses: tuple[Clause, ...]

    @classmethod
    def of(cls, clauses: Iterable[Union[Clause, tuple, str]]) -> Program:
        out = []
        for c in clauses:
            if isinstance(c, str):
                c = parse_clause(c)
            elif isinstance(c, tuple):
                c = Clause(tuple(c[0]), c[1])
            out.append(c)
        return cls(tuple(out))

    def atoms(self) -> list[str]:
        return sort_atoms({a for c in self.clauses for a in (*c.body, c.head)})

    def clauses_for(self, goal: str) -> list[int]:
        return [i for i, c in enumerate(self.clauses) if c.head == goal]

    def to_base(self) -> Base:
        """Each clause ``b1 ∧ … ∧ bn ⊃ h`` as the rule ``((⇒b1), …, (⇒bn) ⇒ h)``."""
        rules = {AtomicRule.make([((), b) for b in c.body], c.head) for c in self.clauses}
        return Base(frozenset(rules), frozenset(self.atoms()))

    def is_acyclic(self) -> bool:
        graph = {a: set() for a in self.atoms()}
        for c in self.clauses:
            graph[c.head].update(c.body)
        state: dict[str, int] = {}

        def visit(a) -> bool:
            state[a] = 1
            for b in graph[a]:
                s = state.get(b)
                if s == 1 or (s is None and not visit(b)):
                    return False
            state[a] = 2
            return True

        return all(state.get(a) == 2 or visit(a) for a in graph)

    def __str__(self):
        return "\n".join(map(str, self.clauses))


_ATOM = r"[a-z][a-zA-Z0-9_]*"
_CLAUSE = re.compile(rf"^\s*(?:(?P<body>{_ATOM}(?:\s*[&,]\s*{_ATOM})*)\s*->\s*)?(?P<head>{_ATOM})\s*$")


def parse_clause(line: str) -> Clause:
    m = _CLAUSE.match(line)
    if not m:
        raise ProgramSyntaxError(f"cannot read clause {line.strip()!r}")
    body = tuple(re.split(r"\s*[&,]\s*", m["body"].strip())) if m["body"] else ()
    return Clause(body, m["head"])


def parse_program(text: str) -> Program:
    clauses = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        try:
            clauses.append(parse_clause(line))
        except ProgramSyntaxError as e:
            raise ProgramSyntaxError(f"line {n}: {e}") from None
    return Program(tuple(clauses))


# -- trace events -------------------------------------------------------------

@dataclass(frozen=True)
class TryClause:
    goal: str
    clause: int

    def __str__(self):
        return f"try {self.goal} with clause {self.clause}"


@dataclass(frozen=True)
class Fail:
    goal: str

    def __str__(self):
        return f"fail {self.goal}"


@dataclass(frozen=True)
class Succeed:
    goal: str

    def __str__(self):
        return f"succeed {self.goal}"


@dataclass(frozen=True)
class SwapContinuation:
    from_clause: int
    to_clause: int

    def __str__(self):
        return f"swap continuation: clause {self.from_clause} -> clause {self.to_clause}"


@dataclass(frozen=True)
class Cutoff:
    """The depth cap stopped search below ``goal``."""
    goal: str
    depth: int

    def __str__(self):
        return f"cutoff at {self.goal} (depth {self.depth})"


Event = Union[TryClause, Fail, Succeed, SwapContinuation, Cutoff]


def event_json(e: Event) -> dict:
    return {"event": type(e).__name__, **e.__dict__}


@dataclass
class SearchResult:
    value: Optional[bool]  # None when the depth cap made the answer unknown
    trace: list[Event] = field(default_factory=list)

    def __iter__(self):
        return iter((self.value, self.trace))

    @property
    def status(self) -> str:
        return {True: "success", False: "failure", None: "unknown"}[self.value]


@dataclass(frozen=True)
class _Done:
    value: bool


Thunk = Callable[[], object]


def solve(p: Program, goal: str, depth_cap: int = 64) -> SearchResult:
    trace: list[Event] = []
    cut = False

    def attempt(g: str, depth: int, sk, fk) -> Thunk:
        nonlocal cut
        if depth > depth_cap:
            trace.append(Cutoff(g, depth))
            cut = True
            return fk
        matches = p.clauses_for(g)
        if not matches:
            trace.append(Fail(g))
            return fk
        return lambda: try_clause(g, matches, 0, depth, sk, fk)

    def try_clause(g: str, matches: list[int], n: int, depth: int, sk, fk) -> Thunk:
        i = matches[n]
        trace.append(TryClause(g, i))

        def next_alternative() -> Thunk:
            if n + 1 < len(matches):
                trace.append(SwapContinuation(i, matches[n + 1]))
                return lambda: try_clause(g, matches, n + 1, depth, sk, fk)
            trace.append(Fail(g))
            return fk

        def succeeded(fk_now) -> Thunk:
            trace.append(Succeed(g))
            return lambda: sk(fk_now)

        return lambda: prove_all(p.clauses[i].body, 0, depth + 1, succeeded, next_alternative)

    def prove_all(body: tuple, j: int, depth: int, sk, fk) -> Thunk:
        if j == len(body):
            return lambda: sk(fk)
        return lambda: attempt(body[j], depth, lambda fk_now: prove_all(body, j + 1, depth, sk, fk_now), fk)

    step: object = lambda: attempt(goal, 0, lambda fk: lambda: _Done(True), lambda: _Done(False))
    while not isinstance(step, _Done):
        step = step()
    value = step.value if step.value or not cut else None
    return SearchResult(value, trace)


@dataclass
class AgreementReport:
    agree: list[str]
    disagree: list[dict]
    unknown: list[dict]
    acyclic: bool

    @property
    def ok(self) -> bool:
        return not self.disagree and (not self.unknown or not self.acyclic)

    def as_dict(self) -> dict:
        return {"passed": self.ok, "acyclic": self.acyclic, "agree": self.agree,
                "disagree": self.disagree, "unknown": self.unknown}


def solve_agrees_with_derivability(p: Program, atoms: Iterable[str] = (), depth_cap: int = 64) -> AgreementReport:
    """Compare search with derivability in the clauses' base, atom by atom.

    A depth-cap "unknown" is listed separately together with what derivability
    says; for an acyclic program it counts as a failure of the check.
    """
    base = p.to_base()
    universe = sort_atoms(set(p.atoms()) | set(atoms))
    base = Base(base.rules, frozenset(universe))
    agree, disagree, unknown = [], [], []
    for g in universe:
        s = solve(p, g, depth_cap).value
        d = derives(base, (), g)
        if s is None:
            unknown.append({"goal": g, "derives": d})
        elif s == d:
            agree.append(g)
        else:
            disagree.append({"goal": g, "search": s, "derives": d})
    return AgreementReport(agree, disagree, unknown, p.is_acyclic())
