"""Lambda terms, the call-by-value CPS transform, evaluation and simple types.

Concrete syntax::

    term  ::= '\\' binder+ '.' term  |  atom+
    binder ::= name | name ':' type       (annotated binders need parentheses
                                            when several are given: \\(x:a) y. e)
    atom  ::= name | Name | '(' term ')'

Lower-case names are variables; names starting with an upper-case letter are
constants (inert values).  ``λ`` may be used instead of the backslash.
Types: lower-case names are base types, ``R`` is the result type, ``->``
associates to the right.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import count
from typing import Iterable, Iterator, Optional, Union

# -- terms --------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Lam:
    name: str
    body: "Term"
    ty: Optional["SimpleType"] = None


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


Term = Union[Var, Const, Lam, App]

# -- types --------------------------------------------------------------------


@dataclass(frozen=True)
class Base:
    name: str


@dataclass(frozen=True)
class Arrow:
    left: "SimpleType"
    right: "SimpleType"


@dataclass(frozen=True)
class ResultType:
    pass


@dataclass(frozen=True)
class TVar:
    """Unknown type introduced by inference (never written by users)."""
    id: int


Result = ResultType()
SimpleType = Union[Base, Arrow, ResultType, TVar]


class TermSyntaxError(ValueError):
    pass


class EvalTimeout(RuntimeError):
    def __init__(self, steps: int):
        super().__init__(f"no value after {steps} steps")
        self.steps = steps


class Stuck(RuntimeError):
    pass


class CPSTypeError(TypeError):
    pass


# -- parsing and printing -----------------------------------------------------

_TOK = re.compile(r"\s*(?:(->)|([\\λ.():])|([A-Za-z_][A-Za-z0-9_']*)|(\S))")


def _tokens(text: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    while text[pos:].strip():
        m = _TOK.match(text, pos)
        if m.group(4):
            raise TermSyntaxError(f"unexpected character {m.group(4)!r} at {m.start(4)}")
        out.append((m.group(1) or m.group(2) or m.group(3), m.start(0)))
        pos = m.end()
    return out


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self) -> Optional[str]:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, want: Optional[str] = None) -> str:
        tok = self.peek()
        if tok is None:
            raise TermSyntaxError(f"unexpected end of input in {self.text!r}")
        if want is not None and tok != want:
            raise TermSyntaxError(f"expected {want!r} but found {tok!r} in {self.text!r}")
        self.i += 1
        return tok

    def done(self):
        if self.peek() is not None:
            raise TermSyntaxError(f"unexpected {self.peek()!r} in {self.text!r}")

    # terms
    def term(self) -> Term:
        if self.peek() in ("\\", "λ"):
            self.take()
            binders = []
            while self.peek() != ".":
                binders.append(self.binder())
                if self.peek() is None:
                    raise TermSyntaxError(f"lambda without '.' in {self.text!r}")
            if not binders:
                raise TermSyntaxError(f"lambda without a variable in {self.text!r}")
            self.take(".")
            body = self.term()
            for name, ty in reversed(binders):
                body = Lam(name, body, ty)
            return body
        head = self.atom()
        while self.peek() not in (None, ")"):
            if self.peek() in ("\\", "λ"):
                head = App(head, self.term())
                break
            head = App(head, self.atom())
        return head

    def binder(self) -> tuple[str, Optional[SimpleType]]:
        if self.peek() == "(":
            self.take("(")
            name = self.name(var=True)
            self.take(":")
            ty = self.type()
            self.take(")")
            return name, ty
        name = self.name(var=True)
        if self.peek() == ":":
            self.take(":")
            return name, self.type()
        return name, None

    def name(self, var: bool) -> str:
        tok = self.take()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
            raise TermSyntaxError(f"expected a name, found {tok!r} in {self.text!r}")
        if var and not (tok[0].islower() or tok[0] == "_"):
            raise TermSyntaxError(f"cannot bind the constant {tok!r}")
        return tok

    def atom(self) -> Term:
        tok = self.peek()
        if tok == "(":
            self.take("(")
            t = self.term()
            self.take(")")
            return t
        name = self.name(var=False)
        return Const(name) if name[0].isupper() else Var(name)

    # types
    def type(self) -> SimpleType:
        left = self.type_atom()
        if self.peek() == "->":
            self.take("->")
            return Arrow(left, self.type())
        return left

    def type_atom(self) -> SimpleType:
        if self.peek() == "(":
            self.take("(")
            t = self.type()
            self.take(")")
            return t
        name = self.name(var=False)
        if name == "R":
            return Result
        if not name[0].islower():
            raise TermSyntaxError(f"base type names are lower case, got {name!r}")
        return Base(name)


def parse_term(text: str) -> Term:
    r = _Reader(text)
    t = r.term()
    r.done()
    return t


def parse_type(text: str) -> SimpleType:
    r = _Reader(text)
    t = r.type()
    r.done()
    return t


def print_type(t: SimpleType) -> str:
    match t:
        case Base(name):
            return name
        case ResultType():
            return "R"
        case TVar(i):
            return f"?{i}"
        case Arrow(l, r):
            ls = print_type(l)
            if isinstance(l, Arrow):
                ls = f"({ls})"
            return f"{ls} -> {print_type(r)}"
    raise TypeError(t)


def print_term(t: Term) -> str:
    match t:
        case Var(name) | Const(name):
            return name
        case Lam(name, body, ty):
            b = f"({name}:{print_type(ty)})" if ty is not None and isinstance(ty, Arrow) else (
                f"{name}:{print_type(ty)}" if ty is not None else name)
            return f"\\{b}. {print_term(body)}"
        case App(fn, arg):
            f = print_term(fn)
            if isinstance(fn, Lam):
                f = f"({f})"
            a = print_term(arg)
            if isinstance(arg, (App, Lam)):
                a = f"({a})"
            return f"{f} {a}"
    raise TypeError(t)


# -- variables, substitution, alpha-equivalence -------------------------------

def free_vars(t: Term) -> frozenset:
    match t:
        case Var(name):
            return frozenset([name])
        case Const():
            return frozenset()
        case Lam(name, body, _):
            return free_vars(body) - {name}
        case App(f, a):
            return free_vars(f) | free_vars(a)
    raise TypeError(t)


def all_names(t: Term) -> set:
    out = set()
    stack = [t]
    while stack:
        u = stack.pop()
        match u:
            case Var(name):
                out.add(name)
            case Lam(name, body, _):
                out.add(name)
                stack.append(body)
            case App(f, a):
                stack += [f, a]
    return out


def _fresh_like(name: str, avoid: set) -> str:
    stem = name.rstrip("0123456789'")
    for i in count(1):
        cand = f"{stem}{i}"
        if cand not in avoid:
            return cand


def subst(t: Term, x: str, v: Term) -> Term:
    """Capture-avoiding ``t[x := v]``."""
    fv = free_vars(v)

    def go(u: Term) -> Term:
        match u:
            case Var(name):
                return v if name == x else u
            case Const():
                return u
            case App(f, a):
                return App(go(f), go(a))
            case Lam(name, body, ty):
                if name == x or x not in free_vars(body):
                    return u
                if name in fv:
                    new = _fresh_like(name, fv | all_names(body) | {x})
                    body = subst(body, name, Var(new))
                    name = new
                return Lam(name, go(body), ty)
        raise TypeError(u)

    return go(t)


def alpha_eq(s: Term, t: Term) -> bool:
    def go(a: Term, b: Term, env_a: dict, env_b: dict, depth: int) -> bool:
        match a, b:
            case Var(x), Var(y):
                ia, ib = env_a.get(x), env_b.get(y)
                return ia == ib and (ia is not None or x == y)
            case Const(x), Const(y):
                return x == y
            case Lam(x, ba, ta), Lam(y, bb, tb):
                if ta != tb:
                    return False
                return go(ba, bb, {**env_a, x: depth}, {**env_b, y: depth}, depth + 1)
            case App(fa, aa), App(fb, ab):
                return go(fa, fb, env_a, env_b, depth) and go(aa, ab, env_a, env_b, depth)
        return False

    return go(s, t, {}, {}, 0)


def term_size(t: Term) -> int:
    match t:
        case Lam(_, body, _):
            return 1 + term_size(body)
        case App(f, a):
            return 1 + term_size(f) + term_size(a)
    return 1


# -- CPS transform ------------------------------------------------------------

class _Names:
    def __init__(self, avoid: set):
        self.avoid = set(avoid)
        self.counters = {"k": 0, "v": 0}
        self.made: set[str] = set()

    def __call__(self, prefix: str) -> str:
        while True:
            name = f"{prefix}{self.counters[prefix]}"
            self.counters[prefix] += 1
            if name not in self.avoid:
                self.made.add(name)
                return name


def cps_transform(e: Term) -> Term:
    return cps_transform_named(e)[0]


def cps_transform_named(e: Term) -> tuple[Term, frozenset]:
    """The transform plus the set of names it invented.

    Continuation variables are ``k0, k1, …`` and intermediate values
    ``v0, v1, …``, skipping any name already used in ``e``.
    """
    fresh = _Names(all_names(e))

    def go(t: Term) -> Term:
        match t:
            case Var() | Const():
                k = fresh("k")
                return Lam(k, App(Var(k), t))
            case Lam(x, body, ty):
                k = fresh("k")
                return Lam(k, App(Var(k), Lam(x, go(body), None if ty is None else value_type(ty))))
            case App(f, a):
                k = fresh("k")
                vf = fresh("v")
                cf = go(f)
                va = fresh("v")
                ca = go(a)
                inner = App(App(Var(vf), Var(va)), Var(k))
                return Lam(k, App(cf, Lam(vf, App(ca, Lam(va, inner)))))
        raise TypeError(t)

    out = go(e)
    return out, frozenset(fresh.made)


def cps_value(v: Term) -> Term:
    """Image of a source value inside CPS computations."""
    match v:
        case Const():
            return v
        case Lam(x, body, ty):
            return Lam(x, cps_transform(body), None if ty is None else value_type(ty))
    raise ValueError(f"not a value: {print_term(v)}")


# -- evaluation ---------------------------------------------------------------

def is_value(t: Term) -> bool:
    return isinstance(t, (Lam, Const))


def step_cbv(t: Term, halt: Optional[str] = None) -> Optional[Term]:
    """One leftmost call-by-value step, or ``None`` when ``t`` is a value.

    With ``halt`` set, ``halt v`` for a value ``v`` is final too.
    """
    match t:
        case Lam() | Const():
            return None
        case Var(name):
            raise Stuck(f"free variable {name}")
        case App(f, a):
            if not is_value(f):
                return App(step_cbv(f, halt) if not _halted(f, halt) else _stuck(f), a)
            if not is_value(a):
                if _halted(a, halt):
                    _stuck(a)
                return App(f, step_cbv(a, halt))
            if isinstance(f, Lam):
                return subst(f.body, f.name, a)
            if halt is not None and f == Const(halt):
                return None
            raise Stuck(f"constant {f.name} applied to {print_term(a)}")
    raise TypeError(t)


def _halted(t: Term, halt: Optional[str]) -> bool:
    return (halt is not None and isinstance(t, App) and t.fn == Const(halt)
            and is_value(t.arg))


def _stuck(t: Term):
    raise Stuck(f"halt reached inside a larger term: {print_term(t)}")


@dataclass
class EvalResult:
    value: Term
    steps: int
    trace: Optional[list[Term]] = None


def evaluate(e: Term, budget: int = 10_000, halt: Optional[str] = None,
             record: bool = False) -> EvalResult:
    trace = [e] if record else None
    t = e
    for n in range(budget + 1):
        nxt = step_cbv(t, halt)
        if nxt is None:
            return EvalResult(t, n, trace)
        if n == budget:
            break
        t = nxt
        if record:
            trace.append(t)
    raise EvalTimeout(budget)


def eval_cbv(e: Term, budget: int = 10_000) -> Term:
    return evaluate(e, budget).value


HALT = "Halt"


@dataclass
class CPSRun:
    value: Term
    steps: int
    program: Term
    trace: Optional[list[Term]]
    continuation_names: frozenset
    halt: str


def run_cps(e: Term, budget: int = 10_000, record: bool = False) -> CPSRun:
    """Evaluate ``⟦e⟧ (λx. Halt x)`` and return what reaches ``Halt``."""
    used = {c.name for c in _consts(e)}
    halt = HALT
    while halt in used:
        halt += "_"
    body, made = cps_transform_named(e)
    x = _fresh_like("x", all_names(body) | {"x"})
    program = App(body, Lam(x, App(Const(halt), Var(x))))
    r = evaluate(program, budget, halt=halt, record=record)
    final = r.value
    if not (isinstance(final, App) and final.fn == Const(halt)):
        raise Stuck(f"CPS program ended without reaching {halt}: {print_term(final)}")
    return CPSRun(final.arg, r.steps, program, r.trace, made | {x}, halt)


def _consts(t: Term) -> Iterator[Const]:
    match t:
        case Const():
            yield t
        case Lam(_, body, _):
            yield from _consts(body)
        case App(f, a):
            yield from _consts(f)
            yield from _consts(a)


def count_redexes(t: Term) -> int:
    """Beta-redexes not under a lambda whose argument is already a value."""
    match t:
        case App(f, a):
            here = int(isinstance(f, Lam) and is_value(a))
            return here + count_redexes(f) + count_redexes(a)
    return 0


def active_continuation(t: Term, continuation_names: Iterable[str]) -> Optional[Term]:
    """The last argument of the top-level application spine that is a continuation."""
    names = set(continuation_names)
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    for a in args:  # args are collected last-first
        if isinstance(a, Lam) and a.name in names:
            return a
    return None


def render_step(t: Term, continuation_names: Iterable[str]) -> str:
    """Print ``t`` with its active continuation wrapped in ``{{ }}``."""
    k = active_continuation(t, continuation_names)
    if k is None:
        return print_term(t)
    spine = []
    u = t
    while isinstance(u, App):
        spine.append(u.arg)
        u = u.fn
    parts = [print_term(u) if not isinstance(u, Lam) else f"({print_term(u)})"]
    for a in reversed(spine):
        s = print_term(a)
        if isinstance(a, (App, Lam)):
            s = f"({s})"
        parts.append(f"{{{{ {s} }}}}" if a is k else s)
    return " ".join(parts)


# -- types --------------------------------------------------------------------

def _mentions_result(t: SimpleType) -> bool:
    match t:
        case ResultType():
            return True
        case Arrow(l, r):
            return _mentions_result(l) or _mentions_result(r)
    return False


def value_type(t: SimpleType) -> SimpleType:
    """``b* = b`` and ``(A → B)* = A* → (B* → R) → R``."""
    match t:
        case Base() | TVar():
            return t
        case Arrow(l, r):
            return Arrow(value_type(l), Arrow(Arrow(value_type(r), Result), Result))
        case ResultType():
            raise CPSTypeError("the result type R cannot occur in a source type")
    raise TypeError(t)


def cps_type(t: SimpleType) -> SimpleType:
    """``A ↦ (A* → R) → R``."""
    if _mentions_result(t):
        raise CPSTypeError("the result type R cannot occur in a source type")
    return Arrow(Arrow(value_type(t), Result), Result)


def cps_env(env: dict) -> dict:
    return {x: value_type(t) for x, t in env.items()}


class _Unifier:
    def __init__(self):
        self.sub: dict[int, SimpleType] = {}
        self.ids = count()

    def fresh(self) -> TVar:
        return TVar(next(self.ids))

    def resolve(self, t: SimpleType) -> SimpleType:
        while isinstance(t, TVar) and t.id in self.sub:
            t = self.sub[t.id]
        return t

    def zonk(self, t: SimpleType) -> SimpleType:
        t = self.resolve(t)
        if isinstance(t, Arrow):
            return Arrow(self.zonk(t.left), self.zonk(t.right))
        return t

    def occurs(self, v: int, t: SimpleType) -> bool:
        t = self.resolve(t)
        if isinstance(t, TVar):
            return t.id == v
        if isinstance(t, Arrow):
            return self.occurs(v, t.left) or self.occurs(v, t.right)
        return False

    def unify(self, a: SimpleType, b: SimpleType, where: Term):
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return
        if isinstance(a, TVar):
            if self.occurs(a.id, b):
                raise CPSTypeError(f"infinite type needed in {print_term(where)}")
            self.sub[a.id] = b
        elif isinstance(b, TVar):
            self.unify(b, a, where)
        elif isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify(a.left, b.left, where)
            self.unify(a.right, b.right, where)
        else:
            raise CPSTypeError(f"type mismatch in {print_term(where)}: "
                               f"{print_type(self.zonk(a))} vs {print_type(self.zonk(b))}")


def _infer(env: dict, e: Term, u: _Unifier) -> SimpleType:
    match e:
        case Var(name) | Const(name):
            if name not in env:
                kind = "variable" if isinstance(e, Var) else "constant"
                raise CPSTypeError(f"unbound {kind} {name}")
            return env[name]
        case Lam(x, body, ty):
            arg = ty if ty is not None else u.fresh()
            return Arrow(arg, _infer({**env, x: arg}, body, u))
        case App(f, a):
            tf = _infer(env, f, u)
            ta = _infer(env, a, u)
            res = u.fresh()
            u.unify(tf, Arrow(ta, res), e)
            return res
    raise TypeError(e)


def typecheck(env: dict, e: Term) -> SimpleType:
    """Most general simple type of ``e``; unannotated binders are inferred.

    Raises :class:`CPSTypeError` on a mismatch or an unbound name.  The
    result may contain :class:`TVar` where nothing pins a type down.
    """
    u = _Unifier()
    return u.zonk(_infer(dict(env), e, u))


def check(env: dict, e: Term, expected: SimpleType) -> bool:
    """Whether ``e`` can be given type ``expected`` (free type unknowns may be instantiated)."""
    u = _Unifier()
    try:
        t = _infer(dict(env), e, u)
        u.unify(t, expected, e)
    except CPSTypeError:
        return False
    return True


def types_alpha_eq(a: SimpleType, b: SimpleType) -> bool:
    """Equality up to renaming of type unknowns."""
    fwd: dict[int, int] = {}
    back: dict[int, int] = {}

    def go(x, y) -> bool:
        match x, y:
            case TVar(i), TVar(j):
                if fwd.setdefault(i, j) != j or back.setdefault(j, i) != i:
                    return False
                return True
            case Arrow(l1, r1), Arrow(l2, r2):
                return go(l1, l2) and go(r1, r2)
        return x == y

    return go(a, b)
