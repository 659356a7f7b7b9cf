"""Formulas and sequents of intuitionistic propositional logic.

Text grammar (ASCII only)::

    imp  := or ('->' imp)?
    or   := and ('|' and)*
    and  := unit ('&' unit)*
    unit := atom | 'bot' | 'top' | '(' imp ')'

``&`` and ``|`` associate to the left, ``->`` to the right.  Negation is
written ``phi -> bot``.  Sequents are ``phi1, phi2 |- psi``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")
KEYWORDS = {"bot", "top"}
RESERVED_PREFIX = "#"


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = -1):
        self.text = text
        self.pos = pos
        where = f" at position {pos}" if pos >= 0 else ""
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Top:
    def __str__(self):
        return "top"


@dataclass(frozen=True)
class Bot:
    def __str__(self):
        return "bot"


def _cached_hash(self) -> int:
    # compound formulas are hashed constantly by memo tables; recomputing
    # the structural hash each time dominates otherwise
    try:
        return self.__dict__["_hash"]
    except KeyError:
        h = hash((type(self).__name__, self.left, self.right))
        object.__setattr__(self, "_hash", h)
        return h


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula
    __hash__ = _cached_hash

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula
    __hash__ = _cached_hash

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True)
class Imp:
    left: Formula
    right: Formula
    __hash__ = _cached_hash

    def __str__(self):
        return print_formula(self)


Formula = Union[Atom, Top, Bot, And, Or, Imp]
TOP = Top()
BOT = Bot()


def is_atom_name(name: str) -> bool:
    return bool(ATOM_RE.fullmatch(name)) and name not in KEYWORDS


@dataclass(frozen=True)
class Sequent:
    antecedents: tuple[Formula, ...]
    succedent: Formula

    def __post_init__(self):
        # duplicate-free, first occurrence wins
        object.__setattr__(self, "antecedents", tuple(dict.fromkeys(self.antecedents)))

    def __str__(self):
        return print_sequent(self)


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(->)|(\|-)|([&|(),])|([a-zA-Z_][a-zA-Z0-9_]*)|(#\S*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # trailing whitespace
            break
        start = m.start(m.lastindex)
        arrow, turnstile, punct, ident, reserved, junk = m.groups()
        if arrow:
            tokens.append(("->", arrow, start))
        elif turnstile:
            tokens.append(("|-", turnstile, start))
        elif punct:
            tokens.append((punct, punct, start))
        elif ident:
            if ident in KEYWORDS:
                tokens.append((ident, ident, start))
            elif ATOM_RE.fullmatch(ident):
                tokens.append(("atom", ident, start))
            else:
                raise FormulaSyntaxError(f"invalid atom name {ident!r}", text, start)
        elif reserved:
            raise FormulaSyntaxError(
                f"atom name {reserved!r} uses the reserved prefix '#'", text, start)
        else:
            raise FormulaSyntaxError(f"unexpected character {junk!r}", text, start)
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self, kind: str):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            shown = tok[1] or "end of input"
            raise FormulaSyntaxError(f"expected {kind!r}, found {shown!r}", self.text, tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.take("->")
            return Imp(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take("|")
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unit()
        while self.peek() == "&":
            self.take("&")
            f = And(f, self.unit())
        return f

    def unit(self) -> Formula:
        kind, value, pos = self.tokens[self.i]
        if kind == "atom":
            self.i += 1
            return Atom(value)
        if kind == "bot":
            self.i += 1
            return BOT
        if kind == "top":
            self.i += 1
            return TOP
        if kind == "(":
            self.i += 1
            f = self.formula()
            self.take(")")
            return f
        raise FormulaSyntaxError(f"unexpected {value or 'end of input'!r}", self.text, pos)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.take("eof")
    return f


def parse_sequent(text: str) -> Sequent:
    p = _Parser(text)
    ants = []
    if p.peek() != "|-":
        ants.append(p.formula())
        while p.peek() == ",":
            p.take(",")
            ants.append(p.formula())
    p.take("|-")
    succ = p.formula()
    p.take("eof")
    return Sequent(tuple(ants), succ)


# -- printing ----------------------------------------------------------------

_PREC = {Imp: 1, Or: 2, And: 3}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 4)


def print_formula(f: Formula) -> str:
    match f:
        case Atom(name):
            return name
        case Top():
            return "top"
        case Bot():
            return "bot"
        case Imp(left, right):
            return f"{_wrap(left, 2)} -> {_wrap(right, 1)}"
        case Or(left, right):
            return f"{_wrap(left, 2)} | {_wrap(right, 3)}"
        case And(left, right):
            return f"{_wrap(left, 3)} & {_wrap(right, 4)}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, min_prec: int) -> str:
    s = print_formula(f)
    return s if _prec(f) >= min_prec else f"({s})"


def print_sequent(s: Sequent) -> str:
    ants = ", ".join(print_formula(a) for a in s.antecedents)
    return f"{ants} |- {print_formula(s.succedent)}" if ants else f"|- {print_formula(s.succedent)}"


# -- structure ---------------------------------------------------------------

def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (And, Or, Imp)):
        return (f.left, f.right)
    return ()


def is_compound(f: Formula) -> bool:
    return not isinstance(f, Atom)


def _postorder(f: Formula) -> Iterator[Formula]:
    for c in children(f):
        yield from _postorder(c)
    yield f


def subformulas(s: Sequent | Formula | Iterable[Formula]) -> list[Formula]:
    """Subterm-closed list of subformulas, post-order of first occurrence.

    Antecedents are visited before the succedent.
    """
    if isinstance(s, Sequent):
        roots = [*s.antecedents, s.succedent]
    elif isinstance(s, (Atom, Top, Bot, And, Or, Imp)):
        roots = [s]
    else:
        roots = list(s)
    seen: dict[Formula, None] = {}
    for r in roots:
        for g in _postorder(r):
            seen.setdefault(g, None)
    return list(seen)


def atoms(f: Formula | Sequent | Iterable[Formula]) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def size(f: Formula) -> int:
    """Number of binary connectives."""
    return sum(1 for g in _postorder(f) if isinstance(g, (And, Or, Imp)))


def depth(f: Formula) -> int:
    """Nodes on the longest root-to-leaf path (leaves have depth 1)."""
    cs = children(f)
    return 1 + max((depth(c) for c in cs), default=0)


def formulas_up_to_depth(max_depth: int, atom_names: Iterable[str],
                         leaves_with_constants: bool = True) -> list[Formula]:
    """Every formula of depth <= max_depth over the given atoms."""
    leaves: list[Formula] = [Atom(a) for a in sorted(atom_names)]
    if leaves_with_constants:
        leaves += [TOP, BOT]
    if max_depth < 1:
        return []
    everything = list(leaves)
    for _ in range(max_depth - 1):
        prev = everything
        everything = leaves + [cls(a, b) for cls in (And, Or, Imp) for a in prev for b in prev]
    return everything
