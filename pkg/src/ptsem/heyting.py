"""The complete Heyting algebra of up-closed sets of bases.

Up-sets are int bitmasks over the worlds of a :class:`BasePoset`.  Meet and
join are ``&`` and ``|``; top is every world and bottom is ``0``.
"""
from __future__ import annotations

from typing import Mapping, Optional, Sequence

from .bases import UnknownAtomError, sort_atoms
from .order import FiniteOrder, iter_bits
from .support import WorldUniverse
from .syntax import And, Atom, Bot, Formula, Imp, Or, Top

UpSet = int
CanonicalInterp = Mapping[str, UpSet]


class NotUpSetError(ValueError):
    pass


class BasePoset:
    """Worlds ordered by rule-set inclusion (or any finite partial order)."""

    def __init__(self, order: FiniteOrder, labels: Optional[Sequence[str]] = None,
                 universe: Optional[WorldUniverse] = None):
        self.order = order
        self.universe = universe
        self.labels = list(labels) if labels is not None else [str(i) for i in range(order.size)]

    @classmethod
    def from_universe(cls, W: WorldUniverse) -> BasePoset:
        return cls(W.order, [W.label(i) for i in range(len(W))], W)

    @classmethod
    def from_relation(cls, leq: Sequence[Sequence[bool]]) -> BasePoset:
        return cls(FiniteOrder(leq))

    @property
    def size(self) -> int:
        return self.order.size

    @property
    def top(self) -> UpSet:
        return self.order.full

    bottom = 0

    def leq(self, i: int, j: int) -> bool:
        return self.order.leq(i, j)

    def is_upset(self, u: UpSet) -> bool:
        return self.order.is_upset(u)

    def check_upset(self, u: UpSet, what: str = "argument"):
        if not self.order.is_upset(u):
            raise NotUpSetError(f"{what} {self.members(u)} is not an up-closed set of worlds")

    def upsets(self) -> list[UpSet]:
        return self.order.upsets()

    def members(self, u: UpSet) -> list[int]:
        return list(iter_bits(u))

    def same_as(self, other: BasePoset) -> bool:
        return self.order is other.order or (self.size == other.size and self.order.up == other.order.up)


def heyting_imp(P: BasePoset, U: UpSet, V: UpSet) -> UpSet:
    """``{B | for every C ⊇ B, C in U implies C in V}``."""
    P.check_upset(U, "antecedent")
    P.check_upset(V, "consequent")
    return P.order.box((P.top & ~U) | V)


def sigma_deriv(W: WorldUniverse) -> dict[str, UpSet]:
    """Each atom sent to the worlds that derive it."""
    return {a: W.atom_mask(a) for a in sort_atoms(W.atom_universe)}


def denote_kripke(W: WorldUniverse, phi: Formula, memo: Optional[dict] = None) -> UpSet:
    """Worlds forcing ``phi`` under the standard Kripke clauses, evaluated pointwise.

    Pass the same ``memo`` dict across calls on one universe to share work.
    """
    W.check_formula(phi)
    if memo is None:
        memo = {}

    def forces(i: int, f: Formula) -> bool:
        key = (i, f)
        got = memo.get(key)
        if got is not None:
            return got
        match f:
            case Atom(name):
                got = name in W.derivable(i)
            case Top():
                got = True
            case Bot():
                got = False
            case And(l, r):
                got = forces(i, l) and forces(i, r)
            case Or(l, r):
                got = forces(i, l) or forces(i, r)
            case Imp(l, r):
                got = all(not forces(j, l) or forces(j, r) for j in W.extensions(i))
            case _:
                raise TypeError(f"not a formula: {f!r}")
        memo[key] = got
        return got

    return sum(1 << i for i in range(len(W)) if forces(i, phi))


def denote_algebraic(P: BasePoset, sigma: CanonicalInterp, phi: Formula,
                     memo: Optional[dict] = None) -> UpSet:
    if memo is None:
        memo = {}

    def den(f: Formula) -> UpSet:
        got = memo.get(f)
        if got is not None:
            return got
        match f:
            case Atom(name):
                if name not in sigma:
                    raise UnknownAtomError(f"no interpretation for atom {name!r}")
                got = sigma[name]
            case Top():
                got = P.top
            case Bot():
                got = 0
            case And(l, r):
                got = den(l) & den(r)
            case Or(l, r):
                got = den(l) | den(r)
            case Imp(l, r):
                got = heyting_imp(P, den(l), den(r))
            case _:
                raise TypeError(f"not a formula: {f!r}")
        memo[f] = got
        return got

    for a, u in sigma.items():
        P.check_upset(u, f"interpretation of {a}")
    return den(phi)
