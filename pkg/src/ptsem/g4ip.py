"""Decision procedure for intuitionistic propositional logic.

Dyckhoff's contraction-free calculus G4ip.  Invertible rules are applied
eagerly; the only choice points are the right disjunction rules and the
left rule for an implication whose antecedent is itself an implication:

    Γ, D→B ⊢ C→D     Γ, B ⊢ G
    --------------------------  (→→L)
         Γ, (C→D)→B ⊢ G

Implications on the left are otherwise split by the head of their antecedent:
an atom present in Γ fires (→L atom), ⊥→B is dropped, ⊤→B becomes B,
(C∧D)→B is curried and (C∨D)→B splits into C→B and D→B.  Every premise is
smaller in the multiset ordering Dyckhoff defines, so search terminates
without loop checking.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from .syntax import And, Atom, Bot, Formula, Imp, Or, Top


def g4ip_provable(gamma: Iterable[Formula], phi: Formula) -> bool:
    return _prove(frozenset(gamma), phi)


@lru_cache(maxsize=1 << 18)
def _prove(gamma: frozenset, goal: Formula) -> bool:
    ctx = set(gamma)
    changed = True
    while changed:
        changed = False
        for f in list(ctx):
            match f:
                case Bot():
                    return True
                case Top():
                    ctx.discard(f)
                    changed = True
                case And(l, r):
                    ctx.discard(f)
                    ctx.update((l, r))
                    changed = True
                case Or(l, r):
                    rest = frozenset(ctx - {f})
                    return _prove(rest | {l}, goal) and _prove(rest | {r}, goal)
                case Imp(Atom() as a, b) if a in ctx:
                    ctx.discard(f)
                    ctx.add(b)
                    changed = True
                case Imp(Bot(), _):
                    ctx.discard(f)
                    changed = True
                case Imp(Top(), b):
                    ctx.discard(f)
                    ctx.add(b)
                    changed = True
                case Imp(And(c, d), b):
                    ctx.discard(f)
                    ctx.add(Imp(c, Imp(d, b)))
                    changed = True
                case Imp(Or(c, d), b):
                    ctx.discard(f)
                    ctx.update((Imp(c, b), Imp(d, b)))
                    changed = True
            if changed:
                break

    match goal:
        case Top():
            return True
        case And(l, r):
            return _prove(frozenset(ctx), l) and _prove(frozenset(ctx), r)
        case Imp(l, r):
            return _prove(frozenset(ctx | {l}), r)
    if goal in ctx:
        return True
    frozen = frozenset(ctx)
    if isinstance(goal, Or) and (_prove(frozen, goal.left) or _prove(frozen, goal.right)):
        return True
    for f in ctx:
        if isinstance(f, Imp) and isinstance(f.left, Imp):
            c, d, b = f.left.left, f.left.right, f.right
            rest = frozen - {f}
            if _prove(rest | {Imp(d, b)}, Imp(c, d)) and _prove(rest | {b}, goal):
                return True
    return False
