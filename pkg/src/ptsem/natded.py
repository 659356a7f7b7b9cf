"""Natural deduction (NJ) proof trees and a checker for them."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .syntax import BOT, TOP, And, Bot, Formula, Imp, Or, Sequent, Top, print_formula

KINDS = ("Hyp", "AndI", "AndE1", "AndE2", "ImpI", "ImpE",
         "OrI1", "OrI2", "OrE", "BotE", "TopI")


@dataclass(frozen=True)
class NDProof:
    kind: str
    conclusion: Formula
    premises: tuple[NDProof, ...] = ()
    # ImpI: (phi,); OrE: (phi, psi) for the left and right minor premises
    discharged: tuple[Formula, ...] = ()

    @cached_property
    def open_hypotheses(self) -> frozenset:
        match self.kind:
            case "Hyp":
                return frozenset([self.conclusion])
            case "ImpI" if self.premises and self.discharged:
                return self.premises[0].open_hypotheses - {self.discharged[0]}
            case "OrE" if len(self.premises) == 3 and len(self.discharged) == 2:
                major, left, right = self.premises
                return (major.open_hypotheses
                        | (left.open_hypotheses - {self.discharged[0]})
                        | (right.open_hypotheses - {self.discharged[1]}))
        out = frozenset()
        for p in self.premises:
            out |= p.open_hypotheses
        return out

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        extra = f" [discharging {', '.join(map(print_formula, self.discharged))}]" if self.discharged else ""
        lines = [f"{pad}{self.kind}: {print_formula(self.conclusion)}{extra}"]
        lines += [p.render(indent + 1) for p in self.premises]
        return "\n".join(lines)

    def to_json(self) -> dict:
        out = {"rule": self.kind, "conclusion": print_formula(self.conclusion)}
        if self.discharged:
            out["discharges"] = [print_formula(d) for d in self.discharged]
        if self.premises:
            out["premises"] = [p.to_json() for p in self.premises]
        return out


def hyp(phi: Formula) -> NDProof:
    return NDProof("Hyp", phi)


def and_i(p: NDProof, q: NDProof) -> NDProof:
    return NDProof("AndI", And(p.conclusion, q.conclusion), (p, q))


def and_e1(p: NDProof) -> NDProof:
    assert isinstance(p.conclusion, And)
    return NDProof("AndE1", p.conclusion.left, (p,))


def and_e2(p: NDProof) -> NDProof:
    assert isinstance(p.conclusion, And)
    return NDProof("AndE2", p.conclusion.right, (p,))


def imp_i(phi: Formula, p: NDProof) -> NDProof:
    return NDProof("ImpI", Imp(phi, p.conclusion), (p,), (phi,))


def imp_e(major: NDProof, minor: NDProof) -> NDProof:
    assert isinstance(major.conclusion, Imp)
    return NDProof("ImpE", major.conclusion.right, (major, minor))


def or_i1(p: NDProof, right: Formula) -> NDProof:
    return NDProof("OrI1", Or(p.conclusion, right), (p,))


def or_i2(left: Formula, p: NDProof) -> NDProof:
    return NDProof("OrI2", Or(left, p.conclusion), (p,))


def or_e(major: NDProof, left: NDProof, right: NDProof) -> NDProof:
    assert isinstance(major.conclusion, Or)
    d = major.conclusion
    return NDProof("OrE", left.conclusion, (major, left, right), (d.left, d.right))


def bot_e(p: NDProof, conclusion: Formula) -> NDProof:
    return NDProof("BotE", conclusion, (p,))


def top_i() -> NDProof:
    return NDProof("TopI", TOP)


def locally_valid(p: NDProof) -> bool:
    c = p.conclusion
    ps = p.premises
    k = p.kind
    if k not in KINDS:
        return False
    if k == "Hyp":
        return not ps and not p.discharged
    if k == "TopI":
        return not ps and isinstance(c, Top) and not p.discharged
    if k in ("ImpI", "OrE"):
        n_disch = 1 if k == "ImpI" else 2
        if len(p.discharged) != n_disch:
            return False
    elif p.discharged:
        return False
    arity = {"AndI": 2, "AndE1": 1, "AndE2": 1, "ImpI": 1, "ImpE": 2,
             "OrI1": 1, "OrI2": 1, "OrE": 3, "BotE": 1}[k]
    if len(ps) != arity:
        return False
    cs = [q.conclusion for q in ps]
    match k:
        case "AndI":
            return c == And(cs[0], cs[1])
        case "AndE1":
            return isinstance(cs[0], And) and cs[0].left == c
        case "AndE2":
            return isinstance(cs[0], And) and cs[0].right == c
        case "ImpI":
            return c == Imp(p.discharged[0], cs[0])
        case "ImpE":
            return cs[0] == Imp(cs[1], c)
        case "OrI1":
            return isinstance(c, Or) and c.left == cs[0]
        case "OrI2":
            return isinstance(c, Or) and c.right == cs[0]
        case "OrE":
            return (cs[0] == Or(p.discharged[0], p.discharged[1])
                    and cs[1] == c and cs[2] == c)
        case "BotE":
            return isinstance(cs[0], Bot)
    return False


def nd_check(p: NDProof, s: Sequent) -> bool:
    """Every node well-formed, root proves the succedent, open hypotheses among the antecedents."""
    stack = [p]
    while stack:
        q = stack.pop()
        if not locally_valid(q):
            return False
        stack.extend(q.premises)
    return p.conclusion == s.succedent and p.open_hypotheses <= set(s.antecedents)


__all__ = ["NDProof", "nd_check", "locally_valid", "hyp", "and_i", "and_e1", "and_e2",
           "imp_i", "imp_e", "or_i1", "or_i2", "or_e", "bot_e", "top_i", "BOT"]
