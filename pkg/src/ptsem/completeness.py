"""From sequents to atomic bases and back.

``flatten`` names every compound subformula of a sequent by a fresh atom
``#k``.  ``build_base_N`` turns each natural-deduction rule instance over
those subformulas into an atomic rule on the names, so that derivability in
the resulting base coincides with intuitionistic provability of the sequent.
``derivation_to_nd`` reads a derivation in that base back as an NJ proof.
``check_dagger`` verifies, world by world, that a base extending N supports
each subformula exactly when it derives the subformula's name.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import natded as nd
from .bases import (AtomicRule, Base, DerivationTree, RefNode, UnknownAtomError,
                    derive_tree, format_rule, parse_rule, sort_atoms)
from .g4ip import g4ip_provable
from .natded import NDProof
from .support import MAX_SUBSET_RULES, UniverseError, WorldUniverse
from .syntax import (RESERVED_PREFIX, And, Atom, Bot, Formula, Imp, Or, Sequent, Top,
                     print_formula, subformulas)


class ReservedAtomError(ValueError):
    pass


class ForeignRuleError(ValueError):
    """A derivation used a rule that the base construction never emitted."""


@dataclass(frozen=True)
class FlatMap:
    names: dict  # Formula -> atom name
    formulas: dict  # atom name -> Formula

    def name(self, phi: Formula) -> str:
        return self.names[phi]

    def formula(self, name: str) -> Formula:
        return self.formulas[name]

    @property
    def atom_set(self) -> list[str]:
        return sort_atoms(self.formulas)

    def fresh(self) -> list[tuple[str, Formula]]:
        return [(a, self.formulas[a]) for a in sort_atoms(self.formulas) if a.startswith(RESERVED_PREFIX)]

    def table(self) -> str:
        return "\n".join(f"{a} = {print_formula(f)}" for a, f in self.fresh())


def flatten(s: Sequent) -> tuple[FlatMap, list[str]]:
    names: dict[Formula, str] = {}
    k = 0
    for phi in subformulas(s):
        if isinstance(phi, Atom):
            if phi.name.startswith(RESERVED_PREFIX):
                raise ReservedAtomError(f"atom {phi.name!r} uses the reserved prefix {RESERVED_PREFIX!r}")
            names[phi] = phi.name
        else:
            names[phi] = f"{RESERVED_PREFIX}{k}"
            k += 1
    fm = FlatMap(names, {a: f for f, a in names.items()})
    return fm, fm.atom_set


@dataclass(frozen=True)
class NBase:
    base: Base
    flatmap: FlatMap
    sequent: Sequent
    # rule -> (NJ rule name, the subformula it was generated for, target atom or None)
    origin: dict = field(hash=False, compare=False)

    @property
    def atoms(self) -> list[str]:
        return self.flatmap.atom_set

    def context(self) -> frozenset:
        return frozenset(self.flatmap.name(g) for g in self.sequent.antecedents)

    def goal(self) -> str:
        return self.flatmap.name(self.sequent.succedent)


def build_base_N(s: Sequent) -> NBase:
    fm, at = flatten(s)
    f = fm.name
    origin: dict[AtomicRule, tuple] = {}

    def emit(clauses, concl, kind, chi, target=None):
        origin.setdefault(AtomicRule.make(clauses, concl), (kind, chi, target))

    for chi in subformulas(s):
        c = f(chi)
        match chi:
            case And(l, r):
                emit([((), f(l)), ((), f(r))], c, "AndI", chi)
                emit([((), c)], f(l), "AndE1", chi)
                emit([((), c)], f(r), "AndE2", chi)
            case Imp(l, r):
                emit([((f(l),), f(r))], c, "ImpI", chi)
                emit([((), c), ((), f(l))], f(r), "ImpE", chi)
            case Or(l, r):
                emit([((), f(l))], c, "OrI1", chi)
                emit([((), f(r))], c, "OrI2", chi)
                for p in at:
                    emit([((), c), ((f(l),), p), ((f(r),), p)], p, "OrE", chi, p)
            case Bot():
                for p in at:
                    emit([((), c)], p, "BotE", chi, p)
            case Top():
                emit([], c, "TopI", chi)
    return NBase(Base(frozenset(origin), frozenset(at)), fm, s, origin)


def prove_via_base(s: Sequent) -> bool:
    return prove_via_base_witness(s)[0]


def prove_via_base_witness(s: Sequent) -> tuple[bool, Optional[DerivationTree], NBase]:
    nb = build_base_N(s)
    tree = derive_tree(nb.base, nb.context(), nb.goal())
    return tree is not None, tree, nb


def derivation_to_nd(d: DerivationTree, nb: NBase) -> NDProof:
    """Read each N-rule application as the NJ rule it was generated from."""
    fm = nb.flatmap

    def conv(t: DerivationTree) -> NDProof:
        if isinstance(t, RefNode):
            return nd.hyp(fm.formula(t.atom))
        try:
            kind, chi, target = nb.origin[t.rule]
        except KeyError:
            raise ForeignRuleError(f"rule {format_rule(t.rule)} is not part of N") from None
        # clauses are stored canonically sorted, so look premises up by content
        def sub(premises, concl):
            return conv(t.subtrees[t.rule.clauses.index((frozenset(premises), concl))])
        f = fm.name
        match kind:
            case "AndI":
                return nd.and_i(sub((), f(chi.left)), sub((), f(chi.right)))
            case "AndE1":
                return nd.and_e1(sub((), f(chi)))
            case "AndE2":
                return nd.and_e2(sub((), f(chi)))
            case "ImpI":
                return nd.imp_i(chi.left, sub((f(chi.left),), f(chi.right)))
            case "ImpE":
                return nd.imp_e(sub((), f(chi)), sub((), f(chi.left)))
            case "OrI1":
                return nd.or_i1(sub((), f(chi.left)), chi.right)
            case "OrI2":
                return nd.or_i2(chi.left, sub((), f(chi.right)))
            case "OrE":
                return nd.or_e(sub((), f(chi)), sub((f(chi.left),), target), sub((f(chi.right),), target))
            case "BotE":
                return nd.bot_e(sub((), f(chi)), fm.formula(target))
            case "TopI":
                return nd.top_i()
        raise AssertionError(kind)

    return conv(d)


def prove(s: Sequent) -> bool:
    return g4ip_provable(s.antecedents, s.succedent)


# -- the (†) check -----------------------------------------------------------

@dataclass
class DaggerReport:
    sequent: str
    worlds: int
    checks: int
    counterexamples: list[dict]
    promotion_axioms: list[str]
    seconds: float

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def as_dict(self) -> dict:
        return {"sequent": self.sequent, "worlds": self.worlds, "checks": self.checks,
                "passed": self.ok, "promotion_axioms": self.promotion_axioms,
                "counterexamples": self.counterexamples, "seconds": round(self.seconds, 4)}


def promotion_axioms(nb: NBase) -> list[AtomicRule]:
    """``(=> ⌊φ⌋)`` for each implication antecedent and each disjunct among the subformulas.

    The implication and disjunction cases of (†) move from ``B`` to
    ``B ∪ {(=> ⌊φ⌋)}``, so that base has to be a world too.
    """
    out: dict[AtomicRule, None] = {}
    for chi in subformulas(nb.sequent):
        if isinstance(chi, Imp):
            out.setdefault(AtomicRule.axiom(nb.flatmap.name(chi.left)))
        elif isinstance(chi, Or):
            out.setdefault(AtomicRule.axiom(nb.flatmap.name(chi.left)))
            out.setdefault(AtomicRule.axiom(nb.flatmap.name(chi.right)))
    return list(out)


def dagger_universe(s: Sequent, extra_rules: Iterable[AtomicRule | str] = (),
                    close_under_promotion: bool = True) -> tuple[WorldUniverse, NBase, list[AtomicRule]]:
    nb = build_base_N(s)
    at = frozenset(nb.atoms)
    extras = []
    for r in extra_rules:
        r = parse_rule(r) if isinstance(r, str) else r
        unknown = r.atoms() - at
        if unknown:
            raise UnknownAtomError(
                f"extra rule {format_rule(r)!r} mentions atom(s) {', '.join(sort_atoms(unknown))} "
                f"outside {{{', '.join(nb.atoms)}}}")
        extras.append(r)
    added = []
    core = nb.base.sorted_rules()
    rules = list(core)
    for r in extras + (promotion_axioms(nb) if close_under_promotion else []):
        if r not in rules:
            rules.append(r)
            if r not in extras:
                added.append(r)
    free = len(rules) - len(core)
    if free > MAX_SUBSET_RULES:
        raise UniverseError(f"{free} rules beyond N would need 2^{free} worlds "
                            f"(limit is 2^{MAX_SUBSET_RULES})")
    n_core = len(core)
    bases = [list(range(n_core)) + [n_core + k for k in range(free) if m >> k & 1]
             for m in range(1 << free)]
    return WorldUniverse(at, rules, bases), nb, added


def check_dagger(s: Sequent, extra_rules: Iterable[AtomicRule | str] = (),
                 close_under_promotion: bool = True) -> DaggerReport:
    """For every world ``B ⊇ N`` and every subformula φ: ``B ⊩ ⌊φ⌋`` iff ``B ⊩ φ``."""
    t0 = time.perf_counter()
    W, nb, added = dagger_universe(s, extra_rules, close_under_promotion)
    cache = W.cache
    bad = []
    checks = 0
    for phi in subformulas(s):
        flat = cache.extent(Atom(nb.flatmap.name(phi)))
        real = cache.extent(phi)
        checks += len(W)
        diff = flat ^ real
        for i in range(len(W)):
            if diff >> i & 1:
                bad.append({"base": W.label(i), "formula": print_formula(phi),
                            "atom": nb.flatmap.name(phi),
                            "supports_atom": bool(flat >> i & 1),
                            "supports_formula": bool(real >> i & 1)})
    return DaggerReport(str(s), len(W), checks, bad, [format_rule(r) for r in added],
                        time.perf_counter() - t0)
