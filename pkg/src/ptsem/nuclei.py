"""Nuclei on finite up-set algebras and the interpretations they induce.

A nucleus is order-preserving, increasing, idempotent and meet-preserving.
Its fixpoints form a complete Heyting algebra with meets, implication and
top inherited, joins given by ``j`` of the union and bottom ``j(0)``.

Nuclei are functions memoized into a table.  On small posets the table can be
forced to cover every up-set (:meth:`Nucleus.table`), which is what the law
checker works on; on large posets (a thousand worlds has far too many up-sets
to enumerate) entries are filled on demand.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .heyting import BasePoset, NotUpSetError, UpSet, heyting_imp, sigma_deriv
from .support import WorldUniverse
from .syntax import And, Atom, Bot, Formula, Imp, Or, Top


class PartialTableError(ValueError):
    pass


class PosetMismatchError(ValueError):
    pass


class Nucleus:
    def __init__(self, poset: BasePoset, fn: Callable[[UpSet], UpSet], name: str = "j"):
        self.poset = poset
        self.name = name
        self._fn = fn
        self._memo: dict[UpSet, UpSet] = {}

    @classmethod
    def from_table(cls, poset: BasePoset, table: Mapping[UpSet, UpSet], name: str = "j") -> Nucleus:
        ups = poset.upsets()
        missing = [u for u in ups if u not in table]
        if missing:
            raise PartialTableError(
                f"table has no entry for up-set(s) {[poset.members(u) for u in missing]}")
        for u, v in table.items():
            if not poset.is_upset(u) or not poset.is_upset(v):
                raise NotUpSetError(f"table entry {poset.members(u)} -> {poset.members(v)} "
                                    "is not between up-sets")
        frozen = dict(table)
        nuc = cls(poset, frozen.__getitem__, name)
        nuc._memo.update(frozen)
        return nuc

    def __call__(self, u: UpSet) -> UpSet:
        got = self._memo.get(u)
        if got is None:
            got = self._fn(u)
            self._memo[u] = got
        return got

    def table(self) -> dict[UpSet, UpSet]:
        return {u: self(u) for u in self.poset.upsets()}

    def __repr__(self):
        return f"Nucleus({self.name}, {self.poset.size} worlds)"


def identity_nucleus(P: BasePoset) -> Nucleus:
    return Nucleus(P, lambda u: u, "id")


def constant_top_nucleus(P: BasePoset) -> Nucleus:
    return Nucleus(P, lambda u: P.top, "top")


def nucleus_from_element(P: BasePoset, h: UpSet, name: Optional[str] = None) -> Nucleus:
    """``a ↦ (a → h) → h``."""
    P.check_upset(h, "element")
    return Nucleus(P, lambda a: heyting_imp(P, heyting_imp(P, a, h), h),
                   name or f"j[{','.join(map(str, P.members(h)))}]")


def meet_nuclei(P: BasePoset, js: Sequence[Nucleus], name: str = "meet") -> Nucleus:
    if not js:
        raise ValueError("meet of an empty family of nuclei")
    for j in js:
        if not j.poset.same_as(P):
            raise PosetMismatchError(f"nucleus {j.name} lives on a different poset")

    def meet(a: UpSet) -> UpSet:
        out = P.top
        for j in js:
            out &= j(a)
        return out

    return Nucleus(P, meet, name)


def sandqvist_nucleus(W: WorldUniverse, P: Optional[BasePoset] = None) -> Nucleus:
    """``J(a) = ⋀_b (a → ⟦b⟧) → ⟦b⟧`` over every atom ``b`` of the universe."""
    if not W.atom_universe:
        raise ValueError("the atom universe is empty, so J is a meet over nothing")
    P = P or BasePoset.from_universe(W)
    sigma = sigma_deriv(W)
    return meet_nuclei(P, [nucleus_from_element(P, sigma[b], f"j_{b}") for b in sigma], "J")


# -- law checking -------------------------------------------------------------

@dataclass
class LawResult:
    law: str
    passed: bool
    witness: Optional[tuple] = None

    def __str__(self):
        if self.passed:
            return f"{self.law}: pass"
        return f"{self.law}: FAIL at {self.witness}"


@dataclass
class NucleusReport:
    results: list[LawResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, law: str) -> LawResult:
        for r in self.results:
            if r.law == law:
                return r
        raise KeyError(law)

    def as_dict(self) -> dict:
        return {r.law: {"passed": r.passed, "witness": r.witness} for r in self.results}


LAWS = ("order-preserving", "increasing", "idempotent", "meet-preserving")


def check_nucleus_laws(P: BasePoset, j: Nucleus) -> NucleusReport:
    """Exhaustive check of the four nucleus laws; one witness per failed law."""
    if not j.poset.same_as(P):
        raise PosetMismatchError("nucleus and poset differ")
    ups = P.upsets()
    table = {}
    for u in ups:
        v = j(u)
        if not P.is_upset(v):
            raise PartialTableError(f"{j.name} sends {P.members(u)} to the non-up-set {P.members(v)}")
        table[u] = v
    m = P.members
    order = inc = idem = meet = None
    for a in ups:
        ja = table[a]
        if inc is None and a & ~ja:
            inc = (m(a), m(ja))
        if idem is None and table.get(ja, j(ja)) != ja:
            idem = (m(a), m(ja), m(j(ja)))
        for b in ups:
            jb = table[b]
            if order is None and a & ~b == 0 and ja & ~jb:
                order = (m(a), m(b))
            if meet is None and table[a & b] != ja & jb:
                meet = (m(a), m(b))
    return NucleusReport([
        LawResult("order-preserving", order is None, order),
        LawResult("increasing", inc is None, inc),
        LawResult("idempotent", idem is None, idem),
        LawResult("meet-preserving", meet is None, meet),
    ])


class FixSubalgebra:
    """The fixpoints of a nucleus, with their Heyting operations."""

    def __init__(self, P: BasePoset, j: Nucleus):
        self.P = P
        self.j = j
        self.carrier = sorted({j(u) for u in P.upsets()})
        self._members = set(self.carrier)

    def __contains__(self, u: UpSet) -> bool:
        return u in self._members

    @property
    def top(self) -> UpSet:
        return self.P.top

    @property
    def bottom(self) -> UpSet:
        return self.j(0)

    def meet(self, a: UpSet, b: UpSet) -> UpSet:
        return a & b

    def join(self, xs: Iterable[UpSet]) -> UpSet:
        u = 0
        for x in xs:
            u |= x
        return self.j(u)

    def imp(self, a: UpSet, b: UpSet) -> UpSet:
        return heyting_imp(self.P, a, b)

    def check(self) -> list[str]:
        """Closure and algebra laws; returns a description of every failure."""
        P, H = self.P, self.carrier
        fails = []
        if self.top not in self:
            fails.append("top is not a fixpoint")
        for a in P.upsets():
            for b in H:
                if self.imp(a, b) not in self:
                    fails.append(f"{P.members(a)} -> {P.members(b)} leaves the fixpoints")
        for a, b in combinations(H, 2):
            if a & b not in self:
                fails.append(f"meet of {P.members(a)}, {P.members(b)} leaves the fixpoints")
        # join_j is the least upper bound inside the carrier, for every family
        families = [()] + [(a,) for a in H] + list(combinations(H, 2))
        if len(H) <= 12:
            families += list(combinations(H, 3))
        families.append(tuple(H))
        for fam in families:
            s = self.join(fam)
            if s not in self:
                fails.append(f"join of {[P.members(x) for x in fam]} leaves the fixpoints")
                continue
            uppers = [c for c in H if all(x & ~c == 0 for x in fam)]
            if s not in uppers or any(s & ~c for c in uppers):
                fails.append(f"join of {[P.members(x) for x in fam]} is not least")
        for x in H:
            for fam in families:
                lhs = x & self.join(fam)
                rhs = self.join(x & y for y in fam)
                if lhs != rhs:
                    fails.append(f"meet fails to distribute over join at {P.members(x)}")
        for x in H:
            for a in H:
                for b in H:
                    if ((x & a) & ~b == 0) != (x & ~self.imp(a, b) == 0):
                        fails.append(f"adjunction fails at {P.members(x)}, {P.members(a)}, {P.members(b)}")
        return fails


# -- j-interpretation ---------------------------------------------------------

def interpret_j(W: Union[WorldUniverse, BasePoset], j: Nucleus, phi: Formula,
                sigma: Optional[Mapping[str, UpSet]] = None, memo: Optional[dict] = None) -> UpSet:
    """Interpretation in the fixpoints of ``j``: atoms as ``j∘σ``, ``bot`` as
    ``j(0)``, disjunction as ``j`` of the union; top, meet and implication as in
    the ambient algebra."""
    if isinstance(W, WorldUniverse):
        W.check_formula(phi)
        P = j.poset
        sigma = sigma if sigma is not None else sigma_deriv(W)
    else:
        P = W
        if sigma is None:
            raise ValueError("an atom interpretation is needed when no universe is given")
    if memo is None:
        memo = {}

    def den(f: Formula) -> UpSet:
        got = memo.get(f)
        if got is not None:
            return got
        match f:
            case Atom(name):
                got = j(sigma[name])
            case Top():
                got = P.top
            case Bot():
                got = j(0)
            case And(l, r):
                got = den(l) & den(r)
            case Or(l, r):
                got = j(den(l) | den(r))
            case Imp(l, r):
                got = heyting_imp(P, den(l), den(r))
            case _:
                raise TypeError(f"not a formula: {f!r}")
        memo[f] = got
        return got

    return den(phi)


def equivalence_counterexamples(W: WorldUniverse, formulas: Iterable[Formula],
                                J: Optional[Nucleus] = None, limit: int = 20) -> list[dict]:
    """Worlds where support and the J-interpretation disagree."""
    J = J or sandqvist_nucleus(W)
    cache = W.cache
    sigma = sigma_deriv(W)
    memo: dict = {}
    out = []
    for phi in formulas:
        s = cache.extent(phi)
        k = interpret_j(W, J, phi, sigma, memo)
        diff = s ^ k
        if diff:
            i = (diff & -diff).bit_length() - 1
            out.append({"formula": str(phi), "base": W.label(i),
                        "supports": bool(s >> i & 1), "in_J_interpretation": bool(k >> i & 1)})
            if len(out) >= limit:
                break
    return out
