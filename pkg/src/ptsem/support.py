"""Sandqvist support, inference and validity over a finite universe of bases.

Every "for every C ⊇ B" in the clauses ranges over the bases of a declared
:class:`WorldUniverse`, and "for every atom" over its atom universe.

Clauses, for a base B:

    B ⊩ a        iff  ⊢_B a
    B ⊩ top      always
    B ⊩ φ ∧ ψ    iff  B ⊩ φ and B ⊩ ψ
    B ⊩ φ → ψ    iff  φ ⊩_B ψ
    B ⊩ φ ∨ ψ    iff  for every atom a and C ⊇ B, φ ⊩_C a and ψ ⊩_C a imply C ⊩ a
    B ⊩ bot      iff  B ⊩ a for every atom a
    Θ ⊩_B φ      iff  for every C ⊇ B, C ⊩ θ for all θ in Θ implies C ⊩ φ
"""
from __future__ import annotations

import re
import threading
from typing import Iterable, Optional, Sequence, Union

from .bases import (AtomicRule, Base, RuleSyntaxError, UnknownAtomError, derivable_atoms,
                    derivable_from_rules, format_rule, parse_rule, sort_atoms, _split_atom_list)
from .order import FiniteOrder, SubsetOrder, iter_bits
from .syntax import And, Atom, Bot, Formula, Imp, Or, Top, atoms as formula_atoms

MAX_SUBSET_RULES = 20


class UniverseError(ValueError):
    pass


BaseRef = Union[Base, int, Iterable[int]]


class WorldUniverse:
    """A finite atom set, a finite rule universe and the bases built from it.

    ``bases=None`` selects every subset of the rule universe; otherwise
    ``bases`` lists rule-index sets, and the family must contain every
    superset (within the rule universe) of each listed base.
    """

    def __init__(self, atoms: Iterable[str], rules: Sequence[AtomicRule | str],
                 bases: Optional[Iterable[Iterable[int]]] = None, check_closed: bool = True):
        self.atom_universe = frozenset(atoms)
        rs = []
        for r in rules:
            r = parse_rule(r) if isinstance(r, str) else r
            if r in rs:
                raise UniverseError(f"duplicate rule in universe: {format_rule(r)}")
            missing = r.atoms() - self.atom_universe
            if missing:
                raise UnknownAtomError(
                    f"rule {format_rule(r)!r} mentions unknown atom(s) {', '.join(sort_atoms(missing))}")
            rs.append(r)
        self.rule_universe = tuple(rs)
        n = len(rs)
        if bases is None:
            if n > MAX_SUBSET_RULES:
                raise UniverseError(
                    f"all-subsets mode over {n} rules would need 2^{n} worlds "
                    f"(limit is {MAX_SUBSET_RULES} rules)")
            self.mode = "all-subsets"
            self.worlds = list(range(1 << n))  # rule bitmask of each world
            self.order: FiniteOrder = SubsetOrder(n)
        else:
            self.mode = "explicit"
            masks = []
            for b in bases:
                m = 0
                for k in b:
                    if not 0 <= k < n:
                        raise UniverseError(f"base refers to rule index {k}, universe has {n} rules")
                    m |= 1 << k
                if m not in masks:
                    masks.append(m)
            if not masks:
                raise UniverseError("explicit universe lists no bases")
            self.worlds = masks
            if check_closed:
                listed = set(masks)
                for m in masks:
                    for k in range(n):
                        if (m | 1 << k) not in listed:
                            raise UniverseError(
                                f"base {_fmt_mask(m)} is listed but its extension "
                                f"{_fmt_mask(m | 1 << k)} is not; the family must be upward closed")
            self.order = _inclusion_order(masks, n)
        self._index = {m: i for i, m in enumerate(self.worlds)}
        self._derivable: Optional[list[frozenset]] = None
        self._atom_masks: dict[str, int] = {}
        self._cache: Optional[SupportCache] = None
        self._lock = threading.Lock()

    # -- worlds ---------------------------------------------------------------

    def __len__(self):
        return len(self.worlds)

    @property
    def full(self) -> int:
        return self.order.full

    def rules_of(self, i: int) -> frozenset:
        m = self.worlds[i]
        return frozenset(self.rule_universe[k] for k in iter_bits(m))

    def base(self, i: int) -> Base:
        return Base(self.rules_of(i), self.atom_universe)

    def bases(self) -> list[Base]:
        return [self.base(i) for i in range(len(self.worlds))]

    def label(self, i: int) -> str:
        return _fmt_mask(self.worlds[i])

    def index(self, b: BaseRef) -> int:
        if isinstance(b, Base):
            m = 0
            for r in b.rules:
                try:
                    m |= 1 << self.rule_universe.index(r)
                except ValueError:
                    raise UniverseError(f"rule {format_rule(r)} is not in the rule universe") from None
        elif isinstance(b, int):
            if not 0 <= b < len(self.worlds):
                raise UniverseError(f"no world with index {b}")
            return b
        else:
            m = 0
            for k in b:
                m |= 1 << k
        try:
            return self._index[m]
        except KeyError:
            raise UniverseError(f"base {_fmt_mask(m)} is not a world of this universe") from None

    def extensions(self, i: int) -> list[int]:
        return list(iter_bits(self.order.up[i]))

    # -- atomic derivability ----------------------------------------------------

    def derivable(self, i: int) -> frozenset:
        if self._derivable is None:
            with self._lock:
                if self._derivable is None:
                    self._derivable = [derivable_from_rules(self.rules_of(j)) for j in range(len(self.worlds))]
        return self._derivable[i]

    def atom_mask(self, a: str) -> int:
        """Worlds deriving ``a`` from no hypotheses."""
        if a not in self.atom_universe:
            raise UnknownAtomError(f"unknown atom {a!r}")
        m = self._atom_masks.get(a)
        if m is None:
            m = 0
            for i in range(len(self.worlds)):
                if a in self.derivable(i):
                    m |= 1 << i
            self._atom_masks[a] = m
        return m

    def check_formula(self, phi: Formula):
        missing = formula_atoms(phi) - self.atom_universe
        if missing:
            raise UnknownAtomError(f"unknown atom(s): {', '.join(sort_atoms(missing))}")

    @property
    def cache(self) -> SupportCache:
        if self._cache is None:
            with self._lock:
                if self._cache is None:
                    self._cache = SupportCache(self)
        return self._cache

    def promotion_in_universe(self, b: BaseRef, atoms: Iterable[str]) -> bool:
        """Whether ``B ∪ {(=> p) | p in atoms}`` is itself a world."""
        i = self.index(b)
        m = self.worlds[i]
        for p in atoms:
            ax = AtomicRule.axiom(p)
            if ax not in self.rule_universe:
                return False
            m |= 1 << self.rule_universe.index(ax)
        return m in self._index


def _inclusion_order(masks: list[int], n_rules: int) -> FiniteOrder:
    """Inclusion between the listed rule sets.

    Worlds listed as "rules 0..k-1 plus every subset of the rest, counting
    up" are a subset lattice, which gets the fast bitwise order.
    """
    free = len(masks).bit_length() - 1
    core = masks[0]
    shift = core.bit_length()
    if (len(masks) == 1 << free and core == (1 << shift) - 1 and shift + free == n_rules
            and all(m == core | (i << shift) for i, m in enumerate(masks))):
        return SubsetOrder(free)
    # inclusion is always a partial order, so the cubic check is skipped
    return FiniteOrder([[a & ~b == 0 for b in masks] for a in masks], check=False)


def _fmt_mask(m: int) -> str:
    return "{" + ",".join(str(k) for k in iter_bits(m)) + "}"


class SupportCache:
    """Memo of support extents: formula -> bitmask of the worlds supporting it.

    Each entry is filled once from the clauses; entries never change, so
    concurrent readers see either no entry or the final one.
    """

    def __init__(self, W: WorldUniverse):
        self.W = W
        self._extent: dict[Formula, int] = {}
        self._infers: dict[tuple[frozenset, Formula], int] = {}
        self._atoms = sort_atoms(W.atom_universe)

    def extent(self, phi: Formula) -> int:
        got = self._extent.get(phi)
        if got is None:
            got = self._compute(phi)
            self._extent[phi] = got
        return got

    def infers_extent(self, theta: Iterable[Formula], phi: Formula) -> int:
        key = (frozenset(theta), phi)
        got = self._infers.get(key)
        if got is None:
            W = self.W
            hyp = W.full
            for t in key[0]:
                hyp &= self.extent(t)
            got = W.order.box((W.full & ~hyp) | self.extent(phi))
            self._infers[key] = got
        return got

    def _compute(self, phi: Formula) -> int:
        W = self.W
        match phi:
            case Atom(name):
                return W.atom_mask(name)
            case Top():
                return W.full
            case And(l, r):
                return self.extent(l) & self.extent(r)
            case Imp(l, r):
                return self.infers_extent((l,), r)
            case Or(l, r):
                out = W.full
                for a in self._atoms:
                    a_at = Atom(a)
                    both = self.infers_extent((l,), a_at) & self.infers_extent((r,), a_at)
                    out &= W.order.box((W.full & ~both) | W.atom_mask(a))
                return out
            case Bot():
                out = W.full
                for a in self._atoms:
                    out &= W.atom_mask(a)
                return out
        raise TypeError(f"not a formula: {phi!r}")


def supports(W: WorldUniverse, B: BaseRef, phi: Formula) -> bool:
    i = W.index(B)
    W.check_formula(phi)
    return bool(W.cache.extent(phi) >> i & 1)


def infers(W: WorldUniverse, B: BaseRef, theta: Iterable[Formula], phi: Formula) -> bool:
    i = W.index(B)
    theta = list(theta)
    for f in (*theta, phi):
        W.check_formula(f)
    return bool(W.cache.infers_extent(theta, phi) >> i & 1)


def atomic_collapse(W: WorldUniverse, B: BaseRef, premises: Iterable[str], goal: str) -> tuple[bool, bool]:
    """``(P ⊩_B a, P ⊢_B a)`` for atoms, which must agree.

    The two only coincide when ``B ∪ {(=> p) | p in P}`` is itself a world,
    in either universe mode: with no such world, ``P ⊩_B a`` can hold
    vacuously.  Raises :class:`UniverseError` in that case.
    """
    ps = sorted(set(premises))
    i = W.index(B)
    if not W.promotion_in_universe(i, ps):
        raise UniverseError(f"base {W.label(i)} extended by axioms for {{{', '.join(ps)}}} "
                            "is not a world, so support and derivability can differ")
    sem = infers(W, i, [Atom(p) for p in ps], Atom(goal))
    return sem, goal in derivable_atoms(W.base(i), ps)


def valid(W: WorldUniverse, gamma: Iterable[Formula], phi: Formula) -> bool:
    gamma = list(gamma)
    for f in (*gamma, phi):
        W.check_formula(f)
    return W.cache.infers_extent(gamma, phi) == W.full


def support_extent(W: WorldUniverse, phi: Formula) -> list[int]:
    W.check_formula(phi)
    return list(iter_bits(W.cache.extent(phi)))


# -- universe file format ------------------------------------------------------

_INDEXED_RULE = re.compile(r"(\d+)\s*:\s*(.*)")
_BASE_SET = re.compile(r"\{\s*((?:\d+\s*(?:,\s*\d+\s*)*)?)\}")


def parse_universe(text: str) -> WorldUniverse:
    """Parse the universe file format::

        atoms: a, b
        rules:
          0: => a
          1: ([a] => b) => b
        bases: all-subsets        # or "bases:" followed by lines like {0,1}
    """
    atoms: list[str] = []
    rules: dict[int, AtomicRule] = {}
    bases: Optional[list[list[int]]] = None
    all_subsets = False
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("atoms:"):
                atoms.extend(_split_atom_list(line[len("atoms:"):]))
                section = None
            elif line.startswith("rules:"):
                section = "rules"
                if line[len("rules:"):].strip():
                    raise UniverseError("rules are listed one per line after 'rules:'")
            elif line.startswith("bases:"):
                rest = line[len("bases:"):].strip()
                if rest == "all-subsets":
                    all_subsets = True
                    section = None
                else:
                    section = "bases"
                    bases = []
                    if rest:
                        bases.extend(_parse_base_sets(rest))
            elif section == "rules":
                m = _INDEXED_RULE.fullmatch(line)
                if not m:
                    raise UniverseError(f"expected 'index: rule', got {line!r}")
                k = int(m.group(1))
                if k in rules:
                    raise UniverseError(f"rule index {k} given twice")
                rules[k] = parse_rule(m.group(2))
            elif section == "bases":
                assert bases is not None
                bases.extend(_parse_base_sets(line))
            else:
                raise UniverseError(f"unexpected line {line!r}")
        except (UniverseError, RuleSyntaxError) as e:
            raise UniverseError(f"line {lineno}: {e}") from None
    if sorted(rules) != list(range(len(rules))):
        raise UniverseError("rule indices must be 0..n-1")
    if all_subsets == (bases is not None):
        raise UniverseError("give exactly one of 'bases: all-subsets' or an explicit 'bases:' block")
    return WorldUniverse(atoms, [rules[k] for k in range(len(rules))], bases)


def _parse_base_sets(text: str) -> list[list[int]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _BASE_SET.match(text, pos)
        if not m:
            raise UniverseError(f"expected a rule-index set like {{0,2}}, got {text[pos:]!r}")
        body = m.group(1).strip()
        out.append([int(x) for x in body.split(",")] if body else [])
        pos = m.end()
        while pos < len(text) and text[pos] in " ,":
            pos += 1
    return out


def format_universe(W: WorldUniverse) -> str:
    lines = [f"atoms: {', '.join(sort_atoms(W.atom_universe))}", "rules:"]
    lines += [f"  {k}: {format_rule(r)}" for k, r in enumerate(W.rule_universe)]
    if W.mode == "all-subsets":
        lines.append("bases: all-subsets")
    else:
        lines.append("bases:")
        lines += [f"  {W.label(i)}" for i in range(len(W))]
    return "\n".join(lines) + "\n"
