"""Finite partial orders of worlds with up-sets encoded as int bitmasks.

World ``i`` is bit ``1 << i``.  The one quantifier every semantics here needs
is "for every extension", i.e. the interior operator

    box(X) = {i | every j >= i lies in X}

which is the largest up-set contained in ``X``.
"""
from __future__ import annotations

import itertools
from typing import Iterator, Sequence


class FiniteOrder:
    """Explicit partial order given by a ``leq`` relation table."""

    def __init__(self, leq: Sequence[Sequence[bool]], check: bool = True):
        n = len(leq)
        self.size = n
        self.full = (1 << n) - 1
        if check:
            _check_partial_order(leq)
        self.up = [sum(1 << j for j in range(n) if leq[i][j]) for i in range(n)]
        self.down = [sum(1 << j for j in range(n) if leq[j][i]) for i in range(n)]

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def box(self, mask: int) -> int:
        out = 0
        for i, u in enumerate(self.up):
            if u & ~mask == 0:
                out |= 1 << i
        return out

    def up_closure(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.up[i]
        return out

    def is_upset(self, mask: int) -> bool:
        return mask & ~self.full == 0 and self.up_closure(mask) == mask

    def upsets(self) -> list[int]:
        """All up-sets, by brute force over subsets (small orders only)."""
        if self.size > 16:
            raise ValueError(f"refusing to enumerate up-sets of a {self.size}-element order")
        return [m for m in range(self.full + 1) if self.up_closure(m) == m]

    def downsets(self) -> list[int]:
        return [self.full & ~u for u in self.upsets()]


class SubsetOrder(FiniteOrder):
    """All subsets of an ``n``-element set ordered by inclusion.

    World ``i`` is the subset whose members are the set bits of ``i``.
    """

    def __init__(self, n: int):
        self.n = n
        self.size = 1 << n
        self.full = (1 << self.size) - 1
        # worlds whose k-th member is absent, as a mask over worlds
        self._without = []
        for k in range(n):
            m = (1 << (1 << k)) - 1
            period = 1 << (k + 1)
            while period < self.size:
                m |= m << period
                period <<= 1
            self._without.append(m)
        self._up = None
        self._down = None

    @property
    def up(self):
        if self._up is None:
            self._up = [self.up_closure(1 << i) for i in range(self.size)]
        return self._up

    @property
    def down(self):
        if self._down is None:
            self._down = [sum(1 << j for j in range(self.size) if j & ~i == 0)
                          for i in range(self.size)]
        return self._down

    def leq(self, i: int, j: int) -> bool:
        return i & ~j == 0

    def box(self, mask: int) -> int:
        f = mask & self.full
        for k in range(self.n):
            shift = 1 << k
            w = self._without[k]
            # world i without member k survives only if i + {k} survives too
            f = (f & ~w) | (f & w & (f >> shift))
        return f

    def up_closure(self, mask: int) -> int:
        f = mask & self.full
        for k in range(self.n):
            shift = 1 << k
            f |= (f & self._without[k]) << shift
        return f


def iter_bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _check_partial_order(leq):
    n = len(leq)
    for i in range(n):
        if len(leq[i]) != n:
            raise ValueError("order table is not square")
        if not leq[i][i]:
            raise ValueError(f"order is not reflexive at {i}")
        for j in range(n):
            if i != j and leq[i][j] and leq[j][i]:
                raise ValueError(f"order is not antisymmetric at ({i}, {j})")
            if leq[i][j]:
                for k in range(n):
                    if leq[j][k] and not leq[i][k]:
                        raise ValueError(f"order is not transitive at ({i}, {j}, {k})")


def all_partial_orders(n: int, up_to_iso: bool = True) -> list[list[list[bool]]]:
    """Partial orders on ``{0..n-1}`` in which ``i <= j`` implies ``i <= j`` numerically.

    Every finite poset has a linear extension, so this covers every
    isomorphism class; with ``up_to_iso`` each class appears exactly once.
    """
    orders: list[list[list[bool]]] = [[]]
    for k in range(n):
        grown = []
        for leq in orders:
            below_options = FiniteOrder(leq, check=False).downsets() if k else [0]
            for below in below_options:
                new = [row + [bool(below >> i & 1)] for i, row in enumerate(leq)]
                new.append([False] * k + [True])
                grown.append(new)
        orders = grown
    if not up_to_iso:
        return orders
    seen = {}
    for leq in orders:
        seen.setdefault(_canonical(leq), leq)
    return list(seen.values())


def _canonical(leq) -> tuple:
    n = len(leq)
    return min(
        tuple(leq[p[i]][p[j]] for i in range(n) for j in range(n))
        for p in itertools.permutations(range(n)))
