import pytest

from oracles import rng
from ptsem.order import FiniteOrder, SubsetOrder, all_partial_orders


def test_poset_counts():
    # OEIS A000112 (unlabelled) and naturally labelled posets A006455
    assert [len(all_partial_orders(n)) for n in range(5)] == [1, 1, 2, 5, 16]
    assert [len(all_partial_orders(n, up_to_iso=False)) for n in range(1, 5)] == [1, 2, 7, 40]


def test_subset_order_matches_explicit():
    for n in range(0, 5):
        fast = SubsetOrder(n)
        slow = FiniteOrder([[i & ~j == 0 for j in range(1 << n)] for i in range(1 << n)])
        assert fast.up == slow.up
        r = rng(31 + n)
        for _ in range(200):
            m = r.getrandbits(1 << n)
            assert fast.box(m) == slow.box(m)
            assert fast.up_closure(m) == slow.up_closure(m)


def test_box_is_largest_upset_inside():
    for leq in all_partial_orders(4):
        o = FiniteOrder(leq)
        ups = o.upsets()
        for m in range(o.full + 1):
            inside = [u for u in ups if u & ~m == 0]
            assert o.box(m) == max(inside, key=lambda u: bin(u).count("1"))
            assert all(u & ~o.box(m) == 0 for u in inside)


@pytest.mark.parametrize("leq", [
    [[True, True], [True, True]],
    [[False]],
    [[True, True, False], [False, True, True], [False, False, True]],
])
def test_bad_orders_rejected(leq):
    with pytest.raises(ValueError):
        FiniteOrder(leq)
