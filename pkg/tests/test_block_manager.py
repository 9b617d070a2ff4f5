import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperarena.block_manager import (PAD_ID, ManagerTree, heap_index_to_rank,
                                      rank_to_heap_index, tree_height)
from hyperarena.errors import AlreadyFree, NotFound, NotFree, RankOutOfRange


def inorder_oracle(h):
    """Heap indices of a perfect tree of height h, visited in order."""
    out = []

    def walk(k):
        if k >= 1 << h:
            return
        walk(2 * k)
        out.append(k)
        walk(2 * k + 1)

    walk(1)
    return out


def subtree_free(tree, k):
    if k >= 1 << tree.height:
        return 0
    return int(tree.free[k]) + subtree_free(tree, 2 * k) + subtree_free(tree, 2 * k + 1)


def build(ids):
    return ManagerTree.build(ids, [10 * i for i in ids])


def test_rank_examples():
    assert heap_index_to_rank(1, 3) == 4
    assert heap_index_to_rank(2, 3) == 2
    assert heap_index_to_rank(3, 3) == 6
    assert heap_index_to_rank(7, 3) == 7
    assert heap_index_to_rank(np.arange(1, 8), 3).tolist() == [4, 2, 6, 1, 3, 5, 7]


@pytest.mark.parametrize("h", range(1, 13))
def test_rank_matches_inorder_traversal(h):
    order = inorder_oracle(h)
    ranks = heap_index_to_rank(np.array(order), h)
    assert ranks.tolist() == list(range(1, len(order) + 1))
    assert rank_to_heap_index(ranks, h).tolist() == order


def test_rank_out_of_range():
    with pytest.raises(ValueError):
        heap_index_to_rank(8, 3)
    with pytest.raises(ValueError):
        rank_to_heap_index(0, 3)


def test_build_examples():
    t = build(range(1, 8))
    assert t.edge_id[1] == 4 and t.height == 3
    one = build([42])
    assert one.height == 1 and one.edge_id[1] == 42
    five = build([3, 8, 9, 12, 20])
    assert five.height == 3
    assert five.edge_id[five.in_order()].tolist() == [3, 8, 9, 12, 20]
    pads = [k for k in range(1, 8) if k not in five.in_order()]
    assert all(five.edge_id[k] == PAD_ID for k in pads)
    five.check()


def test_empty_tree():
    t = ManagerTree.build([], [])
    assert t.height == 0 and t.free_count == 0 and len(t) == 0
    with pytest.raises(NotFound):
        t.search(1)


def test_tree_height():
    assert [tree_height(n) for n in (0, 1, 2, 3, 7, 8, 15)] == [0, 1, 2, 2, 3, 4, 4]


def test_search():
    t = build(range(1, 8))
    assert t.search(4) == 1
    with pytest.raises(NotFound):
        t.search(9)
    idx = t.search_batch(range(1, 8))
    assert len(set(idx.tolist())) == 7
    for key, k in zip(range(1, 8), idx):
        assert t.edge_id[k] == key
        assert t.search(key) == k
    with pytest.raises(NotFound):
        t.search_batch([1, 99])


def test_mark_deleted_avail():
    t = build(range(1, 8))
    t.mark_deleted([1, 3])  # both children of node 2
    assert t.avail[t.search(2)] == 2 and t.free_count == 2
    t.check()

    t = build(range(1, 8))
    t.mark_deleted([4])
    assert t.avail[1] == 1 and t.avail[2] == 0 and t.avail[3] == 0


def test_mark_deleted_fig5_example():
    t = build(range(1, 16))
    t.mark_deleted([1, 5, 6, 10])
    assert t.avail[1] == 4
    for k in range(1, 16):
        assert t.avail[k] == subtree_free(t, k)
    assert t.find_kth_available(2) == t.search(5)
    assert t.edge_id[t.find_kth_available(4)] == 10


def test_mark_deleted_errors():
    t = build(range(1, 8))
    with pytest.raises(AlreadyFree):
        t.mark_deleted([2, 2])
    t.mark_deleted([2])
    with pytest.raises(AlreadyFree):
        t.mark_deleted([2])
    with pytest.raises(NotFound):
        t.mark_deleted([99])


def test_find_kth_available():
    t = build(range(1, 8))
    t.mark_deleted([6])
    assert t.find_kth_available(1) == t.search(6)
    with pytest.raises(RankOutOfRange):
        t.find_kth_available(2)
    with pytest.raises(RankOutOfRange):
        t.find_kth_available(0)


def test_reassign():
    t = build(range(1, 8))
    t.mark_deleted([6])
    assert t.reassign(t.find_kth_available(1)) == 6
    assert t.avail[1] == 0
    with pytest.raises(NotFree):
        t.reassign(t.search(6))

    t = build(range(1, 8))
    t.mark_deleted([2, 5, 7])
    first = t.reassign(t.find_kth_available(1))
    second = t.reassign(t.find_kth_available(1))
    assert (first, second) == (2, 5)
    t.reassign(t.find_kth_available(1))
    with pytest.raises(RankOutOfRange):
        t.find_kth_available(1)


def test_reassign_batch_rejects_repeats():
    t = build(range(1, 8))
    t.mark_deleted([2])
    k = t.search(2)
    with pytest.raises(NotFree):
        t.reassign_batch([k, k])


def test_rebuild():
    t = build(range(1, 8))
    same = t.rebuild()
    assert same.edge_id[same.in_order()].tolist() == list(range(1, 8))

    grown = t.rebuild([8, 9, 10], [80, 90, 100])
    assert grown.height == 4 and len(grown) == 10
    assert grown.edge_id[grown.in_order()].tolist() == list(range(1, 11))
    assert grown.start[grown.search(9)] == 90
    grown.check()

    t.mark_deleted([2, 3])
    r = t.rebuild([20, 21], [200, 210])
    assert len(r) == 7 and r.free_count == 0
    assert r.edge_id[r.in_order()].tolist() == [1, 4, 5, 6, 7, 20, 21]
    with pytest.raises(ValueError):
        r.rebuild([4], [0])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["del", "reuse", "rebuild"]),
                          st.integers(1, 10)), max_size=60),
       st.integers(1, 40))
def test_random_operation_sequences(program, n0):
    t = build(list(range(1, n0 + 1)))
    next_id = n0 + 1
    live, free = set(range(1, n0 + 1)), set()
    for op, m in program:
        if op == "del" and live:
            pick = sorted(live)[:: max(1, len(live) // m)][:m]
            t.mark_deleted(pick)
            live -= set(pick)
            free |= set(pick)
        elif op == "reuse" and free:
            m = min(m, len(free))
            nodes = t.find_kth_available_batch(range(1, m + 1))
            keys = t.reassign_batch(nodes).tolist()
            assert keys == sorted(free)[:m]
            live |= set(keys)
            free -= set(keys)
        elif op == "rebuild":
            extra = list(range(next_id, next_id + m))
            next_id += m
            t = t.rebuild(extra, extra)
            live |= set(extra)
            free = set()
        t.check()
        assert t.free_count == len(free)
        ids, _, is_free = t.entries()
        assert set(ids[is_free].tolist()) == free
        assert set(ids[~is_free].tolist()) == live
