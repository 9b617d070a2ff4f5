import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperarena.block_store import (END, EMPTY, Block, FlatArena, InsertOutcome,
                                    capacity_for, decode_pointer,
                                    encode_pointer)
from hyperarena.errors import (AlreadyChained, ArenaExhausted, BlockOverflow,
                               CorruptChain)


@pytest.mark.parametrize("d, cap", [(0, 32), (1, 32), (31, 32), (32, 64),
                                    (100, 128), (1000, 1024)])
def test_capacity_for(d, cap):
    assert capacity_for(d) == cap == math.ceil((d + 1) / 32) * 32


def test_capacity_for_rejects_negative():
    with pytest.raises(ValueError):
        capacity_for(-1)


def test_pointer_codes_round_trip():
    for p in (0, 1, 64, 10**9):
        code = encode_pointer(p)
        assert code <= -3 and decode_pointer(code) == p
    assert encode_pointer(64) == -67
    assert END == -1 and EMPTY == -2


def test_alloc_block_sequence():
    a = FlatArena(1024)
    assert a.alloc_block(5) == Block(0, 32)
    assert a.watermark == 32
    assert a.alloc_block(40) == Block(32, 64)


def test_alloc_batch_prefix_sum():
    a = FlatArena(1024)
    assert [b.start for b in a.alloc_batch([5, 40, 5])] == [0, 32, 96]
    assert a.alloc_batch([]) == []
    b = FlatArena(1024)
    assert [x.start for x in b.alloc_batch([31, 31])] == [0, 32]
    c = FlatArena(1024)
    c.alloc_batch([40])  # watermark 64
    (blk,) = c.alloc_batch([100])
    assert (blk.start, blk.capacity) == (64, 128)


def test_alloc_batch_all_or_nothing():
    a = FlatArena(64)
    with pytest.raises(ArenaExhausted):
        a.alloc_batch([5, 5, 5])
    assert a.watermark == 0 and a.num_blocks == 0


def test_grow_keeps_starts_and_contents():
    a = FlatArena(64)
    b = a.alloc_block(3)
    a.write_list(b, [1, 2, 3])
    a.grow(256)
    assert a.total_capacity == 256
    assert a.read_list(b.start) == [1, 2, 3]
    assert a.alloc_block(40).start == 32


def test_write_list_layout():
    a = FlatArena(64)
    b = a.alloc_block(3)
    a.write_list(b, [3, 7, 9])
    assert a.slots[:4].tolist() == [3, 7, 9, EMPTY]
    assert a.slots[31] == END


def test_write_list_exact_fit_and_overflow():
    a = FlatArena(64)
    b = a.alloc_block(31)
    a.write_list(b, list(range(31)))
    assert a.slots[:31].tolist() == list(range(31)) and a.slots[31] == END
    with pytest.raises(BlockOverflow):
        a.write_list(b, list(range(32)))


def test_chain_pointer_and_traversal():
    a = FlatArena(256)
    b0 = a.alloc_block(31)
    a.alloc_block(0)  # slots 32..63, so the next block starts at 64
    b1 = a.alloc_block(40)
    assert b1 == Block(64, 64)
    a.chain_block(b0, b1)
    assert a.slots[31] == -67
    a.write_list(b0, list(range(31)))
    a.write_list(b1, list(range(100, 109)))
    assert a.read_list(0) == list(range(31)) + list(range(100, 109))
    with pytest.raises(AlreadyChained):
        a.chain_block(b0, b1)


def test_read_empty_list():
    a = FlatArena(64)
    b = a.alloc_block(0)
    assert a.slots[0] == EMPTY and a.slots[b.meta] == END
    assert a.read_list(0) == []


def test_remove_element():
    a = FlatArena(64)
    b = a.alloc_block(3)
    a.write_list(b, [3, 7, 9])
    assert a.remove_element(0, 7)
    assert a.slots[:3].tolist() == [3, 9, EMPTY]
    assert not a.remove_element(0, 5)
    assert a.read_list(0) == [3, 9]


def test_remove_from_chained_list():
    a = FlatArena(256)
    b0, b1 = a.alloc_batch([31, 31])
    a.chain_block(b0, b1)
    elems = list(range(40))
    assert a.write_chain(0, elems) == []
    assert a.remove_element(0, elems[1])
    assert a.count(b0) == 30 and a.slots[30] == EMPTY
    assert a.slots[b0.meta] == encode_pointer(b1.start)
    assert a.read_list(0) == elems[:1] + elems[2:]
    assert len(a.read_list(0)) == 39


def test_insert_element_in_place():
    a = FlatArena(64)
    b = a.alloc_block(3)
    a.write_list(b, [3, 9])
    assert a.insert_element(0, 7) is InsertOutcome.IN_PLACE
    assert a.read_list(0) == [3, 7, 9]


def test_insert_into_full_block_then_chain():
    a = FlatArena(256)
    b = a.alloc_block(31)
    a.write_list(b, list(range(0, 62, 2)))
    assert a.insert_element(0, 5) is InsertOutcome.NEEDS_BLOCK
    a.chain_block(b, a.alloc_block(1))
    assert a.insert_element(0, 5) is InsertOutcome.IN_PLACE
    out = a.read_list(0)
    assert len(out) == 32 and out == sorted(out)
    a.check()


def test_hundred_element_chain_reads_sorted():
    a = FlatArena(1024)
    blocks = a.alloc_batch([31, 31, 31, 31])
    for x, y in zip(blocks, blocks[1:]):
        a.chain_block(x, y)
    rng = np.random.default_rng(3)
    ref = []
    for v in rng.choice(10_000, 100, replace=False).tolist():
        assert a.insert_element(0, v) is InsertOutcome.IN_PLACE
        ref.append(v)
    assert a.read_list(0) == sorted(ref)


def test_corrupt_metadata_detected():
    a = FlatArena(64)
    b = a.alloc_block(3)
    a.slots[b.meta] = 5
    with pytest.raises(CorruptChain):
        a.check()
    with pytest.raises(CorruptChain):
        a.block(7)


def test_cycle_detected():
    a = FlatArena(128)
    b0, b1 = a.alloc_batch([1, 1])
    a.chain_block(b0, b1)
    a.slots[b1.meta] = encode_pointer(0)
    with pytest.raises(CorruptChain):
        a.read_list(0)


ops = st.lists(st.tuples(st.sampled_from(["ins", "rem", "chain"]),
                         st.integers(0, 200)), max_size=150)


@settings(max_examples=60, deadline=None)
@given(ops)
def test_model_based_list(program):
    """Sorted insert/remove/chain against a plain Python list."""
    a = FlatArena(64, granularity=8)
    head = a.alloc_block(0)
    model = []
    for op, v in program:
        if op == "ins" and v not in model:
            res = a.insert_element(head.start, v)
            if res is InsertOutcome.NEEDS_BLOCK:
                if a.watermark + 8 > a.total_capacity:
                    a.grow(2 * a.total_capacity)
                a.chain_block(a.tail(head.start), a.alloc_block(1))
                res = a.insert_element(head.start, v)
            assert res is InsertOutcome.IN_PLACE
            model.append(v)
        elif op == "rem":
            assert a.remove_element(head.start, v) == (v in model)
            if v in model:
                model.remove(v)
        elif op == "chain":
            if a.watermark + 16 > a.total_capacity:
                a.grow(2 * a.total_capacity + 16)
            a.chain_block(a.tail(head.start), a.alloc_block(v % 10))
        assert a.read_list(head.start) == sorted(model)
    a.check()
