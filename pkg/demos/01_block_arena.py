"""Flat block arena: incidence lists packed into one slot array.

Every list lives in a chain of fixed-size blocks.  The last slot of a block
is metadata: END (-1) closes the chain, a negative pointer code links to the
next block.  Unused payload slots hold EMPTY (-2).
"""
from hyperarena.block_store import (END, EMPTY, FlatArena, InsertOutcome,
                                    capacity_for)

# block sizes are rounded up to a multiple of 32 slots (payload + metadata)
for d in (0, 31, 32, 100):
    print(f"degree {d:3d} -> block of {capacity_for(d)} slots")

arena = FlatArena(512)
lists = [[1, 4, 9], list(range(10, 50)), [7]]
# one exclusive prefix sum places every block of the batch at once
blocks = arena.alloc_batch([len(x) for x in lists])
for b, elems in zip(blocks, lists):
    arena.write_list(b, elems)
print("starts", [b.start for b in blocks], "watermark", arena.watermark)
print("END", END, "EMPTY", EMPTY, "slots of block 0:", arena.slots[:5])

# sorted inserts fill holes first; when every block of the chain is full the
# caller links a fresh block to the tail and retries
first = blocks[0].start
arena.remove_element(first, 4)
print(arena.insert_element(first, 5), arena.read_list(first))
for e in range(100, 140):
    if arena.insert_element(first, e) is InsertOutcome.NEEDS_BLOCK:
        arena.chain_block(arena.tail(first), arena.alloc_block(1))
        arena.insert_element(first, e)
print("chain lengths", [b.capacity for b in arena.chain(first)],
      "elements", len(arena.read_list(first)))
arena.check()
