"""Flattened slot arena holding incidence lists in fixed-granularity blocks.

Every list lives in a chain of one or more blocks carved from a single
``int64`` array.  The last slot of each block is metadata: either ``END``
or an encoded pointer to the next block of the chain.  Payload slots hold
non-negative element IDs packed from the block start and are terminated by
the first ``EMPTY`` slot (or by the metadata slot when the block is full).

Slot codes::

    v >= 0      element ID
    END   = -1  end of the list (metadata slot only)
    EMPTY = -2  unused payload slot
    v <= -3     next-block pointer, target start = -v - 3
"""

from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import AlreadyChained, ArenaExhausted, BlockOverflow, CorruptChain

GRANULARITY = 32
END = -1
EMPTY = -2


def encode_pointer(start: int) -> int:
    return -int(start) - 3


def decode_pointer(code: int) -> int:
    return -int(code) - 3


def capacity_for(d: int, granularity: int = GRANULARITY) -> int:
    """Slot count of a block holding ``d`` elements plus one metadata slot."""
    if d < 0:
        raise ValueError(f"cardinality must be non-negative, got {d}")
    return -(-(d + 1) // granularity) * granularity


@dataclass(frozen=True)
class Block:
    start: int
    capacity: int

    @property
    def meta(self) -> int:
        """Arena index of the metadata slot."""
        return self.start + self.capacity - 1

    @property
    def payload(self) -> int:
        return self.capacity - 1


class InsertOutcome(enum.Enum):
    IN_PLACE = "in_place"
    NEEDS_BLOCK = "needs_block"


class FlatArena:
    """Preallocated 1-D slot array with a bump-pointer block allocator.

    Blocks are never returned to the arena; reuse of a dead list's blocks is
    decided one level up, by the block manager.
    """

    def __init__(self, total_capacity: int, granularity: int = GRANULARITY):
        if total_capacity < 0:
            raise ValueError("total_capacity must be non-negative")
        self.granularity = granularity
        self.slots = np.full(total_capacity, EMPTY, dtype=np.int64)
        self.watermark = 0
        # block start -> capacity; needed to locate the metadata slot of a
        # block whose payload ends early with EMPTY
        self._caps: dict[int, int] = {}

    def __repr__(self):
        return (
            f"FlatArena(watermark={self.watermark}, "
            f"total_capacity={self.total_capacity}, blocks={len(self._caps)})"
        )

    @property
    def total_capacity(self) -> int:
        return int(self.slots.shape[0])

    @property
    def num_blocks(self) -> int:
        return len(self._caps)

    def capacity_for(self, d: int) -> int:
        return capacity_for(d, self.granularity)

    # -- allocation -------------------------------------------------------

    def alloc_block(self, d: int) -> Block:
        return self.alloc_batch([d])[0]

    def alloc_batch(self, ds: Sequence[int]) -> list[Block]:
        """Carve one block per payload size, contiguously from the watermark.

        Starts are the watermark plus the exclusive prefix sum of the block
        capacities.  Either every block is allocated or none is.
        """
        ds = np.asarray(ds, dtype=np.int64)
        if ds.size == 0:
            return []
        if (ds < 0).any():
            raise ValueError("payload sizes must be non-negative")
        g = self.granularity
        caps = (ds + g) // g * g
        ends = np.cumsum(caps)
        need = int(ends[-1])
        base = self.watermark
        if base + need > self.total_capacity:
            raise ArenaExhausted(
                f"need {need} slots, {self.total_capacity - base} available"
            )
        starts = base + ends - caps
        self.slots[base:base + need] = EMPTY
        self.slots[starts + caps - 1] = END
        self.watermark = base + need
        starts_l = starts.tolist()
        caps_l = caps.tolist()
        self._caps.update(zip(starts_l, caps_l))
        return [Block(s, c) for s, c in zip(starts_l, caps_l)]

    def grow(self, min_capacity: int) -> None:
        """Reallocate the slot array to at least ``min_capacity`` slots.

        Live slots are copied verbatim, so every block keeps its start.
        """
        if min_capacity <= self.total_capacity:
            return
        slots = np.full(min_capacity, EMPTY, dtype=np.int64)
        slots[: self.total_capacity] = self.slots
        self.slots = slots

    # -- block inspection -------------------------------------------------

    def block(self, start: int) -> Block:
        cap = self._caps.get(int(start))
        if cap is None or start >= self.watermark:
            raise CorruptChain(f"no block starts at slot {start}")
        return Block(int(start), cap)

    def count(self, b: Block) -> int:
        """Number of elements stored in the payload of ``b``."""
        if b.payload <= 64:
            # a Python scan beats a numpy round trip on small blocks
            for i, x in enumerate(self.slots[b.start:b.meta].tolist()):
                if x < 0:
                    return i
            return b.payload
        seg = self.slots[b.start:b.meta]
        neg = np.flatnonzero(seg < 0)
        return int(neg[0]) if neg.size else b.payload

    def next_block(self, b: Block) -> Block | None:
        code = int(self.slots[b.meta])
        if code == END:
            return None
        if code <= -3:
            target = decode_pointer(code)
            if not 0 <= target < self.watermark or target not in self._caps:
                raise CorruptChain(
                    f"block at {b.start} points outside the arena ({target})"
                )
            return Block(target, self._caps[target])
        raise CorruptChain(f"metadata slot {b.meta} holds {code}")

    def chain(self, start: int) -> Iterator[Block]:
        b = self.block(start)
        hops = 0
        while b is not None:
            yield b
            hops += 1
            if hops > len(self._caps):
                raise CorruptChain(f"cycle in chain starting at {start}")
            b = self.next_block(b)

    def tail(self, start: int) -> Block:
        last = None
        for last in self.chain(start):
            pass
        return last

    # -- list operations --------------------------------------------------

    def write_list(self, b: Block, elems: Sequence[int]) -> None:
        n = len(elems)
        if n > b.payload:
            raise BlockOverflow(
                f"{n} elements do not fit in a {b.capacity}-slot block"
            )
        self.slots[b.start:b.start + n] = elems
        self.slots[b.start + n:b.meta] = EMPTY

    def write_chain(self, start: int, elems: Sequence[int]) -> list[int]:
        """Overwrite the payloads of an existing chain with ``elems``.

        Blocks are filled front to back; surplus blocks are left empty but
        stay linked.  Returns the elements that did not fit.
        """
        elems = list(elems)
        pos = 0
        for b in self.chain(start):
            take = elems[pos:pos + b.payload]
            self.write_list(b, take)
            pos += len(take)
        return elems[pos:]

    def chain_block(self, b: Block, nxt: Block) -> None:
        code = int(self.slots[b.meta])
        if code <= -3:
            raise AlreadyChained(f"block at {b.start} already links to "
                                 f"{decode_pointer(code)}")
        if code != END:
            raise CorruptChain(f"metadata slot {b.meta} holds {code}")
        self.slots[b.meta] = encode_pointer(nxt.start)

    def read_list(self, start: int) -> list[int]:
        out: list[int] = []
        for b in self.chain(start):
            seg = self.slots[b.start:b.meta].tolist()
            for x in seg:
                if x < 0:
                    break
                out.append(x)
        return out

    def remove_element(self, start: int, e: int) -> bool:
        """Remove ``e`` by shifting the rest of its own block one slot left."""
        for b in self.chain(start):
            n = self.count(b)
            hit = np.flatnonzero(self.slots[b.start:b.start + n] == e)
            if hit.size:
                i = b.start + int(hit[0])
                end = b.start + n
                self.slots[i:end - 1] = self.slots[i + 1:end]
                self.slots[end - 1] = EMPTY
                return True
        return False

    def insert_element(self, start: int, e: int) -> InsertOutcome:
        """Insert ``e`` keeping the whole chain sorted.

        ``e`` goes to the block that holds its sorted position.  If that block
        is full, elements are redistributed over the window of blocks reaching
        the nearest block with a free slot (searching forward first), so the
        only block whose element count changes is the one that had room.
        """
        blocks = list(self.chain(start))
        lists = [self.slots[b.start:b.start + self.count(b)].tolist()
                 for b in blocks]
        room = [b.payload - len(lst) for b, lst in zip(blocks, lists)]
        if not any(room):
            return InsertOutcome.NEEDS_BLOCK

        target = None
        for i, lst in enumerate(lists):
            if lst and lst[-1] > e:
                target = i
                break
        if target is None:
            nonempty = [i for i, lst in enumerate(lists) if lst]
            target = nonempty[-1] if nonempty else 0

        if room[target]:
            lo = hi = sink = target
        else:
            right = [j for j in range(target + 1, len(blocks)) if room[j]]
            if right:
                sink = right[0]
                lo, hi = target, sink
            else:
                sink = max(j for j in range(target) if room[j])
                lo, hi = sink, target

        merged = [x for lst in lists[lo:hi + 1] for x in lst]
        bisect.insort(merged, e)
        pos = 0
        for j in range(lo, hi + 1):
            n = len(lists[j]) + (1 if j == sink else 0)
            self.write_list(blocks[j], merged[pos:pos + n])
            pos += n
        return InsertOutcome.IN_PLACE

    # -- diagnostics ------------------------------------------------------

    def check_block(self, b: Block) -> None:
        """Raise CorruptChain if ``b`` violates the slot layout rules."""
        code = int(self.slots[b.meta])
        if code != END and code > -3:
            raise CorruptChain(f"metadata slot {b.meta} holds {code}")
        if code <= -3:
            self.next_block(b)
        n = self.count(b)
        tail = self.slots[b.start + n:b.meta]
        if (tail >= 0).any():
            raise CorruptChain(f"element after EMPTY in block at {b.start}")
        if (tail != EMPTY).any():
            raise CorruptChain(f"stray code in payload of block at {b.start}")

    def check(self) -> None:
        for s, c in self._caps.items():
            self.check_block(Block(s, c))
