"""Complete binary search tree mapping entity IDs to arena block starts.

The tree is stored implicitly in heap order (root at index 1, children of
``k`` at ``2k`` and ``2k + 1``) and is always perfect: ``n`` live entries are
padded to ``2**h - 1`` nodes with pad nodes whose key compares as +inf.
Pad nodes occupy the largest in-order ranks, so the BST property holds over
the whole array.

Each node carries an ``avail`` counter: the number of free nodes (entries
whose block was released by a deletion) in its subtree, itself included.
Free nodes keep their key and block start until they are reassigned, so a
deletion never changes the tree shape.

All batch operations are written as level-synchronous array sweeps: every
query in a batch advances one tree level per step, and ``avail`` repairs
walk from the deepest touched level up to the root with each node written
once per level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import AlreadyFree, NotFound, NotFree, RankOutOfRange

PAD_ID = np.iinfo(np.int64).max


def tree_height(n: int) -> int:
    """Smallest ``h`` with ``2**h - 1 >= n``."""
    return int(n).bit_length()


def _floor_log2(k):
    k = np.asarray(k, dtype=np.int64)
    return np.frexp(k.astype(np.float64))[1].astype(np.int64) - 1


def heap_index_to_rank(k, h: int):
    """1-based in-order rank of heap index ``k`` in a perfect tree of height ``h``.

    ``rank = (2 * (k - 2**lg) + 1) * 2**(h - 1 - lg)`` with ``lg = floor(log2 k)``.
    Works elementwise on arrays.
    """
    if np.ndim(k) == 0:
        k = int(k)
        if not 1 <= k < (1 << h):
            raise ValueError(f"heap index {k} outside tree of height {h}")
        lg = k.bit_length() - 1
        return (2 * (k - (1 << lg)) + 1) << (h - 1 - lg)
    k = np.asarray(k, dtype=np.int64)
    lg = _floor_log2(k)
    return (2 * (k - (1 << lg)) + 1) << (h - 1 - lg)


def rank_to_heap_index(r, h: int):
    """Inverse of :func:`heap_index_to_rank`.

    A rank with ``t`` trailing zero bits sits ``t`` levels above the leaves.
    """
    if np.ndim(r) == 0:
        r = int(r)
        if not 1 <= r < (1 << h):
            raise ValueError(f"rank {r} outside tree of height {h}")
        t = (r & -r).bit_length() - 1
        return (1 << (h - 1 - t)) + (r >> (t + 1))
    r = np.asarray(r, dtype=np.int64)
    t = _floor_log2(r & -r)
    return (1 << (h - 1 - t)) + (r >> (t + 1))


@dataclass(frozen=True)
class ManagerNode:
    index: int
    edge_id: int
    start: int
    avail: int
    is_free: bool

    @property
    def is_pad(self) -> bool:
        return self.edge_id == PAD_ID


class ManagerTree:
    """Array-backed block manager.

    Use :meth:`build` to construct; the constructor only allocates arrays.
    """

    def __init__(self, height: int):
        self.height = height
        n_slots = 1 << height
        self.edge_id = np.full(n_slots, PAD_ID, dtype=np.int64)
        self.start = np.full(n_slots, -1, dtype=np.int64)
        self.free = np.zeros(n_slots, dtype=bool)
        # twice as long so that avail[2k], avail[2k + 1] of a leaf read as 0
        self.avail = np.zeros(2 * n_slots, dtype=np.int64)
        self.size = 0

    @classmethod
    def build(cls, ids: Sequence[int], starts: Sequence[int]) -> "ManagerTree":
        """Place sorted ``(id, start)`` entries into a fresh perfect tree.

        Each entry computes its own heap slot from its rank, so the placement
        is a single scatter.
        """
        ids = np.asarray(ids, dtype=np.int64)
        starts = np.asarray(starts, dtype=np.int64)
        if ids.shape != starts.shape:
            raise ValueError("ids and starts differ in length")
        if ids.size > 1 and not (np.diff(ids) > 0).all():
            raise ValueError("ids must be strictly increasing")
        n = int(ids.size)
        tree = cls(tree_height(n))
        if n:
            idx = rank_to_heap_index(np.arange(1, n + 1), tree.height)
            tree.edge_id[idx] = ids
            tree.start[idx] = starts
        tree.size = n
        return tree

    def __len__(self):
        return self.size

    def __repr__(self):
        return (f"ManagerTree(size={self.size}, height={self.height}, "
                f"free={self.free_count})")

    @property
    def free_count(self) -> int:
        return int(self.avail[1]) if self.height else 0

    @property
    def live_count(self) -> int:
        return self.size - self.free_count

    def node(self, k: int) -> ManagerNode:
        k = int(k)
        return ManagerNode(k, int(self.edge_id[k]), int(self.start[k]),
                           int(self.avail[k]), bool(self.free[k]))

    def in_order(self) -> np.ndarray:
        """Heap indices of the non-pad nodes in ascending key order."""
        if not self.size:
            return np.zeros(0, dtype=np.int64)
        return rank_to_heap_index(np.arange(1, self.size + 1), self.height)

    def entries(self):
        """``(ids, starts, free)`` arrays of the non-pad nodes, in key order."""
        idx = self.in_order()
        return self.edge_id[idx], self.start[idx], self.free[idx]

    # -- search -----------------------------------------------------------

    def _descend(self, keys: np.ndarray) -> np.ndarray:
        """Heap index holding each key, 0 where the key is absent."""
        m = keys.size
        pos = np.ones(m, dtype=np.int64)
        found = np.zeros(m, dtype=np.int64)
        active = np.ones(m, dtype=bool) if self.height else np.zeros(m, bool)
        limit = 1 << self.height
        while active.any():
            a = np.flatnonzero(active)
            k = pos[a]
            here = self.edge_id[k]
            hit = here == keys[a]
            found[a[hit]] = k[hit]
            step = np.where(keys[a] < here, 2 * k, 2 * k + 1)
            pos[a] = step
            active[a] = ~hit & (step < limit)
        return found

    def search(self, key: int) -> int:
        """Heap index of the node keyed ``key`` (free nodes included)."""
        # scalar descent; the vectorized path costs more per call than it saves
        key = int(key)
        ids, k, limit = self.edge_id, 1, 1 << self.height
        while k < limit and key != PAD_ID:
            here = int(ids[k])
            if here == key:
                return k
            k = 2 * k if key < here else 2 * k + 1
        raise NotFound(f"ids not in block manager: [{key}]")

    def search_batch(self, keys: Iterable[int]) -> np.ndarray:
        keys = np.asarray(list(keys) if not isinstance(keys, np.ndarray)
                          else keys, dtype=np.int64)
        idx = self._descend(keys)
        missing = keys[(idx == 0) | (keys == PAD_ID)]
        if missing.size:
            raise NotFound(f"ids not in block manager: {missing.tolist()}")
        return idx

    # -- avail maintenance -------------------------------------------------

    def _refresh(self, touched: np.ndarray) -> None:
        """Recompute ``avail`` on ``touched`` nodes and all their ancestors.

        Level by level from the deepest touched level, each node is written
        once per level: ``avail = free + avail(left) + avail(right)``.
        """
        touched = np.unique(np.asarray(touched, dtype=np.int64))
        if not touched.size:
            return
        depth = _floor_log2(touched)
        frontier = np.zeros(0, dtype=np.int64)
        for d in range(int(depth.max()), -1, -1):
            level = np.union1d(touched[depth == d], frontier)
            self.avail[level] = (self.free[level].astype(np.int64)
                                 + self.avail[2 * level]
                                 + self.avail[2 * level + 1])
            frontier = np.unique(level // 2)
            frontier = frontier[frontier >= 1]

    def mark_deleted(self, ids: Iterable[int]) -> np.ndarray:
        """Release the blocks of ``ids``; returns the affected heap indices."""
        keys = np.asarray(list(ids), dtype=np.int64)
        if not keys.size:
            return keys
        if np.unique(keys).size != keys.size:
            dup = keys[np.flatnonzero(np.diff(np.sort(keys)) == 0)]
            raise AlreadyFree(f"ids deleted twice in one batch: {dup.tolist()}")
        idx = self.search_batch(keys)
        already = keys[self.free[idx]]
        if already.size:
            raise AlreadyFree(f"ids already free: {already.tolist()}")
        self.free[idx] = True
        self._refresh(idx)
        return idx

    def find_kth_available(self, k: int) -> int:
        return int(self.find_kth_available_batch([k])[0])

    def find_kth_available_batch(self, ranks: Iterable[int]) -> np.ndarray:
        """Heap index of the ``r``-th free node (in key order) for each rank.

        At a node with residual rank ``r``: go left while the left subtree
        holds at least ``r`` free nodes; otherwise skip them, select the node
        itself if it is free and ``r == 1``, or skip it and go right.
        Distinct ranks follow distinct paths, so the batch needs no
        coordination.
        """
        r = np.asarray(list(ranks), dtype=np.int64)
        total = self.free_count
        bad = r[(r < 1) | (r > total)]
        if bad.size:
            raise RankOutOfRange(f"ranks {bad.tolist()} outside 1..{total}")
        m = r.size
        pos = np.ones(m, dtype=np.int64)
        out = np.zeros(m, dtype=np.int64)
        active = np.ones(m, dtype=bool)
        while active.any():
            a = np.flatnonzero(active)
            k = pos[a]
            rr = r[a]
            left = self.avail[2 * k]
            go_left = left >= rr
            rr = np.where(go_left, rr, rr - left)
            is_free = self.free[k]
            pick = ~go_left & is_free & (rr == 1)
            rr = np.where(~go_left & is_free & ~pick, rr - 1, rr)
            out[a[pick]] = k[pick]
            pos[a] = np.where(go_left, 2 * k, 2 * k + 1)
            r[a] = rr
            active[a[pick]] = False
        return out

    def reassign(self, k: int) -> int:
        """Take free node ``k`` back into use; returns its retained key."""
        return int(self.reassign_batch([k])[0])

    def reassign_batch(self, nodes: Iterable[int]) -> np.ndarray:
        idx = np.asarray(list(nodes), dtype=np.int64)
        if not idx.size:
            return idx
        if np.unique(idx).size != idx.size:
            raise NotFree("node reassigned twice in one batch")
        busy = idx[~self.free[idx]]
        if busy.size:
            raise NotFree(f"nodes not free: {busy.tolist()}")
        self.free[idx] = False
        self._refresh(idx)
        return self.edge_id[idx].copy()

    def rebuild(self, extra_ids: Sequence[int] = (),
                extra_starts: Sequence[int] = ()) -> "ManagerTree":
        """New tree over the live entries plus ``extra``; free nodes dropped."""
        ids, starts, free = self.entries()
        ids = np.concatenate([ids[~free], np.asarray(extra_ids, np.int64)])
        starts = np.concatenate([starts[~free],
                                 np.asarray(extra_starts, np.int64)])
        order = np.argsort(ids, kind="stable")
        ids = ids[order]
        if ids.size > 1 and not (np.diff(ids) > 0).all():
            raise ValueError("extra ids collide with live ids")
        return ManagerTree.build(ids, starts[order])

    # -- diagnostics ------------------------------------------------------

    def check(self) -> None:
        """Assert the BST ordering and avail invariants on every node."""
        idx = self.in_order()
        keys = self.edge_id[idx]
        assert (np.diff(keys) > 0).all(), "in-order keys not increasing"
        if self.height:
            pads = np.setdiff1d(np.arange(1, 1 << self.height), idx)
            assert (self.edge_id[pads] == PAD_ID).all()
            assert not self.free[pads].any(), "pad node marked free"
        for k in range((1 << self.height) - 1, 0, -1):
            want = int(self.free[k]) + self.avail[2 * k] + self.avail[2 * k + 1]
            assert self.avail[k] == want, f"avail mismatch at node {k}"
        assert self.free_count == int(self.free.sum())
