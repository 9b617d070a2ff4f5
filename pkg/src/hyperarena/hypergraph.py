"""Dynamic hypergraph with paired h2v / v2h incidence stores.

Both directions use the same machinery: a :class:`FlatArena` for the lists
and a :class:`ManagerTree` mapping owner keys to block starts.

* h2v is keyed by *internal* hyperedge IDs.  Deleting an edge only frees its
  manager node; a later insertion may take that node over (keeping its
  internal ID and block), so the public API speaks external IDs through a
  bidirectional map.
* v2h is keyed by raw vertex IDs and stores internal hyperedge IDs.  A vertex
  whose last incidence disappears has its node freed; if the same vertex
  returns before the next rebuild it gets its node back.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .block_manager import ManagerTree
from .block_store import GRANULARITY, FlatArena, InsertOutcome, capacity_for
from .errors import ArenaExhausted, Duplicate, NotFound

DEFAULT_OVERPROVISION = 2.0
_MIN_SLOTS = 4 * GRANULARITY


@dataclass
class ChangeBatch:
    """One batch of hypergraph changes.

    Applied in the order deletes, inserts, vertex deletes, vertex inserts.
    ``inserts`` holds ``(external_id, vertices, timestamp_or_None)``.
    """

    deletes: list[int] = field(default_factory=list)
    inserts: list[tuple] = field(default_factory=list)
    vertex_inserts: list[tuple[int, int]] = field(default_factory=list)
    vertex_deletes: list[tuple[int, int]] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not (self.deletes or self.inserts or self.vertex_inserts
                    or self.vertex_deletes)

    def modified_edges(self) -> set[int]:
        """Edges whose vertex list is edited horizontally."""
        return {h for h, _ in self.vertex_inserts} | {
            h for h, _ in self.vertex_deletes}

    def to_dict(self) -> dict:
        return {
            "deletes": sorted(self.deletes),
            "inserts": [[h, list(vs), t] for h, vs, t in self.inserts],
            "vertex_inserts": [list(p) for p in self.vertex_inserts],
            "vertex_deletes": [list(p) for p in self.vertex_deletes],
        }


class IncidenceStore:
    """One incidence direction: arena + block manager over owner keys."""

    def __init__(self, arena: FlatArena, tree: ManagerTree,
                 overprovision: float = DEFAULT_OVERPROVISION,
                 growable: bool = True):
        self.arena = arena
        self.tree = tree
        self.overprovision = overprovision
        self.growable = growable
        self.reallocations = 0

    @classmethod
    def from_lists(cls, keys: Sequence[int], lists: Sequence[Sequence[int]],
                   granularity: int = GRANULARITY,
                   overprovision: float = DEFAULT_OVERPROVISION,
                   growable: bool = True) -> "IncidenceStore":
        """Lay out ``lists`` (ordered by ascending ``keys``) and build the tree."""
        demand = sum(capacity_for(len(lst), granularity) for lst in lists)
        total = max(int(demand * overprovision), _MIN_SLOTS)
        arena = FlatArena(total, granularity)
        blocks = arena.alloc_batch([len(lst) for lst in lists])
        for b, lst in zip(blocks, lists):
            arena.write_list(b, lst)
        tree = ManagerTree.build(keys, [b.start for b in blocks])
        return cls(arena, tree, overprovision, growable)

    def _alloc(self, sizes: Sequence[int]):
        try:
            return self.arena.alloc_batch(sizes)
        except ArenaExhausted:
            if not self.growable:
                raise
        need = sum(self.arena.capacity_for(d) for d in sizes)
        target = int((self.arena.watermark + need) * self.overprovision)
        self.arena.grow(max(target, 2 * self.arena.total_capacity, _MIN_SLOTS))
        self.reallocations += 1
        return self.arena.alloc_batch(sizes)

    def node_of(self, key: int) -> int:
        try:
            k = self.tree.search(key)
        except NotFound:
            raise NotFound(f"no live list for key {key}") from None
        if self.tree.free[k]:
            raise NotFound(f"no live list for key {key}")
        return k

    def has_node(self, key: int) -> bool:
        try:
            self.tree.search(key)
        except NotFound:
            return False
        return True

    def start_of(self, key: int) -> int:
        return int(self.tree.start[self.node_of(key)])

    def read(self, key: int) -> list[int]:
        return self.arena.read_list(self.start_of(key))

    def store(self, start: int, elems: Sequence[int]) -> None:
        """Write ``elems`` over an existing chain, chaining a block on overflow."""
        leftover = self.arena.write_chain(start, elems)
        if leftover:
            tail = self.arena.tail(start)
            (b,) = self._alloc([len(leftover)])
            self.arena.write_list(b, leftover)
            self.arena.chain_block(tail, b)

    def insert_element(self, key: int, e: int) -> None:
        start = self.start_of(key)
        if self.arena.insert_element(start, e) is InsertOutcome.NEEDS_BLOCK:
            tail = self.arena.tail(start)
            (b,) = self._alloc([1])
            self.arena.chain_block(tail, b)
            self.arena.insert_element(start, e)

    def remove_element(self, key: int, e: int) -> bool:
        return self.arena.remove_element(self.start_of(key), e)

    def release(self, keys: Iterable[int]) -> None:
        self.tree.mark_deleted(keys)

    def reuse(self, count: int):
        """Claim the ``count`` lowest-keyed free nodes; returns ``(keys, starts)``."""
        if count <= 0:
            return np.zeros(0, np.int64), np.zeros(0, np.int64)
        nodes = self.tree.find_kth_available_batch(range(1, count + 1))
        starts = self.tree.start[nodes].copy()
        keys = self.tree.reassign_batch(nodes)
        return keys, starts

    def reactivate(self, key: int, elems: Sequence[int]) -> None:
        k = self.tree.search(key)
        self.tree.reassign(k)
        self.store(int(self.tree.start[k]), elems)

    def append(self, keys: Sequence[int], lists: Sequence[Sequence[int]]):
        """Fresh blocks for new keys, then a full tree rebuild."""
        if not len(keys):
            return
        blocks = self._alloc([len(lst) for lst in lists])
        for b, lst in zip(blocks, lists):
            self.arena.write_list(b, lst)
        self.tree = self.tree.rebuild(keys, [b.start for b in blocks])


class DynHypergraph:
    """Dynamic hypergraph addressed by external hyperedge IDs.

    Parameters
    ----------
    hyperedges : iterable of ``(external_id, vertices)`` or
        ``(external_id, vertices, timestamp)``
    overprovision : float
        Arena slots preallocated per slot of initial demand.
    granularity : int
        Block size quantum (slots).
    """

    def __init__(self, hyperedges: Iterable = (), *,
                 overprovision: float = DEFAULT_OVERPROVISION,
                 granularity: int = GRANULARITY, growable: bool = True):
        self.overprovision = overprovision
        self.granularity = granularity
        rows = [_normalize_edge(row) for row in hyperedges]
        ids = [r[0] for r in rows]
        if len(set(ids)) != len(ids):
            raise Duplicate("external hyperedge IDs must be unique")
        rows.sort(key=lambda r: r[0])

        self.ext2int: dict[int, int] = {}
        self.int2ext: dict[int, int] = {}
        self.times: dict[int, int | None] = {}
        self._card: dict[int, int] = {}
        self._degree: dict[int, int] = {}
        self._max_ext_seen = -1

        v2h_lists: dict[int, list[int]] = defaultdict(list)
        for i, (ext, vs, t) in enumerate(rows):
            self._register(ext, i, vs, t)
            for v in vs:
                v2h_lists[v].append(i)
        self._next_internal = len(rows)
        for v, lst in v2h_lists.items():
            self._degree[v] = len(lst)

        kw = dict(granularity=granularity, overprovision=overprovision,
                  growable=growable)
        self.h2v = IncidenceStore.from_lists(
            list(range(len(rows))), [r[1] for r in rows], **kw)
        verts = sorted(v2h_lists)
        self.v2h = IncidenceStore.from_lists(
            verts, [v2h_lists[v] for v in verts], **kw)

    def _register(self, ext, internal, vs, t):
        self.ext2int[ext] = internal
        self.int2ext[internal] = ext
        self.times[ext] = t
        self._card[ext] = len(vs)
        self._max_ext_seen = max(self._max_ext_seen, ext)

    def _retire(self, ext):
        internal = self.ext2int.pop(ext)
        del self.int2ext[internal]
        del self.times[ext]
        del self._card[ext]
        return internal

    def __repr__(self):
        return (f"DynHypergraph(|E|={self.num_edges}, |V|={self.num_vertices}, "
                f"c_max={self.max_cardinality})")

    # -- stats & queries ----------------------------------------------------

    def __contains__(self, ext) -> bool:
        return ext in self.ext2int

    def __len__(self):
        return len(self.ext2int)

    @property
    def num_edges(self) -> int:
        return len(self.ext2int)

    @property
    def num_vertices(self) -> int:
        """Vertices incident to at least one live hyperedge."""
        return sum(1 for d in self._degree.values() if d)

    @property
    def max_cardinality(self) -> int:
        return max(self._card.values(), default=0)

    @property
    def next_edge_id(self) -> int:
        """Smallest external ID larger than every ID ever used."""
        return self._max_ext_seen + 1

    def edge_ids(self) -> list[int]:
        return sorted(self.ext2int)

    def vertices(self) -> list[int]:
        return sorted(v for v, d in self._degree.items() if d)

    def degree(self, v: int) -> int:
        return self._degree.get(v, 0)

    def cardinality(self, h: int) -> int:
        try:
            return self._card[h]
        except KeyError:
            raise NotFound(f"hyperedge {h} is not live") from None

    def timestamp(self, h: int):
        try:
            return self.times[h]
        except KeyError:
            raise NotFound(f"hyperedge {h} is not live") from None

    def has_timestamps(self) -> bool:
        return all(t is not None for t in self.times.values())

    def _internal(self, h: int) -> int:
        try:
            return self.ext2int[h]
        except KeyError:
            raise NotFound(f"hyperedge {h} is not live") from None

    def incident_vertices(self, h: int) -> list[int]:
        return self.h2v.read(self._internal(h))

    def incident_hyperedges(self, v: int) -> list[int]:
        if v not in self._degree:
            raise NotFound(f"vertex {v} was never seen")
        if not self._degree[v]:
            return []
        i2e = self.int2ext
        return sorted(i2e[i] for i in self.v2h.read(v))

    def neighbor_hyperedges(self, h: int) -> list[int]:
        """Hyperedges sharing at least one vertex with ``h`` (h2h view)."""
        out = set()
        for v in self.incident_vertices(h):
            out.update(self.incident_hyperedges(v))
        out.discard(h)
        return sorted(out)

    def edges(self) -> dict[int, tuple[int, ...]]:
        """Snapshot ``{external_id: sorted vertex tuple}`` of all live edges."""
        h2v = self.h2v
        return {h: tuple(h2v.arena.read_list(h2v.start_of(i)))
                for h, i in sorted(self.ext2int.items())}

    def records(self) -> list[tuple]:
        """``(external_id, vertices, timestamp)`` rows, sorted by ID."""
        return [(h, vs, self.times[h]) for h, vs in self.edges().items()]

    def check_duality(self) -> bool:
        """Full cross-scan of h2v against v2h, plus the bookkeeping dicts."""
        expect: dict[int, set[int]] = defaultdict(set)
        for h, vs in self.edges().items():
            if list(vs) != sorted(set(vs)) or len(vs) != self._card[h]:
                return False
            for v in vs:
                expect[v].add(h)
        for v, d in self._degree.items():
            if d != len(expect.get(v, ())):
                return False
            if d:
                raw = self.v2h.read(v)
                if raw != sorted(set(raw)):
                    return False
                if {self.int2ext[i] for i in raw} != expect[v] or len(raw) != d:
                    return False
            elif self.v2h.has_node(v) and not self.v2h.tree.free[
                    self.v2h.tree.search(v)]:
                return False
        return set(expect) <= set(self._degree)

    # -- vertical operations ----------------------------------------------

    def delete_hyperedges(self, dels: Iterable[int]) -> None:
        dels = list(dels)
        if len(set(dels)) != len(dels):
            raise Duplicate("hyperedge deleted twice in one batch")
        internal = [self._internal(h) for h in dels]
        if not internal:
            return
        by_vertex: dict[int, list[int]] = defaultdict(list)
        for i in internal:
            for v in self.h2v.read(i):
                by_vertex[v].append(i)
        self.h2v.release(internal)
        for h in dels:
            self._retire(h)
        detached = []
        for v, ids in by_vertex.items():
            for i in ids:
                self.v2h.remove_element(v, i)
            self._degree[v] -= len(ids)
            if not self._degree[v]:
                detached.append(v)
        self.v2h.release(detached)

    def insert_hyperedges(self, ins: Iterable) -> None:
        """Insert ``(external_id, vertices[, timestamp])`` rows.

        Freed manager nodes are reused first, lowest key first; an edge that
        outgrows the reused chain spills into a freshly chained block.  Edges
        beyond the free-node count get new blocks and the manager is rebuilt.
        """
        rows = [_normalize_edge(r) for r in ins]
        if not rows:
            return
        ids = [r[0] for r in rows]
        if len(set(ids)) != len(ids):
            raise Duplicate("external ID repeated within insert batch")
        live = [h for h in ids if h in self.ext2int]
        if live:
            raise Duplicate(f"hyperedges already live: {live}")

        n_reuse = min(len(rows), self.h2v.tree.free_count)
        keys, starts = self.h2v.reuse(n_reuse)
        for (ext, vs, t), i, s in zip(rows, keys.tolist(), starts.tolist()):
            self.h2v.store(s, vs)
            self._register(ext, i, vs, t)

        fresh = rows[n_reuse:]
        fresh_keys = list(range(self._next_internal,
                                self._next_internal + len(fresh)))
        self._next_internal += len(fresh)
        self.h2v.append(fresh_keys, [r[1] for r in fresh])
        for (ext, vs, t), i in zip(fresh, fresh_keys):
            self._register(ext, i, vs, t)

        additions: dict[int, list[int]] = defaultdict(list)
        for ext, vs, _ in rows:
            for v in vs:
                additions[v].append(self.ext2int[ext])
        self._v2h_add(additions)

    def _v2h_add(self, additions: dict[int, list[int]]) -> None:
        new_keys, new_lists = [], []
        for v in sorted(additions):
            ids = sorted(additions[v])
            node = self._v2h_node(v)
            if node is not None and not self.v2h.tree.free[node]:
                for i in ids:
                    self.v2h.insert_element(v, i)
            elif node is not None:
                self.v2h.reactivate(v, ids)
            else:
                new_keys.append(v)
                new_lists.append(ids)
            self._degree[v] = self._degree.get(v, 0) + len(ids)
        self.v2h.append(new_keys, new_lists)

    def _v2h_node(self, v: int):
        try:
            return self.v2h.tree.search(v)
        except NotFound:
            return None

    # -- horizontal operations --------------------------------------------

    def modify_incident_vertices(self, vertex_inserts: Iterable = (),
                                 vertex_deletes: Iterable = ()) -> None:
        """Add and remove (hyperedge, vertex) incidences.

        Work is grouped by hyperedge for h2v and by vertex for v2h; within a
        group removals run before insertions.  An edge emptied this way stays
        live with cardinality 0.
        """
        vi = [(int(h), int(v)) for h, v in vertex_inserts]
        vd = [(int(h), int(v)) for h, v in vertex_deletes]
        pairs = vi + vd
        if len(set(pairs)) != len(pairs):
            raise Duplicate("an (edge, vertex) pair appears twice in the batch")
        if not pairs:
            return
        for h, v in pairs:
            if v < 0:
                raise ValueError(f"vertex IDs must be non-negative, got {v}")
        current = {h: set(self.incident_vertices(h)) for h, _ in pairs}
        for h, v in vd:
            if v not in current[h]:
                raise NotFound(f"vertex {v} is not in hyperedge {h}")
        for h, v in vi:
            if v in current[h]:
                raise Duplicate(f"vertex {v} already in hyperedge {h}")

        by_edge: dict[int, tuple[list, list]] = defaultdict(lambda: ([], []))
        for h, v in vd:
            by_edge[h][0].append(v)
        for h, v in vi:
            by_edge[h][1].append(v)
        for h, (rem, add) in by_edge.items():
            i = self.ext2int[h]
            for v in rem:
                self.h2v.remove_element(i, v)
            for v in sorted(add):
                self.h2v.insert_element(i, v)
            self._card[h] += len(add) - len(rem)

        removals: dict[int, list[int]] = defaultdict(list)
        for h, v in vd:
            removals[v].append(self.ext2int[h])
        for v, ids in removals.items():
            for i in ids:
                self.v2h.remove_element(v, i)
            self._degree[v] -= len(ids)
        additions: dict[int, list[int]] = defaultdict(list)
        for h, v in vi:
            additions[v].append(self.ext2int[h])
        self._v2h_add(additions)
        self.v2h.release(v for v in removals if not self._degree[v])

    def apply(self, batch: ChangeBatch) -> None:
        self.delete_hyperedges(batch.deletes)
        self.insert_hyperedges(batch.inserts)
        self.modify_incident_vertices(batch.vertex_inserts,
                                      batch.vertex_deletes)


def _normalize_edge(row) -> tuple[int, list[int], int | None]:
    if len(row) == 2:
        ext, vs = row
        t = None
    else:
        ext, vs, t = row
    vs = sorted({int(v) for v in vs})
    if not vs:
        raise ValueError(f"hyperedge {ext} has no vertices")
    if vs[0] < 0:
        raise ValueError(f"hyperedge {ext} has a negative vertex ID")
    if int(ext) < 0:
        raise ValueError(f"external hyperedge IDs must be non-negative: {ext}")
    return int(ext), vs, None if t is None else int(t)
