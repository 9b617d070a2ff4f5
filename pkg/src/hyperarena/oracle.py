"""Brute-force reference hypergraph and triad counts.

Everything here works on plain dicts and sets and deliberately shares no
code with the arena, the block manager or the triad counters; the class
table is rebuilt from concrete three-set examples.  Only tests and the
``verify`` run mode use it.
"""

from __future__ import annotations

import copy
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import Duplicate, NotFound, OracleCapExceeded
from .triads import TemporalParams, TriadCounts

DEFAULT_CAP = 300


@dataclass
class RefHypergraph:
    edges: dict[int, frozenset] = field(default_factory=dict)
    times: dict[int, int | None] = field(default_factory=dict)

    @classmethod
    def from_records(cls, rows):
        r = cls()
        for row in rows:
            h, vs = row[0], row[1]
            r.edges[h] = frozenset(vs)
            r.times[h] = row[2] if len(row) > 2 else None
        return r

    def incident_vertices(self, h):
        return sorted(self.edges[h])

    def incident_hyperedges(self, v):
        return sorted(h for h, vs in self.edges.items() if v in vs)

    def neighbor_hyperedges(self, h):
        mine = self.edges[h]
        return sorted(k for k, vs in self.edges.items()
                      if k != h and mine & vs)


# The seven regions as membership triples (in a, in b, in c), in bit order.
_REGION_KEYS = [(1, 0, 0), (0, 1, 0), (0, 0, 1),
                (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]


_REGION_BIT = {key: 1 << (6 - i) for i, key in enumerate(_REGION_KEYS)}


def _mask(a, b, c):
    m = 0
    for v in a | b | c:
        m |= _REGION_BIT[(v in a, v in b, v in c)]
    return m


def _is_triad(a, b, c):
    if not (a and b and c) or a == b or a == c or b == c:
        return False
    return sum(bool(x & y) for x, y in ((a, b), (a, c), (b, c))) >= 2


def _example_sets(m):
    sets = (set(), set(), set())
    for i, key in enumerate(_REGION_KEYS):
        if m >> (6 - i) & 1:
            for role in range(3):
                if key[role]:
                    sets[role].add(i)
    return tuple(frozenset(s) for s in sets)


def _reference_table():
    """``{mask: class}`` for every mask describing a valid triad."""
    canon = {}
    for m in range(128):
        a, b, c = _example_sets(m)
        if not _is_triad(a, b, c):
            continue
        canon[m] = min(_mask(*p) for p in itertools.permutations((a, b, c)))
    order = sorted(set(canon.values()))
    return {m: order.index(c) for m, c in canon.items()}, len(order)


_TABLE, REFERENCE_CLASS_COUNT = _reference_table()


def ref_triads(r: RefHypergraph) -> dict[tuple, int]:
    """``{(h1, h2, h3): class}`` for every hyperedge triad."""
    out = {}
    for h1, h2, h3 in itertools.combinations(sorted(r.edges), 3):
        a, b, c = r.edges[h1], r.edges[h2], r.edges[h3]
        if _is_triad(a, b, c):
            out[(h1, h2, h3)] = _TABLE[_mask(a, b, c)]
    return out


def ref_vertex_triads(r: RefHypergraph) -> dict[tuple, int]:
    """``{(u, v, w): type}`` (1, 2 or 3) for every connected vertex triple."""
    pairs, triples = set(), set()
    for vs in r.edges.values():
        pairs.update(itertools.combinations(sorted(vs), 2))
        triples.update(itertools.combinations(sorted(vs), 3))
    verts = sorted(set().union(*r.edges.values())) if r.edges else []
    out = {}
    for t in itertools.combinations(verts, 3):
        u, v, w = t
        n = ((u, v) in pairs) + ((u, w) in pairs) + ((v, w) in pairs)
        if n < 2:
            continue
        if t in triples:
            out[t] = 1
        elif n == 3:
            out[t] = 3
        else:
            out[t] = 2
    return out


def ref_temporal_counts(r: RefHypergraph, params: TemporalParams,
                        triads: dict | None = None) -> np.ndarray:
    """Per-class temporal triad counts; ``triads`` may come from ref_triads."""
    out = np.zeros(REFERENCE_CLASS_COUNT, np.int64)
    if not params.t_delta > 0:
        return out
    if triads is None:
        triads = ref_triads(r)
    for (h1, h2, h3), cls in triads.items():
        ts = sorted([r.times[h1], r.times[h2], r.times[h3]])
        if ts[2] - ts[0] <= params.t_delta:
            out[cls] += 1
    return out


def ref_count_all(r: RefHypergraph, params: TemporalParams = TemporalParams(),
                  cap: int = DEFAULT_CAP, triads: dict | None = None) -> TriadCounts:
    """All categories by brute force; ``triads`` may come from ref_triads."""
    if len(r.edges) > cap:
        raise OracleCapExceeded(f"{len(r.edges)} edges exceed oracle cap {cap}")
    out = TriadCounts()
    if triads is None:
        triads = ref_triads(r)
    for cls in triads.values():
        out.hyperedge_by_class[cls] += 1
    out.temporal_by_class = ref_temporal_counts(r, params, triads)
    out.temporal_total = int(out.temporal_by_class.sum())
    for kind in ref_vertex_triads(r).values():
        out.vertex_by_type[kind - 1] += 1
    return out


def ref_apply(r: RefHypergraph, batch) -> RefHypergraph:
    """Return a new reference graph with ``batch`` applied engine-style."""
    out = copy.deepcopy(r)
    dels = list(batch.deletes)
    if len(set(dels)) != len(dels):
        raise Duplicate("hyperedge deleted twice")
    for h in dels:
        if h not in out.edges:
            raise NotFound(h)
        del out.edges[h]
        del out.times[h]
    for row in batch.inserts:
        h, vs, t = row
        if h in out.edges:
            raise Duplicate(h)
        out.edges[h] = frozenset(vs)
        out.times[h] = t
    pairs = list(batch.vertex_inserts) + list(batch.vertex_deletes)
    if len(set(pairs)) != len(pairs):
        raise Duplicate("pair repeated")
    for h, v in batch.vertex_deletes:
        if h not in out.edges or v not in out.edges[h]:
            raise NotFound((h, v))
    for h, v in batch.vertex_inserts:
        if h not in out.edges:
            raise NotFound(h)
        if v in out.edges[h]:
            raise Duplicate((h, v))
    for h, v in batch.vertex_deletes:
        out.edges[h] = out.edges[h] - {v}
    for h, v in batch.vertex_inserts:
        out.edges[h] = out.edges[h] | {v}
    return out
