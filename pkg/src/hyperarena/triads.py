"""Hyperedge, incident-vertex and temporal triad counting.

Hyperedge triads are connected triples of distinct hyperedges (at least two
of the three pairwise intersections non-empty), classified by which of the
seven Venn regions of their vertex sets are non-empty.  Region bits are
packed most-significant first in the order::

    a-only, b-only, c-only, ab, ac, bc, abc      (ab = (a & b) - c, ...)

so a pattern is a 7-bit integer and its string form reads left to right.
Role permutations are factored out by taking the smallest bit string; the
surviving 26 canonical patterns are numbered in ascending order.

Incident-vertex triads are vertex triples connected in the co-occurrence
graph (at least two of the three pairs share a hyperedge):

* type 1 - one hyperedge contains all three vertices,
* type 2 - exactly two pairs co-occur (open triad),
* type 3 - all three pairs co-occur, but no hyperedge holds all three.

Every counter accepts a hyperedge ``scope`` (only triples whose three edges
lie in it, or only co-occurrences witnessed inside it) and an anchor set
restricting the count to triples touching the anchors.  Anchored counts are
what the incremental updater subtracts and adds back.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import ClassCountMismatch, IdenticalSets, MissingTimestamps

NUM_CLASSES = 26
NUM_VERTEX_TYPES = 3
REGIONS = ("a", "b", "c", "ab", "ac", "bc", "abc")

MOTIFS = ("hyperedge", "vertex", "temporal")

# -- class table ------------------------------------------------------------


def _region_index(roles: str) -> int:
    return REGIONS.index("".join(sorted(roles)))


def permute_pattern(pattern: int, perm: Sequence[int]) -> int:
    """Relabel roles: role ``i`` of the input becomes role ``perm[i]``."""
    letters = "abc"
    out = 0
    for bit, region in enumerate(REGIONS):
        if pattern >> (6 - bit) & 1:
            moved = "".join(letters[perm[letters.index(ch)]] for ch in region)
            out |= 1 << (6 - _region_index(moved))
    return out


_PERMS = tuple(itertools.permutations(range(3)))


def canonical_pattern(pattern: int) -> int:
    return min(permute_pattern(pattern, p) for p in _PERMS)


def pattern_string(pattern: int) -> str:
    return format(pattern, "07b")


def _pattern_sets(pattern: int):
    """Pairwise-intersection and emptiness facts implied by a pattern."""
    bits = {r: bool(pattern >> (6 - i) & 1) for i, r in enumerate(REGIONS)}
    nonempty = [any(bits[r] for r in REGIONS if ch in r) for ch in "abc"]
    pair = {}
    for x, y in (("a", "b"), ("a", "c"), ("b", "c")):
        pair[x + y] = bits[x + y] or bits["abc"]
    # x == y as sets iff every region holding exactly one of them is empty
    equal = []
    for x, y in (("a", "b"), ("a", "c"), ("b", "c")):
        equal.append(not any(bits[r] for r in REGIONS if (x in r) != (y in r)))
    return nonempty, pair, equal


@dataclass(frozen=True)
class TriadClassTable:
    canonical_patterns: tuple[int, ...]
    class_of: dict = field(hash=False, compare=False)
    # class index for every 7-bit pattern: -1 not a triad, -2 identical sets
    lookup: tuple[int, ...] = field(hash=False, compare=False, default=())

    def __len__(self):
        return len(self.canonical_patterns)

    def pattern(self, cls: int) -> str:
        return pattern_string(self.canonical_patterns[cls])


NOT_A_TRIAD = -1
IDENTICAL = -2


@lru_cache(maxsize=None)
def build_class_table() -> TriadClassTable:
    """Enumerate all 128 region patterns and reduce them to the 26 classes."""
    valid = {}
    lookup = []
    for p in range(128):
        nonempty, pair, equal = _pattern_sets(p)
        if not all(nonempty):
            lookup.append(NOT_A_TRIAD)
            continue
        if any(equal):
            lookup.append(IDENTICAL)
            continue
        if sum(pair.values()) < 2:
            lookup.append(NOT_A_TRIAD)
            continue
        valid[p] = canonical_pattern(p)
        lookup.append(None)
    canon = tuple(sorted(set(valid.values())))
    if len(canon) != NUM_CLASSES:
        raise ClassCountMismatch(
            f"expected {NUM_CLASSES} canonical classes, found {len(canon)}")
    index = {c: i for i, c in enumerate(canon)}
    class_of = {p: index[c] for p, c in valid.items()}
    lookup = tuple(class_of[p] if v is None else v
                   for p, v in enumerate(lookup))
    return TriadClassTable(canon, class_of, lookup)


# -- set primitives ----------------------------------------------------------

_NUMPY_CUTOFF = 256


def intersect_sorted(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Intersection of two strictly increasing ID lists."""
    if len(a) + len(b) > _NUMPY_CUTOFF:
        return np.intersect1d(np.asarray(a, np.int64), np.asarray(b, np.int64),
                              assume_unique=True).tolist()
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        x, y = a[i], b[j]
        if x == y:
            out.append(x)
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return out


def venn_pattern(a: frozenset, b: frozenset, c: frozenset) -> int:
    ab = a & b
    n_ab = len(ab)
    n_ac = len(a & c)
    n_bc = len(b & c)
    n_abc = len(ab & c)
    return ((len(a) - n_ab - n_ac + n_abc > 0) << 6
            | (len(b) - n_ab - n_bc + n_abc > 0) << 5
            | (len(c) - n_ac - n_bc + n_abc > 0) << 4
            | (n_ab > n_abc) << 3
            | (n_ac > n_abc) << 2
            | (n_bc > n_abc) << 1
            | (n_abc > 0))


def classify_triple(a: Iterable[int], b: Iterable[int], c: Iterable[int]):
    """Class index of the triple, or ``None`` if it is not a triad."""
    a, b, c = frozenset(a), frozenset(b), frozenset(c)
    if a == b or a == c or b == c:
        raise IdenticalSets("two hyperedges of the triple have equal vertex sets")
    cls = build_class_table().lookup[venn_pattern(a, b, c)]
    return None if cls < 0 else cls


# -- results -------------------------------------------------------------------


@dataclass(frozen=True)
class TemporalParams:
    """Time window for temporal triads; ``t_delta == 0`` disables them."""

    t_delta: float = 0

    def __post_init__(self):
        if not self.t_delta >= 0:
            raise ValueError(f"t_delta must be >= 0, got {self.t_delta}")

    @property
    def enabled(self) -> bool:
        return self.t_delta > 0

    def to_json(self):
        return "inf" if math.isinf(self.t_delta) else self.t_delta


@dataclass
class TriadCounts:
    hyperedge_by_class: np.ndarray = field(
        default_factory=lambda: np.zeros(NUM_CLASSES, np.int64))
    vertex_by_type: np.ndarray = field(
        default_factory=lambda: np.zeros(NUM_VERTEX_TYPES, np.int64))
    temporal_total: int = 0
    temporal_by_class: np.ndarray = field(
        default_factory=lambda: np.zeros(NUM_CLASSES, np.int64))

    @property
    def hyperedge_total(self) -> int:
        return int(self.hyperedge_by_class.sum())

    def components(self) -> dict[str, int]:
        """Flat ``{name: value}`` view, used for diffing and reports."""
        out = {f"hyperedge[{i}]": int(x)
               for i, x in enumerate(self.hyperedge_by_class)}
        out.update({f"vertex[type{i + 1}]": int(x)
                    for i, x in enumerate(self.vertex_by_type)})
        out["temporal_total"] = int(self.temporal_total)
        out.update({f"temporal[{i}]": int(x)
                    for i, x in enumerate(self.temporal_by_class)})
        return out

    def first_difference(self, other: "TriadCounts"):
        mine, theirs = self.components(), other.components()
        for key in mine:
            if mine[key] != theirs[key]:
                return key, mine[key], theirs[key]
        return None

    def __eq__(self, other):
        if not isinstance(other, TriadCounts):
            return NotImplemented
        return self.first_difference(other) is None

    def __add__(self, other):
        return TriadCounts(self.hyperedge_by_class + other.hyperedge_by_class,
                           self.vertex_by_type + other.vertex_by_type,
                           self.temporal_total + other.temporal_total,
                           self.temporal_by_class + other.temporal_by_class)

    def __sub__(self, other):
        return TriadCounts(self.hyperedge_by_class - other.hyperedge_by_class,
                           self.vertex_by_type - other.vertex_by_type,
                           self.temporal_total - other.temporal_total,
                           self.temporal_by_class - other.temporal_by_class)

    def copy(self):
        return TriadCounts(self.hyperedge_by_class.copy(),
                           self.vertex_by_type.copy(), self.temporal_total,
                           self.temporal_by_class.copy())

    def is_nonnegative(self) -> bool:
        return min(self.components().values(), default=0) >= 0

    def to_dict(self, motifs=MOTIFS, params: TemporalParams | None = None):
        table = build_class_table()
        out = {}
        if "hyperedge" in motifs:
            out["hyperedge"] = {
                "total": self.hyperedge_total,
                "by_class": [
                    {"class": i, "pattern": table.pattern(i), "count": int(x)}
                    for i, x in enumerate(self.hyperedge_by_class)],
            }
        if "vertex" in motifs:
            out["vertex"] = {f"type{i + 1}": int(x)
                             for i, x in enumerate(self.vertex_by_type)}
        if "temporal" in motifs:
            out["temporal"] = {
                "t_delta": params.to_json() if params else None,
                "total": int(self.temporal_total),
                "by_class": [
                    {"class": i, "pattern": table.pattern(i), "count": int(x)}
                    for i, x in enumerate(self.temporal_by_class)],
            }
        return out


# -- graph access ----------------------------------------------------------------


class GraphView:
    """Cached read access to a :class:`DynHypergraph` for counting.

    ``full=True`` snapshots every list up front, which is cheaper than
    per-query arena reads when the whole graph is scanned.
    """

    def __init__(self, g, full: bool = False):
        self.g = g
        self._sets: dict[int, frozenset] = {}
        self._inc: dict[int, frozenset] = {}
        self._nbrs: dict[int, frozenset] = {}
        self._adj: dict[int, frozenset] = {}
        self._time: dict[int, int] = {}
        if full:
            inc = defaultdict(set)
            for h, vs in g.edges().items():
                self._sets[h] = frozenset(vs)
                for v in vs:
                    inc[v].add(h)
            self._inc = {v: frozenset(s) for v, s in inc.items()}
            self._time.update(g.times)
            self._complete = True
        else:
            self._complete = False

    def ids(self):
        return sorted(self._sets) if self._complete else self.g.edge_ids()

    def vset(self, h) -> frozenset:
        s = self._sets.get(h)
        if s is None:
            s = self._sets[h] = frozenset(self.g.incident_vertices(h))
        return s

    def incident(self, v) -> frozenset:
        s = self._inc.get(v)
        if s is None:
            if self._complete:
                return frozenset()
            s = self._inc[v] = (frozenset(self.g.incident_hyperedges(v))
                                if self.g.degree(v) else frozenset())
        return s

    def nbrs(self, h) -> frozenset:
        s = self._nbrs.get(h)
        if s is None:
            out = set()
            for v in self.vset(h):
                out |= self.incident(v)
            out.discard(h)
            s = self._nbrs[h] = frozenset(out)
        return s

    def time(self, h):
        t = self._time.get(h)
        if t is None:
            t = self._time[h] = self.g.timestamp(h)
        return t


# -- hyperedge & temporal triads ------------------------------------------------


def _tally_centered(view: GraphView, centers, scope, params, want_static,
                    want_temporal):
    """Classify every connected triple within ``scope`` exactly once.

    A connected triple has a center adjacent to both other members; open
    triples have one center, closed ones three, and those are taken at
    their smallest member only.  Per-center work (the center's
    intersections with each neighbour, timestamps) is done once, and open
    triples skip the two intersections known to be empty.
    """
    lookup = build_class_table().lookup
    static = [0] * NUM_CLASSES
    temporal = [0] * NUM_CLASSES
    t_delta = params.t_delta if params is not None else 0
    vset, time_of, nbrs = view.vset, view.time, view.nbrs
    for m in centers:
        nm = nbrs(m)
        if scope is not None:
            nm = nm & scope
        if len(nm) < 2:
            continue
        nm = sorted(nm)
        k = len(nm)
        a = vset(m)
        la = len(a)
        sets = [vset(y) for y in nm]
        n_a = [len(a & c) for c in sets]
        if want_temporal:
            tm = time_of(m)
            times = [time_of(y) for y in nm]
        for i in range(k - 1):
            x = nm[i]
            nx = nbrs(x)
            closed_ok = m < x
            b = sets[i]
            lb = len(b)
            n_ab = n_a[i]
            ab = a & b
            for j in range(i + 1, k):
                closed = nm[j] in nx
                if closed:
                    if not closed_ok:
                        continue
                    c = sets[j]
                    n_bc = len(b & c)
                    n_abc = len(ab & c) if n_ab else 0
                else:
                    c = sets[j]
                    n_bc = n_abc = 0
                n_ac = n_a[j]
                cls = lookup[(la - n_ab - n_ac + n_abc > 0) << 6
                             | (lb - n_ab - n_bc + n_abc > 0) << 5
                             | (len(c) - n_ac - n_bc + n_abc > 0) << 4
                             | (n_ab > n_abc) << 3
                             | (n_ac > n_abc) << 2
                             | (n_bc > n_abc) << 1
                             | (n_abc > 0)]
                if cls < 0:
                    continue
                if want_static:
                    static[cls] += 1
                if want_temporal:
                    t1, t2 = times[i], times[j]
                    if max(tm, t1, t2) - min(tm, t1, t2) <= t_delta:
                        temporal[cls] += 1
    return np.array(static, np.int64), np.array(temporal, np.int64)


def _tally_anchored(view: GraphView, anchors, scope, params, want_static,
                    want_temporal):
    """Classify the connected triples within ``scope`` that contain an anchor.

    Anchors are visited in ascending order and a triple is counted at its
    smallest anchor only.  Around anchor ``a`` a triple is either two
    neighbours of ``a`` or a path ``a - x - y`` with ``y`` not adjacent to
    ``a``.
    """
    lookup = build_class_table().lookup
    static = [0] * NUM_CLASSES
    temporal = [0] * NUM_CLASSES
    t_delta = params.t_delta if params is not None else 0
    vset, time_of, nbrs = view.vset, view.time, view.nbrs
    done = set()

    def tally(la, lb, lc, n_ab, n_ac, n_bc, n_abc, t1, t2, t3):
        cls = lookup[(la - n_ab - n_ac + n_abc > 0) << 6
                     | (lb - n_ab - n_bc + n_abc > 0) << 5
                     | (lc - n_ac - n_bc + n_abc > 0) << 4
                     | (n_ab > n_abc) << 3
                     | (n_ac > n_abc) << 2
                     | (n_bc > n_abc) << 1
                     | (n_abc > 0)]
        if cls < 0:
            return
        if want_static:
            static[cls] += 1
        if want_temporal and max(t1, t2, t3) - min(t1, t2, t3) <= t_delta:
            temporal[cls] += 1

    for a in sorted(anchors):
        if scope is not None and a not in scope:
            continue
        done.add(a)
        na = nbrs(a)
        if scope is not None:
            na = na & scope
        nl = sorted(na - done)
        A = vset(a)
        la = len(A)
        ta = time_of(a) if want_temporal else 0
        sets = [vset(x) for x in nl]
        n_a = [len(A & b) for b in sets]
        times = [time_of(x) for x in nl] if want_temporal else [0] * len(nl)
        for i, x in enumerate(nl):
            b, n_ab, tx = sets[i], n_a[i], times[i]
            lb = len(b)
            ab = A & b
            nx = nbrs(x)
            # both members adjacent to a
            for j in range(i + 1, len(nl)):
                c = sets[j]
                if nl[j] in nx:
                    n_bc = len(b & c)
                    n_abc = len(ab & c)
                else:
                    n_bc = n_abc = 0
                tally(la, lb, len(c), n_ab, n_a[j], n_bc, n_abc, ta, tx, times[j])
            # paths a - x - y
            far = nx - na - done
            if scope is not None:
                far = far & scope
            for y in far:
                if y == a:
                    continue
                c = vset(y)
                tally(la, lb, len(c), n_ab, 0, len(b & c), 0, ta, tx,
                      time_of(y) if want_temporal else 0)
    return np.array(static, np.int64), np.array(temporal, np.int64)


def _chunks(items: list, n: int):
    size = max(1, -(-len(items) // n))
    return [items[i:i + size] for i in range(0, len(items), size)]


def _edge_triads(view, scope, anchors, params, want_static, want_temporal,
                 workers=1):
    if anchors is not None:
        live = [a for a in sorted(anchors) if a in view.g]
        return _tally_anchored(view, live, scope, params, want_static,
                               want_temporal)
    centers = sorted(scope) if scope is not None else view.ids()
    if workers <= 1 or len(centers) < 2 * workers:
        return _tally_centered(view, centers, scope, params, want_static,
                               want_temporal)
    # per-worker partial counters, reduced at the end
    with ThreadPoolExecutor(workers) as pool:
        parts = list(pool.map(
            lambda chunk: _tally_centered(view, chunk, scope, params,
                                          want_static, want_temporal),
            _chunks(centers, workers)))
    return (sum(p[0] for p in parts), sum(p[1] for p in parts))


def _check_times(g, scope):
    ids = scope if scope is not None else g.edge_ids()
    missing = [h for h in ids if g.timestamp(h) is None]
    if missing:
        raise MissingTimestamps(
            f"{len(missing)} hyperedges lack timestamps, e.g. {missing[:5]}")


def _as_scope(g, scope):
    if scope is None:
        return None
    return frozenset(h for h in scope if h in g)


def count_hyperedge_triads(g, scope=None, anchors=None, *, workers: int = 1,
                           view: GraphView | None = None) -> np.ndarray:
    """26-vector of hyperedge-triad counts.

    With ``scope``, only triples whose three members all lie in ``scope``;
    with ``anchors``, only triples containing at least one anchor.
    """
    scope = _as_scope(g, scope)
    view = view or GraphView(g, full=scope is None and anchors is None)
    static, _ = _edge_triads(view, scope, anchors, None, True, False, workers)
    return static


def count_temporal_triads(g, params: TemporalParams, scope=None, anchors=None,
                          *, workers: int = 1, view: GraphView | None = None):
    """``(total, 26-vector)`` of triads whose timestamps span at most t_delta.

    The span ``max(t) - min(t)`` does not depend on how equal timestamps are
    ordered, so ties need no special casing here.
    """
    if not params.enabled:
        return 0, np.zeros(NUM_CLASSES, np.int64)
    scope = _as_scope(g, scope)
    _check_times(g, scope)
    view = view or GraphView(g, full=scope is None and anchors is None)
    _, temporal = _edge_triads(view, scope, anchors, params, False, True,
                               workers)
    return int(temporal.sum()), temporal


# -- incident-vertex triads ---------------------------------------------------


def _vertex_incidence(view: GraphView, scope):
    """Scoped ``vertex -> frozenset(edge)`` map (only for explicit scopes)."""
    inc = defaultdict(set)
    for h in scope:
        for v in view.vset(h):
            inc[v].add(h)
    return {v: frozenset(s) for v, s in inc.items()}


def _vertex_triads_full(view: GraphView, inc: dict) -> np.ndarray:
    adj = {}
    for v, hs in inc.items():
        nb = set()
        for h in hs:
            nb |= view.vset(h)
        nb.discard(v)
        adj[v] = nb
    wedges = 0
    closed = type1 = 0
    for u in sorted(adj):
        nu = adj[u]
        k = len(nu)
        wedges += k * (k - 1) // 2
        eu = inc[u]
        for v in nu:
            if v <= u:
                continue
            euv = eu & inc[v]
            for w in nu & adj[v]:
                if w <= v:
                    continue
                closed += 1
                if not euv.isdisjoint(inc[w]):
                    type1 += 1
    return np.array([type1, wedges - 3 * closed, closed - type1], np.int64)


def _vertex_triads_anchored(view: GraphView, groups, inc=None) -> np.ndarray:
    if inc is None:
        incident = view.incident
    else:
        def incident(v):
            return inc.get(v, frozenset())
    adj_cache: dict[int, frozenset] = {}

    def adj(v):
        s = adj_cache.get(v)
        if s is None:
            out = set()
            for h in incident(v):
                out |= view.vset(h)
            out.discard(v)
            s = adj_cache[v] = frozenset(out)
        return s

    cand = set()
    for grp in groups:
        gl = sorted(set(grp))
        for i, u in enumerate(gl):
            au = adj(u)
            for v in gl[i + 1:]:
                # without a u-v co-occurrence, w must pair with both
                ws = au | adj(v) if v in au else au & adj(v)
                for w in ws:
                    if w != u and w != v:
                        cand.add(tuple(sorted((u, v, w))))
    out = np.zeros(NUM_VERTEX_TYPES, np.int64)
    for u, v, w in cand:
        eu, ev, ew = incident(u), incident(v), incident(w)
        euv = eu & ev
        pairs = (bool(euv) + (not eu.isdisjoint(ew))
                 + (not ev.isdisjoint(ew)))
        if pairs < 2:
            continue
        if not euv.isdisjoint(ew):
            out[0] += 1
        elif pairs == 3:
            out[2] += 1
        else:
            out[1] += 1
    return out


def count_vertex_triads(g, scope=None, anchor_groups=None, *,
                        view: GraphView | None = None) -> np.ndarray:
    """``[type1, type2, type3]`` incident-vertex triad counts.

    ``scope`` limits which hyperedges witness co-occurrence.
    ``anchor_groups`` is a list of vertex sets; only triples with at least
    two vertices inside one group are counted.
    """
    scope = _as_scope(g, scope)
    if anchor_groups is not None:
        view = view or GraphView(g)
        inc = _vertex_incidence(view, scope) if scope is not None else None
        return _vertex_triads_anchored(view, anchor_groups, inc)
    if scope is None:
        view = view if view is not None and view._complete else GraphView(
            g, full=True)
        return _vertex_triads_full(view, view._inc)
    view = view or GraphView(g)
    return _vertex_triads_full(view, _vertex_incidence(view, scope))


# -- everything at once --------------------------------------------------------


def count_all(g, params: TemporalParams = TemporalParams(), scope=None,
              anchors=None, anchor_groups=None, *, motifs=MOTIFS,
              workers: int = 1, view: GraphView | None = None) -> TriadCounts:
    """All requested categories, sharing one triple enumeration.

    ``anchors`` (hyperedge IDs) restricts hyperedge/temporal triads;
    ``anchor_groups`` (vertex sets) restricts vertex triads.  Pass both or
    neither.
    """
    scope = _as_scope(g, scope)
    want_static = "hyperedge" in motifs
    want_temporal = "temporal" in motifs and params.enabled
    if view is None:
        view = GraphView(g, full=scope is None and anchors is None)
    out = TriadCounts()
    if want_static or want_temporal:
        if want_temporal:
            _check_times(g, scope)
        static, temporal = _edge_triads(view, scope, anchors, params,
                                        want_static, want_temporal, workers)
        out.hyperedge_by_class = static
        out.temporal_by_class = temporal
        out.temporal_total = int(temporal.sum())
    if "vertex" in motifs:
        if anchor_groups is not None:
            out.vertex_by_type = count_vertex_triads(
                g, None, anchor_groups, view=view)
        else:
            out.vertex_by_type = count_vertex_triads(g, scope, view=view)
    return out
