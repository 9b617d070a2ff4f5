"""Seeded random hypergraphs and change batches."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InsufficientEdges
from .hypergraph import ChangeBatch, DynHypergraph


@dataclass(frozen=True)
class CardDist:
    """Cardinality distribution: ``fixed:k``, ``uniform:k`` or ``normal:mu,std``."""

    kind: str
    a: float
    b: float = 0.0

    @classmethod
    def parse(cls, text: str) -> "CardDist":
        try:
            kind, _, args = text.partition(":")
            if kind in ("fixed", "uniform"):
                k = int(args)
                if k < 1:
                    raise ValueError
                return cls(kind, k)
            if kind == "normal":
                mu, std = (float(x) for x in args.split(","))
                if std < 0:
                    raise ValueError
                return cls(kind, mu, std)
        except ValueError:
            pass
        raise ConfigError(f"bad cardinality spec {text!r}; expected "
                          "fixed:k, uniform:k or normal:mu,std")

    def __str__(self):
        if self.kind == "normal":
            return f"normal:{self.a:g},{self.b:g}"
        return f"{self.kind}:{int(self.a)}"

    def sample(self, rng: np.random.Generator, size: int, cap: int) -> np.ndarray:
        """Cardinalities clipped to ``[1, cap]``."""
        if self.kind == "fixed":
            out = np.full(size, int(self.a))
        elif self.kind == "uniform":
            out = rng.integers(1, int(self.a) + 1, size)
        else:
            out = np.rint(rng.normal(self.a, self.b, size)).astype(np.int64)
        return np.clip(out, 1, cap)


def _sample_vertices(rng, n_vertices: int, k: int) -> list[int]:
    """``k`` distinct vertices from ``1..n_vertices``."""
    if 4 * k > n_vertices:
        return sorted((rng.choice(n_vertices, size=k, replace=False) + 1).tolist())
    picked = set()
    while len(picked) < k:
        picked.update((rng.integers(0, n_vertices, k - len(picked)) + 1).tolist())
    return sorted(picked)


def random_rows(n_edges: int, n_vertices: int, max_card: int, seed) -> list:
    """``(id, vertices, timestamp)`` rows: IDs ``1..n``, timestamp = row index."""
    if max_card < 1 or n_vertices < max_card:
        raise ConfigError("need max_card >= 1 and n_vertices >= max_card")
    rng = np.random.default_rng(seed)
    cards = rng.integers(1, max_card + 1, n_edges)
    return [(i + 1, _sample_vertices(rng, n_vertices, int(c)), i)
            for i, c in enumerate(cards)]


def gen_random(n_edges: int, n_vertices: int, max_card: int, seed,
               **graph_kw) -> DynHypergraph:
    return DynHypergraph(random_rows(n_edges, n_vertices, max_card, seed),
                         **graph_kw)


def gen_batch(g: DynHypergraph, n_changes: int, delete_pct: float,
              card_dist: CardDist | str = "uniform:8", seed=None, *,
              n_vertices: int | None = None,
              vertex_mods: int = 0) -> ChangeBatch:
    """Random batch: ``floor(n * delete_pct)`` deletions, the rest insertions.

    Inserted edges draw vertices from ``1..n_vertices`` (default: the largest
    vertex ID in ``g``) and get timestamps increasing past the current max.
    ``vertex_mods`` adds that many incident-vertex edits on surviving edges,
    alternating removal and insertion.
    """
    if not 0 <= delete_pct <= 1:
        raise ConfigError("delete_pct must lie in [0, 1]")
    if isinstance(card_dist, str):
        card_dist = CardDist.parse(card_dist)
    rng = np.random.default_rng(seed)
    n_del = math.floor(n_changes * delete_pct)
    live = g.edge_ids()
    if n_del > len(live):
        raise InsufficientEdges(f"{n_del} deletions requested, "
                                f"{len(live)} live hyperedges")
    dels = sorted(rng.choice(live, size=n_del, replace=False).tolist()) \
        if n_del else []

    if n_vertices is None:
        verts = g.vertices()
        n_vertices = verts[-1] if verts else 1
    n_ins = n_changes - n_del
    cards = card_dist.sample(rng, n_ins, n_vertices)
    times = [t for t in g.times.values() if t is not None]
    t0 = max(times) + 1 if times else 0
    first = g.next_edge_id
    inserts = [(first + j, _sample_vertices(rng, n_vertices, int(c)), t0 + j)
               for j, c in enumerate(cards)]

    vi, vd = [], []
    survivors = sorted(set(live) - set(dels))
    used = set()
    for j in range(vertex_mods if survivors else 0):
        h = int(survivors[rng.integers(len(survivors))])
        members = g.incident_vertices(h)
        if j % 2 == 0 and members:
            v = members[rng.integers(len(members))]
            if (h, v) not in used:
                vd.append((h, v))
                used.add((h, v))
        else:
            v = int(rng.integers(1, n_vertices + 1))
            if v not in members and (h, v) not in used:
                vi.append((h, v))
                used.add((h, v))
    return ChangeBatch(dels, inserts, vi, vd)
