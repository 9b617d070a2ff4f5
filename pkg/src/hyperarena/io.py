"""Reading and writing hypergraph datasets.

Two formats are supported:

``edge-lines``
    One hyperedge per line, whitespace-separated vertex IDs, optionally
    preceded by a ``t=<int>`` timestamp token.  Blank lines and lines
    starting with ``#`` are skipped.

``simplicial-3file``
    ``<name>-nverts.txt`` (cardinality per simplex), ``<name>-simplices.txt``
    (flattened vertex stream) and ``<name>-times.txt`` (one timestamp per
    simplex), one integer per line.  ``path`` is either the ``<dir>/<name>``
    prefix or a directory named ``<name>``.

Hyperedges get external IDs ``1..n`` in file order; exact duplicates are
kept as separate hyperedges.
"""

from __future__ import annotations

import os
from pathlib import Path

from .errors import CardinalityMismatch, ConfigError, ParseError
from .hypergraph import DynHypergraph

FORMATS = ("edge-lines", "simplicial-3file")


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"bad {what} {tok!r}", lineno) from None


def read_edge_lines(path) -> list[tuple]:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            toks = line.split()
            if not toks or toks[0].startswith("#"):
                continue
            t = None
            if toks[0].startswith("t="):
                t = _int(toks[0][2:], lineno, "timestamp")
                toks = toks[1:]
            verts = [_int(x, lineno, "vertex ID") for x in toks]
            if not verts:
                raise ParseError("hyperedge has no vertices", lineno)
            if min(verts) < 0:
                raise ParseError("vertex IDs must be non-negative", lineno)
            rows.append((len(rows) + 1, verts, t))
    return rows


def _prefix(path) -> Path:
    p = Path(path)
    if p.is_dir():
        return p / p.name
    return p


def _read_ints(path: Path) -> list[int]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if line:
                out.append(_int(line, lineno, f"integer in {path.name}"))
    return out


def read_simplicial(path) -> list[tuple]:
    prefix = _prefix(path)
    base = str(prefix)
    nverts = _read_ints(Path(base + "-nverts.txt"))
    simplices = _read_ints(Path(base + "-simplices.txt"))
    times_path = Path(base + "-times.txt")
    times = _read_ints(times_path) if times_path.exists() else None
    if sum(nverts) != len(simplices):
        raise CardinalityMismatch(
            f"nverts sums to {sum(nverts)} but simplices has {len(simplices)}")
    if times is not None and len(times) != len(nverts):
        raise CardinalityMismatch(
            f"{len(nverts)} simplices but {len(times)} timestamps")
    if any(k <= 0 for k in nverts):
        raise CardinalityMismatch("simplex with non-positive cardinality")
    if simplices and min(simplices) < 0:
        raise ParseError("vertex IDs must be non-negative")
    rows, pos = [], 0
    for i, k in enumerate(nverts):
        rows.append((i + 1, simplices[pos:pos + k],
                     times[i] if times is not None else None))
        pos += k
    return rows


def read_rows(path, format: str = "edge-lines") -> list[tuple]:
    if format == "edge-lines":
        return read_edge_lines(path)
    if format == "simplicial-3file":
        return read_simplicial(path)
    raise ConfigError(f"unknown format {format!r}; choose from {FORMATS}")


def ingest(path, format: str = "edge-lines", **graph_kw) -> DynHypergraph:
    return DynHypergraph(read_rows(path, format), **graph_kw)


def export_edge_lines(g: DynHypergraph, path) -> None:
    """Write live edges in ID order; re-ingesting renumbers them ``1..n``."""
    with open(path, "w") as fh:
        for h, vs, t in g.records():
            head = f"t={t} " if t is not None else ""
            fh.write(head + " ".join(map(str, vs)) + "\n")


def export_simplicial(g: DynHypergraph, path) -> None:
    prefix = str(_prefix(path)) if not str(path).endswith(os.sep) else path
    recs = g.records()
    with open(prefix + "-nverts.txt", "w") as fh:
        fh.writelines(f"{len(vs)}\n" for _, vs, _ in recs)
    with open(prefix + "-simplices.txt", "w") as fh:
        fh.writelines(f"{v}\n" for _, vs, _ in recs for v in vs)
    if recs and all(t is not None for _, _, t in recs):
        with open(prefix + "-times.txt", "w") as fh:
            fh.writelines(f"{t}\n" for _, _, t in recs)
