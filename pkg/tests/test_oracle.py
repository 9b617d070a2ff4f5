import math

import pytest

from hyperarena.errors import Duplicate, NotFound, OracleCapExceeded
from hyperarena.generators import gen_batch, random_rows
from hyperarena.hypergraph import ChangeBatch, DynHypergraph
from hyperarena.oracle import (REFERENCE_CLASS_COUNT, RefHypergraph, ref_apply,
                               ref_count_all, ref_triads, ref_vertex_triads)
from hyperarena.triads import TemporalParams, TriadCounts, build_class_table


def test_reference_table_agrees_on_size_and_order():
    assert REFERENCE_CLASS_COUNT == 26 == len(build_class_table())


def test_empty():
    assert ref_count_all(RefHypergraph()) == TriadCounts()


def test_one_closed_triple():
    r = RefHypergraph.from_records([(1, [1, 2]), (2, [2, 3]), (3, [3, 1])])
    c = ref_count_all(r)
    assert c.hyperedge_total == 1
    assert list(ref_triads(r)) == [(1, 2, 3)]
    assert ref_vertex_triads(r) == {(1, 2, 3): 3}


def test_cap():
    r = RefHypergraph.from_records([(i, [i]) for i in range(10)])
    with pytest.raises(OracleCapExceeded):
        ref_count_all(r, cap=5)


def test_temporal_window():
    r = RefHypergraph.from_records([(1, [1, 2], 0), (2, [2, 3], 5), (3, [3, 1], 20)])
    assert ref_count_all(r, TemporalParams(10)).temporal_total == 0
    assert ref_count_all(r, TemporalParams(math.inf)).temporal_total == 1


def test_ref_apply_trivial():
    rows = random_rows(20, 15, 4, seed=1)
    r = RefHypergraph.from_records(rows)
    assert ref_apply(r, ChangeBatch()) == r
    r2 = ref_apply(ref_apply(r, ChangeBatch(inserts=[(99, [1, 2], 7)])),
                   ChangeBatch(deletes=[99]))
    assert r2 == r


def test_ref_apply_errors_mirror_engine():
    r = RefHypergraph.from_records([(1, [1, 2]), (2, [2, 3])])
    g = DynHypergraph([(1, [1, 2]), (2, [2, 3])])
    bad = [(ChangeBatch(deletes=[5]), NotFound),
           (ChangeBatch(inserts=[(1, [4], None)]), Duplicate),
           (ChangeBatch(vertex_inserts=[(1, 2)]), Duplicate),
           (ChangeBatch(vertex_deletes=[(1, 3)]), NotFound)]
    for batch, err in bad:
        with pytest.raises(err):
            ref_apply(r, batch)
        with pytest.raises(err):
            DynHypergraph([(1, [1, 2]), (2, [2, 3])]).apply(batch)
    assert g.edges() == {1: (1, 2), 2: (2, 3)}


def test_random_batches_engine_equals_reference():
    rows = random_rows(80, 60, 5, seed=3)
    g = DynHypergraph(rows)
    r = RefHypergraph.from_records(rows)
    for i in range(15):
        b = gen_batch(g, 10, 0.5, "uniform:5", seed=i, n_vertices=60, vertex_mods=3)
        g.apply(b)
        r = ref_apply(r, b)
        assert g.edges() == {h: tuple(sorted(vs)) for h, vs in r.edges.items()}
        for h in r.edges:
            assert g.neighbor_hyperedges(h) == r.neighbor_hyperedges(h)
            assert g.timestamp(h) == r.times[h]
