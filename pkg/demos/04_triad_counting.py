"""Static triad counts: hyperedge classes, vertex types and temporal triads.

A hyperedge triad is three connected hyperedges; its class is the canonical
7-region Venn pattern (26 classes).  Vertex triads are three vertices joined
by co-occurrence.  Temporal triads are hyperedge triads whose timestamps fit
in a window.
"""
from hyperarena import (TemporalParams, build_class_table, classify_triple,
                        count_all, gen_random)
from hyperarena.oracle import RefHypergraph, ref_count_all

table = build_class_table()
print(len(table), "classes, first three:",
      [table.pattern(i) for i in range(3)])
cls = classify_triple({1, 2}, {2, 3}, {3, 1})
print("triangle {1,2},{2,3},{3,1} -> class", cls, table.pattern(cls))

g = gen_random(250, 400, 6, seed=1)
c = count_all(g, TemporalParams(20))
print("hyperedge triads", c.hyperedge_total)
print("vertex types", c.vertex_by_type.tolist())
print("temporal (window 20)", c.temporal_total)

# a brute-force reference agrees component by component
ref = ref_count_all(RefHypergraph.from_records(g.records()), TemporalParams(20))
print("matches reference:", ref == c)
