"""Dynamic hypergraph: paired hyperedge->vertex and vertex->hyperedge stores.

Batched deletes free blocks, inserts reuse them, spill into chained blocks,
or allocate fresh ones and rebuild the manager tree.
"""
from hyperarena import ChangeBatch, DynHypergraph

g = DynHypergraph([(1, [1, 2, 3, 4], 0), (2, [4, 5], 1),
                   (3, [5, 6, 7], 2), (4, [1, 2], 3)])
print(g)
print("h1 neighbours", g.neighbor_hyperedges(1))
print("edges of vertex 4", g.incident_hyperedges(4))

# reuse: h2's block takes the new edge 5
g.apply(ChangeBatch(deletes=[2], inserts=[(5, [4, 6, 8], 4)]))
print("after swap", g.edges())

# spill: a 100-vertex edge placed into a reused 32-slot block
g.apply(ChangeBatch(deletes=[4], inserts=[(6, list(range(100, 200)), 5)]))
print("edge 6 cardinality", g.cardinality(6))

# horizontal edits move single vertices in and out of an edge
g.apply(ChangeBatch(vertex_inserts=[(1, 9)], vertex_deletes=[(3, 7)]))
print("h1", g.incident_vertices(1), "h3", g.incident_vertices(3))
print("duality holds:", g.check_duality())
