"""Incremental counting: update counts from the region a batch touches.

Only triads that contain a changed hyperedge can change, and those lie within
two hops of it in the line graph.  They are counted before and after the
batch, and the difference is applied to the running totals.
"""
import time

from hyperarena import (CountState, TemporalParams, affected_region,
                        apply_and_update, gen_batch, gen_random, recount)

g = gen_random(5000, 20000, 6, seed=3)
state = CountState.from_graph(g, TemporalParams(50))
print("start", state.counts.hyperedge_total, "hyperedge triads")

batch = gen_batch(g, 40, 0.5, "uniform:6", seed=4)
region = affected_region(g, batch.deletes)
print(f"{len(batch.deletes)} deletes touch {len(region.members)} of {g.num_edges} edges")

t0 = time.perf_counter()
state = apply_and_update(state, g, batch)
inc = time.perf_counter() - t0
t0 = time.perf_counter()
full = recount(state, g)
rec = time.perf_counter() - t0
print(f"incremental {inc * 1e3:.0f} ms, recount {rec * 1e3:.0f} ms")
print("phases (ms)", {k: round(v, 1) for k, v in state.timings.items()})
print("exact:", state.counts == full.counts)
