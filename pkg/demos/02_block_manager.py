"""Block manager: an implicit search tree over external IDs.

Keys sit in a perfect binary search tree stored in heap order, so the slot
of the r-th smallest key is computed directly from r.  Each node tracks how
many free nodes its subtree holds, which turns "give me the k-th free block"
into one root-to-leaf descent.
"""
import numpy as np

from hyperarena.block_manager import (ManagerTree, heap_index_to_rank,
                                      rank_to_heap_index)

ids = np.arange(1, 11)
tree = ManagerTree.build(ids, starts=ids * 32)
h = tree.height
print("height", h, "rank -> heap slot", rank_to_heap_index(ids, h).tolist())
print("round trip ok:",
      (heap_index_to_rank(rank_to_heap_index(ids, h), h) == ids).all())
print("search(7) -> heap slot", tree.search(7))

# deleting IDs frees their nodes; inserts claim free nodes by rank
tree.mark_deleted([1, 5, 6, 10])
print("free nodes", tree.free_count)
picks = tree.find_kth_available_batch([1, 2, 3])
print("first three free nodes hold keys", tree.edge_id[picks].tolist())
tree.reassign_batch(picks)
print("after reuse: free", tree.free_count, "live", tree.live_count)

# new keys beyond the tree force a rebuild; free nodes are dropped
tree = tree.rebuild(extra_ids=[11, 12], extra_starts=[352, 384])
print(tree, "in order:", tree.in_order().tolist())
tree.check()
