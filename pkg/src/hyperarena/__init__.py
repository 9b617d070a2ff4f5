"""Dynamic hypergraphs in a flat block arena, with exact triad counting."""

from .block_manager import ManagerTree, heap_index_to_rank, rank_to_heap_index
from .block_store import FlatArena, capacity_for
from .dynamic_update import (AffectedRegion, CountState, affected_region,
                             apply_and_update, recount)
from .errors import *  # noqa: F401,F403
from .generators import CardDist, gen_batch, gen_random
from .hypergraph import ChangeBatch, DynHypergraph
from .io import export_edge_lines, export_simplicial, ingest
from .triads import (NUM_CLASSES, TemporalParams, TriadCounts,
                     build_class_table, classify_triple, count_all,
                     count_hyperedge_triads, count_temporal_triads,
                     count_vertex_triads)

__version__ = "0.1.0"
