"""
LPDP: longest path by partitioning, block preprocessing and combination
"""

from .combine import RootAnswer, build_partition, combine_root, preprocess_leaves, reconstruct, solve_lpdp
from .preprocess import CombineState, SegmentSearch, preprocess_block
from .table import BlockTable, Matching, Witness, canonical_matching
from .views import BlockView, BoundaryVertex, build_leaf_views, build_views, terminal_nodes

__all__ = [
    "BlockTable",
    "BlockView",
    "BoundaryVertex",
    "CombineState",
    "Matching",
    "RootAnswer",
    "SegmentSearch",
    "Witness",
    "build_leaf_views",
    "build_partition",
    "build_views",
    "canonical_matching",
    "combine_root",
    "preprocess_block",
    "preprocess_leaves",
    "reconstruct",
    "solve_lpdp",
    "terminal_nodes",
]
