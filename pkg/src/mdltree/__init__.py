"""Decision-tree induction with charged continuous tests."""

__version__ = "0.1.0"

from .data import AttributeDecl, Case, Dataset, Schema, class_distribution, parse_data, parse_names, partition_by_test
from .metrics import Policy, SplitCandidate, best_threshold, boundary_thresholds, continuous_penalty, enumerate_thresholds, gain, info, split_info
from .tree import GrowParams, classify, grow, induce, select_split, tree_size
from .prune import prune
