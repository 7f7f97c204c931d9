"""Assignment-based anticlustering for tabular data."""

from .assignment import Assignment, brute_force_max_assignment, solve_max_assignment
from .baselines import random_partition, random_partition_with_categories
from .dataset import (CategorySpec, DataError, FeatureMatrix, load_csv, one_hot,
                      preprocess, save_csv, scale_unit_interval, standardize)
from .hierarchy import HierarchyPlan, balanced_plan, parse_hierarchy, run_hierarchical
from .metrics import DiversityReport, brute_force_pairwise, evaluate, min_max_ratio
from .ordering import (BatchPlan, GlobalOrdering, build_base_batches, build_batches,
                       build_category_batches, build_interleaved_batches,
                       compute_global_ordering, squared_euclidean)
from .solver import (AnticlusterState, InfeasibleError, Partition, anticluster,
                     run_aba, update_centroid)

__version__ = "0.1.0"
