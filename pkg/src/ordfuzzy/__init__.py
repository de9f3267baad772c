"""Fuzzy clustering of ordinal-scale data with shared membership and likelihood functions."""

from ordfuzzy.core import (
    DataError,
    OrdinalDataset,
    RankScale,
    Violation,
    check_memberships,
    hard_assignment,
    validate_dataset,
)
from ordfuzzy.fuzzify import (
    FuzzificationTable,
    MembershipFunction,
    build_membership_fn,
    build_table,
    build_tables,
    fuzzify_dataset,
    weighted_mode,
)
from ordfuzzy.fcm import DegenerateClusterError, FcmConfig, FcmResult, fcm_centroids, fcm_memberships, fcm_run
from ordfuzzy.lmfcm import (
    LmfcmConfig,
    LmfcmResult,
    LmfcmState,
    dissimilarity,
    likelihood,
    lmfcm_memberships,
    lmfcm_run,
    neighbor_reassign,
    objective,
    update_probabilities,
)
from ordfuzzy.evaluation import BenchmarkReport, OrdinalizationSpec, accuracy, ordinalize, run_benchmark

__version__ = "0.1.0"
