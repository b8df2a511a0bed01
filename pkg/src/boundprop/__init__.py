"""Anytime interval bounds on belief-network marginals.

Propagates interval-valued messages over an incrementally growing
active subset of a network, so every iteration yields bounds that are
guaranteed to contain the exact posterior marginal of the query node,
and the bounds tighten as more of the network is brought in.
"""

from .intervals import (
    COHERENCE_TOL,
    CoherenceError,
    ConflictingEvidenceError,
    Interval,
    IntervalVector,
    incremental_sort_cursor,
    iv_add,
    iv_mul,
    normalize,
    simplex_dot,
    vacuous,
)
from .network import (
    BeliefNetwork,
    Evidence,
    LoopCluster,
    NetworkFormatError,
    Node,
    d_separated,
    find_loop_clusters,
    is_polytree,
    parse_network,
    relevant_set,
    serialize_network,
)
from .engine import (
    ActiveSet,
    BreadthFirst,
    DelayedLoops,
    Message,
    MessageCache,
    NoLoops,
    QueryResult,
    StopCriterion,
    answer_query,
    bel_hat,
    cache_update,
    expand,
    lambda_hat,
    lambda_msg,
    pi_hat,
    pi_msg,
    propagate,
)
from .loops import (
    ConditioningTable,
    CutsetAssignment,
    CutsetOverflowError,
    clusters_by_coverage,
    condition_cluster,
    propagate_mixed,
    select_loop_cutset,
)
from .oracle import enumerate_marginal, polytree_exact

__version__ = "0.1.0"

__all__ = [
    "ActiveSet",
    "BeliefNetwork",
    "BreadthFirst",
    "COHERENCE_TOL",
    "CoherenceError",
    "ConditioningTable",
    "ConflictingEvidenceError",
    "CutsetAssignment",
    "CutsetOverflowError",
    "DelayedLoops",
    "Evidence",
    "Interval",
    "IntervalVector",
    "LoopCluster",
    "Message",
    "MessageCache",
    "NetworkFormatError",
    "Node",
    "NoLoops",
    "QueryResult",
    "StopCriterion",
    "answer_query",
    "bel_hat",
    "cache_update",
    "clusters_by_coverage",
    "condition_cluster",
    "d_separated",
    "enumerate_marginal",
    "expand",
    "find_loop_clusters",
    "incremental_sort_cursor",
    "is_polytree",
    "iv_add",
    "iv_mul",
    "lambda_hat",
    "lambda_msg",
    "normalize",
    "parse_network",
    "pi_hat",
    "pi_msg",
    "polytree_exact",
    "propagate",
    "propagate_mixed",
    "relevant_set",
    "select_loop_cutset",
    "serialize_network",
    "simplex_dot",
    "vacuous",
]
