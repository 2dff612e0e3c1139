"""Pareto-optimal GHZ-state distribution over noisy quantum networks."""

from .algebra import (
    BranchMetrics,
    Metric,
    ParetoSet,
    PathError,
    PathSignature,
    contract,
    dominates,
    empty_path,
    extend_path,
    pareto_insert,
    path_signature,
)
from .ghz import (
    DistributionTree,
    GhzFidelitySignature,
    RateSignature,
    TreeFidelityAccumulator,
    ghz_extend,
    star_fidelity,
    star_rate,
    tree_fidelity,
    tree_rate,
)
from .mosp import reconstruct, shortest_paths
from .netgen import GeneratorConfig, generate, sample_terminals
from .netmodel import (
    LinkParams,
    Network,
    NetworkError,
    NodeParams,
    TerminalSet,
    dump_network,
    load_network,
    validate_terminals,
)
from .star import StarSolution, feasibility_check, t_star_exact

__version__ = "0.1.0"
