"""Exact-arithmetic toolkit for buyer-to-seller disclosure games."""

from .core import (
    SILENT,
    ConditionedInstance,
    DiscreteInstance,
    GuardExceeded,
    IntervalPartition,
    Rational,
    ValidationError,
    condition_on_messages,
    enumerate_set_partitions,
    parse_instance,
    parse_rational,
    serialize_instance,
)
from .dpconnected import (
    SingleBuyerInstance,
    brute_force_connected,
    buyer_utility,
    inapproximability_instance,
    optimal_connected,
)
from .game import (
    GameEvaluator,
    GameOutcome,
    connected_partitions,
    evaluate_profile,
    full_disclosure_profile,
    no_disclosure_profile,
    rare_lows_regression,
    search_profiles,
    search_to_csv,
)
from .hardness import (
    PartitionProblem,
    ReductionReport,
    reduce_to_buyer_opt,
    solve_partition_bruteforce,
    sweep_size_lists,
    verify_reduction,
)
from .lpmech import (
    LPSolution,
    Mechanism,
    build_lp,
    mechanism_to_csv,
    posted_menu_view,
    solve_instance,
    uniform_grid_instance,
    verify_mechanism,
)
from .simplex import ExactSimplex, LpInfeasible, LpUnbounded
from .svgplot import allocation_svg
from .uniform2 import (
    AuctionOutcome,
    UniformSegment,
    efficiency_witness,
    full_disclosure_vs_silent_limit,
    myerson_outcome,
    pair_surplus,
    profile_surplus,
    surplus_to_csv,
    threshold_surplus,
    virtual_value,
    zeno_partition,
)

__all__ = [
    "SILENT",
    "AuctionOutcome",
    "ConditionedInstance",
    "DiscreteInstance",
    "ExactSimplex",
    "GameEvaluator",
    "GameOutcome",
    "GuardExceeded",
    "IntervalPartition",
    "LPSolution",
    "LpInfeasible",
    "LpUnbounded",
    "Mechanism",
    "PartitionProblem",
    "Rational",
    "ReductionReport",
    "SingleBuyerInstance",
    "UniformSegment",
    "ValidationError",
    "allocation_svg",
    "brute_force_connected",
    "build_lp",
    "buyer_utility",
    "condition_on_messages",
    "connected_partitions",
    "efficiency_witness",
    "enumerate_set_partitions",
    "evaluate_profile",
    "full_disclosure_profile",
    "full_disclosure_vs_silent_limit",
    "inapproximability_instance",
    "mechanism_to_csv",
    "myerson_outcome",
    "no_disclosure_profile",
    "optimal_connected",
    "pair_surplus",
    "parse_instance",
    "parse_rational",
    "posted_menu_view",
    "profile_surplus",
    "rare_lows_regression",
    "reduce_to_buyer_opt",
    "search_profiles",
    "search_to_csv",
    "solve_instance",
    "solve_partition_bruteforce",
    "surplus_to_csv",
    "sweep_size_lists",
    "threshold_surplus",
    "uniform_grid_instance",
    "verify_mechanism",
    "verify_reduction",
    "virtual_value",
    "zeno_partition",
]

__version__ = "0.1.0"
