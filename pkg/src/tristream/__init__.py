"""Streaming triangle samplers with an exact brute-force oracle harness.

Four samplers: one- and three-pass over edge-arrival streams, and one- and
three-pass over adjacency-list streams, plus the trial runner that checks
their output distributions and space budgets against the oracle.
"""
from .adjacency_list import (
    AlgoParams,
    HeavyRecord,
    HeavySummary,
    LightRecord,
    SampHeavyHelper,
    SampLightHelper,
    al1_run,
    al3_run,
    sample_heavy_triangle,
    sample_light_triangle,
    sampheavy_helper,
    samplight_helper,
)
from .edge_arrival import (
    EA1Instance,
    EA3Instance,
    ea1_instance,
    ea1_run,
    ea3_instance,
    ea3_run,
    instance_count,
)
from .evaluate import (
    AlgoSpec,
    BudgetCheck,
    ToleranceSpec,
    TrialReport,
    TriangleEstimate,
    build_algo_spec,
    chernoff_tolerance,
    estimate_T_by_sampling,
    l1_between,
    l1_to_uniform,
    run_trials,
    space_budget_check,
)
from .graphs import (
    ChargeMap,
    EdgeTriangleStats,
    Graph,
    GraphError,
    TauClassification,
    canonical_edge,
    charge_by_degree_order,
    charge_by_stream_order,
    classify_tau,
    complete_graph,
    enumerate_triangles,
    gnp_graph,
    load_graph,
    planted_graph,
    triangles_per_edge,
    write_graph,
)
from .results import SampleResult, SpaceStats, SpaceTracker
from .sampling import (
    KEEP_ALL,
    WITH_REPLACEMENT,
    WITHOUT_REPLACEMENT,
    Reservoir,
    SingleSlot,
    WeightedReservoir,
    bernoulli,
    make_rng,
    trial_rngs,
)
from .streams import (
    AL,
    EA,
    VA,
    Stream,
    StreamError,
    StreamFactory,
    make_al_stream,
    make_ea_stream,
    make_va_stream,
    read_stream,
    validate_stream,
    write_stream,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
