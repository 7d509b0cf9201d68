from .benchmarks import parse_taillard, parse_tsplib, write_taillard
from .generate import (
    default_capacity,
    distance_matrix,
    gen_batch,
    gen_instance,
    nearest_neighbor_tour_length,
    op_distance_limit,
)
from .io import (
    SCHEMA_VERSION,
    ReferenceSolution,
    instance_from_json,
    instance_to_json,
    load_instance,
    load_reference,
    reference_from_json,
    reference_to_json,
    save_instance,
    save_reference,
    solution_from_dict,
    solution_to_dict,
)
from .types import (
    CLUSTERED,
    GM2,
    GM3,
    GRAPH_KINDS,
    MIXED,
    ROUTING_KINDS,
    SCHEDULING_KINDS,
    SENSE_BY_KIND,
    SOLUTION_TYPE_BY_KIND,
    UNIFORM,
    Distribution,
    GenConfig,
    GraphFamily,
    GraphInstance,
    Instance,
    JobOrder,
    MachineSchedules,
    ObjectiveValue,
    ProblemKind,
    Route,
    RouteSet,
    RoutingInstance,
    SchedulingInstance,
    Sense,
    Solution,
    VertexSet,
    euclid,
)

__all__ = [
    "CLUSTERED",
    "Distribution",
    "GM2",
    "GM3",
    "GRAPH_KINDS",
    "GenConfig",
    "GraphFamily",
    "GraphInstance",
    "Instance",
    "JobOrder",
    "MIXED",
    "MachineSchedules",
    "ObjectiveValue",
    "ProblemKind",
    "ROUTING_KINDS",
    "ReferenceSolution",
    "Route",
    "RouteSet",
    "RoutingInstance",
    "SCHEDULING_KINDS",
    "SCHEMA_VERSION",
    "SENSE_BY_KIND",
    "SOLUTION_TYPE_BY_KIND",
    "SchedulingInstance",
    "Sense",
    "Solution",
    "UNIFORM",
    "VertexSet",
    "default_capacity",
    "distance_matrix",
    "euclid",
    "gen_batch",
    "gen_instance",
    "instance_from_json",
    "instance_to_json",
    "load_instance",
    "load_reference",
    "nearest_neighbor_tour_length",
    "op_distance_limit",
    "parse_taillard",
    "parse_tsplib",
    "reference_from_json",
    "reference_to_json",
    "save_instance",
    "save_reference",
    "solution_from_dict",
    "solution_to_dict",
    "write_taillard",
]
