"""Causal graph dynamics: synchronous local-rule evolution of port graphs."""

from cgd.errors import (
    AlphabetMismatch,
    BadParameters,
    CGDError,
    InconsistentUnion,
    InvariantViolation,
    MalformedDisk,
    NonInjectiveRenaming,
    ParseError,
    PortBudgetExceeded,
    RadiusNotPowerOfTwo,
    SizeGuardExceeded,
    SpaceTooLarge,
    UnknownVertex,
)
from cgd.names import Renaming, VertexName, name
from cgd.graph import (
    Conflict,
    Disk,
    Graph,
    PointedGraph,
    Port,
    consistent,
    disk,
    find_conflict,
    induced_subgraph,
    neighbors,
    rename,
    union,
    union_all,
)
from cgd.iso import isomorphic

__all__ = [
    "AlphabetMismatch",
    "BadParameters",
    "CGDError",
    "Conflict",
    "Disk",
    "Graph",
    "InconsistentUnion",
    "InvariantViolation",
    "MalformedDisk",
    "NonInjectiveRenaming",
    "ParseError",
    "PointedGraph",
    "Port",
    "PortBudgetExceeded",
    "RadiusNotPowerOfTwo",
    "Renaming",
    "SizeGuardExceeded",
    "SpaceTooLarge",
    "UnknownVertex",
    "VertexName",
    "consistent",
    "disk",
    "find_conflict",
    "induced_subgraph",
    "isomorphic",
    "name",
    "neighbors",
    "rename",
    "union",
    "union_all",
]
