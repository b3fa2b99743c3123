"""Structural-controllability node classification and control-mode alteration by edge removal."""

from .alter import (
    AlterReport,
    RemovalPlan,
    VerificationError,
    alter_iterated,
    apply_and_verify,
    find_alternating_cycles,
    to_centralized,
    to_distributed,
)
from .control import Classification, ControlComponents, classify, components, driver_reach
from .digraph import DiGraph, parse_edge_list, read_edge_list, remove_edges, write_edge_list
from .generate import GenParams, generate
from .matching import Matching, has_augmenting_path, maximum_matching
from .oracle import OracleResult, enumerate_matchings

__version__ = "0.1.0"

__all__ = [
    "AlterReport",
    "Classification",
    "ControlComponents",
    "DiGraph",
    "GenParams",
    "Matching",
    "OracleResult",
    "RemovalPlan",
    "VerificationError",
    "alter_iterated",
    "apply_and_verify",
    "classify",
    "components",
    "driver_reach",
    "enumerate_matchings",
    "find_alternating_cycles",
    "generate",
    "has_augmenting_path",
    "maximum_matching",
    "parse_edge_list",
    "read_edge_list",
    "remove_edges",
    "to_centralized",
    "to_distributed",
    "write_edge_list",
]
