"""Exact linear-region counting for ReLU networks."""

__version__ = "0.1.0"

from .census import (
    Limits,
    ResourceLimitExceeded,
    count_regions,
    enumerate_regions,
    exhaustive_search,
    k_region_decide,
    k_region_decision,
    networks_equivalent,
    proper_regions,
    region_graph,
    search_affine_piece,
)
from .gadgets import CnfFormula, parse_dimacs
from .lp import BACKEND, LinearConstraintSystem, lp_solve, polyhedron_dim, region_status
from .model import AffineFunction, Layer, Network, evaluate, pattern_at
from .netio import load_network, parse_network, serialize_network
from .report import CensusReport
from .shallow import effective_arrangement, is_affine_shallow, shallow_census

__all__ = [
    "__version__",
    "AffineFunction",
    "BACKEND",
    "CensusReport",
    "CnfFormula",
    "Layer",
    "Limits",
    "LinearConstraintSystem",
    "Network",
    "ResourceLimitExceeded",
    "count_regions",
    "effective_arrangement",
    "enumerate_regions",
    "evaluate",
    "exhaustive_search",
    "is_affine_shallow",
    "k_region_decide",
    "k_region_decision",
    "load_network",
    "lp_solve",
    "networks_equivalent",
    "parse_dimacs",
    "parse_network",
    "pattern_at",
    "polyhedron_dim",
    "proper_regions",
    "region_graph",
    "region_status",
    "search_affine_piece",
    "serialize_network",
    "shallow_census",
]
