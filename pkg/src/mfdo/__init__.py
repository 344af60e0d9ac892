"""Distance and reachability oracles over piece decompositions of sparse digraphs."""

from .graph import (
    DiGraph,
    Edge,
    apsp_reference,
    bottleneck_apsp_reference,
    generate_cycle,
    generate_grid,
    generate_path,
    load_graph,
    reverse,
    sssp,
)
from .rdivision import Piece, RDivision, build_r_division, validate_r_division
from .dynstrings import StringId, StringStore
from .unweighted import UnweightedOracle, build_unweighted_oracle
from .weighted import MinFindView, WeightedOracle, build_weighted_oracle, min_find
from .decremental import (
    BottleneckOracle,
    DecReachOracle,
    ESTree,
    build_bottleneck_oracle,
    new_dec_oracle,
)
from .approx import ApproxOracle, build_approx, query_approx
from .oraclefile import load_oracle, read_oracle_file, write_oracle_file

__all__ = [
    "StringId",
    "StringStore",
    "UnweightedOracle",
    "build_unweighted_oracle",
    "MinFindView",
    "WeightedOracle",
    "build_weighted_oracle",
    "min_find",
    "BottleneckOracle",
    "DecReachOracle",
    "ESTree",
    "build_bottleneck_oracle",
    "new_dec_oracle",
    "ApproxOracle",
    "build_approx",
    "query_approx",
    "load_oracle",
    "read_oracle_file",
    "write_oracle_file",
    "DiGraph",
    "Edge",
    "apsp_reference",
    "bottleneck_apsp_reference",
    "generate_cycle",
    "generate_grid",
    "generate_path",
    "load_graph",
    "reverse",
    "sssp",
    "Piece",
    "RDivision",
    "build_r_division",
    "validate_r_division",
]
