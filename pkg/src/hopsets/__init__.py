"""Directed shortcut sets and (1+eps)-hopsets with pruned recursive constructions,
brute-force oracles and a logical work/span meter."""
from ._kernels import BACKEND
from .augment import AugmentSet
from .errors import InputError, OracleCapError, ParseError, PreconditionError
from .graph import (DiGraph, VertexSubset, WDiGraph, from_edge_list, gen_layered, gen_path, gen_random_dag,
                    gen_random_digraph, gen_spined_dag, induced, randomize_weights, scc_condense, union)
from .hopset import HopsetParams, assign_levels, cfr_build, choose_eta, folklore_hopset, hopset_rho_preset
from .parexec import CostMeter, scoped_parallel, set_workers
from .search import UNREACHED, bfs, dijkstra, hop_limited_bf, par_bfs, rounded_bounded_search, trunc_sssp
from .shortcut import BuildParams, build_shortcut, folklore_shortcut, jls_build, shortcut_rho_preset
from .verify import VerifyReport, density_sweep, tc_oracle, verify_hopset, verify_shortcut

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "AugmentSet", "InputError", "OracleCapError", "ParseError", "PreconditionError",
    "DiGraph", "VertexSubset", "WDiGraph", "from_edge_list", "gen_layered", "gen_path", "gen_random_dag",
    "gen_random_digraph", "gen_spined_dag", "induced", "randomize_weights", "scc_condense", "union",
    "HopsetParams", "assign_levels", "cfr_build", "choose_eta", "folklore_hopset", "hopset_rho_preset",
    "CostMeter", "scoped_parallel", "set_workers",
    "UNREACHED", "bfs", "dijkstra", "hop_limited_bf", "par_bfs", "rounded_bounded_search", "trunc_sssp",
    "BuildParams", "build_shortcut", "folklore_shortcut", "jls_build", "shortcut_rho_preset",
    "VerifyReport", "density_sweep", "tc_oracle", "verify_hopset", "verify_shortcut",
]
