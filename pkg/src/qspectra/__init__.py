"""Exact spectra of small graphs and exhaustive checks of spectral characterisations."""

__version__ = "0.1.0"

from ._config import MAX_ORDER, CapacityError
from ._kernels import BACKEND
from .cospectral import Census, CensusStore, classify, determination_status, load_census, mates, save_census
from .enumeration import are_isomorphic, canonical_code, enumerate_graphs, graph_from_code
from .graph import Graph, union_with_isolates_and_matching
from .graph6 import decode_graph6, encode_graph6
from .linalg import CharPoly, build_matrix, determinant, graph_char_poly, largest_root, spectral_moments
from .theorems import THEOREM_IDS, run_theorem

__all__ = [
    "BACKEND", "MAX_ORDER", "CapacityError", "Census", "CensusStore", "CharPoly", "Graph",
    "THEOREM_IDS", "are_isomorphic", "build_matrix", "canonical_code", "classify",
    "decode_graph6", "determinant", "determination_status", "encode_graph6", "enumerate_graphs",
    "graph_char_poly", "graph_from_code", "largest_root", "load_census", "mates", "run_theorem",
    "save_census", "spectral_moments", "union_with_isolates_and_matching",
]
