"""Graph automorphism search and canonical labeling."""

from .canonical import CanonicalResult, decomposition_sequence, search_canonical
from .graph import (Graph, ParseError, Permutation, apply_permutation, figure1_graph,
                    is_automorphism, matching_graph, parse_cnf, parse_dimacs, random_relabel)
from .partition import OPP, OppClass, OrderedPartition
from .pipeline import PipelineResult, canonical_label_combined
from .symmetry import OrbitPartition, SymmetryReport, search_automorphisms

__version__ = "0.1.0"
