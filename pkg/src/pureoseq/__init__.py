"""Constructive pure O-sequence certificates for triconed graphs.

Spanning trees of a triconed graph are mapped, through marked forests and
edge-weighted forests of the reduced graph, onto monomials.  The resulting
monomial set is checked to be a pure order ideal whose degree sequence is
the h-vector of the graphic matroid.
"""

from pureoseq.errors import PureOSeqError
from pureoseq.graph_core import Graph, parse_graph, reduce_to_core, spanning_trees
from pureoseq.activity import EdgeOrder, h_vector, lex_min_basis, passive_set
from pureoseq.tricone import TriconeLabeling, build_labeling, find_special_triples
from pureoseq.marked import MarkedForest, phi1, phi1_inv
from pureoseq.weighted import Monomial, phi2, phi2_inv
from pureoseq.multicomplex import VerificationReport, image_of, verify_stanley

__version__ = "0.1.0"

__all__ = [
    "EdgeOrder",
    "Graph",
    "MarkedForest",
    "Monomial",
    "PureOSeqError",
    "TriconeLabeling",
    "VerificationReport",
    "build_labeling",
    "find_special_triples",
    "h_vector",
    "image_of",
    "lex_min_basis",
    "parse_graph",
    "passive_set",
    "phi1",
    "phi1_inv",
    "phi2",
    "phi2_inv",
    "reduce_to_core",
    "spanning_trees",
    "verify_stanley",
]
