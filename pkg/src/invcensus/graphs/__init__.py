"""Graphs: construction, canonical labelling, automorphisms, symmetry predicates."""

from .build import (
    cayley_graph,
    complete_bipartite_graph,
    complete_graph,
    coset_graph,
    cycle_graph,
    hypercube_graph,
    permgroup_to_table,
    petersen_graph,
    prism_graph,
    tutte_coxeter_graph,
    voltage_cover,
)
from .canon import are_isomorphic_graphs, automorphism_group, canonical_certificate, canonical_form
from .core import Graph, decode_graph6, encode_graph6, read_graph6_file
from .predicates import (
    SArcReport,
    count_s_arcs,
    is_grr,
    is_vertex_transitive,
    s_arc_transitivity,
    transitive_subgroup_gens,
    vertex_stabilizer_order,
)

__all__ = [
    "Graph",
    "SArcReport",
    "are_isomorphic_graphs",
    "automorphism_group",
    "canonical_certificate",
    "canonical_form",
    "cayley_graph",
    "complete_bipartite_graph",
    "complete_graph",
    "coset_graph",
    "count_s_arcs",
    "cycle_graph",
    "decode_graph6",
    "encode_graph6",
    "hypercube_graph",
    "is_grr",
    "is_vertex_transitive",
    "permgroup_to_table",
    "petersen_graph",
    "prism_graph",
    "read_graph6_file",
    "s_arc_transitivity",
    "transitive_subgroup_gens",
    "tutte_coxeter_graph",
    "vertex_stabilizer_order",
    "voltage_cover",
]
