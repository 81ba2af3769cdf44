"""Edge replacement systems, their limit spaces and rearrangement groups."""
from .catalog import catalog, gluing_identities, names
from .complex import (CharacteristicMap, FinftyReport, KVertex, canonical_vertex, characteristic_maps,
                      contract, contraction_complex, cube, descending_link, enumerate_family,
                      expansion_neighbors, finfty_evidence, least_upper_bound, max_overlap, precedes,
                      rank, source_tree, to_rearrangement)
from .fileformat import (FormatError, parse_diagram_file, parse_graph, parse_system, serialize_diagram_file,
                         serialize_graph, serialize_system)
from .graph_core import (Edge, Graph, GraphMap, automorphisms, canonical_form, certificate, is_isomorphic,
                         isomorphisms)
from .homology import FlagComplex, betti, density, is_grounded, is_k_ground
from .limit_space import (PeriodicAddress, cell_boundary, glue_equivalent, parse_periodic, periodic,
                          represented_vertex)
from .rearrangement import (NotComposable, PairDiagram, Rearrangement, apply, compose, element_order,
                            expand_pair, identity, invert, make_diagram, reduce)
from .replacement import (Frontier, ReplacementError, ReplacementSystem, Rule, SizeCapExceeded, expand,
                          full_expansion, make_frontier, realize, validate_system)

__version__ = "0.1.0"
