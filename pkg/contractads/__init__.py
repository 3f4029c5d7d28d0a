"""
Contractads - Exact computer algebra for operads indexed by connected graphs.

Graphs and tubes, admissible trees, tree monomials and monomial orders,
Gröbner bases with the PBW criterion, Koszul duals, bar homology and the
Orlik-Solomon algebra of graphic arrangements.
"""

__version__ = "1.0.0"

from .errors import ContractadError, GraphError, CertificateError, BoundExceededError
from .graph_core import Graph, parse_graph, make_family, moebius, graph_partitions
from .trees import AdmissibleTree, enumerate_admissible_trees
from .algebra import Element, Generator, Signature, TreeMonomial
from .orders import MonomialOrder
from .grobner import Presentation, GrobnerBasis, buchberger, pbw_check, koszul_dual, normal_monomials
from .presets import PresetLoader, preset
from .homology import bar_complex, koszul_euler
from .orlik_solomon import nbc_basis, os_hilbert, os_reduce
from .report import Report, ReportValidator, ValidationResult

__all__ = [
    "ContractadError",
    "GraphError",
    "CertificateError",
    "BoundExceededError",
    "Graph",
    "parse_graph",
    "make_family",
    "moebius",
    "graph_partitions",
    "AdmissibleTree",
    "enumerate_admissible_trees",
    "Element",
    "Generator",
    "Signature",
    "TreeMonomial",
    "MonomialOrder",
    "Presentation",
    "GrobnerBasis",
    "buchberger",
    "pbw_check",
    "koszul_dual",
    "normal_monomials",
    "PresetLoader",
    "preset",
    "bar_complex",
    "koszul_euler",
    "nbc_basis",
    "os_hilbert",
    "os_reduce",
    "Report",
    "ReportValidator",
    "ValidationResult",
]
