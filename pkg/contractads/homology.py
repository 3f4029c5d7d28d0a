"""
Contractads Homology - Bar complexes of degree-0 contractads and Koszul-complex Euler characteristics.

The bar complex of a presented contractad at a graph has a basis of stable
admissible trees whose vertices carry normal monomials on their input
graphs. The differential contracts internal edges one at a time, composes
the two decorations and reduces the result to normal form.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Tuple, Union

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from . import linalg
from .algebra import Element, TreeMonomial, compose
from .errors import BoundExceededError, ChainComplexError, ContractadError, UnsupportedError
from .graph_core import Graph, graph_partitions
from .grobner import GrobnerBasis, Presentation, certified_basis, normal_form, normal_monomials
from .trees import AdmissibleTree, Node, contract_tree_edge, enumerate_admissible_trees, input_graph, low_of

logger = logging.getLogger(__name__)

MAX_BAR_VERTICES = 6


@dataclass(frozen=True)
class BarElement:
    """A stable tree with one normal monomial per vertex, listed in DFS order."""
    tree: AdmissibleTree
    decorations: Tuple[TreeMonomial, ...]

    def decoration_map(self) -> Dict[frozenset, TreeMonomial]:
        return {v.leaves: d for v, d in zip(self.tree.internal_nodes(), self.decorations)}

    def __str__(self) -> str:
        if all(len(str(d)) <= 1 for d in self.decorations):
            return str(self.tree)
        return f"{self.tree} [{'; '.join(str(d) for d in self.decorations)}]"


@dataclass
class ChainComplex:
    """A bounded cochain complex over QQ; differential[s] maps degree s to s+1."""
    degrees: List[int]
    bases: Dict[int, List] = field(default_factory=dict)
    differentials: Dict[int, DomainMatrix] = field(default_factory=dict)
    verified: bool = False

    def dimension(self, s: int) -> int:
        return len(self.bases.get(s, []))

    def differential(self, s: int) -> DomainMatrix:
        if s in self.differentials:
            return self.differentials[s]
        return DomainMatrix.zeros((self.dimension(s + 1), self.dimension(s)), QQ)

    def verify(self) -> None:
        """Check d∘d = 0 and the matrix shapes; raises ChainComplexError otherwise."""
        for s in self.degrees:
            d = self.differential(s)
            if d.shape != (self.dimension(s + 1), self.dimension(s)):
                raise ChainComplexError(
                    f"differential in degree {s} has shape {d.shape}, "
                    f"expected {(self.dimension(s + 1), self.dimension(s))}"
                )
            nxt = self.differential(s + 1)
            if not linalg.is_zero_product(nxt, d):
                raise ChainComplexError(f"d∘d does not vanish on degree {s}")
        self.verified = True

    def ranks(self) -> Dict[int, int]:
        return {s: self.differential(s).rank() if 0 not in self.differential(s).shape else 0
                for s in self.degrees}

    def euler_characteristic(self) -> int:
        return sum((-1) ** s * self.dimension(s) for s in self.degrees)


def homology_ranks(c: ChainComplex) -> List[int]:
    """Homology ranks for each degree in c.degrees; verifies d∘d = 0 first."""
    if not c.verified:
        c.verify()
    ranks = c.ranks()
    result = []
    for s in c.degrees:
        result.append(c.dimension(s) - ranks[s] - ranks.get(s - 1, 0))
    return result


def euler_characteristic(c: ChainComplex) -> int:
    return c.euler_characteristic()


def _parent_of(t: AdmissibleTree, e: Node) -> Node:
    for v in t.internal_nodes():
        if any(isinstance(c, Node) and c.leaves == e.leaves for c in v.children):
            return v
    raise ContractadError(f"{e} has no parent in {t}")


def _merge_tube(parent: Node, e: Node) -> frozenset:
    """Positions of e's children among the inputs of the merged vertex."""
    kids = []
    for c in parent.children:
        if isinstance(c, Node) and c.leaves == e.leaves:
            kids.extend(("inner", k) for k in e.children)
        else:
            kids.append(("outer", c))
    kids.sort(key=lambda item: low_of(item[1]))
    return frozenset(i for i, (side, _) in enumerate(kids, start=1) if side == "inner")


def bar_complex(p: Presentation, g: Graph, gb: Optional[GrobnerBasis] = None) -> ChainComplex:
    """
    The bar complex of a degree-0 presented contractad at g, graded by syzygy degree.

    A basis element with k vertices sits in degree n - 1 - k; the differential
    is the signed sum of single-edge contractions.
    """
    if any(x.degree != 0 for x in p.signature.generators):
        raise UnsupportedError(f"bar complexes of graded generators ({p.name}) are not supported")
    if g.n > MAX_BAR_VERTICES:
        raise BoundExceededError("bar complex vertex count", g.n, MAX_BAR_VERTICES)
    gb = gb or certified_basis(p, bound=(g.n, g.n - 1))

    normal_cache: Dict[Graph, List[TreeMonomial]] = {}

    def normals(h: Graph) -> List[TreeMonomial]:
        if h not in normal_cache:
            normal_cache[h] = normal_monomials(gb, h)
        return normal_cache[h]

    bases: Dict[int, List[BarElement]] = {}
    for t in enumerate_admissible_trees(g, "stable"):
        options = [normals(input_graph(t, v)) for v in t.internal_nodes()]
        for decorations in itertools.product(*options):
            s = g.n - 1 - t.weight
            bases.setdefault(s, []).append(BarElement(t, tuple(decorations)))
    degrees = list(range(0, max(bases, default=0) + 1))
    index = {s: {b: i for i, b in enumerate(bases.get(s, []))} for s in degrees}

    differentials: Dict[int, DomainMatrix] = {}
    for s in degrees:
        target = index.get(s + 1, {})
        rows: List[Dict[int, Fraction]] = [dict() for _ in range(len(target))]
        for j, b in enumerate(bases.get(s, [])):
            decor = b.decoration_map()
            for e in b.tree.internal_edges():
                parent = _parent_of(b.tree, e)
                merged_tree, position = contract_tree_edge(b.tree, e)
                merged_vertex = merged_tree.root.find(parent.leaves)
                host = input_graph(merged_tree, merged_vertex)
                tube = _merge_tube(parent, e)
                sign, composite = compose(decor[parent.leaves], decor[e.leaves], host, tube, p.signature)
                reduced = normal_form(Element.monomial(composite, sign), gb)
                base = -1 if (position - 1) % 2 else 1
                for m, c in reduced.terms.items():
                    new = dict(decor)
                    del new[e.leaves]
                    new[parent.leaves] = m
                    image = BarElement(merged_tree, tuple(new[v.leaves] for v in merged_tree.internal_nodes()))
                    i = target[image]
                    rows[i][j] = rows[i].get(j, Fraction(0)) + base * c
        if target:
            differentials[s] = linalg.matrix(rows, len(bases.get(s, [])))

    complex_ = ChainComplex(degrees, bases, differentials)
    complex_.verify()
    logger.info("bar complex of %s at %s: dimensions %s", p.name, g,
                [complex_.dimension(s) for s in degrees])
    return complex_


Oracle = Union[Callable[[Graph], Optional[int]], Mapping[Graph, int]]


def _lookup(oracle: Oracle, h: Graph, which: str) -> int:
    value = oracle.get(h) if isinstance(oracle, Mapping) else oracle(h)
    if value is None:
        raise ContractadError(f"the {which} dimension oracle has no value at {h}")
    return value


def koszul_euler(dims_dual: Oracle, dims_primal: Oracle, g: Graph) -> int:
    """
    Euler characteristic of the twisted product Q∘P at g.

    Sum over graph partitions I of (-1)^(|I|-1) dim Q(g/I) times the product
    of dim P over the blocks.
    """
    total = 0
    for partition in graph_partitions(g):
        term = _lookup(dims_dual, g.quotient(partition.blocks), "dual")
        for block in partition.blocks:
            term *= _lookup(dims_primal, g.induced(block)[0], "primal")
        total += (-1) ** (len(partition.blocks) - 1) * term
    logger.debug("Koszul Euler characteristic at %s: %d", g, total)
    return total
