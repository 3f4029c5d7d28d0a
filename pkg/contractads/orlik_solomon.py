"""
Contractads Orlik-Solomon - The cohomology algebra of a graphic arrangement.

Elements are combinations of exterior monomials ω_S stored with their edges
sorted by an EdgeOrder; reduction straightens every monomial onto the nbc
basis. Generators have degree 1 by default; E_n bookkeeping passes the
degree n-1 explicitly.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .algebra import TreeMonomial, comb, koszul_sign
from .errors import ContractadError, GraphError, HostMismatchError
from .graph_core import Edge, Graph, graph_partitions, moebius
from .trees import Child, Node, graft, leaves_of

logger = logging.getLogger(__name__)

EdgeSet = Tuple[Edge, ...]


@dataclass(frozen=True)
class EdgeOrder:
    """A total order on the edges of a graph."""
    edges: Tuple[Edge, ...]
    rank: Dict[Edge, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rank", {e: i for i, e in enumerate(self.edges)})

    @staticmethod
    def default(g: Graph) -> "EdgeOrder":
        """Lexicographic on (min endpoint, max endpoint)."""
        return EdgeOrder(tuple(g.sorted_edges()))

    @staticmethod
    def parse(g: Graph, text: str) -> "EdgeOrder":
        """Read "1-2,1-4,..." listing every edge of g once."""
        edges = []
        for token in text.split(","):
            try:
                u, v = (int(x) for x in token.strip().split("-"))
            except ValueError:
                raise GraphError(f"malformed edge {token!r} in edge order {text!r}")
            edges.append((min(u, v), max(u, v)))
        if sorted(edges) != g.sorted_edges():
            raise GraphError(f"edge order {text!r} is not a permutation of the edges of {g}")
        return EdgeOrder(tuple(edges))

    def sort(self, edges: Iterable[Edge]) -> Tuple[int, Optional[EdgeSet]]:
        """(number of inversions, sorted edges), or (0, None) on a repeated edge."""
        edges = list(edges)
        if len(set(edges)) != len(edges):
            return 0, None
        try:
            ranks = [self.rank[e] for e in edges]
        except KeyError as missing:
            raise HostMismatchError(f"edge {missing} is not ordered by {self}")
        inversions = sum(1 for i in range(len(ranks)) for j in range(i + 1, len(ranks)) if ranks[i] > ranks[j])
        return inversions, tuple(sorted(edges, key=self.rank.__getitem__))

    def minimum(self, edges: Iterable[Edge]) -> Edge:
        return min(edges, key=self.rank.__getitem__)

    def __str__(self) -> str:
        return "<".join(f"{u}{v}" for u, v in self.edges)


@dataclass(frozen=True)
class OSMonomial:
    """ω_{e1}...ω_{ek} with the edges in the given (sign-sensitive) order."""
    host: Graph
    edge_list: Tuple[Edge, ...]

    @property
    def degree(self) -> int:
        return len(self.edge_list)

    def __str__(self) -> str:
        return _monomial_text(self.edge_list)


def _monomial_text(edges: Sequence[Edge]) -> str:
    return "".join(f"w{u}{v}" for u, v in edges) or "1"


class OSElement:
    """A combination of nbc monomials in OS(g)."""

    __slots__ = ("host", "order", "degree", "terms")

    def __init__(self, host: Graph, terms: Optional[Dict[EdgeSet, Fraction]] = None,
                 order: Optional[EdgeOrder] = None, degree: int = 1):
        self.host = host
        self.order = order or EdgeOrder.default(host)
        self.degree = degree
        self.terms: Dict[EdgeSet, Fraction] = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @staticmethod
    def one(host: Graph, order: Optional[EdgeOrder] = None, degree: int = 1) -> "OSElement":
        return OSElement(host, {(): Fraction(1)}, order, degree)

    @staticmethod
    def generator(host: Graph, edge: Edge, order: Optional[EdgeOrder] = None, degree: int = 1) -> "OSElement":
        return os_reduce(OSMonomial(host, (tuple(sorted(edge)),)), order, degree)

    def _like(self, terms: Dict[EdgeSet, Fraction]) -> "OSElement":
        return OSElement(self.host, terms, self.order, self.degree)

    def _check(self, other: "OSElement") -> None:
        if self.host != other.host or self.order != other.order or self.degree != other.degree:
            raise HostMismatchError(f"cannot combine OS elements on {self.host} and {other.host}")

    def __add__(self, other: "OSElement") -> "OSElement":
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return self._like(terms)

    def __sub__(self, other: "OSElement") -> "OSElement":
        return self + other * -1

    def __mul__(self, other: Union["OSElement", int, Fraction]) -> "OSElement":
        if not isinstance(other, OSElement):
            return self._like({k: c * other for k, c in self.terms.items()})
        return os_product(self, other)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OSElement):
            return NotImplemented
        return self.host == other.host and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, edges: Sequence[Edge]) -> Fraction:
        return self.terms.get(tuple(edges), Fraction(0))

    def support(self) -> List[EdgeSet]:
        return sorted(self.terms, key=lambda k: (len(k), [self.order.rank[e] for e in k]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in self.support():
            c = self.terms[k]
            magnitude = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(("- " if c < 0 else "+ ") + magnitude + _monomial_text(k))
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"OSElement({self.host.spec()}: {self})"


# ---------------------------------------------------------------------------
# Circuits and nbc sets
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1024)
def circuits(g: Graph) -> Tuple[FrozenSet[Edge], ...]:
    """Edge sets of the simple cycles of g."""
    found = set()
    for cycle in nx.simple_cycles(g.to_networkx()):
        ring = list(cycle) + [cycle[0]]
        found.add(frozenset(tuple(sorted(pair)) for pair in zip(ring, ring[1:])))
    return tuple(sorted(found, key=lambda c: (len(c), sorted(c))))


def broken_circuits(g: Graph, o: Optional[EdgeOrder] = None) -> List[Tuple[FrozenSet[Edge], Edge]]:
    """(circuit minus its minimum edge, that minimum edge) for every circuit."""
    o = o or EdgeOrder.default(g)
    result = []
    for c in circuits(g):
        low = o.minimum(c)
        result.append((c - {low}, low))
    return result


def is_independent(g: Graph, edges: Iterable[Edge]) -> bool:
    forest = nx.Graph()
    forest.add_nodes_from(g.vertices)
    forest.add_edges_from(edges)
    return nx.is_forest(forest)


def is_nbc(g: Graph, edges: Iterable[Edge], o: Optional[EdgeOrder] = None) -> bool:
    s = frozenset(edges)
    return not any(bc <= s for bc, _ in broken_circuits(g, o))


def nbc_basis(g: Graph, k: Optional[int] = None, o: Optional[EdgeOrder] = None) -> List[EdgeSet]:
    """Edge subsets with no broken circuit, sorted by the edge order; all degrees when k is None."""
    o = o or EdgeOrder.default(g)
    if k is not None and k < 0:
        raise ContractadError(f"degree must be non-negative, got {k}")
    degrees = range(0, g.n) if k is None else ([k] if k <= g.n - 1 else [])
    broken = [bc for bc, _ in broken_circuits(g, o)]
    found = []
    for d in degrees:
        for subset in itertools.combinations(o.edges, d):
            s = frozenset(subset)
            if not any(bc <= s for bc in broken):
                found.append(tuple(subset))
    return found


# ---------------------------------------------------------------------------
# Straightening
# ---------------------------------------------------------------------------

def _sign(inversions: int, degree: int) -> int:
    return -1 if (inversions * degree) % 2 else 1


@lru_cache(maxsize=1 << 16)
def _straighten(g: Graph, o: EdgeOrder, degree: int, edges: EdgeSet) -> Tuple[Tuple[EdgeSet, Fraction], ...]:
    if not is_independent(g, edges):
        return ()
    current = frozenset(edges)
    applicable = [(bc, low) for bc, low in broken_circuits(g, o) if bc <= current]
    if not applicable:
        return ((edges, Fraction(1)),)
    bc, low = max(applicable, key=lambda item: (o.rank[item[1]], sorted(o.rank[e] for e in item[0])))
    circuit = o.sort(bc | {low})[1]
    rest = [e for e in edges if e not in bc]
    split = o.sort(bc)[1] + tuple(rest)
    inversions, _ = o.sort(split)
    base = _sign(inversions, degree)

    total: Dict[EdgeSet, Fraction] = {}
    # ω_B = -Σ_{i>=2} (-1)^{d(i-1)} ω_{C minus c_i}
    for i, removed in enumerate(circuit, start=1):
        if i == 1:
            continue
        coefficient = -base * _sign(i - 1, degree)
        face = tuple(e for e in circuit if e != removed)
        inversions, ordered = o.sort(face + tuple(rest))
        if ordered is None:
            continue
        coefficient *= _sign(inversions, degree)
        for key, c in _straighten(g, o, degree, ordered):
            total[key] = total.get(key, Fraction(0)) + coefficient * c
    return tuple((k, c) for k, c in total.items() if c)


def os_reduce(m: Union[OSMonomial, Sequence[Edge]], o: Optional[EdgeOrder] = None, degree: int = 1,
              host: Optional[Graph] = None) -> OSElement:
    """Rewrite a monomial in the nbc basis."""
    if isinstance(m, OSMonomial):
        host, edge_list = m.host, m.edge_list
    else:
        if host is None:
            raise ContractadError("os_reduce needs a host for a bare edge list")
        edge_list = tuple(m)
    edge_list = tuple(tuple(sorted(e)) for e in edge_list)
    for u, v in edge_list:
        if not host.has_edge(u, v):
            raise GraphError(f"{u}-{v} is not an edge of {host}")
    o = o or EdgeOrder.default(host)
    inversions, ordered = o.sort(edge_list)
    if ordered is None:
        return OSElement(host, {}, o, degree)
    sign = _sign(inversions, degree)
    return OSElement(host, {k: sign * c for k, c in _straighten(host, o, degree, ordered)}, o, degree)


def os_product(x: OSElement, y: OSElement) -> OSElement:
    x._check(y)
    total = OSElement(x.host, {}, x.order, x.degree)
    for kx, cx in x.terms.items():
        for ky, cy in y.terms.items():
            total = total + os_reduce(OSMonomial(x.host, kx + ky), x.order, x.degree) * (cx * cy)
    return total


def lattice_hilbert(g: Graph) -> List[int]:
    """Σ over graph partitions of t^rank times the product of |μ| over the blocks."""
    coefficients = [0] * g.n
    for partition in graph_partitions(g):
        term = 1
        for block in partition.blocks:
            term *= abs(moebius(g.induced(block)[0]))
        coefficients[g.n - len(partition.blocks)] += term
    return coefficients


def os_hilbert(g: Graph, o: Optional[EdgeOrder] = None) -> List[int]:
    """nbc counts per degree, cross-checked against the partition-lattice formula."""
    counts = [0] * g.n
    for s in nbc_basis(g, None, o):
        counts[len(s)] += 1
    expected = lattice_hilbert(g)
    if counts != expected:
        raise ContractadError(f"nbc counts {counts} disagree with the lattice formula {expected} on {g}")
    return counts


# ---------------------------------------------------------------------------
# Cocomposition
# ---------------------------------------------------------------------------

@dataclass
class OSTensor:
    """An element of OS(g/G) ⊗ OS(g|_G), keyed by (outer monomial, inner monomial)."""
    outer_host: Graph
    inner_host: Graph
    terms: Dict[Tuple[EdgeSet, EdgeSet], Fraction] = field(default_factory=dict)

    def add(self, key: Tuple[EdgeSet, EdgeSet], c: Fraction) -> None:
        value = self.terms.get(key, Fraction(0)) + c
        if value:
            self.terms[key] = value
        else:
            self.terms.pop(key, None)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{_monomial_text(a)}⊗{_monomial_text(b)}" for (a, b), c in sorted(self.terms.items()))


def os_cocompose(x: OSElement, tube: Iterable[int]) -> OSTensor:
    """
    The infinitesimal cocomposition at a tube.

    ω_e goes to ω_{e'}⊗1 for e not inside G (e' its image in g/G) and to 1⊗ω_e
    otherwise, extended multiplicatively with Koszul signs.
    """
    g = x.host
    tube = frozenset(tube)
    contracted, cmap = g.contract_tube(tube)
    restricted, rmap = g.induced(tube)
    outer_order, inner_order = EdgeOrder.default(contracted), EdgeOrder.default(restricted)
    result = OSTensor(contracted, restricted)
    for edges, c in x.terms.items():
        outer: List[Edge] = []
        inner: List[Edge] = []
        crossings = 0
        for u, v in edges:
            if u in tube and v in tube:
                inner.append(tuple(sorted((rmap[u], rmap[v]))))
            else:
                outer.append(tuple(sorted((cmap[u], cmap[v]))))
                crossings += len(inner)
        sign = _sign(crossings, x.degree)
        left = os_reduce(OSMonomial(contracted, tuple(outer)), outer_order, x.degree)
        right = os_reduce(OSMonomial(restricted, tuple(inner)), inner_order, x.degree)
        for ka, ca in left.terms.items():
            for kb, cb in right.terms.items():
                result.add((ka, kb), sign * c * ca * cb)
    return result


# ---------------------------------------------------------------------------
# Tree monomials of nbc sets and the pairing with gcGerst
# ---------------------------------------------------------------------------

def tree_of_nbc(g: Graph, s: Iterable[Edge], o: Optional[EdgeOrder] = None,
                product: str = "m", bracket: str = "b") -> TreeMonomial:
    """
    T(S): join bracket corollas along the edges of S from the largest down, then cap with the product comb.

    Each corolla takes over, at either endpoint, the tree built so far that
    contains that endpoint.
    """
    o = o or EdgeOrder.default(g)
    _, ordered = o.sort(tuple(tuple(sorted(e)) for e in s))
    if ordered is None or not is_nbc(g, ordered, o) or not is_independent(g, ordered):
        raise ContractadError(f"{_monomial_text(ordered or ())} is not an nbc set of {g}")
    forest: List[Node] = []
    for u, v in reversed(ordered):
        kids: List[Child] = []
        for w in (u, v):
            owner = next((t for t in forest if w in t.leaves), None)
            if owner is None:
                kids.append(w)
            else:
                forest.remove(owner)
                kids.append(owner)
        forest.append(Node(bracket, tuple(kids)))
    covered = frozenset().union(*(t.leaves for t in forest)) if forest else frozenset()
    pieces: List[Child] = list(forest) + [v for v in g.vertices if v not in covered]
    pieces.sort(key=lambda c: min(leaves_of(c)))
    cap = comb(product, g.quotient([leaves_of(p) for p in pieces]))
    root = graft(cap.root, {i: p for i, p in enumerate(pieces, start=1)})
    return TreeMonomial.build(g, root)


def _nadir(root: Node, u: int, v: int) -> Node:
    node = root
    while True:
        below = next((c for c in node.children if isinstance(c, Node) and u in c.leaves and v in c.leaves), None)
        if below is None:
            return node
        node = below


def gerst_pairing(t: TreeMonomial, s: Union[OSMonomial, Sequence[Edge]], o: Optional[EdgeOrder] = None,
                  product: str = "m") -> int:
    """
    ⟨T, ω_S⟩ for a monomial whose product vertices sit below its bracket vertices.

    Nonzero exactly when sending each edge to the nadir of its leaf-to-leaf
    path is a bijection onto the bracket vertices.
    """
    edges = s.edge_list if isinstance(s, OSMonomial) else tuple(tuple(sorted(e)) for e in s)
    if not isinstance(t.root, Node):
        return 1 if not edges else 0
    nodes = t.root.dfs
    brackets = [v for v in nodes if v.label != product]
    for v in brackets:
        for c in v.children:
            if isinstance(c, Node) and c.label == product:
                raise ContractadError(f"{t} has a product vertex above a bracket vertex")
    if len(brackets) != len(edges):
        logger.warning("pairing %s with %s: degrees %d and %d differ", t, _monomial_text(edges), len(brackets), len(edges))
        return 0
    o = o or EdgeOrder.default(t.host)
    _, ordered = o.sort(edges)
    if ordered is None:
        return 0
    images = [_nadir(t.root, u, v) for u, v in ordered]
    if len({v.leaves for v in images}) != len(images) or any(v.label == product for v in images):
        return 0
    keys = [v.leaves for v in images]
    return koszul_sign(keys, [v.leaves for v in nodes], keys)


def pairing_matrix(g: Graph, o: Optional[EdgeOrder] = None) -> Tuple[List[EdgeSet], List[List[int]]]:
    """⟨T(S), ω_S'⟩ over all nbc sets S (rows) and S' (columns)."""
    o = o or EdgeOrder.default(g)
    basis = nbc_basis(g, None, o)
    trees = [tree_of_nbc(g, s, o) for s in basis]
    matrix = [
        [gerst_pairing(t, s2, o) if len(s1) == len(s2) else 0 for s2 in basis]
        for s1, t in zip(basis, trees)
    ]
    return basis, matrix


def is_signed_identity(matrix: Sequence[Sequence[int]]) -> bool:
    return all(
        (abs(value) == 1) if i == j else value == 0
        for i, row in enumerate(matrix) for j, value in enumerate(row)
    )
