"""
Contractads Graph Core - Connected graphs, tubes, graph partitions and the partition lattice.

Vertices are always 1..n and the order of an ordered graph is the numeric
order of its labels. Contracted and induced graphs are relabeled by the
minimal original vertex of each block.
"""

import itertools
import logging
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .config import get_settings
from .errors import BoundExceededError, GraphError, GraphParseError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
Tube = FrozenSet[int]

# Labeled enumeration beyond this size is far outside desk scale.
MAX_LABELED_ENUMERATION = 6


def _normalize_edge(edge: Sequence[int], n: int) -> Edge:
    u, v = int(edge[0]), int(edge[1])
    if u == v:
        raise GraphError(f"loop at vertex {u} is not allowed")
    if not (1 <= u <= n and 1 <= v <= n):
        raise GraphError(f"edge {u}-{v} has an endpoint outside 1..{n}")
    return (u, v) if u < v else (v, u)


def _adjacency(n: int, edges: Iterable[Edge]) -> Tuple[FrozenSet[int], ...]:
    adj: List[set] = [set() for _ in range(n + 1)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return tuple(frozenset(a) for a in adj)


def _nx_graph(n: int, edges: Iterable[Edge]) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(1, n + 1))
    graph.add_edges_from(sorted(edges))
    return graph


def _is_connected_subset(graph: nx.Graph, subset: FrozenSet[int]) -> bool:
    return bool(subset) and nx.is_connected(graph.subgraph(subset))


@dataclass(frozen=True)
class Graph:
    """Connected simple graph on the vertices 1..n."""
    n: int
    edges: FrozenSet[Edge]
    adjacency: Tuple[FrozenSet[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        normalized = frozenset(_normalize_edge(e, self.n) for e in self.edges)
        object.__setattr__(self, "edges", normalized)
        object.__setattr__(self, "adjacency", _adjacency(self.n, normalized))
        if not _is_connected_subset(self.nx_graph, frozenset(self.vertices)):
            raise GraphError(f"graph {self.spec()} is disconnected")

    @classmethod
    def _trusted(cls, n: int, edges: FrozenSet[Edge]) -> "Graph":
        # Skips validation; callers guarantee normalized edges and connectivity.
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "edges", edges)
        object.__setattr__(obj, "adjacency", _adjacency(n, edges))
        return obj

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def is_tube(self, vertices: Iterable[int]) -> bool:
        """Check whether a vertex set induces a connected subgraph."""
        subset = frozenset(vertices)
        if not subset or not subset <= frozenset(self.vertices):
            return False
        return _is_connected_subset(self.nx_graph, subset)

    def tubes(self) -> List[Tube]:
        return list(_tubes(self))

    def quotient(self, blocks: Sequence[Iterable[int]]) -> "Graph":
        """
        Contract a partition of a tube S into blocks.

        The result is (g|_S)/blocks. Blocks must be disjoint tubes whose union
        is a tube; block vertices are numbered by their minimal element.
        """
        ordered = sorted((frozenset(b) for b in blocks), key=min)
        index: Dict[int, int] = {}
        for i, block in enumerate(ordered, start=1):
            for v in block:
                index[v] = i
        edges = set()
        for u, v in self.edges:
            iu, iv = index.get(u), index.get(v)
            if iu is not None and iv is not None and iu != iv:
                edges.add((iu, iv) if iu < iv else (iv, iu))
        return Graph._trusted(len(ordered), frozenset(edges))

    def induced(self, tube: Iterable[int]) -> Tuple["Graph", Dict[int, int]]:
        """Induced graph g|_S relabeled 1..|S| in numeric order, with the old->new map."""
        subset = frozenset(tube)
        if not self.is_tube(subset):
            raise GraphError(f"{_fmt_set(subset)} is not a tube of {self.spec()}")
        mapping = {v: i for i, v in enumerate(sorted(subset), start=1)}
        return self.quotient([[v] for v in subset]), mapping

    def contract_tube(self, tube: Iterable[int]) -> Tuple["Graph", Dict[int, int]]:
        """The contracted graph g/G, with the map from old vertices to new ones."""
        subset = frozenset(tube)
        if not self.is_tube(subset):
            raise GraphError(f"{_fmt_set(subset)} is not a tube of {self.spec()}")
        blocks = [subset] + [frozenset([v]) for v in self.vertices if v not in subset]
        ordered = sorted(blocks, key=min)
        mapping = {v: i for i, b in enumerate(ordered, start=1) for v in b}
        return self.quotient(ordered), mapping

    def relabel(self, mapping: Dict[int, int]) -> "Graph":
        """Image of the graph under a vertex bijection."""
        return Graph._trusted(
            self.n,
            frozenset(tuple(sorted((mapping[u], mapping[v]))) for u, v in self.edges),
        )

    def degree_sequence(self) -> Tuple[int, ...]:
        return tuple(sorted(len(self.adjacency[v]) for v in self.vertices))

    @cached_property
    def nx_graph(self) -> nx.Graph:
        """Shared read-only networkx view; use to_networkx for a mutable copy."""
        return _nx_graph(self.n, self.edges)

    def to_networkx(self) -> nx.Graph:
        return self.nx_graph.copy()

    def to_json(self) -> Dict[str, object]:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @staticmethod
    def from_json(data: Dict[str, object]) -> "Graph":
        return Graph(int(data["n"]), frozenset(tuple(e) for e in data.get("edges", [])))

    def spec(self) -> str:
        if not self.edges:
            return "P1"
        return "edges:" + ",".join(f"{u}-{v}" for u, v in self.sorted_edges())

    def __str__(self) -> str:
        return self.spec()


def _fmt_set(vertices: Iterable[int]) -> str:
    return "{" + ",".join(str(v) for v in sorted(vertices)) + "}"


@lru_cache(maxsize=4096)
def _tubes(g: Graph) -> Tuple[Tube, ...]:
    found = []
    for size in range(1, g.n + 1):
        for subset in itertools.combinations(g.vertices, size):
            s = frozenset(subset)
            if _is_connected_subset(g.nx_graph, s):
                found.append(s)
    return tuple(found)


@dataclass(frozen=True)
class GraphPartition:
    """Partition of the vertex set into tubes, blocks sorted by minimal vertex."""
    blocks: Tuple[Tube, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "blocks", tuple(sorted((frozenset(b) for b in self.blocks), key=min))
        )

    @staticmethod
    def of(g: Graph, blocks: Iterable[Iterable[int]]) -> "GraphPartition":
        """Validated constructor."""
        partition = GraphPartition(tuple(frozenset(b) for b in blocks))
        seen: set = set()
        for block in partition.blocks:
            if seen & block:
                raise GraphError(f"blocks of {partition} overlap")
            if not g.is_tube(block):
                raise GraphError(f"block {_fmt_set(block)} is not a tube of {g.spec()}")
            seen |= block
        if seen != set(g.vertices):
            raise GraphError(f"{partition} does not cover the vertices of {g.spec()}")
        return partition

    @staticmethod
    def bottom(g: Graph) -> "GraphPartition":
        return GraphPartition(tuple(frozenset([v]) for v in g.vertices))

    @staticmethod
    def top(g: Graph) -> "GraphPartition":
        return GraphPartition((frozenset(g.vertices),))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def rank(self) -> int:
        return self.n - len(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, v: int) -> Tube:
        for block in self.blocks:
            if v in block:
                return block
        raise GraphError(f"vertex {v} is not covered by {self}")

    def refines(self, other: "GraphPartition") -> bool:
        """True when every block lies inside a block of other."""
        return all(any(b <= c for c in other.blocks) for b in self.blocks)

    def __str__(self) -> str:
        return "|".join("".join(str(v) for v in sorted(b)) for b in self.blocks)


def graph_partitions(g: Graph) -> List[GraphPartition]:
    """All partitions of V(g) into tubes, sorted by rank then text."""
    tubes = _tubes(g)
    result: List[GraphPartition] = []

    def extend(remaining: FrozenSet[int], chosen: List[Tube]) -> None:
        if not remaining:
            result.append(GraphPartition(tuple(chosen)))
            return
        first = min(remaining)
        for tube in tubes:
            if first in tube and tube <= remaining:
                chosen.append(tube)
                extend(remaining - tube, chosen)
                chosen.pop()

    extend(frozenset(g.vertices), [])
    result.sort(key=lambda p: (p.rank, str(p)))
    return result


@dataclass
class PartitionLattice:
    """The lattice of graph partitions with an explicit refinement matrix."""
    graph: Graph
    elements: List[GraphPartition]
    order: List[List[bool]]
    bottom: int = 0
    top: int = -1
    _moebius: Dict[int, List[int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.top < 0:
            self.top = len(self.elements) - 1

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, partition: GraphPartition) -> int:
        return self.elements.index(partition)

    def leq(self, i: int, j: int) -> bool:
        return self.order[i][j]

    def interval(self, i: int, j: int) -> List[int]:
        """Indices of [I, J] in lattice order."""
        return [k for k in range(len(self.elements)) if self.order[i][k] and self.order[k][j]]

    def moebius_from(self, i: int) -> List[int]:
        """mu(I, J) for every J, zero where J is not above I."""
        if i not in self._moebius:
            values = [0] * len(self.elements)
            values[i] = 1
            # elements are sorted by rank, so every J is visited after its lower interval
            for k in range(len(self.elements)):
                if k == i or not self.order[i][k]:
                    continue
                values[k] = -sum(values[m] for m in range(len(self.elements))
                                 if m != k and self.order[i][m] and self.order[m][k])
            self._moebius[i] = values
        return self._moebius[i]

    def moebius(self, i: Optional[int] = None, j: Optional[int] = None) -> int:
        i = self.bottom if i is None else i
        j = self.top if j is None else j
        return self.moebius_from(i)[j]


def partition_lattice(g: Graph, bound: Optional[int] = None) -> PartitionLattice:
    """Build Π_gr(g) with its refinement order."""
    bound = get_settings().lattice_bound if bound is None else bound
    if g.n > bound:
        raise BoundExceededError("vertex count for the partition lattice", g.n, bound)
    return _lattice(g)


@lru_cache(maxsize=1024)
def _lattice(g: Graph) -> PartitionLattice:
    elements = graph_partitions(g)
    order = [[a.refines(b) for b in elements] for a in elements]
    logger.debug("partition lattice of %s: %d elements", g.spec(), len(elements))
    return PartitionLattice(graph=g, elements=elements, order=order)


def moebius(g: Graph) -> int:
    """The signed Möbius value mu(0, 1) of Π_gr(g)."""
    return partition_lattice(g).moebius()


def quotient_partition(g: Graph, lower: GraphPartition, upper: GraphPartition) -> GraphPartition:
    """Image of a partition J >= I in Π_gr(g/I)."""
    if not lower.refines(upper):
        raise GraphError(f"{lower} does not refine {upper}")
    index = {block: i for i, block in enumerate(lower.blocks, start=1)}
    return GraphPartition(tuple(
        frozenset(index[b] for b in lower.blocks if b <= block) for block in upper.blocks
    ))


def characteristic_polynomial(g: Graph) -> List[int]:
    """Coefficients (ascending powers of t) of Σ_I mu(0, I) t^{#blocks of I}."""
    lattice = partition_lattice(g)
    mu = lattice.moebius_from(lattice.bottom)
    coefficients = [0] * (g.n + 1)
    for k, partition in enumerate(lattice.elements):
        coefficients[len(partition)] += mu[k]
    return coefficients


def poincare_polynomial(g: Graph) -> List[int]:
    """Coefficients of Σ_I |mu(0, I)| t^{rk I}."""
    lattice = partition_lattice(g)
    mu = lattice.moebius_from(lattice.bottom)
    coefficients = [0] * g.n
    for k, partition in enumerate(lattice.elements):
        coefficients[partition.rank] += abs(mu[k])
    return coefficients


def acyclic_orientations(g: Graph) -> int:
    """Number of acyclic orientations, i.e. regions of the real graphic arrangement."""
    edges = g.sorted_edges()
    count = 0
    for flips in itertools.product((False, True), repeat=len(edges)):
        digraph = nx.DiGraph()
        digraph.add_nodes_from(g.vertices)
        digraph.add_edges_from((v, u) if flip else (u, v) for (u, v), flip in zip(edges, flips))
        if nx.is_directed_acyclic_graph(digraph):
            count += 1
    return count


# ---------------------------------------------------------------------------
# Families and parsing
# ---------------------------------------------------------------------------

def make_family(name: str, *params: int) -> Graph:
    """
    Build a named graph family.

    P n, K n, C n and St n take one parameter; K m k builds K_(1^m,k), the
    join of K_m on 1..m with k independent vertices. The star's center is
    vertex 1.
    """
    if name == "K" and len(params) == 2:
        m, k = params
        if m < 1 or k < 0:
            raise GraphError(f"K_(1^m,k) needs m >= 1 and k >= 0, got m={m}, k={k}")
        edges = {(u, v) for u in range(1, m + 1) for v in range(u + 1, m + 1)}
        edges |= {(u, v) for u in range(1, m + 1) for v in range(m + 1, m + k + 1)}
        return Graph(m + k, frozenset(edges))
    if len(params) != 1:
        raise GraphError(f"family {name!r} takes one parameter, got {len(params)}")
    n = params[0]
    if name == "P":
        if n < 1:
            raise GraphError(f"P_n needs n >= 1, got {n}")
        return Graph(n, frozenset((i, i + 1) for i in range(1, n)))
    if name == "K":
        if n < 1:
            raise GraphError(f"K_n needs n >= 1, got {n}")
        return Graph(n, frozenset(itertools.combinations(range(1, n + 1), 2)))
    if name == "C":
        if n < 3:
            raise GraphError(f"C_n needs n >= 3, got {n}")
        return Graph(n, frozenset([(i, i + 1) for i in range(1, n)] + [(1, n)]))
    if name == "St":
        if n < 0:
            raise GraphError(f"St_n needs n >= 0, got {n}")
        return Graph(n + 1, frozenset((1, v) for v in range(2, n + 2)))
    raise GraphError(f"unknown graph family {name!r}")


_FAMILY_RE = re.compile(r"^(St|P|C|K)(\d+)$")
_JOIN_RE = re.compile(r"^K\(1\^(\d+),(\d+)\)$")
_EDGE_RE = re.compile(r"\s*(\d+)\s*-\s*(\d+)\s*")


def parse_graph(spec: str) -> Graph:
    """Parse a family token ("P4", "St3", "K(1^2,2)") or "edges:1-2,2-3"."""
    text = spec.strip()
    match = _JOIN_RE.match(text)
    if match:
        return make_family("K", int(match.group(1)), int(match.group(2)))
    match = _FAMILY_RE.match(text)
    if match:
        return make_family(match.group(1), int(match.group(2)))
    if not text.startswith("edges:"):
        raise GraphParseError("expected a family token or 'edges:'", text, 0)

    offset = len("edges:")
    body = text[offset:]
    if not body.strip():
        raise GraphParseError("empty edge list", text, offset)
    edges = []
    position = offset
    for item in body.split(","):
        match = _EDGE_RE.fullmatch(item)
        if not match:
            raise GraphParseError(f"malformed edge {item.strip()!r}", text, position)
        u, v = int(match.group(1)), int(match.group(2))
        if u < 1 or v < 1:
            raise GraphParseError("vertex labels start at 1", text, position)
        if u == v:
            raise GraphParseError(f"loop {u}-{v}", text, position)
        edges.append((u, v))
        position += len(item) + 1
    n = max(max(e) for e in edges)
    return Graph(n, frozenset(edges))


def split_components(n: int, edges: Iterable[Edge]) -> List[Tuple[Graph, Dict[int, int]]]:
    """
    Split a possibly disconnected edge set on 1..n into connected graphs.

    Each component comes with its old->new vertex map. This is the only place
    a disconnected vertex set is accepted.
    """
    adj = _adjacency(n, [_normalize_edge(e, n) for e in edges])
    remaining = set(range(1, n + 1))
    components = []
    while remaining:
        start = min(remaining)
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        remaining -= seen
        mapping = {v: i for i, v in enumerate(sorted(seen), start=1)}
        component_edges = frozenset(
            (mapping[u], mapping[v]) for u in seen for v in adj[u] if u < v
        )
        components.append((Graph(len(seen), component_edges), mapping))
    return components


# ---------------------------------------------------------------------------
# Isomorphisms and enumeration
# ---------------------------------------------------------------------------

def enumerate_tubes(g: Graph) -> List[Tube]:
    """All tubes ordered by size, then lexicographically."""
    return sorted(_tubes(g), key=lambda t: (len(t), sorted(t)))


def induced_subgraph(g: Graph, s: Iterable[int]) -> Tuple[Graph, Dict[int, int]]:
    return g.induced(s)


def contract(g: Graph, partition: GraphPartition) -> Tuple[Graph, Dict[Tube, int]]:
    """g/I with the block -> vertex map."""
    partition = GraphPartition.of(g, partition.blocks)
    mapping = {block: i for i, block in enumerate(partition.blocks, start=1)}
    return g.quotient(partition.blocks), mapping


def isomorphisms(g: Graph, h: Graph) -> List[Tuple[int, ...]]:
    """
    All vertex bijections f with f(E_g) = E_h.

    Each bijection is a tuple whose (v-1)-th entry is f(v); the list is
    lexicographically sorted, so the identity leads when g == h.
    """
    get_settings().check_vertices(g.n)
    if g.n != h.n or len(g.edges) != len(h.edges):
        return []
    matcher = nx.algorithms.isomorphism.GraphMatcher(g.nx_graph, h.nx_graph)
    return sorted(tuple(f[v] for v in g.vertices) for f in matcher.isomorphisms_iter())


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and nx.is_isomorphic(g.nx_graph, h.nx_graph)


def automorphisms(g: Graph) -> List[Tuple[int, ...]]:
    """Edge-preserving vertex permutations, identity first."""
    return isomorphisms(g, g)


def canonical_form(g: Graph) -> Tuple[int, Tuple[Edge, ...]]:
    """Lexicographically minimal sorted edge list over all relabelings."""
    get_settings().check_vertices(g.n)
    best: Optional[Tuple[Edge, ...]] = None
    for perm in itertools.permutations(range(1, g.n + 1)):
        mapping = dict(zip(range(1, g.n + 1), perm))
        relabeled = tuple(sorted(tuple(sorted((mapping[u], mapping[v]))) for u, v in g.edges))
        if best is None or relabeled < best:
            best = relabeled
    return g.n, best or ()


def connected_graphs(n: int) -> List[Graph]:
    """All labeled connected graphs on 1..n, i.e. all ordered graphs of size n."""
    if n > MAX_LABELED_ENUMERATION:
        raise BoundExceededError("vertex count for labeled enumeration", n, MAX_LABELED_ENUMERATION)
    return list(_connected_graphs(n))


@lru_cache(maxsize=None)
def _connected_graphs(n: int) -> Tuple[Graph, ...]:
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    found = []
    for size in range(n - 1, len(pairs) + 1):
        for edges in itertools.combinations(pairs, size):
            if nx.is_connected(_nx_graph(n, edges)):
                found.append(Graph._trusted(n, frozenset(edges)))
    found.sort(key=lambda g: (len(g.edges), g.sorted_edges()))
    logger.debug("%d labeled connected graphs on %d vertices", len(found), n)
    return tuple(found)


def isomorphism_classes(n: int) -> List[Graph]:
    """One representative per unlabeled connected graph on n vertices."""
    if n <= 7:
        reps = []
        for atlas_graph in nx.graph_atlas_g():
            if atlas_graph.number_of_nodes() == n and (n == 0 or nx.is_connected(atlas_graph)):
                reps.append(Graph(n, frozenset((u + 1, v + 1) for u, v in atlas_graph.edges())))
        return reps
    seen = set()
    reps = []
    for g in connected_graphs(n):
        form = canonical_form(g)
        if form not in seen:
            seen.add(form)
            reps.append(g)
    return reps


def family_name(g: Graph) -> str:
    """A readable name for the isomorphism type of small graphs."""
    form = canonical_form(g)
    candidates = [("P%d" % g.n, make_family("P", g.n)), ("K%d" % g.n, make_family("K", g.n))]
    if g.n >= 3:
        candidates.append(("C%d" % g.n, make_family("C", g.n)))
    if g.n >= 2:
        candidates.append(("St%d" % (g.n - 1), make_family("St", g.n - 1)))
    for m in range(2, g.n - 1):
        candidates.append(("K(1^%d,%d)" % (m, g.n - m), make_family("K", m, g.n - m)))
    for name, h in candidates:
        if canonical_form(h) == form:
            return name
    if g.n == 4 and len(g.edges) == 4:
        return "paw"
    return g.spec()
