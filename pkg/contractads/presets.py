"""
Contractads Presets - Shipped presentations and the rooted-spanning-tree model.

Presentations are YAML definition files under definitions/, validated
against schema/preset.schema.json and expanded over all orderings of their
relation hosts. The E_n family is generated from a template.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import yaml

from .algebra import Element, Generator, Signature, TreeMonomial, act, symmetrize_presentation
from .errors import ContractadError, GraphError, HostMismatchError, PresetError
from .graph_core import Edge, Graph, parse_graph
from .grobner import Presentation
from .orders import MonomialOrder, OrderKind
from .report import SchemaValidator, ValidationError, ValidationResult
from .trees import Node

logger = logging.getLogger(__name__)

DEFINITIONS_DIR = Path(__file__).parent / "definitions"

FLIPS = {"symmetric": 1, "antisymmetric": -1}


class PresetValidator(SchemaValidator):
    """Validate preset definitions against preset.schema.json."""

    schema_name = "preset.schema.json"
    kind = "preset definition"
    required = ["name", "generators", "relations"]

    def check(self, data: Any) -> List[ValidationError]:
        errors = []
        generators = {g["name"]: g for g in data.get("generators", [])}
        if len(generators) != len(data.get("generators", [])):
            errors.append(ValidationError("generators", "generator names must be unique"))
        for i, g in enumerate(data.get("generators", [])):
            partner = g.get("partner")
            if g.get("symmetry", "symmetric") == "none" and partner is None:
                errors.append(ValidationError(f"generators.{i}", f"generator {g['name']} has no symmetry and no partner"))
            if partner is not None and generators.get(partner, {}).get("partner") != g["name"]:
                errors.append(ValidationError(f"generators.{i}.partner", f"{partner} does not name {g['name']} as its partner"))
        for i, rel in enumerate(data.get("relations", [])):
            try:
                parse_graph(rel["host"])
            except GraphError as e:
                errors.append(ValidationError(f"relations.{i}.host", str(e)))
        letters = data.get("order", {}).get("letters", [])
        unknown = [x for x in letters if x not in generators]
        if unknown:
            errors.append(ValidationError("order.letters", f"unknown generators {unknown}"))
        return errors


def _coefficient(value: Union[int, str]) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise PresetError(f"invalid coefficient {value!r}")


class PresetLoader:
    """Load presentations from definition files."""

    @staticmethod
    def load(path: Union[str, Path], symmetrize: Optional[bool] = None) -> Presentation:
        """Load a presentation from a YAML file."""
        path = Path(path)

        if not path.exists():
            raise FileNotFoundError(f"preset file not found: {path}")

        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)

        return PresetLoader.parse(data, source_path=str(path), symmetrize=symmetrize)

    @staticmethod
    def parse(data: Dict[str, Any], source_path: Optional[str] = None,
              symmetrize: Optional[bool] = None) -> Presentation:
        """Parse a validated presentation from a dictionary."""
        result = PresetValidator().validate(data)
        if not result.valid:
            raise PresetError(f"{source_path or data.get('name', 'preset')}: {result}")

        generators = []
        for g in data["generators"]:
            symmetry = g.get("symmetry", "symmetric")
            generators.append(Generator(
                name=g["name"],
                degree=int(g.get("degree", 0)),
                arity=int(g.get("arity", 2)),
                flip=FLIPS.get(symmetry, int(g.get("partner_sign", 1))),
                partner=g.get("partner"),
            ))
        signature = Signature(tuple(generators))

        relations: Dict[Graph, List[Element]] = {}
        for i, rel in enumerate(data.get("relations", [])):
            host = parse_graph(rel["host"])
            element = Element.zero(host)
            for term in rel["terms"]:
                coefficient = _coefficient(term[0])
                try:
                    m = TreeMonomial.build(host, term[1])
                except GraphError as e:
                    raise PresetError(f"relation {i}: {e}")
                for v in m.internal_nodes():
                    if v.label not in signature:
                        raise PresetError(f"relation {i}: unknown generator {v.label!r} in {term[1]}")
                if len(term) > 2:
                    sign, m = _permuted(m, term[2], signature, i)
                    coefficient *= sign
                element = element + Element.monomial(m, coefficient)
            if not element:
                raise PresetError(f"relation {i} on {host} cancels to zero")
            relations.setdefault(host, []).append(element)

        if data.get("symmetrize", True) if symmetrize is None else symmetrize:
            relations = symmetrize_presentation(relations, signature)

        order = None
        if "order" in data:
            letters = data["order"].get("letters") or signature.names
            order = MonomialOrder(OrderKind.from_string(data["order"]["kind"]), tuple(letters))

        presentation = Presentation(
            name=data["name"],
            signature=signature,
            relations=relations,
            order=order,
            description=data.get("description", ""),
        )
        logger.debug("loaded %s: %d generators, %d relations on %d hosts",
                     presentation.name, len(generators), presentation.relation_count(), len(relations))
        return presentation


def _permuted(m: TreeMonomial, images: Sequence[int], signature: Signature, index: int) -> Tuple[int, TreeMonomial]:
    n = m.host.n
    if sorted(images) != list(range(1, n + 1)):
        raise PresetError(f"relation {index}: {list(images)} is not a permutation of 1..{n}")
    sign, moved = act(list(images), m, signature)
    if moved.host != m.host:
        raise PresetError(f"relation {index}: permutation {list(images)} does not preserve {m.host}")
    return sign, moved


def en_definition(n: int) -> Dict[str, Any]:
    """The homology of the little n-disks contractad as a preset definition."""
    if n < 2:
        raise PresetError(f"E_n needs n >= 2, got {n}")
    same = 1 if (n - 1) % 2 == 0 else -1
    return {
        "name": f"E{n}",
        "description": f"Homology of the little {n}-disks contractad",
        "generators": [
            {"name": "m", "degree": 0, "symmetry": "symmetric"},
            {"name": "c", "degree": n - 1, "symmetry": "symmetric" if n % 2 == 0 else "antisymmetric"},
        ],
        "relations": [
            {"host": "P3", "terms": [[1, "m(m(1,2),3)"], [-1, "m(1,m(2,3))"]]},
            {"host": "P3", "terms": [[1, "c(c(1,2),3)"], [-same, "c(1,c(2,3))"]]},
            {"host": "P3", "terms": [[1, "c(m(1,2),3)"], [-1, "m(1,c(2,3))"]]},
            {"host": "K3", "terms": [[1, "m(m(1,2),3)"], [-1, "m(1,m(2,3))"]]},
            {"host": "K3", "terms": [
                [1, "c(c(1,2),3)"], [1, "c(c(1,2),3)", [2, 3, 1]], [1, "c(c(1,2),3)", [3, 1, 2]],
            ]},
            {"host": "K3", "terms": [
                [1, "c(m(1,2),3)"], [-1, "m(1,c(2,3))"], [-1, "m(c(1,2),3)", [1, 3, 2]],
            ]},
        ],
        "order": {"kind": "quantum", "letters": ["m", "c"]},
    }


def list_presets() -> List[str]:
    names = sorted(p.stem for p in DEFINITIONS_DIR.glob("*.yaml"))
    return names + ["En"]


@lru_cache(maxsize=32)
def preset(name: str, n: Optional[int] = None) -> Presentation:
    """A shipped presentation by name; En takes the disk dimension n."""
    if name == "En" or (name.startswith("E") and name[1:].isdigit()):
        dimension = n if name == "En" else int(name[1:])
        if dimension is None:
            raise PresetError("preset En needs n")
        return PresetLoader.parse(en_definition(dimension))
    path = DEFINITIONS_DIR / f"{name}.yaml"
    if not path.exists():
        raise PresetError(f"unknown preset {name!r}; available: {', '.join(list_presets())}")
    return PresetLoader.load(path)


def validate_definition(path: Union[str, Path]) -> ValidationResult:
    return PresetValidator().validate_file(path)


# ---------------------------------------------------------------------------
# Change of basis
# ---------------------------------------------------------------------------

Substitution = Dict[str, List[Tuple[Fraction, str]]]

NU_TO_MB: Substitution = {
    "nu": [(Fraction(1, 2), "m"), (Fraction(1, 2), "b")],
    "nu~": [(Fraction(1, 2), "m"), (Fraction(-1, 2), "b")],
}
MB_TO_NU: Substitution = {
    "m": [(Fraction(1), "nu"), (Fraction(1), "nu~")],
    "b": [(Fraction(1), "nu"), (Fraction(-1), "nu~")],
}


def change_basis(x: Element, substitution: Substitution) -> Element:
    """Rewrite every vertex label as a linear combination of labels (degree-0 generators)."""
    total: Dict[TreeMonomial, Fraction] = {}
    for m, c in x.terms.items():
        nodes = m.internal_nodes()
        options = [substitution[v.label] for v in nodes]
        for choice in itertools.product(*options):
            labels = {v.leaves: label for v, (_, label) in zip(nodes, choice)}
            coefficient = c
            for k, _ in choice:
                coefficient *= k

            def relabel(node):
                if not isinstance(node, Node):
                    return node
                return Node(labels[node.leaves], tuple(relabel(child) for child in node.children))

            key = TreeMonomial(m.host, relabel(m.root))
            total[key] = total.get(key, Fraction(0)) + coefficient
    return Element(x.host, total)


# ---------------------------------------------------------------------------
# Rooted spanning trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootedSpanningTree:
    """A spanning tree of g restricted to `vertices`, with a marked root."""
    host: Graph
    edges: FrozenSet[Edge]
    root: int
    vertices: FrozenSet[int] = field(default=frozenset())

    def __post_init__(self):
        vertices = frozenset(self.vertices) or frozenset(self.host.vertices)
        edges = frozenset(tuple(sorted(e)) for e in self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        if self.root not in vertices:
            raise GraphError(f"root {self.root} is not among {sorted(vertices)}")
        for u, v in edges:
            if not self.host.has_edge(u, v) or u not in vertices or v not in vertices:
                raise GraphError(f"{u}-{v} is not an edge of {self.host} inside {sorted(vertices)}")
        if not nx.is_tree(self.to_networkx()):
            raise GraphError(f"edges {sorted(edges)} do not form a spanning tree of {sorted(vertices)}")

    def to_networkx(self) -> nx.Graph:
        tree = nx.Graph()
        tree.add_nodes_from(self.vertices)
        tree.add_edges_from(self.edges)
        return tree

    def distances(self) -> Dict[int, int]:
        return nx.single_source_shortest_path_length(self.to_networkx(), self.root)

    def __str__(self) -> str:
        edges = ",".join(f"{u}-{v}" for u, v in sorted(self.edges))
        return f"[{edges or '.'}]@{self.root}"


def rooted_spanning_trees(g: Graph, vertices: Optional[Iterable[int]] = None) -> List[RootedSpanningTree]:
    """All (spanning tree, root) pairs of g, or of g restricted to a tube."""
    subset = frozenset(vertices) if vertices is not None else frozenset(g.vertices)
    if not g.is_tube(subset):
        raise GraphError(f"{sorted(subset)} is not a tube of {g}")
    graph = g.to_networkx().subgraph(subset)
    found = []
    if len(subset) == 1:
        trees = [frozenset()]
    else:
        trees = [frozenset(tuple(sorted(e)) for e in t.edges()) for t in nx.SpanningTreeIterator(graph)]
    for edges in trees:
        for root in sorted(subset):
            found.append(RootedSpanningTree(g, edges, root, subset))
    found.sort(key=lambda t: (sorted(t.edges), t.root))
    return found


def rst_star(g: Graph, t1: RootedSpanningTree, t2: RootedSpanningTree) -> List[RootedSpanningTree]:
    """Graft the root of t2 onto every vertex of t1 adjacent to it in g; the result keeps the root of t1."""
    if t1.host != g or t2.host != g:
        raise HostMismatchError(f"trees on {t1.host} and {t2.host} do not live on {g}")
    if t1.vertices & t2.vertices:
        raise HostMismatchError(f"blocks {sorted(t1.vertices)} and {sorted(t2.vertices)} overlap")
    union = t1.vertices | t2.vertices
    return [
        RootedSpanningTree(g, t1.edges | t2.edges | {tuple(sorted((v, t2.root)))}, t1.root, union)
        for v in sorted(t1.vertices) if g.has_edge(v, t2.root)
    ]


def star_sum(g: Graph, xs: Dict[RootedSpanningTree, int], ys: Dict[RootedSpanningTree, int]) -> Dict[RootedSpanningTree, int]:
    """Bilinear extension of rst_star to formal sums."""
    total: Dict[RootedSpanningTree, int] = {}
    for x, a in xs.items():
        for y, b in ys.items():
            for t in rst_star(g, x, y):
                total[t] = total.get(t, 0) + a * b
    return {t: c for t, c in total.items() if c}


def rst_cocompose(t: RootedSpanningTree, tube: Iterable[int]) -> Optional[Tuple[RootedSpanningTree, RootedSpanningTree]]:
    """
    Split t at a tube into (T|_G on g|_G, T/G on g/G).

    The block root is the vertex of G nearest to the root of t. Returns None
    when T|_G is disconnected.
    """
    g = t.host
    if t.vertices != frozenset(g.vertices):
        raise HostMismatchError("cocomposition needs a tree spanning the whole host")
    tube = frozenset(tube)
    restricted, rmap = g.induced(tube)
    inside = frozenset(e for e in t.edges if e[0] in tube and e[1] in tube)
    if len(inside) != len(tube) - 1:
        return None
    distance = t.distances()
    block_root = min(tube, key=lambda v: (distance[v], v))
    inner = RootedSpanningTree(
        restricted, frozenset(tuple(sorted((rmap[u], rmap[v]))) for u, v in inside), rmap[block_root]
    )
    contracted, cmap = g.contract_tube(tube)
    outer_edges = frozenset(
        tuple(sorted((cmap[u], cmap[v]))) for u, v in t.edges if (u, v) not in inside
    )
    outer = RootedSpanningTree(contracted, outer_edges, cmap[t.root])
    return inner, outer


def rst_compose(outer: RootedSpanningTree, inner: RootedSpanningTree, g: Graph,
                tube: Iterable[int]) -> List[RootedSpanningTree]:
    """Trees of g whose cocomposition at the tube gives (inner, outer)."""
    tube = frozenset(tube)
    contracted, _ = g.contract_tube(tube)
    restricted, _ = g.induced(tube)
    if outer.host != contracted or inner.host != restricted:
        raise HostMismatchError(f"trees on {outer.host} and {inner.host} do not compose at {sorted(tube)} in {g}")
    return [t for t in rooted_spanning_trees(g) if rst_cocompose(t, tube) == (inner, outer)]
