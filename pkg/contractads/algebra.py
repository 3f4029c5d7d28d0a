"""
Contractads Algebra - Decorated tree monomials, graded composition and exact linear combinations.

The free shuffle contractad on a set of generators has the decorated
admissible trees as its basis. Signs follow one rule everywhere: list the
odd-degree vertices in a reference order, list them again in the canonical
DFS order of the result, and take the sign of the permutation between the
two lists.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .config import get_settings
from .errors import ContractadError, GraphError, HostMismatchError, UnsupportedError
from .graph_core import Graph, make_family
from .trees import (
    AdmissibleTree,
    Child,
    Node,
    graft,
    leaves_of,
    low_of,
    parse_tree,
    relabel_child,
    replace_subtree,
    tube_partitions,
)

logger = logging.getLogger(__name__)

# Tree monomials are admissible trees whose vertices carry generator names.
TreeMonomial = AdmissibleTree

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class Generator:
    """A generator on a host component, with its transposition character."""
    name: str
    degree: int = 0
    arity: int = 2
    flip: int = 1
    partner: Optional[str] = None
    host: Optional[Graph] = None

    def __post_init__(self):
        if self.arity < 2:
            raise ContractadError(f"generator {self.name} must have arity >= 2")
        if self.flip not in (1, -1):
            raise ContractadError(f"generator {self.name} has flip {self.flip}, expected +1 or -1")
        if self.host is None:
            object.__setattr__(self, "host", make_family("P", self.arity))
        elif self.host.n != self.arity:
            raise ContractadError(f"generator {self.name} has arity {self.arity} but host {self.host}")

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1

    def transposed(self) -> Tuple[int, str]:
        """x^(12) written as sign times a generator name."""
        return self.flip, self.partner or self.name


@dataclass(frozen=True)
class Signature:
    """The generators of a presentation, indexed by name."""
    generators: Tuple[Generator, ...]
    index: Dict[str, Generator] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        index = {g.name: g for g in self.generators}
        if len(index) != len(self.generators):
            raise ContractadError("generator names must be unique")
        for g in self.generators:
            if g.partner is None:
                continue
            twin = index.get(g.partner)
            if twin is None or twin.partner != g.name or twin.flip != g.flip or twin.degree != g.degree:
                raise ContractadError(f"generator {g.name} and its partner {g.partner} do not pair up")
        object.__setattr__(self, "index", index)

    def __hash__(self) -> int:
        return hash(self.generators)

    def __getitem__(self, name: str) -> Generator:
        try:
            return self.index[name]
        except KeyError:
            raise ContractadError(f"unknown generator {name!r}")

    def __contains__(self, name: str) -> bool:
        return name in self.index

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    @property
    def has_odd(self) -> bool:
        return any(g.is_odd for g in self.generators)

    def is_odd(self, label: Optional[str]) -> bool:
        return label is not None and label in self.index and self.index[label].is_odd

    def degree(self, m: TreeMonomial) -> int:
        return sum(self[v.label].degree for v in m.internal_nodes())


def koszul_sign(reference: Sequence[Any], target: Sequence[Any], odd: Iterable[Any]) -> int:
    """Sign of the permutation of the odd items from `reference` to `target` order."""
    odd = set(odd)
    position = {key: i for i, key in enumerate(target)}
    seq = [position[key] for key in reference if key in odd]
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1


class Element:
    """A finite linear combination of tree monomials on one host, with rational coefficients."""

    __slots__ = ("host", "terms")

    def __init__(self, host: Graph, terms: Optional[Dict[TreeMonomial, Scalar]] = None):
        self.host = host
        self.terms: Dict[TreeMonomial, Fraction] = {}
        for m, c in (terms or {}).items():
            if m.host != host:
                raise HostMismatchError(f"monomial {m} is hosted on {m.host}, not {host}")
            if c:
                self.terms[m] = Fraction(c)

    @staticmethod
    def zero(host: Graph) -> "Element":
        return Element(host)

    @staticmethod
    def monomial(m: TreeMonomial, coefficient: Scalar = 1) -> "Element":
        return Element(m.host, {m: coefficient})

    @staticmethod
    def from_terms(host: Graph, terms: Iterable[Tuple[Scalar, Union[str, Child]]]) -> "Element":
        """Build from (coefficient, tree) pairs; trees may be given in text form."""
        total: Dict[TreeMonomial, Fraction] = {}
        for coefficient, tree in terms:
            m = TreeMonomial.build(host, tree)
            total[m] = total.get(m, Fraction(0)) + Fraction(coefficient)
        return Element(host, total)

    def _combine(self, other: "Element", factor: int) -> "Element":
        if self.host != other.host:
            raise HostMismatchError(f"cannot add elements on {self.host} and {other.host}")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            value = terms.get(m, Fraction(0)) + factor * c
            if value:
                terms[m] = value
            else:
                terms.pop(m, None)
        result = Element(self.host)
        result.terms = terms
        return result

    def __add__(self, other: "Element") -> "Element":
        return self._combine(other, 1)

    def __sub__(self, other: "Element") -> "Element":
        return self._combine(other, -1)

    def __neg__(self) -> "Element":
        return self * -1

    def __mul__(self, scalar: Scalar) -> "Element":
        result = Element(self.host)
        if scalar:
            result.terms = {m: c * scalar for m, c in self.terms.items()}
        return result

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.host == other.host and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.host, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[TreeMonomial, Fraction]]:
        return iter(sorted(self.terms.items(), key=lambda item: str(item[0])))

    def coefficient(self, m: TreeMonomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def support(self) -> List[TreeMonomial]:
        return sorted(self.terms, key=str)

    @property
    def weight(self) -> Optional[int]:
        weights = {m.weight for m in self.terms}
        if len(weights) > 1:
            raise ContractadError(f"element {self} is not homogeneous in weight")
        return weights.pop() if weights else None

    def leading_term(self, order: Any) -> Tuple[TreeMonomial, Fraction]:
        """Largest monomial under `order` with its coefficient."""
        if not self.terms:
            raise ContractadError("the zero element has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def monic(self, order: Any) -> "Element":
        _, c = self.leading_term(order)
        return self * (1 / c)

    def normalized(self) -> "Element":
        """Scale so the first term in text order has coefficient 1."""
        if not self.terms:
            return self
        first = min(self.terms, key=str)
        return self * (1 / self.terms[first])

    def to_json(self) -> List[Dict[str, Any]]:
        return [
            {"tree": m.root.to_json() if isinstance(m.root, Node) else m.root, "text": str(m),
             "coefficient": f"{c.numerator}/{c.denominator}"}
            for m, c in self
        ]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self:
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            coefficient = "" if magnitude == 1 else f"{magnitude}*"
            parts.append(f"{sign} {coefficient}{m}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"Element({self.host.spec()}: {self})"


# ---------------------------------------------------------------------------
# Composition and the symmetric group action
# ---------------------------------------------------------------------------

def _odd_keys(root: Child, signature: Optional[Signature]) -> List[FrozenSet[int]]:
    if signature is None or not isinstance(root, Node):
        return []
    return [v.leaves for v in root.dfs if signature.is_odd(v.label)]


def compose(
    outer: TreeMonomial,
    inner: TreeMonomial,
    g: Graph,
    tube: Iterable[int],
    signature: Optional[Signature] = None,
) -> Tuple[int, TreeMonomial]:
    """
    Infinitesimal composition at a tube: graft inner into the leaf of outer labeled by the tube.

    Returns (sign, monomial) where the sign moves the odd vertices from
    outer-DFS-then-inner-DFS order to the DFS order of the result.
    """
    tube = frozenset(tube)
    contracted, cmap = g.contract_tube(tube)
    restricted, rmap = g.induced(tube)
    if outer.host != contracted:
        raise HostMismatchError(f"outer {outer} is hosted on {outer.host}, expected {contracted}")
    if inner.host != restricted:
        raise HostMismatchError(f"inner {inner} is hosted on {inner.host}, expected {restricted}")

    blocks: Dict[int, FrozenSet[int]] = {}
    for v, j in cmap.items():
        blocks[j] = blocks.get(j, frozenset()) | {v}
    slot = cmap[min(tube)]
    back = {new: old for old, new in rmap.items()}
    inner_root = relabel_child(inner.root, back)
    replacements: Dict[int, Child] = {
        j: inner_root if j == slot else next(iter(block)) for j, block in blocks.items()
    }
    root = graft(outer.root, replacements)
    result = TreeMonomial(g, root)

    sign = 1
    if signature is not None and signature.has_odd and isinstance(root, Node):
        reference: List[FrozenSet[int]] = []
        if isinstance(outer.root, Node):
            reference += [frozenset().union(*(blocks[j] for j in v.leaves)) for v in outer.root.dfs]
        if isinstance(inner.root, Node):
            reference += [frozenset(back[i] for i in v.leaves) for v in inner.root.dfs]
        sign = koszul_sign(reference, [v.leaves for v in root.dfs], _odd_keys(root, signature))
    return sign, result


def _act_node(node: Node, mapping: Dict[int, int], signature: Optional[Signature]) -> Tuple[int, Node]:
    coefficient = 1
    kids: List[Child] = []
    for c in node.children:
        if isinstance(c, Node):
            k, moved = _act_node(c, mapping, signature)
            coefficient *= k
            kids.append(moved)
        else:
            kids.append(mapping[c])
    label = node.label
    lows = [low_of(k) for k in kids]
    if lows != sorted(lows) and label is not None and signature is not None:
        if len(kids) != 2:
            raise UnsupportedError(f"permuting the inputs of the {len(kids)}-ary generator {label}")
        flip, label = signature[label].transposed()
        coefficient *= flip
    return coefficient, Node(label, tuple(kids))


def act(
    sigma: Union[Dict[int, int], Sequence[int]],
    x: Union[TreeMonomial, Element],
    signature: Optional[Signature] = None,
) -> Union[Tuple[int, TreeMonomial], Element]:
    """
    Transport along a vertex bijection onto the image ordered graph.

    For a monomial returns (sign, monomial); for an element returns the element.
    """
    mapping = dict(sigma) if isinstance(sigma, dict) else {v: w for v, w in enumerate(sigma, start=1)}
    if isinstance(x, Element):
        target = x.host.relabel(mapping)
        total: Dict[TreeMonomial, Fraction] = {}
        for m, c in x.terms.items():
            sign, moved = act(mapping, m, signature)
            total[moved] = total.get(moved, Fraction(0)) + sign * c
        return Element(target, total)

    target = x.host.relabel(mapping)
    if not isinstance(x.root, Node):
        return 1, TreeMonomial(target, mapping[x.root])
    coefficient, root = _act_node(x.root, mapping, signature)
    if signature is not None and signature.has_odd:
        reference = [frozenset(mapping[v] for v in n.leaves) for n in x.root.dfs]
        coefficient *= koszul_sign(reference, [n.leaves for n in root.dfs], _odd_keys(root, signature))
    return coefficient, TreeMonomial(target, root)


def comb(label: str, g: Graph) -> TreeMonomial:
    """The left comb adding the smallest adjacent vertex at each step."""
    current: Child = 1
    covered = {1}
    while len(covered) < g.n:
        v = min(w for u in covered for w in g.neighbors(u) if w not in covered)
        current = Node(label, (current, v))
        covered.add(v)
    return TreeMonomial(g, current)


# ---------------------------------------------------------------------------
# Enumeration, occurrences and replacement
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _decorated(signature: Signature, g: Graph, subset: FrozenSet[int]) -> Tuple[Tuple[Child, int], ...]:
    if len(subset) == 1:
        return ((next(iter(subset)), 0),)
    arities = {x.arity for x in signature.generators}
    found: List[Tuple[Child, int]] = []
    for blocks in tube_partitions(g, subset):
        if len(blocks) not in arities:
            continue
        in_graph = g.quotient(blocks)
        labels = [x.name for x in signature.generators if x.arity == len(blocks) and x.host == in_graph]
        if not labels:
            continue
        options = [_decorated(signature, g, b) for b in blocks]
        for combo in itertools.product(*options):
            kids = tuple(c for c, _ in combo)
            w = 1 + sum(cw for _, cw in combo)
            for label in labels:
                found.append((Node(label, kids), w))
    return tuple(found)


def enumerate_monomials(signature: Signature, g: Graph, w: Optional[int] = None) -> List[TreeMonomial]:
    """All decorated admissible trees on g, of weight w when given."""
    settings = get_settings()
    settings.check_vertices(g.n)
    if w is not None:
        settings.check_weight(w)
    found = [
        TreeMonomial(g, root)
        for root, weight in _decorated(signature, g, frozenset(g.vertices))
        if w is None or weight == w
    ]
    found.sort(key=str)
    return found


@dataclass(frozen=True)
class Occurrence:
    """A decorated subtree of a monomial, with the inputs hanging below it."""
    top: FrozenSet[int]
    nodes: Tuple[Node, ...]
    blocks: Tuple[Child, ...]
    pattern: TreeMonomial

    @property
    def keys(self) -> FrozenSet[FrozenSet[int]]:
        return frozenset(v.leaves for v in self.nodes)


def _rooted_subtrees(v: Node, size: int) -> List[Tuple[Node, ...]]:
    if size <= 0:
        return []
    results: List[Tuple[Node, ...]] = [(v,)]
    for c in v.children:
        if not isinstance(c, Node):
            continue
        extended = []
        for nodes in results:
            extended.append(nodes)
            room = size - len(nodes)
            for sub in _rooted_subtrees(c, room):
                extended.append(nodes + sub)
        results = extended
    return results


def _normalize(host: Graph, nodes: Tuple[Node, ...]) -> Occurrence:
    keys = {v.leaves for v in nodes}
    hanging: List[Child] = []
    for v in nodes:
        for c in v.children:
            if not (isinstance(c, Node) and c.leaves in keys):
                hanging.append(c)
    hanging.sort(key=low_of)
    rank = {low_of(h): i for i, h in enumerate(hanging, start=1)}

    def build(v: Node) -> Node:
        return Node(v.label, tuple(
            build(c) if isinstance(c, Node) and c.leaves in keys else rank[low_of(c)]
            for c in v.children
        ))

    pattern_host = host.quotient([leaves_of(h) for h in hanging])
    return Occurrence(nodes[0].leaves, nodes, tuple(hanging), TreeMonomial(pattern_host, build(nodes[0])))


def subtree_patterns(t: TreeMonomial, max_weight: int, exact: bool = False) -> Iterator[Occurrence]:
    """Every connected decorated subtree with at most (or exactly) max_weight vertices."""
    for v in t.internal_nodes():
        for nodes in _rooted_subtrees(v, max_weight):
            if exact and len(nodes) != max_weight:
                continue
            yield _normalize(t.host, nodes)


def occurrences(t: TreeMonomial, pattern: TreeMonomial) -> List[Occurrence]:
    """All embeddings of pattern in t as a decorated subtree on the induced ordered host."""
    if not isinstance(pattern.root, Node):
        return []
    return [
        occ for occ in subtree_patterns(t, pattern.weight, exact=True)
        if occ.pattern == pattern
    ]


def _occurrence_sign(
    root: Node,
    pattern_keys: List[FrozenSet[int]],
    top: FrozenSet[int],
    blocks: Tuple[Child, ...],
    signature: Signature,
) -> int:
    odd = _odd_keys(root, signature)
    if not odd:
        return 1
    context = [v.leaves for v in root.dfs if not v.leaves <= top]
    hanging = [v.leaves for b in blocks if isinstance(b, Node) for v in b.dfs]
    return koszul_sign(pattern_keys + context + hanging, [v.leaves for v in root.dfs], odd)


def replace(
    t: TreeMonomial,
    occ: Occurrence,
    replacement: Element,
    signature: Optional[Signature] = None,
) -> Element:
    """Substitute an element for the matched subtree, linearly and with Koszul signs."""
    if not replacement:
        return Element.zero(t.host)
    if replacement.host != occ.pattern.host:
        raise HostMismatchError(f"replacement on {replacement.host} does not fit a pattern on {occ.pattern.host}")
    if replacement.weight != len(occ.nodes):
        raise ContractadError(
            f"replacement of weight {replacement.weight} for a subtree of weight {len(occ.nodes)}"
        )
    graded = signature is not None and signature.has_odd
    base = 1
    if graded:
        base = _occurrence_sign(t.root, [v.leaves for v in occ.nodes], occ.top, occ.blocks, signature)

    fill = {i: b for i, b in enumerate(occ.blocks, start=1)}
    total: Dict[TreeMonomial, Fraction] = {}
    for m, c in replacement.terms.items():
        new_sub = graft(m.root, fill)
        root = replace_subtree(t.root, occ.top, new_sub)
        coefficient = c
        if graded:
            keys = [frozenset().union(*(leaves_of(fill[j]) for j in v.leaves)) for v in m.root.dfs]
            coefficient *= base * _occurrence_sign(root, keys, occ.top, occ.blocks, signature)
        key = TreeMonomial(t.host, root)
        total[key] = total.get(key, Fraction(0)) + coefficient
    return Element(t.host, total)


def symmetrize_presentation(
    relations: Dict[Graph, List[Element]],
    signature: Signature,
) -> Dict[Graph, List[Element]]:
    """
    Expand relations given on one ordering of each host to all orderings.

    Every relabeling of a host is applied to each relation; translates that
    agree up to a scalar are kept once.
    """
    expanded: Dict[Graph, List[Element]] = {}
    seen: Dict[Graph, set] = {}
    for host, elements in relations.items():
        if host.n > 5:
            raise ContractadError(f"relation host {host} has more than 5 vertices")
        for perm in itertools.permutations(range(1, host.n + 1)):
            mapping = dict(zip(range(1, host.n + 1), perm))
            for r in elements:
                image = act(mapping, r, signature)
                if not image:
                    continue
                key = image.normalized()
                bucket = seen.setdefault(image.host, set())
                if key in bucket:
                    continue
                bucket.add(key)
                expanded.setdefault(image.host, []).append(image)
    logger.debug("symmetrized %d relation hosts into %d ordered hosts", len(relations), len(expanded))
    return expanded
