"""
Contractads Trees - Admissible rooted trees, substitution, planar forms and nested sets.

A tree is a nest of Node values whose leaves are the integer vertices of a
host graph. Children are always sorted by their minimal leaf, so every
Node is already in canonical planar form and internal vertices are
identified by their leaf sets.
"""

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .config import get_settings
from .errors import GraphError, GraphParseError, HostMismatchError
from .graph_core import Graph, GraphPartition, Tube, _tubes

logger = logging.getLogger(__name__)

Child = Union[int, "Node"]


def leaves_of(child: Child) -> FrozenSet[int]:
    return child.leaves if isinstance(child, Node) else frozenset((child,))


def low_of(child: Child) -> int:
    return child.low if isinstance(child, Node) else child


@dataclass(frozen=True)
class Node:
    """An internal tree vertex with an optional decoration label."""
    label: Optional[str]
    children: Tuple[Child, ...]
    leaves: FrozenSet[int] = field(init=False, repr=False, compare=False)
    low: int = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.children:
            raise GraphError("a tree vertex needs at least one input")
        kids = tuple(sorted(self.children, key=low_of))
        leaves = frozenset().union(*(leaves_of(c) for c in kids))
        if sum(len(leaves_of(c)) for c in kids) != len(leaves):
            raise GraphError(f"children of a vertex share leaves: {kids}")
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "leaves", leaves)
        object.__setattr__(self, "low", min(leaves))
        object.__setattr__(self, "_hash", hash((self.label, kids)))

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def dfs(self) -> Tuple["Node", ...]:
        """Internal vertices, root first, children in planar order."""
        order: List[Node] = [self]
        for child in self.children:
            if isinstance(child, Node):
                order.extend(child.dfs)
        return tuple(order)

    @property
    def weight(self) -> int:
        return len(self.dfs)

    @cached_property
    def words(self) -> Tuple[Tuple[str, ...], ...]:
        """Root-to-leaf label words in increasing leaf order."""
        paths: Dict[int, Tuple[str, ...]] = {}

        def walk(node: Node, prefix: Tuple[str, ...]) -> None:
            here = prefix + (node.label or "",)
            for child in node.children:
                if isinstance(child, Node):
                    walk(child, here)
                else:
                    paths[child] = here

        walk(self, ())
        return tuple(paths[v] for v in sorted(paths))

    @cached_property
    def leaf_order(self) -> Tuple[int, ...]:
        """Leaf labels read left to right."""
        order: List[int] = []
        for child in self.children:
            if isinstance(child, Node):
                order.extend(child.leaf_order)
            else:
                order.append(child)
        return tuple(order)

    def find(self, leaves: FrozenSet[int]) -> Optional["Node"]:
        """The internal vertex with the given leaf set, if any."""
        if self.leaves == leaves:
            return self
        for child in self.children:
            if isinstance(child, Node) and leaves <= child.leaves:
                return child.find(leaves)
        return None

    def relabel(self, mapping: Dict[int, int]) -> "Node":
        return Node(self.label, tuple(relabel_child(c, mapping) for c in self.children))

    def with_label(self, label: Optional[str]) -> "Node":
        return Node(label, self.children)

    def to_json(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "children": [c.to_json() if isinstance(c, Node) else c for c in self.children],
        }

    def __str__(self) -> str:
        return f"{self.label or ''}({','.join(str(c) for c in self.children)})"


def relabel_child(child: Child, mapping: Dict[int, int]) -> Child:
    return child.relabel(mapping) if isinstance(child, Node) else mapping[child]


def graft(child: Child, replacements: Dict[int, Child]) -> Child:
    """Replace leaves by subtrees."""
    if isinstance(child, Node):
        return Node(child.label, tuple(graft(c, replacements) for c in child.children))
    return replacements.get(child, child)


def replace_subtree(child: Child, leaves: FrozenSet[int], new: Child) -> Child:
    """Swap the subtree whose leaf set is `leaves` for `new` (same leaf set)."""
    if leaves_of(child) == leaves:
        return new
    if not isinstance(child, Node):
        raise GraphError(f"no subtree with leaves {sorted(leaves)}")
    return Node(child.label, tuple(
        replace_subtree(c, leaves, new) if leaves <= leaves_of(c) else c for c in child.children
    ))


def child_from_json(data: Any) -> Child:
    if isinstance(data, int):
        return data
    return Node(data.get("label"), tuple(child_from_json(c) for c in data["children"]))


_LABEL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_~'!*]*")
_INT_RE = re.compile(r"\d+")


def parse_tree(text: str) -> Child:
    """Parse the text form, e.g. "m(b(1,2),3)"; unlabeled vertices read "(1,2)"."""
    pos = 0

    def skip() -> None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def child() -> Child:
        nonlocal pos
        skip()
        match = _INT_RE.match(text, pos)
        if match:
            pos = match.end()
            return int(match.group())
        label = None
        match = _LABEL_RE.match(text, pos)
        if match:
            label = match.group()
            pos = match.end()
        skip()
        if pos >= len(text) or text[pos] != "(":
            raise GraphParseError("expected '('", text, pos)
        pos += 1
        kids = [child()]
        skip()
        while pos < len(text) and text[pos] == ",":
            pos += 1
            kids.append(child())
            skip()
        if pos >= len(text) or text[pos] != ")":
            raise GraphParseError("expected ')' or ','", text, pos)
        pos += 1
        return Node(label, tuple(kids))

    result = child()
    skip()
    if pos != len(text):
        raise GraphParseError("trailing characters", text, pos)
    return result


@dataclass(frozen=True)
class AdmissibleTree:
    """A rooted tree whose leaves are the vertices of `host` and whose subtrees span tubes."""
    host: Graph
    root: Child

    @staticmethod
    def build(host: Graph, root: Union[Child, str]) -> "AdmissibleTree":
        """Validated constructor; accepts the text form too."""
        if isinstance(root, str):
            root = parse_tree(root)
        tree = AdmissibleTree(host, root)
        tree.validate()
        return tree

    def validate(self) -> None:
        if self.leaves != frozenset(self.host.vertices):
            raise GraphError(f"leaves {sorted(self.leaves)} do not match the vertices of {self.host}")
        for node in self.internal_nodes():
            for c in node.children:
                if not self.host.is_tube(leaves_of(c)):
                    raise GraphError(f"subtree {c} of {self} does not span a tube")

    @property
    def leaves(self) -> FrozenSet[int]:
        return leaves_of(self.root)

    def internal_nodes(self) -> Tuple[Node, ...]:
        return self.root.dfs if isinstance(self.root, Node) else ()

    @property
    def weight(self) -> int:
        return len(self.internal_nodes())

    def internal_edges(self) -> List[Node]:
        """Non-root internal vertices; each stands for its output edge."""
        return list(self.internal_nodes()[1:])

    def is_stable(self) -> bool:
        return all(len(v.children) >= 2 for v in self.internal_nodes())

    def to_json(self) -> Dict[str, Any]:
        return {
            "host": self.host.to_json(),
            "tree": self.root.to_json() if isinstance(self.root, Node) else self.root,
        }

    def __str__(self) -> str:
        return str(self.root)


@dataclass(frozen=True)
class PlanarForm:
    """Path words per leaf and the left-to-right leaf permutation."""
    path_sequence: Tuple[Tuple[str, ...], ...]
    leaf_permutation: Tuple[int, ...]

    def __str__(self) -> str:
        words = ",".join("".join(w) for w in self.path_sequence)
        return f"(({words}),{''.join(str(v) for v in self.leaf_permutation)})"


def canonical_planar(t: AdmissibleTree) -> PlanarForm:
    if not isinstance(t.root, Node):
        return PlanarForm(((),), (t.root,))
    return PlanarForm(t.root.words, t.root.leaf_order)


def input_graph(t: AdmissibleTree, v: Node) -> Graph:
    """In(v): the restriction to L(v) contracted along the children of v."""
    return t.host.quotient([leaves_of(c) for c in v.children])


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=65536)
def tube_partitions(g: Graph, subset: FrozenSet[int]) -> Tuple[Tuple[Tube, ...], ...]:
    """Partitions of a tube into tubes of g, blocks sorted by minimal vertex."""
    tubes = [t for t in _tubes(g) if t <= subset]
    result: List[Tuple[Tube, ...]] = []

    def extend(remaining: FrozenSet[int], chosen: List[Tube]) -> None:
        if not remaining:
            result.append(tuple(chosen))
            return
        first = min(remaining)
        for tube in tubes:
            if first in tube and tube <= remaining:
                chosen.append(tube)
                extend(remaining - tube, chosen)
                chosen.pop()

    extend(subset, [])
    return tuple(result)


def _combine(options: List[List[Tuple[Child, int]]], budget: int) -> List[Tuple[Tuple[Child, ...], int]]:
    combos: List[Tuple[Tuple[Child, ...], int]] = [((), 0)]
    for choices in options:
        combos = [(kids + (c,), w + cw) for kids, w in combos for c, cw in choices if w + cw <= budget]
    return combos


def _trees_on(
    g: Graph,
    subset: FrozenSet[int],
    allowed: Callable[[int], bool],
    budget: int,
    cache: Dict[Tuple[FrozenSet[int], int], List[Tuple[Child, int]]],
) -> List[Tuple[Child, int]]:
    key = (subset, budget)
    if key in cache:
        return cache[key]
    found: List[Tuple[Child, int]] = []
    if len(subset) == 1:
        found.append((next(iter(subset)), 0))
    if budget > 0:
        for blocks in tube_partitions(g, subset):
            if not allowed(len(blocks)):
                continue
            options = [_trees_on(g, b, allowed, budget - 1, cache) for b in blocks]
            for kids, w in _combine(options, budget - 1):
                found.append((Node(None, kids), w + 1))
    cache[key] = found
    return found


def enumerate_admissible_trees(
    g: Graph,
    mode: str = "stable",
    arities: Optional[Iterable[int]] = None,
    max_weight: Optional[int] = None,
) -> List[AdmissibleTree]:
    """
    Enumerate admissible trees on g.

    mode "stable": every vertex has at least two inputs.
    mode "arity": every vertex has a number of inputs in `arities`.
    mode "weight": all trees with at most `max_weight` vertices, unary ones included.
    """
    settings = get_settings()
    settings.check_vertices(g.n)
    if mode == "stable":
        allowed: Callable[[int], bool] = lambda k: k >= 2
        budget = g.n - 1
    elif mode == "arity":
        if not arities:
            raise GraphError("mode 'arity' needs a nonempty set of arities")
        arity_set = frozenset(arities)
        if 1 in arity_set:
            raise GraphError("unary arities need mode 'weight' with a weight bound")
        allowed = lambda k: k in arity_set
        budget = g.n - 1
    elif mode == "weight":
        if max_weight is None:
            raise GraphError("mode 'weight' needs max_weight")
        settings.check_weight(max_weight)
        allowed = lambda k: True
        budget = max_weight
    else:
        raise GraphError(f"unknown enumeration mode {mode!r}")

    cache: Dict[Tuple[FrozenSet[int], int], List[Tuple[Child, int]]] = {}
    roots = _trees_on(g, frozenset(g.vertices), allowed, budget, cache)
    trees = [AdmissibleTree(g, root) for root, _ in roots]
    if mode != "weight":
        trees = [t for t in trees if isinstance(t.root, Node) or g.n == 1]
    trees.sort(key=lambda t: (t.weight, str(t)))
    return trees


def stable_trees(g: Graph) -> Dict[int, List[AdmissibleTree]]:
    """Stable trees grouped by internal-edge count."""
    grouped: Dict[int, List[AdmissibleTree]] = {}
    for t in enumerate_admissible_trees(g, "stable"):
        grouped.setdefault(max(t.weight - 1, 0), []).append(t)
    return grouped


# ---------------------------------------------------------------------------
# Substitution and edges
# ---------------------------------------------------------------------------

def substitute(
    outer: AdmissibleTree,
    inners: Dict[FrozenSet[int], AdmissibleTree],
    g: Graph,
    partition: GraphPartition,
) -> AdmissibleTree:
    """Graft the inner trees on the blocks of a partition into the leaves of outer."""
    if outer.host != g.quotient(partition.blocks):
        raise HostMismatchError(f"outer tree {outer} is not hosted on {g}/{partition}")
    replacements: Dict[int, Child] = {}
    for index, block in enumerate(partition.blocks, start=1):
        inner = inners.get(block)
        if inner is None:
            if len(block) != 1:
                raise HostMismatchError(f"no inner tree for block {sorted(block)}")
            replacements[index] = next(iter(block))
            continue
        restricted, _ = g.induced(block)
        if inner.host != restricted:
            raise HostMismatchError(f"inner tree {inner} is not hosted on the block {sorted(block)}")
        back = dict(enumerate(sorted(block), start=1))
        replacements[index] = relabel_child(inner.root, back)
    return AdmissibleTree(g, graft(outer.root, replacements))


def edge_order(t: AdmissibleTree) -> List[Node]:
    """
    Internal edges listed e_1, e_2, ... increasing for the contraction order.

    e comes before e' when the sorted leaf word of e' is a proper prefix of,
    or lexicographically smaller than, that of e.
    """
    return sorted(t.internal_edges(), key=lambda v: tuple(sorted(v.leaves)), reverse=True)


def contract_tree_edge(t: AdmissibleTree, e: Node) -> Tuple[AdmissibleTree, int]:
    """Merge an internal edge into its parent; returns the tree and the edge's position."""
    order = edge_order(t)
    keys = [v.leaves for v in order]
    if e.leaves not in keys:
        raise GraphError(f"{e} is not an internal edge of {t}")
    position = keys.index(e.leaves) + 1

    def merge(node: Node) -> Node:
        kids: List[Child] = []
        for c in node.children:
            if isinstance(c, Node) and c.leaves == e.leaves:
                kids.extend(c.children)
            elif isinstance(c, Node) and e.leaves < c.leaves:
                kids.append(merge(c))
            else:
                kids.append(c)
        return Node(node.label, tuple(kids))

    return AdmissibleTree(t.host, merge(t.root)), position


def nested_set_of(t: AdmissibleTree) -> FrozenSet[Tube]:
    if not t.is_stable():
        raise GraphError(f"{t} is not stable")
    return frozenset(v.leaves for v in t.internal_edges())


def nested_sets(g: Graph) -> List[FrozenSet[Tube]]:
    """Nonempty nested sets of proper tubes with at least two vertices."""
    full = frozenset(g.vertices)
    candidates = sorted((t for t in _tubes(g) if 1 < len(t) < len(full)), key=lambda t: (len(t), sorted(t)))

    def compatible(a: Tube, b: Tube) -> bool:
        if a <= b or b <= a:
            return True
        return not (a & b) and not g.is_tube(a | b)

    found: List[FrozenSet[Tube]] = []

    def extend(start: int, chosen: List[Tube]) -> None:
        for i in range(start, len(candidates)):
            tube = candidates[i]
            if all(compatible(tube, other) for other in chosen):
                chosen.append(tube)
                found.append(frozenset(chosen))
                extend(i + 1, chosen)
                chosen.pop()

    extend(0, [])
    return found


def restrict_tree(t: AdmissibleTree, e: Node) -> AdmissibleTree:
    """T_e on g|_{L_e}."""
    restricted, mapping = t.host.induced(e.leaves)
    return AdmissibleTree(restricted, e.relabel(mapping))


def quotient_tree(t: AdmissibleTree, e: Node) -> AdmissibleTree:
    """T^e on g/L_e, with the subtree above e collapsed to a leaf."""
    contracted, mapping = t.host.contract_tube(e.leaves)
    collapsed = replace_subtree(t.root, e.leaves, e.low)
    return AdmissibleTree(contracted, relabel_child(collapsed, mapping))
