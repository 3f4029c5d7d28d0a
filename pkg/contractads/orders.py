"""
Contractads Orders - Monomial orders on tree monomials.

graphpermlex compares the root-to-leaf words of two monomials leaf by leaf
(degree first, then letters) and breaks ties with the left-to-right leaf
permutation. The quantum order first compares the number of m-vertices and
then values each word in the monoid <m, b, q | mq=qm, bq=qb, bm=mbq>.

Orientation of the quantum order: more m-vertices is larger; for words with
canonical forms m^k b^l q^j, a larger k is smaller, then a larger l is
larger, then a larger j is larger. This reproduces the chain

    (0,(bb,bb,b)) < (1,(mb,mb,m)) < (1,(mbq,mbq,b)) < (2,(mm,mm,m))

on the ordered path P3.
"""

import functools
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import Signature, compose, enumerate_monomials
from .errors import ContractadError, HostMismatchError
from .graph_core import Graph
from .trees import AdmissibleTree, Node

logger = logging.getLogger(__name__)

TreeMonomial = AdmissibleTree


class OrderKind(Enum):
    """The supported monomial orders."""
    GRAPHPERMLEX = "graphpermlex"
    REVERSE_GRAPHPERMLEX = "rev-graphpermlex"
    QUANTUM = "quantum"

    @staticmethod
    def from_string(value: str) -> "OrderKind":
        for kind in OrderKind:
            if kind.value == value:
                return kind
        raise ContractadError(
            f"unknown order {value!r}; expected one of {', '.join(k.value for k in OrderKind)}"
        )


@functools.total_ordering
class _Reversed:
    """Sort key with inverted comparisons."""

    __slots__ = ("key",)

    def __init__(self, key: Any):
        self.key = key

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Reversed) and self.key == other.key

    def __lt__(self, other: "_Reversed") -> bool:
        return other.key < self.key

    def __hash__(self) -> int:
        return hash(self.key)


@dataclass(frozen=True)
class QuantumMonomial:
    """Canonical form m^k b^l q^q of a quantum monoid word."""
    k: int
    l: int
    q: int

    def key(self) -> Tuple[int, int, int]:
        return (-self.k, self.l, self.q)

    def __str__(self) -> str:
        return "m" * self.k + "b" * self.l + "q" * self.q


def qm_canonical(word: Iterable[str]) -> QuantumMonomial:
    """
    Normal form under mq->qm, bq->qb, bm->mbq.

    Moving every m left past the b's in front of it creates one q per
    (b, m) inversion.
    """
    k = l = q = 0
    for letter in word:
        if letter == "m":
            k += 1
            q += l
        elif letter == "b":
            l += 1
        elif letter == "q":
            q += 1
        else:
            raise ContractadError(f"letter {letter!r} is not in {{m, b, q}}")
    return QuantumMonomial(k, l, q)


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order with a letter ranking on generator names."""
    kind: OrderKind
    letters: Tuple[str, ...] = ()

    @staticmethod
    def parse(name: str, letters: Sequence[str] = ()) -> "MonomialOrder":
        return MonomialOrder(OrderKind.from_string(name), tuple(letters))

    @property
    def name(self) -> str:
        return self.kind.value

    def reversed(self) -> "MonomialOrder":
        """graphpermlex and its reverse swap; the quantum order is kept."""
        if self.kind is OrderKind.GRAPHPERMLEX:
            return MonomialOrder(OrderKind.REVERSE_GRAPHPERMLEX, self.letters)
        if self.kind is OrderKind.REVERSE_GRAPHPERMLEX:
            return MonomialOrder(OrderKind.GRAPHPERMLEX, self.letters)
        return self

    def rank(self, label: Optional[str]) -> int:
        if label in self.letters:
            return self.letters.index(label)
        raise ContractadError(f"letter {label!r} is not ranked by the {self.name} order {self.letters}")

    def key(self, m: TreeMonomial) -> Any:
        if self.kind is OrderKind.GRAPHPERMLEX:
            return _graphpermlex_key(m.root, self.letters)
        if self.kind is OrderKind.REVERSE_GRAPHPERMLEX:
            return _Reversed(_graphpermlex_key(m.root, self.letters))
        return _quantum_key(m.root, self.letters)

    def compare(self, a: TreeMonomial, b: TreeMonomial) -> int:
        """-1, 0 or 1; monomials must share host and weight."""
        if a.host != b.host:
            raise HostMismatchError(f"cannot compare monomials on {a.host} and {b.host}")
        if a.weight != b.weight:
            raise HostMismatchError(f"cannot compare weights {a.weight} and {b.weight}")
        ka, kb = self.key(a), self.key(b)
        return 0 if ka == kb else (-1 if ka < kb else 1)

    def sorted(self, monomials: Iterable[TreeMonomial], descending: bool = False) -> List[TreeMonomial]:
        return sorted(monomials, key=self.key, reverse=descending)

    def __str__(self) -> str:
        return f"{self.name}({'<'.join(self.letters)})"


@functools.lru_cache(maxsize=1 << 18)
def _graphpermlex_key(root: Any, letters: Tuple[str, ...]) -> Tuple[Any, Tuple[int, ...]]:
    if not isinstance(root, Node):
        return ((), (root,))
    rank = {name: i for i, name in enumerate(letters)}
    try:
        words = tuple((len(w), tuple(rank[x] for x in w)) for w in root.words)
    except KeyError as missing:
        raise ContractadError(f"letter {missing} is not ranked by {letters}")
    return words, root.leaf_order


@functools.lru_cache(maxsize=1 << 18)
def _quantum_key(root: Any, letters: Tuple[str, ...]) -> Tuple[Any, ...]:
    if not isinstance(root, Node):
        return (0, (), (root,), ((), (root,)))
    m_letter, b_letter = letters[:2] if len(letters) >= 2 else ("m", "b")
    translate = {m_letter: "m", b_letter: "b"}
    m_count = 0
    for v in root.dfs:
        if v.label not in translate:
            raise ContractadError(f"decoration {v.label!r} is outside {{{m_letter}, {b_letter}}}")
        if translate[v.label] == "m":
            m_count += 1
    words = tuple(qm_canonical(translate[x] for x in w).key() for w in root.words)
    return (m_count, words, root.leaf_order, _graphpermlex_key(root, (m_letter, b_letter)))


def compare_graphpermlex(a: TreeMonomial, b: TreeMonomial, o: MonomialOrder) -> int:
    if o.kind is OrderKind.QUANTUM:
        raise ContractadError("compare_graphpermlex needs a graphpermlex order")
    return o.compare(a, b)


def compare_quantum(a: TreeMonomial, b: TreeMonomial, letters: Tuple[str, str] = ("m", "b")) -> int:
    return MonomialOrder(OrderKind.QUANTUM, letters).compare(a, b)


@dataclass
class MonotonicityFailure:
    """A pair whose order flips or ties after composing with a third monomial."""
    graph: Graph
    tube: Tuple[int, ...]
    side: str
    before: int
    after: int


@dataclass
class MonotonicityReport:
    """Outcome of a seeded sample of compositions a∘c versus b∘c."""
    order: MonomialOrder
    seed: int
    samples: int = 0
    failures: List[MonotonicityFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.samples > 0 and not self.failures


def sample_monotonicity(o: MonomialOrder, signature: Signature, graphs: Sequence[Graph],
                        samples: int, seed: int) -> MonotonicityReport:
    """
    Check a < b implies a∘c < b∘c and c∘a < c∘b on random triples.

    Each sample picks a graph, a proper tube with at least two vertices, a
    side and three monomials. The same seed always draws the same samples.
    """
    rng = random.Random(seed)
    report = MonotonicityReport(o, seed)
    cache: Dict[Graph, List[TreeMonomial]] = {}

    def monomials(h: Graph) -> List[TreeMonomial]:
        if h not in cache:
            cache[h] = enumerate_monomials(signature, h)
        return cache[h]

    candidates = [(g, t) for g in graphs for t in g.tubes() if 2 <= len(t) < g.n]
    if not candidates:
        raise ContractadError("no graph offers a proper tube with two or more vertices")
    attempts = 0
    while report.samples < samples:
        attempts += 1
        if attempts > 100 * max(samples, 1):
            raise ContractadError(f"only {report.samples} of {samples} samples found comparable pairs")
        g, tube = rng.choice(candidates)
        outer_host = g.contract_tube(tube)[0]
        inner_host = g.induced(tube)[0]
        if rng.random() < 0.5:
            side, varied, fixed = "outer", monomials(outer_host), monomials(inner_host)
        else:
            side, varied, fixed = "inner", monomials(inner_host), monomials(outer_host)
        if len(varied) < 2:
            continue
        a, b = rng.sample(varied, 2)
        c = rng.choice(fixed)
        if a.weight != b.weight:
            continue
        if side == "outer":
            left, right = compose(a, c, g, tube, signature)[1], compose(b, c, g, tube, signature)[1]
        else:
            left, right = compose(c, a, g, tube, signature)[1], compose(c, b, g, tube, signature)[1]
        before, after = o.compare(a, b), o.compare(left, right)
        if before != after or after == 0:
            report.failures.append(MonotonicityFailure(g, tuple(sorted(tube)), side, before, after))
        report.samples += 1
    logger.info("monotonicity of %s: %d samples, %d failures", o, report.samples, len(report.failures))
    return report
