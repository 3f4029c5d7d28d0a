"""
Contractads Grobner - Presentations, normal forms, truncated Buchberger completion,
the weight-3 PBW criterion and Koszul-dual presentations.

A Gröbner basis is always tagged with the (vertex count, weight) region in
which every S-pair was processed. Queries outside that region raise
CertificateError instead of extrapolating.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple

from . import linalg
from .algebra import (
    Element,
    Generator,
    Occurrence,
    Signature,
    TreeMonomial,
    enumerate_monomials,
    replace,
    subtree_patterns,
)
from .config import Settings, get_settings
from .errors import BoundExceededError, CertificateError, ContractadError, UnsupportedError
from .graph_core import Graph, connected_graphs, family_name
from .orders import MonomialOrder, OrderKind
from .trees import Node

logger = logging.getLogger(__name__)


@dataclass
class Presentation:
    """Generators with relations attached to ordered-graph components."""
    name: str
    signature: Signature
    relations: Dict[Graph, List[Element]] = field(default_factory=dict)
    order: Optional[MonomialOrder] = None
    description: str = ""

    @property
    def generators(self) -> List[Generator]:
        return list(self.signature.generators)

    def relations_on(self, g: Graph) -> List[Element]:
        return self.relations.get(g, [])

    def hosts(self) -> List[Graph]:
        return sorted(self.relations, key=lambda g: (g.n, g.sorted_edges()))

    @property
    def is_binary(self) -> bool:
        return all(x.arity == 2 for x in self.signature.generators)

    @property
    def max_relation_weight(self) -> int:
        return max((r.weight or 0 for rs in self.relations.values() for r in rs), default=0)

    @property
    def is_quadratic(self) -> bool:
        return all(r.weight == 2 for rs in self.relations.values() for r in rs)

    def default_order(self) -> MonomialOrder:
        if self.order is not None:
            return self.order
        return MonomialOrder(OrderKind.GRAPHPERMLEX, tuple(self.signature.names))

    def relation_count(self) -> int:
        return sum(len(rs) for rs in self.relations.values())


def _binary_weight(p: Presentation, g: Graph) -> int:
    if not p.is_binary:
        raise UnsupportedError(f"{p.name} has non-binary generators; pass the weight explicitly")
    return g.n - 1


def echelon(elements: Iterable[Element], order: MonomialOrder) -> List[Element]:
    """Reduced row echelon basis of the span: monic, distinct leading terms, tails reduced."""
    elements = [e for e in elements if e]
    if not elements:
        return []
    host = elements[0].host
    support = {m for e in elements for m in e.terms}
    columns = order.sorted(support, descending=True)
    index = {m: i for i, m in enumerate(columns)}
    rows = [{index[m]: c for m, c in e.terms.items()} for e in elements]
    reduced, _ = linalg.rref(rows, len(columns))
    return [Element(host, {columns[j]: c for j, c in row.items()}) for row in reduced]


@dataclass
class GrobnerBasis:
    """Monic, LT-reduced elements per host plus the certified region."""
    presentation: Presentation
    order: MonomialOrder
    elements: Dict[Graph, List[Element]] = field(default_factory=dict)
    certified: Set[Tuple[int, int]] = field(default_factory=set)
    complete: bool = False
    certificate: str = "truncated"
    incomplete_reason: Optional[str] = None
    leading: Dict[TreeMonomial, Element] = field(default_factory=dict, repr=False)

    @property
    def signature(self) -> Signature:
        return self.presentation.signature

    @property
    def max_weight(self) -> int:
        return max((m.weight for m in self.leading), default=0)

    def add(self, element: Element) -> Element:
        element = element.monic(self.order)
        lt, _ = element.leading_term(self.order)
        if lt in self.leading:
            raise ContractadError(f"leading term {lt} is already in the basis")
        self.elements.setdefault(element.host, []).append(element)
        self.leading[lt] = element
        return element

    def replace_host(self, host: Graph, elements: List[Element]) -> None:
        for old in self.elements.pop(host, []):
            self.leading.pop(old.leading_term(self.order)[0], None)
        for e in elements:
            self.add(e)

    def all_elements(self) -> List[Element]:
        hosts = sorted(self.elements, key=lambda g: (g.n, g.sorted_edges()))
        return [e for h in hosts for e in self.elements[h]]

    def leading_terms(self) -> List[TreeMonomial]:
        return sorted(self.leading, key=lambda m: (m.host.n, m.host.sorted_edges(), str(m)))

    def certify(self, n: int, w: int) -> None:
        self.certified.add((n, w))

    def covers(self, n: int, w: int) -> bool:
        if self.complete:
            return True
        # below the lowest relation weight nothing can be reduced
        lowest = min((r.weight or 0 for rs in self.presentation.relations.values() for r in rs), default=None)
        if lowest is None or w < lowest:
            return True
        return (n, w) in self.certified

    def require(self, n: int, w: int) -> None:
        if not self.covers(n, w):
            raise CertificateError(
                f"Gröbner basis of {self.presentation.name} is not certified for "
                f"{n} vertices at weight {w} (certified: {sorted(self.certified)})"
            )

    def find_divisor(self, m: TreeMonomial) -> Optional[Tuple[Occurrence, Element]]:
        if not self.leading:
            return None
        for occ in subtree_patterns(m, self.max_weight):
            element = self.leading.get(occ.pattern)
            if element is not None:
                return occ, element
        return None

    def divisors(self, m: TreeMonomial) -> List[Tuple[Occurrence, Element]]:
        found = []
        for occ in subtree_patterns(m, self.max_weight):
            element = self.leading.get(occ.pattern)
            if element is not None:
                found.append((occ, element))
        return found

    def is_normal(self, m: TreeMonomial) -> bool:
        return self.find_divisor(m) is None

    @staticmethod
    def from_relations(p: Presentation, o: MonomialOrder) -> "GrobnerBasis":
        """The echelonized relations, certified up to the relation hosts' size."""
        gb = GrobnerBasis(p, o)
        for host in p.hosts():
            for e in echelon(p.relations[host], o):
                gb.add(e)
        if p.is_binary:
            for n in range(1, max((h.n for h in p.relations), default=0) + 1):
                gb.certify(n, n - 1)
        return gb


def _reduce(x: Element, gb: GrobnerBasis) -> Element:
    order = gb.order
    signature = gb.signature
    work: Dict[TreeMonomial, Fraction] = dict(x.terms)
    normal: Dict[TreeMonomial, Fraction] = {}
    while work:
        m = max(work, key=order.key)
        c = work.pop(m)
        found = gb.find_divisor(m)
        if found is None:
            normal[m] = c
            continue
        occ, f = found
        top = order.key(m)
        for m2, c2 in replace(m, occ, f, signature).terms.items():
            if m2 == m:
                continue
            if not order.key(m2) < top:
                raise ContractadError(f"order {order} is not monotone: {m2} does not lie below {m}")
            value = work.get(m2, Fraction(0)) - c * c2
            if value:
                work[m2] = value
            else:
                work.pop(m2, None)
    return Element(x.host, normal)


def normal_form(x: Element, gb: GrobnerBasis) -> Element:
    """Fully reduced representative of x modulo the ideal."""
    if not x:
        return x
    gb.require(x.host.n, x.weight)
    return _reduce(x, gb)


def _overlapping_pairs(
    t: TreeMonomial, divisors: List[Tuple[Occurrence, Element]]
) -> Iterable[Tuple[Tuple[Occurrence, Element], Tuple[Occurrence, Element]]]:
    everything = frozenset(v.leaves for v in t.internal_nodes())
    for i in range(len(divisors)):
        for j in range(i + 1, len(divisors)):
            a, b = divisors[i][0], divisors[j][0]
            if a.keys & b.keys and (a.keys | b.keys) == everything:
                yield divisors[i], divisors[j]


def _s_polynomials_at(t: TreeMonomial, gb: GrobnerBasis) -> List[Element]:
    found = []
    for (o1, f1), (o2, f2) in _overlapping_pairs(t, gb.divisors(t)):
        s = replace(t, o1, f1, gb.signature) - replace(t, o2, f2, gb.signature)
        if s:
            found.append(s)
    return found


def s_polynomials(f: Element, g: Element, p: Presentation, o: MonomialOrder) -> List[Element]:
    """
    Differences of the two liftings over every minimal common multiple of LT(f) and LT(g).

    Common multiples are monomials carrying overlapping occurrences of both
    leading terms that together cover every vertex.
    """
    lf, _ = f.leading_term(o)
    lg, _ = g.leading_term(o)
    local = GrobnerBasis(p, o)
    local.leading = {lf: f.monic(o)}
    if lg != lf:
        local.leading[lg] = g.monic(o)
    wf, wg = lf.weight, lg.weight
    found: List[Element] = []
    for w in range(max(wf, wg), wf + wg):
        n = w + 1 if p.is_binary else max(lf.host.n, lg.host.n) + w
        for host in connected_graphs(n):
            for t in enumerate_monomials(p.signature, host, w):
                divisors = local.divisors(t)
                for (o1, e1), (o2, e2) in _overlapping_pairs(t, divisors):
                    if {e1.leading_term(o)[0], e2.leading_term(o)[0]} != {lf, lg} and lf != lg:
                        continue
                    s = replace(t, o1, e1, p.signature) - replace(t, o2, e2, p.signature)
                    if s:
                        found.append(s)
    return found


def buchberger(
    p: Presentation,
    o: Optional[MonomialOrder] = None,
    bound: Optional[Tuple[int, int]] = None,
    settings: Optional[Settings] = None,
) -> GrobnerBasis:
    """
    Complete the relations to a Gröbner basis on all ordered hosts within the bound.

    Hosts are processed by increasing vertex count; at each host the given
    relations and the S-polynomials of overlapping leading terms are
    reduced and echelonized.
    """
    settings = settings or get_settings()
    o = o or p.default_order()
    max_vertices, max_weight = bound or settings.default_bound
    if max_vertices > settings.max_vertices:
        raise BoundExceededError("vertex bound", max_vertices, settings.max_vertices)
    if max_weight > settings.max_weight:
        raise BoundExceededError("weight bound", max_weight, settings.max_weight)

    gb = GrobnerBasis(p, o)
    largest_relation_host = max((h.n for h in p.relations), default=0)
    for n in range(1, max_vertices + 1):
        try:
            hosts = connected_graphs(n)
        except BoundExceededError as exc:
            gb.incomplete_reason = str(exc)
            logger.warning("completion of %s stopped at %d vertices: %s", p.name, n, exc)
            break
        weights = [n - 1] if p.is_binary else list(range(1, max_weight + 1))
        weights = [w for w in weights if w <= max_weight]
        pairs_possible = any(w <= 2 * gb.max_weight - 1 for w in weights) and gb.leading
        if not pairs_possible and n > largest_relation_host:
            for w in weights:
                gb.certify(n, w)
            logger.info("%s: %d vertices certified without new S-pairs", p.name, n)
            continue

        added = 0
        for host in hosts:
            candidates = list(p.relations_on(host))
            if pairs_possible:
                for w in weights:
                    for t in enumerate_monomials(p.signature, host, w):
                        candidates.extend(_s_polynomials_at(t, gb))
            if not candidates:
                continue
            reduced = [_reduce(c, gb) for c in candidates]
            reduced = [r for r in reduced if r]
            if not reduced:
                continue
            existing = gb.elements.get(host, [])
            basis = echelon(existing + reduced, o)
            added += len(basis) - len(existing)
            gb.replace_host(host, basis)
        for w in weights:
            gb.certify(n, w)
        logger.info("%s: %d vertices processed, %d new elements", p.name, n, added)
    return gb


def normal_monomials(gb: GrobnerBasis, g: Graph, w: Optional[int] = None) -> List[TreeMonomial]:
    """Monomials on g with no leading-term divisor."""
    w = _binary_weight(gb.presentation, g) if w is None else w
    gb.require(g.n, w)
    return [m for m in enumerate_monomials(gb.signature, g, w) if gb.is_normal(m)]


def component_dimension(p: Presentation, g: Graph, w: Optional[int] = None) -> int:
    """
    Dimension of the presented contractad at g without any Gröbner basis.

    The count of free monomials minus the rank of all relations placed in
    all monomial contexts.
    """
    w = _binary_weight(p, g) if w is None else w
    monomials = enumerate_monomials(p.signature, g, w)
    if not monomials:
        return 0
    index = {m: i for i, m in enumerate(monomials)}
    max_relation = p.max_relation_weight
    rows: List[Dict[int, Fraction]] = []
    seen: Set[frozenset] = set()
    for t in monomials:
        for occ in subtree_patterns(t, max_relation):
            for r in p.relations_on(occ.pattern.host):
                if r.weight != len(occ.nodes):
                    continue
                vector = replace(t, occ, r, p.signature).normalized()
                key = frozenset(vector.terms.items())
                if not key or key in seen:
                    continue
                seen.add(key)
                rows.append({index[m]: c for m, c in vector.terms.items()})
    dimension = len(monomials) - linalg.rank(rows, len(monomials))
    logger.debug("%s at %s, weight %d: %d monomials, dimension %d", p.name, g, w, len(monomials), dimension)
    return dimension


def weight3_dimension(p: Presentation, g: Graph) -> int:
    if g.n != 4:
        raise ContractadError(f"weight3_dimension needs a 4-vertex graph, got {g}")
    if not (p.is_quadratic and p.is_binary):
        raise UnsupportedError(f"{p.name} is not quadratic and binary")
    return component_dimension(p, g, 3)


def leading_terms(p: Presentation, o: MonomialOrder) -> Dict[Graph, List[TreeMonomial]]:
    """Echelon leading terms of the relations per ordered host."""
    result = {}
    for host in p.hosts():
        result[host] = [e.leading_term(o)[0] for e in echelon(p.relations[host], o)]
    return result


def graded_counts(monomials: Iterable[TreeMonomial], signature: Signature) -> Dict[int, int]:
    """Monomial counts by homological degree."""
    counts: Dict[int, int] = {}
    for m in monomials:
        d = signature.degree(m)
        counts[d] = counts.get(d, 0) + 1
    return dict(sorted(counts.items()))


def dimension(p: Presentation, g: Graph, gb: Optional[GrobnerBasis] = None) -> int:
    """Normal-monomial count when a certified basis is given, otherwise linear algebra."""
    if gb is not None:
        return len(normal_monomials(gb, g))
    return component_dimension(p, g)


def dimension_oracle(p: Presentation, gb: Optional[GrobnerBasis] = None) -> Callable[[Graph], int]:
    cache: Dict[Graph, int] = {}

    def dims(g: Graph) -> int:
        if g not in cache:
            cache[g] = dimension(p, g, gb)
        return cache[g]

    return dims


@dataclass
class PBWRow:
    """Weight-3 counts on one ordered 4-vertex graph."""
    graph: Graph
    family: str
    normal: int
    dimension: int

    @property
    def match(self) -> bool:
        return self.normal == self.dimension


@dataclass
class PBWReport:
    """Outcome of the weight-3 PBW criterion."""
    presentation: str
    order: MonomialOrder
    rows: List[PBWRow]
    basis: GrobnerBasis

    @property
    def passed(self) -> bool:
        return all(r.match for r in self.rows)


def pbw_check(p: Presentation, o: Optional[MonomialOrder] = None) -> PBWReport:
    """
    Compare weight-3 normal-monomial counts with true dimensions on all 38 ordered 4-vertex graphs.

    On PASS the echelonized relations form a quadratic Gröbner basis and the
    returned basis is certified for every component.
    """
    if not (p.is_quadratic and p.is_binary):
        raise UnsupportedError(f"{p.name} is not quadratic and binary")
    o = o or p.default_order()
    gb = GrobnerBasis.from_relations(p, o)
    rows = []
    for g in connected_graphs(4):
        normal = sum(1 for m in enumerate_monomials(p.signature, g, 3) if gb.is_normal(m))
        rows.append(PBWRow(g, family_name(g), normal, weight3_dimension(p, g)))
    report = PBWReport(p.name, o, rows, gb)
    if report.passed:
        gb.complete = True
        gb.certificate = "pbw"
    logger.info("PBW check for %s under %s: %s", p.name, o, "PASS" if report.passed else "FAIL")
    return report


def pbw_basis(p: Presentation) -> Optional[GrobnerBasis]:
    """The PBW-certified quadratic basis under the default order, or None."""
    if not (p.is_quadratic and p.is_binary):
        return None
    report = pbw_check(p)
    return report.basis if report.passed else None


def certified_basis(p: Presentation, o: Optional[MonomialOrder] = None,
                    bound: Optional[Tuple[int, int]] = None) -> GrobnerBasis:
    """A quadratic basis certified by PBW when possible, else a truncated completion."""
    o = o or p.default_order()
    if p.is_quadratic and p.is_binary:
        report = pbw_check(p, o)
        if report.passed:
            return report.basis
    return buchberger(p, o, bound)


# ---------------------------------------------------------------------------
# Koszul duality
# ---------------------------------------------------------------------------

def dual_name(name: str) -> str:
    return name[:-1] if name.endswith("!") else name + "!"


def pairing_sign(m: TreeMonomial, signature: Signature) -> int:
    """
    Sign of <T, T*> for a weight-2 monomial.

    (-1)^((i-1)(a-1)) for the inner vertex in slot i with a inputs, times the
    sign of the leaf permutation, times the Koszul sign of the two degrees.
    """
    outer = m.root
    inner_slot, inner = next(
        (i, c) for i, c in enumerate(outer.children, start=1) if isinstance(c, Node)
    )
    sign = -1 if (inner_slot - 1) * (len(inner.children) - 1) % 2 else 1
    perm = outer.leaf_order
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    if inversions % 2:
        sign = -sign
    if signature[outer.label].is_odd and signature[inner.label].is_odd:
        sign = -sign
    return sign


def koszul_dual(p: Presentation, name: Optional[str] = None) -> Presentation:
    """
    The quadratic dual: dual generators and the annihilator of R under the weight-2 pairing.

    Dual generators have degree -|x| + arity - 2 and the opposite transposition
    character.
    """
    if not (p.is_quadratic and p.is_binary):
        raise UnsupportedError(f"{p.name} is not quadratic and binary")
    signature = p.signature
    dual_generators = tuple(
        Generator(
            name=dual_name(x.name),
            degree=-x.degree + x.arity - 2,
            arity=x.arity,
            flip=-x.flip,
            partner=dual_name(x.partner) if x.partner else None,
            host=x.host,
        )
        for x in signature.generators
    )
    dual_signature = Signature(dual_generators)

    def to_dual(m: TreeMonomial) -> TreeMonomial:
        def walk(node):
            if not isinstance(node, Node):
                return node
            return Node(dual_name(node.label), tuple(walk(c) for c in node.children))
        return TreeMonomial(m.host, walk(m.root))

    relations: Dict[Graph, List[Element]] = {}
    for host in connected_graphs(3):
        monomials = enumerate_monomials(signature, host, 2)
        if not monomials:
            continue
        index = {m: i for i, m in enumerate(monomials)}
        signs = [pairing_sign(m, signature) for m in monomials]
        rows = [{index[m]: c * signs[index[m]] for m, c in r.terms.items()} for r in p.relations_on(host)]
        annihilator = linalg.nullspace(rows, len(monomials))
        elements = [Element(host, {to_dual(monomials[j]): c for j, c in y.items()}) for y in annihilator]
        if elements:
            relations[host] = elements

    order = None
    if p.order is not None:
        order = MonomialOrder(p.order.reversed().kind, tuple(dual_name(x) for x in p.order.letters))
    return Presentation(
        name=name or dual_name(p.name),
        signature=dual_signature,
        relations=relations,
        order=order,
        description=f"Koszul dual of {p.name}",
    )


def weight2_dimensions(p: Presentation) -> Dict[Graph, Tuple[int, int]]:
    """(dim of the weight-2 space, dim R) on every ordered 3-vertex graph."""
    result = {}
    for host in connected_graphs(3):
        monomials = enumerate_monomials(p.signature, host, 2)
        index = {m: i for i, m in enumerate(monomials)}
        rows = [{index[m]: c for m, c in r.terms.items()} for r in p.relations_on(host)]
        result[host] = (len(monomials), linalg.rank(rows, len(monomials)))
    return result
