#!/usr/bin/env python3
"""
Tests for tree monomials, composition and the symmetric group action
"""

import random

import pytest
import sys
from pathlib import Path

# Add parent to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from contractads.algebra import (
    Element,
    Generator,
    Signature,
    TreeMonomial,
    act,
    comb,
    compose,
    enumerate_monomials,
    koszul_sign,
    occurrences,
    replace,
)
from contractads.errors import ContractadError, HostMismatchError
from contractads.graph_core import connected_graphs, isomorphism_classes, make_family

COM = Signature((Generator("m"),))
LIE = Signature((Generator("b", flip=-1),))
GERST = Signature((Generator("m"), Generator("b", degree=1)))


class TestGenerators:
    """Tests for generators and signatures."""

    def test_arity_and_flip(self):
        """Test generator validation."""
        with pytest.raises(ContractadError):
            Generator("x", arity=1)
        with pytest.raises(ContractadError):
            Generator("x", flip=2)
        assert Generator("m").host == make_family("P", 2)

    def test_partners_must_pair(self):
        """Test partner generators must name each other."""
        Signature((Generator("nu", partner="nu~"), Generator("nu~", partner="nu")))
        with pytest.raises(ContractadError):
            Signature((Generator("nu", partner="nu~"), Generator("nu~")))

    def test_degrees(self):
        """Test degree bookkeeping."""
        t = TreeMonomial.build(make_family("P", 3), "b(m(1,2),3)")
        assert GERST.degree(t) == 1
        assert GERST.has_odd
        assert not COM.has_odd

    def test_koszul_sign(self):
        """Test the sign of reordering odd items."""
        assert koszul_sign(["a", "b"], ["b", "a"], ["a", "b"]) == -1
        assert koszul_sign(["a", "b"], ["b", "a"], ["a"]) == 1
        assert koszul_sign(["a", "b", "c"], ["c", "a", "b"], ["a", "b", "c"]) == 1


class TestElements:
    """Tests for linear combinations."""

    def setup_method(self):
        """Set up test fixtures."""
        self.p3 = make_family("P", 3)
        self.x = Element.from_terms(self.p3, [(1, "m(m(1,2),3)"), (-1, "m(1,m(2,3))")])

    def test_arithmetic(self):
        """Test addition, subtraction and scaling."""
        assert not (self.x - self.x)
        doubled = self.x + self.x
        assert doubled.coefficient(TreeMonomial.build(self.p3, "m(m(1,2),3)")) == 2
        assert (self.x * -1) == -self.x
        assert self.x.weight == 2

    def test_text_form(self):
        """Test terms print in text order."""
        assert str(self.x) == "-m(1,m(2,3)) + m(m(1,2),3)"

    def test_host_mismatch(self):
        """Test elements on different hosts do not add."""
        other = Element.from_terms(make_family("K", 3), [(1, "m(m(1,2),3)")])
        with pytest.raises(HostMismatchError):
            self.x + other

    def test_normalized(self):
        """Test the first text-order term is scaled to 1."""
        y = (self.x * 3).normalized()
        assert y == self.x * -1

    def test_json(self):
        """Test the JSON form lists every term."""
        rows = self.x.to_json()
        assert [r["text"] for r in rows] == ["m(1,m(2,3))", "m(m(1,2),3)"]
        assert rows[0]["coefficient"] == "-1/1"


class TestComposition:
    """Tests for infinitesimal composition."""

    def setup_method(self):
        """Set up test fixtures."""
        self.p2 = make_family("P", 2)
        self.m = TreeMonomial.build(self.p2, "m(1,2)")

    def test_compose_on_path(self):
        """Test both compositions on P3."""
        p3 = make_family("P", 3)
        assert compose(self.m, self.m, p3, {1, 2})[1] == TreeMonomial.build(p3, "m(m(1,2),3)")
        assert compose(self.m, self.m, p3, {2, 3})[1] == TreeMonomial.build(p3, "m(1,m(2,3))")

    def test_compose_relabels_inner(self):
        """Test the inner tree is relabeled into the tube."""
        k3 = make_family("K", 3)
        sign, result = compose(self.m, self.m, k3, {1, 3})
        assert sign == 1
        assert str(result) == "m(m(1,3),2)"

    def test_host_checks(self):
        """Test composition checks both hosts."""
        p3 = make_family("P", 3)
        with pytest.raises(HostMismatchError):
            compose(TreeMonomial.build(p3, "m(m(1,2),3)"), self.m, p3, {1, 2})

    def test_comb(self):
        """Test the greedy comb."""
        assert str(comb("m", make_family("C", 4))) == "m(m(m(1,2),3),4)"
        assert str(comb("m", make_family("St", 3))) == "m(m(m(1,2),3),4)"
        assert str(comb("m", make_family("P", 1))) == "1"

    def test_sequential_axiom(self):
        """Test x∘_G (y∘_H z) = (x∘_{G/H} y)∘_H z with Koszul signs."""
        rng = random.Random(0)
        graphs = connected_graphs(4) + isomorphism_classes(5)
        checked = 0
        while checked < 300:
            g = rng.choice(graphs)
            tubes = [t for t in g.tubes() if len(t) >= 2]
            big = rng.choice([t for t in tubes if len(t) >= 3])
            smaller = [t for t in tubes if t < big]
            small = rng.choice(smaller)

            restricted, rmap = g.induced(big)
            small_in_big = frozenset(rmap[v] for v in small)
            x = rng.choice(enumerate_monomials(GERST, g.contract_tube(big)[0]))
            y = rng.choice(enumerate_monomials(GERST, restricted.contract_tube(small_in_big)[0]))
            z = rng.choice(enumerate_monomials(GERST, g.induced(small)[0]))

            s1, yz = compose(y, z, restricted, small_in_big, GERST)
            s2, left = compose(x, yz, g, big, GERST)
            contracted, cmap = g.contract_tube(small)
            s3, xy = compose(x, y, contracted, frozenset(cmap[v] for v in big), GERST)
            s4, right = compose(xy, z, g, small, GERST)
            assert left == right
            assert s1 * s2 == s3 * s4
            checked += 1

    def test_parallel_axiom(self):
        """Test compositions at disjoint tubes commute up to the Koszul sign."""
        rng = random.Random(1)
        graphs = connected_graphs(4) + isomorphism_classes(5)
        checked = 0
        while checked < 300:
            g = rng.choice(graphs)
            tubes = [t for t in g.tubes() if 2 <= len(t) < g.n]
            pairs = [(a, b) for a in tubes for b in tubes if not a & b]
            if not pairs:
                continue
            first, second = rng.choice(pairs)
            blocks = [first, second] + [frozenset([v]) for v in g.vertices if v not in first | second]
            x = rng.choice(enumerate_monomials(GERST, g.quotient(blocks)))
            y1 = rng.choice(enumerate_monomials(GERST, g.induced(first)[0]))
            y2 = rng.choice(enumerate_monomials(GERST, g.induced(second)[0]))

            without_second, c2 = g.contract_tube(second)
            s1, a = compose(x, y1, without_second, frozenset(c2[v] for v in first), GERST)
            s2, left = compose(a, y2, g, second, GERST)
            without_first, c1 = g.contract_tube(first)
            s3, b = compose(x, y2, without_first, frozenset(c1[v] for v in second), GERST)
            s4, right = compose(b, y1, g, first, GERST)
            assert left == right
            swap = -1 if (GERST.degree(y1) * GERST.degree(y2)) % 2 else 1
            assert s1 * s2 == swap * s3 * s4
            checked += 1


class TestAction:
    """Tests for the action of vertex bijections."""

    def test_antisymmetric_flip(self):
        """Test b^(12) = -b."""
        b = TreeMonomial.build(make_family("P", 2), "b(1,2)")
        sign, moved = act([2, 1], b, LIE)
        assert sign == -1
        assert moved == b

    def test_relation_under_reversal(self):
        """Test the path relation of b changes sign under reversal of P3."""
        p3 = make_family("P", 3)
        r = Element.from_terms(p3, [(1, "b(b(1,2),3)"), (-1, "b(1,b(2,3))")])
        assert act([3, 2, 1], r, LIE) == r * -1

    def test_image_host(self):
        """Test the image lives on the relabeled graph."""
        p3 = make_family("P", 3)
        t = TreeMonomial.build(p3, "m(m(1,2),3)")
        sign, moved = act([2, 1, 3], t, COM)
        assert moved.host == p3.relabel({1: 2, 2: 1, 3: 3})
        assert sign == 1


class TestEnumeration:
    """Tests for monomial enumeration and occurrences."""

    def test_counts(self):
        """Test binary monomial counts."""
        assert len(enumerate_monomials(COM, make_family("P", 3), 2)) == 2
        assert len(enumerate_monomials(COM, make_family("K", 3), 2)) == 3
        assert len(enumerate_monomials(COM, make_family("C", 4), 3)) == 10
        assert len(enumerate_monomials(GERST, make_family("C", 4), 3)) == 80

    def test_occurrences(self):
        """Test a weight-2 pattern occurs twice in the comb on P4."""
        t = comb("m", make_family("P", 4))
        pattern = TreeMonomial.build(make_family("P", 3), "m(m(1,2),3)")
        assert len(occurrences(t, pattern)) == 2

    def test_replace(self):
        """Test substituting a relation into a context."""
        p4 = make_family("P", 4)
        t = TreeMonomial.build(p4, "m(m(1,2),m(3,4))")
        pattern = TreeMonomial.build(make_family("P", 3), "m(m(1,2),3)")
        occ = occurrences(t, pattern)[0]
        relation = Element.from_terms(make_family("P", 3), [(1, "m(m(1,2),3)"), (-1, "m(1,m(2,3))")])
        result = replace(t, occ, relation, COM)
        assert result.coefficient(t) == 1
        assert len(result) == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
