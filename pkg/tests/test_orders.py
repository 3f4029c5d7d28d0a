#!/usr/bin/env python3
"""
Tests for monomial orders
"""

import random

import pytest
import sys
from pathlib import Path

# Add parent to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from contractads.algebra import Generator, Signature, TreeMonomial, compose, enumerate_monomials
from contractads.config import get_settings
from contractads.errors import ContractadError, HostMismatchError
from contractads.graph_core import connected_graphs, isomorphism_classes, make_family
from contractads.orders import (
    MonomialOrder,
    OrderKind,
    QuantumMonomial,
    compare_graphpermlex,
    compare_quantum,
    qm_canonical,
    sample_monotonicity,
)

MB = Signature((Generator("m"), Generator("b", flip=-1)))

ORDERS = [
    MonomialOrder(OrderKind.GRAPHPERMLEX, ("m", "b")),
    MonomialOrder(OrderKind.REVERSE_GRAPHPERMLEX, ("m", "b")),
    MonomialOrder(OrderKind.QUANTUM, ("m", "b")),
]


class TestParsing:
    """Tests for order names."""

    def test_parse(self):
        """Test CLI order names."""
        assert MonomialOrder.parse("graphpermlex", ["b"]).kind is OrderKind.GRAPHPERMLEX
        assert MonomialOrder.parse("rev-graphpermlex").kind is OrderKind.REVERSE_GRAPHPERMLEX
        with pytest.raises(ContractadError):
            MonomialOrder.parse("deglex")

    def test_reversed(self):
        """Test reversal swaps the two graphpermlex orders and fixes quantum."""
        o = MonomialOrder.parse("graphpermlex", ["b"])
        assert o.reversed().kind is OrderKind.REVERSE_GRAPHPERMLEX
        assert o.reversed().reversed() == o
        q = MonomialOrder.parse("quantum", ["m", "b"])
        assert q.reversed() == q


class TestQuantumMonoid:
    """Tests for the quantum monoid normal form."""

    def test_canonical(self):
        """Test bm rewrites to mbq."""
        assert qm_canonical("bm") == QuantumMonomial(1, 1, 1)
        assert qm_canonical("mb") == QuantumMonomial(1, 1, 0)
        assert qm_canonical("bbm") == QuantumMonomial(1, 2, 2)
        assert str(qm_canonical("bmq")) == "mbqq"

    def test_unknown_letter(self):
        """Test letters outside m, b, q are rejected."""
        with pytest.raises(ContractadError):
            qm_canonical("mx")


class TestComparison:
    """Tests for comparing monomials."""

    def setup_method(self):
        """Set up test fixtures."""
        self.p3 = make_family("P", 3)
        self.left = TreeMonomial.build(self.p3, "m(m(1,2),3)")
        self.right = TreeMonomial.build(self.p3, "m(1,m(2,3))")

    def test_reverse_flips(self):
        """Test the reverse order flips every comparison."""
        o = ORDERS[0]
        assert compare_graphpermlex(self.left, self.right, o) == -compare_graphpermlex(
            self.left, self.right, o.reversed()
        )
        assert o.compare(self.left, self.left) == 0

    def test_quantum_counts_products(self):
        """Test the quantum order puts more products first."""
        b_on_m = TreeMonomial.build(self.p3, "b(m(1,2),3)")
        m_on_b = TreeMonomial.build(self.p3, "m(b(1,2),3)")
        both = TreeMonomial.build(self.p3, "m(m(1,2),3)")
        assert compare_quantum(both, b_on_m) == 1
        assert compare_quantum(both, m_on_b) == 1

    def test_host_and_weight_checks(self):
        """Test incomparable monomials are rejected."""
        k3 = TreeMonomial.build(make_family("K", 3), "m(m(1,2),3)")
        with pytest.raises(HostMismatchError):
            ORDERS[0].compare(self.left, k3)
        with pytest.raises(ContractadError):
            compare_graphpermlex(self.left, self.right, ORDERS[2])

    def test_sorted(self):
        """Test sorting by key."""
        o = ORDERS[0]
        ascending = o.sorted([self.left, self.right])
        assert o.sorted([self.left, self.right], descending=True) == ascending[::-1]


class TestAxioms:
    """Property tests: totality and compatibility with composition."""

    def test_totality(self):
        """Test distinct monomials never tie."""
        for g in connected_graphs(3) + isomorphism_classes(4):
            monomials = enumerate_monomials(MB, g)
            for o in ORDERS:
                keys = {o.key(m) for m in monomials}
                assert len(keys) == len(monomials)

    def test_monotone_under_composition(self):
        """Test a < b implies a∘c < b∘c and c∘a < c∘b on random triples."""
        rng = random.Random(get_settings().seed)
        graphs = connected_graphs(4) + isomorphism_classes(5)
        samples = get_settings().property_samples
        cache = {}

        def monomials(h):
            if h not in cache:
                cache[h] = enumerate_monomials(MB, h)
            return cache[h]

        checked = 0
        while checked < samples:
            g = rng.choice(graphs)
            tube = rng.choice([t for t in g.tubes() if 2 <= len(t) < g.n])
            outer_host = g.contract_tube(tube)[0]
            inner_host = g.induced(tube)[0]
            o = rng.choice(ORDERS)
            if rng.random() < 0.5:
                a, b = rng.sample(monomials(outer_host), 2)
                c = rng.choice(monomials(inner_host))
                left, right = compose(a, c, g, tube)[1], compose(b, c, g, tube)[1]
            else:
                a, b = rng.sample(monomials(inner_host), 2)
                c = rng.choice(monomials(outer_host))
                left, right = compose(c, a, g, tube)[1], compose(c, b, g, tube)[1]
            assert o.compare(a, b) == o.compare(left, right) != 0
            checked += 1

    def test_sampler_reports_monotone(self):
        """Test the seeded sampler finds no failures for the shipped orders."""
        graphs = connected_graphs(4)
        for o in ORDERS:
            report = sample_monotonicity(o, MB, graphs, 300, seed=3)
            assert report.samples == 300
            assert report.failures == []
            assert report.passed

    def test_sampler_is_deterministic(self):
        """Test the same seed draws the same samples."""
        graphs = connected_graphs(4) + isomorphism_classes(5)
        first = sample_monotonicity(ORDERS[2], MB, graphs, 50, seed=11)
        second = sample_monotonicity(ORDERS[2], MB, graphs, 50, seed=11)
        assert first == second

    def test_sampler_needs_proper_tubes(self):
        """Test graphs without proper tubes of size two are rejected."""
        with pytest.raises(ContractadError):
            sample_monotonicity(ORDERS[0], MB, [make_family("P", 2)], 10, seed=0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
