#!/usr/bin/env python3
"""
Tests for Orlik-Solomon algebras of graphic arrangements and their pairing with gcGerst
"""

import pytest
import sys
from pathlib import Path

# Add parent to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from contractads.algebra import TreeMonomial
from contractads.errors import ContractadError, GraphError
from contractads.graph_core import isomorphism_classes, make_family, parse_graph, poincare_polynomial
from contractads.orlik_solomon import (
    EdgeOrder,
    OSElement,
    OSMonomial,
    broken_circuits,
    circuits,
    gerst_pairing,
    is_nbc,
    is_signed_identity,
    lattice_hilbert,
    nbc_basis,
    os_cocompose,
    os_hilbert,
    os_reduce,
    pairing_matrix,
    tree_of_nbc,
)

DIAMOND = "edges:1-2,1-4,2-3,2-4,3-4"


class TestEdgeOrder:
    """Tests for edge orders."""

    def test_default(self):
        """Test the default order is lexicographic."""
        assert str(EdgeOrder.default(make_family("C", 4))) == "12<14<23<34"

    def test_parse(self):
        """Test a custom order must list every edge once."""
        c4 = make_family("C", 4)
        o = EdgeOrder.parse(c4, "3-4,2-3,1-4,2-1")
        assert o.edges[-1] == (1, 2)
        with pytest.raises(GraphError):
            EdgeOrder.parse(c4, "1-2,2-3")
        with pytest.raises(GraphError):
            EdgeOrder.parse(c4, "1-2,2-x,3-4,1-4")

    def test_sort(self):
        """Test sorting counts inversions and detects repeats."""
        o = EdgeOrder.default(make_family("K", 3))
        assert o.sort([(2, 3), (1, 2)]) == (1, ((1, 2), (2, 3)))
        assert o.sort([(1, 2), (1, 2)]) == (0, None)


class TestNbc:
    """Tests for circuits and nbc bases."""

    def test_circuits(self):
        """Test the diamond has two triangles and a square."""
        found = circuits(parse_graph(DIAMOND))
        assert [len(c) for c in found] == [3, 3, 4]
        assert circuits(make_family("P", 4)) == ()

    def test_broken_circuits(self):
        """Test the minimum edge is removed from each circuit."""
        assert broken_circuits(make_family("K", 3)) == [(frozenset({(1, 3), (2, 3)}), (1, 2))]

    def test_cycle_top_degree(self):
        """Test the three top nbc sets of C4 all contain the minimum edge."""
        top = nbc_basis(make_family("C", 4), 3)
        assert len(top) == 3
        assert all((1, 2) in s for s in top)

    def test_diamond_top_degree(self):
        """Test the diamond has four maximal nbc sets."""
        top = nbc_basis(parse_graph(DIAMOND), 3)
        assert top == [
            ((1, 2), (1, 4), (2, 3)),
            ((1, 2), (1, 4), (3, 4)),
            ((1, 2), (2, 3), (2, 4)),
            ((1, 2), (2, 3), (3, 4)),
        ]

    def test_degree_bounds(self):
        """Test negative and oversized degrees."""
        with pytest.raises(ContractadError):
            nbc_basis(make_family("K", 3), -1)
        assert nbc_basis(make_family("K", 3), 3) == []
        assert nbc_basis(make_family("K", 3), 0) == [()]

    def test_is_nbc(self):
        """Test membership."""
        k3 = make_family("K", 3)
        assert is_nbc(k3, [(1, 2), (2, 3)])
        assert not is_nbc(k3, [(1, 3), (2, 3)])

    def test_hilbert_series(self):
        """Test nbc counts against the characteristic polynomial."""
        assert os_hilbert(make_family("K", 3)) == [1, 3, 2]
        assert os_hilbert(make_family("C", 4)) == [1, 4, 6, 3]
        assert os_hilbert(make_family("K", 4)) == [1, 6, 11, 6]
        assert os_hilbert(make_family("P", 1)) == [1]

    def test_hilbert_independent_of_order(self):
        """Test any edge order gives the same counts."""
        c4 = make_family("C", 4)
        assert os_hilbert(c4, EdgeOrder.parse(c4, "3-4,2-3,1-4,1-2")) == [1, 4, 6, 3]

    def test_lattice_formula(self):
        """Test the lattice formula agrees with the Poincaré polynomial."""
        for n in range(2, 6):
            for g in isomorphism_classes(n):
                assert lattice_hilbert(g) == poincare_polynomial(g)


class TestReduction:
    """Tests for straightening onto the nbc basis."""

    def setup_method(self):
        """Set up test fixtures."""
        self.k3 = make_family("K", 3)
        self.w = {e: OSElement.generator(self.k3, e) for e in self.k3.sorted_edges()}

    def test_broken_circuit_rewrites(self):
        """Test w13w23 = w12w23 - w12w13."""
        x = os_reduce([(1, 3), (2, 3)], host=self.k3)
        assert x.coefficient([(1, 2), (2, 3)]) == 1
        assert x.coefficient([(1, 2), (1, 3)]) == -1
        assert str(x) == "-w12w13 + w12w23"

    def test_products(self):
        """Test the exterior relations."""
        w12, w13, w23 = self.w[(1, 2)], self.w[(1, 3)], self.w[(2, 3)]
        assert not (w12 * w12)
        assert w23 * w12 == w12 * w23 * -1
        assert w13 * w23 == w12 * w23 - w12 * w13

    def test_dependent_set_vanishes(self):
        """Test a full circuit is zero."""
        assert not os_reduce([(1, 2), (1, 3), (2, 3)], host=self.k3)

    def test_unit(self):
        """Test 1 is the unit."""
        one = OSElement.one(self.k3)
        assert one * self.w[(1, 3)] == self.w[(1, 3)]

    def test_even_degree(self):
        """Test generators of even degree commute."""
        a = OSElement.generator(self.k3, (1, 2), degree=2)
        b = OSElement.generator(self.k3, (2, 3), degree=2)
        assert a * b == b * a

    def test_foreign_edge(self):
        """Test edges outside the host are rejected."""
        with pytest.raises(GraphError):
            os_reduce([(1, 3)], host=make_family("P", 3))
        with pytest.raises(ContractadError):
            os_reduce([(1, 2)])


class TestCocomposition:
    """Tests for the cocomposition at a tube."""

    def setup_method(self):
        """Set up test fixtures."""
        self.k3 = make_family("K", 3)

    def test_inner_edge(self):
        """Test an edge inside the tube goes to the inner factor."""
        x = OSElement.generator(self.k3, (1, 2))
        assert os_cocompose(x, {1, 2}).terms == {((), ((1, 2),)): 1}

    def test_outer_edge(self):
        """Test an edge leaving the tube goes to the quotient."""
        x = OSElement.generator(self.k3, (1, 3))
        result = os_cocompose(x, {1, 2})
        assert result.outer_host == make_family("P", 2)
        assert result.terms == {(((1, 2),), ()): 1}

    def test_mixed_sign(self):
        """Test moving the inner factor past the outer one costs a sign."""
        x = os_reduce([(1, 2), (1, 3)], host=self.k3)
        assert os_cocompose(x, {1, 2}).terms == {(((1, 2),), ((1, 2),)): -1}


class TestPairing:
    """Tests for T(S) and the pairing with gcGerst."""

    def setup_method(self):
        """Set up test fixtures."""
        self.diamond = parse_graph(DIAMOND)

    def test_trees_of_nbc_sets(self):
        """Test T(S) on the diamond."""
        assert str(tree_of_nbc(self.diamond, [(1, 2), (1, 4), (2, 3)])) == "b(b(1,4),b(2,3))"
        assert str(tree_of_nbc(self.diamond, [(1, 2), (2, 3), (2, 4)])) == "b(1,b(b(2,4),3))"

    def test_tree_is_capped_by_products(self):
        """Test a single edge gives a bracket under the product comb."""
        k3 = make_family("K", 3)
        assert str(tree_of_nbc(k3, [(1, 3)])) == "m(b(1,3),2)"
        assert str(tree_of_nbc(k3, [])) == "m(m(1,2),3)"

    def test_non_nbc_rejected(self):
        """Test T(S) needs an nbc set."""
        with pytest.raises(ContractadError):
            tree_of_nbc(make_family("K", 3), [(1, 3), (2, 3)])

    def test_pairing_values(self):
        """Test the pairing vanishes off its own nbc set."""
        t = tree_of_nbc(self.diamond, [(1, 2), (1, 4), (2, 3)])
        assert abs(gerst_pairing(t, [(1, 2), (1, 4), (2, 3)])) == 1
        assert gerst_pairing(t, [(1, 2), (1, 4), (3, 4)]) == 0
        assert gerst_pairing(t, OSMonomial(self.diamond, ((1, 2), (1, 4)))) == 0

    def test_product_above_bracket_rejected(self):
        """Test monomials must carry products below brackets."""
        t = TreeMonomial.build(make_family("P", 3), "b(m(1,2),3)")
        with pytest.raises(ContractadError):
            gerst_pairing(t, [(1, 2)])

    def test_pairing_is_signed_identity(self):
        """Test the pairing of T(S) with nbc monomials is diagonal with entries ±1."""
        for n in range(2, 6):
            for g in isomorphism_classes(n):
                basis, matrix = pairing_matrix(g)
                assert len(basis) == sum(os_hilbert(g))
                assert is_signed_identity(matrix)

    def test_signed_identity_check(self):
        """Test the matrix predicate."""
        assert is_signed_identity([[1, 0], [0, -1]])
        assert not is_signed_identity([[1, 1], [0, 1]])
        assert not is_signed_identity([[2]])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
