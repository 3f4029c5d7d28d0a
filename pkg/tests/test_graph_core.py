#!/usr/bin/env python3
"""
Tests for graphs, tubes and the graph-partition lattice
"""

import math

import pytest
import sys
from pathlib import Path

# Add parent to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from contractads.errors import BoundExceededError, GraphError, GraphParseError
from contractads.graph_core import (
    Graph,
    GraphPartition,
    acyclic_orientations,
    automorphisms,
    canonical_form,
    characteristic_polynomial,
    connected_graphs,
    enumerate_tubes,
    family_name,
    graph_partitions,
    is_isomorphic,
    isomorphism_classes,
    isomorphisms,
    make_family,
    moebius,
    parse_graph,
    partition_lattice,
    poincare_polynomial,
    quotient_partition,
    split_components,
)


class TestParsing:
    """Tests for graph specs and families."""

    def test_family_tokens(self):
        """Test family tokens build the expected graphs."""
        assert parse_graph("P3") == Graph(3, frozenset({(1, 2), (2, 3)}))
        assert len(parse_graph("K4").edges) == 6
        assert len(parse_graph("C5").edges) == 5
        assert parse_graph("St3").neighbors(1) == frozenset({2, 3, 4})

    def test_edge_list(self):
        """Test an explicit edge list equals the family token."""
        assert parse_graph("edges:1-2,2-3,3-4,1-4") == make_family("C", 4)
        assert parse_graph("edges: 2-1 , 3-2") == make_family("P", 3)

    def test_join_family(self):
        """Test K(1^2,2) is the diamond."""
        g = parse_graph("K(1^2,2)")
        assert g.sorted_edges() == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]

    def test_disconnected_rejected(self):
        """Test disconnected edge sets are rejected."""
        with pytest.raises(GraphError):
            parse_graph("edges:1-2,3-4")

    def test_parse_error_position(self):
        """Test malformed specs report a position."""
        with pytest.raises(GraphParseError) as info:
            parse_graph("edges:1-2,2-x")
        assert info.value.position == 10
        with pytest.raises(GraphParseError):
            parse_graph("Q3")
        with pytest.raises(GraphParseError):
            parse_graph("edges:1-1")

    def test_split_components(self):
        """Test the one place disconnected input is accepted."""
        parts = split_components(5, [(1, 2), (4, 5)])
        assert [g.n for g, _ in parts] == [2, 1, 2]
        assert parts[2][1] == {4: 1, 5: 2}

    def test_json_roundtrip(self):
        """Test JSON form of a graph."""
        g = make_family("C", 4)
        assert Graph.from_json(g.to_json()) == g
        assert g.to_networkx().number_of_edges() == 4


class TestTubes:
    """Tests for tubes, contraction and restriction."""

    def test_tube_counts(self):
        """Test tube enumeration."""
        assert len(enumerate_tubes(make_family("P", 3))) == 6
        assert len(enumerate_tubes(make_family("K", 3))) == 7
        assert len(enumerate_tubes(make_family("K", 4))) == 15

    def test_is_tube(self):
        """Test connectivity of vertex subsets."""
        g = make_family("P", 4)
        assert g.is_tube({2, 3})
        assert not g.is_tube({1, 3})
        assert not g.is_tube(set())

    def test_contract_cycle(self):
        """Test contracting an edge of C4 gives K3."""
        contracted, mapping = make_family("C", 4).contract_tube({1, 2})
        assert contracted == make_family("K", 3)
        assert mapping == {1: 1, 2: 1, 3: 2, 4: 3}

    def test_induced(self):
        """Test restriction relabels in numeric order."""
        restricted, mapping = make_family("C", 4).induced({2, 3, 4})
        assert restricted == make_family("P", 3)
        assert mapping == {2: 1, 3: 2, 4: 3}
        with pytest.raises(GraphError):
            make_family("C", 4).induced({1, 3})

    def test_quotient_by_partition(self):
        """Test the quotient numbers blocks by their minimal vertex."""
        g = make_family("P", 4)
        assert g.quotient([{3, 4}, {1, 2}]) == make_family("P", 2)
        assert g.quotient([{1}, {2, 3}, {4}]) == make_family("P", 3)


class TestLattice:
    """Tests for graph partitions and the Möbius function."""

    def test_partitions_of_path(self):
        """Test the partitions of P3."""
        parts = graph_partitions(make_family("P", 3))
        assert [str(p) for p in parts] == ["1|2|3", "12|3", "1|23", "123"]

    def test_partition_validation(self):
        """Test blocks must be tubes."""
        with pytest.raises(GraphError):
            GraphPartition.of(make_family("P", 3), [{1, 3}, {2}])

    def test_moebius_values(self):
        """Test |mu| on paths, cycles and complete graphs."""
        for n in range(2, 6):
            assert moebius(make_family("P", n)) == (-1) ** (n - 1)
            assert abs(moebius(make_family("K", n))) == [1, 1, 2, 6, 24][n - 1]
        assert abs(moebius(make_family("C", 4))) == 3
        assert moebius(make_family("K", 4)) == -6
        assert moebius(make_family("P", 1)) == 1

    def test_moebius_recursion(self):
        """Test the defining recursion on every lower interval."""
        for n in range(2, 6):
            for g in isomorphism_classes(n):
                lattice = partition_lattice(g)
                mu = lattice.moebius_from(lattice.bottom)
                for j in range(1, len(lattice)):
                    below = [k for k in lattice.interval(lattice.bottom, j)]
                    assert sum(mu[k] for k in below) == 0

    def test_interval_factorization(self):
        """Test mu(I, 1) = mu of the quotient graph g/I."""
        for g in (g for n in range(2, 6) for g in isomorphism_classes(n)):
            lattice = partition_lattice(g)
            for i, partition in enumerate(lattice.elements):
                assert lattice.moebius(i, lattice.top) == moebius(g.quotient(partition.blocks))

    def test_lower_interval_factorization(self):
        """Test mu(0, I) is the product of mu over the blocks."""
        for g in (g for n in range(2, 6) for g in isomorphism_classes(n)):
            lattice = partition_lattice(g)
            mu = lattice.moebius_from(lattice.bottom)
            for i, partition in enumerate(lattice.elements):
                product = 1
                for block in partition.blocks:
                    product *= moebius(g.induced(block)[0])
                assert mu[i] == product

    def test_lower_interval_size(self):
        """Test [0, I] has as many elements as the product of the block lattices."""
        for g in (g for n in range(2, 6) for g in isomorphism_classes(n)):
            lattice = partition_lattice(g)
            for i, partition in enumerate(lattice.elements):
                expected = math.prod(len(graph_partitions(g.induced(b)[0])) for b in partition.blocks)
                assert len(lattice.interval(lattice.bottom, i)) == expected

    def test_upper_interval_is_quotient_lattice(self):
        """Test J -> J/I is an order isomorphism from [I, 1] onto the partitions of g/I."""
        for g in (g for n in range(2, 6) for g in isomorphism_classes(n)):
            lattice = partition_lattice(g)
            for i, lower in enumerate(lattice.elements):
                above = [lattice.elements[k] for k in lattice.interval(i, lattice.top)]
                image = {upper: quotient_partition(g, lower, upper) for upper in above}
                assert len(set(image.values())) == len(above)
                assert set(image.values()) == set(graph_partitions(g.quotient(lower.blocks)))
                for a in above:
                    for b in above:
                        assert a.refines(b) == image[a].refines(image[b])

    def test_characteristic_polynomial_is_chromatic(self):
        """Test the characteristic polynomial of K3 is t(t-1)(t-2)."""
        assert characteristic_polynomial(make_family("K", 3)) == [0, 2, -3, 1]
        assert characteristic_polynomial(make_family("P", 3)) == [0, 1, -2, 1]

    def test_poincare_polynomial(self):
        """Test the Poincaré polynomial of K3 and C4."""
        assert poincare_polynomial(make_family("K", 3)) == [1, 3, 2]
        assert poincare_polynomial(make_family("C", 4)) == [1, 4, 6, 3]

    def test_acyclic_orientations(self):
        """Test region counts of graphic arrangements."""
        assert acyclic_orientations(make_family("K", 4)) == 24
        assert acyclic_orientations(make_family("C", 4)) == 14
        assert acyclic_orientations(make_family("P", 3)) == 4

    def test_lattice_bound(self):
        """Test the lattice refuses graphs above its bound."""
        with pytest.raises(BoundExceededError):
            partition_lattice(make_family("P", 4), bound=3)


class TestEnumeration:
    """Tests for ordered graphs and isomorphism classes."""

    def test_ordered_counts(self):
        """Test the number of labeled connected graphs."""
        assert len(connected_graphs(3)) == 4
        assert len(connected_graphs(4)) == 38

    def test_family_split_of_four_vertices(self):
        """Test the 38 ordered graphs split 12+4+12+3+6+1."""
        counts = {}
        for g in connected_graphs(4):
            name = family_name(g)
            counts[name] = counts.get(name, 0) + 1
        assert counts == {"P4": 12, "St3": 4, "paw": 12, "C4": 3, "K(1^2,2)": 6, "K4": 1}

    def test_isomorphism_classes(self):
        """Test unlabeled counts for 2 to 5 vertices."""
        assert [len(isomorphism_classes(n)) for n in range(2, 6)] == [1, 2, 6, 21]

    def test_canonical_form(self):
        """Test relabelings share a canonical form."""
        assert canonical_form(parse_graph("edges:1-3,3-2")) == canonical_form(make_family("P", 3))
        assert canonical_form(make_family("P", 4)) != canonical_form(make_family("St", 3))

    def test_isomorphisms(self):
        """Test bijections between relabeled paths."""
        bent = parse_graph("edges:1-3,3-2")
        assert isomorphisms(bent, make_family("P", 3)) == [(1, 3, 2), (3, 1, 2)]
        assert is_isomorphic(make_family("C", 4), parse_graph("edges:1-3,3-2,2-4,4-1"))
        assert not is_isomorphic(make_family("P", 4), make_family("St", 3))

    def test_automorphisms(self):
        """Test automorphism counts."""
        assert len(automorphisms(make_family("K", 3))) == 6
        assert len(automorphisms(make_family("C", 4))) == 8
        assert automorphisms(make_family("P", 3))[0] == (1, 2, 3)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
