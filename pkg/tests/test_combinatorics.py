import itertools
import random

import networkx as nx
import pytest

from grasscluster.cluster import explore
from grasscluster.combinatorics import (
    Chord,
    Triangulation,
    WSCollection,
    akn_labels,
    all_triangulations,
    build_initial_seed,
    chords_cross,
    double_reduced_word,
    enumerate_maximal_ws,
    exchange_graph_of_collections,
    is_reduced_longest,
    random_triangulation,
    triangulation_seed,
    unique_exchange,
    weakly_separated,
    zigzag_triangulation,
)
from grasscluster.errors import CapExceeded, NoExchange
from grasscluster.ksubset import KSubset


def S(*idx, n):
    return KSubset(idx, n)


def test_chords_cross():
    assert chords_cross(Chord(1, 3, 6), Chord(2, 5, 6))
    assert not chords_cross(Chord(1, 3, 6), Chord(3, 5, 6))
    assert not chords_cross(Chord(1, 3, 6), Chord(4, 6, 6))
    assert chords_cross(Chord(4, 8, 8), Chord(2, 6, 8))


def test_weak_separation_examples():
    assert weakly_separated(S(1, 2, 4, n=6), S(1, 3, 4, n=6))
    assert not weakly_separated(S(1, 3, n=5), S(2, 4, n=5))
    assert not weakly_separated(S(1, 3, 5, n=6), S(2, 4, 6, n=6))
    assert weakly_separated(S(1, 2, 3, n=6), S(4, 5, 6, n=6))


def test_zigzag_chains():
    assert zigzag_triangulation(3, 8).chain == [(7, 5), (5, 8), (8, 4), (4, 1), (1, 3)]
    assert zigzag_triangulation(3, 6).chain == [(5, 3), (3, 6), (6, 2)]
    for k, n in [(2, 5), (3, 7), (4, 9)]:
        assert zigzag_triangulation(k, n).is_maximal()
    with pytest.raises(ValueError):
        zigzag_triangulation(3, 4)


def test_a38_interior_labels():
    got = {K.members for K in akn_labels(3, 8).interior()}
    assert got == {(5, 7, 8), (1, 5, 8), (1, 4, 8), (1, 2, 4), (5, 6, 8), (4, 5, 8), (1, 4, 5), (1, 3, 4)}


@pytest.mark.parametrize("k", [2, 3, 4])
def test_akn_labels_sweep(k):
    for n in range(k + 2, 11):
        labels = akn_labels(k, n).all_labels()
        assert len(set(labels)) == len(labels) == k * (n - k) + 1
        assert all(weakly_separated(a, b) for a, b in itertools.combinations(labels, 2))


def test_unique_exchange_48_to_26():
    c = WSCollection([S(*x, n=8) for x in [(2, 8), (4, 8), (4, 6), (2, 4), (6, 8)]], 2, 8)
    ex = unique_exchange(c, S(4, 8, n=8))
    assert ex.partner == S(2, 6, n=8)
    assert {frozenset(p) for p in ex.monomials} == {
        frozenset({S(2, 8, n=8), S(4, 6, n=8)}),
        frozenset({S(2, 4, n=8), S(6, 8, n=8)}),
    }
    with pytest.raises(ValueError):
        unique_exchange(c, S(1, 2, n=8))


def test_no_exchange_when_corners_missing():
    c = WSCollection([S(1, 3, n=5)], 2, 5)
    with pytest.raises(NoExchange):
        unique_exchange(c, S(1, 3, n=5))


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_g2n_initial_seed_is_the_zigzag_triangulation_seed(n):
    a = build_initial_seed(2, n)
    b = triangulation_seed(zigzag_triangulation(2, n))
    assert set(a.cluster) == set(b.cluster)
    assert set(a.coefficients) == set(b.coefficients)
    assert a.matrix.as_label_dict() == b.matrix.as_label_dict()


def test_random_triangulation_seed_is_skew():
    for n in (5, 7, 9):
        s = triangulation_seed(random_triangulation(n, random.Random(n)))
        assert s.matrix.is_skew_symmetric()
        assert s.rank == n - 3


def test_purity_small_cases():
    counts = {}
    for k, n in [(2, 5), (2, 6), (3, 6)]:
        found = enumerate_maximal_ws(k, n)
        assert {len(c) for c in found} == {k * (n - k) + 1}
        counts[(k, n)] = len(found)
    # Cross-check against the Plücker clusters of the cluster exploration.
    res = explore(build_initial_seed(3, 6))
    pluecker_clusters = sum(all(v.is_pluecker for v in key) for key in res.graph.seeds)
    assert counts == {(2, 5): 5, (2, 6): 14, (3, 6): pluecker_clusters}
    assert pluecker_clusters == 34


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        enumerate_maximal_ws(3, 9)


def test_double_reduced_word():
    assert double_reduced_word(3)["W"] == [2, 1, 2, 1, 2, 1]
    assert double_reduced_word(4)["W"] == [2, 3, 2, 1, 2, 3, 1, 2, 3, 2, 1, 2]
    for k in range(2, 7):
        w = double_reduced_word(k)
        assert is_reduced_longest(w["R"], k) and is_reduced_longest(w["Rprime"], k)
    assert not is_reduced_longest([1, 1, 2], 3)


def test_triangulation_rejects_crossing_chords():
    with pytest.raises(ValueError):
        Triangulation(6, [Chord(1, 4, 6), Chord(2, 5, 6)])


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_flip_graph_matches_collection_exchange_graph(n):
    tri = all_triangulations(n)
    flips = nx.Graph()
    for t in tri:
        for c in t.internal_chords:
            flips.add_edge(t, t.flip(c))
    start = WSCollection([c.as_subset() for c in zigzag_triangulation(2, n).internal_chords], 2, n)
    adjacency = exchange_graph_of_collections(start)
    coll = nx.Graph()
    for a, nbrs in adjacency.items():
        for b in nbrs:
            coll.add_edge(a, b)
    catalan = [1, 1, 2, 5, 14, 42, 132][n - 2]
    assert flips.number_of_nodes() == coll.number_of_nodes() == catalan
    assert nx.is_isomorphic(flips, coll)
