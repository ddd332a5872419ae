import pytest

from grasscluster.classify import (
    DYNKIN_SEQUENCES,
    Quiver,
    almost_positive_roots,
    classify_seed,
    correspondence_check,
    dynkin_seed,
    find_affine_certificate,
    find_affine_subgraph,
    load_table,
    name_function,
    recognize_dynkin,
    seed_count_formula,
    sigma,
    tau,
    tau_orbits,
    toral_weight_of_poly,
    translate_indices,
)
from grasscluster.cluster import run_mutation_sequence
from grasscluster.combinatorics import build_initial_seed
from grasscluster.errors import NotHomogeneous
from grasscluster.laurent import LaurentPoly, VarId
from grasscluster.ksubset import KSubset


def bipartite(edges, n):
    """Alternating quiver on a tree: arrows leave even-distance vertices."""
    b = [[0] * n for _ in range(n)]
    adj = {i: set() for i in range(n)}
    for x, y in edges:
        adj[x].add(y)
        adj[y].add(x)
    colour = {0: 0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in colour:
                colour[y] = 1 - colour[x]
                stack.append(y)
    for x, y in edges:
        s, t = (x, y) if colour[x] == 0 else (y, x)
        b[s][t], b[t][s] = 1, -1
    return Quiver(list(range(1, n + 1)), b)


D4 = bipartite([(0, 1), (1, 2), (1, 3)], 4)
E6 = bipartite([(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)], 6)
E8 = bipartite([(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)], 8)


def test_recognize_types():
    assert recognize_dynkin(D4).name == "D4"
    assert recognize_dynkin(E6).name == "E6"
    assert recognize_dynkin(E8).name == "E8"
    assert recognize_dynkin(bipartite([(0, 1), (1, 2)], 3)).name == "A3"
    assert recognize_dynkin(Quiver([1], [[0]])).name == "A1"


def test_recognition_ignores_orientation():
    assert recognize_dynkin(E6.reversed()).name == "E6"
    path = Quiver([1, 2, 3], [[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
    assert recognize_dynkin(path).name == "A3"
    assert recognize_dynkin(path).epsilon is None


def test_non_dynkin_graphs():
    cycle = Quiver([1, 2, 3], [[0, 1, -1], [-1, 0, 1], [1, -1, 0]])
    assert recognize_dynkin(cycle) is None
    assert recognize_dynkin(Quiver([1, 2], [[0, 2], [-2, 0]])) is None
    assert recognize_dynkin(Quiver.from_seed(build_initial_seed(3, 8))) is None


def test_root_counts():
    assert len(almost_positive_roots(recognize_dynkin(D4))) == 16
    assert len(almost_positive_roots(recognize_dynkin(E6))) == 42
    assert len(almost_positive_roots(recognize_dynkin(E8))) == 128


def test_seed_count_formula():
    assert seed_count_formula("A", 3) == 14
    assert seed_count_formula("D", 4) == 50
    assert seed_count_formula("E", 6) == 833
    assert seed_count_formula("E", 8) == 25080


@pytest.mark.parametrize("quiver", [D4, E6], ids=["D4", "E6"])
def test_tau_is_an_involution_on_almost_positive_roots(quiver):
    spec = recognize_dynkin(quiver)
    roots = set(almost_positive_roots(spec))
    for sign in (1, -1):
        for r in roots:
            assert tau(sign, r, spec) in roots
            assert tau(sign, tau(sign, r, spec), spec) == r


def test_tau_orbits_d4():
    spec = recognize_dynkin(D4)
    orbits = tau_orbits(spec)
    assert sorted(len(o) for o in orbits) == [4, 4, 4, 4]
    negatives = [r for r in almost_positive_roots(spec) if min(r) < 0]
    assert all(sum(r in o for r in negatives) == 1 for o in orbits)


def test_tau_orbits_e6_pair_negative_simples():
    spec = recognize_dynkin(E6)
    orbits = tau_orbits(spec)
    assert sorted(len(o) for o in orbits) == [7, 7, 14, 14]
    negatives = [r for r in almost_positive_roots(spec) if min(r) < 0]
    per_orbit = sorted((len(o), sum(r in o for r in negatives)) for o in orbits)
    assert per_orbit == [(7, 1), (7, 1), (14, 2), (14, 2)]


def test_dynkin_sequences_give_bipartite_quivers():
    expected = {(3, 6): "D4", (3, 7): "E6", (3, 8): "E8"}
    for (k, n), name in expected.items():
        s = run_mutation_sequence(build_initial_seed(k, n), DYNKIN_SEQUENCES[(k, n)])
        q = Quiver.from_seed(s)
        spec = recognize_dynkin(q)
        assert spec.name == name
        assert q.is_bipartite_orientation()


def test_toral_weights():
    assert toral_weight_of_poly(name_function("B", 8), 8) == (1, 2, 1, 1, 1, 1, 1, 1)
    assert toral_weight_of_poly(name_function("X123458", 8), 8) == (1, 1, 1, 1, 1, 0, 0, 1)
    assert toral_weight_of_poly(name_function("A", 8), 8) == (2, 1, 1, 1, 1, 1, 1, 1)
    mixed = LaurentPoly.var(VarId.pluecker(KSubset((1, 2, 3), 6))) + 1
    with pytest.raises(NotHomogeneous):
        toral_weight_of_poly(mixed, 6)


def test_translate_names():
    assert sigma(1, 8) == 1 and sigma(2, 8) == 8 and sigma(3, 8) == 7
    assert translate_indices("A^r3") == ("A", [4, 5, 6, 7, 8, 1, 2, 3])
    assert translate_indices("B^s") == ("B", [1, 8, 7, 6, 5, 4, 3, 2])


def test_shipped_tables():
    assert len(load_table("d4")) == 16
    assert len(load_table("e6")) == 42
    assert len(load_table("e8")) == 128


def test_d4_and_e6_tables_match(explored):
    for k, n in [(3, 6), (3, 7)]:
        res = explored(k, n)
        dseed = dynkin_seed(build_initial_seed(k, n), res.variables)
        rep = correspondence_check(res, dseed)
        assert rep["passed_as_printed"], rep
        assert rep["errata"] == []


def test_d4_denominator_vectors(explored):
    table = dict((name, root) for root, name in load_table("d4"))
    assert table["X123456"] == (1, 2, 1, 1)
    assert table["D246"] == (1, 1, 1, 1)
    res = explored(3, 6)
    rep = correspondence_check(res, dynkin_seed(build_initial_seed(3, 6), res.variables))
    assert rep["frame"]["index"] == 0 and rep["passed"]


def test_affine_subgraph_patterns():
    kronecker = [[0, 2], [-2, 0]]
    assert find_affine_subgraph(kronecker) == ("A~1", [0, 1])
    oriented = [[0, 1, -1], [-1, 0, 1], [1, -1, 0]]
    assert find_affine_subgraph(oriented) is None
    acyclic = [[0, 1, 1], [-1, 0, 1], [-1, -1, 0]]
    assert find_affine_subgraph(acyclic) == ("A~2", [0, 1, 2])
    assert find_affine_subgraph(D4.b) is None


@pytest.mark.parametrize("k,n,kind", [(3, 9, "D~6"), (4, 8, "D~4")])
def test_infinite_type_certificates(k, n, kind):
    s0 = build_initial_seed(k, n)
    cert = find_affine_certificate(s0, depth_cap=12)
    assert cert["type"] == kind
    assert cert["depth"] <= 12
    result = classify_seed(s0)
    assert result["finite"] is False
    assert result["certificate"]["type"] == kind


def test_classify_finite_cases():
    assert classify_seed(build_initial_seed(3, 6))["type"] == "D4"
    assert classify_seed(build_initial_seed(2, 7))["type"] == "A4"
    assert classify_seed(build_initial_seed(3, 7)) == {
        "finite": True,
        "type": "E6",
        "path": [2, 4, 3, 5, 6, 5, 1],
        "certificate": None,
    }
