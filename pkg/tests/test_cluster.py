import random

import pytest

from grasscluster.cluster import (
    ExtMatrix,
    VariableRegistry,
    check_skew_symmetrizable,
    explore,
    matrix_mutate,
    seed_mutate,
)
from grasscluster.combinatorics import Chord, Triangulation, build_initial_seed, triangulation_seed
from grasscluster.errors import NotMutable
from grasscluster.ksubset import KSubset
from grasscluster.laurent import LaurentPoly, VarId, lp_eval
from grasscluster.verify import evaluate_poly, evaluate_variable, minor, random_config, special_function


def P(*idx, n=8):
    return VarId.pluecker(KSubset(idx, n))


def random_skew(n, rng, frozen=0):
    b = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(-2, 2)
            b[i][j], b[j][i] = v, -v
    extra = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(frozen)]
    return b + extra


def test_local_submatrix_mutation():
    # Rows/columns Iisv, Iijv, Iitv, Ijsv, Ijtv; mutate at Iijv.
    labels = [VarId.anon(i) for i in range(5)]
    b = [
        [0, 1, 0, 0, 0],
        [-1, 0, 1, 1, -1],
        [0, -1, 0, 0, 0],
        [0, -1, 0, 0, 0],
        [0, 1, 0, 0, 0],
    ]
    m = matrix_mutate(ExtMatrix(labels, labels, b), labels[1])
    assert m.entries[0] == (0, -1, 1, 1, 0)
    assert m.entries[1] == (1, 0, -1, -1, 1)
    assert [row[0] for row in m.entries] == [0, 1, -1, -1, 0]
    assert [row[1] for row in m.entries] == [-1, 0, 1, 1, -1]


def test_mutation_is_an_involution():
    rng = random.Random(1)
    for _ in range(100):
        n = rng.randint(2, 6)
        labels = [VarId.anon(i) for i in range(n + 2)]
        m = ExtMatrix(labels, labels[:n], random_skew(n, rng, frozen=2))
        z = rng.choice(labels[:n])
        twice = matrix_mutate(matrix_mutate(m, z), z)
        assert twice == m
        assert matrix_mutate(m, z).is_skew_symmetric()


def test_mutate_rejects_frozen_label():
    labels = [VarId.anon(i) for i in range(3)]
    m = ExtMatrix(labels, labels[:2], [[0, 1], [-1, 0], [1, 1]])
    with pytest.raises(NotMutable):
        matrix_mutate(m, labels[2])


def test_skew_symmetrizer():
    assert check_skew_symmetrizable([[0, 1], [-2, 0]]) == [2, 1]
    assert check_skew_symmetrizable([[0, 1], [1, 0]]) is None
    assert check_skew_symmetrizable([[0, 2, 0], [-2, 0, 1], [0, -1, 0]]) == [1, 1, 1]


def test_quadrilateral_flip_48_to_26():
    t = Triangulation(8, [Chord(2, 8, 8), Chord(4, 8, 8), Chord(4, 6, 8), Chord(2, 4, 8), Chord(6, 8, 8)])
    s = triangulation_seed(t)
    reg = VariableRegistry(s.cluster, s.coefficients, 2, 8)
    new = seed_mutate(s, P(4, 8), reg)
    assert P(2, 6) in new.cluster and P(4, 8) not in new.cluster
    value = new.value_of(P(2, 6))
    expected = (
        LaurentPoly.var(P(2, 8)) * LaurentPoly.var(P(4, 6)) + LaurentPoly.var(P(2, 4)) * LaurentPoly.var(P(6, 8))
    ) * LaurentPoly.var(P(4, 8)) ** -1
    assert value == expected
    back = seed_mutate(new, P(2, 6), reg)
    assert back.cluster == s.cluster and back.matrix == s.matrix


def test_seed_mutation_involution_on_random_paths():
    rng = random.Random(3)
    s0 = build_initial_seed(3, 6)
    reg = VariableRegistry(s0.cluster, s0.coefficients, 3, 6)
    s = s0
    for _ in range(20):
        z = rng.choice(s.cluster)
        t = seed_mutate(s, z, reg)
        w = t.cluster[s.cluster.index(z)]
        back = seed_mutate(t, w, reg)
        assert back.cluster == s.cluster and back.matrix == s.matrix and back.values == s.values
        s = t


def test_registry_names_plucker_minors():
    s0 = build_initial_seed(3, 6)
    reg = VariableRegistry(s0.cluster, s0.coefficients, 3, 6)
    seen = set()
    s = s0
    for z in s0.cluster:
        s = seed_mutate(s, s.cluster[s.cluster.index(z)], reg)
        seen.update(s.cluster)
    named = [v for v in seen if v.is_pluecker]
    rng = random.Random(0)
    m = random_config(3, 6, rng)
    for v in named:
        point = {c: minor(m, c.payload.members) for c in s0.cluster + s0.coefficients}
        assert lp_eval(reg.value(v), point) == minor(m, v.payload.members)


def test_g36_contains_y_function():
    res = explore(build_initial_seed(3, 6))
    reg = res.variables
    m = random_config(3, 6, random.Random(7))
    y = evaluate_poly(special_function("Y", [1, 2, 3, 4, 5, 6], 6), m)
    values = {evaluate_variable(v, reg, m) for v in reg.mutable if not v.is_pluecker}
    assert y in values


def test_explore_g26():
    res = explore(build_initial_seed(2, 6))
    assert res.closed
    assert len(res.graph) == 14
    assert len(res.variables) == 9
    assert res.graph.is_regular()
    assert res.stats["not_divisible"] == 0


def test_explore_caps_stop_early():
    res = explore(build_initial_seed(3, 6), max_seeds=10)
    assert not res.closed
    assert len(res.graph) <= 10


def test_non_strict_agrees_with_strict():
    a = explore(build_initial_seed(3, 6), strict=True)
    b = explore(build_initial_seed(3, 6), strict=False)
    assert set(a.graph.seeds) == set(b.graph.seeds)
    assert b.stats["exact_divisions"] < a.stats["exact_divisions"]
