import random
from fractions import Fraction

import pytest

from grasscluster.cluster import explore
from grasscluster.combinatorics import build_initial_seed
from grasscluster.errors import BadArity, BadIndex, ChartSingular, NotCrossing, ParametersNotIncreasing
from grasscluster.ksubset import KSubset
from grasscluster.laurent import LaurentPoly, VarId
from grasscluster.suites import (
    coefficients_alone,
    exchange_suite,
    numerator_positivity,
    positivity_suite,
    short_plucker_shape,
    toric_suite,
)
from grasscluster.verify import (
    ConfigMatrix,
    all_minors,
    concurrent_lines_config,
    delta,
    det,
    evaluate_poly,
    evaluate_variable,
    explicit_relations,
    exact_identity,
    minor,
    random_config,
    short_plucker_relation,
    special_function,
    totally_positive_point,
    verify_compound_determinants,
    verify_explicit_relations,
    verify_identity_on_points,
    verify_plucker_point,
    verify_schur_analogue,
)


def test_det_and_minor():
    assert det([[1, 2], [3, 4]]) == -2
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[1, 2], [2, 4]]) == 0
    m = ConfigMatrix([[1, 0, 2], [0, 1, 3]])
    assert minor(m, (1, 2)) == 1
    assert minor(m, (1, 3)) == 3
    assert minor(m, KSubset((2, 3), 3)) == -2
    with pytest.raises(BadIndex):
        minor(m, (1, 4))
    with pytest.raises(BadIndex):
        minor(m, (1,))


def test_config_csv_round_trip():
    m = random_config(3, 6, random.Random(2))
    assert ConfigMatrix.from_csv(m.to_csv()).entries == m.entries


def test_totally_positive_points():
    m = totally_positive_point(3, 8)
    assert all(v > 0 for v in all_minors(m).values())
    with pytest.raises(ParametersNotIncreasing):
        totally_positive_point(2, 4, [1, 3, 2, 4])


def test_random_points_satisfy_plucker_relations():
    rng = random.Random(4)
    for k, n in [(2, 6), (3, 7), (4, 8)]:
        assert verify_plucker_point(all_minors(random_config(k, n, rng)), k, n) == 0


def test_short_plucker_relation_on_points():
    lhs, rhs = short_plucker_relation((3,), 1, 5, 2, 7, 8)
    assert verify_identity_on_points("three_term", lhs, rhs, 3, 8).passed
    with pytest.raises(NotCrossing):
        short_plucker_relation((), 1, 2, 3, 4, 6)


def test_delta_is_alternating():
    assert delta([2, 1, 3], 6) == LaurentPoly.var(VarId.pluecker(KSubset((1, 2, 3), 6))).scale(-1)
    assert delta([1, 1, 3], 6).is_zero()


def test_special_function_arity():
    with pytest.raises(BadArity):
        special_function("X", [1, 2, 3])
    with pytest.raises(ValueError):
        special_function("Z", range(1, 7))


def test_compound_determinants():
    rep = verify_compound_determinants(trials=50)
    assert rep.passed, rep["params"]


def test_x_vanishes_when_lines_are_concurrent():
    rng = random.Random(9)
    X = special_function("X", range(1, 7))
    for _ in range(10):
        assert evaluate_poly(X, concurrent_lines_config(rng)) == 0
    assert evaluate_poly(X, random_config(3, 6, rng)) != 0


def test_explicit_relations_hold():
    rep = verify_explicit_relations(trials=50)
    assert rep.passed, rep["params"]
    assert set(rep["params"]["by_relation"]) == {"Y", "A", "B", "B_alt", "B_Bsigma"}


def test_sign_flipped_relation_is_caught():
    name, lhs, rhs, k, n = explicit_relations()[1]
    rep = verify_identity_on_points(name, lhs, rhs.scale(-1), k, n, trials=10)
    assert rep["failures"] == 10
    assert rep["witness"]


def test_y_exchange_relation_exact():
    res = explore(build_initial_seed(3, 6))
    name, lhs, rhs, _, _ = explicit_relations()[0]
    assert name == "Y"
    assert exact_identity(lhs, rhs, res.variables)
    assert not exact_identity(lhs, rhs.scale(2), res.variables)


def test_evaluate_variable_at_singular_chart():
    res = explore(build_initial_seed(3, 6))
    reg = res.variables
    x = reg.initial[0]
    v = next(
        w for w in reg.mutable if any(mono.get(x, 0) < 0 for mono, _ in reg.value(w).monomials())
    )
    # Zero the last row on the columns of x so that its minor vanishes.
    cols = x.payload.members
    rows = [list(r) for r in random_config(3, 6, random.Random(1)).entries]
    rows[2] = [Fraction(0) if c + 1 in cols else e for c, e in enumerate(rows[2])]
    singular = ConfigMatrix(rows)
    assert minor(singular, cols) == 0
    with pytest.raises(ChartSingular):
        evaluate_variable(v, reg, singular)


@pytest.mark.parametrize("seed", range(20))
def test_schur_analogue(seed):
    rng = random.Random(seed)
    n = rng.randint(6, 10)
    k = rng.randint(2, 4)
    rest = list(range(1, n + 1))
    I = rng.sample(rest, k - 2)
    i, s, j, t = sorted(rng.sample([x for x in rest if x not in I], 4))
    assert verify_schur_analogue(I, i, j, s, t, n, trials=5, rng_seed=seed).passed


def test_schur_analogue_rejects_non_crossing():
    with pytest.raises(NotCrossing):
        verify_schur_analogue((), 1, 2, 3, 4, 6)


def test_short_plucker_shape_detects_wrong_monomials():
    P = lambda a, b: VarId.pluecker(KSubset((a, b), 6))
    good = {P(1, 2): 1, P(3, 4): 1, P(1, 4): -1, P(2, 3): -1}
    assert short_plucker_shape(P(1, 3), P(2, 4), good)
    bad = {P(1, 2): 1, P(3, 4): -1, P(1, 4): -1, P(2, 3): 1}
    assert not short_plucker_shape(P(1, 3), P(2, 4), bad)


@pytest.mark.parametrize("k,n", [(2, 5), (3, 6)])
def test_suites_on_small_cases(k, n):
    res = explore(build_initial_seed(k, n))
    assert exchange_suite(res, trials=10).passed
    assert positivity_suite(res).passed
    assert toric_suite(res).passed
    assert coefficients_alone(res).passed


def test_g2n_numerators_are_positive():
    res = explore(build_initial_seed(2, 6))
    assert numerator_positivity(res).passed


def test_g36_numerators_reported():
    res = explore(build_initial_seed(3, 6))
    rep = numerator_positivity(res, keys=res.graph.order[:5])
    assert rep["trials"] == 5
    assert rep["failures"] == len(rep["witness"] or [])
