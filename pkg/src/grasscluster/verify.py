"""Exact evaluation on explicit k x n rational matrices and identity checks."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .errors import (
    BadArity,
    BadIndex,
    ChartSingular,
    NotCrossing,
    ParametersNotIncreasing,
    ZeroToNegativePower,
)
from .ksubset import KSubset, sorted_sign
from .laurent import LaurentPoly, VarId, as_rat, lp_eval


def det(rows):
    """Exact determinant by fraction-valued Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    size = len(m)
    sign = 1
    result = Fraction(1)
    for c in range(size):
        pivot = next((r for r in range(c, size) if m[r][c] != 0), None)
        if pivot is None:
            return 0
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        p = m[c][c]
        result *= p
        for r in range(c + 1, size):
            f = m[r][c] / p
            if f:
                row_r, row_c = m[r], m[c]
                for j in range(c, size):
                    row_r[j] -= f * row_c[j]
    return as_rat(sign * result)


class ConfigMatrix:
    """A k x n matrix of rationals; column i is the vector v_i."""

    def __init__(self, entries):
        self.entries = [[as_rat(x) for x in row] for row in entries]
        self.k = len(self.entries)
        self.n = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.n for r in self.entries):
            raise ValueError("ragged matrix")
        self._minors = {}

    def column(self, i):
        return tuple(row[i - 1] for row in self.entries)

    def with_column(self, i, vec):
        rows = [list(r) for r in self.entries]
        for r, x in zip(rows, vec):
            r[i - 1] = x
        return ConfigMatrix(rows)

    def to_csv(self):
        from .laurent import rat_text

        return "\n".join(",".join(rat_text(x) for x in row) for row in self.entries) + "\n"

    @classmethod
    def from_csv(cls, text):
        return cls([[Fraction(c) for c in line.split(",")] for line in text.strip().splitlines()])

    def __repr__(self):
        return f"ConfigMatrix({self.k}x{self.n})"


def minor(m, K):
    """Maximal minor of ``m`` on the (sorted) column set ``K``."""
    members = K.members if isinstance(K, KSubset) else tuple(K)
    if len(members) != m.k:
        raise BadIndex(f"need {m.k} columns, got {members}")
    if any(not 1 <= c <= m.n for c in members):
        raise BadIndex(f"column index out of range in {members}")
    cached = m._minors.get(members)
    if cached is None:
        cached = det([[row[c - 1] for c in members] for row in m.entries])
        m._minors[members] = cached
    return cached


def all_minors(m):
    return {KSubset(c, m.n): minor(m, c) for c in itertools.combinations(range(1, m.n + 1), m.k)}


def all_minors_mod(rows, k, n, p):
    """All maximal minors of an integer matrix modulo a prime ``p``."""
    out = {}
    for cols in itertools.combinations(range(n), k):
        m = [[rows[r][c] % p for c in cols] for r in range(k)]
        d = 1
        for c in range(k):
            piv = next((r for r in range(c, k) if m[r][c]), None)
            if piv is None:
                d = 0
                break
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                d = -d
            d = d * m[c][c] % p
            inv = pow(m[c][c], p - 2, p)
            for r in range(c + 1, k):
                f = m[r][c] * inv % p
                if f:
                    m[r] = [(a - f * b) % p for a, b in zip(m[r], m[c])]
        out[KSubset([c + 1 for c in cols], n)] = d % p
    return out


def random_rational(rng):
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def random_config(k, n, rng, nonzero=()):
    """Random rational k x n matrix of full rank.

    ``nonzero`` lists column sets whose minors must not vanish (draws are
    rejected until they do).
    """
    while True:
        m = ConfigMatrix([[random_rational(rng) for _ in range(n)] for _ in range(k)])
        if nonzero:
            if all(minor(m, K) != 0 for K in nonzero):
                return m
        elif any(minor(m, c) != 0 for c in itertools.combinations(range(1, n + 1), k)):
            return m


def totally_positive_point(k, n, parameters=None):
    """Vandermonde matrix with rows x_j^(i-1); all maximal minors are positive."""
    xs = [as_rat(x) for x in (parameters or range(1, n + 1))]
    if len(xs) != n:
        raise ValueError("need one parameter per column")
    if xs[0] <= 0 or any(a >= b for a, b in zip(xs, xs[1:])):
        raise ParametersNotIncreasing(xs)
    m = ConfigMatrix([[x**i for x in xs] for i in range(k)])
    for K, val in all_minors(m).items():
        assert val > 0, (K, val)
    return m


def plucker_assignment(point, variables):
    """Minor values for every Plücker variable in ``variables``."""
    return {v: minor(point, v.payload) for v in variables if v.is_pluecker}


def evaluate_poly(p, point):
    """Evaluate a Laurent polynomial in Plücker ids at a configuration."""
    assign = plucker_assignment(point, p.vars)
    try:
        return lp_eval(p, assign)
    except ZeroToNegativePower as exc:
        raise ChartSingular(f"{exc.args[0]} vanishes at the point") from exc


def evaluate_variable(v, registry, point):
    """Value of cluster variable ``v`` at ``point`` via its Laurent expansion."""
    return evaluate_poly(registry.value(v), point)


# Signed Plücker coordinates and the special functions


def delta(indices, n):
    """Δ on an ordered index list: the sorted minor times the sorting sign."""
    sign = sorted_sign(indices)
    if sign == 0:
        return LaurentPoly.zero()
    return LaurentPoly.var(VarId.pluecker(KSubset(indices, n))).scale(sign)


def _d(s, n, *pos):
    return delta([s[p - 1] for p in pos], n)


def special_function(name, indices, n=None):
    """The functions X, Y (six indices) and A, B (eight indices) as Plücker polynomials."""
    s = [int(i) for i in indices]
    n = n or max(s)
    arity = {"X": 6, "Y": 6, "A": 8, "B": 8}
    if name not in arity:
        raise ValueError(f"unknown special function {name!r}")
    if len(s) != arity[name]:
        raise BadArity(f"{name} takes {arity[name]} indices, got {len(s)}")
    d = lambda *pos: _d(s, n, *pos)
    if name == "X":
        return d(1, 3, 4) * d(2, 5, 6) - d(1, 5, 6) * d(2, 3, 4)
    if name == "Y":
        return d(2, 3, 6) * d(1, 4, 5) - d(1, 2, 3) * d(4, 5, 6)
    if name == "A":
        return d(1, 3, 4) * (d(2, 5, 8) * d(1, 6, 7) - d(6, 7, 8) * d(1, 2, 5)) - d(
            1, 5, 8
        ) * d(2, 3, 4) * d(1, 6, 7)
    return d(2, 5, 8) * d(1, 3, 4) * d(2, 6, 7) - d(2, 3, 4) * (
        d(1, 2, 8) * d(5, 6, 7) + d(2, 5, 8) * d(1, 6, 7)
    )


# Vectors in three dimensions


def cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def triple(a, b, c):
    """``a . (b x c)``, equal to det(a b c)."""
    return dot(a, cross(b, c))


def det3(a, b, c):
    return det([[a[i], b[i], c[i]] for i in range(3)])


# Exchange relations on random points


class Report(dict):
    """A JSON-ready check report with a boolean ``passed`` entry."""

    @property
    def passed(self):
        return self["failures"] == 0


def _report(check, params, trials, failures, witness):
    return Report(
        check=check,
        params=params,
        trials=trials,
        failures=failures,
        passed=failures == 0,
        witness=witness.to_csv() if isinstance(witness, ConfigMatrix) else witness,
    )


def verify_identity_on_points(check, lhs, rhs, k, n, trials=50, rng_seed=0, params=None):
    """Check ``lhs == rhs`` (polynomials in Plücker ids) on random configurations."""
    rng = random.Random(rng_seed)
    failures = 0
    witness = None
    for _ in range(trials):
        m = random_config(k, n, rng)
        if evaluate_poly(lhs, m) != evaluate_poly(rhs, m):
            failures += 1
            witness = witness or m
    return _report(check, params or {}, trials, failures, witness)


def short_plucker_relation(I, i, j, s, t, n):
    """``(lhs, rhs)`` of Δ^{Iij}Δ^{Ist} = Δ^{Iis}Δ^{Ijt} + Δ^{Iit}Δ^{Ijs}."""
    if not crossing_pairs((i, j), (s, t), n):
        raise NotCrossing((i, j, s, t))
    I = set(I)
    P = lambda a, b: LaurentPoly.var(VarId.pluecker(KSubset(I | {a, b}, n)))
    lhs = P(i, j) * P(s, t)
    rhs = P(i, s) * P(j, t) + P(i, t) * P(j, s)
    return lhs, rhs


def crossing_pairs(p, q, n):
    """True iff chords p and q cross strictly inside the n-gon."""
    a, b = p
    if len({a, b, *q}) < 4:
        return False
    inside = lambda x: 0 < (x - a) % n < (b - a) % n
    return inside(q[0]) != inside(q[1])


def verify_exchange_on_points(relation, trials=50, rng_seed=0):
    """``relation`` = {"lhs": poly, "rhs": poly, "k": k, "n": n}."""
    return verify_identity_on_points(
        relation.get("name", "exchange"),
        relation["lhs"],
        relation["rhs"],
        relation["k"],
        relation["n"],
        trials,
        rng_seed,
        {"k": relation["k"], "n": relation["n"]},
    )


def verify_compound_determinants(trials=50, rng_seed=0):
    """X, Y and A as compound determinants of cross products."""
    rng = random.Random(rng_seed)
    failures = {"X": 0, "Y": 0, "A": 0}
    witness = None
    X = special_function("X", range(1, 7))
    Y = special_function("Y", range(1, 7))
    A = special_function("A", range(1, 9))
    for _ in range(trials):
        m6 = random_config(3, 6, rng)
        v = {i: m6.column(i) for i in range(1, 7)}
        if evaluate_poly(X, m6) != det3(cross(v[1], v[2]), cross(v[3], v[4]), cross(v[5], v[6])):
            failures["X"] += 1
            witness = witness or m6
        if evaluate_poly(Y, m6) != det3(cross(v[6], v[1]), cross(v[2], v[3]), cross(v[4], v[5])):
            failures["Y"] += 1
            witness = witness or m6
        m8 = random_config(3, 8, rng)
        w = {i: m8.column(i) for i in range(1, 9)}
        p = cross(cross(w[1], w[2]), cross(w[3], w[4]))
        q = cross(cross(w[1], w[8]), cross(w[6], w[7]))
        # det(p, q, v5) as printed is -A; swapping the first two columns gives A
        if evaluate_poly(A, m8) != det3(q, p, w[5]):
            failures["A"] += 1
            witness = witness or m8
    report = _report("compound_determinants", {"by_function": failures}, trials, sum(failures.values()), witness)
    return report


def reflected_b():
    """B^σ for σ(i) = 2 − i mod 8, normalized to be positive on positive points.

    The reflection reverses each index triple, so the cubic B pulled back along
    σ changes sign; the cluster variable is its negative.
    """
    return special_function("B", [(2 - i) % 8 or 8 for i in range(1, 9)], 8).scale(-1)


def explicit_relations():
    """The exchange relations defining Y, A, B and B^σ, as (name, lhs, rhs, k, n)."""
    d6 = lambda s: delta([int(c) for c in s], 6)
    d = lambda s: delta([int(c) for c in s], 8)
    x = lambda s: special_function("X", [int(c) for c in s], 8)
    y6 = special_function("Y", range(1, 7), 6)
    a = special_function("A", range(1, 9), 8)
    b = special_function("B", range(1, 9), 8)
    return [
        ("Y", d6("346") * y6, d6("146") * d6("236") * d6("345") + d6("136") * d6("234") * d6("456"), 3, 6),
        ("A", d("578") * a, d("178") * d("567") * x("123458") + d("158") * d("678") * x("123457"), 3, 8),
        ("B", d("158") * b, d("128") * d("567") * x("123458") + d("258") * a, 3, 8),
        ("B_alt", b, d("258") * d("134") * d("267") - d("234") * (d("158") * d("267") + d("678") * d("125")), 3, 8),
        (
            "B_Bsigma",
            b * reflected_b(),
            d("258") * special_function("Y", [2, 3, 4, 6, 7, 8], 8) * a
            + d("128") ** 2 * d("567") * d("678") * d("234") * d("345"),
            3,
            8,
        ),
    ]


def verify_explicit_relations(trials=50, rng_seed=0):
    """Check every relation of ``explicit_relations`` on random points."""
    reports = [
        verify_identity_on_points(name, lhs, rhs, k, n, trials, rng_seed + i, {"k": k, "n": n})
        for i, (name, lhs, rhs, k, n) in enumerate(explicit_relations())
    ]
    failures = {r["check"]: r["failures"] for r in reports}
    witness = next((r["witness"] for r in reports if r["witness"]), None)
    return _report("explicit_relations", {"by_relation": failures}, trials, sum(failures.values()), witness)


def substitute(p, values):
    """Replace each variable of ``p`` by the Laurent polynomial ``values[v]``."""
    out = LaurentPoly.zero()
    for mono, coef in p.monomials():
        term = LaurentPoly.const(coef)
        for v, e in mono.items():
            term = term * values[v] ** e
        out = out + term
    return out


def exact_identity(lhs, rhs, registry):
    """Compare two Plücker polynomials exactly after expanding in the initial cluster."""
    values = {v: registry.value(v) for v in set(lhs.vars) | set(rhs.vars)}
    return substitute(lhs, values) == substitute(rhs, values)


def concurrent_lines_config(rng):
    """3 x 6 configuration whose lines v1v2, v3v4, v5v6 share a common point."""
    while True:
        c = tuple(random_rational(rng) for _ in range(3))
        cols = []
        for _ in range(3):
            d = tuple(random_rational(rng) for _ in range(3))
            a, b = random_rational(rng), random_rational(rng)
            cols.append(tuple(x + a * y for x, y in zip(c, d)))
            cols.append(tuple(x + b * y for x, y in zip(c, d)))
        m = ConfigMatrix([[col[r] for col in cols] for r in range(3)])
        # reject degenerate draws (repeated or collinear neighbours)
        if all(minor(m, K) != 0 for K in [(1, 3, 5), (2, 4, 6), (1, 2, 3), (3, 4, 5), (1, 5, 6)]):
            return m


# Three-term relations, toric charts and the Schur analogue


def short_plucker_instances(k, n):
    """All (I, i, j, s, t) with {i,j} crossing {s,t} and i<s<j<t outside I."""
    out = []
    for I in itertools.combinations(range(1, n + 1), k - 2):
        rest = [x for x in range(1, n + 1) if x not in I]
        for i, s, j, t in itertools.combinations(rest, 4):
            out.append((I, i, j, s, t))
    return out


def verify_plucker_point(values, k, n):
    """Number of violated three-term relations for a map KSubset -> value."""
    bad = 0
    for I, i, j, s, t in short_plucker_instances(k, n):
        P = lambda a, b: values[KSubset(set(I) | {a, b}, n)]
        if P(i, j) * P(s, t) != P(i, s) * P(j, t) + P(i, t) * P(j, s):
            bad += 1
    return bad


def toric_roundtrip(expansions, cluster, coefficients, point, registry):
    """Round-trip a point through the chart of ``cluster``.

    ``expansions`` maps every Plücker VarId to its Laurent expansion in
    ``cluster`` and ``coefficients`` (see :func:`grasscluster.cluster.reexpand`).
    Chart coordinates are the values of the cluster variables at ``point``,
    computed from their expansions in the registry's initial cluster.
    """
    k, n = point.k, point.n
    chart = {}
    for v in tuple(cluster) + tuple(coefficients):
        chart[v] = evaluate_variable(v, registry, point)
        if chart[v] == 0:
            raise ChartSingular(f"{v} vanishes at the point")
    mismatches = 0
    for K, val in all_minors(point).items():
        if lp_eval(expansions[VarId.pluecker(K)], chart) != val:
            mismatches += 1
    return Report(
        check="toric_roundtrip",
        params={"k": k, "n": n},
        trials=1,
        failures=mismatches,
        passed=mismatches == 0,
        chart_size=len(chart),
        chart_positive=all(x > 0 for x in chart.values()),
        witness=None if not mismatches else point.to_csv(),
    )


def chart_to_pluckers(expansions, chart, k, n):
    """Plücker values reconstructed from arbitrary chart coordinates."""
    return {
        K: lp_eval(expansions[VarId.pluecker(K)], chart)
        for K in (KSubset(c, n) for c in itertools.combinations(range(1, n + 1), k))
    }


def schur_lambda(J):
    """Partition λ_J with λ_r = j_r - r, listed in weakly decreasing order."""
    js = sorted(J)
    return tuple(sorted((j - r for r, j in enumerate(js, start=1)), reverse=True))


def schur_value(lam, xs):
    """Schur polynomial s_λ(xs) via the bialternant formula."""
    m = len(xs)
    lam = tuple(p for p in lam if p)
    if len(lam) > m:
        return 0
    lam = lam + (0,) * (m - len(lam))
    num = det([[x ** (lam[j] + m - 1 - j) for j in range(m)] for x in xs])
    den = det([[x ** (m - 1 - j) for j in range(m)] for x in xs])
    return as_rat(Fraction(num) / Fraction(den))


def verify_schur_analogue(I, i, j, s, t, n, variable_count=3, trials=20, rng_seed=0):
    """Three-term Schur relation for s_{λ_J} with λ_r = j_r - r."""
    I = set(I)
    if I & {i, j, s, t} or not crossing_pairs((i, j), (s, t), n):
        raise NotCrossing((sorted(I), i, j, s, t))
    lam = lambda a, b: schur_lambda(I | {a, b})
    rng = random.Random(rng_seed)
    failures = 0
    witness = None
    for _ in range(trials):
        xs = []
        while len(xs) < variable_count:
            x = random_rational(rng)
            if x not in xs:
                xs.append(x)
        S = lambda a, b: schur_value(lam(a, b), xs)
        if S(i, j) * S(s, t) != S(i, s) * S(j, t) + S(i, t) * S(j, s):
            failures += 1
            witness = witness or [str(x) for x in xs]
    return _report(
        "schur_analogue",
        {"I": sorted(I), "ijst": [i, j, s, t], "n": n, "variables": variable_count},
        trials,
        failures,
        witness,
    )
