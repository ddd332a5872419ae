"""Check suites over explorations: exchange relations, positivity, charts."""

from __future__ import annotations

import random

from .cluster import reexpand
from .errors import ChartSingular
from .ksubset import KSubset
from .verify import (
    Report,
    evaluate_variable,
    minor,
    random_config,
    toric_roundtrip,
    totally_positive_point,
)


def _edges(graph):
    """Each undirected edge once, as ``(key, position, neighbour_key)``."""
    for key in graph.order:
        for pos, other in enumerate(graph.edges[key]):
            if other is not None and key < other:
                yield key, pos, other


def _column(graph, key, pos):
    rec = graph.seeds[key]
    rows = rec.cluster + graph.coefficients
    return {rows[r]: rec.entries[r][pos] for r in range(len(rows)) if rec.entries[r][pos]}


def _monomial_value(col, sign, values):
    out = 1
    for v, b in col.items():
        if b * sign > 0:
            out *= values[v] ** abs(b)
    return out


def short_plucker_shape(x, y, col):
    """True iff ``x y = M+ + M-`` is a short Plücker relation.

    That is, x = Δ^{Iij}, y = Δ^{Ist} with {i,j} crossing {s,t}, and the two
    monomials are Δ^{Iis}Δ^{Ijt} and Δ^{Iit}Δ^{Ijs} in some order.
    """
    if not (x.is_pluecker and y.is_pluecker) or any(not v.is_pluecker or abs(b) != 1 for v, b in col.items()):
        return False
    a, b = set(x.payload.members), set(y.payload.members)
    I = a & b
    if len(I) != x.payload.k - 2:
        return False
    i, j = sorted(a - I)
    s, t = sorted(b - I)
    n = x.payload.n
    P = lambda p, q: KSubset(I | {p, q}, n)
    plus = {v.payload for v, e in col.items() if e > 0}
    minus = {v.payload for v, e in col.items() if e < 0}
    want = [{P(i, s), P(j, t)}, {P(i, t), P(j, s)}]
    return sorted(map(sorted, (plus, minus))) == sorted(map(sorted, want))


def exchange_suite(exploration, trials=50, rng_seed=0):
    """Every exchange of the explored graph, checked on random points.

    Values of all cluster variables are computed once per point from their
    Laurent expansions. Exchanges among Plücker coordinates are additionally
    required to be short Plücker relations.
    """
    graph, reg = exploration.graph, exploration.variables
    k, n = reg.k, reg.n
    rng = random.Random(rng_seed)
    initial = [v.payload for v in reg.initial if v.is_pluecker]
    points = [random_config(k, n, rng, nonzero=initial) for _ in range(trials)]
    tables = []
    for m in points:
        vals = {v: evaluate_variable(v, reg, m) for v in reg.mutable}
        vals.update({c: minor(m, c.payload) for c in graph.coefficients})
        tables.append(vals)
    edges = failures = plucker_edges = shape_failures = 0
    witness = None
    for key, pos, other in _edges(graph):
        edges += 1
        x = graph.seeds[key].cluster[pos]
        y = next(v for v in graph.seeds[other].cluster if v not in graph.seeds[key].cluster)
        col = _column(graph, key, pos)
        if x.is_pluecker and y.is_pluecker and all(v.is_pluecker for v in col):
            plucker_edges += 1
            if not short_plucker_shape(x, y, col):
                shape_failures += 1
        for m, vals in zip(points, tables):
            if vals[x] * vals[y] != _monomial_value(col, 1, vals) + _monomial_value(col, -1, vals):
                failures += 1
                witness = witness or m.to_csv()
                break
    return Report(
        check="exchange_relations",
        params={"k": k, "n": n},
        trials=trials,
        edges=edges,
        plucker_edges=plucker_edges,
        short_plucker_shape_failures=shape_failures,
        failures=failures + shape_failures,
        passed=failures + shape_failures == 0,
        witness=witness,
    )


POSITIVE_PARAMETERS = (
    lambda n: list(range(1, n + 1)),
    lambda n: [i * i for i in range(1, n + 1)],
    lambda n: [2**i for i in range(n)],
    lambda n: [i + 1 + i * i for i in range(n)],
    lambda n: [3 * i + 2 for i in range(n)],
)


def positivity_suite(exploration, points=5):
    """All cluster variables evaluated on totally positive Vandermonde points."""
    reg = exploration.variables
    k, n = reg.k, reg.n
    failures = 0
    witness = None
    for make in POSITIVE_PARAMETERS[:points]:
        m = totally_positive_point(k, n, make(n))
        for v in reg.mutable:
            if evaluate_variable(v, reg, m) <= 0:
                failures += 1
                witness = witness or {"variable": v.text(), "point": m.to_csv()}
    return Report(
        check="positivity",
        params={"k": k, "n": n, "variables": len(reg)},
        trials=min(points, len(POSITIVE_PARAMETERS)),
        failures=failures,
        passed=failures == 0,
        witness=witness,
    )


def numerator_positivity(exploration, keys=None):
    """Count variables whose expansion in a seed has a negative coefficient.

    ``keys`` selects the seeds to expand in (all seeds by default). The
    result lists the offending (seed index, variable) pairs.
    """
    graph, reg = exploration.graph, exploration.variables
    keys = list(graph.order) if keys is None else list(keys)
    negative = []
    for idx, key in enumerate(keys):
        for v, p in reexpand(graph, reg, key).items():
            if any(c < 0 for c in p.terms.values()):
                negative.append((idx, v.text()))
    return Report(
        check="numerator_positivity",
        params={"k": reg.k, "n": reg.n, "seeds": len(keys)},
        trials=len(keys),
        failures=len(negative),
        passed=not negative,
        witness=negative[:10] or None,
    )


def toric_suite(exploration, trials=5, rng_seed=0, seeds=3):
    """Round-trip random and totally positive points through several charts."""
    graph, reg = exploration.graph, exploration.variables
    k, n = reg.k, reg.n
    rng = random.Random(rng_seed)
    failures = 0
    positive_charts = True
    runs = 0
    for key in graph.order[:: max(1, len(graph) // seeds)][:seeds]:
        expansions = reexpand(graph, reg, key)
        cluster = graph.seeds[key].cluster
        points = [totally_positive_point(k, n)]
        while len(points) < trials + 1:
            points.append(random_config(k, n, rng))
        for i, m in enumerate(points):
            try:
                rep = toric_roundtrip(expansions, cluster, graph.coefficients, m, reg)
            except ChartSingular:
                continue
            runs += 1
            failures += rep["failures"]
            if i == 0:
                positive_charts = positive_charts and rep["chart_positive"]
    return Report(
        check="toric_roundtrip",
        params={"k": k, "n": n, "charts": min(seeds, len(graph))},
        trials=runs,
        failures=failures + (0 if positive_charts else 1),
        chart_positive=positive_charts,
        passed=failures == 0 and positive_charts,
        witness=None,
    )


def coefficients_alone(exploration):
    """Coefficients that never form the whole frozen part of an exchange monomial.

    A coefficient c counts as occurring by itself when some exchange monomial
    has frozen part exactly c (first power, no other coefficient).
    """
    graph = exploration.graph
    frozen = set(graph.coefficients)
    found = set()
    for key in graph.order:
        for pos in range(len(graph.seeds[key].cluster)):
            col = _column(graph, key, pos)
            for sign in (1, -1):
                part = {v: b for v, b in col.items() if v in frozen and b * sign > 0}
                if len(part) == 1:
                    (v, b), = part.items()
                    if abs(b) == 1:
                        found.add(v)
        if found == frozen:
            break
    missing = sorted(v.text() for v in frozen - found)
    return Report(
        check="coefficients_alone",
        params={"coefficients": len(frozen)},
        trials=1,
        failures=len(missing),
        passed=not missing,
        witness=missing or None,
    )
