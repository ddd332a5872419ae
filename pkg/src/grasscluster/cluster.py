"""Exchange matrices, seeds, mutation and exchange-graph exploration."""

from __future__ import annotations

import random
import threading
from collections import deque
from fractions import Fraction
from math import gcd
from operator import attrgetter

from .errors import (
    BadIndex,
    LaurentViolation,
    NotDivisible,
    NotMutable,
)
from .laurent import LaurentPoly, VarId, lp_div_exact, lp_eval

# Modulus for evaluation fingerprints (a Mersenne prime).
PRIME = (1 << 61) - 1

_key_of = attrgetter("_key")


def cluster_key(ids):
    """Canonical key of a cluster: its variables sorted in the global order."""
    return tuple(sorted(ids, key=_key_of))


def mutate_entries(entries, z):
    """Mutate a row-major integer matrix (tuple of tuples) at column ``z``."""
    zrow = entries[z]
    out = []
    for x, row in enumerate(entries):
        if x == z:
            out.append(tuple(-b for b in row))
            continue
        bxz = row[z]
        if bxz == 0:
            out.append(row)
            continue
        new = []
        for y, b in enumerate(row):
            if y == z:
                new.append(-b)
            else:
                bzy = zrow[y]
                if bxz > 0 and bzy > 0:
                    new.append(b + bxz * bzy)
                elif bxz < 0 and bzy < 0:
                    new.append(b - bxz * bzy)
                else:
                    new.append(b)
        out.append(tuple(new))
    return tuple(out)


class ExtMatrix:
    """Extended exchange matrix with labelled rows (mutable then frozen) and columns."""

    __slots__ = ("row_labels", "col_labels", "entries")

    def __init__(self, row_labels, col_labels, entries):
        row_labels = tuple(row_labels)
        col_labels = tuple(col_labels)
        entries = tuple(tuple(int(b) for b in row) for row in entries)
        if row_labels[: len(col_labels)] != col_labels:
            raise ValueError("column labels must be the leading row labels")
        if len(entries) != len(row_labels) or any(len(r) != len(col_labels) for r in entries):
            raise ValueError("entries have the wrong shape")
        object.__setattr__(self, "row_labels", row_labels)
        object.__setattr__(self, "col_labels", col_labels)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("ExtMatrix is immutable")

    @property
    def rank(self):
        return len(self.col_labels)

    def principal(self):
        n = self.rank
        return [list(row) for row in self.entries[:n]]

    def entry(self, x, y):
        return self.entries[self.row_labels.index(x)][self.col_labels.index(y)]

    def column(self, z):
        j = self.col_labels.index(z)
        return {x: row[j] for x, row in zip(self.row_labels, self.entries) if row[j]}

    def relabel(self, old, new):
        swap = lambda v: new if v == old else v
        return ExtMatrix(
            [swap(v) for v in self.row_labels],
            [swap(v) for v in self.col_labels],
            self.entries,
        )

    def is_skew_symmetric(self):
        b = self.principal()
        n = len(b)
        return all(b[i][j] == -b[j][i] for i in range(n) for j in range(n))

    def as_label_dict(self):
        return {
            (x, y): b
            for x, row in zip(self.row_labels, self.entries)
            for y, b in zip(self.col_labels, row)
            if b
        }

    def __eq__(self, other):
        return (
            isinstance(other, ExtMatrix)
            and self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.row_labels, self.entries))

    def __repr__(self):
        return f"ExtMatrix({len(self.row_labels)}x{self.rank})"


def matrix_mutate(m, z):
    """Mutation of ``m`` in direction ``z``; labels are unchanged."""
    if z not in m.col_labels:
        raise NotMutable(f"{z} is not a mutable label")
    j = m.col_labels.index(z)
    return ExtMatrix(m.row_labels, m.col_labels, mutate_entries(m.entries, j))


def check_skew_symmetrizable(b):
    """Return a positive integer symmetrizer ``d`` (diagonal entries) or ``None``.

    ``d_i * b_ij == -d_j * b_ji`` must hold for all i, j. The ratios
    ``d_j / d_i`` are propagated along the graph of nonzero entries.
    """
    n = len(b)
    for i in range(n):
        if b[i][i] != 0:
            return None
        for j in range(n):
            if (b[i][j] == 0) != (b[j][i] == 0):
                return None
            if b[i][j] * b[j][i] > 0:
                return None
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if b[i][j] == 0:
                    continue
                want = d[i] * Fraction(-b[i][j], b[j][i])
                if d[j] is None:
                    d[j] = want
                    queue.append(j)
                elif d[j] != want:
                    return None
    lcm = 1
    for x in d:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in d]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints]


class Seed:
    """A seed: ordered cluster with Laurent values, frozen coefficients, matrix.

    ``values[i]`` is the expansion of ``cluster[i]`` in the initial variables.
    ``vertex_numbers`` optionally carries auxiliary integer labels of the
    cluster positions (used to replay published mutation sequences); they
    stay attached to positions under mutation.
    """

    __slots__ = ("cluster", "values", "coefficients", "matrix", "vertex_numbers", "k", "n")

    def __init__(self, cluster, values, coefficients, matrix, vertex_numbers=None, k=None, n=None):
        self.cluster = tuple(cluster)
        self.values = tuple(values)
        self.coefficients = tuple(coefficients)
        self.matrix = matrix
        self.vertex_numbers = tuple(vertex_numbers) if vertex_numbers else None
        self.k = k
        self.n = n
        if matrix.col_labels != self.cluster:
            raise ValueError("matrix columns must match the cluster")
        if matrix.row_labels != self.cluster + self.coefficients:
            raise ValueError("matrix rows must be cluster then coefficients")
        if len(self.values) != len(self.cluster):
            raise ValueError("one value per cluster variable")

    @classmethod
    def initial(cls, cluster, coefficients, entries, vertex_numbers=None, k=None, n=None):
        """Seed whose cluster values are the indeterminates themselves."""
        cluster = tuple(cluster)
        coefficients = tuple(coefficients)
        matrix = ExtMatrix(cluster + coefficients, cluster, entries)
        values = [LaurentPoly.var(v) for v in cluster]
        return cls(cluster, values, coefficients, matrix, vertex_numbers, k, n)

    @property
    def rank(self):
        return len(self.cluster)

    def key(self):
        return cluster_key(self.cluster)

    def value_of(self, v):
        if v in self.cluster:
            return self.values[self.cluster.index(v)]
        if v in self.coefficients:
            return LaurentPoly.var(v)
        raise KeyError(v)

    def position_of_number(self, number):
        if self.vertex_numbers is None:
            if not 1 <= number <= self.rank:
                raise BadIndex(number)
            return number - 1
        if number not in self.vertex_numbers:
            raise BadIndex(number)
        return self.vertex_numbers.index(number)

    def exchange_monomials(self, z):
        """The two monomials ``(M+, M-)`` of the exchange relation at ``z``."""
        col = self.matrix.column(z)
        plus = {x: b for x, b in col.items() if b > 0}
        minus = {x: -b for x, b in col.items() if b < 0}
        return plus, minus

    def quiver_edges(self):
        """Arrows ``(x, y, b_xy)`` of the principal part with ``b_xy > 0``."""
        b = self.matrix.principal()
        return [
            (self.cluster[i], self.cluster[j], b[i][j])
            for i in range(self.rank)
            for j in range(self.rank)
            if b[i][j] > 0
        ]

    def __repr__(self):
        return f"Seed(rank={self.rank}, cluster={list(self.cluster)})"


class Fingerprinter:
    """Residues of Laurent polynomials at fixed random points modulo ``PRIME``.

    Used as a lookup index for cluster variables; exact arithmetic remains
    the source of truth for every stored polynomial.
    """

    def __init__(self, variables, points=3, rng_seed=0):
        rng = random.Random(rng_seed)
        self.values = {v: tuple(rng.randrange(2, PRIME) for _ in range(points)) for v in variables}
        self.points = points

    def of_var(self, v):
        return self.values[v]

    def of_poly(self, p):
        out = []
        for t in range(self.points):
            vals = [self.values[v][t] for v in p.vars]
            inv = [pow(x, PRIME - 2, PRIME) for x in vals]
            total = 0
            for exps, c in p.terms.items():
                term = Fraction(c)
                term = term.numerator * pow(term.denominator, PRIME - 2, PRIME)
                for x, xi, e in zip(vals, inv, exps):
                    if e > 0:
                        term = term * pow(x, e, PRIME) % PRIME
                    elif e < 0:
                        term = term * pow(xi, -e, PRIME) % PRIME
                total = (total + term) % PRIME
            out.append(total)
        return tuple(out)

    def of_monomial(self, mono, fps):
        out = []
        for t in range(self.points):
            r = 1
            for v, e in mono.items():
                r = r * pow(fps[v][t], e, PRIME) % PRIME
            out.append(r)
        return tuple(out)


class VariableRegistry:
    """Bijective table between canonical Laurent polynomials and variable ids.

    The initial cluster and coefficient variables map to themselves. A new
    polynomial is named as a Plücker variable when it agrees with a minor
    at random points of the Grassmannian (checked modulo a prime and then
    exactly at a rational point); otherwise it gets the next anonymous
    ordinal.
    """

    def __init__(self, initial, coefficients=(), k=None, n=None, rng_seed=0):
        self.table = {}
        self.inverse = {}
        self.mutable = []
        self.coefficients = tuple(coefficients)
        self.initial = tuple(initial)
        self.k = k
        self.n = n
        self._lock = threading.Lock()
        self._next_anon = 0
        self._first_seen = {}
        for v in self.initial + self.coefficients:
            self._store(LaurentPoly.var(v), v)
            if v.kind == VarId.ANON:
                self._next_anon = max(self._next_anon, v.payload + 1)
        self.mutable.extend(self.initial)
        self._minor_tables = None
        self._rng_seed = rng_seed
        self.fingerprinter = Fingerprinter(self.initial + self.coefficients, rng_seed=rng_seed)
        self.fingerprints = {}
        for v in self.initial + self.coefficients:
            self.fingerprints[self.fingerprinter.of_var(v)] = v

    def _store(self, poly, v):
        self.table[poly] = v
        self.inverse[v] = poly

    def __contains__(self, v):
        return v in self.inverse

    def __len__(self):
        return len(self.mutable)

    def value(self, v):
        return self.inverse[v]

    def lookup(self, poly):
        return self.table.get(poly)

    def register(self, poly, fingerprint=None):
        """Return the id of ``poly``, allocating one if it is new."""
        with self._lock:
            found = self.table.get(poly)
            if found is not None:
                return found
            name = self._pluecker_name(poly)
            if name is None:
                name = VarId.anon(self._next_anon)
                self._next_anon += 1
            if name in self.inverse:
                raise LaurentViolation(f"{name} already names a different polynomial")
            self._store(poly, name)
            self.mutable.append(name)
            fp = fingerprint if fingerprint is not None else self.fingerprinter.of_poly(poly)
            self.fingerprints[fp] = name
            return name

    # Plücker naming
    def _ensure_minor_tables(self):
        if self._minor_tables is not None:
            return
        from .verify import all_minors_mod, random_config

        rng = random.Random(self._rng_seed + 7919)
        tables = []
        for _ in range(2):
            while True:
                rows = [[rng.randrange(1, PRIME) for _ in range(self.n)] for _ in range(self.k)]
                minors = all_minors_mod(rows, self.k, self.n, PRIME)
                if all(minors.values()):
                    break
            by_value = {}
            for K, val in minors.items():
                by_value.setdefault(val, []).append(K)
            tables.append((minors, by_value))
        exact = random_config(self.k, self.n, random.Random(self._rng_seed + 104729))
        self._minor_tables = (tables, exact)

    def _pluecker_name(self, poly):
        if self.k is None or not all(v.is_pluecker for v in self.initial + self.coefficients):
            return None
        self._ensure_minor_tables()
        tables, exact = self._minor_tables
        candidates = None
        for minors, by_value in tables:
            assign = {v: minors[v.payload] for v in poly.vars}
            try:
                val = _eval_mod(poly, assign)
            except ZeroDivisionError:
                return None
            found = set(by_value.get(val, ()))
            candidates = found if candidates is None else candidates & found
        if not candidates or len(candidates) != 1:
            return None
        (K,) = candidates
        from .verify import minor

        assign = {v: minor(exact, v.payload) for v in poly.vars}
        if lp_eval(poly, assign) != minor(exact, K):
            return None
        return VarId.pluecker(K)

    def plucker_count(self):
        return sum(1 for v in self.mutable if v.is_pluecker)

    def non_plucker_count(self):
        return sum(1 for v in self.mutable if not v.is_pluecker)


def _eval_mod(poly, assign):
    total = 0
    for exps, c in poly.terms.items():
        c = Fraction(c)
        term = c.numerator * pow(c.denominator, PRIME - 2, PRIME) % PRIME
        for v, e in zip(poly.vars, exps):
            x = assign[v] % PRIME
            if e < 0:
                if x == 0:
                    raise ZeroDivisionError(v)
                x = pow(x, PRIME - 2, PRIME)
                e = -e
            term = term * pow(x, e, PRIME) % PRIME
        total = (total + term) % PRIME
    return total


def exchange_quotient(seed, z, values):
    """Exact value of the new variable ``(M+ + M-) / value(z)``."""
    plus, minus = seed.exchange_monomials(z)
    mp = LaurentPoly.const(1)
    for x, e in plus.items():
        mp = mp * values(x) ** e
    mm = LaurentPoly.const(1)
    for x, e in minus.items():
        mm = mm * values(x) ** e
    try:
        return lp_div_exact(mp + mm, values(z))
    except NotDivisible as exc:
        raise LaurentViolation(str(exc)) from exc


def seed_mutate(s, z, registry):
    """Mutate seed ``s`` at cluster variable ``z``."""
    if z not in s.cluster:
        raise NotMutable(f"{z} is not in the cluster")
    i = s.cluster.index(z)
    new_value = exchange_quotient(s, z, s.value_of)
    new_id = registry.register(new_value)
    matrix = matrix_mutate(s.matrix, z).relabel(z, new_id)
    cluster = s.cluster[:i] + (new_id,) + s.cluster[i + 1 :]
    values = s.values[:i] + (new_value,) + s.values[i + 1 :]
    return Seed(cluster, values, s.coefficients, matrix, s.vertex_numbers, s.k, s.n)


def run_mutation_sequence(s0, seq, registry=None):
    """Mutate at the positions carrying the given vertex numbers, in order."""
    if registry is None:
        registry = VariableRegistry(s0.cluster, s0.coefficients, s0.k, s0.n)
    s = s0
    for number in seq:
        pos = s.position_of_number(number)
        s = seed_mutate(s, s.cluster[pos], registry)
    return s


class SeedRecord:
    """Compact seed stored in an exchange graph (values live in the registry)."""

    __slots__ = ("cluster", "entries", "depth")

    def __init__(self, cluster, entries, depth):
        self.cluster = cluster
        self.entries = entries
        self.depth = depth

    def label_entries(self, coefficients):
        rows = self.cluster + coefficients
        return {
            (x, y): b
            for x, row in zip(rows, self.entries)
            for y, b in zip(self.cluster, row)
            if b
        }


class ExchangeGraph:
    """Seeds keyed by cluster key, with mutation adjacency per position."""

    def __init__(self, coefficients, k=None, n=None):
        self.coefficients = tuple(coefficients)
        self.seeds = {}
        self.edges = {}
        self.order = []
        self.k = k
        self.n = n

    def add(self, key, record):
        self.seeds[key] = record
        self.edges[key] = [None] * len(record.cluster)
        self.order.append(key)

    def __len__(self):
        return len(self.seeds)

    def seed(self, key, registry):
        """Rebuild a full :class:`Seed` for ``key``."""
        rec = self.seeds[key]
        matrix = ExtMatrix(rec.cluster + self.coefficients, rec.cluster, rec.entries)
        values = [registry.value(v) for v in rec.cluster]
        return Seed(rec.cluster, values, self.coefficients, matrix, None, self.k, self.n)

    def find_seed_containing(self, ids):
        want = set(ids)
        for key in self.order:
            if want <= set(key):
                return key
        return None

    def is_regular(self):
        for key, nbrs in self.edges.items():
            if any(x is None for x in nbrs) or len(set(nbrs)) != len(nbrs):
                return False
        return True


class ExploreResult:
    """Outcome of :func:`explore`."""

    def __init__(self, graph, variables, closed, stats):
        self.graph = graph
        self.variables = variables
        self.closed = closed
        self.stats = stats

    def summary(self):
        reg = self.variables
        return {
            "closed": self.closed,
            "seed_count": len(self.graph),
            "variable_count": len(reg),
            "plucker_count": reg.plucker_count(),
            "non_plucker_count": reg.non_plucker_count(),
        }


def explore(s0, max_seeds=100_000, max_variables=10_000, strict=True, rng_seed=0, registry=None):
    """Breadth-first closure of the seed family of ``s0`` under mutation.

    Every new cluster variable is computed by exact Laurent division. Known
    variables are found through their evaluation fingerprints; with
    ``strict`` the exact quotient is recomputed on every edge and compared
    with the stored polynomial. Matrix agreement is asserted whenever an
    edge lands on an already known cluster.
    """
    if registry is None:
        registry = VariableRegistry(s0.cluster, s0.coefficients, s0.k, s0.n, rng_seed=rng_seed)
    fp = registry.fingerprinter
    fps = {v: registry.fingerprinter.of_poly(registry.value(v)) for v in registry.inverse}
    coeffs = s0.coefficients
    n_rank = s0.rank
    graph = ExchangeGraph(coeffs, s0.k, s0.n)
    stats = {"mutations": 0, "exact_divisions": 0, "not_divisible": 0, "matrix_checks": 0}

    start = SeedRecord(s0.cluster, s0.matrix.entries, 0)
    graph.add(cluster_key(s0.cluster), start)
    for v, val in zip(s0.cluster, s0.values):
        if registry.lookup(val) is None:
            registry.register(val)
            fps[registry.lookup(val)] = fp.of_poly(val)
    queue = deque([cluster_key(s0.cluster)])
    closed = True

    def value(v):
        return registry.value(v)

    while queue:
        key = queue.popleft()
        rec = graph.seeds[key]
        rows = rec.cluster + coeffs
        for pos in range(n_rank):
            if graph.edges[key][pos] is not None:
                continue
            z = rec.cluster[pos]
            plus, minus = {}, {}
            for x, row in zip(rows, rec.entries):
                b = row[pos]
                if b > 0:
                    plus[x] = b
                elif b < 0:
                    minus[x] = -b
            fp_plus = fp.of_monomial(plus, fps)
            fp_minus = fp.of_monomial(minus, fps)
            fz = fps[z]
            new_fp = tuple(
                (a + b) * pow(c, PRIME - 2, PRIME) % PRIME
                for a, b, c in zip(fp_plus, fp_minus, fz)
            )
            stats["mutations"] += 1
            new_id = registry.fingerprints.get(new_fp)
            if new_id is None or strict:
                if new_id is None and len(registry) >= max_variables:
                    closed = False
                    queue.clear()
                    break
                stats["exact_divisions"] += 1
                record_seed = _record_as_seed(rec, coeffs, registry)
                try:
                    poly = exchange_quotient(record_seed, z, value)
                except LaurentViolation:
                    stats["not_divisible"] += 1
                    raise
                if new_id is None:
                    if registry.lookup(poly) is not None:
                        raise LaurentViolation("fingerprint index out of sync with registry")
                    new_id = registry.register(poly, new_fp)
                    fps[new_id] = new_fp
                    if fp.of_poly(poly) != new_fp:
                        raise LaurentViolation("fingerprint mismatch for a new variable")
                elif registry.value(new_id) != poly:
                    raise LaurentViolation(f"fingerprint collision at {new_id}")
            new_entries = mutate_entries(rec.entries, pos)
            new_cluster = rec.cluster[:pos] + (new_id,) + rec.cluster[pos + 1 :]
            if not _principal_skew(new_entries, n_rank):
                raise LaurentViolation("mutation broke skew-symmetry")
            new_key = cluster_key(new_cluster)
            graph.edges[key][pos] = new_key
            known = graph.seeds.get(new_key)
            if known is not None:
                stats["matrix_checks"] += 1
                if SeedRecord(new_cluster, new_entries, 0).label_entries(coeffs) != known.label_entries(coeffs):
                    raise LaurentViolation("two seeds share a cluster but not a matrix")
                back = known.cluster.index(new_id)
                if graph.edges[new_key][back] is None:
                    graph.edges[new_key][back] = key
                continue
            if len(graph) >= max_seeds:
                closed = False
                queue.clear()
                break
            graph.add(new_key, SeedRecord(new_cluster, new_entries, rec.depth + 1))
            graph.edges[new_key][pos] = key
            queue.append(new_key)
    if closed:
        closed = all(x is not None for nbrs in graph.edges.values() for x in nbrs)
    return ExploreResult(graph, registry, closed, stats)


def _record_as_seed(rec, coeffs, registry):
    matrix = ExtMatrix(rec.cluster + coeffs, rec.cluster, rec.entries)
    values = [registry.value(v) for v in rec.cluster]
    return Seed(rec.cluster, values, coeffs, matrix)


def _principal_skew(entries, n):
    return all(entries[i][j] == -entries[j][i] for i in range(n) for j in range(i, n))


def reexpand(graph, registry, start_key):
    """Laurent expansions of every registry variable in the cluster ``start_key``.

    Walks the exchange graph breadth-first from the start seed; each newly
    reached variable is obtained by exact division from the exchange
    relation of the edge that reaches it. The start cluster variables and
    the coefficients are the indeterminates of the result.
    """
    coeffs = graph.coefficients
    rec0 = graph.seeds[start_key]
    exps = {v: LaurentPoly.var(v) for v in rec0.cluster + coeffs}
    seen = {start_key}
    queue = deque([start_key])
    while queue:
        key = queue.popleft()
        rec = graph.seeds[key]
        for pos, nkey in enumerate(graph.edges[key]):
            if nkey is None or nkey in seen:
                continue
            nrec = graph.seeds[nkey]
            new_var = next(v for v in nrec.cluster if v not in rec.cluster)
            if new_var not in exps:
                matrix = ExtMatrix(rec.cluster + coeffs, rec.cluster, rec.entries)
                tmp = Seed(rec.cluster, [exps[v] for v in rec.cluster], coeffs, matrix)
                exps[new_var] = exchange_quotient(tmp, rec.cluster[pos], exps.__getitem__)
            seen.add(nkey)
            queue.append(nkey)
    return exps
