"""Quiver type recognition, root systems, tau involutions and table checks."""

from __future__ import annotations

import itertools
import random
from collections import deque
from fractions import Fraction
from importlib import resources

import networkx as nx

from .cluster import cluster_key, mutate_entries, reexpand, run_mutation_sequence
from .errors import NotHomogeneous
from .ksubset import KSubset
from .laurent import LaurentPoly, VarId, lp_denominator_vector
from .verify import delta, evaluate_poly, random_config, special_function

EXPONENTS = {
    "E6": (1, 4, 5, 7, 8, 11),
    "E7": (1, 5, 7, 9, 11, 13, 17),
    "E8": (1, 7, 11, 13, 17, 19, 23, 29),
}


def exponents(family, rank):
    if family == "A":
        return tuple(range(1, rank + 1))
    if family == "D":
        return tuple(sorted(list(range(1, 2 * rank - 2, 2)) + [rank - 1]))
    return EXPONENTS[f"E{rank}"]


def coxeter_number(family, rank):
    return {"A": rank + 1, "D": 2 * rank - 2}.get(family) or {6: 12, 7: 18, 8: 30}[rank]


def seed_count_formula(family, rank):
    """Number of seeds of a finite type cluster algebra, prod (e+h+1)/(e+1)."""
    h = coxeter_number(family, rank)
    total = Fraction(1)
    for e in exponents(family, rank):
        total *= Fraction(e + h + 1, e + 1)
    assert total.denominator == 1
    return int(total)


class Quiver:
    """Principal quiver of a seed: arrow x -> y with weight b_xy^2 when b_xy > 0."""

    def __init__(self, vertices, b):
        self.vertices = list(vertices)
        self.b = [list(row) for row in b]
        self.arrows = {
            (self.vertices[i], self.vertices[j]): b[i][j] ** 2
            for i in range(len(b))
            for j in range(len(b))
            if b[i][j] > 0
        }

    @classmethod
    def from_seed(cls, seed):
        labels = list(seed.vertex_numbers) if seed.vertex_numbers else list(range(1, seed.rank + 1))
        return cls(labels, seed.matrix.principal())

    def underlying_graph(self):
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.arrows)
        return g

    def reversed(self):
        return Quiver(self.vertices, [[-x for x in row] for row in self.b])

    def is_bipartite_orientation(self):
        """Every vertex is a sink or a source."""
        out = {v: 0 for v in self.vertices}
        inn = {v: 0 for v in self.vertices}
        for x, y in self.arrows:
            out[x] += 1
            inn[y] += 1
        return all(out[v] == 0 or inn[v] == 0 for v in self.vertices)


class CartanSpec:
    """A simply-laced Dynkin type matched to concrete quiver vertices."""

    def __init__(self, family, rank, labels, cartan, bourbaki, epsilon):
        self.family = family
        self.rank = rank
        self.labels = labels  # simple root i (0-based) sits at vertex labels[i]
        self.cartan = cartan
        self.bourbaki = bourbaki  # vertex label -> standard node number
        self.epsilon = epsilon  # vertex label -> +1 (sink) / -1 (source), or None

    @property
    def name(self):
        return f"{self.family}{self.rank}"

    @property
    def exponents(self):
        return exponents(self.family, self.rank)

    @property
    def coxeter_number(self):
        return coxeter_number(self.family, self.rank)

    def __repr__(self):
        return f"CartanSpec({self.name})"


def _arms(tree, center):
    arms = []
    for nb in sorted(tree[center]):
        arm, prev, cur = [nb], center, nb
        while True:
            nxt = [x for x in tree[cur] if x != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            arm.append(cur)
        arms.append(arm)
    return sorted(arms, key=len)


def recognize_dynkin(q):
    """Dynkin type of the underlying graph of ``q`` (A, D, E), or ``None``."""
    if any(w != 1 for w in q.arrows.values()):
        return None
    g = q.underlying_graph()
    n = g.number_of_nodes()
    if n == 0 or not nx.is_tree(g):
        return None
    degrees = dict(g.degree())
    branch = [v for v, d in degrees.items() if d >= 3]
    if any(d > 3 for d in degrees.values()) or len(branch) > 1:
        return None
    if not branch:
        ends = sorted(v for v, d in degrees.items() if d <= 1)
        order = [ends[0]] + (_arms(g, ends[0])[0] if n > 1 else [])
        family, bourbaki = "A", {v: i + 1 for i, v in enumerate(order)}
    else:
        c = branch[0]
        arms = _arms(g, c)
        lengths = [len(a) for a in arms]
        if lengths[:2] == [1, 1]:
            family = "D"
            long = list(reversed(arms[2]))
            order = long + [c] + arms[0] + arms[1]
            bourbaki = {v: i + 1 for i, v in enumerate(order)}
        elif lengths[0] == 1 and lengths[1] == 2 and lengths[2] in (2, 3, 4):
            family = "E"
            bourbaki = {arms[1][1]: 1, arms[0][0]: 2, arms[1][0]: 3, c: 4}
            for t, v in enumerate(arms[2]):
                bourbaki[v] = 5 + t
        else:
            return None
    labels = sorted(q.vertices)
    index = {v: i for i, v in enumerate(labels)}
    cartan = [[0] * n for _ in range(n)]
    for v in labels:
        cartan[index[v]][index[v]] = 2
    for x, y in g.edges():
        cartan[index[x]][index[y]] = cartan[index[y]][index[x]] = -1
    epsilon = None
    if q.is_bipartite_orientation():
        sources = {x for x, _ in q.arrows}
        epsilon = {v: (-1 if v in sources else 1) for v in labels}
    return CartanSpec(family, n, labels, cartan, bourbaki, epsilon)


def almost_positive_roots(spec):
    """Positive roots (closure of the simples) followed by the negative simples."""
    n = spec.rank
    a = spec.cartan
    simples = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    positive = set(simples)
    frontier = list(simples)
    while frontier:
        new = []
        for beta in frontier:
            for i in range(n):
                pairing = sum(beta[j] * a[j][i] for j in range(n))
                if pairing == -1:
                    gamma = tuple(beta[j] + (1 if j == i else 0) for j in range(n))
                    if gamma not in positive:
                        positive.add(gamma)
                        new.append(gamma)
        frontier = new
    ordered = sorted(positive, key=lambda r: (sum(r), r))
    return ordered + [tuple(-x for x in s) for s in simples]


def tau(sign, alpha, spec):
    """The piecewise-linear involution tau_+ (sign=+1) or tau_- (sign=-1)."""
    n = spec.rank
    out = list(alpha)
    for i in range(n):
        if spec.epsilon[spec.labels[i]] != sign:
            continue
        out[i] = -alpha[i] - sum(
            spec.cartan[i][j] * max(alpha[j], 0) for j in range(n) if j != i
        )
    return tuple(out)


def tau_orbits(spec):
    """Orbits of the group generated by tau_+ and tau_- on almost positive roots."""
    roots = almost_positive_roots(spec)
    left = set(roots)
    orbits = []
    for r in roots:
        if r not in left:
            continue
        orbit, queue = {r}, deque([r])
        while queue:
            x = queue.popleft()
            for s in (1, -1):
                y = tau(s, x, spec)
                if y not in orbit:
                    orbit.add(y)
                    queue.append(y)
        left -= orbit
        orbits.append(orbit)
    return orbits


# Affine certificates


def _affine_patterns(max_size):
    pats = []
    for m in range(4, max_size):
        g = nx.path_graph(m - 3)  # D~m has m+1 vertices
        g.add_edges_from([(0, "a"), (0, "b"), (m - 4, "c"), (m - 4, "d")])
        pats.append((f"D~{m}", g))
    arms = {"E~6": (2, 2, 2), "E~7": (1, 3, 3), "E~8": (1, 2, 5)}
    for name, lengths in arms.items():
        g = nx.Graph()
        g.add_node("c")
        for a, length in enumerate(lengths):
            prev = "c"
            for t in range(length):
                g.add_edge(prev, (a, t))
                prev = (a, t)
        if g.number_of_nodes() <= max_size:
            pats.append((name, g))
    return [p for p in pats if p[1].number_of_nodes() <= max_size]


def find_affine_subgraph(b):
    """An induced acyclic affine Dynkin subquiver of principal matrix ``b``."""
    n = len(b)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(b[i][j]) >= 2:
                return ("A~1", [i, j])
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((i, j) for i in range(n) for j in range(n) if b[i][j] > 0)
    for name, pat in _affine_patterns(n):
        matcher = nx.algorithms.isomorphism.GraphMatcher(g, pat)
        for mapping in matcher.subgraph_isomorphisms_iter():
            return (name, sorted(mapping))
    for cycle in nx.chordless_cycles(g):
        m = len(cycle)
        forward = sum(1 for t in range(m) if b[cycle[t]][cycle[(t + 1) % m]] > 0)
        if forward not in (0, m):
            return (f"A~{m - 1}", sorted(cycle))
    return None


def _digraph(b):
    g = nx.DiGraph()
    g.add_nodes_from(range(len(b)))
    for i, row in enumerate(b):
        for j, x in enumerate(row):
            if x > 0:
                g.add_edge(i, j, w=x)
    return g


class MutationClass:
    """Principal matrices deduplicated up to simultaneous permutation."""

    def __init__(self):
        self.buckets = {}

    def add(self, b):
        g = _digraph(b)
        h = nx.weisfeiler_lehman_graph_hash(g, edge_attr="w")
        bucket = self.buckets.setdefault(h, [])
        match = lambda e1, e2: e1["w"] == e2["w"]
        for other in bucket:
            if nx.is_isomorphic(g, other, edge_match=match):
                return False
        bucket.append(g)
        return True

    def __len__(self):
        return sum(len(b) for b in self.buckets.values())


def find_affine_certificate(s0, depth_cap=12, max_quivers=200_000):
    """Breadth-first search over the mutation class for an affine witness.

    Returns ``{"path", "vertices", "type", "depth"}`` where ``path`` lists the
    0-based mutation positions from ``s0`` and ``vertices`` the cluster
    positions of the induced subquiver; ``None`` when none exists up to
    ``depth_cap``.
    """
    b0 = tuple(tuple(row) for row in s0.matrix.principal())
    seen = MutationClass()
    seen.add(b0)
    queue = deque([(b0, [])])
    while queue:
        b, path = queue.popleft()
        found = find_affine_subgraph(b)
        if found:
            return {"path": path, "vertices": found[1], "type": found[0], "depth": len(path)}
        if len(path) >= depth_cap or len(seen) >= max_quivers:
            continue
        for z in range(len(b)):
            nb = mutate_entries(b, z)
            if seen.add(nb):
                queue.append((nb, path + [z]))
    return None


def classify_seed(s0, depth_cap=12, max_quivers=200_000):
    """Finite or infinite type of the mutation class of ``s0``, with a certificate.

    For the A_{3,n} seeds with a published Dynkin sequence that sequence is
    replayed. Otherwise the mutation class is searched breadth-first until a
    quiver on a Dynkin diagram (finite type) or an induced affine subquiver
    (infinite type) appears. The result has ``finite`` set to ``None`` when
    neither shows up within the caps.
    """
    labels = list(s0.vertex_numbers) if s0.vertex_numbers else list(range(1, s0.rank + 1))
    seq = DYNKIN_SEQUENCES.get((s0.k, s0.n))
    if seq is not None:
        spec = recognize_dynkin(Quiver.from_seed(run_mutation_sequence(s0, seq)))
        if spec is not None:
            return {"finite": True, "type": spec.name, "path": list(seq), "certificate": None}
    b0 = tuple(tuple(row) for row in s0.matrix.principal())
    seen = MutationClass()
    seen.add(b0)
    queue = deque([(b0, [])])
    while queue:
        b, path = queue.popleft()
        numbers = [labels[z] for z in path]
        spec = recognize_dynkin(Quiver(labels, b))
        if spec is not None:
            return {"finite": True, "type": spec.name, "path": numbers, "certificate": None}
        found = find_affine_subgraph(b)
        if found:
            witness = {"type": found[0], "path": numbers, "vertices": [labels[v] for v in found[1]]}
            return {"finite": False, "type": None, "path": numbers, "certificate": witness}
        if len(path) >= depth_cap or len(seen) >= max_quivers:
            continue
        for z in range(len(b)):
            nb = mutate_entries(b, z)
            if seen.add(nb):
                queue.append((nb, path + [z]))
    return {"finite": None, "type": None, "path": None, "certificate": None}


# Naming of non-Plücker variables and the correspondence tables


def dihedral_maps(n):
    """All 2n symmetries of the n-gon as dicts on 1..n (rotations first)."""
    maps = []
    for m in range(n):
        maps.append({i: ((i - 1 + m) % n) + 1 for i in range(1, n + 1)})
    for m in range(n):
        maps.append({i: ((m - i) % n) + 1 for i in range(1, n + 1)})
    return maps


def sigma(i, n):
    """The reflection used for the translates B^{sigma rho^m}: i -> 2 - i (mod n)."""
    return ((2 - i - 1) % n) + 1


def translate_indices(name, n=8):
    """Index list realising a table name as a special-function call.

    ``A^r3`` is A on (1+3, ..., 8+3); ``B^sr5`` is B on sigma(i+5).
    """
    base, _, sup = name.partition("^")
    m = 0
    reflect = False
    if sup:
        reflect = sup.startswith("s")
        rest = sup[1:] if reflect else sup
        m = int(rest[1:]) if rest.startswith("r") else 0
    out = []
    for i in range(1, n + 1):
        j = ((i - 1 + m) % n) + 1
        out.append(sigma(j, n) if reflect else j)
    return base, out


def name_function(name, n):
    """Polynomial in Plücker ids for a table name such as D145, X123456, B^sr5."""
    if name.startswith("D"):
        return LaurentPoly.var(VarId.pluecker(KSubset([int(c) for c in name[1:]], n)))
    if name[0] in "XY":
        return special_function(name[0], [int(c) for c in name[1:]], n)
    base, idx = translate_indices(name, n)
    return special_function(base, idx, n)


def toral_weight_of_poly(p, n):
    weights = set()
    for mono, _ in p.monomials():
        w = [0] * n
        for v, e in mono.items():
            if not v.is_pluecker:
                raise NotHomogeneous(f"non-Plücker variable {v}")
            for i in v.payload.members:
                w[i - 1] += e
        weights.add(tuple(w))
    if len(weights) != 1:
        raise NotHomogeneous(f"{len(weights)} distinct weights")
    return weights.pop()


def toral_weight(v, registry):
    return toral_weight_of_poly(registry.value(v), registry.n)


class _Sampler:
    """Exact values at a few random points, cached per polynomial."""

    def __init__(self, k, n, points=3, rng_seed=11):
        rng = random.Random(rng_seed)
        self.points = [random_config(k, n, rng, nonzero=[KSubset(c, n) for c in itertools.combinations(range(1, n + 1), k)]) for _ in range(points)]

    def values(self, p):
        return tuple(evaluate_poly(p, m) for m in self.points)


def match_up_to_sign(a, b):
    return a == b or a == tuple(-x for x in b)


def name_variables(registry, k, n):
    """Human-readable names of all registry variables (None if unnamed)."""
    sampler = _Sampler(k, n)
    candidates = []
    if k == 3 and n >= 6:
        for s in itertools.combinations(range(1, n + 1), 6):
            for f in "XY":
                candidates.append((f + "".join(map(str, s)), special_function(f, s, n)))
    if (k, n) == (3, 8):
        for base in "AB":
            for m in range(8):
                for sup in ([f"r{m}"] if m else [""]) + [f"sr{m}" if m else "s"]:
                    nm = base + ("^" + sup if sup else "")
                    candidates.append((nm.replace("^r0", ""), name_function(nm, n)))
    cand_values = [(nm, sampler.values(p)) for nm, p in candidates]
    names = {}
    for v in registry.mutable:
        if v.is_pluecker:
            names[v] = "D" + "".join(map(str, v.payload.members)) if n < 10 else v.text()
            continue
        vals = sampler.values(registry.value(v))
        names[v] = next((nm for nm, cv in cand_values if match_up_to_sign(vals, cv)), None)
    return names


def load_table(case):
    """Rows ``(root tuple, name)`` of a shipped correspondence table."""
    text = resources.files("grasscluster").joinpath("data").joinpath(f"{case}.txt").read_text()
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        lhs, name = line.split("|")
        rows.append((tuple(int(x) for x in lhs.split()), name.strip()))
    return rows


DYNKIN_SEQUENCES = {
    (3, 6): [4, 2, 4, 1],
    (3, 7): [2, 4, 3, 5, 6, 5, 1],
    (3, 8): [1, 3, 7, 6, 5, 2, 4, 3, 8, 7, 6, 8],
}

TABLE_CASE = {(3, 6): "d4", (3, 7): "e6", (3, 8): "e8"}


def dynkin_seed(s0, registry=None):
    """Replay the published mutation sequence from the A_{3,n} seed."""
    return run_mutation_sequence(s0, DYNKIN_SEQUENCES[(s0.k, s0.n)], registry)


def denominator_vectors(exploration, dseed):
    """Denominator vector (in vertex-number order) of every cluster variable."""
    reg = exploration.variables
    key = cluster_key(dseed.cluster)
    expansions = reexpand(exploration.graph, reg, key)
    order = sorted(range(dseed.rank), key=lambda p: dseed.vertex_numbers[p])
    cluster = [dseed.cluster[p] for p in order]
    return {v: lp_denominator_vector(expansions[v], cluster) for v in reg.mutable}, expansions


def correspondence_check(exploration, dseed, table=None):
    """Compare computed denominator vectors with a correspondence table.

    The table may be drawn in a different dihedral frame of the n-gon; all
    2n frames are tried and the one matching the most Plücker/X/Y rows is
    reported. Rows naming A/B translates are compared by toral weight (the
    asserted check) and, for information, as functions up to sign.
    """
    reg = exploration.variables
    k, n = reg.k, reg.n
    case = TABLE_CASE[(k, n)]
    table = table if table is not None else load_table(case)
    spec = recognize_dynkin(Quiver.from_seed(dseed))
    roots = almost_positive_roots(spec)
    denoms, _ = denominator_vectors(exploration, dseed)
    by_root = {}
    for v, d in denoms.items():
        by_root.setdefault(d, []).append(v)
    bijective = sorted(by_root) == sorted(roots) and all(len(x) == 1 for x in by_root.values())
    anchors = all(
        denoms[dseed.cluster[p]] == tuple(-1 if i + 1 == dseed.vertex_numbers[p] else 0 for i in range(dseed.rank))
        for p in range(dseed.rank)
    )

    sampler = _Sampler(k, n)
    ours = {root: sampler.values(reg.value(vs[0])) for root, vs in by_root.items()}
    exact_rows = [(r, nm) for r, nm in table if nm[0] in "DXY"]
    orbit_rows = [(r, nm) for r, nm in table if nm[0] in "AB"]

    def frame_result(g):
        inv = {g[i]: i for i in g}
        bad = []
        for r, nm in exact_rows:
            mapped = _relabel(nm, inv, n)
            if r not in ours or not match_up_to_sign(ours[r], sampler.values(mapped)):
                bad.append(nm)
        return bad

    best = None
    for t, g in enumerate(dihedral_maps(n)):
        bad = frame_result(g)
        if best is None or len(bad) < len(best[1]):
            best = (t, bad, g)
        if not bad:
            break
    frame_index, exact_bad, frame = best

    weight_bad, function_bad = [], []
    for r, nm in orbit_rows:
        p = name_function(nm, n)
        v = by_root.get(r, [None])[0]
        if v is None:
            weight_bad.append(nm)
            continue
        if toral_weight(v, reg) != toral_weight_of_poly(p, n):
            weight_bad.append(nm)
        if not match_up_to_sign(ours[r], sampler.values(p)):
            function_bad.append(nm)
    errata = _errata(table, exact_bad + weight_bad, roots, by_root, ours, sampler, frame, n)
    corrected = bool(errata) and all(e["defect"] and e["computed_root"] for e in errata)
    return {
        "check": "correspondence",
        "case": case,
        "type": spec.name,
        "roots": len(roots),
        "variables": len(denoms),
        "bijective": bijective,
        "anchors": anchors,
        "frame": {"index": frame_index, "map": {str(i): frame[i] for i in sorted(frame)}},
        "exact_rows": len(exact_rows),
        "exact_mismatches": exact_bad,
        "orbit_rows": len(orbit_rows),
        "orbit_weight_mismatches": weight_bad,
        "orbit_function_mismatches": function_bad,
        "errata": errata,
        "passed_as_printed": bijective and anchors and not exact_bad and not weight_bad,
        "passed": bijective and anchors and (not (exact_bad or weight_bad) or corrected),
    }


def _errata(table, bad_names, roots, by_root, ours, sampler, frame, n):
    """Classify mismatched rows whose printed root cannot be right.

    A printed root is defective when it is not a positive root or when another
    row of the same table carries it too. For each such row the computed root of
    the named function is located among roots claimed by no other row, so the
    corrected table is again a bijection.
    """
    inv = {frame[i]: i for i in frame}
    printed = {nm: r for r, nm in table}
    claimed = {}
    for r, nm in table:
        claimed.setdefault(r, []).append(nm)
    positive = {r for r in roots if any(c > 0 for c in r)}
    free = set(by_root) - {r for r, nms in claimed.items() if all(x not in bad_names for x in nms)}
    out = []
    for nm in bad_names:
        r = printed[nm]
        if r not in positive:
            defect = "not a positive root"
        elif len(claimed[r]) > 1:
            defect = "root shared with " + ", ".join(x for x in claimed[r] if x != nm)
        else:
            defect = None
        fn = name_function(nm, n) if nm[0] in "AB" else _relabel(nm, inv, n)
        target = sampler.values(fn)
        hits = [x for x in sorted(free) if match_up_to_sign(ours[x], target)]
        out.append({
            "name": nm,
            "printed_root": list(r),
            "defect": defect,
            "computed_root": list(hits[0]) if len(hits) == 1 else None,
        })
    return out


def _relabel(name, inv, n):
    """The table function of ``name`` pulled back along the frame map."""
    if name.startswith("D"):
        return delta([inv[int(c)] for c in name[1:]], n)
    idx = [inv[int(c)] for c in name[1:]]
    return special_function(name[0], idx, n)
