"""k-subsets, weak separation, triangulations and the initial seeds of G(k, n)."""

from __future__ import annotations

import itertools
from collections import deque

from .cluster import Seed
from .errors import Ambiguous, CapExceeded, NoExchange, SignConflict
from .ksubset import KSubset, boundary_intervals, cyclic_interval
from .laurent import VarId


def cyclic_between(a, b, x, n):
    """True iff x lies strictly between a and b going clockwise (upwards) from a."""
    return 0 < (x - a) % n < (b - a) % n


def counter_clockwise(a, b, c, n):
    """Orientation of a triangle on vertices numbered clockwise 1..n."""
    return (b - a) % n > (c - a) % n


class Chord:
    """A chord [i j] of the labelled n-gon."""

    __slots__ = ("endpoints", "n")

    def __init__(self, i, j, n):
        if i == j or not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"bad chord [{i} {j}] for n={n}")
        self.endpoints = (min(i, j), max(i, j))
        self.n = n

    def is_boundary(self):
        a, b = self.endpoints
        return b - a == 1 or (a == 1 and b == self.n)

    def as_subset(self):
        return KSubset(self.endpoints, self.n)

    def __eq__(self, other):
        return isinstance(other, Chord) and (self.endpoints, self.n) == (other.endpoints, other.n)

    def __lt__(self, other):
        return self.endpoints < other.endpoints

    def __hash__(self):
        return hash((self.endpoints, self.n))

    def __iter__(self):
        return iter(self.endpoints)

    def __repr__(self):
        return f"[{self.endpoints[0]} {self.endpoints[1]}]"


def chords_cross(a, b):
    """True iff the chords cross in the interior (shared endpoints never cross)."""
    i, j = a.endpoints
    s, t = b.endpoints
    if len({i, j, s, t}) < 4:
        return False
    n = a.n
    return cyclic_between(i, j, s, n) != cyclic_between(i, j, t, n)


def _interleave(A, B, n):
    for a1, a2 in itertools.combinations(A, 2):
        for b1, b2 in itertools.combinations(B, 2):
            if cyclic_between(a1, a2, b1, n) != cyclic_between(a1, a2, b2, n):
                return True
    return False


def weakly_separated(I, J):
    """True iff I - J and J - I do not interleave around the circle."""
    a = I.as_set() - J.as_set()
    b = J.as_set() - I.as_set()
    return not _interleave(sorted(a), sorted(b), I.n)


class GrassmannPermutation:
    """The permutation i -> i + k (mod n) on [1..n]."""

    def __init__(self, k, n):
        self.k = k
        self.n = n
        self.mapping = {i: ((i - 1 + k) % n) + 1 for i in range(1, n + 1)}

    def __call__(self, i):
        return self.mapping[i]


class Triangulation:
    """A set of pairwise non-crossing internal chords of the n-gon."""

    def __init__(self, n, chords, chain=None):
        self.n = n
        self.internal_chords = frozenset(chords)
        self.chain = list(chain) if chain is not None else None
        for a, b in itertools.combinations(self.internal_chords, 2):
            if chords_cross(a, b):
                raise ValueError(f"chords {a} and {b} cross")
        if any(c.is_boundary() for c in self.internal_chords):
            raise ValueError("internal chords only")

    def is_maximal(self):
        return len(self.internal_chords) == self.n - 3

    def all_chords(self):
        """Internal chords plus the n sides."""
        sides = {Chord(i, i % self.n + 1, self.n) for i in range(1, self.n + 1)}
        return set(self.internal_chords) | sides

    def triangles(self):
        edges = {c.endpoints for c in self.all_chords()}
        out = []
        for a, b, c in itertools.combinations(range(1, self.n + 1), 3):
            if (a, b) in edges and (b, c) in edges and (a, c) in edges:
                out.append((a, b, c))
        return out

    def quadrilateral(self, chord):
        """The two apexes (s, t) of the triangles on either side of ``chord``."""
        i, j = chord.endpoints
        apex = [next(x for x in tri if x not in (i, j)) for tri in self.triangles() if i in tri and j in tri]
        if len(apex) != 2:
            raise ValueError(f"{chord} is not an internal chord")
        return tuple(apex)

    def flip(self, chord):
        s, t = self.quadrilateral(chord)
        chords = (self.internal_chords - {chord}) | {Chord(s, t, self.n)}
        return Triangulation(self.n, chords)

    def __eq__(self, other):
        return isinstance(other, Triangulation) and (self.n, self.internal_chords) == (other.n, other.internal_chords)

    def __hash__(self):
        return hash((self.n, self.internal_chords))

    def __repr__(self):
        return f"Triangulation(n={self.n}, {sorted(self.internal_chords)})"


def fan_triangulation(n, apex=1):
    others = [((apex - 1 + t) % n) + 1 for t in range(2, n - 1)]
    return Triangulation(n, [Chord(apex, x, n) for x in others])


def _zigzag_chain(k, n):
    asc = [((n - k + 2 + t - 1) % n) + 1 for t in range(n)]
    desc = [((n - k - t - 1) % n) + 1 for t in range(n)]
    seq = []
    for a, d in zip(asc, desc):
        seq += [a, d]
    return seq, set(asc[: n // 2 + 1]), set(desc[: n // 2 + 1])


def zigzag_triangulation(k, n):
    """The zig-zag triangulation T_{k,n}; ``chain`` lists chords in chain order."""
    if not n >= k + 2 >= 4:
        raise ValueError("need n >= k + 2 >= 4")
    seq, _, _ = _zigzag_chain(k, n)
    chain = [Chord(seq[m], seq[m + 1], n) for m in range(n - 3)]
    return Triangulation(n, chain, chain=[(seq[m], seq[m + 1]) for m in range(n - 3)])


class AknLabels:
    """Interior labels of A_{k,n} on the (k-1) x (n-k-1) grid plus the frozen intervals."""

    def __init__(self, k, n, grid, frozen):
        self.k = k
        self.n = n
        self.grid = grid
        self.frozen = frozen

    def cells(self):
        return sorted(self.grid)

    def interior(self):
        return [self.grid[c] for c in self.cells()]

    def all_labels(self):
        return self.interior() + list(self.frozen)


def _double_interval(u, v, i, k, n):
    return KSubset(set(cyclic_interval(u, i, n)) | set(cyclic_interval(v, k - i, n)), n)


def akn_labels(k, n):
    """Labels of A_{k,n}: cell (i, j) uses chord i+j-1 of the zig-zag chain.

    Odd chords run (ascending end, descending end) and even chords the other
    way; the descending end u starts the length-i interval and the ascending
    end v the length-(k-i) interval.
    """
    chain = zigzag_triangulation(k, n).chain
    grid = {}
    for i in range(1, k):
        for j in range(1, n - k):
            m = i + j - 1
            x, y = chain[m - 1]
            v, u = (x, y) if m % 2 == 1 else (y, x)
            grid[(i, j)] = _double_interval(u, v, i, k, n)
    return AknLabels(k, n, grid, boundary_intervals(k, n))


def akn_closed_form_labels(k, n):
    """Labels from the closed-form chord endpoints, kept only as a cross-check.

    Endpoint p = rho^(2 - ceil(i/2) - ceil(j/2)) (n-k) carries the length-i
    interval and p' = rho^(floor(i/2) + floor(j/2)) (n-k+2) the other one.
    """
    rho = lambda x, m: ((x - 1 + m) % n) + 1
    grid = {}
    for i in range(1, k):
        for j in range(1, n - k):
            p = rho(n - k, 2 - (i + 1) // 2 - (j + 1) // 2)
            q = rho(n - k + 2, i // 2 + j // 2)
            if len(set(cyclic_interval(p, i, n)) | set(cyclic_interval(q, k - i, n))) != k:
                grid[(i, j)] = None
            else:
                grid[(i, j)] = _double_interval(p, q, i, k, n)
    return grid


def compare_closed_form(k, n):
    """Cells where the closed form disagrees with :func:`akn_labels`."""
    chain = akn_labels(k, n).grid
    closed = akn_closed_form_labels(k, n)
    return {c: (chain[c], closed[c]) for c in chain if chain[c] != closed[c]}


# Auxiliary vertex numbers of the A_{3,n} cells used by the published
# mutation sequences (cell (i, j) -> number).
VERTEX_NUMBERS = {
    (3, 6): {(2, 2): 1, (2, 1): 2, (1, 2): 3, (1, 1): 4},
    (3, 7): {(1, 1): 1, (2, 2): 2, (2, 3): 3, (1, 2): 4, (1, 3): 5, (2, 1): 6},
    (3, 8): {(2, 3): 1, (2, 4): 2, (1, 3): 3, (1, 2): 4, (1, 1): 5, (2, 1): 6, (2, 2): 7, (1, 4): 8},
}


def vertex_numbers(k, n):
    """Cell -> auxiliary number; row-major numbering where none is published."""
    if (k, n) in VERTEX_NUMBERS:
        return dict(VERTEX_NUMBERS[(k, n)])
    cells = [(i, j) for i in range(1, k) for j in range(1, n - k)]
    return {c: t + 1 for t, c in enumerate(cells)}


class WSCollection:
    """A collection of k-subsets containing the boundary intervals."""

    def __init__(self, labels, k, n):
        self.k = k
        self.n = n
        self.frozen = frozenset(boundary_intervals(k, n))
        self.labels = frozenset(labels) | self.frozen

    def mutable(self):
        return sorted(self.labels - self.frozen)

    def is_weakly_separated(self):
        return all(weakly_separated(a, b) for a, b in itertools.combinations(self.labels, 2))

    def exchange(self, L):
        ex = unique_exchange(self, L)
        return WSCollection((self.labels - {L}) | {ex.partner}, self.k, self.n)

    def __eq__(self, other):
        return isinstance(other, WSCollection) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"WSCollection(k={self.k}, n={self.n}, size={len(self.labels)})"


class Exchange:
    """Result of a (2,4)-exchange: L = Iij is replaced by partner = Ist."""

    def __init__(self, label, partner, pair_a, pair_b, decomposition):
        self.label = label
        self.partner = partner
        self.pair_a = pair_a  # (Iis, Ijt)
        self.pair_b = pair_b  # (Iit, Ijs)
        self.decomposition = decomposition  # (I, i, j, s, t)

    @property
    def monomials(self):
        return (self.pair_a, self.pair_b)

    def __repr__(self):
        return f"Exchange({self.label.text()} -> {self.partner.text()})"


def unique_exchange(c, L):
    """The unique (2,4)-exchange of label L inside collection c."""
    if L in c.frozen:
        raise ValueError(f"{L.text()} is frozen")
    if L not in c.labels:
        raise ValueError(f"{L.text()} is not in the collection")
    n = c.n
    outside = [x for x in range(1, n + 1) if x not in L]
    rest = c.labels - {L}
    found = []
    for i, j in itertools.combinations(L.members, 2):
        I = L.as_set() - {i, j}
        S = lambda a, b: KSubset(I | {a, b}, n)
        for s, t in itertools.combinations(outside, 2):
            if cyclic_between(i, j, s, n) == cyclic_between(i, j, t, n):
                continue
            corners = [S(i, s), S(j, t), S(i, t), S(j, s)]
            if not all(x in c.labels for x in corners):
                continue
            new = S(s, t)
            if new in c.labels or not all(weakly_separated(new, x) for x in rest):
                continue
            found.append(Exchange(L, new, (S(i, s), S(j, t)), (S(i, t), S(j, s)), (frozenset(I), i, j, s, t)))
    if not found:
        raise NoExchange(L.text())
    if len(found) > 1:
        raise Ambiguous(f"{L.text()}: {[e.partner.text() for e in found]}")
    return found[0]


def _orientation_sign(ex, n):
    """+1 when the pair (Iis, Ijt) gets +1 under the triangle orientation rule."""
    _, i, j, s, _ = ex.decomposition
    return 1 if counter_clockwise(i, s, j, n) else -1


def exchange_matrix(collection, mutable):
    """Extended exchange matrix built from the (2,4)-exchanges.

    Column L holds +sigma on one monomial pair and -sigma on the other. The
    sign of the first label of each connected component follows the
    triangle orientation rule; the rest follow by skew-symmetry.
    """
    n = collection.n
    mutable = list(mutable)
    frozen = sorted(collection.frozen, key=lambda K: boundary_intervals(collection.k, n).index(K))
    exchanges = {L: unique_exchange(collection, L) for L in mutable}

    def column(L, sign):
        ex = exchanges[L]
        col = {}
        for r in ex.pair_a:
            col[r] = col.get(r, 0) + sign
        for r in ex.pair_b:
            col[r] = col.get(r, 0) - sign
        if sum(1 for v in col.values() if v) != 4:
            raise SignConflict(f"column {L.text()} does not have four nonzero entries")
        return col

    sign = {}
    for root in mutable:
        if root in sign:
            continue
        sign[root] = _orientation_sign(exchanges[root], n)
        queue = deque([root])
        while queue:
            L = queue.popleft()
            col_L = column(L, sign[L])
            for M in mutable:
                if M == L or not col_L.get(M):
                    continue
                need = -col_L[M]
                s = 1 if column(M, 1).get(L, 0) == need else -1
                if column(M, s).get(L, 0) != need:
                    raise SignConflict(f"{L.text()} / {M.text()}")
                if M in sign:
                    if sign[M] != s:
                        raise SignConflict(f"{M.text()} reached with both signs")
                else:
                    sign[M] = s
                    queue.append(M)
    rows = mutable + frozen
    entries = [[column(L, sign[L]).get(r, 0) for L in mutable] for r in rows]
    agree = all(sign[L] == _orientation_sign(exchanges[L], n) for L in mutable)
    return rows, entries, exchanges, agree


def build_initial_seed(k, n):
    """The seed of A_{k,n}: cluster ordered by auxiliary vertex number."""
    labels = akn_labels(k, n)
    numbers = vertex_numbers(k, n)
    cells = sorted(labels.grid, key=lambda c: numbers[c])
    mutable = [labels.grid[c] for c in cells]
    collection = WSCollection(labels.all_labels(), k, n)
    rows, entries, _, _ = exchange_matrix(collection, mutable)
    ids = [VarId.pluecker(K) for K in rows]
    return Seed.initial(
        ids[: len(mutable)], ids[len(mutable) :], entries, [numbers[c] for c in cells], k, n
    )


def initial_cells(k, n):
    """Grid cells of A_{k,n} in the cluster order used by :func:`build_initial_seed`."""
    numbers = vertex_numbers(k, n)
    return sorted(numbers, key=numbers.get)


def triangulation_seed(t):
    """Seed (x(T), c, B(T)) of a triangulation of the n-gon."""
    n = t.n
    internal = sorted(t.internal_chords)
    sides = [Chord(i, i % n + 1, n) for i in range(1, n + 1)]
    rows = internal + sides
    index = {c: r for r, c in enumerate(rows)}
    entries = [[0] * len(internal) for _ in rows]
    for col, chord in enumerate(internal):
        i, k = chord.endpoints
        for a, b in ((i, k), (k, i)):
            for tri in t.triangles():
                if a in tri and b in tri:
                    j = next(x for x in tri if x not in (a, b))
                    entries[index[Chord(a, j, n)]][col] = 1 if counter_clockwise(a, j, b, n) else -1
    ids = [VarId.pluecker(c.as_subset()) for c in rows]
    return Seed.initial(ids[: len(internal)], ids[len(internal) :], entries, None, 2, n)


def all_triangulations(n):
    """Every triangulation of the n-gon, by breadth-first search over flips."""
    start = fan_triangulation(n)
    seen = {start}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        for c in t.internal_chords:
            u = t.flip(c)
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


def random_triangulation(n, rng, steps=50):
    t = fan_triangulation(n)
    for _ in range(steps):
        t = t.flip(rng.choice(sorted(t.internal_chords)))
    return t


def exchange_graph_of_collections(start):
    """Collections reachable from ``start`` by (2,4)-exchanges, with adjacency."""
    adjacency = {}
    queue = deque([start])
    adjacency[start] = set()
    while queue:
        c = queue.popleft()
        for L in c.mutable():
            d = c.exchange(L)
            adjacency[c].add(d)
            if d not in adjacency:
                adjacency[d] = set()
                queue.append(d)
    return adjacency


def enumerate_maximal_ws(k, n, cap=12):
    """All maximal weakly separated collections containing the boundary intervals."""
    if k * (n - k) > cap:
        raise CapExceeded(f"k(n-k) = {k * (n - k)} exceeds the cap {cap}")
    import networkx as nx

    frozen = set(boundary_intervals(k, n))
    candidates = [KSubset(c, n) for c in itertools.combinations(range(1, n + 1), k)]
    candidates = [K for K in candidates if K not in frozen]
    g = nx.Graph()
    g.add_nodes_from(candidates)
    for a, b in itertools.combinations(candidates, 2):
        if weakly_separated(a, b):
            g.add_edge(a, b)
    return [WSCollection(clique, k, n) for clique in nx.find_cliques(g)]


def double_reduced_word(k):
    """The words R, R' (i -> k-i, reversed) and W = R'R for the longest element of S_k."""
    if k < 2:
        raise ValueError("k must be at least 2")
    length = k * (k - 1) // 2
    turns = [1, k - 1]
    lo, hi = 1, k - 1
    while len(turns) < 2 * k:
        turns += [lo, hi - 1]
        lo, hi = lo + 1, hi - 1
    word = [1]
    for target in turns[1:]:
        step = 1 if target > word[-1] else -1
        while word[-1] != target and len(word) < length:
            word.append(word[-1] + step)
        if len(word) >= length:
            break
    R = word[:length]
    Rp = [k - x for x in reversed(R)]
    for w in (R, Rp):
        if not is_reduced_longest(w, k):
            raise AssertionError(f"{w} is not a reduced word for w0")
    return {"R": R, "Rprime": Rp, "W": Rp + R}


def is_reduced_longest(word, k):
    """True iff ``word`` has length k(k-1)/2 and multiplies out to w0."""
    perm = list(range(1, k + 1))
    for s in word:
        perm[s - 1], perm[s] = perm[s], perm[s - 1]
    return len(word) == k * (k - 1) // 2 and perm == list(range(k, 0, -1))
