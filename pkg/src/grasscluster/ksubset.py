"""k-element subsets of [1..n], the index type of Plücker coordinates."""

from __future__ import annotations

from functools import total_ordering


@total_ordering
class KSubset:
    """A sorted k-subset of ``{1, ..., n}``.

    Instances are immutable and hashable. Ordering is by size first and
    then lexicographic on the members, which is the variable order used
    everywhere else in the package.
    """

    __slots__ = ("n", "members", "_hash")

    def __init__(self, members, n):
        members = tuple(sorted(int(m) for m in members))
        if not 1 <= n <= 64:
            raise ValueError(f"n must lie in [1, 64], got {n}")
        if len(set(members)) != len(members):
            raise ValueError(f"repeated index in {members}")
        if members and (members[0] < 1 or members[-1] > n):
            raise ValueError(f"indices {members} outside [1, {n}]")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "_hash", hash((members, n)))

    def __setattr__(self, name, value):
        raise AttributeError("KSubset is immutable")

    @property
    def k(self):
        return len(self.members)

    def key(self):
        return (len(self.members), self.members, self.n)

    def __eq__(self, other):
        return (
            isinstance(other, KSubset)
            and self.members == other.members
            and self.n == other.n
        )

    def __lt__(self, other):
        return self.key() < other.key()

    def __hash__(self):
        return self._hash

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, i):
        return i in self.members

    def as_set(self):
        return frozenset(self.members)

    def text(self):
        """Text form ``[i1,i2,...]``."""
        return "[" + ",".join(str(m) for m in self.members) + "]"

    @classmethod
    def parse(cls, text, n):
        body = text.strip().strip("[]")
        members = [int(t) for t in body.split(",") if t.strip()]
        return cls(members, n)

    def short(self):
        """Compact digit string such as ``136`` (only unambiguous for n < 10)."""
        return "".join(str(m) for m in self.members)

    def __repr__(self):
        return f"KSubset({self.text()}, n={self.n})"


def cyclic_interval(start, length, n):
    """The cyclic interval ``[start .. start+length-1]`` with values in 1..n."""
    return [((start - 1 + t) % n) + 1 for t in range(length)]


def boundary_intervals(k, n):
    """The n frozen labels ``[i .. i+k-1]``, ordered by starting point."""
    return [KSubset(cyclic_interval(s, k, n), n) for s in range(1, n + 1)]


def sorted_sign(indices):
    """Sign of the permutation sorting ``indices`` (0 if an index repeats)."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign
