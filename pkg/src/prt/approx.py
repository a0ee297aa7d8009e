"""Leveled finite subtrees of a coding tree: approximations and isomorphism.

An :class:`Approximation` lists the levels of a subtree ``T`` of a host
coding tree.  Level ``j`` is a lex-sorted tuple of words of one common length
``|c^T_j|`` and holds one designated coding node.  The host supplies ray
equality.  An approximation is also a leveled view, so the almost-antichain
construction can run inside it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .errors import NodeAbsent
from .words import meet


@dataclass(frozen=True, eq=False)
class Approximation:
    host: object
    levels: tuple[tuple[str, ...], ...]
    coding_pos: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.levels) != len(self.coding_pos):
            raise ValueError("one coding position per level is required")

    # -- shape ---------------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.levels)

    depth = size

    def length(self, j: int) -> int:
        return len(self.levels[j][0])

    @cached_property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(lv[0]) for lv in self.levels)

    def coding(self, j: int) -> str:
        return self.levels[j][self.coding_pos[j]]

    def coding_index(self, j: int) -> int:
        return self.coding_pos[j]

    @cached_property
    def coding_nodes(self) -> tuple[str, ...]:
        return tuple(self.coding(j) for j in range(self.size))

    def level(self, j: int) -> list[str]:
        if not 0 <= j < self.size:
            raise NodeAbsent(f"level {j} outside depth {self.size}")
        return list(self.levels[j])

    @cached_property
    def _index(self) -> dict[str, tuple[int, int]]:
        return {w: (j, i) for j, lv in enumerate(self.levels) for i, w in enumerate(lv)}

    def contains(self, w: str) -> bool:
        return w in self._index

    def locate(self, w: str) -> tuple[int, int]:
        try:
            return self._index[w]
        except KeyError:
            raise NodeAbsent(f"{w!r} is not a node of the subtree") from None

    def is_coding(self, w: str) -> bool:
        loc = self._index.get(w)
        return loc is not None and self.coding_pos[loc[0]] == loc[1]

    @cached_property
    def _children(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {}
        for j in range(1, self.size):
            n = self.lengths[j - 1]
            lo = 0
            prev = self.levels[j - 1]
            for w in self.levels[j]:
                # both levels are lex sorted, so parents are met in order
                while lo < len(prev) and not w.startswith(prev[lo]):
                    lo += 1
                if lo == len(prev) or len(w) <= n:
                    raise ValueError(f"{w!r} has no parent in the level below")
                out.setdefault(prev[lo], []).append(w)
        return {k: tuple(v) for k, v in out.items()}

    def children(self, w: str) -> tuple[str, ...]:
        self.locate(w)
        return self._children.get(w, ())

    # -- view protocol -------------------------------------------------------

    def successor(self, w: str, digit: str) -> str:
        for t in self.children(w):
            if t[len(w)] == digit:
                return t
        raise NodeAbsent(f"{w!r} has no successor through {digit!r}")

    def least_coding_extension(self, w: str) -> str | None:
        for c in self.coding_nodes:
            if len(c) >= len(w) and c.startswith(w):
                return c
        return None

    def _walk(self, w: str, length: int, coding_digit: str) -> str:
        self.locate(w)
        while len(w) < length:
            w = self.successor(w, coding_digit if self.is_coding(w) else "0")
        if len(w) != length:
            raise NodeAbsent(f"no level of length {length}")
        return w

    def leftmost_extension(self, w: str, length: int) -> str:
        return self._walk(w, length, "0")

    def rightmost_extension(self, w: str, length: int) -> str:
        return self._walk(w, length, "2")

    def same_ray(self, a: str, b: str) -> bool:
        return self.host.same_ray(a, b)

    def theta(self, w: str):
        return self.host.theta(w)

    # -- derived subtrees ----------------------------------------------------

    def truncate(self, n: int) -> Approximation:
        """``r_n`` of this subtree (its first ``n`` levels)."""
        if n > self.size:
            raise NodeAbsent(f"only {self.size} levels")
        return Approximation(self.host, self.levels[:n], self.coding_pos[:n])

    def words(self) -> set[str]:
        return set(self._index)

    def image(self, n: int, k: int) -> str:
        """Node ``k`` (lex position) of level ``n``."""
        return self.levels[n][k]


def r_n(S, n: int) -> Approximation:
    """The ``n``-th approximation: the first ``n`` levels of ``S``."""
    if n > S.size:
        raise NodeAbsent(f"{S.size} levels available, {n} requested")
    return Approximation(S, tuple(tuple(S.level(k)) for k in range(n)), tuple(S.coding_index(k) for k in range(n)))


def level_map(A: Approximation, B: Approximation) -> dict[str, str]:
    """The level and lex order preserving bijection from ``A`` to ``B``."""
    out = {}
    for la, lb in zip(A.levels, B.levels):
        out.update(zip(la, lb))
    return out


def _shape_defect(A: Approximation) -> str:
    """Empty when ``A`` is a well-formed leveled subtree, else the defect."""
    last = -1
    for j, lv in enumerate(A.levels):
        if not lv:
            return f"level {j} empty"
        n = len(lv[0])
        if any(len(w) != n for w in lv):
            return f"level {j} mixes lengths"
        if n <= last:
            return f"level {j} not longer than level {j - 1}"
        last = n
        if any(a >= b for a, b in zip(lv, lv[1:])):
            return f"level {j} not strictly lex sorted"
        if not 0 <= A.coding_pos[j] < len(lv):
            return f"level {j} coding position out of range"
    try:
        A._children
    except ValueError as exc:
        return str(exc)
    lengths = set(A.lengths)
    for lv in A.levels:
        for a, b in zip(lv, lv[1:]):
            m = meet(a, b)
            if len(m) not in lengths or not A.contains(m):
                return f"meet of {a!r} and {b!r} missing"
    return ""


def isomorphism_defect(A: Approximation, B: Approximation) -> str:
    """Empty when the level/lex bijection ``A -> B`` is a coding tree isomorphism."""
    for name, X in (("first", A), ("second", B)):
        bad = _shape_defect(X)
        if bad:
            return f"{name} argument: {bad}"
    if A.size != B.size:
        return f"{A.size} levels against {B.size}"
    for j in range(A.size):
        if len(A.levels[j]) != len(B.levels[j]):
            return f"level {j} sizes differ"
        if A.coding_pos[j] != B.coding_pos[j]:
            return f"level {j} coding positions differ"
    for j in range(1, A.size):
        pa, pb = A.levels[j - 1], B.levels[j - 1]
        na, nb = A.lengths[j - 1], B.lengths[j - 1]
        ia = {w: k for k, w in enumerate(pa)}
        ib = {w: k for k, w in enumerate(pb)}
        for ta, tb in zip(A.levels[j], B.levels[j]):
            if ia[ta[:na]] != ib[tb[:nb]]:
                return f"parents differ at level {j}"
            if ta[na] != tb[nb]:
                return f"passing digit differs above level {j - 1}: {ta!r} vs {tb!r}"
    ca, cb = A.coding_nodes, B.coding_nodes
    try:
        for m, n in combinations(range(A.size), 2):
            if A.same_ray(ca[m], ca[n]) != B.same_ray(cb[m], cb[n]):
                return f"relative rays of coding nodes {m},{n} differ"
    except NodeAbsent as exc:
        return str(exc)
    return ""


def isomorphism_check(A: Approximation, B: Approximation) -> bool:
    return not isomorphism_defect(A, B)


class CompactSubtree:
    """A leveled subtree stored as per-node suffixes and parent links.

    Node ``i`` of level ``j`` is its parent's word followed by
    ``suffix[j][i]``.  Memory is quadratic in the number of levels, where
    tuples of full words would be cubic, so deep online subtrees stay cheap.
    Words are materialized on demand.  Implements the leveled-view protocol.
    """

    def __init__(self, host) -> None:
        self.host = host
        self.suffix: list[tuple[str, ...]] = []
        self.parent: list[tuple[int, ...]] = []
        self.kids: list[list[list[int]]] = []
        self.coding_pos: list[int] = []
        self.lengths: list[int] = []
        self._by_length: dict[int, int] = {}
        self._top: tuple[str, ...] = ()
        # levels are append-only, so a found location never changes
        self._found: dict[str, tuple[int, int]] = {}

    @classmethod
    def from_levels(cls, host, levels, coding_pos) -> CompactSubtree:
        out = cls(host)
        for lv, i in zip(levels, coding_pos):
            out.append_level(lv, i)
        return out

    def append_level(self, words, pos: int) -> None:
        """Add a level of full words; each must extend a node of the top level."""
        words = tuple(words)
        j = len(self.suffix)
        if j == 0:
            parents = tuple(-1 for _ in words)
            n0 = 0
        else:
            n0 = self.lengths[-1]
            where = {w: k for k, w in enumerate(self._top)}
            try:
                parents = tuple(where[w[:n0]] for w in words)
            except KeyError:
                raise ValueError(f"a word of level {j} has no parent in the level below") from None
        n = len(words[0])
        if j and n <= n0:
            raise ValueError(f"level {j} is not longer than level {j - 1}")
        self.suffix.append(tuple(w[n0:] for w in words))
        self.parent.append(parents)
        self.kids.append([[] for _ in words])
        if j:
            for i, p in enumerate(parents):
                self.kids[j - 1][p].append(i)
        self.coding_pos.append(pos)
        self.lengths.append(n)
        self._by_length[n] = j
        self._top = words

    # -- shape ---------------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.suffix)

    depth = size

    def length(self, j: int) -> int:
        return self.lengths[j]

    def word(self, j: int, i: int) -> str:
        parts = []
        while j >= 0:
            parts.append(self.suffix[j][i])
            i = self.parent[j][i]
            j -= 1
        return "".join(reversed(parts))

    def coding(self, j: int) -> str:
        return self.word(j, self.coding_pos[j])

    def coding_index(self, j: int) -> int:
        return self.coding_pos[j]

    @property
    def coding_nodes(self) -> tuple[str, ...]:
        return tuple(self.coding(j) for j in range(self.size))

    def level(self, j: int) -> list[str]:
        if not 0 <= j < self.size:
            raise NodeAbsent(f"level {j} outside depth {self.size}")
        return [self.word(j, i) for i in range(len(self.suffix[j]))]

    def _loc(self, w: str) -> tuple[int, int] | None:
        hit = self._found.get(w)
        if hit is not None:
            return hit
        j = self._by_length.get(len(w))
        if j is None:
            return None
        cand = range(len(self.suffix[0]))
        i = None
        lo = 0
        for k in range(j + 1):
            hi = self.lengths[k]
            piece = w[lo:hi]
            i = next((c for c in cand if self.suffix[k][c] == piece), None)
            if i is None:
                return None
            if k < j:
                cand = self.kids[k][i]
            lo = hi
        self._found[w] = (j, i)
        return j, i

    def locate(self, w: str) -> tuple[int, int]:
        loc = self._loc(w)
        if loc is None:
            raise NodeAbsent(f"{w!r} is not a node of the subtree")
        return loc

    def contains(self, w: str) -> bool:
        return self._loc(w) is not None

    def is_coding(self, w: str) -> bool:
        loc = self._loc(w)
        return loc is not None and self.coding_pos[loc[0]] == loc[1]

    def children(self, w: str) -> tuple[str, ...]:
        j, i = self.locate(w)
        if j + 1 >= self.size:
            return ()
        return tuple(w + self.suffix[j + 1][c] for c in self.kids[j][i])

    # -- view protocol -------------------------------------------------------

    def _child(self, j: int, i: int, digit: str) -> int:
        for c in self.kids[j][i] if j + 1 < self.size else ():
            if self.suffix[j + 1][c][0] == digit:
                return c
        raise NodeAbsent(f"node {i} of level {j} has no successor through {digit!r}")

    def successor(self, w: str, digit: str) -> str:
        j, i = self.locate(w)
        c = self._child(j, i, digit)
        return w + self.suffix[j + 1][c]

    def least_coding_extension(self, w: str) -> str | None:
        j, i = self.locate(w)
        parts = [w]
        while self.coding_pos[j] != i:
            if j + 1 >= self.size:
                return None
            # below the first coding node every node has a single child
            (i,) = self.kids[j][i]
            j += 1
            parts.append(self.suffix[j][i])
        return "".join(parts)

    def _walk(self, w: str, length: int, coding_digit: str) -> str:
        j, i = self.locate(w)
        parts = [w]
        while self.lengths[j] < length:
            i = self._child(j, i, coding_digit if self.coding_pos[j] == i else "0")
            j += 1
            parts.append(self.suffix[j][i])
        if self.lengths[j] != length:
            raise NodeAbsent(f"no level of length {length}")
        return "".join(parts)

    def leftmost_extension(self, w: str, length: int) -> str:
        return self._walk(w, length, "0")

    def rightmost_extension(self, w: str, length: int) -> str:
        return self._walk(w, length, "2")

    def same_ray(self, a: str, b: str) -> bool:
        return self.host.same_ray(a, b)

    def theta(self, w: str):
        return self.host.theta(w)

    # -- conversion ----------------------------------------------------------

    def with_host(self, host) -> CompactSubtree:
        out = CompactSubtree(host)
        out.suffix, out.parent, out.kids = self.suffix, self.parent, self.kids
        out.coding_pos, out.lengths, out._by_length = self.coding_pos, self.lengths, self._by_length
        out._top, out._found = self._top, self._found
        return out

    def materialize(self, n: int | None = None) -> Approximation:
        """The first ``n`` levels (all by default) as an :class:`Approximation`."""
        n = self.size if n is None else n
        if n > self.size:
            raise NodeAbsent(f"only {self.size} levels")
        levels, lv = [], None
        for j in range(n):
            lv = list(self.suffix[0]) if j == 0 else [lv[p] + s for p, s in zip(self.parent[j], self.suffix[j])]
            levels.append(tuple(lv))
        return Approximation(self.host, tuple(levels), tuple(self.coding_pos[:n]))
