"""Finite rooted two-branching trees: the finite stages ``T_n`` of a generic sequence.

Every point has at most two immediate successors.  The *left* successor
continues the point's ray; the *right* successor starts a new ray.  A tree is
stored as its creation history (one :class:`ExtensionSpec` per point) together
with the ray label of every point; parents, sides and the relation tables are
derived by replaying the history.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import InvalidExtension

LEFT, RIGHT = 0, 1


class Kind(enum.Enum):
    GREATER_LEFT = "left"
    NEW_RAY = "newray"
    BETWEEN = "between"

    @property
    def order(self) -> int:
        return _KIND_ORDER[self]


_KIND_ORDER = {Kind.GREATER_LEFT: 0, Kind.NEW_RAY: 1, Kind.BETWEEN: 2}


@dataclass(frozen=True, order=True)
class ExtensionSpec:
    kind: Kind
    target: int

    def __str__(self) -> str:
        name = {Kind.GREATER_LEFT: "GreaterLeft", Kind.NEW_RAY: "NewRay", Kind.BETWEEN: "Between"}
        return f"{name[self.kind]}({self.target})"


def GreaterLeft(i: int) -> ExtensionSpec:  # noqa: N802 - mirrors the constructor names used in docs
    return ExtensionSpec(Kind.GREATER_LEFT, i)


def NewRay(i: int) -> ExtensionSpec:  # noqa: N802
    return ExtensionSpec(Kind.NEW_RAY, i)


def Between(i: int) -> ExtensionSpec:  # noqa: N802
    return ExtensionSpec(Kind.BETWEEN, i)


class TreeBuilder:
    """Mutable replay state shared by :func:`extend` and the generator."""

    def __init__(self) -> None:
        self.parent: list[int] = [-1]
        self.side: list[int] = [LEFT]
        self.left: list[int] = [-1]
        self.right: list[int] = [-1]
        self.ray: list[int] = [0]
        self.history: list[ExtensionSpec | None] = [None]
        self.max_ray = 0

    @property
    def size(self) -> int:
        return len(self.parent)

    def has_left(self, i: int) -> bool:
        return self.left[i] >= 0

    def has_right(self, i: int) -> bool:
        return self.right[i] >= 0

    def is_valid(self, e: ExtensionSpec) -> bool:
        i = e.target
        if not 0 <= i < self.size:
            return False
        if e.kind is Kind.GREATER_LEFT:
            return self.left[i] < 0
        if e.kind is Kind.NEW_RAY:
            return self.right[i] < 0
        return i != 0

    def apply(self, e: ExtensionSpec, ray: int | None = None) -> int:
        """Add one point; returns its index.  ``ray`` overrides the label rule."""
        if not self.is_valid(e):
            raise InvalidExtension(f"{e} is not valid on a {self.size}-point tree")
        n, i = self.size, e.target
        if e.kind is Kind.GREATER_LEFT:
            self._attach(n, i, LEFT)
            r = self.ray[i]
        elif e.kind is Kind.NEW_RAY:
            self._attach(n, i, RIGHT)
            r = self.max_ray + 1
        else:
            par, sd = self.parent[i], self.side[i]
            self._attach(n, par, sd)
            # p_i now sits on the left (same ray) of the inserted point
            self.parent[i], self.side[i] = n, LEFT
            self.left[n] = i
            r = self.ray[i]
        if ray is not None:
            r = ray
        self.ray.append(r)
        self.max_ray = max(self.max_ray, r)
        self.history.append(e)
        return n

    def _attach(self, n: int, par: int, sd: int) -> None:
        self.parent.append(par)
        self.side.append(sd)
        self.left.append(-1)
        self.right.append(-1)
        if sd == LEFT:
            self.left[par] = n
        else:
            self.right[par] = n

    def freeze(self) -> FinitePseudotree:
        t = FinitePseudotree(tuple(self.history[1:]), tuple(self.ray))
        t.__dict__["_built"] = self
        return t


@dataclass(frozen=True)
class FinitePseudotree:
    """A finite rooted two-branching tree on points ``0..n-1``.

    ``history[k]`` created point ``k+1``.  ``ray`` holds the per-point ray
    label (the restriction of the ray function to the finite tree).
    """

    history: tuple[ExtensionSpec, ...]
    ray: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.ray) != len(self.history) + 1:
            raise ValueError("ray labels must cover every point")

    # -- derived structure -------------------------------------------------

    @cached_property
    def _built(self) -> TreeBuilder:
        b = TreeBuilder()
        for e, r in zip(self.history, self.ray[1:]):
            b.apply(e, ray=r)
        return b

    @property
    def size(self) -> int:
        return len(self.ray)

    @property
    def points(self) -> range:
        return range(self.size)

    @property
    def parent(self) -> list[int]:
        return self._built.parent

    @property
    def side(self) -> list[int]:
        return self._built.side

    def has_left(self, i: int) -> bool:
        return self._built.has_left(i)

    def has_right(self, i: int) -> bool:
        return self._built.has_right(i)

    def is_valid(self, e: ExtensionSpec) -> bool:
        return self._built.is_valid(e)

    @cached_property
    def _paths(self) -> list[tuple[tuple[int, int], ...]]:
        """Root-to-point path of every point as ``(point, side taken above it)`` steps."""
        par, sd = self.parent, self.side
        paths: list[tuple[tuple[int, int], ...]] = [()] * self.size
        order = sorted(self.points, key=self._depth_of)
        for p in order:
            q = par[p]
            paths[p] = () if q < 0 else paths[q] + ((q, sd[p]),)
        return paths

    @cached_property
    def _depths(self) -> list[int]:
        par = self.parent
        d = [-1] * self.size
        for p in self.points:
            stack = []
            q = p
            while q >= 0 and d[q] < 0:
                stack.append(q)
                q = par[q]
            base = -1 if q < 0 else d[q]
            for s in reversed(stack):
                base += 1
                d[s] = base
        return d

    def _depth_of(self, p: int) -> int:
        return self._depths[p]

    def ancestors(self, p: int) -> list[int]:
        """Strict predecessors of ``p`` from the root upwards."""
        return [q for q, _ in self._paths[p]]

    # -- relations ---------------------------------------------------------

    def prec(self, i: int, j: int) -> bool:
        """Strict tree order: ``p_i ≺ p_j``."""
        if i == j:
            return False
        di, dj = self._depths[i], self._depths[j]
        return di < dj and self._paths[j][di][0] == i

    def preceq(self, i: int, j: int) -> bool:
        return i == j or self.prec(i, j)

    def comparable(self, i: int, j: int) -> bool:
        return self.preceq(i, j) or self.preceq(j, i)

    def _split(self, i: int, j: int) -> int:
        """Length of the common part of the root paths of ``i`` and ``j``."""
        a, b = self._paths[i], self._paths[j]
        k = 0
        n = min(len(a), len(b))
        while k < n and a[k] == b[k]:
            k += 1
        return k

    def meet(self, i: int, j: int) -> int:
        if self.preceq(i, j):
            return i
        if self.preceq(j, i):
            return j
        k = self._split(i, j)
        return self._paths[i][k][0]

    def lex(self, i: int, j: int) -> bool:
        """``p_i <lex p_j``; defined (true or false) only for incomparable pairs."""
        if self.comparable(i, j):
            return False
        k = self._split(i, j)
        return self._paths[i][k][1] < self._paths[j][k][1]

    def tables(self) -> dict[str, tuple]:
        pts = self.points
        return {
            "prec": tuple(tuple(self.prec(i, j) for j in pts) for i in pts),
            "meet": tuple(tuple(self.meet(i, j) for j in pts) for i in pts),
            "lex": tuple(tuple(self.lex(i, j) for j in pts) for i in pts),
            "ray": self.ray,
        }

    def prefix(self, n: int) -> FinitePseudotree:
        """The substructure on points ``0..n`` (the stage ``T_n``)."""
        return FinitePseudotree(self.history[:n], self.ray[: n + 1])

    def check_invariants(self) -> list[str]:
        """Full-scan audit of the structural invariants; returns the violations."""
        bad = []
        pts = self.points
        for i in pts:
            if i and not self.prec(0, i):
                bad.append(f"root not below {i}")
            for j in pts:
                m = self.meet(i, j)
                if m != self.meet(j, i) or not (self.preceq(m, i) and self.preceq(m, j)):
                    bad.append(f"meet({i},{j})")
                for k in pts:
                    if self.preceq(k, i) and self.preceq(k, j) and self.prec(m, k):
                        bad.append(f"meet({i},{j}) not maximal")
                if self.comparable(i, j):
                    if self.lex(i, j):
                        bad.append(f"lex on comparable {i},{j}")
                elif self.lex(i, j) == self.lex(j, i):
                    bad.append(f"lex not total on {i},{j}")
        rays = sorted(set(self.ray))
        if self.ray[0] != 0 or rays != list(range(len(rays))):
            bad.append("ray labels not an initial segment")
        return bad


def new_root() -> FinitePseudotree:
    return FinitePseudotree((), (0,))


def extend(t: FinitePseudotree, e: ExtensionSpec) -> FinitePseudotree:
    """One-point extension following the ray-labelling rules."""
    b = TreeBuilder()
    for spec, r in zip(t.history, t.ray[1:]):
        b.apply(spec, ray=r)
    b.apply(e)
    return b.freeze()


def is_substructure_embedding(s: FinitePseudotree, t: FinitePseudotree, f: Sequence[int]) -> bool:
    """True iff ``f`` preserves ≺, ∧ and <lex in both directions."""
    if len(f) != s.size or len(set(f)) != len(f):
        return False
    if any(not 0 <= x < t.size for x in f):
        return False
    for i in s.points:
        for j in s.points:
            if s.prec(i, j) != t.prec(f[i], f[j]):
                return False
            if f[s.meet(i, j)] != t.meet(f[i], f[j]):
                return False
            if s.lex(i, j) != t.lex(f[i], f[j]):
                return False
    return True


def is_chain(t: FinitePseudotree, ids: Sequence[int]) -> bool:
    return all(t.comparable(a, b) for k, a in enumerate(ids) for b in ids[k + 1 :])


def relabel_rays(labels: Sequence[int]) -> tuple[int, ...]:
    """Rename ray labels by order of first appearance."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(r, len(seen)) for r in labels)


def induced(t: FinitePseudotree, ids: Sequence[int], ray: Sequence[int] | None = None) -> FinitePseudotree:
    """The substructure of ``t`` on the points ``ids``, reindexed in the given order.

    The creation history is inferred point by point; this requires every
    initial segment of ``ids`` to be closed under meets in ``t``.
    ``ray`` supplies labels (default: ``t``'s labels), renamed by first appearance.
    """
    from .errors import NotMeetClosed

    ids = list(ids)
    history: list[ExtensionSpec] = []
    for k in range(1, len(ids)):
        prefix = ids[: k + 1]
        new = ids[k]
        for a in prefix:
            for b in prefix:
                if t.meet(a, b) not in prefix:
                    raise NotMeetClosed(f"meet of points {a},{b} missing")
        below = [q for q in prefix if t.prec(q, new)]
        above = [q for q in prefix[:-1] if t.prec(new, q)]
        if above:
            # inserted below the least point above it
            child = min(above, key=lambda q: sum(t.prec(r, q) for r in above))
            if t._paths[child][t._depths[new]][1] != LEFT:
                raise NotMeetClosed(f"point {new} sits below {child} off its ray")
            history.append(Between(prefix.index(child)))
            continue
        if not below:
            raise NotMeetClosed(f"point {new} has no predecessor in the set")
        par = max(below, key=lambda q: sum(t.prec(r, q) for r in below))
        path = t._paths[new]
        sd = path[t._depths[par]][1]
        spec = GreaterLeft(prefix.index(par)) if sd == LEFT else NewRay(prefix.index(par))
        history.append(spec)
    labels = [t.ray[i] for i in ids] if ray is None else list(ray)
    return FinitePseudotree(tuple(history), relabel_rays(labels))
