"""The coding tree of 1-types, co-generated with its ground-truth pseudotree.

A *slot* is a 1-type over the current finite tree that some future point may
realize.  Over ``T_n`` the slots are:

* ``L(i)``  above ``p_i`` on its ray (while ``p_i`` has no left successor),
* ``R(i)``  a new ray at ``p_i`` (while ``p_i`` has no right successor),
* ``B(i)``  on the edge immediately below ``p_i`` (``i > 0``),
* ``P``     below the root, which no point ever realizes.

There are ``2n + 2`` of them, i.e. ``|S(n+1)| = 2(n+1) + 1``.  Each slot owns
exactly one node per level, obtained by padding the word it was born with by
zeros.  When ``p_n`` realizes slot ``σ``, the node of ``σ`` at level ``n`` is
the coding node ``c_n`` and ``σ`` splits into three children: digit 0 (above
``p_n``), digit 1 (new ray at ``p_n``) and digit 2 (below ``p_n``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import NodeAbsent, NotCodingNode
from .pseudotree import ExtensionSpec, FinitePseudotree, Kind, TreeBuilder, induced
from .pseudotree import Between, GreaterLeft, NewRay
from .scheduler import GenericScheduler
from .words import meet as meet  # re-exported: longest common prefix

UNKNOWN = None  # theta of a node whose ray is not determined within depth
_LOCATE_CACHE = 1 << 14


class Slot:
    __slots__ = ("kind", "target", "word", "birth", "theta", "hit", "children", "serial")

    def __init__(self, kind: str, target: int, word: str, birth: int, theta: int | None, serial: int):
        self.kind = kind
        self.target = target
        self.word = word
        self.birth = birth
        self.theta = theta  # structural ray id; None for an unrealized new ray
        self.hit: int | None = None
        self.children: tuple[Slot, Slot, Slot] | None = None
        self.serial = serial

    def spec(self) -> ExtensionSpec | None:
        if self.kind == "L":
            return GreaterLeft(self.target)
        if self.kind == "R":
            return NewRay(self.target)
        if self.kind == "B":
            return Between(self.target)
        return None

    def node(self, length: int) -> str:
        return self.word + "0" * (length - self.birth)

    def __repr__(self) -> str:
        return f"Slot({self.kind}{self.target}, {self.word!r}@{self.birth}, hit={self.hit})"


class _SlotQueries:
    """Read-only queries shared by the live engine and the frozen coding tree."""

    root: Slot
    coding_words: list[str]
    rays: list[int]
    hit_index: list[int]
    _located: dict[str, Slot]

    @property
    def size(self) -> int:
        return len(self.coding_words)

    # leveled-view interface -------------------------------------------------

    @property
    def depth(self) -> int:
        return self.size

    def length(self, j: int) -> int:
        return j

    def coding(self, n: int) -> str:
        return self.coding_words[n]

    def coding_index(self, n: int) -> int:
        """Lex position of ``c_n`` within its level."""
        return self.hit_index[n]

    def is_coding(self, w: str) -> bool:
        return len(w) < self.size and self.coding_words[len(w)] == w

    def _max_length(self) -> int:
        return self.size - 1

    def locate(self, w: str) -> Slot | None:
        """The slot owning node ``w``, or None when ``w`` is not a node."""
        found = self._located.get(w)
        if found is not None:
            return found
        if len(w) > self._max_length():
            return None
        s = self.root
        while True:
            if s.hit is not None and s.hit < len(w):
                if w.count("0", s.birth, s.hit) != s.hit - s.birth:
                    return None
                s = s.children[int(w[s.hit])]
            else:
                if w.count("0", s.birth) != len(w) - s.birth:
                    return None
                break
        # new coding nodes only appear on the top level, so an existing
        # node keeps its slot; the cache holds positive answers only
        if len(self._located) >= _LOCATE_CACHE:
            self._located.clear()
        self._located[w] = s
        return s

    def contains(self, w: str) -> bool:
        return self.locate(w) is not None

    def _slot(self, w: str) -> Slot:
        s = self.locate(w)
        if s is None:
            raise NodeAbsent(f"{w!r} is not a node")
        return s

    def theta(self, w: str) -> int | None:
        s = self._slot(w)
        if s.hit is not None:
            return self.rays[s.hit]
        return s.theta

    def ray_key(self, w: str) -> tuple[str, int]:
        """A key deciding ray equality even for rays not yet realized.

        An unrealized new-ray slot will receive a fresh ray id when it is
        first realized, distinct from every other ray.
        """
        s = self._slot(w)
        if s.hit is not None:
            return ("r", self.rays[s.hit])
        if s.theta is not None:
            return ("r", s.theta)
        return ("s", s.serial)

    def same_ray(self, a: str, b: str) -> bool:
        return self.ray_key(a) == self.ray_key(b)

    def least_coding_extension(self, w: str) -> str | None:
        """Least coding node extending ``w``; None if none exists within depth."""
        s = self._slot(w)
        return None if s.hit is None else self.coding_words[s.hit]

    def leftmost_extension(self, w: str, length: int) -> str:
        self._slot(w)
        return w + "0" * (length - len(w))

    def rightmost_extension(self, w: str, length: int) -> str:
        """Extend by digit 2 at coding nodes and 0 elsewhere."""
        self._slot(w)
        out = w
        while len(out) < length:
            out += "2" if self.is_coding(out) else "0"
        return out

    def successor(self, w: str, digit: str) -> str:
        t = w + digit
        s = self.locate(w)
        if s is None or len(t) > self._max_length() or digit not in "012" or len(digit) != 1:
            raise NodeAbsent(f"{t!r} is not a node")
        if s.hit == len(w):
            s = s.children[int(digit)]
        elif digit != "0":
            raise NodeAbsent(f"{t!r} is not a node")
        if len(self._located) >= _LOCATE_CACHE:
            self._located.clear()
        self._located[t] = s
        return t

    def level(self, k: int) -> list[str]:
        """``S(k)`` in lex order."""
        if not 0 <= k < self.size:
            raise NodeAbsent(f"level {k} outside depth {self.size}")
        out: list[str] = []

        def walk(s: Slot) -> None:
            if s.hit is not None and s.hit < k:
                for ch in s.children:
                    walk(ch)
            else:
                out.append(s.node(k))

        walk(self.root)
        return out

    def levels(self) -> Iterator[list[str]]:
        for k in range(self.size):
            yield self.level(k)


class SlotEngine(_SlotQueries):
    """Mutable co-generation state: realizes slots one step at a time."""

    def __init__(self) -> None:
        self._serial = 0
        self._located: dict[str, Slot] = {}
        self.root = self._new("L", 0, "", 0, 0)
        self.root.kind = "root"
        self.live: dict[ExtensionSpec, Slot] = {}
        self.lex: list[Slot] = [self.root]
        self.coding_words: list[str] = []
        self.rays: list[int] = []
        self.hit_index: list[int] = []
        self.max_ray = 0
        self._realize(self.root, 0)

    def _new(self, kind: str, target: int, word: str, birth: int, theta: int | None) -> Slot:
        s = Slot(kind, target, word, birth, theta, self._serial)
        self._serial += 1
        return s

    def _max_length(self) -> int:
        # the slots of the next level already exist while generating
        return self.size

    def slot_for(self, spec: ExtensionSpec) -> Slot:
        return self.live[spec]

    def step(self, spec: ExtensionSpec) -> Slot:
        s = self.live.pop(spec)
        self._realize(s, len(self.coding_words))
        return s

    def _realize(self, s: Slot, n: int) -> None:
        if s.kind == "R":
            self.max_ray += 1
            th = self.max_ray
        else:
            th = s.theta
        w = s.node(n)
        s.hit = n
        if s.kind == "B":
            k0 = self._new("B", s.target, w + "0", n + 1, th)
        else:
            k0 = self._new("L", n, w + "0", n + 1, th)
        k1 = self._new("R", n, w + "1", n + 1, None)
        if n:
            k2 = self._new("B", n, w + "2", n + 1, th)
        else:
            k2 = self._new("P", 0, w + "2", n + 1, th)
        s.children = (k0, k1, k2)
        for k in s.children:
            spec = k.spec()
            if spec is not None:
                self.live[spec] = k
        idx = self.lex.index(s)
        self.lex[idx : idx + 1] = [k0, k1, k2]
        self.hit_index.append(idx)
        self.coding_words.append(w)
        self.rays.append(th)


@dataclass(frozen=True, eq=False)
class CodingTree(_SlotQueries):
    """Leveled approximation of the coding tree to a fixed depth.

    Immutable after :func:`generate`; every query is pure.
    """

    root: Slot
    coding_words: list[str]
    rays: list[int]
    hit_index: list[int]
    ground_truth: FinitePseudotree
    seed: int = 0
    policy: str = "demand"
    schedule: tuple[tuple[int, ExtensionSpec, bool], ...] = field(default=(), repr=False)
    _located: dict[str, Slot] = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def N(self) -> int:  # noqa: N802
        return self.size

    def node_count(self) -> int:
        return sum(len(self.level(k)) for k in range(self.size))


def generate(depth: int, sched: GenericScheduler | None = None, *, policy: str = "?") -> CodingTree:
    """Co-generate ``S`` to ``depth`` levels together with ``T_{depth-1}``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    sched = GenericScheduler() if sched is None else sched
    engine = SlotEngine()
    tree = TreeBuilder()
    sched.attach(engine)
    for n in range(1, depth):
        spec = sched.next_extension(tree)
        engine.step(spec)
        tree.apply(spec)
        if tree.ray[n] != engine.rays[n]:
            raise AssertionError(f"ray bookkeeping diverged at step {n}")
        sched.observe(n)
    return CodingTree(
        root=engine.root,
        coding_words=engine.coding_words,
        rays=engine.rays,
        hit_index=engine.hit_index,
        ground_truth=tree.freeze(),
        seed=sched.seed,
        policy=policy,
        schedule=tuple(sched.log),
    )


def theta_node(S: _SlotQueries, s: str) -> int | None:
    return S.theta(s)


def decode_structure(S: CodingTree, nodes: Iterable[str]) -> FinitePseudotree:
    """Restriction of the ground truth to the points coded by ``nodes``.

    Points are reindexed by the length of their coding node; rays are taken
    from the coding nodes' theta values and renamed by first appearance.
    """
    ws = sorted(set(nodes), key=len)
    for w in ws:
        if not S.is_coding(w):
            raise NotCodingNode(f"{w!r} is not a coding node")
    ids = [len(w) for w in ws]
    return induced(S.ground_truth, ids, ray=[S.theta(w) for w in ws])


def frontier_margin(depth: int, bound=lambda s: 6 * s + 4) -> int:
    """Margin ``k`` such that every node at depth ``< depth - k`` is realized within ``depth``.

    A node at depth ``x`` lives in a slot created at step ``x - 1`` or
    earlier, which the scheduler serves by step ``x - 1 + B(x - 1)``.  The
    below-root slot is never realized and is excluded.
    """
    x = 1
    while x < depth and (x - 1) + bound(x - 1) <= depth - 1:
        x += 1
    return depth - x
