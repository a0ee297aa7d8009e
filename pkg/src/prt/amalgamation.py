"""Finite-depth amalgamation: subtrees ``T`` of a host ``S`` isomorphic to ``S``.

A subtree is grown level by level.  Level ``k`` of ``T`` starts from the
*stubs*: the immediate successors of level ``k-1`` (digits 0, 1, 2 above
the coding node and digit 0 above the rest).  The stub at the host's coding
position ``i_k`` is extended to a host coding node, which becomes
``c^T_k``.  Every other stub is padded to the same length.  Between levels,
paths take digit 0 at non-coding nodes and digit 0 or 2 at host coding
nodes, never 1.  Such paths keep rays, so ``T`` inherits the shape, coding
positions and relative rays of ``S`` and is isomorphic to it.

Constraints ``U_x`` restrict what ``T`` may contain above ``x``.  They come
in three shapes:

* case 0, a ray tree rooted at ``x`` on the ray of ``x``;
* case 1, a ray tree rooted at a coding node ``c'`` above ``x`` (``x``
  passes digit 1 at its last coding prefix);
* case 2, the full cone of ``S`` above some ``y ⊇ x``.

:func:`amalgamate` searches leftmost first with backtracking.  Whenever a
stub can be extended inside the constraints it is, and otherwise the search
backs up.  :class:`SubtreeDemand` runs the same rule online inside a host
being generated, asking the scheduler to realize the slots it needs.  That
keeps deep subtrees at linear cost.
"""

from __future__ import annotations

import random
import zlib
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Protocol

from .antichain import AntichainDemand
from .approx import Approximation, CompactSubtree, isomorphism_defect, r_n
from .coding_tree import CodingTree, generate
from .errors import ConstraintUnsatisfiable, NodeAbsent
from .scheduler import GenericScheduler

SEARCH_LIMIT = 200_000


class Constraint(Protocol):
    x: str
    case: int

    def contains(self, t: str) -> bool: ...

    def region_ok(self, t: str) -> bool: ...

    def coding_ok(self, c: str) -> bool: ...


@dataclass(frozen=True)
class RayTree:
    """A perfect ray tree: digits 0 and 2 above ``root``.

    At a host coding node on the ray the tree splits with probability ``q``
    (decided by a hash of ``seed`` and the node).  Otherwise it continues
    through one digit chosen by the same hash.  Nodes between ``x`` and
    ``root`` form the stem and count as members.
    """

    host: object
    x: str
    root: str
    seed: int = 0
    q: float = 0.5
    case: int = 0

    def _hash(self, w: str) -> int:
        return zlib.crc32(f"{self.seed}:{w}".encode())

    def splits(self, c: str) -> bool:
        return (self._hash(c) % 1000) < self.q * 1000

    def allowed(self, c: str) -> str:
        """Digits the tree continues through at the coding node ``c`` on the ray."""
        if self.splits(c):
            return "02"
        return "0" if (self._hash(c) >> 12) & 1 else "2"

    def on_ray(self, t: str) -> bool:
        return t.startswith(self.root) and "1" not in t[len(self.root) :]

    def contains(self, t: str) -> bool:
        if not t.startswith(self.x):
            return False
        if self.root.startswith(t):
            return True
        if not self.on_ray(t):
            return False
        # only coding nodes on the way up restrict the digits
        s = self.host.root
        n = len(self.root)
        while s.hit is not None and s.hit < len(t):
            if t.count("0", s.birth, s.hit) != s.hit - s.birth:
                break  # t leaves the host here: no further coding prefixes
            if s.hit >= n and t[s.hit] not in self.allowed(t[: s.hit]):
                return False
            s = s.children[int(t[s.hit])]
        return True

    def region_ok(self, t: str) -> bool:
        if not t.startswith(self.x) or self.root.startswith(t):
            return True
        if not t.startswith(self.root):
            return False
        k = t.find("1", len(self.root))
        return self.contains(t if k < 0 else t[:k])

    def coding_ok(self, c: str) -> bool:
        if not c.startswith(self.x):
            return True
        if not c.startswith(self.root) or not self.region_ok(c):
            return False
        return self.splits(c) if self.on_ray(c) else True


@dataclass(frozen=True)
class Cone:
    """All host nodes comparable with ``y`` above ``x`` (``y ⊇ x``)."""

    host: object
    x: str
    y: str
    case: int = 2

    def contains(self, t: str) -> bool:
        return t.startswith(self.x) and (self.y.startswith(t) or t.startswith(self.y))

    def region_ok(self, t: str) -> bool:
        return self.contains(t) if t.startswith(self.x) else True

    def coding_ok(self, c: str) -> bool:
        return not c.startswith(self.x) or c.startswith(self.y)


# -- shared growth rules ------------------------------------------------------


def stubs(levels, pos) -> list[str]:
    """Immediate successors of the top level, lex sorted (``['']`` when empty)."""
    if not levels:
        return [""]
    top = levels[-1]
    c = top[pos[-1]]
    out: list[str] = []
    for w in top:
        out.extend((w + "0", w + "1", w + "2") if w == c else (w + "0",))
    return out


def allowed_digits(S, w: str, cons: Iterable[Constraint]) -> str:
    """Digits 0/2 a path may take at the host coding node ``w``."""
    return "".join(d for d in "02" if all(u.region_ok(w + d) for u in cons))


def coding_ok(cons, c: str) -> bool:
    return all(u.coding_ok(c) for u in cons)


def pad(S, y: str, length: int, cons) -> str:
    """Leftmost allowed extension of ``y`` to ``length``."""
    s = S.locate(y)
    if s is None:
        raise NodeAbsent(f"{y!r} is not a node")
    return _pad_slot(S, s, y, length, cons)[0]


def _pad_slot(S, s, y: str, length: int, cons):
    """:func:`pad` starting from the slot ``s`` owning ``y``; also returns the final slot."""
    w = y
    # only realized slots (coding nodes) on the way offer a choice
    while s.hit is not None and s.hit < length:
        w = s.node(s.hit)
        ds = allowed_digits(S, w, cons)
        if not ds:
            raise ConstraintUnsatisfiable(f"no allowed digit at {w!r}", blocking=_blocking(cons, w))
        w += ds[0]
        s = s.children[int(ds[0])]
    return (s.node(length) if len(w) < length else w), s


def _blocking(cons, w: str) -> str | None:
    for u in cons:
        if w.startswith(u.x):
            return u.x
    return None


def _level(S, st: list[str], i: int, c: str, cons) -> tuple[str, ...]:
    n = len(c)
    return tuple(c if t == i else pad(S, y, n, cons) for t, y in enumerate(st))


# -- offline search -------------------------------------------------------------


class _Stall(Exception):
    def __init__(self, blocking: str | None):
        self.blocking = blocking


def _candidates(S, w: str, cons, budget: int, count: list[int], open_: list[bool]) -> Iterator[str]:
    """Coding nodes above ``w`` on allowed paths, leftmost first, shorter first on a path.

    Sets ``open_[0]`` when some allowed path runs into the budget.
    """
    if len(w) >= min(budget, S.size):
        open_[0] = True
        return
    c = S.least_coding_extension(w)
    if c is None or len(c) >= budget:
        open_[0] = True
        return
    count[0] += 1
    if count[0] > SEARCH_LIMIT:
        raise ConstraintUnsatisfiable("search limit reached", blocking=_blocking(cons, w))
    if coding_ok(cons, c):
        yield c
    for d in allowed_digits(S, c, cons):
        yield from _candidates(S, c + d, cons, budget, count, open_)


def extend_levels(S, levels, pos, cons, budget: int) -> tuple[tuple, tuple]:
    """Grow a subtree from the given levels as deep as ``budget`` allows.

    The search stops naturally when an allowed path from the designated stub
    runs into the budget before meeting an acceptable coding node.  When
    every allowed path dies out first, the level stalls and the search backs
    up; a stall at the first new level is reported.
    """
    cons = list(cons)
    count = [0]

    def rec(levels: tuple, pos: tuple) -> tuple[tuple, tuple]:
        k = len(levels)
        if k >= S.size:
            return levels, pos
        st = stubs(levels, pos)
        i = S.coding_index(k)
        w = st[i]
        open_ = [False]
        for c in _candidates(S, w, cons, budget, count, open_):
            lv = _level(S, st, i, c, cons)
            try:
                return rec(levels + (lv,), pos + (i,))
            except _Stall:
                continue
        if open_[0]:
            return levels, pos
        raise _Stall(_blocking(cons, w))

    try:
        return rec(tuple(levels), tuple(pos))
    except _Stall as exc:
        raise ConstraintUnsatisfiable(
            f"no extension inside the constraints within budget {budget}", blocking=exc.blocking
        ) from None


def _check_instance(S, d: int, constraints: Mapping[str, Constraint]) -> None:
    if not 0 <= d < S.size:
        raise ValueError(f"d={d} outside host depth {S.size}")
    allowed = {""} if d == 0 else set(S.level(d))
    for x, u in constraints.items():
        if x not in allowed:
            raise ValueError(f"{x!r} is not an immediate successor of the top of r_{d}(S)")
        if u.x != x:
            raise ValueError(f"constraint for {x!r} is rooted at {u.x!r}")
        want = case_digits(S, x)
        if u.case == 0 and want not in ("", "0", "2"):
            raise ValueError(f"case 0 needs {x!r} to pass digit 0 or 2 after its last coding prefix")
        if u.case in (1, 2) and want != "1":
            raise ValueError(f"case {u.case} needs {x!r} to pass digit 1 after its last coding prefix")


def case_digits(S, x: str) -> str:
    """The digit ``x`` passes right after its longest proper coding prefix ('' if none)."""
    for k in range(len(x) - 1, -1, -1):
        if S.is_coding(x[:k]):
            return x[k]
    return ""


def amalgamate(S, d: int, constraints: Mapping[str, Constraint], budget: int) -> Approximation:
    """A depth-``budget`` approximation of some ``T ∈ [d, S]`` obeying the constraints."""
    _check_instance(S, d, constraints)
    base = r_n(S, d)
    levels, pos = extend_levels(S, base.levels, base.coding_pos, constraints.values(), budget)
    return Approximation(S, levels, pos)


def audit(S, d: int, constraints: Mapping[str, Constraint], b: Approximation) -> list[str]:
    """Re-check the amalgamation conclusions by scanning ``b``; returns violations."""
    bad = []
    if b.levels[:d] != r_n(S, d).levels:
        bad.append(f"first {d} levels differ from r_{d}(S)")
    defect = isomorphism_defect(b, r_n(S, b.size))
    if defect:
        bad.append(f"not isomorphic to r_{b.size}(S): {defect}")
    words = b.words()
    for x, u in constraints.items():
        above = [t for t in words if t.startswith(x)]
        if u.case == 0:
            out = [t for t in above if S.same_ray(t, x) and not u.contains(t)]
        elif u.case == 1:
            cx = b.least_coding_extension(x)
            out = [] if cx is None else [t for t in above if S.same_ray(t, cx) and not u.contains(t)]
        else:
            out = [t for t in above if not u.contains(t)]
        if out:
            bad.append(f"case {u.case} at {x!r}: {sorted(out)[0]!r} outside U_x")
    return bad


def a3_check(S, a: Approximation, budget: int) -> bool:
    """Finite A.3(1): ``a`` sits in ``S`` and extends inside ``S`` by one more level."""
    try:
        if not all(S.contains(w) for w in a.words()):
            return False
    except NodeAbsent:
        return False
    if isomorphism_defect(a, r_n(S, a.size)) if a.size <= S.size else "too deep":
        return False
    try:
        levels, _ = extend_levels(S, a.levels, a.coding_pos, (), budget)
    except ConstraintUnsatisfiable:
        return False
    return len(levels) > a.size


def random_constraints(S, d: int, rng: random.Random, budget: int) -> dict[str, Constraint]:
    """A random instance: a nonempty set ``X`` of level-``d`` nodes with one constraint each."""
    cand = [""] if d == 0 else list(S.level(d))
    xs = rng.sample(cand, rng.randint(1, len(cand)))
    out: dict[str, Constraint] = {}
    for x in xs:
        seed = rng.randrange(1 << 30)
        q = rng.choice((0.5, 0.7, 0.9))
        if case_digits(S, x) == "1":
            c = S.least_coding_extension(x)
            if c is not None and len(c) < budget and rng.random() < 0.5:
                out[x] = RayTree(S, x, c, seed, q, case=1)
            else:
                out[x] = Cone(S, x, _random_path(S, x, rng, budget))
        elif rng.random() < 0.8 or d == 0:
            out[x] = RayTree(S, x, x, seed, q, case=0)
    if not out:
        x = xs[0]
        out[x] = Cone(S, x, x) if case_digits(S, x) == "1" else RayTree(S, x, x, 0, 0.9, case=0)
    return out


def _random_path(S, x: str, rng: random.Random, budget: int) -> str:
    y = x
    for _ in range(rng.randint(0, 3)):
        if len(y) + 1 >= min(budget, S.size):
            break
        y += rng.choice("02") if S.is_coding(y) else "0"
    return y


# -- online construction ----------------------------------------------------------


@dataclass(frozen=True)
class _Need:
    word: str


@dataclass(frozen=True)
class _Wait:
    level: int


def subtree_construction(V, cons, rng: random.Random, skip: float):
    """Leftmost-first growth of ``T`` inside a live view, with seeded skips.

    Yields ``_Wait(k)`` until the host has level ``k``, ``_Need(w)`` for the
    least host coding node above ``w`` (sent back), and finished levels as
    ``(level_words, coding_position)`` pairs.
    """
    cons = list(cons)
    top: list[tuple[str, ...]] = []  # only the current top level is kept
    pos: list[int] = []
    slots = [V.root]  # host slots owning the stubs
    k = 0
    while True:
        while V.size <= k:
            yield _Wait(k)
        st = stubs(top, pos)
        i = V.coding_index(k)
        w = st[i]
        while True:
            c = yield _Need(w)
            if coding_ok(cons, c) and not (skip and rng.random() < skip):
                break
            ds = allowed_digits(V, c, cons)
            w = c + (ds[0] if len(ds) == 1 else rng.choice(ds))
        n = len(c)
        lv, top_slots = [], []
        for t, (y, sl) in enumerate(zip(st, slots)):
            if t == i:
                word, sl = c, V.locate(c)
            else:
                word, sl = _pad_slot(V, sl, y, n, cons)
            lv.append(word)
            top_slots.append(sl)
        lv = tuple(lv)
        top, pos = [lv], [i]
        slots = []
        for t, sl in enumerate(top_slots):
            slots.extend(sl.children if t == i else (sl.children[0] if sl.hit == n else sl,))
        k += 1
        yield (lv, i)


class SubtreeDemand:
    """Scheduler hook growing a subtree ``T`` of the host while it is generated."""

    def __init__(self, seed: int = 0, skip: float = 0.25, q: float = 0.6, constrained: bool = True):
        self.seed = seed
        self.skip = skip
        self.q = q
        self.constrained = constrained
        self.tree: CompactSubtree | None = None
        self.pending = None
        self.engine = None
        self.constraint: Constraint | None = None

    def attach(self, engine) -> None:
        self.engine = engine
        self.tree = CompactSubtree(engine)
        cons = []
        if self.constrained:
            self.constraint = RayTree(engine, "", "0", self.seed, self.q, case=0)
            cons.append(self.constraint)
        self._gen = subtree_construction(engine, cons, random.Random(self.seed), self.skip)
        self._run(next(self._gen))

    def _run(self, msg) -> None:
        while True:
            if isinstance(msg, tuple):
                self.tree.append_level(*msg)
                msg = next(self._gen)
            elif isinstance(msg, _Wait):
                if self.engine.size <= msg.level:
                    self.pending = msg
                    return
                msg = next(self._gen)
            else:
                ans = self.engine.least_coding_extension(msg.word)
                if ans is None:
                    self.pending = msg
                    return
                msg = self._gen.send(ans)

    def request(self):
        if isinstance(self.pending, _Need):
            return self.engine.locate(self.pending.word).spec()
        return None

    def observe(self, step: int) -> None:
        msg, self.pending = self.pending, None
        if isinstance(msg, _Wait):
            self._run(msg)
        elif isinstance(msg, _Need):
            ans = self.engine.least_coding_extension(msg.word)
            if ans is None:
                self.pending = msg
            else:
                self._run(self._gen.send(ans))

    def subtree(self, host) -> CompactSubtree:
        return self.tree.with_host(host)


class CompositeHook:
    """Several priority hooks sharing the demand steps in rotation."""

    def __init__(self, *hooks) -> None:
        self.hooks = hooks
        self._turn = 0

    def attach(self, engine) -> None:
        for h in self.hooks:
            h.attach(engine)

    def request(self):
        n = len(self.hooks)
        for k in range(n):
            h = self.hooks[(self._turn + k) % n]
            spec = h.request()
            if spec is not None:
                self._turn = (self._turn + k + 1) % n
                return spec
        return None

    def observe(self, step: int) -> None:
        for h in self.hooks:
            h.observe(step)


def subtree_host(depth: int, seed: int = 0, *, skip: float = 0.25, q: float = 0.6, antichain: bool = True) -> tuple[CodingTree, CompactSubtree]:
    """Generate a host together with a subtree isomorphic to it.

    The subtree is amalgamated online at ``d = 0`` under a seeded ray-tree
    constraint on the root's ray.  With ``antichain`` the almost-antichain
    demand shares the priority steps.
    """
    t = SubtreeDemand(seed, skip, q)
    hooks = (AntichainDemand(), t) if antichain else (t,)
    sched = GenericScheduler(seed=seed, priority=CompositeHook(*hooks))
    S = generate(depth, sched, policy="subtree")
    return S, t.subtree(S)


def subtree_host_for_levels(levels: int, seed: int = 0, **kw) -> tuple[CodingTree, CompactSubtree]:
    """Grow hosts until the online subtree holds ``levels`` almost-antichain levels."""
    S, T, _ = subtree_antichain(levels, seed, **kw)
    return S, T


def subtree_antichain(levels: int, seed: int = 0, **kw):
    """Like :func:`subtree_host_for_levels`, also returning the subtree's almost antichain."""
    from .antichain import build
    from .errors import DepthExhausted

    steps = 80 * levels + 100
    while True:
        S, T = subtree_host(steps, seed, **kw)
        try:
            return S, T, build(T, levels)
        except DepthExhausted:
            steps = steps * 3 // 2
